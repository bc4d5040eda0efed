//! Closed form `ξ_n = α + β/(ϑ^{2n} + γ)` of a trajectory.
//!
//! With `ϑ, ϑ^{-1}` the roots of `Z^2 - eZ + 1` we write
//! `u_n = Pϑ^n + Qϑ^{-n}` and `v_n = Rϑ^n + Sϑ^{-n}`; each pair of
//! coefficients is the solution of a 2×2 Vandermonde system in the first two
//! terms. Dividing through by `Rϑ^{-n}` gives `α = P/R`, `γ = S/R` and
//! `β = (QR - PS)/R^2`.

use super::{DynamicsError, MobiusMatrix, ProjectivePoint, RecurrencePair};
use crate::field::{char_poly_roots, Fp2Elem, FpElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralForm {
    pub alpha: Fp2Elem,
    pub beta: Fp2Elem,
    pub gamma: Fp2Elem,
    pub theta: Fp2Elem,
}

/// Solves `x + y = w0`, `xϑ + yϑ^{-1} = w1`.
fn split_on_roots(w0: Fp2Elem, w1: Fp2Elem, theta: Fp2Elem, theta_inv: Fp2Elem) -> (Fp2Elem, Fp2Elem) {
    let gap = (theta - theta_inv).inv().expect("distinct roots");
    let x = (w1 - w0 * theta_inv) * gap;
    (x, w0 - x)
}

pub fn spectral_form(matrix: &MobiusMatrix, seed: FpElem) -> Result<SpectralForm, DynamicsError> {
    let ext = matrix.extension()?;
    let (theta, theta_inv) = char_poly_roots(ext);
    let pair = RecurrencePair::new(matrix, seed);
    let lift = |x: u64| ext.elem(x, 0);
    let (p_coef, q_coef) = split_on_roots(lift(pair.u0), lift(pair.u1), theta, theta_inv);
    let (r_coef, s_coef) = split_on_roots(lift(pair.v0), lift(pair.v1), theta, theta_inv);
    // R = 0 or β = 0 exactly when (ξ_0, 1) is an eigenvector, i.e. ξ_0 is a
    // fixed point and the trajectory is constant
    let r_inv = r_coef.inv().map_err(|_| DynamicsError::DegenerateSpectral)?;
    let beta = (q_coef * r_coef - p_coef * s_coef) * r_inv * r_inv;
    if beta.is_zero() {
        return Err(DynamicsError::DegenerateSpectral);
    }
    Ok(SpectralForm {
        alpha: p_coef * r_inv,
        beta,
        gamma: s_coef * r_inv,
        theta,
    })
}

impl SpectralForm {
    /// Point of the projective orbit at step `n`; `∞` where `ϑ^{2n} = -γ`.
    pub fn eval_projective(&self, n: u64) -> ProjectivePoint {
        let denom = (self.theta * self.theta).pow(n) + self.gamma;
        match denom.inv() {
            Ok(di) => {
                let x = self.alpha + self.beta * di;
                let x = x.to_fp().expect("spectral value left F_p");
                ProjectivePoint::Finite(x.value())
            }
            Err(_) => ProjectivePoint::Infinity,
        }
    }

    pub fn eval(&self, n: u64) -> Result<FpElem, DynamicsError> {
        let p = self.theta.ext().modulus();
        match self.eval_projective(n) {
            ProjectivePoint::Finite(x) => Ok(FpElem::new(x, p)),
            ProjectivePoint::Infinity => Err(DynamicsError::SpectralPole { n }),
        }
    }
}

/// `ξ_n` from the closed form.
pub fn eval_spectral(form: &SpectralForm, n: u64) -> Result<FpElem, DynamicsError> {
    form.eval(n)
}
