//! Seeded random instances: admissible `(A, ξ_0)` pairs and rational
//! functions. All draws come from a caller-supplied RNG so that a fixed
//! ChaCha seed reproduces the same instances everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{period, spectral_form, MobiusMatrix, Trajectory, MAX_TABULATED_PERIOD};
use crate::field::{Fp2Elem, FpElem, PrimeModulus, QuadExtension};
use crate::sums::RationalFunction;

const MAX_ATTEMPTS: usize = 100_000;

/// The RNG used by every shipped experiment.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Filters applied to sampled trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// Require `t >= min_period`.
    pub min_period: u64,
    /// Require `ξ_n` to avoid the pole for `n < min(t, window)`, so the
    /// first `min(t, window)` steps agree with the projective orbit.
    pub pole_free_window: Option<u64>,
    /// Require the characteristic polynomial to be irreducible (`Some(true)`)
    /// or split (`Some(false)`).
    pub irreducible: Option<bool>,
}

impl Default for Admissibility {
    fn default() -> Self {
        Admissibility {
            min_period: 1,
            pole_free_window: None,
            irreducible: None,
        }
    }
}

/// A uniform-ish `SL_2(F_p)` matrix with `c != 0` and trace `!= ±2`.
pub fn random_matrix<R: Rng + ?Sized>(p: PrimeModulus, rng: &mut R) -> MobiusMatrix {
    let q = p.get();
    loop {
        let a = rng.gen_range(1..q);
        let b = rng.gen_range(0..q);
        let c = rng.gen_range(1..q);
        // ad - bc = 1
        let d = p.mul(p.add(1, p.mul(b, c)), p.inv(a).expect("a != 0"));
        let trace = p.add(a, d);
        if trace == 2 || trace == q - 2 {
            continue;
        }
        return MobiusMatrix::from_u64(a, b, c, d, p).expect("constructed in SL_2 with c != 0");
    }
}

/// Draws `(A, ξ_0)` until the trajectory is non-degenerate (has a spectral
/// form) and satisfies `rules`. Returns `None` after a fixed number of
/// unsuccessful attempts.
pub fn random_admissible<R: Rng + ?Sized>(p: PrimeModulus, rules: Admissibility, rng: &mut R) -> Option<Trajectory> {
    for _ in 0..MAX_ATTEMPTS {
        let m = random_matrix(p, rng);
        let seed = FpElem::new(rng.gen_range(0..p.get()), p);
        let ext = m.extension().ok()?;
        if rules.irreducible.is_some_and(|want| want != ext.is_irreducible()) {
            continue;
        }
        if spectral_form(&m, seed).is_err() {
            continue;
        }
        let Ok(traj) = period(&m, seed) else { continue };
        if traj.period < rules.min_period || traj.period > MAX_TABULATED_PERIOD {
            continue;
        }
        if let Some(w) = rules.pole_free_window {
            let window = w.min(traj.period);
            if traj.pole_hit.is_some_and(|h| h < window) {
                continue;
            }
        }
        return Some(traj);
    }
    None
}

fn random_poly<C, R, F>(degree: usize, rng: &mut R, mut draw: F, is_zero: impl Fn(&C) -> bool) -> Vec<C>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> C,
{
    let mut poly: Vec<C> = (0..=degree).map(|_| draw(rng)).collect();
    while is_zero(poly.last().unwrap()) {
        *poly.last_mut().unwrap() = draw(rng);
    }
    poly
}

/// `h/g` over `F_p` with `deg g, deg h <= max_degree`, nonzero leading
/// coefficients, and `h/g` not constant.
pub fn random_rational_fp<R: Rng + ?Sized>(
    p: PrimeModulus,
    max_degree: usize,
    rng: &mut R,
) -> RationalFunction<FpElem> {
    assert!(max_degree >= 1);
    loop {
        let dh = rng.gen_range(0..=max_degree);
        let dg = rng.gen_range(0..=max_degree);
        let draw = |r: &mut R| FpElem::new(r.gen_range(0..p.get()), p);
        let h = random_poly(dh, rng, draw, |c| c.is_zero());
        let g = random_poly(dg, rng, draw, |c| c.is_zero());
        let rf = RationalFunction::new(h, g).expect("nonzero denominator");
        if !rf.is_constant() {
            return rf;
        }
    }
}

/// As [`random_rational_fp`] with coefficients in `F_p[Z]/(Z^2 - eZ + 1)`.
pub fn random_rational_fp2<R: Rng + ?Sized>(
    ext: QuadExtension,
    max_degree: usize,
    rng: &mut R,
) -> RationalFunction<Fp2Elem> {
    assert!(max_degree >= 1);
    let q = ext.modulus().get();
    loop {
        let dh = rng.gen_range(0..=max_degree);
        let dg = rng.gen_range(0..=max_degree);
        let draw = |r: &mut R| ext.elem(r.gen_range(0..q), r.gen_range(0..q));
        let h = random_poly(dh, rng, draw, |c| c.is_zero());
        let g = random_poly(dg, rng, draw, |c| c.is_zero());
        let rf = RationalFunction::new(h, g).expect("nonzero denominator");
        if !rf.is_constant() {
            return rf;
        }
    }
}

/// Smallest `e` in `[0, p)` with `Z^2 - eZ + 1` irreducible over `F_p`.
pub fn smallest_irreducible_trace(p: PrimeModulus) -> QuadExtension {
    (0..p.get())
        .filter_map(|e| QuadExtension::new(p, e).ok())
        .find(|k| k.is_irreducible())
        .expect("an irreducible Z^2 - eZ + 1 exists for odd p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_are_admissible() {
        let p = PrimeModulus::new(1009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = random_matrix(p, &mut rng);
            assert_eq!(m.matrix().det(), 1);
            assert_ne!(m.entries()[2], 0);
            assert!(m.extension().is_ok());
        }
    }

    #[test]
    fn admissible_rules_are_honoured() {
        let p = PrimeModulus::new(1009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rules = Admissibility {
            min_period: 32,
            pole_free_window: Some(u64::MAX),
            irreducible: Some(true),
        };
        for _ in 0..20 {
            let tr = random_admissible(p, rules, &mut rng).unwrap();
            assert!(tr.period >= 32);
            assert!(tr.pole_hit.is_none());
            assert!(tr.matrix.extension().unwrap().is_irreducible());
            assert!(spectral_form(&tr.matrix, tr.seed).is_ok());
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let p = PrimeModulus::new(101).unwrap();
        let draw = |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (random_matrix(p, &mut rng), random_rational_fp(p, 3, &mut rng))
        };
        assert_eq!(draw(42), draw(42));
    }

    #[test]
    fn rational_functions_are_nonconstant() {
        let p = PrimeModulus::new(5).unwrap();
        let ext = smallest_irreducible_trace(p);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let f = random_rational_fp(p, 3, &mut rng);
            assert!(!f.is_constant() && f.max_degree() <= 3);
            let g = random_rational_fp2(ext, 2, &mut rng);
            assert!(!g.is_constant() && g.max_degree() <= 2);
        }
    }
}
