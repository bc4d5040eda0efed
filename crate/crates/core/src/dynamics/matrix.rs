use std::fmt;

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::field::{FpElem, PrimeModulus, QuadExtension};

/// A point of the projective line `P^1(F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(u64),
    Infinity,
}

/// A plain 2×2 matrix over `F_p`, with no invariants attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub modulus: PrimeModulus,
}

impl Matrix2 {
    pub fn identity(modulus: PrimeModulus) -> Self {
        Matrix2 {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
            modulus,
        }
    }

    pub fn det(&self) -> u64 {
        let p = self.modulus;
        p.sub(p.mul(self.a, self.d), p.mul(self.b, self.c))
    }

    pub fn trace(&self) -> u64 {
        self.modulus.add(self.a, self.d)
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let p = self.modulus;
        let dot = |x: u64, y: u64, z: u64, w: u64| p.add(p.mul(x, y), p.mul(z, w));
        Matrix2 {
            a: dot(self.a, rhs.a, self.b, rhs.c),
            b: dot(self.a, rhs.b, self.b, rhs.d),
            c: dot(self.c, rhs.a, self.d, rhs.c),
            d: dot(self.c, rhs.b, self.d, rhs.d),
            modulus: p,
        }
    }

    pub fn pow(&self, mut k: u64) -> Matrix2 {
        let mut result = Matrix2::identity(self.modulus);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Column-vector action `(u, v) ↦ (au + bv, cu + dv)`.
    #[inline]
    pub fn act(&self, u: u64, v: u64) -> (u64, u64) {
        let p = self.modulus;
        (
            p.add(p.mul(self.a, u), p.mul(self.b, v)),
            p.add(p.mul(self.c, u), p.mul(self.d, v)),
        )
    }

    /// The honest projective action, sending the pole to `∞` and `∞` to `a/c`.
    pub fn apply_projective(&self, x: ProjectivePoint) -> ProjectivePoint {
        let (u, v) = match x {
            ProjectivePoint::Finite(x) => self.act(x, 1),
            ProjectivePoint::Infinity => (self.a, self.c),
        };
        match self.modulus.inv(v) {
            Some(vi) => ProjectivePoint::Finite(self.modulus.mul(u, vi)),
            None => ProjectivePoint::Infinity,
        }
    }
}

/// An element of `SL_2(F_p)` with nonzero lower-left entry, acting on `F_p`
/// by `x ↦ (ax + b)/(cx + d)` and sending the pole `-d/c` to `a/c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[u64; 5]", try_from = "[u64; 5]")]
pub struct MobiusMatrix {
    m: Matrix2,
    pole: u64,
    pole_image: u64,
}

impl MobiusMatrix {
    /// Accepts the entries as-is; they must already have `ad - bc = 1`.
    pub fn new(a: FpElem, b: FpElem, c: FpElem, d: FpElem) -> Result<Self, DynamicsError> {
        let modulus = a.modulus();
        for x in [b, c, d] {
            a.checked_add(x)?;
        }
        Self::from_matrix(Matrix2 {
            a: a.value(),
            b: b.value(),
            c: c.value(),
            d: d.value(),
            modulus,
        })
    }

    pub fn from_u64(a: u64, b: u64, c: u64, d: u64, modulus: PrimeModulus) -> Result<Self, DynamicsError> {
        Self::from_matrix(Matrix2 {
            a: modulus.reduce(a),
            b: modulus.reduce(b),
            c: modulus.reduce(c),
            d: modulus.reduce(d),
            modulus,
        })
    }

    pub fn from_matrix(m: Matrix2) -> Result<Self, DynamicsError> {
        if m.c == 0 {
            return Err(DynamicsError::ZeroLowerLeft);
        }
        let det = m.det();
        if det != 1 {
            return Err(DynamicsError::NotSl2 { det });
        }
        let p = m.modulus;
        let c_inv = p.inv(m.c).expect("c != 0");
        Ok(MobiusMatrix {
            m,
            pole: p.mul(p.neg(m.d), c_inv),
            pole_image: p.mul(m.a, c_inv),
        })
    }

    pub fn matrix(&self) -> Matrix2 {
        self.m
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.m.modulus
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.m.a, self.m.b, self.m.c, self.m.d]
    }

    /// `e = a + d`.
    pub fn trace(&self) -> u64 {
        self.m.trace()
    }

    /// `F_p[Z]/(Z^2 - eZ + 1)` for the characteristic polynomial of the matrix.
    pub fn extension(&self) -> Result<QuadExtension, DynamicsError> {
        QuadExtension::new(self.modulus(), self.trace()).map_err(DynamicsError::from)
    }

    /// `-d/c`.
    pub fn pole(&self) -> u64 {
        self.pole
    }

    /// `a/c`, the image of the pole under the extended map.
    pub fn pole_image(&self) -> u64 {
        self.pole_image
    }

    #[inline]
    pub fn apply_raw(&self, x: u64) -> u64 {
        if x == self.pole {
            return self.pole_image;
        }
        let (u, v) = self.m.act(x, 1);
        let p = self.m.modulus;
        p.mul(u, p.inv(v).expect("only the pole has cx + d = 0"))
    }

    pub fn apply(&self, x: FpElem) -> FpElem {
        FpElem::new(self.apply_raw(x.value()), self.modulus())
    }

    /// `A^k` by square-and-multiply. A power with zero lower-left entry acts
    /// affinely and is returned inside [`DynamicsError::LinearPower`].
    pub fn power(&self, k: u64) -> Result<MobiusMatrix, DynamicsError> {
        let m = self.m.pow(k);
        if m.c == 0 {
            return Err(DynamicsError::LinearPower { k, power: m });
        }
        MobiusMatrix::from_matrix(m)
    }
}

impl From<MobiusMatrix> for [u64; 5] {
    fn from(m: MobiusMatrix) -> [u64; 5] {
        [m.m.a, m.m.b, m.m.c, m.m.d, m.m.modulus.get()]
    }
}

impl TryFrom<[u64; 5]> for MobiusMatrix {
    type Error = DynamicsError;

    fn try_from(v: [u64; 5]) -> Result<Self, Self::Error> {
        let p = PrimeModulus::new(v[4])?;
        MobiusMatrix::from_u64(v[0], v[1], v[2], v[3], p)
    }
}

impl fmt::Display for MobiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{}) mod {}",
            self.m.a, self.m.b, self.m.c, self.m.d, self.m.modulus
        )
    }
}

/// Rescales `(a, b, c, d)` by `λ` with `λ^2 = det^{-1}` so the result lies in
/// `SL_2(F_p)`. The induced map on `F_p` is unchanged. `λ` is the smaller
/// square root.
pub fn normalize_to_sl2(a: FpElem, b: FpElem, c: FpElem, d: FpElem) -> Result<MobiusMatrix, DynamicsError> {
    let det = a * d - b * c;
    if det.is_zero() {
        return Err(DynamicsError::SingularMatrix);
    }
    if c.is_zero() {
        return Err(DynamicsError::ZeroLowerLeft);
    }
    let lambda = det
        .inv()?
        .sqrt()
        .ok_or(DynamicsError::NonSquareDeterminant { det: det.value() })?;
    MobiusMatrix::new(lambda * a, lambda * b, lambda * c, lambda * d)
}

/// Like [`power`](MobiusMatrix::power) but named after its role: the matrix
/// whose trajectory is the `k`-decimation of `A`'s.
pub fn power_matrix(a: &MobiusMatrix, k: u64) -> Result<MobiusMatrix, DynamicsError> {
    a.power(k)
}
