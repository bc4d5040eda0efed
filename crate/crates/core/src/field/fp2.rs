use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldError, FpElem, PrimeModulus};

/// The algebra `F_p[Z]/(Z^2 - eZ + 1)`.
///
/// When the defining polynomial is irreducible this is `F_{p^2}` and the class
/// of `Z` is a root of it. When it splits the algebra is not a field; elements
/// with `c1 = 0` still form a copy of `F_p`, which is all the dynamics layer
/// ever needs in that case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtension {
    modulus: PrimeModulus,
    e: u64,
}

impl QuadExtension {
    /// Fails with `RepeatedRoot` when `e^2 - 4 = 0`, i.e. `e = ±2`.
    pub fn new(modulus: PrimeModulus, e: u64) -> Result<Self, FieldError> {
        let e = modulus.reduce(e);
        let ext = QuadExtension { modulus, e };
        if ext.discriminant() == 0 {
            return Err(FieldError::RepeatedRoot);
        }
        Ok(ext)
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    /// Middle coefficient: the polynomial is `Z^2 - eZ + 1`.
    pub fn e(self) -> u64 {
        self.e
    }

    pub fn discriminant(self) -> u64 {
        let p = self.modulus;
        p.sub(p.mul(self.e, self.e), 4 % p.get())
    }

    pub fn is_irreducible(self) -> bool {
        !self.modulus.is_square(self.discriminant())
    }

    /// Evaluates `Z^2 - eZ + 1` at an element of the algebra.
    pub fn min_poly_at(self, z: Fp2Elem) -> Fp2Elem {
        z * z - z.scale(self.e) + self.one()
    }

    pub fn elem(self, c0: u64, c1: u64) -> Fp2Elem {
        Fp2Elem {
            c0: self.modulus.reduce(c0),
            c1: self.modulus.reduce(c1),
            ext: self,
        }
    }

    pub fn embed(self, x: FpElem) -> Fp2Elem {
        debug_assert_eq!(x.modulus(), self.modulus);
        self.elem(x.value(), 0)
    }

    pub fn zero(self) -> Fp2Elem {
        self.elem(0, 0)
    }

    pub fn one(self) -> Fp2Elem {
        self.elem(1, 0)
    }

    /// The class of `Z`.
    pub fn generator_z(self) -> Fp2Elem {
        self.elem(0, 1)
    }

    /// Number of elements of the algebra (`p^2`), when it fits in a `u64`.
    pub fn size(self) -> Option<u64> {
        self.modulus.get().checked_mul(self.modulus.get())
    }
}

/// `c0 + c1·Z` in a [`QuadExtension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2Elem {
    c0: u64,
    c1: u64,
    ext: QuadExtension,
}

impl Fp2Elem {
    pub fn c0(self) -> u64 {
        self.c0
    }

    pub fn c1(self) -> u64 {
        self.c1
    }

    pub fn ext(self) -> QuadExtension {
        self.ext
    }

    pub fn is_zero(self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn is_one(self) -> bool {
        self.c0 == 1 && self.c1 == 0
    }

    /// `Some` when the element lies in the prime field.
    pub fn to_fp(self) -> Option<FpElem> {
        (self.c1 == 0).then(|| FpElem::new(self.c0, self.ext.modulus))
    }

    fn check(self, other: Fp2Elem) -> Result<(), FieldError> {
        if self.ext == other.ext {
            Ok(())
        } else {
            Err(FieldError::ExtensionMismatch)
        }
    }

    pub fn checked_add(self, rhs: Fp2Elem) -> Result<Fp2Elem, FieldError> {
        self.check(rhs)?;
        let p = self.ext.modulus;
        Ok(Fp2Elem {
            c0: p.add(self.c0, rhs.c0),
            c1: p.add(self.c1, rhs.c1),
            ext: self.ext,
        })
    }

    pub fn checked_sub(self, rhs: Fp2Elem) -> Result<Fp2Elem, FieldError> {
        self.check(rhs)?;
        Ok(self.add_unchecked(-rhs))
    }

    fn add_unchecked(self, rhs: Fp2Elem) -> Fp2Elem {
        let p = self.ext.modulus;
        Fp2Elem {
            c0: p.add(self.c0, rhs.c0),
            c1: p.add(self.c1, rhs.c1),
            ext: self.ext,
        }
    }

    /// Multiplication with the reduction `Z^2 = eZ - 1`.
    pub fn checked_mul(self, rhs: Fp2Elem) -> Result<Fp2Elem, FieldError> {
        self.check(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    #[inline]
    fn mul_unchecked(self, rhs: Fp2Elem) -> Fp2Elem {
        let p = self.ext.modulus;
        let hi = p.mul(self.c1, rhs.c1);
        let c0 = p.sub(p.mul(self.c0, rhs.c0), hi);
        let cross = p.add(p.mul(self.c0, rhs.c1), p.mul(self.c1, rhs.c0));
        let c1 = p.add(cross, p.mul(self.ext.e, hi));
        Fp2Elem { c0, c1, ext: self.ext }
    }

    pub fn scale(self, k: u64) -> Fp2Elem {
        let p = self.ext.modulus;
        Fp2Elem {
            c0: p.mul(self.c0, k),
            c1: p.mul(self.c1, k),
            ext: self.ext,
        }
    }

    /// The algebra involution swapping the two roots of the defining
    /// polynomial: `Z ↦ e - Z`. Equals the Frobenius `z ↦ z^p` on `F_{p^2}`.
    pub fn conj(self) -> Fp2Elem {
        let p = self.ext.modulus;
        Fp2Elem {
            c0: p.add(self.c0, p.mul(self.ext.e, self.c1)),
            c1: p.neg(self.c1),
            ext: self.ext,
        }
    }

    /// `Tr(z) = z + z^p = 2c0 + e·c1`.
    pub fn trace(self) -> FpElem {
        let p = self.ext.modulus;
        let v = p.add(p.add(self.c0, self.c0), p.mul(self.ext.e, self.c1));
        FpElem::new(v, p)
    }

    /// `Nm(z) = z·z^p = c0^2 + e·c0·c1 + c1^2`.
    pub fn norm(self) -> FpElem {
        let p = self.ext.modulus;
        let v = p.add(
            p.add(p.mul(self.c0, self.c0), p.mul(self.ext.e, p.mul(self.c0, self.c1))),
            p.mul(self.c1, self.c1),
        );
        FpElem::new(v, p)
    }

    /// `conj(z) / Nm(z)`; fails on zero and on zero divisors of a split algebra.
    pub fn inv(self) -> Result<Fp2Elem, FieldError> {
        let n = self.norm().inv().map_err(|_| FieldError::ZeroInverse)?;
        Ok(self.conj().scale(n.value()))
    }

    pub fn pow(self, mut n: u64) -> Fp2Elem {
        let mut result = self.ext.one();
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            n >>= 1;
        }
        result
    }

    pub fn pow_u128(self, mut n: u128) -> Fp2Elem {
        let mut result = self.ext.one();
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            n >>= 1;
        }
        result
    }
}

impl Add for Fp2Elem {
    type Output = Fp2Elem;

    fn add(self, rhs: Fp2Elem) -> Fp2Elem {
        self.checked_add(rhs).expect("mixed extensions")
    }
}

impl Sub for Fp2Elem {
    type Output = Fp2Elem;

    fn sub(self, rhs: Fp2Elem) -> Fp2Elem {
        self.checked_sub(rhs).expect("mixed extensions")
    }
}

impl Mul for Fp2Elem {
    type Output = Fp2Elem;

    fn mul(self, rhs: Fp2Elem) -> Fp2Elem {
        self.checked_mul(rhs).expect("mixed extensions")
    }
}

impl Neg for Fp2Elem {
    type Output = Fp2Elem;

    fn neg(self) -> Fp2Elem {
        let p = self.ext.modulus;
        Fp2Elem {
            c0: p.neg(self.c0),
            c1: p.neg(self.c1),
            ext: self.ext,
        }
    }
}

impl fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}Z", self.c0, self.c1)
        }
    }
}

/// The roots `(ϑ, ϑ^{-1})` of `Z^2 - eZ + 1`.
///
/// Split case: both roots have `c1 = 0`. Irreducible case: the roots are `Z`
/// and `e - Z`. `ϑ` is the root with the smaller `(c1, c0)` pair.
pub fn char_poly_roots(ext: QuadExtension) -> (Fp2Elem, Fp2Elem) {
    let p = ext.modulus;
    let disc = FpElem::new(ext.discriminant(), p);
    let (r1, r2) = match disc.sqrt() {
        Some(s) => {
            let half = p.inv(2).expect("p is odd");
            let a = p.mul(p.add(ext.e, s.value()), half);
            let b = p.mul(p.sub(ext.e, s.value()), half);
            (ext.elem(a, 0), ext.elem(b, 0))
        }
        None => {
            let z = ext.generator_z();
            (z, z.conj())
        }
    };
    if (r1.c1, r1.c0) <= (r2.c1, r2.c0) {
        (r1, r2)
    } else {
        (r2, r1)
    }
}
