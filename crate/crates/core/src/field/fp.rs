use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldError, PrimeModulus};

/// A residue class in `F_p`, always stored as its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: PrimeModulus,
}

impl FpElem {
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        FpElem {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: PrimeModulus) -> Self {
        FpElem {
            value: modulus.reduce_signed(value),
            modulus,
        }
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        FpElem { value: 0, modulus }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        FpElem { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_modulus(self, other: FpElem) -> Result<(), FieldError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch {
                left: self.modulus.get(),
                right: other.modulus.get(),
            })
        }
    }

    pub fn checked_add(self, rhs: FpElem) -> Result<FpElem, FieldError> {
        self.same_modulus(rhs)?;
        Ok(self.with(self.modulus.add(self.value, rhs.value)))
    }

    pub fn checked_sub(self, rhs: FpElem) -> Result<FpElem, FieldError> {
        self.same_modulus(rhs)?;
        Ok(self.with(self.modulus.sub(self.value, rhs.value)))
    }

    pub fn checked_mul(self, rhs: FpElem) -> Result<FpElem, FieldError> {
        self.same_modulus(rhs)?;
        Ok(self.with(self.modulus.mul(self.value, rhs.value)))
    }

    #[inline]
    fn with(self, value: u64) -> FpElem {
        FpElem {
            value,
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<FpElem, FieldError> {
        self.modulus
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(FieldError::ZeroInverse)
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(self, n: u64) -> FpElem {
        self.with(self.modulus.pow(self.value, n))
    }

    pub fn is_square(self) -> bool {
        self.modulus.is_square(self.value)
    }

    /// Tonelli–Shanks. Returns the smaller of the two roots, or `None` for
    /// non-residues.
    pub fn sqrt(self) -> Option<FpElem> {
        let p = self.modulus;
        let pv = p.get();
        let a = self.value;
        if a == 0 {
            return Some(self);
        }
        if !p.is_square(a) {
            return None;
        }
        let root = if pv % 4 == 3 {
            p.pow(a, (pv + 1) / 4)
        } else {
            let mut q = pv - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let z = (2..pv).find(|&z| !p.is_square(z)).expect("odd prime has a non-residue");
            let mut m = s;
            let mut c = p.pow(z, q);
            let mut t = p.pow(a, q);
            let mut r = p.pow(a, q.div_ceil(2));
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = p.mul(t2, t2);
                    i += 1;
                }
                let b = p.pow(c, 1u64 << (m - i - 1));
                m = i;
                c = p.mul(b, b);
                t = p.mul(t, c);
                r = p.mul(r, b);
            }
            r
        };
        let other = p.neg(root);
        Some(self.with(root.min(other)))
    }
}

impl Add for FpElem {
    type Output = FpElem;

    fn add(self, rhs: FpElem) -> FpElem {
        self.checked_add(rhs).expect("mixed moduli")
    }
}

impl Sub for FpElem {
    type Output = FpElem;

    fn sub(self, rhs: FpElem) -> FpElem {
        self.checked_sub(rhs).expect("mixed moduli")
    }
}

impl Mul for FpElem {
    type Output = FpElem;

    fn mul(self, rhs: FpElem) -> FpElem {
        self.checked_mul(rhs).expect("mixed moduli")
    }
}

impl Neg for FpElem {
    type Output = FpElem;

    fn neg(self) -> FpElem {
        self.with(self.modulus.neg(self.value))
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(v: u64, p: u64) -> FpElem {
        FpElem::new(v, PrimeModulus::new(p).unwrap())
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!((fp(3, 5) + fp(4, 5)).value(), 2);
        assert_eq!((fp(6, 11) * fp(8, 11)).value(), 4);
        assert_eq!((fp(0, 13) + fp(9, 13)), fp(9, 13));
        assert_eq!((fp(2, 7) - fp(5, 7)).value(), 4);
        assert_eq!((-fp(0, 7)).value(), 0);
        assert_eq!(FpElem::from_i64(-1, PrimeModulus::new(7).unwrap()).value(), 6);
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        assert_eq!(
            fp(1, 5).checked_add(fp(1, 7)),
            Err(FieldError::ModulusMismatch { left: 5, right: 7 })
        );
        assert!(fp(1, 5).checked_mul(fp(1, 7)).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(fp(1, 13).inv().unwrap().value(), 1);
        assert_eq!(fp(3, 7).inv().unwrap().value(), 5);
        assert_eq!(fp(100, 101).inv().unwrap().value(), 100);
        assert_eq!(fp(0, 7).inv(), Err(FieldError::ZeroInverse));
        for p in (3..=101).filter(|&p| super::super::is_prime(p)) {
            for a in 1..p {
                assert_eq!((fp(a, p) * fp(a, p).inv().unwrap()).value(), 1);
            }
        }
    }

    #[test]
    fn powers() {
        assert_eq!(fp(3, 7).pow(4).value(), 4);
        assert_eq!(fp(0, 7).pow(0).value(), 1);
        assert_eq!(fp(5, 7).pow(0).value(), 1);
        for a in 1..101 {
            assert_eq!(fp(a, 101).pow(100).value(), 1);
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(fp(0, 7).sqrt().unwrap().value(), 0);
        assert_eq!(fp(4, 7).sqrt().unwrap().value(), 2);
        assert_eq!(fp(3, 5).sqrt(), None);
        // p = 1 mod 8 exercises the full Tonelli–Shanks loop
        for p in [17u64, 41, 73, 97, 257, 65537] {
            for a in 0..p.min(2000) {
                match fp(a, p).sqrt() {
                    Some(r) => {
                        assert_eq!((r * r).value(), a);
                        assert!(r.value() <= p - r.value() || r.value() == 0);
                    }
                    None => assert!(!fp(a, p).is_square()),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_property_large_prime(a in 1u64..2_147_483_647) {
            let x = fp(a, 2_147_483_647);
            prop_assert_eq!((x * x.inv().unwrap()).value(), 1);
        }

        #[test]
        fn sqrt_of_square(a in 0u64..1_000_000_007) {
            let x = fp(a, 1_000_000_007);
            let r = (x * x).sqrt().unwrap();
            prop_assert!(r == x || r == -x);
        }
    }
}
