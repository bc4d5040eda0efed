use serde::{Deserialize, Serialize};
use std::fmt;

use super::FieldError;

/// An odd prime modulus `3 <= p < 2^63`, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub const MAX: u64 = 1 << 63;

    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(3..Self::MAX).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Reduces a signed integer to its canonical residue.
    #[inline]
    pub fn reduce_signed(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.0 {
            s.wrapping_sub(self.0)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.0 - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    /// Inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 - 2))
        }
    }

    /// Euler's criterion. Zero counts as a square.
    pub fn is_square(self, a: u64) -> bool {
        let a = a % self.0;
        a == 0 || self.pow(a, (self.0 - 1) / 2) == 1
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = FieldError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization into `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |q: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(q) {
            *n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut q = 5u64;
    while q.saturating_mul(q) <= n {
        push(q, &mut n);
        push(q + 2, &mut n);
        q += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factorization of a product of two factors, merged.
pub(crate) fn factorize_product(a: u64, b: u64) -> Vec<(u64, u32)> {
    let mut merged = factorize(a);
    for (q, e) in factorize(b) {
        match merged.iter_mut().find(|(r, _)| *r == q) {
            Some(entry) => entry.1 += e,
            None => merged.push((q, e)),
        }
    }
    merged.sort_unstable();
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_prime(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(9_223_372_036_854_775_783));
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(5).is_ok());
        assert_eq!(PrimeModulus::new(2), Err(FieldError::ModulusOutOfRange(2)));
        assert_eq!(PrimeModulus::new(15), Err(FieldError::NotPrime(15)));
        assert_eq!(PrimeModulus::new(1 << 63), Err(FieldError::ModulusOutOfRange(1 << 63)));
    }

    #[test]
    fn factorization_round_trips() {
        for n in 2..5000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(q, e)| q.pow(e)).product::<u64>(), n);
            assert!(f.iter().all(|&(q, _)| trial_prime(q)));
        }
        assert_eq!(factorize_product(6, 10), vec![(2, 2), (3, 1), (5, 1)]);
    }

    #[test]
    fn wide_moduli_do_not_overflow() {
        let p = PrimeModulus::new(9_223_372_036_854_775_783).unwrap();
        let a = p.get() - 1;
        assert_eq!(p.mul(a, a), 1);
        assert_eq!(p.add(a, a), p.get() - 2);
        assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
    }
}
