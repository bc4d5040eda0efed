//! Orders, generators and discrete indices in the cyclic groups that show up
//! around `F_p` and `F_{p^2}`: `F_p^*`, `F_{p^2}^*`, and the norm-one subgroup.

use std::collections::HashMap;
use std::hash::Hash;

use super::prime::{factorize, factorize_product};
use super::{FieldError, Fp2Elem, FpElem, PrimeModulus, QuadExtension};

/// A unit in some finite multiplicative group whose exponent we can factor.
pub trait GroupElem: Copy + Eq + Hash {
    fn identity(self) -> Self;
    fn op(self, other: Self) -> Self;
    fn pow_u128(self, n: u128) -> Self;
    fn try_inverse(self) -> Result<Self, FieldError>;
    fn is_zero(self) -> bool;
    /// Factored order (or exponent) of a finite group containing `self`.
    fn ambient_order_factors(self) -> Vec<(u64, u32)>;
}

impl GroupElem for FpElem {
    fn identity(self) -> Self {
        FpElem::one(self.modulus())
    }

    fn op(self, other: Self) -> Self {
        self * other
    }

    fn pow_u128(self, n: u128) -> Self {
        let p = self.modulus().get() as u128;
        // a^(p-1) = 1 for units; keep 0^n semantics for n > 0
        if self.is_zero() {
            return if n == 0 { self.identity() } else { self };
        }
        self.pow((n % (p - 1)) as u64)
    }

    fn try_inverse(self) -> Result<Self, FieldError> {
        self.inv()
    }

    fn is_zero(self) -> bool {
        FpElem::is_zero(self)
    }

    fn ambient_order_factors(self) -> Vec<(u64, u32)> {
        factorize(self.modulus().get() - 1)
    }
}

impl GroupElem for Fp2Elem {
    fn identity(self) -> Self {
        self.ext().one()
    }

    fn op(self, other: Self) -> Self {
        self * other
    }

    fn pow_u128(self, n: u128) -> Self {
        Fp2Elem::pow_u128(self, n)
    }

    fn try_inverse(self) -> Result<Self, FieldError> {
        self.inv()
    }

    fn is_zero(self) -> bool {
        Fp2Elem::is_zero(self)
    }

    fn ambient_order_factors(self) -> Vec<(u64, u32)> {
        let ext = self.ext();
        let p = ext.modulus().get();
        if self.c1() == 0 || !ext.is_irreducible() {
            // F_p^*, or (F_p^*)^2 for a split algebra: exponent p - 1
            factorize(p - 1)
        } else if self.norm().value() == 1 {
            factorize(p + 1)
        } else {
            factorize_product(p - 1, p + 1)
        }
    }
}

/// Least `t >= 1` with `z^t = 1`, found by descending from the ambient group
/// order through its prime divisors.
pub fn mult_order<G: GroupElem>(z: G) -> Result<u128, FieldError> {
    if z.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let factors = z.ambient_order_factors();
    let mut order: u128 = factors.iter().map(|&(q, e)| (q as u128).pow(e)).product();
    let one = z.identity();
    if z.pow_u128(order) != one {
        // only possible for a non-unit of a split algebra
        return Err(FieldError::ZeroInverse);
    }
    for &(q, _) in &factors {
        let q = q as u128;
        while order.is_multiple_of(q) && z.pow_u128(order / q) == one {
            order /= q;
        }
    }
    Ok(order)
}

/// Smallest `g >= 2` generating `F_p^*`.
pub fn primitive_root(p: PrimeModulus) -> FpElem {
    let n = p.get() - 1;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
    (2..p.get())
        .map(|g| FpElem::new(g, p))
        .find(|g| primes.iter().all(|&q| g.pow(n / q).value() != 1))
        .expect("F_p^* is cyclic")
}

/// A generator of `{z in F_{p^2} : Nm(z) = 1}`, a cyclic group of order
/// `p + 1`. Candidates `z^(p-1)` are scanned with `z = c0 + Z`,
/// `c0 = 0, 1, 2, ...`, then `z = c0 + 2Z`, and so on.
pub fn norm_group_generator(ext: QuadExtension) -> Result<Fp2Elem, FieldError> {
    if !ext.is_irreducible() {
        return Err(FieldError::ReducibleExtension);
    }
    let p = ext.modulus().get();
    let order = p + 1;
    let primes: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    for c1 in 1..p {
        for c0 in 0..p {
            let w = ext.elem(c0, c1).pow(p - 1);
            if primes.iter().all(|&q| !w.pow(order / q).is_one()) {
                return Ok(w);
            }
        }
    }
    unreachable!("the norm-one group of F_{{p^2}} is cyclic")
}

/// Baby-step/giant-step: the unique `i` in `[0, order)` with `g^i = x`.
pub fn discrete_index<G: GroupElem>(x: G, g: G, order: u64) -> Result<u64, FieldError> {
    if order == 0 || x.is_zero() {
        return Err(FieldError::NotInGroup);
    }
    let m = (order as f64).sqrt().ceil() as u64;
    let m = m.max(1);
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = g.identity();
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = cur.op(g);
    }
    let giant = g.pow_u128(m as u128).try_inverse()?;
    let mut y = x;
    for i in 0..m {
        if let Some(&j) = table.get(&y) {
            let idx = i * m + j;
            if idx < order {
                return Ok(idx);
            }
        }
        y = y.op(giant);
    }
    Err(FieldError::NotInGroup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn orders_in_prime_field() {
        let p = pm(7);
        assert_eq!(mult_order(FpElem::one(p)).unwrap(), 1);
        assert_eq!(mult_order(-FpElem::one(p)).unwrap(), 2);
        assert_eq!(mult_order(FpElem::new(3, p)).unwrap(), 6);
        assert_eq!(mult_order(FpElem::new(2, p)).unwrap(), 3);
        assert_eq!(mult_order(FpElem::zero(p)), Err(FieldError::ZeroElement));
    }

    #[test]
    fn order_matches_brute_force() {
        for p in [3u64, 5, 11, 13, 101, 103] {
            let p = pm(p);
            for a in 1..p.get() {
                let x = FpElem::new(a, p);
                let brute = (1..).find(|&k| x.pow(k).value() == 1).unwrap() as u128;
                assert_eq!(mult_order(x).unwrap(), brute);
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(pm(7)).value(), 3);
        assert_eq!(primitive_root(pm(5)).value(), 2);
        assert_eq!(primitive_root(pm(3)).value(), 2);
        for p in [101u64, 1009, 10007, 65537] {
            let g = primitive_root(pm(p));
            assert_eq!(mult_order(g).unwrap(), (p - 1) as u128);
        }
    }

    #[test]
    fn norm_one_group_exhaustive_small() {
        let ext = QuadExtension::new(pm(3), 0).unwrap();
        assert!(ext.is_irreducible());
        let mut count = 0;
        for c0 in 0..3 {
            for c1 in 0..3 {
                if ext.elem(c0, c1).norm().value() == 1 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 4);
        let g = norm_group_generator(ext).unwrap();
        assert_eq!(g.norm().value(), 1);
        assert_eq!(mult_order(g).unwrap(), 4);
    }

    #[test]
    fn norm_one_generator_enumerates_subgroup() {
        let ext = QuadExtension::new(pm(13), 3).unwrap();
        assert!(ext.is_irreducible());
        let g = norm_group_generator(ext).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut x = ext.one();
        for _ in 0..14 {
            seen.insert(x);
            x = x * g;
        }
        assert_eq!(seen.len(), 14);
        let brute: Vec<_> = (0..13)
            .flat_map(|a| (0..13).map(move |b| (a, b)))
            .map(|(a, b)| ext.elem(a, b))
            .filter(|z| z.norm().value() == 1)
            .collect();
        assert_eq!(brute.len(), 14);
        assert!(brute.iter().all(|z| seen.contains(z)));
        for p in [101u64, 199, 1019] {
            let p = pm(p);
            let e = (0..p.get())
                .find(|&e| QuadExtension::new(p, e).is_ok_and(|k| k.is_irreducible()))
                .unwrap();
            let k = QuadExtension::new(p, e).unwrap();
            let g = norm_group_generator(k).unwrap();
            assert_eq!(mult_order(g).unwrap(), (p.get() + 1) as u128);
        }
    }

    #[test]
    fn reducible_extension_has_no_norm_generator() {
        let ext = QuadExtension::new(pm(5), 0).unwrap();
        assert_eq!(norm_group_generator(ext), Err(FieldError::ReducibleExtension));
    }

    #[test]
    fn extension_orders_divide_ambient() {
        let ext = QuadExtension::new(pm(101), 1).unwrap();
        assert!(ext.is_irreducible());
        for (a, b) in [(1u64, 1u64), (2, 5), (0, 1), (7, 0)] {
            let z = ext.elem(a, b);
            let t = mult_order(z).unwrap();
            assert!((101u128 * 101 - 1).is_multiple_of(t));
            assert!(z.pow_u128(t).is_one());
        }
    }

    #[test]
    fn discrete_index_examples() {
        let p = pm(7);
        let g = FpElem::new(3, p);
        assert_eq!(discrete_index(FpElem::one(p), g, 6).unwrap(), 0);
        assert_eq!(discrete_index(g, g, 6).unwrap(), 1);
        assert_eq!(discrete_index(FpElem::new(4, p), g, 6).unwrap(), 4);
        // 2 generates {1, 2, 4}; 3 is outside it
        let h = FpElem::new(2, p);
        assert_eq!(discrete_index(FpElem::new(3, p), h, 3), Err(FieldError::NotInGroup));
    }

    #[test]
    fn discrete_index_inverts_exponentiation() {
        let p = pm(1_000_003);
        let g = primitive_root(p);
        for i in [0u64, 1, 2, 999, 123_456, 1_000_001] {
            assert_eq!(discrete_index(g.pow(i), g, 1_000_002).unwrap(), i);
        }
        let ext = QuadExtension::new(pm(1019), 1).unwrap();
        let h = norm_group_generator(ext).unwrap();
        for i in [0u64, 5, 511, 1019] {
            assert_eq!(discrete_index(h.pow(i), h, 1020).unwrap(), i);
        }
    }
}
