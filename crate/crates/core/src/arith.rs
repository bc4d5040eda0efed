//! Arithmetic functions and characters: the Möbius function, additive and
//! multiplicative characters, and prime enumeration.

use std::f64::consts::FRAC_PI_2;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{discrete_index, FieldError, FpElem, GroupElem, PrimeModulus};

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("phase denominator is zero")]
    ZeroDenominator,
    #[error("limit {limit} outside [1, {max}]")]
    LimitOutOfRange { limit: u64, max: u64 },
    #[error("not a Möbius table file: {0}")]
    BadTableFile(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `e(r/den) = exp(2πi·r/den)` for `0 <= r < den`.
///
/// The quadrant is split off in exact integer arithmetic so that quarter
/// phases come out exact and the transcendental part sees an angle in
/// `[0, π/2)`.
#[inline]
pub fn unit_circle_reduced(r: u64, den: u64) -> Complex64 {
    debug_assert!(r < den);
    let scaled = 4 * r as u128;
    let quadrant = (scaled / den as u128) as u8;
    let rem = (scaled % den as u128) as f64;
    let (s, c) = (FRAC_PI_2 * rem / den as f64).sin_cos();
    match quadrant {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// `exp(2πi·num/den)` with the phase reduced modulo 1 before evaluation.
pub fn unit_circle(num: i64, den: u64) -> Result<Complex64, ArithError> {
    if den == 0 {
        return Err(ArithError::ZeroDenominator);
    }
    let r = (num as i128).rem_euclid(den as i128) as u64;
    Ok(unit_circle_reduced(r, den))
}

/// Dense table of `μ(1..=limit)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    limit: u64,
    // values[0] is a placeholder so that values[n] = μ(n)
    values: Vec<i8>,
}

const TABLE_MAGIC: &[u8; 8] = b"MOBIUSMU";
const TABLE_VERSION: u32 = 1;
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;
const SEGMENT: u64 = 1 << 16;

impl MobiusTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `μ(n)` for `1 <= n <= limit`.
    #[inline]
    pub fn get(&self, n: u64) -> i8 {
        self.values[n as usize]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.values[1..]
    }

    /// Flat binary layout: 8 magic bytes, little-endian `u32` version,
    /// little-endian `u64` limit, then `limit` signed bytes `μ(1), μ(2), ...`.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(TABLE_MAGIC)?;
        w.write_all(&TABLE_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        let bytes: Vec<u8> = self.as_slice().iter().map(|&m| m as u8).collect();
        w.write_all(&bytes)?;
        w.flush()
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, ArithError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != TABLE_MAGIC {
            return Err(ArithError::BadTableFile("magic bytes".into()));
        }
        let mut v = [0u8; 4];
        r.read_exact(&mut v)?;
        let version = u32::from_le_bytes(v);
        if version != TABLE_VERSION {
            return Err(ArithError::BadTableFile(format!("version {version}")));
        }
        let mut n = [0u8; 8];
        r.read_exact(&mut n)?;
        let limit = u64::from_le_bytes(n);
        if limit == 0 || limit > MAX_SIEVE_LIMIT {
            return Err(ArithError::BadTableFile(format!("limit {limit}")));
        }
        let mut bytes = vec![0u8; limit as usize + 1];
        r.read_exact(&mut bytes[1..])?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(ArithError::BadTableFile("trailing bytes".into()));
        }
        let values: Vec<i8> = bytes.into_iter().map(|b| b as i8).collect();
        if values[1..].iter().any(|m| !(-1..=1).contains(m)) || values[1] != 1 {
            return Err(ArithError::BadTableFile("values outside {-1, 0, 1}".into()));
        }
        Ok(MobiusTable { limit, values })
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self, ArithError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

/// Primes up to `n` by a plain sieve of Eratosthenes.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n as usize + 1];
    let mut out = Vec::new();
    for i in 2..=n as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// μ on `[lo, hi)` from the primes up to `sqrt(hi)`.
fn mobius_segment(lo: u64, hi: u64, primes: &[u64], out: &mut [i8]) {
    let len = (hi - lo) as usize;
    let mut rest: Vec<u64> = (lo..hi).collect();
    out[..len].fill(1);
    for &q in primes {
        if q >= hi {
            break;
        }
        let first = lo.div_ceil(q) * q;
        let mut m = first;
        while m < hi {
            let i = (m - lo) as usize;
            if out[i] != 0 {
                if (m / q) % q == 0 {
                    out[i] = 0;
                } else {
                    out[i] = -out[i];
                    rest[i] /= q;
                }
            }
            m += q;
        }
    }
    for i in 0..len {
        if out[i] != 0 && rest[i] > 1 {
            out[i] = -out[i];
        }
    }
}

/// Segmented sieve for `μ(1..=limit)`; segments run in parallel under the
/// `parallel` feature.
pub fn mobius_sieve(limit: u64) -> Result<MobiusTable, ArithError> {
    if limit == 0 || limit > MAX_SIEVE_LIMIT {
        return Err(ArithError::LimitOutOfRange {
            limit,
            max: MAX_SIEVE_LIMIT,
        });
    }
    let primes = small_primes(isqrt(limit) + 1);
    let mut values = vec![0i8; limit as usize + 1];
    let fill = |(k, chunk): (usize, &mut [i8])| {
        let lo = 1 + k as u64 * SEGMENT;
        let hi = lo + chunk.len() as u64;
        mobius_segment(lo, hi, &primes, chunk);
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values[1..].par_chunks_mut(SEGMENT as usize).enumerate().for_each(fill);
    }
    #[cfg(not(feature = "parallel"))]
    values[1..].chunks_mut(SEGMENT as usize).enumerate().for_each(fill);
    Ok(MobiusTable { limit, values })
}

/// μ(n) by trial division; the independent check for [`mobius_sieve`].
pub fn mobius_oracle(n: u64) -> i8 {
    assert!(n >= 1, "μ is defined on positive integers");
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Primes `q` with `lo <= q < hi`, by segmented sieve.
pub fn primes_in(lo: f64, hi: f64) -> Vec<u64> {
    assert!(hi <= MAX_SIEVE_LIMIT as f64 + 1.0, "primes_in: hi beyond 1e9");
    let start = lo.max(2.0).ceil() as u64;
    let end = hi.ceil().max(0.0) as u64; // exclusive
    if end <= start {
        return Vec::new();
    }
    let base = small_primes(isqrt(end) + 1);
    let mut out = Vec::new();
    let mut seg_lo = start;
    while seg_lo < end {
        let seg_hi = (seg_lo + SEGMENT).min(end);
        let mut is_prime = vec![true; (seg_hi - seg_lo) as usize];
        for &q in &base {
            if q * q >= seg_hi {
                break;
            }
            let mut m = (seg_lo.div_ceil(q) * q).max(q * q);
            while m < seg_hi {
                is_prime[(m - seg_lo) as usize] = false;
                m += q;
            }
        }
        out.extend(
            is_prime
                .iter()
                .enumerate()
                .filter(|&(_, &ok)| ok)
                .map(|(i, _)| seg_lo + i as u64),
        );
        seg_lo = seg_hi;
    }
    out
}

/// `ψ_u(x) = e(ux/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdditiveCharacter {
    modulus: PrimeModulus,
    u: u64,
}

impl AdditiveCharacter {
    pub fn new(u: FpElem) -> Self {
        AdditiveCharacter {
            modulus: u.modulus(),
            u: u.value(),
        }
    }

    pub fn from_u64(u: u64, modulus: PrimeModulus) -> Self {
        AdditiveCharacter {
            modulus,
            u: modulus.reduce(u),
        }
    }

    pub fn frequency(&self) -> u64 {
        self.u
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.u == 0
    }

    /// `ψ_{-u}`, the complex conjugate character.
    pub fn conj(&self) -> Self {
        AdditiveCharacter {
            modulus: self.modulus,
            u: self.modulus.neg(self.u),
        }
    }

    #[inline]
    pub fn eval_raw(&self, x: u64) -> Complex64 {
        unit_circle_reduced(self.modulus.mul(self.u, x), self.modulus.get())
    }

    pub fn eval(&self, x: FpElem) -> Complex64 {
        self.eval_raw(x.value())
    }
}

pub fn additive_char_eval(psi: &AdditiveCharacter, x: FpElem) -> Complex64 {
    psi.eval(x)
}

/// `χ(g^i) = e(h·i/order)` on the cyclic group generated by `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicativeCharacter<G> {
    pub generator: G,
    pub order: u64,
    pub multiplier: u64,
}

impl<G: GroupElem> MultiplicativeCharacter<G> {
    pub fn new(generator: G, order: u64, multiplier: u64) -> Self {
        MultiplicativeCharacter {
            generator,
            order,
            multiplier: multiplier % order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.multiplier == 0
    }

    /// Value at `g^index`.
    #[inline]
    pub fn eval_index(&self, index: u64) -> Complex64 {
        let r = ((self.multiplier as u128 * index as u128) % self.order as u128) as u64;
        unit_circle_reduced(r, self.order)
    }

    pub fn eval(&self, x: G) -> Result<Complex64, ArithError> {
        let index = discrete_index(x, self.generator, self.order)?;
        Ok(self.eval_index(index))
    }
}

pub fn mult_char_eval<G: GroupElem>(chi: &MultiplicativeCharacter<G>, x: G) -> Result<Complex64, ArithError> {
    chi.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primitive_root;

    const EPS: f64 = f64::EPSILON;

    #[test]
    fn unit_circle_values() {
        assert_eq!(unit_circle(0, 1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(unit_circle(1, 2).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_circle(1, 4).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(unit_circle(-1, 4).unwrap(), Complex64::new(0.0, -1.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = unit_circle(1, 8).unwrap();
        assert!((z - Complex64::new(h, h)).norm() < 1e-15);
        assert_eq!(unit_circle(17, 8).unwrap(), z);
        assert!(matches!(unit_circle(1, 0), Err(ArithError::ZeroDenominator)));
    }

    #[test]
    fn unit_circle_modulus_is_one() {
        for den in [3u64, 7, 1009, 1 << 40] {
            for r in [0, 1, den / 3, den / 2, den - 1] {
                let z = unit_circle_reduced(r, den);
                assert!((z.norm() - 1.0).abs() <= 4.0 * EPS, "{r}/{den}");
            }
        }
    }

    #[test]
    fn sieve_examples() {
        let t = mobius_sieve(100).unwrap();
        assert_eq!(t.get(1), 1);
        assert_eq!(t.get(4), 0);
        assert_eq!(t.get(30), -1);
        assert_eq!(t.get(97), -1);
        assert_eq!(t.get(6), 1);
        assert!(matches!(mobius_sieve(0), Err(ArithError::LimitOutOfRange { .. })));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(mobius_oracle(1), 1);
        assert_eq!(mobius_oracle(12), 0);
        assert_eq!(mobius_oracle(1009), -1);
        assert_eq!(mobius_oracle(30), -1);
    }

    #[test]
    fn sieve_matches_oracle_across_segments() {
        let n = 3 * SEGMENT + 17;
        let t = mobius_sieve(n).unwrap();
        for k in 1..=n {
            assert_eq!(t.get(k), mobius_oracle(k), "n = {k}");
        }
    }

    #[test]
    fn divisor_sum_identity() {
        let t = mobius_sieve(10_000).unwrap();
        let mut sums = vec![0i64; 10_001];
        for d in 1..=10_000u64 {
            for m in (d..=10_000).step_by(d as usize) {
                sums[m as usize] += t.get(d) as i64;
            }
        }
        assert_eq!(sums[1], 1);
        assert!(sums[2..].iter().all(|&s| s == 0));
    }

    #[test]
    fn table_file_round_trip_and_rejects_garbage() {
        let t = mobius_sieve(5000).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 + 8 + 5000);
        assert_eq!(MobiusTable::read_from(&buf[..]).unwrap(), t);
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(MobiusTable::read_from(&bad[..]).is_err());
        assert!(MobiusTable::read_from(&buf[..buf.len() - 1]).is_err());
        let mut extra = buf.clone();
        extra.push(0);
        assert!(MobiusTable::read_from(&extra[..]).is_err());
    }

    #[test]
    fn primes_in_examples() {
        assert_eq!(primes_in(8.0, 16.0), vec![11, 13]);
        assert_eq!(primes_in(2.0, 3.0), vec![2]);
        assert!(primes_in(24.0, 29.0).is_empty());
        assert_eq!(primes_in(10.5, 13.0), vec![11]);
        assert_eq!(primes_in(0.0, 10.0), vec![2, 3, 5, 7]);
        let from_sieve = primes_in(2.0, 100_001.0);
        let from_trial: Vec<u64> = (2..=100_000u64).filter(|&n| crate::field::is_prime(n)).collect();
        assert_eq!(from_sieve, from_trial);
        let window = primes_in(1e6, 1e6 + 3e5);
        assert!(window.iter().all(|&q| crate::field::is_prime(q)));
        assert_eq!(
            window.len(),
            (1_000_000..1_300_000u64).filter(|&n| crate::field::is_prime(n)).count()
        );
    }

    #[test]
    fn additive_character_properties() {
        let p = PrimeModulus::new(5).unwrap();
        let psi = AdditiveCharacter::from_u64(1, p);
        assert_eq!(psi.eval_raw(0), Complex64::new(1.0, 0.0));
        let z = psi.eval_raw(1);
        assert!((z.re - 0.30901699437494745).abs() < 1e-15);
        assert!((z.im - 0.9510565162951535).abs() < 1e-15);
        for p in (3..=101).filter(|&q| crate::field::is_prime(q)) {
            let p = PrimeModulus::new(p).unwrap();
            for u in 1..p.get() {
                let psi = AdditiveCharacter::from_u64(u, p);
                let total: Complex64 = (0..p.get()).map(|x| psi.eval_raw(x)).sum();
                assert!(total.norm() < 1e-9 * p.get() as f64);
                for (x, y) in [(1u64, 2u64), (p.get() - 1, 3)] {
                    let lhs = psi.eval_raw(p.add(x, y));
                    assert!((lhs - psi.eval_raw(x) * psi.eval_raw(y)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn multiplicative_character_properties() {
        let p = PrimeModulus::new(101).unwrap();
        let g = primitive_root(p);
        let chi = MultiplicativeCharacter::new(g, 100, 7);
        let one = FpElem::one(p);
        assert!((chi.eval(one).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let trivial = MultiplicativeCharacter::new(g, 100, 0);
        for x in 1..101 {
            let x = FpElem::new(x, p);
            assert_eq!(trivial.eval(x).unwrap(), Complex64::new(1.0, 0.0));
            for y in [2u64, 50, 99] {
                let y = FpElem::new(y, p);
                let lhs = chi.eval(x * y).unwrap();
                assert!((lhs - chi.eval(x).unwrap() * chi.eval(y).unwrap()).norm() < 1e-12);
            }
            assert!((chi.eval(x).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }
}
