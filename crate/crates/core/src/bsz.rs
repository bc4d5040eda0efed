//! Prime blocks, sieve sets and block sums of the Bourgain–Sarnak–Ziegler
//! / Kátai orthogonality criterion, evaluated on concrete instances.
//!
//! With `R_j = (1+α)^j` and `M_j = N/R_{j+1}`, block `j` holds the primes
//! `P_j = [R_j, R_{j+1})` and the sieve set `Q_j` of `m <= M_j` free of prime
//! factors from `P_{j_0} ∪ ... ∪ P_j`. The products `mr` (`r in P_j`,
//! `m in Q_j`) are pairwise distinct integers in `[1, N]`, and
//! `W_j = Σ_{m in Q_j} |Σ_{r in P_j} ν(r) F(mr)|`.
//!
//! Only blocks with `R_{j+1} <= N` are materialised: beyond that `M_j < 1`,
//! `Q_j` is empty and the block contributes nothing.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::primes_in;
use crate::reduce::{sum_range, sum_range_real, SumAccumulator};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_PRIME_RANGE: f64 = 1e9;
pub const MAX_SIEVE_RANGE: u64 = 100_000_000;
const HANDLE_SAMPLES: u64 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BszError {
    #[error("alpha = {0} outside (0, 1/2)")]
    AlphaOutOfRange(f64),
    #[error("N must be positive")]
    EmptyRange,
    #[error("prime blocks would reach {bound:.3e}, beyond {max:.0e}")]
    RangeOverflow { bound: f64, max: f64 },
    #[error("sieve sets need m up to {needed}, beyond {max}")]
    MemoryGuard { needed: u64, max: u64 },
    #[error("product {product} produced twice")]
    CollisionFound { product: u64 },
    #[error("product {product} exceeds N = {n}")]
    ProductOutOfRange { product: u64, n: u64 },
    #[error("|{which}({n})| = {abs} exceeds 1")]
    HandleOutOfRange { which: &'static str, n: u64, abs: f64 },
}

/// The block schedule for one `(α, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BszParams {
    pub alpha: f64,
    pub n: u64,
    /// `(log 1/α)^3 / α`.
    pub j0: f64,
    /// `j0^2`.
    pub j1: f64,
    /// First and last integer `j` of the schedule.
    pub j_first: u64,
    pub j_last: u64,
}

impl BszParams {
    /// `R_j = (1+α)^j`.
    pub fn r(&self, j: u64) -> f64 {
        (1.0 + self.alpha).powf(j as f64)
    }

    /// `M_j = N / R_{j+1}`.
    pub fn m(&self, j: u64) -> f64 {
        self.n as f64 / self.r(j + 1)
    }

    /// Last scheduled `j` whose block can contribute (`R_{j+1} <= N`), if any.
    pub fn j_reach(&self) -> Option<u64> {
        let mut last = None;
        let mut j = self.j_first;
        while j <= self.j_last && self.r(j + 1) <= self.n as f64 {
            last = Some(j);
            j += 1;
        }
        last
    }
}

/// Schedule with `j` over the integers of `[j0, j1]`.
pub fn make_params(alpha: f64, n: u64) -> Result<BszParams, BszError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(BszError::AlphaOutOfRange(alpha));
    }
    if n == 0 {
        return Err(BszError::EmptyRange);
    }
    let j0 = (1.0 / alpha).ln().powi(3) / alpha;
    let j1 = j0 * j0;
    Ok(BszParams {
        alpha,
        n,
        j0,
        j1,
        j_first: j0.ceil() as u64,
        j_last: j1.floor() as u64,
    })
}

/// A schedule with an explicit `j` range and any `α > 0`, for toy instances
/// outside the admissible parameter range.
pub fn custom_params(alpha: f64, n: u64, j_first: u64, j_last: u64) -> Result<BszParams, BszError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(BszError::AlphaOutOfRange(alpha));
    }
    if n == 0 {
        return Err(BszError::EmptyRange);
    }
    Ok(BszParams {
        alpha,
        n,
        j0: j_first as f64,
        j1: j_last as f64,
        j_first,
        j_last,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBlock {
    pub j: u64,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveSet {
    pub j: u64,
    pub members: Vec<u64>,
}

/// `P_j` for every contributing `j`, ascending.
pub fn prime_blocks(params: &BszParams) -> Result<Vec<PrimeBlock>, BszError> {
    let Some(reach) = params.j_reach() else {
        return Ok(Vec::new());
    };
    let hi = params.r(reach + 1);
    if hi > MAX_PRIME_RANGE {
        return Err(BszError::RangeOverflow {
            bound: hi,
            max: MAX_PRIME_RANGE,
        });
    }
    let primes = primes_in(params.r(params.j_first), hi);
    let mut blocks = Vec::with_capacity((reach - params.j_first + 1) as usize);
    let mut start = 0;
    for j in params.j_first..=reach {
        let upper = params.r(j + 1);
        let len = primes[start..].partition_point(|&q| (q as f64) < upper);
        blocks.push(PrimeBlock {
            j,
            primes: primes[start..start + len].to_vec(),
        });
        start += len;
    }
    Ok(blocks)
}

/// Index of the first block containing a prime factor of each `m <= limit`
/// (`u64::MAX` when there is none).
fn first_block_index(limit: u64, blocks: &[PrimeBlock]) -> Vec<u64> {
    let mut first = vec![u64::MAX; limit as usize + 1];
    // blocks ascend in j, so the first write for each m is its least j
    for block in blocks {
        for &r in &block.primes {
            let mut k = r;
            while k <= limit {
                if first[k as usize] == u64::MAX {
                    first[k as usize] = block.j;
                }
                k += r;
            }
        }
    }
    first
}

/// `Q_j` for every block, with cumulative exclusion of `P_{j_first..=j}`.
pub fn sieve_sets(params: &BszParams, blocks: &[PrimeBlock]) -> Result<Vec<SieveSet>, BszError> {
    let Some(first) = blocks.first() else {
        return Ok(Vec::new());
    };
    let limit = params.m(first.j).floor() as u64;
    if limit > MAX_SIEVE_RANGE {
        return Err(BszError::MemoryGuard {
            needed: limit,
            max: MAX_SIEVE_RANGE,
        });
    }
    let first_hit = first_block_index(limit, blocks);
    Ok(blocks
        .iter()
        .map(|b| {
            let mj = (params.m(b.j).floor() as u64).min(limit);
            SieveSet {
                j: b.j,
                members: (1..=mj).filter(|&m| first_hit[m as usize] > b.j).collect(),
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductsCheck {
    /// `Σ #P_j · #Q_j`.
    pub pairs: u64,
    pub n: u64,
    pub collisions: u64,
}

/// Hashes every product `mr` and checks distinctness and `mr <= N`.
pub fn distinct_products_check(blocks: &[PrimeBlock], sets: &[SieveSet], n: u64) -> Result<ProductsCheck, BszError> {
    let pairs: u64 = blocks
        .iter()
        .zip(sets)
        .map(|(b, s)| b.primes.len() as u64 * s.members.len() as u64)
        .sum();
    let mut seen = HashSet::with_capacity(pairs as usize);
    for (b, s) in blocks.iter().zip(sets) {
        debug_assert_eq!(b.j, s.j);
        for &m in &s.members {
            for &r in &b.primes {
                let product = m * r;
                if product > n {
                    return Err(BszError::ProductOutOfRange { product, n });
                }
                if !seen.insert(product) {
                    return Err(BszError::CollisionFound { product });
                }
            }
        }
    }
    assert!(pairs <= n);
    Ok(ProductsCheck {
        pairs,
        n,
        collisions: 0,
    })
}

fn check_handle<H: Fn(u64) -> Complex64>(which: &'static str, h: &H) -> Result<(), BszError> {
    for n in 1..=HANDLE_SAMPLES {
        let abs = h(n).norm();
        if abs > 1.0 + 1e-12 {
            return Err(BszError::HandleOutOfRange { which, n, abs });
        }
    }
    Ok(())
}

fn block_sum<V, F>(nu: &V, f: &F, block: &PrimeBlock, set: &SieveSet) -> f64
where
    V: Fn(u64) -> Complex64 + Sync,
    F: Fn(u64) -> Complex64 + Sync,
{
    let members = &set.members;
    sum_range_real(0, members.len() as u64, |i| {
        let m = members[i as usize];
        let mut inner = SumAccumulator::new();
        for &r in &block.primes {
            inner.add(nu(r) * f(m * r));
        }
        inner.value().norm()
    })
}

/// `W_j` for every block; `ν` and `F` must be pure and bounded by 1.
pub fn wj_sums<V, F>(nu: &V, f: &F, blocks: &[PrimeBlock], sets: &[SieveSet]) -> Result<Vec<f64>, BszError>
where
    V: Fn(u64) -> Complex64 + Sync,
    F: Fn(u64) -> Complex64 + Sync,
{
    check_handle("ν", nu)?;
    check_handle("F", f)?;
    let pairs: Vec<_> = blocks.iter().zip(sets).collect();
    #[cfg(feature = "parallel")]
    let w = {
        use rayon::prelude::*;
        pairs.par_iter().map(|(b, s)| block_sum(nu, f, b, s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let w = pairs.iter().map(|(b, s)| block_sum(nu, f, b, s)).collect();
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    pub j: u64,
    pub r_j: f64,
    pub m_j: f64,
    pub primes: u64,
    pub sieve: u64,
    pub w_j: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BszDecomposition {
    pub schema_version: u32,
    pub params: BszParams,
    /// Period of `F`, carried for reference.
    pub period: u64,
    /// Last `j` with a non-empty reach, if any block contributes.
    pub j_reach: Option<u64>,
    pub rows: Vec<BlockRow>,
    pub lhs: Complex64,
    pub lhs_abs: f64,
    pub sum_w: f64,
    pub alpha_n: f64,
    /// `|LHS| / (Σ W_j + αN)`.
    pub quotient: f64,
    pub sum_primes: u64,
    pub products: ProductsCheck,
    #[serde(skip)]
    pub blocks: Vec<PrimeBlock>,
    #[serde(skip)]
    pub sieve_sets: Vec<SieveSet>,
}

/// Full ledger for one `(ν, F, N, α)`: the left side `Σ_{n<=N} ν(n)F(n)`,
/// every `W_j`, and the quotient against `Σ W_j + αN`.
pub fn decomposition_report<V, F>(nu: &V, f: &F, params: &BszParams, period: u64) -> Result<BszDecomposition, BszError>
where
    V: Fn(u64) -> Complex64 + Sync,
    F: Fn(u64) -> Complex64 + Sync,
{
    let blocks = prime_blocks(params)?;
    let sets = sieve_sets(params, &blocks)?;
    let products = distinct_products_check(&blocks, &sets, params.n)?;
    let w = wj_sums(nu, f, &blocks, &sets)?;
    let lhs = sum_range(1, params.n + 1, |i| nu(i) * f(i)).value();
    let rows: Vec<BlockRow> = blocks
        .iter()
        .zip(&sets)
        .zip(&w)
        .map(|((b, s), &w_j)| BlockRow {
            j: b.j,
            r_j: params.r(b.j),
            m_j: params.m(b.j),
            primes: b.primes.len() as u64,
            sieve: s.members.len() as u64,
            w_j,
        })
        .collect();
    let mut acc = SumAccumulator::new();
    for &x in &w {
        acc.add(Complex64::new(x, 0.0));
    }
    let sum_w = acc.value().re;
    let alpha_n = params.alpha * params.n as f64;
    let lhs_abs = lhs.norm();
    Ok(BszDecomposition {
        schema_version: SCHEMA_VERSION,
        params: *params,
        period,
        j_reach: params.j_reach(),
        lhs,
        lhs_abs,
        sum_w,
        alpha_n,
        quotient: lhs_abs / (sum_w + alpha_n),
        sum_primes: rows.iter().map(|r| r.primes).sum(),
        rows,
        products,
        blocks,
        sieve_sets: sets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PjCardinality {
    pub j: u64,
    pub primes: u64,
    /// `R_j / j`.
    pub scale: f64,
    /// `#P_j · j / R_j`.
    pub ratio: f64,
}

pub fn pj_cardinality_check(params: &BszParams, blocks: &[PrimeBlock]) -> Vec<PjCardinality> {
    blocks
        .iter()
        .map(|b| {
            let scale = params.r(b.j) / b.j as f64;
            PjCardinality {
                j: b.j,
                primes: b.primes.len() as u64,
                scale,
                ratio: b.primes.len() as f64 / scale,
            }
        })
        .collect()
}

/// One inequality `lhs >= rhs`, both sides as natural logarithms since the
/// exponentials overflow `f64` at any interesting `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub statement: String,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub holds: bool,
}

impl Condition {
    fn new(name: &str, statement: &str, ln_lhs: f64, ln_rhs: f64) -> Self {
        Condition {
            name: name.into(),
            statement: statement.into(),
            ln_lhs,
            ln_rhs,
            holds: ln_lhs >= ln_rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremConditions {
    pub alpha: f64,
    pub n: u64,
    pub p: u64,
    pub t: u64,
    pub epsilon: f64,
    /// `t^{-1} √p log p`.
    pub rho: f64,
    /// Least `α` allowed by the lower bound on `α`.
    pub alpha_min: f64,
    /// Whether any `α < 1/2` meets that lower bound at this `p` and `ε`.
    pub alpha_range_nonempty: bool,
    pub conditions: Vec<Condition>,
}

/// Evaluates the hypotheses of the main theorem and of the orthogonality
/// criterion with implied constants 1. Nothing is asserted.
pub fn theorem_conditions(alpha: f64, n: u64, p: u64, t: u64, epsilon: f64) -> TheoremConditions {
    let lnp = (p as f64).ln();
    let lnlnp = lnp.ln();
    let l = (1.0 / alpha).ln();
    let k = l.powi(6) / alpha;
    let rho = (p as f64).sqrt() * lnp / t as f64;
    let alpha_min = 3.0 * lnlnp.powi(6) / (epsilon * lnp);
    let ln_n = (n as f64).ln();
    let conditions = vec![
        Condition::new("period", "t >= p^(1/2 + eps)", (t as f64).ln(), (0.5 + epsilon) * lnp),
        Condition::new(
            "alpha",
            "alpha >= 3 (log log p)^6 / (eps log p)",
            alpha.ln(),
            alpha_min.ln(),
        ),
        Condition::new(
            "length",
            "N >= p^(1/2) exp(5 (log 1/alpha)^6 / alpha) log p",
            ln_n,
            0.5 * lnp + 5.0 * k + lnlnp,
        ),
        Condition::new(
            "cond1",
            "rho^(-1) >= alpha^(-2) exp(2 (log 1/alpha)^6 / alpha)",
            -rho.ln(),
            -2.0 * alpha.ln() + 2.0 * k,
        ),
        Condition::new(
            "cond2",
            "N >= t rho exp(4 (log 1/alpha)^6 / alpha)",
            ln_n,
            (t as f64).ln() + rho.ln() + 4.0 * k,
        ),
    ];
    TheoremConditions {
        alpha,
        n,
        p,
        t,
        epsilon,
        rho,
        alpha_min,
        alpha_range_nonempty: alpha_min < 0.5,
        conditions,
    }
}
