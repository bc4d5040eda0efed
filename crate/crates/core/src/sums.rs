//! Exponential sums along trajectories and hybrid character sums over
//! rational functions, each reported next to its reference bound.
//!
//! Trajectory sums read `ξ_n` from a tabulated [`Trajectory`], so the
//! decimated sequence `ξ_{mn}` is `values[mn mod t]` and follows the
//! extended map at the pole exactly as the orbit does.

use std::fmt::{self, Write as _};
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{unit_circle_reduced, AdditiveCharacter, MobiusTable, MultiplicativeCharacter};
use crate::dynamics::{DynamicsError, MobiusMatrix, Trajectory};
use crate::field::{mult_order, FieldError, Fp2Elem, FpElem, PrimeModulus};
use crate::reduce::sum_range;

pub const MAX_WEIL_PRIME: u64 = 100_000;
pub const MAX_NORM_ONE_PRIME: u64 = 3_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("sum needs μ up to {needed} but the table stops at {limit}")]
    TableTooSmall { needed: u64, limit: u64 },
    #[error("additive character is trivial")]
    TrivialCharacter,
    #[error("both coefficients u and v are zero")]
    BothFrequenciesZero,
    #[error("decimation steps need k < m, got k = {k}, m = {m}")]
    BadIndices { k: u64, m: u64 },
    #[error("coefficient u is zero")]
    ZeroFrequency,
    #[error("decimation step m must be positive")]
    ZeroStep,
    #[error("N = {n} exceeds the period t = {period}")]
    RangeExceedsPeriod { n: u64, period: u64 },
    #[error("twist h = {h} outside [0, {period})")]
    TwistOutOfRange { h: u64, period: u64 },
    #[error("p = {p} exceeds the brute-force limit {max}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("character is not defined on the enumerated group")]
    BadCharacter,
    #[error("inputs live modulo different primes")]
    ModulusMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Twisted,
    Correlation,
    Single,
    Complete,
    WeilFp,
    WeilNormOne,
}

impl SumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SumKind::Twisted => "twisted",
            SumKind::Correlation => "correlation",
            SumKind::Single => "single",
            SumKind::Complete => "complete",
            SumKind::WeilFp => "weil_fp",
            SumKind::WeilNormOne => "weil_norm_one",
        }
    }
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which sum was computed and with which parameters. Fields that do not
/// apply to a kind are `None` and print as empty CSV cells.
///
/// For trajectory sums `u`, `v` are the effective coefficients with the
/// character frequency folded in (`ψ_w(uξ) = ψ_1(wuξ)`). For Weil sums `u` is
/// the frequency of `ψ` and `h` the exponent of `χ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumParams {
    pub matrix: Option<[u64; 4]>,
    pub xi0: Option<u64>,
    pub u: Option<u64>,
    pub v: Option<u64>,
    pub k: Option<u64>,
    pub m: Option<u64>,
    pub h: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub kind: SumKind,
    pub p: u64,
    pub params: SumParams,
    /// Number of terms `N`.
    pub terms: u64,
    pub value: Complex64,
    /// Reference bound with implied constant 1, if the sum has one.
    pub bound: Option<f64>,
    /// `|value| / bound`, or `|value| / N` when there is no bound.
    pub ratio: f64,
}

pub const CSV_HEADER: &str = "sum_kind,p,a,b,c,d,xi0,u,v,k,m,h,N,re,im,abs,bound,ratio";

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SumReport {
    /// Builds a report and checks the triangle inequality `|value| <= N`.
    pub fn new(kind: SumKind, p: u64, params: SumParams, terms: u64, value: Complex64, bound: Option<f64>) -> Self {
        let abs = value.norm();
        assert!(
            abs <= terms as f64 * (1.0 + 1e-12) + 1e-9,
            "{kind} sum has |value| = {abs} > N = {terms}"
        );
        let ratio = match bound {
            Some(b) if b > 0.0 => abs / b,
            Some(_) if abs == 0.0 => 0.0,
            Some(_) => f64::INFINITY,
            None if terms == 0 => 0.0,
            None => abs / terms as f64,
        };
        SumReport {
            kind,
            p,
            params,
            terms,
            value,
            bound,
            ratio,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// One CSV line (no trailing newline) in [`CSV_HEADER`] order.
    pub fn csv_row(&self) -> String {
        fn opt(x: Option<u64>) -> String {
            x.map(|v| v.to_string()).unwrap_or_default()
        }
        let [a, b, c, d] = match self.params.matrix {
            Some(m) => m.map(Some),
            None => [None; 4],
        };
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.p,
            opt(a),
            opt(b),
            opt(c),
            opt(d),
            opt(self.params.xi0),
            opt(self.params.u),
            opt(self.params.v),
            opt(self.params.k),
            opt(self.params.m),
            opt(self.params.h),
            self.terms,
            fmt_float(self.value.re),
            fmt_float(self.value.im),
            fmt_float(self.abs()),
            self.bound.map(fmt_float).unwrap_or_default(),
            fmt_float(self.ratio),
        )
        .expect("writing to a String");
        s
    }
}

/// Header plus one row per report, LF-terminated.
pub fn reports_to_csv(reports: &[SumReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn sqrt_p_log_p(p: u64) -> f64 {
    let p = p as f64;
    p.sqrt() * p.ln()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn traj_params(traj: &Trajectory) -> SumParams {
    SumParams {
        matrix: Some(traj.matrix.entries()),
        xi0: Some(traj.seed.value()),
        ..SumParams::default()
    }
}

fn check_modulus(traj: &Trajectory, psi: &AdditiveCharacter) -> Result<PrimeModulus, SumError> {
    let p = traj.matrix.modulus();
    if p != psi.modulus() {
        return Err(SumError::ModulusMismatch);
    }
    Ok(p)
}

#[inline]
fn step_index(step: u64, n: u64, period: u64) -> u64 {
    ((step as u128 * n as u128) % period as u128) as u64
}

/// `S_ψ(N) = Σ_{n<=N} μ(n) ψ(ξ_n)`.
pub fn twisted_sum(
    traj: &Trajectory,
    psi: &AdditiveCharacter,
    n: u64,
    mu: &MobiusTable,
) -> Result<SumReport, SumError> {
    let p = check_modulus(traj, psi)?;
    if psi.is_trivial() {
        return Err(SumError::TrivialCharacter);
    }
    if n > mu.limit() {
        return Err(SumError::TableTooSmall {
            needed: n,
            limit: mu.limit(),
        });
    }
    let value = sum_range(1, n + 1, |i| match mu.get(i) {
        0 => Complex64::new(0.0, 0.0),
        s => psi.eval_raw(traj.value_at(i)) * f64::from(s),
    })
    .value();
    let params = SumParams {
        u: Some(psi.frequency()),
        ..traj_params(traj)
    };
    Ok(SumReport::new(SumKind::Twisted, p.get(), params, n, value, None))
}

/// Effective coefficients `(wu, wv)` of `ψ_w(uξ + vξ')`.
fn fold_frequency(psi: &AdditiveCharacter, u: u64, v: u64) -> (u64, u64) {
    let p = psi.modulus();
    let w = psi.frequency();
    (p.mul(w, p.reduce(u)), p.mul(w, p.reduce(v)))
}

fn check_correlation(psi: &AdditiveCharacter, u: u64, v: u64, k: u64, m: u64) -> Result<(u64, u64), SumError> {
    if psi.is_trivial() {
        return Err(SumError::TrivialCharacter);
    }
    let (u, v) = fold_frequency(psi, u, v);
    if u == 0 && v == 0 {
        return Err(SumError::BothFrequenciesZero);
    }
    if k >= m {
        return Err(SumError::BadIndices { k, m });
    }
    Ok((u, v))
}

/// `Σ_{n=first}^{first+count-1} ψ(uξ_{kn} + vξ_{mn})` with no range checks;
/// `u`, `v` already carry the frequency of `ψ_1`.
fn correlation_window_raw(traj: &Trajectory, u: u64, v: u64, k: u64, m: u64, first: u64, count: u64) -> Complex64 {
    let p = traj.matrix.modulus();
    let t = traj.period;
    let values = traj.values();
    sum_range(first, first + count, |n| {
        let x = values[step_index(k, n, t) as usize];
        let y = values[step_index(m, n, t) as usize];
        let arg = p.add(p.mul(u, x), p.mul(v, y));
        unit_circle_reduced(arg, p.get())
    })
    .value()
}

/// `Σ_{n=first}^{first+count-1} ψ(uξ_{kn} + vξ_{mn})` for any window; the
/// summand has period `t` in `n`.
pub fn correlation_window(
    traj: &Trajectory,
    psi: &AdditiveCharacter,
    (u, v): (u64, u64),
    (k, m): (u64, u64),
    first: u64,
    count: u64,
) -> Result<Complex64, SumError> {
    check_modulus(traj, psi)?;
    let (u, v) = check_correlation(psi, u, v, k, m)?;
    Ok(correlation_window_raw(traj, u, v, k, m, first, count))
}

/// `Q_ψ(u,v;k,m,N) = Σ_{n<=N} ψ(uξ_{kn} + vξ_{mn})`, bound `m√p log p`.
pub fn correlation_sum(
    traj: &Trajectory,
    psi: &AdditiveCharacter,
    (u, v): (u64, u64),
    (k, m): (u64, u64),
    n: u64,
) -> Result<SumReport, SumError> {
    let p = check_modulus(traj, psi)?;
    let (u, v) = check_correlation(psi, u, v, k, m)?;
    if n > traj.period {
        return Err(SumError::RangeExceedsPeriod { n, period: traj.period });
    }
    let value = correlation_window_raw(traj, u, v, k, m, 1, n);
    let params = SumParams {
        u: Some(u),
        v: Some(v),
        k: Some(k),
        m: Some(m),
        ..traj_params(traj)
    };
    let bound = m as f64 * sqrt_p_log_p(p.get());
    Ok(SumReport::new(
        SumKind::Correlation,
        p.get(),
        params,
        n,
        value,
        Some(bound),
    ))
}

/// `R_ψ(u;m,N) = Σ_{n<=N} ψ(uξ_{mn})`, bound `gcd(m,t)√p log p`.
pub fn single_sum(traj: &Trajectory, psi: &AdditiveCharacter, u: u64, m: u64, n: u64) -> Result<SumReport, SumError> {
    let p = check_modulus(traj, psi)?;
    if psi.is_trivial() {
        return Err(SumError::TrivialCharacter);
    }
    let (u, _) = fold_frequency(psi, u, 0);
    if u == 0 {
        return Err(SumError::ZeroFrequency);
    }
    if m == 0 {
        return Err(SumError::ZeroStep);
    }
    let t = traj.period;
    if n > t {
        return Err(SumError::RangeExceedsPeriod { n, period: t });
    }
    let value = correlation_window_raw(traj, 0, u, 0, m, 1, n);
    let params = SumParams {
        u: Some(u),
        m: Some(m),
        ..traj_params(traj)
    };
    let bound = gcd(m, t) as f64 * sqrt_p_log_p(p.get());
    Ok(SumReport::new(SumKind::Single, p.get(), params, n, value, Some(bound)))
}

/// `Q_{h,ψ}(u,v;k,m) = Σ_{n=1}^{t} ψ(uξ_{kn} + vξ_{mn}) e(hn/t)`, bound
/// `m√p log p`.
pub fn complete_twisted_sum(
    traj: &Trajectory,
    psi: &AdditiveCharacter,
    (u, v): (u64, u64),
    (k, m): (u64, u64),
    h: u64,
) -> Result<SumReport, SumError> {
    let p = check_modulus(traj, psi)?;
    let (u, v) = check_correlation(psi, u, v, k, m)?;
    let t = traj.period;
    if h >= t {
        return Err(SumError::TwistOutOfRange { h, period: t });
    }
    let values = traj.values();
    let value = sum_range(1, t + 1, |n| {
        let x = values[step_index(k, n, t) as usize];
        let y = values[step_index(m, n, t) as usize];
        let arg = p.add(p.mul(u, x), p.mul(v, y));
        unit_circle_reduced(arg, p.get()) * unit_circle_reduced(step_index(h, n, t), t)
    })
    .value();
    let params = SumParams {
        u: Some(u),
        v: Some(v),
        k: Some(k),
        m: Some(m),
        h: Some(h),
        ..traj_params(traj)
    };
    let bound = m as f64 * sqrt_p_log_p(p.get());
    Ok(SumReport::new(
        SumKind::Complete,
        p.get(),
        params,
        t,
        value,
        Some(bound),
    ))
}

/// `K_h(N) = Σ_{n=1}^{N} e(-hn/t)` in closed form.
pub fn completion_kernel(h: u64, t: u64, n: u64) -> Complex64 {
    let h = h % t;
    if h == 0 {
        return Complex64::new(n as f64, 0.0);
    }
    let step = unit_circle_reduced(t - h, t);
    let last = unit_circle_reduced((t - step_index(h, n, t)) % t, t);
    step * (Complex64::new(1.0, 0.0) - last) / (Complex64::new(1.0, 0.0) - step)
}

/// Recovers `Σ_{n<=N} a_n` from the complete sums `Q_h = Σ_{n=1}^{t} a_n
/// e(hn/t)`, `h = 0..t`, through `(1/t) Σ_h Q_h K_h(N)`.
pub fn reconstruct_incomplete(complete: &[Complex64], n: u64) -> Complex64 {
    let t = complete.len() as u64;
    assert!(t > 0 && n <= t, "need 0 < N <= t = {t}, got N = {n}");
    let total = sum_range(0, t, |h| complete[h as usize] * completion_kernel(h, t, n)).value();
    total / t as f64
}

/// Ring operations needed to evaluate polynomials over `F_p` or `F_{p^2}`.
pub trait Coefficient: Copy + PartialEq + Add<Output = Self> + Mul<Output = Self> {
    fn zero_like(self) -> Self;
    fn is_zero_elem(self) -> bool;
    fn try_inv(self) -> Option<Self>;
    fn prime(self) -> u64;
}

impl Coefficient for FpElem {
    fn zero_like(self) -> Self {
        FpElem::zero(self.modulus())
    }

    fn is_zero_elem(self) -> bool {
        self.is_zero()
    }

    fn try_inv(self) -> Option<Self> {
        self.inv().ok()
    }

    fn prime(self) -> u64 {
        self.modulus().get()
    }
}

impl Coefficient for Fp2Elem {
    fn zero_like(self) -> Self {
        self.ext().zero()
    }

    fn is_zero_elem(self) -> bool {
        self.is_zero()
    }

    fn try_inv(self) -> Option<Self> {
        self.inv().ok()
    }

    fn prime(self) -> u64 {
        self.ext().modulus().get()
    }
}

/// `h(X)/g(X)` with coefficient lists from low to high degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<C> {
    num: Vec<C>,
    den: Vec<C>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalFunctionError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("coefficients live in different fields")]
    MixedFields,
}

fn trim<C: Coefficient>(mut poly: Vec<C>) -> Vec<C> {
    while poly.last().is_some_and(|c| c.is_zero_elem()) {
        poly.pop();
    }
    poly
}

fn horner<C: Coefficient>(poly: &[C], x: C) -> C {
    poly.iter().rev().fold(x.zero_like(), |acc, &c| acc * x + c)
}

impl<C: Coefficient> RationalFunction<C> {
    /// Trailing zero coefficients are dropped; an empty numerator is `h = 0`.
    pub fn new(num: Vec<C>, den: Vec<C>) -> Result<Self, RationalFunctionError> {
        let num = trim(num);
        let den = trim(den);
        let Some(first) = den.first() else {
            return Err(RationalFunctionError::ZeroDenominator);
        };
        let p = first.prime();
        if num.iter().chain(&den).any(|c| c.prime() != p) {
            return Err(RationalFunctionError::MixedFields);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &[C] {
        &self.num
    }

    pub fn denominator(&self) -> &[C] {
        &self.den
    }

    /// Degree of `h`, with the zero polynomial counted as degree 0.
    pub fn num_degree(&self) -> usize {
        self.num.len().saturating_sub(1)
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.num_degree().max(self.den_degree())
    }

    pub fn prime(&self) -> u64 {
        self.den[0].prime()
    }

    /// `h(x)/g(x)`, or `None` at a zero of `g`.
    pub fn eval(&self, x: C) -> Option<C> {
        let g = horner(&self.den, x).try_inv()?;
        Some(horner(&self.num, x) * g)
    }

    /// True when `h/g` is a constant function of `X`.
    pub fn is_constant(&self) -> bool {
        if self.num.is_empty() {
            return true;
        }
        if self.num.len() != self.den.len() {
            return false;
        }
        let lh = *self.num.last().unwrap();
        let lg = *self.den.last().unwrap();
        self.num.iter().zip(&self.den).all(|(&h, &g)| h * lg == g * lh)
    }
}

fn weil_bound(max_degree: usize, p: u64) -> f64 {
    max_degree as f64 * (p as f64).sqrt()
}

/// `Σ_{x in F_p, g(x) != 0} ψ(h(x)/g(x)) χ(x)` by exhaustion, bound
/// `max(deg g, deg h)√p`. `χ` extends to 0 by `χ(0) = 1` when trivial and
/// `χ(0) = 0` otherwise.
pub fn weil_sum_fp(
    rf: &RationalFunction<FpElem>,
    psi: &AdditiveCharacter,
    chi: &MultiplicativeCharacter<FpElem>,
) -> Result<SumReport, SumError> {
    let p = psi.modulus();
    if rf.prime() != p.get() || chi.generator.modulus() != p {
        return Err(SumError::ModulusMismatch);
    }
    if p.get() > MAX_WEIL_PRIME {
        return Err(SumError::PrimeTooLarge {
            p: p.get(),
            max: MAX_WEIL_PRIME,
        });
    }
    if psi.is_trivial() {
        return Err(SumError::TrivialCharacter);
    }
    if chi.order != p.get() - 1 || mult_order(chi.generator)? != chi.order as u128 {
        return Err(SumError::BadCharacter);
    }
    let zero = Complex64::new(0.0, 0.0);
    // index 0 is x = 0; index i >= 1 is x = g^(i-1)
    let acc = sum_range(0, p.get(), |i| {
        let (x, chi_x) = if i == 0 {
            let c = if chi.is_trivial() { 1.0 } else { 0.0 };
            (FpElem::zero(p), Complex64::new(c, 0.0))
        } else {
            (chi.generator.pow(i - 1), chi.eval_index(i - 1))
        };
        match rf.eval(x) {
            Some(y) if chi_x != zero => psi.eval(y) * chi_x,
            _ => zero,
        }
    });
    let terms = (0..p.get()).filter(|&x| rf.eval(FpElem::new(x, p)).is_some()).count() as u64;
    let params = SumParams {
        u: Some(psi.frequency()),
        h: Some(chi.multiplier),
        ..SumParams::default()
    };
    let bound = weil_bound(rf.max_degree(), p.get());
    Ok(SumReport::new(
        SumKind::WeilFp,
        p.get(),
        params,
        terms,
        acc.value(),
        Some(bound),
    ))
}

/// `Σ_{Nm(x) = 1, g(x) != 0} ψ(Tr(h(x)/g(x))) χ(x)` over the norm-one group,
/// enumerated as powers of `χ`'s generator; bound `max(deg g, deg h)√p`.
pub fn weil_sum_fp2_norm_one(
    rf: &RationalFunction<Fp2Elem>,
    psi: &AdditiveCharacter,
    chi: &MultiplicativeCharacter<Fp2Elem>,
) -> Result<SumReport, SumError> {
    let p = psi.modulus();
    let ext = chi.generator.ext();
    if rf.prime() != p.get()
        || ext.modulus() != p
        || rf.numerator().iter().chain(rf.denominator()).any(|c| c.ext() != ext)
    {
        return Err(SumError::ModulusMismatch);
    }
    if !ext.is_irreducible() {
        return Err(SumError::Field(FieldError::ReducibleExtension));
    }
    if p.get() > MAX_NORM_ONE_PRIME {
        return Err(SumError::PrimeTooLarge {
            p: p.get(),
            max: MAX_NORM_ONE_PRIME,
        });
    }
    if psi.is_trivial() {
        return Err(SumError::TrivialCharacter);
    }
    let g = chi.generator;
    if chi.order != p.get() + 1 || g.norm().value() != 1 || mult_order(g)? != chi.order as u128 {
        return Err(SumError::BadCharacter);
    }
    let zero = Complex64::new(0.0, 0.0);
    let acc = sum_range(0, chi.order, |i| match rf.eval(g.pow(i)) {
        Some(y) => psi.eval(y.trace()) * chi.eval_index(i),
        None => zero,
    });
    let terms = (0..chi.order).filter(|&i| rf.eval(g.pow(i)).is_some()).count() as u64;
    let params = SumParams {
        u: Some(psi.frequency()),
        h: Some(chi.multiplier),
        ..SumParams::default()
    };
    let bound = weil_bound(rf.max_degree(), p.get());
    Ok(SumReport::new(
        SumKind::WeilNormOne,
        p.get(),
        params,
        terms,
        acc.value(),
        Some(bound),
    ))
}

/// A trajectory sum evaluated at every scan point. Coefficients are taken
/// with `ψ = ψ_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanSum {
    Single { u: u64, m: u64 },
    Correlation { u: u64, v: u64, k: u64, m: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanLength {
    /// `N = t`.
    FullPeriod,
    Terms(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanPoint {
    pub matrix: MobiusMatrix,
    pub seed: FpElem,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanGrid {
    pub points: Vec<ScanPoint>,
    pub sums: Vec<ScanSum>,
    pub lengths: Vec<ScanLength>,
}

/// One report per (point, sum, length), in that nesting order.
pub fn bound_ratio_scan(grid: &ScanGrid) -> Result<Vec<SumReport>, SumError> {
    let mut out = Vec::with_capacity(grid.points.len() * grid.sums.len() * grid.lengths.len());
    for point in &grid.points {
        let traj = crate::dynamics::period(&point.matrix, point.seed)?;
        let psi = AdditiveCharacter::from_u64(1, point.matrix.modulus());
        for sum in &grid.sums {
            for len in &grid.lengths {
                let n = match *len {
                    ScanLength::FullPeriod => traj.period,
                    ScanLength::Terms(n) => n,
                };
                let report = match *sum {
                    ScanSum::Single { u, m } => single_sum(&traj, &psi, u, m, n)?,
                    ScanSum::Correlation { u, v, k, m } => correlation_sum(&traj, &psi, (u, v), (k, m), n)?,
                };
                out.push(report);
            }
        }
    }
    Ok(out)
}

/// Order statistics of the ratios of reports that carry a bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

pub fn ratio_summary(reports: &[SumReport]) -> Option<RatioSummary> {
    let mut ratios: Vec<f64> = reports.iter().filter(|r| r.bound.is_some()).map(|r| r.ratio).collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    let rank = |q: f64| ratios[((q * ratios.len() as f64).ceil() as usize).clamp(1, ratios.len()) - 1];
    Some(RatioSummary {
        count: ratios.len(),
        min: ratios[0],
        median: rank(0.5),
        p90: rank(0.9),
        max: *ratios.last().unwrap(),
    })
}
