use std::fmt::Write as _;
use std::path::Path;

use mobsum_core::arith::{mobius_oracle, mobius_sieve, AdditiveCharacter, MobiusTable, MultiplicativeCharacter};
use mobsum_core::bsz::{
    decomposition_report, make_params, pj_cardinality_check, theorem_conditions, BszDecomposition, BszError,
    PjCardinality, TheoremConditions,
};
use mobsum_core::dynamics::{orbit, period, recurrence_stream, spectral_form, DynamicsError, MobiusMatrix, Trajectory};
use mobsum_core::field::{norm_group_generator, primitive_root, FpElem};
use mobsum_core::sample::{
    random_admissible, random_rational_fp, random_rational_fp2, seeded, smallest_irreducible_trace, Admissibility,
};
use mobsum_core::sums::{
    correlation_sum, reports_to_csv, single_sum, twisted_sum, weil_sum_fp, weil_sum_fp2_norm_one, SumError, SumKind,
    SumReport,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{BszConfig, MobiusConfig, Sequence, SpectralConfig, SumScanConfig, Weight, WeilConfig};
use crate::output::write_atomic;
use crate::CliError;

pub const MAX_MU_LIMIT: u64 = 100_000_000;
pub const MAX_ORACLE_LIMIT: u64 = 10_000_000;

/// What a command produced: files to commit, lines for the terminal, and
/// any mathematical mismatches (which make the run exit with status 1).
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub files: Vec<(String, Vec<u8>)>,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl From<SumError> for CliError {
    fn from(e: SumError) -> Self {
        match e {
            SumError::TableTooSmall { .. } | SumError::PrimeTooLarge { .. } => CliError::Resource(e.to_string()),
            SumError::Dynamics(d) => d.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::PeriodTooLong { .. } => CliError::Resource(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<BszError> for CliError {
    fn from(e: BszError) -> Self {
        match e {
            BszError::RangeOverflow { .. } | BszError::MemoryGuard { .. } => CliError::Resource(e.to_string()),
            BszError::CollisionFound { .. } | BszError::ProductOutOfRange { .. } => CliError::Internal(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// `μ(1..=needed)`, read from `cache` when it is large enough and rebuilt
/// (and saved back) otherwise.
pub fn mobius_table(needed: u64, cache: Option<&Path>) -> Result<MobiusTable, CliError> {
    let needed = needed.max(1);
    if needed > MAX_MU_LIMIT {
        return Err(CliError::Resource(format!(
            "Möbius table up to {needed} exceeds the guard {MAX_MU_LIMIT}"
        )));
    }
    if let Some(path) = cache.filter(|p| p.exists()) {
        let table = MobiusTable::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if table.limit() >= needed {
            return Ok(table);
        }
    }
    let table = mobius_sieve(needed).map_err(|e| CliError::Resource(e.to_string()))?;
    if let Some(path) = cache {
        let mut bytes = Vec::with_capacity(needed as usize + 20);
        table.write_to(&mut bytes)?;
        write_atomic(path, &bytes)?;
    }
    Ok(table)
}

struct SpectralCase {
    matrix: MobiusMatrix,
    seed: FpElem,
    traj: Trajectory,
    checked: u64,
    mismatches: u64,
}

impl SpectralCase {
    fn divides(&self) -> bool {
        self.traj.theta_sq_order.is_multiple_of(self.traj.projective_period())
    }
}

/// Compares map iteration, the `u_n/v_n` recurrence and the closed form for
/// `n = 1..=min(t, window)`, stopping at the first pole visit.
fn check_spectral(matrix: &MobiusMatrix, seed: FpElem, window: u64) -> Result<SpectralCase, CliError> {
    let form = spectral_form(matrix, seed)?;
    let traj = period(matrix, seed)?;
    let checked = window.min(traj.period).min(traj.pole_hit.unwrap_or(u64::MAX));
    let mut mismatches = 0;
    let mapped = orbit(matrix, seed);
    let ratios = recurrence_stream(matrix, seed).skip(1);
    for ((n, x), r) in (1..=checked).zip(mapped).zip(ratios) {
        let closed = form.eval(n).ok();
        if r.ratio(matrix) != Some(x.value()) || closed != Some(x) {
            mismatches += 1;
        }
    }
    Ok(SpectralCase {
        matrix: *matrix,
        seed,
        traj,
        checked,
        mismatches,
    })
}

pub fn verify_spectral(cfg: &SpectralConfig) -> Result<CommandOutput, CliError> {
    let mut cases = Vec::new();
    for (m, x) in &cfg.cases {
        cases.push(check_spectral(m, *x, cfg.window)?);
    }
    let rules = Admissibility {
        pole_free_window: Some(cfg.window),
        ..Admissibility::default()
    };
    let mut rng = seeded(cfg.seed);
    for _ in 0..cfg.samples {
        let traj = random_admissible(cfg.p, rules, &mut rng)
            .ok_or_else(|| CliError::Resource(format!("no admissible pair found at p = {}", cfg.p)))?;
        cases.push(check_spectral(&traj.matrix, traj.seed, cfg.window)?);
    }

    let mut csv = String::from("p,a,b,c,d,xi0,e,irreducible,t,projective_t,ord_theta2,checked,mismatches,divides\n");
    for c in &cases {
        let [a, b, cc, d] = c.matrix.entries();
        let ext = c.matrix.extension()?;
        writeln!(
            csv,
            "{},{a},{b},{cc},{d},{},{},{},{},{},{},{},{},{}",
            cfg.p,
            c.seed.value(),
            ext.e(),
            ext.is_irreducible(),
            c.traj.period,
            c.traj.projective_period(),
            c.traj.theta_sq_order,
            c.checked,
            c.mismatches,
            c.divides()
        )
        .unwrap();
    }

    let mismatched: u64 = cases.iter().map(|c| c.mismatches).sum();
    let not_dividing = cases.iter().filter(|c| !c.divides()).count();
    let equal = cases
        .iter()
        .filter(|c| c.traj.projective_period() == c.traj.theta_sq_order)
        .count();
    let mut out = CommandOutput::default();
    out.summary.push(format!(
        "p = {}: {} cases, {} steps compared, {} mismatches",
        cfg.p,
        cases.len(),
        cases.iter().map(|c| c.checked).sum::<u64>(),
        mismatched
    ));
    out.summary.push(format!(
        "period | ord(theta^2) in {}/{} cases; equality in {}/{}",
        cases.len() - not_dividing,
        cases.len(),
        equal,
        cases.len()
    ));
    if mismatched > 0 {
        out.failures.push(format!("{mismatched} trajectory mismatches"));
    }
    if not_dividing > 0 {
        out.failures
            .push(format!("{not_dividing} periods do not divide ord(theta^2)"));
    }
    out.files.push(("spectral.csv".into(), csv.into_bytes()));
    Ok(out)
}

pub fn sum_scan(cfg: &SumScanConfig, mu_cache: Option<&Path>) -> Result<CommandOutput, CliError> {
    let p = cfg.matrix.modulus();
    let traj = period(&cfg.matrix, cfg.xi0)?;
    let needed = cfg.n_schedule.iter().copied().max().unwrap_or(0);
    let mu = if cfg.frequencies.is_empty() || cfg.n_schedule.is_empty() {
        None
    } else {
        Some(mobius_table(needed, mu_cache)?)
    };
    let mut reports: Vec<SumReport> = Vec::new();
    for &w in &cfg.frequencies {
        let psi = AdditiveCharacter::from_u64(w, p);
        if let Some(mu) = &mu {
            for &n in &cfg.n_schedule {
                reports.push(twisted_sum(&traj, &psi, n, mu)?);
            }
        }
        for &[u, v, k, m] in &cfg.correlations {
            reports.push(correlation_sum(&traj, &psi, (u, v), (k, m), traj.period)?);
        }
        for &[u, m] in &cfg.singles {
            reports.push(single_sum(&traj, &psi, u, m, traj.period)?);
        }
    }
    let mut out = CommandOutput::default();
    out.summary
        .push(format!("{}, xi0 = {}: period t = {}", cfg.matrix, cfg.xi0, traj.period));
    for r in &reports {
        let line = match r.kind {
            SumKind::Twisted => format!(
                "twisted  u = {:<6} N = {:<10} |S|/N = {:.6e}",
                r.params.u.unwrap(),
                r.terms,
                r.ratio
            ),
            _ => format!(
                "{:<8} N = {:<10} |S| = {:.4}, ratio to bound {:.4}",
                r.kind,
                r.terms,
                r.abs(),
                r.ratio
            ),
        };
        out.summary.push(line);
    }
    out.files
        .push(("sum_scan.csv".into(), reports_to_csv(&reports).into_bytes()));
    Ok(out)
}

pub fn weil_check(cfg: &WeilConfig) -> Result<CommandOutput, CliError> {
    let mut reports = Vec::new();
    for &p in &cfg.primes {
        if cfg.character.is_multiple_of(p.get() - 1) {
            return Err(CliError::Config(format!(
                "field `character`: trivial modulo p - 1 = {}",
                p.get() - 1
            )));
        }
        let mut rng = seeded(cfg.seed.wrapping_add(p.get()));
        let g = primitive_root(p);
        let chis = [
            MultiplicativeCharacter::new(g, p.get() - 1, 0),
            MultiplicativeCharacter::new(g, p.get() - 1, cfg.character),
        ];
        let psi = AdditiveCharacter::from_u64(1, p);
        for _ in 0..cfg.functions_per_prime {
            let rf = random_rational_fp(p, cfg.max_degree, &mut rng);
            for chi in &chis {
                reports.push(weil_sum_fp(&rf, &psi, chi)?);
            }
        }
    }
    for &p in &cfg.norm_one_primes {
        if cfg.character.is_multiple_of(p.get() + 1) {
            return Err(CliError::Config(format!(
                "field `character`: trivial modulo p + 1 = {}",
                p.get() + 1
            )));
        }
        let mut rng = seeded(cfg.seed.wrapping_add(p.get()).wrapping_add(1 << 32));
        let ext = smallest_irreducible_trace(p);
        let h = norm_group_generator(ext).map_err(|e| CliError::Internal(e.to_string()))?;
        let chis = [
            MultiplicativeCharacter::new(h, p.get() + 1, 0),
            MultiplicativeCharacter::new(h, p.get() + 1, cfg.character),
        ];
        let psi = AdditiveCharacter::from_u64(1, p);
        for _ in 0..cfg.functions_per_prime {
            let rf = random_rational_fp2(ext, cfg.max_degree, &mut rng);
            for chi in &chis {
                reports.push(weil_sum_fp2_norm_one(&rf, &psi, chi)?);
            }
        }
    }
    let mut out = CommandOutput::default();
    for kind in [SumKind::WeilFp, SumKind::WeilNormOne] {
        let family: Vec<&SumReport> = reports.iter().filter(|r| r.kind == kind).collect();
        if let Some(worst) = family.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)) {
            out.summary.push(format!(
                "{kind}: {} sums, max ratio {:.4} (p = {})",
                family.len(),
                worst.ratio,
                worst.p
            ));
        }
    }
    let over: Vec<&SumReport> = reports
        .iter()
        .filter(|r| r.ratio.is_nan() || r.ratio > cfg.envelope)
        .collect();
    if !over.is_empty() {
        out.failures.push(format!(
            "{} sums exceed the envelope ratio {}",
            over.len(),
            cfg.envelope
        ));
    }
    out.files
        .push(("weil_check.csv".into(), reports_to_csv(&reports).into_bytes()));
    Ok(out)
}

#[derive(Serialize)]
struct BszInstance {
    p: u64,
    matrix: [u64; 4],
    xi0: u64,
    frequency: u64,
    alpha: f64,
    n: u64,
    epsilon: f64,
    nu: &'static str,
    f: &'static str,
}

#[derive(Serialize)]
struct BszArtifact<'a> {
    schema_version: u32,
    instance: BszInstance,
    decomposition: &'a BszDecomposition,
    cardinality: Vec<PjCardinality>,
    conditions: TheoremConditions,
}

type Handle<'a> = Box<dyn Fn(u64) -> Complex64 + Sync + 'a>;

pub fn bsz_report(cfg: &BszConfig, mu_cache: Option<&Path>) -> Result<CommandOutput, CliError> {
    let p = cfg.matrix.modulus();
    let params = make_params(cfg.alpha, cfg.n)?;
    let traj = period(&cfg.matrix, cfg.xi0)?;
    let psi = AdditiveCharacter::from_u64(cfg.frequency, p);
    if cfg.f == Sequence::Trajectory && psi.is_trivial() {
        return Err(CliError::Config("field `frequency`: trivial character".into()));
    }
    let mu = match cfg.nu {
        Weight::Mobius => Some(mobius_table(cfg.n, mu_cache)?),
        Weight::One => None,
    };
    let one = |_: u64| Complex64::new(1.0, 0.0);
    let nu: Handle = match &mu {
        Some(table) => Box::new(move |k| Complex64::new(f64::from(table.get(k)), 0.0)),
        None => Box::new(one),
    };
    let f: Handle = match cfg.f {
        Sequence::Trajectory => Box::new(|k| psi.eval_raw(traj.value_at(k))),
        Sequence::One => Box::new(one),
    };
    let decomposition = decomposition_report(&nu, &f, &params, traj.period)?;
    let cardinality = pj_cardinality_check(&params, &decomposition.blocks);
    let conditions = theorem_conditions(cfg.alpha, cfg.n, p.get(), traj.period, cfg.epsilon);

    let mut out = CommandOutput::default();
    out.summary.push(format!(
        "alpha = {}, N = {}: j0 = {:.4}, j1 = {:.2}, {} contributing blocks",
        cfg.alpha,
        cfg.n,
        params.j0,
        params.j1,
        decomposition.rows.len()
    ));
    out.summary.push(format!(
        "|LHS| = {:.6}, sum W_j = {:.6}, alpha N = {}, quotient = {:.6}",
        decomposition.lhs_abs, decomposition.sum_w, decomposition.alpha_n, decomposition.quotient
    ));
    out.summary.push(format!(
        "sum #P_j #Q_j = {} <= N = {}, collisions {}",
        decomposition.products.pairs, decomposition.products.n, decomposition.products.collisions
    ));
    for c in &conditions.conditions {
        out.summary.push(format!(
            "condition {:<6} ln lhs = {:>12.4} ln rhs = {:>12.4} holds = {}",
            c.name, c.ln_lhs, c.ln_rhs, c.holds
        ));
    }
    let artifact = BszArtifact {
        schema_version: mobsum_core::bsz::SCHEMA_VERSION,
        instance: BszInstance {
            p: p.get(),
            matrix: cfg.matrix.entries(),
            xi0: cfg.xi0.value(),
            frequency: psi.frequency(),
            alpha: cfg.alpha,
            n: cfg.n,
            epsilon: cfg.epsilon,
            nu: match cfg.nu {
                Weight::Mobius => "mobius",
                Weight::One => "one",
            },
            f: match cfg.f {
                Sequence::Trajectory => "trajectory",
                Sequence::One => "one",
            },
        },
        decomposition: &decomposition,
        cardinality,
        conditions,
    };
    let mut json = serde_json::to_vec_pretty(&artifact).expect("report serialises");
    json.push(b'\n');
    out.files.push(("bsz_report.json".into(), json));
    Ok(out)
}

#[derive(Serialize)]
struct MobiusSummary {
    limit: u64,
    mismatches: u64,
    first_mismatch: Option<u64>,
    minus_one: u64,
    zero: u64,
    plus_one: u64,
    mertens: i64,
}

pub fn mobius_check(cfg: &MobiusConfig) -> Result<CommandOutput, CliError> {
    if cfg.limit == 0 {
        return Err(CliError::Usage("limit must be at least 1".into()));
    }
    if cfg.limit > MAX_ORACLE_LIMIT {
        return Err(CliError::Resource(format!(
            "oracle comparison up to {} exceeds the guard {MAX_ORACLE_LIMIT}",
            cfg.limit
        )));
    }
    let table = mobius_sieve(cfg.limit).map_err(|e| CliError::Resource(e.to_string()))?;
    let bad = |n: u64| table.get(n) != mobius_oracle(n);
    #[cfg(feature = "parallel")]
    let wrong: Vec<u64> = {
        use rayon::prelude::*;
        (1..=cfg.limit).into_par_iter().filter(|&n| bad(n)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let wrong: Vec<u64> = (1..=cfg.limit).filter(|&n| bad(n)).collect();

    let values = table.as_slice();
    let count = |v: i8| values.iter().filter(|&&m| m == v).count() as u64;
    let summary = MobiusSummary {
        limit: cfg.limit,
        mismatches: wrong.len() as u64,
        first_mismatch: wrong.first().copied(),
        minus_one: count(-1),
        zero: count(0),
        plus_one: count(1),
        mertens: values.iter().map(|&m| i64::from(m)).sum(),
    };
    let mut out = CommandOutput::default();
    out.summary.push(format!(
        "mu(1..={}): {} mismatches against trial division; M({}) = {}",
        cfg.limit, summary.mismatches, cfg.limit, summary.mertens
    ));
    if !wrong.is_empty() {
        out.failures
            .push(format!("sieve disagrees with trial division at n = {}", wrong[0]));
    }
    let mut json = serde_json::to_vec_pretty(&summary).expect("summary serialises");
    json.push(b'\n');
    out.files.push(("mobius_check.json".into(), json));
    Ok(out)
}
