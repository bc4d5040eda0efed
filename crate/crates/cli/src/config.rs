//! Experiment configs: one JSON document per run, with every number written
//! as a decimal string.

use std::fs;
use std::path::Path;

use mobsum_core::dynamics::{normalize_to_sl2, DynamicsError, MobiusMatrix};
use mobsum_core::field::{FpElem, PrimeModulus};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Option<String>,
    pub threads: Option<String>,
    pub p: Option<String>,
    pub matrix: Option<[String; 4]>,
    pub xi0: Option<String>,
    pub cases: Option<Vec<RawCase>>,
    pub samples: Option<String>,
    pub seed: Option<String>,
    pub window: Option<String>,
    pub frequencies: Option<Vec<String>>,
    pub n_schedule: Option<Vec<String>>,
    pub correlations: Option<Vec<[String; 4]>>,
    pub singles: Option<Vec<[String; 2]>>,
    pub primes: Option<Vec<String>>,
    pub norm_one_primes: Option<Vec<String>>,
    pub functions_per_prime: Option<String>,
    pub max_degree: Option<String>,
    pub character: Option<String>,
    pub envelope: Option<String>,
    pub frequency: Option<String>,
    pub alpha: Option<String>,
    pub n: Option<String>,
    pub epsilon: Option<String>,
    pub nu: Option<String>,
    pub f: Option<String>,
    pub limit: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCase {
    pub matrix: [String; 4],
    pub xi0: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    VerifySpectral,
    SumScan,
    WeilCheck,
    BszReport,
    MobiusCheck,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::VerifySpectral => "verify-spectral",
            CommandKind::SumScan => "sum-scan",
            CommandKind::WeilCheck => "weil-check",
            CommandKind::BszReport => "bsz-report",
            CommandKind::MobiusCheck => "mobius-check",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectralConfig {
    pub p: PrimeModulus,
    pub samples: u64,
    pub seed: u64,
    pub window: u64,
    pub cases: Vec<(MobiusMatrix, FpElem)>,
}

#[derive(Clone, Debug)]
pub struct SumScanConfig {
    pub matrix: MobiusMatrix,
    pub xi0: FpElem,
    pub frequencies: Vec<u64>,
    pub n_schedule: Vec<u64>,
    pub correlations: Vec<[u64; 4]>,
    pub singles: Vec<[u64; 2]>,
}

#[derive(Clone, Debug)]
pub struct WeilConfig {
    pub primes: Vec<PrimeModulus>,
    pub norm_one_primes: Vec<PrimeModulus>,
    pub functions_per_prime: u64,
    pub max_degree: usize,
    pub seed: u64,
    pub character: u64,
    pub envelope: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Mobius,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sequence {
    Trajectory,
    One,
}

#[derive(Clone, Debug)]
pub struct BszConfig {
    pub matrix: MobiusMatrix,
    pub xi0: FpElem,
    pub frequency: u64,
    pub alpha: f64,
    pub n: u64,
    pub epsilon: f64,
    pub nu: Weight,
    pub f: Sequence,
}

#[derive(Clone, Debug)]
pub struct MobiusConfig {
    pub limit: u64,
}

#[derive(Clone, Debug)]
pub enum Experiment {
    VerifySpectral(SpectralConfig),
    SumScan(SumScanConfig),
    WeilCheck(WeilConfig),
    BszReport(BszConfig),
    MobiusCheck(MobiusConfig),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub threads: usize,
    pub experiment: Experiment,
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {msg}"))
}

fn required<'a, T>(field: &str, v: &'a Option<T>) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| field_err(field, "missing"))
}

fn parse_u64(field: &str, s: &str) -> Result<u64, CliError> {
    s.trim()
        .parse::<u64>()
        .map_err(|e| field_err(field, format!("{s:?} is not a non-negative integer ({e})")))
}

fn parse_f64(field: &str, s: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(field_err(field, format!("{s:?} is not a finite decimal"))),
    }
}

fn opt_u64(field: &str, v: &Option<String>, default: u64) -> Result<u64, CliError> {
    v.as_deref().map_or(Ok(default), |s| parse_u64(field, s))
}

fn parse_prime(field: &str, s: &str) -> Result<PrimeModulus, CliError> {
    PrimeModulus::new(parse_u64(field, s)?).map_err(|e| field_err(field, e))
}

fn parse_list(field: &str, v: &Option<Vec<String>>) -> Result<Vec<u64>, CliError> {
    v.as_deref()
        .unwrap_or_default()
        .iter()
        .map(|s| parse_u64(field, s))
        .collect()
}

fn parse_primes(field: &str, v: &Option<Vec<String>>) -> Result<Vec<PrimeModulus>, CliError> {
    v.as_deref()
        .unwrap_or_default()
        .iter()
        .map(|s| parse_prime(field, s))
        .collect()
}

/// Rescales into `SL_2` and insists on distinct characteristic roots.
fn parse_matrix(field: &str, entries: &[String; 4], p: PrimeModulus) -> Result<MobiusMatrix, CliError> {
    let mut v = [FpElem::zero(p); 4];
    for (slot, s) in v.iter_mut().zip(entries) {
        *slot = FpElem::new(parse_u64(field, s)? % p.get(), p);
    }
    let m = normalize_to_sl2(v[0], v[1], v[2], v[3]).map_err(|e| field_err(field, e))?;
    m.extension().map_err(|e| match e {
        DynamicsError::RepeatedRoot => field_err(field, "RepeatedRoot: trace is ±2 after normalisation"),
        other => field_err(field, other),
    })?;
    Ok(m)
}

fn parse_seed_point(field: &str, s: &str, p: PrimeModulus) -> Result<FpElem, CliError> {
    Ok(FpElem::new(parse_u64(field, s)? % p.get(), p))
}

fn parse_tuples<const K: usize>(field: &str, v: &Option<Vec<[String; K]>>) -> Result<Vec<[u64; K]>, CliError> {
    v.as_deref()
        .unwrap_or_default()
        .iter()
        .map(|row| {
            let mut out = [0u64; K];
            for (o, s) in out.iter_mut().zip(row) {
                *o = parse_u64(field, s)?;
            }
            Ok(out)
        })
        .collect()
}

impl RawConfig {
    pub fn validate(&self, kind: CommandKind) -> Result<ExperimentConfig, CliError> {
        if let Some(c) = &self.command {
            if c != kind.name() {
                return Err(field_err(
                    "command",
                    format!("config is for {c:?}, not {:?}", kind.name()),
                ));
            }
        }
        let threads = opt_u64("threads", &self.threads, 1)?;
        if threads == 0 {
            return Err(field_err("threads", "must be at least 1"));
        }
        let experiment = match kind {
            CommandKind::VerifySpectral => Experiment::VerifySpectral(self.spectral()?),
            CommandKind::SumScan => Experiment::SumScan(self.sum_scan()?),
            CommandKind::WeilCheck => Experiment::WeilCheck(self.weil()?),
            CommandKind::BszReport => Experiment::BszReport(self.bsz()?),
            CommandKind::MobiusCheck => Experiment::MobiusCheck(MobiusConfig {
                limit: parse_u64("limit", required("limit", &self.limit)?)?,
            }),
        };
        Ok(ExperimentConfig {
            threads: threads as usize,
            experiment,
        })
    }

    fn prime(&self) -> Result<PrimeModulus, CliError> {
        parse_prime("p", required("p", &self.p)?)
    }

    fn spectral(&self) -> Result<SpectralConfig, CliError> {
        let p = self.prime()?;
        let cases = self
            .cases
            .as_deref()
            .unwrap_or_default()
            .iter()
            .map(|c| {
                Ok((
                    parse_matrix("cases.matrix", &c.matrix, p)?,
                    parse_seed_point("cases.xi0", &c.xi0, p)?,
                ))
            })
            .collect::<Result<_, CliError>>()?;
        Ok(SpectralConfig {
            p,
            samples: opt_u64("samples", &self.samples, 0)?,
            seed: opt_u64("seed", &self.seed, 0)?,
            window: opt_u64("window", &self.window, 2000)?,
            cases,
        })
    }

    fn trajectory(&self) -> Result<(MobiusMatrix, FpElem), CliError> {
        let p = self.prime()?;
        let m = parse_matrix("matrix", required("matrix", &self.matrix)?, p)?;
        let xi0 = parse_seed_point("xi0", required("xi0", &self.xi0)?, p)?;
        Ok((m, xi0))
    }

    fn sum_scan(&self) -> Result<SumScanConfig, CliError> {
        let (matrix, xi0) = self.trajectory()?;
        let p = matrix.modulus().get();
        let frequencies = parse_list("frequencies", &self.frequencies)?;
        if let Some(w) = frequencies.iter().find(|&&w| w % p == 0) {
            return Err(field_err("frequencies", format!("{w} gives the trivial character")));
        }
        Ok(SumScanConfig {
            matrix,
            xi0,
            frequencies,
            n_schedule: parse_list("n_schedule", &self.n_schedule)?,
            correlations: parse_tuples("correlations", &self.correlations)?,
            singles: parse_tuples("singles", &self.singles)?,
        })
    }

    fn weil(&self) -> Result<WeilConfig, CliError> {
        let max_degree = opt_u64("max_degree", &self.max_degree, 3)?;
        if max_degree == 0 {
            return Err(field_err("max_degree", "must be at least 1"));
        }
        Ok(WeilConfig {
            primes: parse_primes("primes", &self.primes)?,
            norm_one_primes: parse_primes("norm_one_primes", &self.norm_one_primes)?,
            functions_per_prime: opt_u64("functions_per_prime", &self.functions_per_prime, 100)?,
            max_degree: max_degree as usize,
            seed: opt_u64("seed", &self.seed, 0)?,
            character: opt_u64("character", &self.character, 1)?,
            envelope: self
                .envelope
                .as_deref()
                .map_or(Ok(10.0), |s| parse_f64("envelope", s))?,
        })
    }

    fn bsz(&self) -> Result<BszConfig, CliError> {
        let (matrix, xi0) = self.trajectory()?;
        let nu = match self.nu.as_deref().unwrap_or("mobius") {
            "mobius" => Weight::Mobius,
            "one" => Weight::One,
            other => return Err(field_err("nu", format!("{other:?} is not \"mobius\" or \"one\""))),
        };
        let f = match self.f.as_deref().unwrap_or("trajectory") {
            "trajectory" => Sequence::Trajectory,
            "one" => Sequence::One,
            other => return Err(field_err("f", format!("{other:?} is not \"trajectory\" or \"one\""))),
        };
        Ok(BszConfig {
            matrix,
            xi0,
            frequency: opt_u64("frequency", &self.frequency, 1)?,
            alpha: parse_f64("alpha", required("alpha", &self.alpha)?)?,
            n: parse_u64("n", required("n", &self.n)?)?,
            epsilon: self.epsilon.as_deref().map_or(Ok(0.1), |s| parse_f64("epsilon", s))?,
            nu,
            f,
        })
    }
}

/// Parses a config document; syntax errors carry line and column.
pub fn parse_config(text: &str, kind: CommandKind) -> Result<ExperimentConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    raw.validate(kind)
}

pub fn load_config(path: &Path, kind: CommandKind) -> Result<(ExperimentConfig, Vec<u8>), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(text, kind).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    Ok((cfg, bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_prime_rejected() {
        let err = parse_config(r#"{"p": "100", "limit": "1"}"#, CommandKind::VerifySpectral).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("`p`") && m.contains("not prime")),
            "{err}"
        );
    }

    #[test]
    fn repeated_root_rejected() {
        let text = r#"{"p": "101", "matrix": ["1", "0", "1", "1"], "xi0": "3", "n_schedule": []}"#;
        let err = parse_config(text, CommandKind::SumScan).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("RepeatedRoot")),
            "{err}"
        );
    }

    #[test]
    fn numbers_must_be_strings() {
        let err = parse_config("{\n  \"limit\": 10\n}", CommandKind::MobiusCheck).unwrap_err();
        assert!(matches!(&err, CliError::Config(m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn matrices_are_normalised() {
        // 2·(2,3,5,8) has det 4; λ = -1/2 is the smaller root of 1/4
        let text = r#"{"p": "101", "matrix": ["4", "6", "10", "16"], "xi0": "1"}"#;
        let cfg = parse_config(text, CommandKind::SumScan).unwrap();
        let Experiment::SumScan(s) = cfg.experiment else {
            panic!()
        };
        assert_eq!(s.matrix.entries(), [99, 98, 96, 93]);
        assert_eq!(cfg.threads, 1);
    }

    #[test]
    fn unknown_fields_and_wrong_command() {
        assert!(parse_config(r#"{"limit": "5", "bogus": "1"}"#, CommandKind::MobiusCheck).is_err());
        assert!(parse_config(r#"{"command": "sum-scan", "limit": "5"}"#, CommandKind::MobiusCheck).is_err());
    }
}
