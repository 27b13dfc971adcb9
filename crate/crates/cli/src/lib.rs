//! Subcommands behind the `tsqkd` binary.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;
use tsqkd_core::{
    bb84_reference_rate, estimate_inner_products, keyrate_bound, run_validation,
    scenario_statistics, Alpha, InnerProductEstimates, Interval, KeyRateResult, ObservedStatistics,
    Probability, ScenarioKind, ScenarioSpec, ValidationConfig, ValidationReport,
};

use crate::format::significant;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNPHYSICAL: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

/// Significant digits of every number written to CSV.
pub const CSV_DIGITS: usize = 12;

pub const CSV_HEADER: [&str; 6] = ["Q", "alpha_sq", "rate", "bb84_rate", "minimizing_re12", "feasible"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] tsqkd_core::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("validation failed: {0} trial(s) violated the bound")]
    Violations(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use tsqkd_core::Error as E;
        match self {
            CliError::Core(E::UnphysicalStatistics { .. } | E::Domain { .. }) => EXIT_UNPHYSICAL,
            CliError::Core(E::InconsistentStatistics(_)) => EXIT_INCONSISTENT,
            CliError::Violations(_) => EXIT_VIOLATION,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
        }
    }

    /// Short machine-readable name of the failure class.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_UNPHYSICAL => "unphysical-statistics",
            EXIT_INCONSISTENT => "inconsistent-statistics",
            EXIT_VIOLATION => "validation-violation",
            _ => "usage",
        }
    }
}

fn io_error(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

fn alphas_from_squares(values: &[f64]) -> Result<Vec<Alpha>, CliError> {
    values
        .iter()
        .map(|&a2| Alpha::from_squared(a2).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub scenario: ScenarioKind,
    pub alpha_squared: Vec<f64>,
    pub q_min: f64,
    pub q_max: f64,
    pub steps: usize,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub include_bb84: bool,
}

/// One CSV row; `None` fields are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub alpha_sq: f64,
    pub rate: Option<f64>,
    pub bb84_rate: Option<f64>,
    pub minimizing_re12: Option<f64>,
}

impl SweepRow {
    pub fn feasible(&self) -> bool {
        self.rate.is_some()
    }

    fn record(&self) -> [String; 6] {
        let opt = |v: Option<f64>| v.map(|x| significant(x, CSV_DIGITS)).unwrap_or_default();
        [
            significant(self.q, CSV_DIGITS),
            significant(self.alpha_sq, CSV_DIGITS),
            opt(self.rate),
            opt(self.bb84_rate),
            opt(self.minimizing_re12),
            if self.feasible() { "1" } else { "0" }.to_string(),
        ]
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Usage(format!("--steps must be at least 2, got {}", self.steps)));
        }
        if !(0.0 <= self.q_min && self.q_min <= self.q_max && self.q_max <= 0.5) {
            return Err(CliError::Usage(format!(
                "need 0 <= q-min <= q-max <= 0.5, got [{}, {}]",
                self.q_min, self.q_max
            )));
        }
        if self.alpha_squared.is_empty() {
            return Err(CliError::Usage("at least one --alpha-sq is required".into()));
        }
        alphas_from_squares(&self.alpha_squared)?;
        Ok(())
    }

    /// Uniform grid over `[q_min, q_max]`, both endpoints included.
    pub fn q_grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.q_max
                } else {
                    self.q_min + (self.q_max - self.q_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Computes every sweep row, ordered by `Q` then ascending `α²`.
pub fn sweep_rows(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    let mut alpha_sq = config.alpha_squared.clone();
    alpha_sq.sort_by(f64::total_cmp);
    alpha_sq.dedup();
    let points: Vec<(f64, f64)> = config
        .q_grid()
        .into_iter()
        .flat_map(|q| alpha_sq.iter().map(move |&a2| (q, a2)))
        .collect();
    points
        .into_par_iter()
        .map(|(q, a2)| {
            let prob = Probability::new(q)?;
            let spec = ScenarioSpec::new(config.scenario, prob, Alpha::from_squared(a2)?)?;
            let result = scenario_statistics(&spec).and_then(|s| keyrate_bound(&s));
            Ok(SweepRow {
                q,
                alpha_sq: a2,
                rate: result.as_ref().ok().map(|r| r.rate),
                bb84_rate: config.include_bb84.then(|| bb84_reference_rate(prob)),
                minimizing_re12: result.as_ref().ok().map(|r| r.minimizing_re12),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn cmd_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    let rows = sweep_rows(config)?;
    match &config.output_path {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
            write_sweep_csv(&rows, file).map_err(|e| io_error(path, e))?;
        }
        None => {
            write_sweep_csv(&rows, std::io::stdout().lock())
                .map_err(|e| io_error(Path::new("<stdout>"), e))?;
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub statistics: ObservedStatistics,
    pub result: KeyRateResult,
    pub estimates: InnerProductEstimates,
    pub secure: bool,
}

pub fn load_statistics(path: &Path) -> Result<ObservedStatistics, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    ObservedStatistics::from_json(&text).map_err(|e| io_error(path, format!("invalid statistics: {e}")))
}

pub fn evaluate(stats: &ObservedStatistics) -> Result<Evaluation, CliError> {
    let estimates = estimate_inner_products(stats)?;
    let result = keyrate_bound(stats)?;
    Ok(Evaluation {
        statistics: *stats,
        result,
        estimates,
        secure: result.is_secure(),
    })
}

pub fn cmd_evaluate(stats_file: &Path) -> Result<Evaluation, CliError> {
    evaluate(&load_statistics(stats_file)?)
}

#[derive(Debug, Clone)]
pub struct ValidateArgs {
    pub trials: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub dim: usize,
    pub seed: u64,
    pub alpha_squared: Vec<f64>,
    pub dump_dir: Option<PathBuf>,
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<ValidationReport, CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if !(2..=4).contains(&args.dim) {
        return Err(CliError::Usage(format!("--dim must be 2, 3 or 4, got {}", args.dim)));
    }
    if !(0.0 <= args.q_min && args.q_min <= args.q_max && args.q_max < 1.0) {
        return Err(CliError::Usage(format!(
            "need 0 <= q-min <= q-max < 1, got [{}, {}]",
            args.q_min, args.q_max
        )));
    }
    let mut config = ValidationConfig::new(
        args.trials,
        Interval {
            lo: args.q_min,
            hi: args.q_max,
        },
        alphas_from_squares(&args.alpha_squared)?,
        args.dim,
        args.seed,
    );
    config.dump_dir = args.dump_dir.clone();
    Ok(run_validation(&config)?)
}

/// Statistics of one named scenario.
pub fn scenario_stats(kind: ScenarioKind, q: f64, alpha_sq: f64) -> Result<ObservedStatistics, CliError> {
    let q = Probability::new(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let alpha = Alpha::from_squared(alpha_sq).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = ScenarioSpec::new(kind, q, alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(scenario_statistics(&spec)?)
}

pub fn scenario_list() -> String {
    ScenarioKind::ALL
        .iter()
        .map(|k| format!("{:<14} {}\n", k.name(), k.description()))
        .collect()
}
