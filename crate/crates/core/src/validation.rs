//! Empirical certification of the bound against exact entropies.
//!
//! Each trial samples a random symmetric collective attack, derives the
//! statistics it induces, and compares the key-rate bound with the exact
//! `S(A|E) - h(Q)` of that attack. A sound bound never exceeds the exact
//! value.

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::attack::{inner, AttackOperator, MAX_ANCILLA_DIMENSION};
use crate::entropy::binary_entropy;
use crate::error::{Error, Result};
use crate::estimation::estimate_inner_products;
use crate::keyrate::keyrate_bound;
use crate::scenario::ObservedStatistics;
use crate::types::{Alpha, Interval, Probability};

/// A trial violates the bound when `exact - bound` falls below this.
pub const SLACK_TOLERANCE: f64 = -1e-9;

/// Deterministic RNG stream for one trial, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

fn normalized(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-12 {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= n);
    Some(v)
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        if let Some(v) = normalized(gaussian_vector(rng, dim)) {
            return v;
        }
    }
}

/// Random unit vector orthogonal to the unit vector `f`.
fn random_orthogonal_unit<R: Rng + ?Sized>(rng: &mut R, f: &[Complex64]) -> Vec<Complex64> {
    loop {
        let mut v = gaussian_vector(rng, f.len());
        let proj = inner(f, &v);
        v.iter_mut().zip(f).for_each(|(x, y)| *x -= y * proj);
        if let Some(v) = normalized(v) {
            return v;
        }
    }
}

/// Samples an attack with `‖e0‖² = ‖e3‖² = 1-Q` and `‖e1‖² = ‖e2‖² = Q`
/// that satisfies the isometry constraints by construction.
///
/// `e0, e1, e3` are scaled Haar-random unit vectors `f0, f1, f3`; `e2` is
/// `√Q (μ f0 + ν g)` with `g ⊥ f0`, `μ = -<f1|f3>` and `ν = √(1 - |μ|²)`,
/// which makes `<e0|e2> = -<e1|e3>`.
pub fn sample_symmetric_attack<R: Rng + ?Sized>(
    q: Probability,
    dim: usize,
    rng: &mut R,
) -> Result<AttackOperator> {
    let q = q.value();
    if dim == 0 || dim > MAX_ANCILLA_DIMENSION {
        return Err(Error::InvalidParameter(format!(
            "ancilla dimension {dim} outside 1..={MAX_ANCILLA_DIMENSION}"
        )));
    }
    let interior = q > 0.0 && q < 1.0;
    if dim < 2 && interior {
        return Err(Error::InvalidParameter(format!(
            "a one-dimensional ancilla cannot realize a symmetric attack with Q = {q}"
        )));
    }
    let f0 = random_unit_vector(rng, dim);
    let f1 = random_unit_vector(rng, dim);
    let f3 = random_unit_vector(rng, dim);
    let f2 = if interior {
        let mu = -inner(&f1, &f3);
        let nu = (1.0 - mu.norm_sqr()).max(0.0).sqrt();
        let g = random_orthogonal_unit(rng, &f0);
        f0.iter().zip(&g).map(|(a, b)| a * mu + b * nu).collect()
    } else {
        random_unit_vector(rng, dim)
    };
    let scale = |v: &[Complex64], s: f64| v.iter().map(|z| z * s).collect::<Vec<_>>();
    let (keep, flip) = ((1.0 - q).sqrt(), q.sqrt());
    AttackOperator::new(
        scale(&f0, keep),
        scale(&f1, flip),
        scale(&f2, flip),
        scale(&f3, keep),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    pub trials: usize,
    /// `Q` of each trial is drawn uniformly from this range.
    pub q_range: Interval,
    /// Every sampled attack is checked at each of these `α`.
    pub alphas: Vec<Alpha>,
    pub dim: usize,
    pub seed: u64,
    /// Directory receiving JSON dumps of failing trials.
    pub dump_dir: Option<PathBuf>,
    pub parallel: bool,
}

impl ValidationConfig {
    pub fn new(trials: usize, q_range: Interval, alphas: Vec<Alpha>, dim: usize, seed: u64) -> Self {
        ValidationConfig {
            trials,
            q_range,
            alphas,
            dim,
            seed,
            dump_dir: None,
            parallel: true,
        }
    }
}

/// A failing trial, serialized for reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct FailureDump {
    pub trial: usize,
    #[serde(rename = "Q")]
    pub q: f64,
    pub alpha: f64,
    pub attack: AttackOperator,
    pub statistics: Option<ObservedStatistics>,
    pub bound: Option<f64>,
    pub exact: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub trials: usize,
    /// Trials where some `α` gave `exact - bound < -1e-9` or failed to evaluate.
    pub violations: usize,
    /// Largest `exact - bound` seen.
    pub max_gap: f64,
    /// Smallest `exact - bound` seen; negative means a violation.
    pub min_slack: f64,
    /// Largest deviation between estimated and true overlaps.
    pub max_estimation_error: f64,
    pub seed: u64,
    pub alpha_values: Vec<f64>,
    pub dim: usize,
    pub q_range: Interval,
    #[serde(skip)]
    pub failures: Vec<FailureDump>,
}

impl PartialEq for FailureDump {
    fn eq(&self, other: &Self) -> bool {
        self.trial == other.trial && self.alpha.to_bits() == other.alpha.to_bits()
    }
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphas_sq: Vec<String> = self
            .alpha_values
            .iter()
            .map(|a| format!("{:.6}", a * a))
            .collect();
        writeln!(f, "trials:               {}", self.trials)?;
        writeln!(f, "seed:                 {}", self.seed)?;
        writeln!(f, "ancilla dimension:    {}", self.dim)?;
        writeln!(f, "Q range:              [{:.6}, {:.6}]", self.q_range.lo, self.q_range.hi)?;
        writeln!(f, "alpha^2 values:       {}", alphas_sq.join(", "))?;
        writeln!(f, "violations:           {}", self.violations)?;
        writeln!(f, "min slack:            {:.6e}", self.min_slack)?;
        writeln!(f, "max gap:              {:.6e}", self.max_gap)?;
        writeln!(f, "max estimation error: {:.6e}", self.max_estimation_error)?;
        write!(
            f,
            "result:               {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// `exact - bound` for one attack at one `α`: the exact
/// `S(A|E) - h(Q)` minus the key-rate bound computed from the statistics
/// the attack induces.
pub fn attack_slack(attack: &AttackOperator, alpha: Alpha) -> Result<f64> {
    let stats = attack.induced_statistics(alpha)?;
    let exact = attack.exact_conditional_entropy()? - binary_entropy(stats.q.value())?;
    Ok(exact - keyrate_bound(&stats)?.rate)
}

struct TrialOutcome {
    slacks: Vec<f64>,
    estimation_error: f64,
    failures: Vec<FailureDump>,
}

fn estimation_error(attack: &AttackOperator, stats: &ObservedStatistics) -> Result<f64> {
    let est = estimate_inner_products(stats)?;
    let truth = attack.exact_inner_products();
    Ok([
        est.re01 - truth.re01,
        est.re23 - truth.re23,
        est.re02 - truth.re02,
        est.re13 - truth.re13,
        est.re03(truth.re12) - truth.re03,
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.abs())))
}

fn run_trial(config: &ValidationConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, trial as u64);
    let range = config.q_range;
    let q = if range.width() > 0.0 {
        rng.random_range(range.lo..=range.hi)
    } else {
        range.lo
    };
    let q = Probability::new(q)?;
    let attack = sample_symmetric_attack(q, config.dim, &mut rng)?;
    let exact = attack
        .exact_conditional_entropy()
        .and_then(|s| Ok(s - binary_entropy(q.value())?));

    let mut outcome = TrialOutcome {
        slacks: Vec::with_capacity(config.alphas.len()),
        estimation_error: 0.0,
        failures: Vec::new(),
    };
    for &alpha in &config.alphas {
        let stats = attack.induced_statistics(alpha);
        let bound = stats.as_ref().map_err(Clone::clone).and_then(keyrate_bound);
        let dump = |error: Option<String>| FailureDump {
            trial,
            q: q.value(),
            alpha: alpha.value(),
            attack: attack.clone(),
            statistics: stats.as_ref().ok().copied(),
            bound: bound.as_ref().ok().map(|b| b.rate),
            exact: exact.as_ref().ok().copied(),
            error,
        };
        match (&stats, &bound, &exact) {
            (Ok(s), Ok(b), Ok(e)) => {
                let slack = e - b.rate;
                outcome.slacks.push(slack);
                if slack < SLACK_TOLERANCE {
                    outcome.failures.push(dump(None));
                }
                match estimation_error(&attack, s) {
                    Ok(err) => outcome.estimation_error = outcome.estimation_error.max(err),
                    Err(err) => outcome.failures.push(dump(Some(err.to_string()))),
                }
            }
            _ => {
                let msg = [stats.as_ref().err(), bound.as_ref().err(), exact.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .next()
                    .map(ToString::to_string);
                outcome.failures.push(dump(msg));
            }
        }
    }
    Ok(outcome)
}

/// Runs the validation campaign. The report depends only on the config:
/// each trial draws from its own RNG stream, so serial and parallel runs
/// agree bit for bit.
pub fn run_validation(config: &ValidationConfig) -> Result<ValidationReport> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if config.alphas.is_empty() {
        return Err(Error::InvalidParameter("at least one alpha is required".into()));
    }
    if config.q_range.lo < 0.0 || config.q_range.hi >= 1.0 || config.q_range.width() < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Q range {} must lie in [0, 1)",
            config.q_range
        )));
    }
    let outcomes: Vec<TrialOutcome> = if config.parallel {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect::<Result<_>>()?
    } else {
        (0..config.trials)
            .map(|t| run_trial(config, t))
            .collect::<Result<_>>()?
    };

    let mut report = ValidationReport {
        trials: config.trials,
        violations: 0,
        max_gap: f64::NEG_INFINITY,
        min_slack: f64::INFINITY,
        max_estimation_error: 0.0,
        seed: config.seed,
        alpha_values: config.alphas.iter().map(|a| a.value()).collect(),
        dim: config.dim,
        q_range: config.q_range,
        failures: Vec::new(),
    };
    for outcome in outcomes {
        for &s in &outcome.slacks {
            report.max_gap = report.max_gap.max(s);
            report.min_slack = report.min_slack.min(s);
        }
        report.max_estimation_error = report.max_estimation_error.max(outcome.estimation_error);
        if !outcome.failures.is_empty() {
            report.violations += 1;
            report.failures.extend(outcome.failures);
        }
    }

    if let Some(dir) = &config.dump_dir {
        write_failure_dumps(dir, &report.failures)?;
    }
    Ok(report)
}

/// Writes one JSON file per failure into `dir`.
pub fn write_failure_dumps(dir: &std::path::Path, failures: &[FailureDump]) -> Result<()> {
    if failures.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for f in failures {
        let path = dir.join(format!("failure-trial{:06}-alpha{:.6}.json", f.trial, f.alpha));
        let json = serde_json::to_string_pretty(f).expect("failure dumps serialize");
        std::fs::write(&path, json).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
