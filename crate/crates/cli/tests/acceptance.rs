//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Run with `--nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use tsqkd_cli::{sweep_rows, SweepConfig};
use tsqkd_core::entropy::binary_entropy;
use tsqkd_core::*;

const ALPHA_SQ: [f64; 3] = [0.2, 0.5, 0.8];

type Check = fn() -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn p(x: f64) -> Probability {
    Probability::new(x).unwrap()
}

fn alphas() -> Vec<Alpha> {
    ALPHA_SQ.iter().map(|&a2| Alpha::from_squared(a2).unwrap()).collect()
}

fn q_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 100.0).collect()
}

fn depolarizing_rate(q: f64, alpha: Alpha) -> f64 {
    keyrate_bound(&depolarizing_statistics(p(q), alpha).unwrap()).unwrap().rate
}

fn scenario_rate(kind: ScenarioKind, q: f64, alpha: Alpha) -> Option<f64> {
    let spec = ScenarioSpec::new(kind, p(q), alpha).ok()?;
    keyrate_bound(&scenario_statistics(&spec).ok()?).ok().map(|r| r.rate)
}

/// Root of `f` on `[lo, hi]`, assuming `f(lo) > 0 > f(hi)`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The same attacks the `validate` subcommand draws for seed 42.
fn campaign_attacks() -> Vec<AttackOperator> {
    (0..1000u64)
        .map(|trial| {
            let mut rng = trial_rng(42, trial);
            let q = rand::Rng::random_range(&mut rng, 0.0..=0.25);
            sample_symmetric_attack(p(q), 4, &mut rng).unwrap()
        })
        .collect()
}

fn depolarizing_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for q in q_grid() {
        let expected = 1.0 - 2.0 * binary_entropy(q).unwrap();
        for alpha in alphas() {
            worst = worst.max((depolarizing_rate(q, alpha) - expected).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |rate - (1 - 2h(Q))| = {worst:.3e} (tol 1e-6)"))
}

fn threshold() -> Outcome {
    let config = SweepConfig {
        scenario: ScenarioKind::Depolarizing,
        alpha_squared: ALPHA_SQ.to_vec(),
        q_min: 0.0,
        q_max: 0.15,
        steps: 31,
        output_path: None,
        include_bb84: false,
    };
    let rows = sweep_rows(&config).unwrap();
    let mut crossings = Vec::new();
    for alpha in alphas() {
        let a2 = alpha.squared();
        let series: Vec<_> = rows.iter().filter(|r| (r.alpha_sq - a2).abs() < 1e-15).collect();
        let bracket = series
            .windows(2)
            .find(|w| w[0].rate.unwrap() > 0.0 && w[1].rate.unwrap() <= 0.0)
            .expect("sign change on the sweep");
        crossings.push(bisect(|q| depolarizing_rate(q, alpha), bracket[0].q, bracket[1].q));
    }
    let ok = crossings.iter().all(|c| (c - 0.11).abs() <= 5e-4);
    let shown: Vec<String> = crossings.iter().map(|c| format!("{c:.6}")).collect();
    outcome(ok, format!("zero crossing at Q = {} (target 0.1100 ± 0.0005)", shown.join(", ")))
}

fn alpha_invariance() -> Outcome {
    let mut worst = 0.0f64;
    for q in q_grid() {
        let rates: Vec<f64> = alphas().into_iter().map(|a| depolarizing_rate(q, a)).collect();
        for i in 0..rates.len() {
            for j in i + 1..rates.len() {
                worst = worst.max((rates[i] - rates[j]).abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("max pairwise spread = {worst:.3e} (tol 1e-9)"))
}

fn oracle_soundness() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tsqkd"))
        .args([
            "validate", "--trials", "1000", "--q-max", "0.25", "--dim", "4", "--seed", "42", "--alpha-sq",
            "0.2", "--alpha-sq", "0.5", "--alpha-sq", "0.8",
        ])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let violations = text
        .lines()
        .find_map(|l| l.strip_prefix("violations:"))
        .map(|v| v.trim().to_string())
        .unwrap_or_else(|| "?".into());
    let ok = out.status.success() && violations == "0" && elapsed < Duration::from_secs(120);
    outcome(
        ok,
        format!("violations = {violations}, exit {:?}, {:.1}s (limit 120s)", out.status.code(), elapsed.as_secs_f64()),
    )
}

fn estimation_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for attack in campaign_attacks() {
        let truth = attack.exact_inner_products();
        for alpha in alphas() {
            let est = estimate_inner_products(&attack.induced_statistics(alpha).unwrap()).unwrap();
            for d in [
                est.re01 - truth.re01,
                est.re23 - truth.re23,
                est.re02 - truth.re02,
                est.re03(truth.re12) - truth.re03,
            ] {
                worst = worst.max(d.abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("max round-trip error = {worst:.3e} over 1000 attacks (tol 1e-9)"))
}

fn eigenvalue_cross_check() -> Outcome {
    let mut worst_aligned = 0.0f64;
    let mut worst_excess = f64::NEG_INFINITY;
    for trial in 0..200u64 {
        let mut rng = trial_rng(6, trial);
        let q = rand::Rng::random_range(&mut rng, 0.01..0.4);
        let attack = sample_symmetric_attack(p(q), 4, &mut rng).unwrap();
        let general = attack.exact_inner_products();
        let top = hermitian_eigenvalues(&attack.rho_e().unwrap()).unwrap()[0];
        worst_excess = worst_excess.max(lambda_rho(general.re03, p(q)).unwrap() - top);

        let o = attack.overlap(0, 3);
        let aligned = attack.with_branch_phase(o.conj() / o.norm()).unwrap();
        let top = hermitian_eigenvalues(&aligned.rho_e().unwrap()).unwrap()[0];
        let formula = lambda_rho(aligned.exact_inner_products().re03, p(q)).unwrap();
        worst_aligned = worst_aligned.max((formula - top).abs());
    }
    outcome(
        worst_aligned <= 1e-10 && worst_excess <= 1e-10,
        format!(
            "real overlap: max |formula - numeric| = {worst_aligned:.3e}; complex: max formula - numeric = {worst_excess:.3e} (tol 1e-10)"
        ),
    )
}

fn scenario_ordering() -> Outcome {
    let mut ordered = true;
    for alpha in alphas() {
        for k in 1..=100 {
            let q = k as f64 / 1000.0;
            let half = scenario_rate(ScenarioKind::QaHalf, q, alpha);
            let dep = scenario_rate(ScenarioKind::Depolarizing, q, alpha);
            let double = scenario_rate(ScenarioKind::QaDouble, q, alpha);
            match (half, dep, double) {
                (Some(h), Some(d), Some(x)) if h >= d - 1e-12 && d >= x - 1e-12 => {}
                _ => ordered = false,
            }
        }
    }
    let alpha = Alpha::plus();
    let crossing = bisect(
        |q| scenario_rate(ScenarioKind::QaDouble, q, alpha).unwrap(),
        0.01,
        0.11,
    );
    let ok = ordered && crossing < 0.11 && (crossing - 0.075_68).abs() <= 1e-4;
    outcome(
        ok,
        format!("ordering holds on (0, 0.1]: {ordered}; qa-double crossing at α² = 0.5: Q = {crossing:.6} (< 0.11, regression 0.07568 ± 1e-4)"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 7] = [
        ("1 depolarizing equivalence", depolarizing_equivalence),
        ("2 threshold", threshold),
        ("3 alpha invariance", alpha_invariance),
        ("4 oracle soundness", oracle_soundness),
        ("5 estimation round trip", estimation_round_trip),
        ("6 eigenvalue cross-check", eigenvalue_cross_check),
        ("7 scenario ordering", scenario_ordering),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let result = check();
        println!("{} [{name}] {}", if result.passed { "PASS" } else { "FAIL" }, result.detail);
        if !result.passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
