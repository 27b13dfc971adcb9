//! The key-rate lower bound
//!
//! ```text
//! r >= 1 - (1-Q)·h(λρ) - Q·h(λσ) - h(Q)
//! λρ = 1/2 + |Re<e0|e3>| / (2(1-Q))
//! λσ = 1/2 + |Re<e1|e2>| / (2Q)
//! ```
//!
//! minimized over every `Re<e1|e2>` consistent with the observed statistics.

use serde::Serialize;

use crate::entropy::binary_entropy;
use crate::error::{Error, Result};
use crate::estimation::{
    estimate_inner_products, feasible_re12_set, InnerProductEstimates, CAUCHY_SCHWARZ_TOLERANCE,
};
use crate::optimize::GridGolden;
use crate::scenario::ObservedStatistics;
use crate::types::{Interval, Probability};

/// Outcome of [`keyrate_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeyRateResult {
    /// Signed rate in bits per raw-key bit; negative means no secure key.
    pub rate: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub minimizing_re12: f64,
    pub re03_at_min: f64,
    pub lambda_rho: f64,
    /// `1/2` when `Q = 0`, where the term carries zero weight.
    pub lambda_sigma: f64,
    pub feasible_interval: Interval,
}

impl KeyRateResult {
    /// Re-evaluates the bound from the stored eigenvalues.
    pub fn recompute_rate(&self) -> Result<f64> {
        let q = self.q;
        Ok(1.0
            - (1.0 - q) * binary_entropy(self.lambda_rho)?
            - q * binary_entropy(self.lambda_sigma)?
            - binary_entropy(q)?)
    }

    pub fn is_secure(&self) -> bool {
        self.rate > 0.0
    }
}

/// Relaxed top eigenvalue of Eve's state conditioned on no error.
pub fn lambda_rho(re03: f64, q: Probability) -> Result<f64> {
    let q = q.value();
    if q >= 1.0 {
        return Err(Error::Domain {
            what: "Q",
            value: q,
            domain: "[0, 1)",
        });
    }
    let bound = 1.0 - q;
    if !(re03.abs() <= bound + CAUCHY_SCHWARZ_TOLERANCE) {
        return Err(Error::UnphysicalStatistics {
            quantity: "Re<e0|e3>",
            value: re03,
            bound,
        });
    }
    Ok((0.5 + re03.abs() / (2.0 * bound)).min(1.0))
}

/// Relaxed top eigenvalue of Eve's state conditioned on an error.
pub fn lambda_sigma(re12: f64, q: Probability) -> Result<f64> {
    let q = q.value();
    if q <= 0.0 {
        return Err(Error::InvalidParameter(
            "lambda_sigma is undefined at Q = 0; the error branch carries no weight".into(),
        ));
    }
    if !(re12.abs() <= q + CAUCHY_SCHWARZ_TOLERANCE) {
        return Err(Error::UnphysicalStatistics {
            quantity: "Re<e1|e2>",
            value: re12,
            bound: q,
        });
    }
    Ok((0.5 + re12.abs() / (2.0 * q)).min(1.0))
}

/// Four-state BB84 rate `1 - 2h(Q)` with equal error in both bases.
pub fn bb84_reference_rate(q: Probability) -> f64 {
    1.0 - 2.0 * binary_entropy(q.value()).expect("probability is in range")
}

/// Bound value at a single candidate `re12`, without physicality checks.
fn rate_at(est: &InnerProductEstimates, q: f64, h_q: f64, re12: f64) -> f64 {
    let lr = (0.5 + est.re03(re12).abs() / (2.0 * (1.0 - q))).min(1.0);
    let ls = (0.5 + re12.abs() / (2.0 * q)).min(1.0);
    let h = |x: f64| binary_entropy(x).unwrap_or(0.0);
    1.0 - (1.0 - q) * h(lr) - q * h(ls) - h_q
}

/// Evaluates the key-rate lower bound for a set of observed statistics.
pub fn keyrate_bound(stats: &ObservedStatistics) -> Result<KeyRateResult> {
    keyrate_bound_with(stats, &GridGolden::default())
}

/// [`keyrate_bound`] with an explicit minimizer configuration.
pub fn keyrate_bound_with(stats: &ObservedStatistics, minimizer: &GridGolden) -> Result<KeyRateResult> {
    let est = estimate_inner_products(stats)?;
    keyrate_from_estimates(&est, stats.q, minimizer)
}

/// Minimizes the bound over the feasible `re12` values of `est`.
pub fn keyrate_from_estimates(
    est: &InnerProductEstimates,
    q: Probability,
    minimizer: &GridGolden,
) -> Result<KeyRateResult> {
    let feasible = feasible_re12_set(est, q)?;
    let qv = q.value();
    let h_q = binary_entropy(qv)?;

    if qv == 0.0 {
        let re03 = est.re03(0.0);
        let lr = lambda_rho(re03, q)?;
        return Ok(KeyRateResult {
            rate: 1.0 - binary_entropy(lr)?,
            q: 0.0,
            minimizing_re12: 0.0,
            re03_at_min: re03,
            lambda_rho: lr,
            lambda_sigma: 0.5,
            feasible_interval: feasible,
        });
    }

    // kinks of the two absolute values
    let kinks = [0.0, est.re03_intercept / -est.re03_slope];
    let best = minimizer.minimize(|x| rate_at(est, qv, h_q, x), feasible, &kinks);
    let re12 = best.x.clamp(-qv, qv);
    let re03 = est.re03(re12);
    let lr = lambda_rho(re03, q)?;
    let ls = lambda_sigma(re12, q)?;
    let result = KeyRateResult {
        rate: 0.0,
        q: qv,
        minimizing_re12: re12,
        re03_at_min: re03,
        lambda_rho: lr,
        lambda_sigma: ls,
        feasible_interval: feasible,
    };
    Ok(KeyRateResult {
        rate: result.recompute_rate()?,
        ..result
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{depolarizing_statistics, scenario_statistics, ScenarioKind, ScenarioSpec};
    use crate::types::Alpha;
    use proptest::prelude::*;

    fn p(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    #[test]
    fn lambda_rho_examples() {
        for q in [0.0, 0.1, 0.4] {
            assert_eq!(lambda_rho(1.0 - q, p(q)).unwrap(), 1.0);
            assert_eq!(lambda_rho(0.0, p(q)).unwrap(), 0.5);
        }
        assert!((lambda_rho(0.8, p(0.1)).unwrap() - (0.5 + 0.8 / 1.8)).abs() < 1e-15);
        assert!(matches!(
            lambda_rho(0.95, p(0.1)),
            Err(Error::UnphysicalStatistics { .. })
        ));
        assert!(lambda_rho(0.0, p(1.0)).is_err());
    }

    #[test]
    fn lambda_sigma_examples() {
        assert_eq!(lambda_sigma(0.1, p(0.1)).unwrap(), 1.0);
        assert_eq!(lambda_sigma(0.0, p(0.1)).unwrap(), 0.5);
        assert!((lambda_sigma(-0.05, p(0.1)).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(
            lambda_sigma(-0.05, p(0.1)).unwrap(),
            lambda_sigma(0.05, p(0.1)).unwrap()
        );
        assert!(lambda_sigma(0.0, p(0.0)).is_err());
        assert!(lambda_sigma(0.2, p(0.1)).is_err());
    }

    #[test]
    fn bb84_reference_examples() {
        assert_eq!(bb84_reference_rate(p(0.0)), 1.0);
        assert_eq!(bb84_reference_rate(p(0.5)), -1.0);
        assert!(bb84_reference_rate(p(0.11)).abs() < 5e-4);
    }

    #[test]
    fn perfect_channel_has_unit_rate() {
        let r = keyrate_bound(&depolarizing_statistics(p(0.0), Alpha::plus()).unwrap()).unwrap();
        assert_eq!(r.rate, 1.0);
        assert_eq!(r.minimizing_re12, 0.0);
        assert_eq!(r.recompute_rate().unwrap(), r.rate);
    }

    #[test]
    fn depolarizing_matches_bb84() {
        for a2 in [0.2, 0.5, 0.8] {
            let alpha = Alpha::from_squared(a2).unwrap();
            for k in 1..50 {
                let q = p(k as f64 / 100.0);
                let r = keyrate_bound(&depolarizing_statistics(q, alpha).unwrap()).unwrap();
                assert!(
                    (r.rate - bb84_reference_rate(q)).abs() < 1e-9,
                    "Q = {q}, α² = {a2}: {} vs {}",
                    r.rate,
                    bb84_reference_rate(q)
                );
                // optimum sits where λρ = λσ = 1 - Q
                assert!((r.lambda_rho - (1.0 - q.value())).abs() < 1e-5);
                assert!((r.lambda_sigma - (1.0 - q.value())).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn stored_fields_reproduce_rate() {
        for kind in ScenarioKind::ALL {
            let spec = ScenarioSpec::new(kind, p(0.06), Alpha::from_squared(0.3).unwrap()).unwrap();
            let r = keyrate_bound(&scenario_statistics(&spec).unwrap()).unwrap();
            assert!((r.recompute_rate().unwrap() - r.rate).abs() < 1e-12);
            assert!((0.5..=1.0).contains(&r.lambda_rho));
            assert!((0.5..=1.0).contains(&r.lambda_sigma));
            assert!(r.feasible_interval.contains(r.minimizing_re12));
        }
    }

    #[test]
    fn inconsistent_statistics_propagate() {
        let alpha = Alpha::from_squared(0.2).unwrap();
        let stats = ObservedStatistics {
            q_a: Probability::ZERO,
            ..depolarizing_statistics(p(0.2), alpha).unwrap()
        };
        assert!(matches!(
            keyrate_bound(&stats),
            Err(Error::InconsistentStatistics(_))
        ));
    }

    proptest! {
        #[test]
        fn minimizer_beats_random_probes(
            q in 0.001f64..0.3,
            a2 in 0.05f64..0.95,
            kind in 0usize..5,
            probes in prop::collection::vec(0.0f64..1.0, 64),
        ) {
            let spec = ScenarioSpec::new(ScenarioKind::ALL[kind], p(q), Alpha::from_squared(a2).unwrap()).unwrap();
            let stats = scenario_statistics(&spec).unwrap();
            let est = estimate_inner_products(&stats).unwrap();
            let Ok(r) = keyrate_bound(&stats) else { return Ok(()); };
            let h_q = binary_entropy(q).unwrap();
            for u in probes {
                let x = r.feasible_interval.lo + u * r.feasible_interval.width();
                prop_assert!(r.rate <= rate_at(&est, q, h_q, x) + 1e-9);
            }
        }
    }
}
