//! Reconstruction of Eve's ancilla overlaps from observed statistics.
//!
//! Writing `re_ij = Re<e_i|e_j>`, the mismatched-basis probabilities give
//!
//! ```text
//! p_{0,a} = α²(1-Q) + β²Q + 2αβ re01
//! p_{1,a} = α²Q + β²(1-Q) + 2αβ re23
//! p_{a,0} = α²(1-Q) + β²Q + 2αβ re02
//! ```
//!
//! unitarity forces `re13 = -re02`, and the `A`-basis error rate pins
//! `re03` as an affine function of the one remaining unknown `re12`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::ObservedStatistics;
use crate::types::{Interval, Probability};

/// Slack on every Cauchy-Schwarz screen.
pub const CAUCHY_SCHWARZ_TOLERANCE: f64 = 1e-9;

/// Real parts of the ancilla overlaps consistent with a set of statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProductEstimates {
    pub re01: f64,
    pub re23: f64,
    pub re02: f64,
    pub re13: f64,
    pub re03_intercept: f64,
    pub re03_slope: f64,
    /// The Cauchy-Schwarz range `[-Q, Q]` of `re12`.
    pub re12_interval: Interval,
}

impl InnerProductEstimates {
    /// `re03` implied by a candidate value of `re12`.
    #[inline]
    pub fn re03(&self, re12: f64) -> f64 {
        self.re03_intercept + self.re03_slope * re12
    }
}

fn screen(quantity: &'static str, value: f64, bound: f64) -> Result<()> {
    if value.abs() > bound + CAUCHY_SCHWARZ_TOLERANCE {
        return Err(Error::UnphysicalStatistics {
            quantity,
            value,
            bound,
        });
    }
    Ok(())
}

/// Solves the parameter-estimation equations for the observable overlaps.
pub fn estimate_inner_products(stats: &ObservedStatistics) -> Result<InnerProductEstimates> {
    let q = stats.q.value();
    if q >= 1.0 {
        return Err(Error::Domain {
            what: "Q",
            value: q,
            domain: "[0, 1)",
        });
    }
    let a = stats.alpha.value();
    let b = stats.alpha.beta();
    let a2 = a * a;
    let b2 = b * b;
    let ab = a * b;
    let a2b2 = a2 * b2;
    if ab == 0.0 {
        return Err(Error::Domain {
            what: "alpha*beta",
            value: ab,
            domain: "nonzero",
        });
    }

    let re01 = (stats.p0a.value() - a2 * (1.0 - q) - b2 * q) / (2.0 * ab);
    let re23 = (stats.p1a.value() - a2 * q - b2 * (1.0 - q)) / (2.0 * ab);
    let re02 = (stats.pa0.value() - a2 * (1.0 - q) - b2 * q) / (2.0 * ab);

    let cross_bound = (q * (1.0 - q)).sqrt();
    screen("Re<e0|e1>", re01, cross_bound)?;
    screen("Re<e2|e3>", re23, cross_bound)?;
    screen("Re<e0|e2>", re02, cross_bound)?;

    // α⁴ + β⁴ = 1 - 2α²β²
    let numerator = 2.0 * a2b2 * (1.0 - q) + (1.0 - 2.0 * a2b2) * q - stats.q_a.value()
        + 2.0 * ab * (b2 - a2) * re02
        - 2.0 * a2 * ab * re01
        - 2.0 * ab * b2 * re23;

    Ok(InnerProductEstimates {
        re01,
        re23,
        re02,
        re13: -re02,
        re03_intercept: numerator / (2.0 * a2b2),
        re03_slope: -1.0,
        re12_interval: Interval { lo: -q, hi: q },
    })
}

/// The values of `re12` in `[-Q, Q]` whose implied `re03` also satisfies
/// `|re03| <= 1 - Q`. Because `re03` is affine in `re12` this is a single
/// interval; an empty set means no collective attack reproduces the
/// statistics.
pub fn feasible_re12_set(est: &InnerProductEstimates, q: Probability) -> Result<Interval> {
    let q = q.value();
    let radius = (1.0 - q) + CAUCHY_SCHWARZ_TOLERANCE;
    // |c + s x| <= r  with s = ±1  <=>  x ∈ [(-r - c)/s, (r - c)/s] (ordered)
    let (x1, x2) = (
        (-radius - est.re03_intercept) / est.re03_slope,
        (radius - est.re03_intercept) / est.re03_slope,
    );
    let allowed = Interval {
        lo: x1.min(x2),
        hi: x1.max(x2),
    };
    est.re12_interval.intersect(&allowed).ok_or_else(|| {
        Error::InconsistentStatistics(format!(
            "no Re<e1|e2> in {} keeps |Re<e0|e3>| <= {} (Re<e0|e3> = {} - Re<e1|e2>)",
            est.re12_interval,
            1.0 - q,
            est.re03_intercept
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{depolarizing_statistics, scenario_statistics, ScenarioKind, ScenarioSpec};
    use crate::types::Alpha;

    fn p(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    #[test]
    fn depolarizing_recovers_zero_overlaps() {
        for a2 in [0.1, 0.2, 0.5, 0.8, 0.95] {
            for q in [0.0, 0.01, 0.1, 0.3, 0.5] {
                let alpha = Alpha::from_squared(a2).unwrap();
                let est = estimate_inner_products(&depolarizing_statistics(p(q), alpha).unwrap())
                    .unwrap();
                assert!(est.re01.abs() < 1e-12);
                assert!(est.re23.abs() < 1e-12);
                assert!(est.re02.abs() < 1e-12);
                assert_eq!(est.re13, -est.re02);
                assert_eq!(est.re03_slope, -1.0);
                for x in [-q, 0.0, q] {
                    assert!((est.re03(x) - (1.0 - 2.0 * q - x)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_channel_estimates() {
        let est =
            estimate_inner_products(&depolarizing_statistics(p(0.0), Alpha::plus()).unwrap())
                .unwrap();
        assert!((est.re03(0.0) - 1.0).abs() < 1e-15);
        assert_eq!(est.re12_interval, Interval::point(0.0));
    }

    #[test]
    fn depolarizing_is_alpha_independent() {
        let q = p(0.07);
        let reference = estimate_inner_products(
            &depolarizing_statistics(q, Alpha::new(0.3).unwrap()).unwrap(),
        )
        .unwrap();
        for alpha in [Alpha::plus(), Alpha::new(0.9).unwrap()] {
            let est = estimate_inner_products(&depolarizing_statistics(q, alpha).unwrap()).unwrap();
            assert!((est.re01 - reference.re01).abs() < 1e-12);
            assert!((est.re23 - reference.re23).abs() < 1e-12);
            assert!((est.re02 - reference.re02).abs() < 1e-12);
            assert!((est.re03_intercept - reference.re03_intercept).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_map_has_unit_negative_slope() {
        let stats = ObservedStatistics::new(0.6, 0.08, 0.12, 0.4, 0.6, 0.35).unwrap();
        let est = estimate_inner_products(&stats).unwrap();
        for (x, y) in [(-0.08, 0.03), (0.0, 0.08), (0.05, -0.02)] {
            assert!((est.re03(x) - est.re03(y) + (x - y)).abs() < 1e-15);
        }
    }

    #[test]
    fn scenario_targets_are_recovered() {
        for a2 in [0.2, 0.5, 0.8] {
            let alpha = Alpha::from_squared(a2).unwrap();
            for q in [0.0f64, 0.02, 0.1, 0.25] {
                let cross = (q * (1.0 - q)).sqrt();
                let est = |kind| {
                    let spec = ScenarioSpec::new(kind, p(q), alpha).unwrap();
                    estimate_inner_products(&scenario_statistics(&spec).unwrap()).unwrap()
                };
                let e = est(ScenarioKind::Re02Extremal);
                assert!((e.re02 + cross).abs() < 1e-9);
                assert!((e.re13 - cross).abs() < 1e-9);
                assert!(e.re01.abs() < 1e-12 && e.re23.abs() < 1e-12);
                let e = est(ScenarioKind::Re23Extremal);
                assert!((e.re23 - cross).abs() < 1e-9);
                assert!(e.re01.abs() < 1e-12 && e.re02.abs() < 1e-12);
                let ab2 = 2.0 * a2 * (1.0 - a2);
                let e = est(ScenarioKind::QaDouble);
                assert!((e.re03(0.0) - (1.0 - 2.0 * q - q / ab2)).abs() < 1e-12);
                let e = est(ScenarioKind::QaHalf);
                assert!((e.re03(0.0) - (1.0 - 2.0 * q + 0.5 * q / ab2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cauchy_schwarz_screen_names_quantity() {
        // α = 1/√2, Q = 0.1: |re02| <= 0.3, but pa0 = 0.95 gives re02 = 0.45
        let stats = ObservedStatistics::new(
            std::f64::consts::FRAC_1_SQRT_2,
            0.1,
            0.1,
            0.5,
            0.5,
            0.95,
        )
        .unwrap();
        match estimate_inner_products(&stats) {
            Err(Error::UnphysicalStatistics { quantity, .. }) => assert_eq!(quantity, "Re<e0|e2>"),
            other => panic!("expected screen failure, got {other:?}"),
        }
    }

    #[test]
    fn q_one_is_rejected() {
        let stats = ObservedStatistics::new(0.5, 1.0, 0.5, 0.5, 0.5, 0.5).unwrap();
        assert!(matches!(
            estimate_inner_products(&stats),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn feasible_set_examples() {
        let est = estimate_inner_products(&depolarizing_statistics(p(0.1), Alpha::plus()).unwrap())
            .unwrap();
        let set = feasible_re12_set(&est, p(0.1)).unwrap();
        assert_eq!(set, Interval { lo: -0.1, hi: 0.1 });

        let est = estimate_inner_products(&depolarizing_statistics(p(0.0), Alpha::plus()).unwrap())
            .unwrap();
        assert_eq!(feasible_re12_set(&est, p(0.0)).unwrap(), Interval::point(0.0));
    }

    #[test]
    fn feasible_set_trims_partially() {
        // qa-half at α² = 0.2 and Q = 0.3 pushes re03 above 1 - Q for
        // negative re12, so the left part of [-Q, Q] is excluded.
        let alpha = Alpha::from_squared(0.2).unwrap();
        let spec = ScenarioSpec::new(ScenarioKind::QaHalf, p(0.3), alpha).unwrap();
        let est = estimate_inner_products(&scenario_statistics(&spec).unwrap()).unwrap();
        let set = feasible_re12_set(&est, p(0.3)).unwrap();
        assert!(set.lo > -0.3 && set.hi == 0.3);
        assert!((est.re03(set.lo) - 0.7).abs() < 2e-9);
    }

    #[test]
    fn zero_qa_with_large_q_is_inconsistent() {
        let alpha = Alpha::from_squared(0.2).unwrap();
        let base = depolarizing_statistics(p(0.2), alpha).unwrap();
        let stats = ObservedStatistics {
            q_a: Probability::ZERO,
            ..base
        };
        let est = estimate_inner_products(&stats).unwrap();
        assert!(matches!(
            feasible_re12_set(&est, p(0.2)),
            Err(Error::InconsistentStatistics(_))
        ));
    }
}
