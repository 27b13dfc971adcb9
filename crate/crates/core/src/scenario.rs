//! Observable channel statistics and the named noise scenarios that
//! generate them.
//!
//! Every scenario starts from the depolarizing channel
//! `E_Q(ρ) = (1 - 2Q)ρ + Q·I` and perturbs one observable:
//!
//! | name            | change relative to depolarizing                        |
//! |-----------------|--------------------------------------------------------|
//! | `depolarizing`  | none                                                   |
//! | `qa-double`     | `Q_A = 2Q`                                             |
//! | `qa-half`       | `Q_A = Q/2`                                            |
//! | `re02-extremal` | `p_{a,0}` chosen so that `Re<e0|e2> = -√(Q(1-Q))`      |
//! | `re23-extremal` | `p_{1,a}` chosen so that `Re<e2|e3> = +√(Q(1-Q))`      |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Alpha, Probability, PROBABILITY_TOLERANCE};

/// Everything Alice and Bob can estimate from the public discussion.
///
/// `p_{x,y}` is the probability that Bob measures `|y>` when Alice sent `|x>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStatistics", into = "RawStatistics")]
pub struct ObservedStatistics {
    pub alpha: Alpha,
    /// Error rate in the computational basis.
    pub q: Probability,
    /// Error rate in the `{|a>, |ā>}` basis, `p_{a,ā}`.
    pub q_a: Probability,
    pub p0a: Probability,
    pub p1a: Probability,
    pub pa0: Probability,
}

/// Wire form of [`ObservedStatistics`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStatistics {
    alpha: f64,
    #[serde(rename = "Q")]
    q: f64,
    #[serde(rename = "QA")]
    q_a: f64,
    p0a: f64,
    p1a: f64,
    pa0: f64,
}

impl TryFrom<RawStatistics> for ObservedStatistics {
    type Error = Error;

    fn try_from(raw: RawStatistics) -> Result<Self> {
        ObservedStatistics::new(raw.alpha, raw.q, raw.q_a, raw.p0a, raw.p1a, raw.pa0)
    }
}

impl From<ObservedStatistics> for RawStatistics {
    fn from(s: ObservedStatistics) -> Self {
        RawStatistics {
            alpha: s.alpha.value(),
            q: s.q.value(),
            q_a: s.q_a.value(),
            p0a: s.p0a.value(),
            p1a: s.p1a.value(),
            pa0: s.pa0.value(),
        }
    }
}

fn named_probability(field: &'static str, value: f64) -> Result<Probability> {
    Probability::new(value).map_err(|_| Error::Domain {
        what: field,
        value,
        domain: "[0, 1]",
    })
}

impl ObservedStatistics {
    /// Validates every field, naming the first offending one.
    pub fn new(alpha: f64, q: f64, q_a: f64, p0a: f64, p1a: f64, pa0: f64) -> Result<Self> {
        Ok(ObservedStatistics {
            alpha: Alpha::new(alpha)?,
            q: named_probability("Q", q)?,
            q_a: named_probability("QA", q_a)?,
            p0a: named_probability("p0a", p0a)?,
            p1a: named_probability("p1a", p1a)?,
            pa0: named_probability("pa0", pa0)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("statistics always serialize")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Statistics of the depolarizing channel `E_Q(ρ) = (1 - 2Q)ρ + Q·I`.
pub fn depolarizing_statistics(q: Probability, alpha: Alpha) -> Result<ObservedStatistics> {
    let qv = q.value();
    if qv > 0.5 {
        return Err(Error::Domain {
            what: "Q",
            value: qv,
            domain: "[0, 1/2]",
        });
    }
    let shrink = 1.0 - 2.0 * qv;
    let a2 = alpha.squared();
    let b2 = 1.0 - a2;
    ObservedStatistics::new(
        alpha.value(),
        qv,
        qv,
        shrink * a2 + qv,
        shrink * b2 + qv,
        shrink * a2 + qv,
    )
}

/// The closed set of named noise scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Depolarizing,
    QaDouble,
    QaHalf,
    Re02Extremal,
    Re23Extremal,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Depolarizing,
        ScenarioKind::QaDouble,
        ScenarioKind::QaHalf,
        ScenarioKind::Re02Extremal,
        ScenarioKind::Re23Extremal,
    ];

    pub const NAMES: [&'static str; 5] = [
        "depolarizing",
        "qa-double",
        "qa-half",
        "re02-extremal",
        "re23-extremal",
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Depolarizing => "depolarizing",
            ScenarioKind::QaDouble => "qa-double",
            ScenarioKind::QaHalf => "qa-half",
            ScenarioKind::Re02Extremal => "re02-extremal",
            ScenarioKind::Re23Extremal => "re23-extremal",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::Depolarizing => "depolarizing channel, Q_A = Q",
            ScenarioKind::QaDouble => "depolarizing statistics with Q_A = 2Q",
            ScenarioKind::QaHalf => "depolarizing statistics with Q_A = Q/2",
            ScenarioKind::Re02Extremal => {
                "equal noise in both bases, p_{a,0} such that Re<e0|e2> = -sqrt(Q(1-Q))"
            }
            ScenarioKind::Re23Extremal => {
                "equal noise in both bases, p_{1,a} such that Re<e2|e3> = sqrt(Q(1-Q))"
            }
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown scenario '{s}' (valid: {})",
                    ScenarioKind::NAMES.join(", ")
                ))
            })
    }
}

/// A scenario evaluated at a particular `Q` and `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub q: Probability,
    pub alpha: Alpha,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, q: Probability, alpha: Alpha) -> Result<Self> {
        if q.value() > 0.5 {
            return Err(Error::Domain {
                what: "Q",
                value: q.value(),
                domain: "[0, 1/2]",
            });
        }
        Ok(ScenarioSpec { kind, q, alpha })
    }
}

fn scenario_probability(kind: ScenarioKind, field: &'static str, value: f64) -> Result<Probability> {
    if !value.is_finite() || !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&value) {
        return Err(Error::ScenarioInfeasible {
            scenario: kind.name(),
            field,
            value,
        });
    }
    Probability::new(value)
}

/// Statistics generated by a named scenario.
pub fn scenario_statistics(spec: &ScenarioSpec) -> Result<ObservedStatistics> {
    let base = depolarizing_statistics(spec.q, spec.alpha)?;
    let q = spec.q.value();
    let a = spec.alpha.value();
    let b = spec.alpha.beta();
    let cross = 2.0 * a * b * (q * (1.0 - q)).sqrt();
    let kind = spec.kind;
    let stats = match kind {
        ScenarioKind::Depolarizing => base,
        ScenarioKind::QaDouble => ObservedStatistics {
            q_a: scenario_probability(kind, "QA", 2.0 * q)?,
            ..base
        },
        ScenarioKind::QaHalf => ObservedStatistics {
            q_a: scenario_probability(kind, "QA", 0.5 * q)?,
            ..base
        },
        ScenarioKind::Re02Extremal => ObservedStatistics {
            pa0: scenario_probability(kind, "pa0", a * a * (1.0 - q) + b * b * q - cross)?,
            ..base
        },
        ScenarioKind::Re23Extremal => ObservedStatistics {
            p1a: scenario_probability(kind, "p1a", a * a * q + b * b * (1.0 - q) + cross)?,
            ..base
        },
    };
    Ok(stats)
}
