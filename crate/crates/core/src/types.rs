//! Small numeric newtypes shared across the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when checking that a value lies in `[0, 1]`.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Values within [`PROBABILITY_TOLERANCE`] of the unit interval are
    /// clamped onto it; anything further out is rejected.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite()
            || !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&value)
        {
            return Err(Error::Domain {
                what: "probability",
                value,
                domain: "[0, 1]",
            });
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The public amplitude `α` of the third state `|a> = α|0> + β|1>`,
/// restricted to the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "(0, 1)",
            });
        }
        Ok(Alpha(alpha))
    }

    /// Builds `α` from `α²`, the parametrization used by sweeps.
    pub fn from_squared(alpha_sq: f64) -> Result<Self> {
        if !(alpha_sq > 0.0 && alpha_sq < 1.0) {
            return Err(Error::Domain {
                what: "alpha^2",
                value: alpha_sq,
                domain: "(0, 1)",
            });
        }
        Ok(Alpha(alpha_sq.sqrt()))
    }

    /// `α = 1/√2`, which makes `|a> = |+>`.
    pub fn plus() -> Self {
        Alpha(std::f64::consts::FRAC_1_SQRT_2)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn squared(self) -> f64 {
        self.0 * self.0
    }

    /// `β = √(1 - α²)`.
    #[inline]
    pub fn beta(self) -> f64 {
        (1.0 - self.0 * self.0).sqrt()
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] is empty"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection, or `None` when the two intervals do not overlap.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
