//! Classical and von Neumann entropies, all in bits.

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, HermitianMatrix};
use crate::types::PROBABILITY_TOLERANCE;

/// Eigenvalues down to this value are treated as rounding noise and
/// clamped to zero; anything more negative is a non-physical state.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;

/// Allowed deviation of a probability vector (or a state's trace) from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[inline]
fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// `h(x) = -x log2 x - (1-x) log2 (1-x)` with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&x) {
        return Err(Error::Domain {
            what: "binary entropy argument",
            value: x,
            domain: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    Ok((-plogp(x) - plogp(1.0 - x)).clamp(0.0, 1.0))
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| !x.is_finite() || x < 0.0) {
        return Err(Error::Domain {
            what: "probability entry",
            value: bad,
            domain: "[0, 1]",
        });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(total));
    }
    Ok(-p.iter().map(|&x| plogp(x)).sum::<f64>())
}

/// `S(ρ) = -tr ρ log2 ρ` for a density matrix.
pub fn von_neumann_entropy(m: &HermitianMatrix) -> Result<f64> {
    let trace = m.trace();
    if (trace - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidTrace(trace));
    }
    let mut spectrum = hermitian_eigenvalues(m)?;
    let smallest = spectrum.last().copied().unwrap_or(0.0);
    if smallest < -EIGENVALUE_CLAMP {
        return Err(Error::NegativeEigenvalue(smallest));
    }
    for v in spectrum.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() < NORMALIZATION_TOLERANCE {
        spectrum.iter_mut().for_each(|v| *v /= total);
    }
    shannon_entropy(&spectrum)
}
