use thiserror::Error;

/// Errors produced by the key-rate library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },

    #[error("non-physical state: eigenvalue {0:e} below the clamping threshold")]
    NegativeEigenvalue(f64),

    #[error("state trace {0} deviates from 1")]
    InvalidTrace(f64),

    #[error("probability vector sums to {0}, expected 1")]
    Normalization(f64),

    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("attack violates unitarity: {constraint} off by {deviation:e}")]
    Unitarity {
        constraint: &'static str,
        deviation: f64,
    },

    #[error("attack is not symmetric: |<e1|e1> - <e2|e2>| = {0:e}")]
    Asymmetric(f64),

    #[error("unphysical statistics: {quantity} = {value} exceeds the Cauchy-Schwarz bound {bound}")]
    UnphysicalStatistics {
        quantity: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("inconsistent statistics: {0}")]
    InconsistentStatistics(String),

    #[error("scenario {scenario} is infeasible: {field} = {value} is not a probability")]
    ScenarioInfeasible {
        scenario: &'static str,
        field: &'static str,
        value: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
