//! Asymptotic key-rate lower bound for the three-state BB84 protocol.
//!
//! Alice sends `|0>`, `|1>` or `|a> = α|0> + β|1>`; Bob measures in either
//! the computational basis or `{|a>, |ā>}`. Statistics from mismatched
//! bases (normally discarded) constrain Eve's collective attack well enough
//! that the bound reaches the four-state BB84 rate `1 - 2h(Q)` on a
//! depolarizing channel.
//!
//! The crate is organized bottom-up:
//!
//! - [`entropy`] and [`matrix`]: binary, Shannon and von Neumann entropies
//!   over small dense Hermitian matrices.
//! - [`attack`]: Eve's isometry, the statistics it induces, and the exact
//!   conditional entropy `S(A|E)` used as an oracle.
//! - [`scenario`]: observed statistics and the named noise scenarios.
//! - [`estimation`]: overlaps of Eve's ancilla states recovered from
//!   statistics.
//! - [`keyrate`]: the bound, minimized over the one unobservable overlap.
//! - [`validation`]: randomized certification of the bound against the
//!   exact oracle.
//!
//! ```
//! use tsqkd_core::{depolarizing_statistics, keyrate_bound, bb84_reference_rate, Alpha, Probability};
//!
//! let q = Probability::new(0.05).unwrap();
//! let stats = depolarizing_statistics(q, Alpha::plus()).unwrap();
//! let result = keyrate_bound(&stats).unwrap();
//! assert!((result.rate - bb84_reference_rate(q)).abs() < 1e-9);
//! ```

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attack;
pub mod entropy;
pub mod error;
pub mod estimation;
pub mod keyrate;
pub mod matrix;
pub mod optimize;
pub mod scenario;
pub mod types;
pub mod validation;

pub use attack::{AttackOperator, InnerProducts, SymmetryReport};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub use error::{Error, Result};
pub use estimation::{estimate_inner_products, feasible_re12_set, InnerProductEstimates};
pub use keyrate::{bb84_reference_rate, keyrate_bound, lambda_rho, lambda_sigma, KeyRateResult};
pub use matrix::{hermitian_eigenvalues, HermitianMatrix};
pub use optimize::GridGolden;
pub use scenario::{
    depolarizing_statistics, scenario_statistics, ObservedStatistics, ScenarioKind, ScenarioSpec,
};
pub use types::{Alpha, Interval, Probability};
pub use validation::{
    attack_slack, run_validation, sample_symmetric_attack, trial_rng, ValidationConfig, ValidationReport,
};
