//! Shared fixtures for the benchmarks.

use tsqkd_core::{sample_symmetric_attack, trial_rng, AttackOperator, Probability};

/// `n` reproducible symmetric attacks at error rate `q`.
pub fn attacks(n: usize, q: f64, dim: usize) -> Vec<AttackOperator> {
    let q = Probability::new(q).expect("q is a probability");
    (0..n as u64)
        .map(|i| sample_symmetric_attack(q, dim, &mut trial_rng(0xbe7c, i)).expect("valid sampler input"))
        .collect()
}
