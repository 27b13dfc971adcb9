//! Eve's collective attack, written as the action of her unitary on the
//! raw-key states with the ancilla prepared in `|0>_E`:
//!
//! ```text
//! U|0,0> = |0,e0> + |1,e1>
//! U|1,0> = |0,e2> + |1,e3>
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::scenario::ObservedStatistics;
use crate::types::Alpha;

/// Tolerance on the three isometry constraints.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

/// Largest `|<e1|e1> - <e2|e2>|` accepted when deriving statistics.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

pub const MAX_ANCILLA_DIMENSION: usize = 4;

/// `<u|v>`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn combine(a: f64, u: &[Complex64], b: f64, v: &[Complex64]) -> Vec<Complex64> {
    u.iter().zip(v).map(|(x, y)| x * a + y * b).collect()
}

/// Four ancilla vectors `e0..e3` of a common dimension `d <= 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAttack", into = "RawAttack")]
pub struct AttackOperator {
    e: [Vec<Complex64>; 4],
}

#[derive(Serialize, Deserialize)]
struct RawAttack {
    ancilla_dimension: usize,
    e0: Vec<[f64; 2]>,
    e1: Vec<[f64; 2]>,
    e2: Vec<[f64; 2]>,
    e3: Vec<[f64; 2]>,
}

impl From<AttackOperator> for RawAttack {
    fn from(a: AttackOperator) -> Self {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        RawAttack {
            ancilla_dimension: a.dimension(),
            e0: pairs(&a.e[0]),
            e1: pairs(&a.e[1]),
            e2: pairs(&a.e[2]),
            e3: pairs(&a.e[3]),
        }
    }
}

impl TryFrom<RawAttack> for AttackOperator {
    type Error = Error;

    fn try_from(raw: RawAttack) -> Result<Self> {
        let vec = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        let attack = AttackOperator::new(vec(raw.e0), vec(raw.e1), vec(raw.e2), vec(raw.e3))?;
        if attack.dimension() != raw.ancilla_dimension {
            return Err(Error::InvalidParameter(format!(
                "ancilla_dimension {} does not match vector length {}",
                raw.ancilla_dimension,
                attack.dimension()
            )));
        }
        Ok(attack)
    }
}

/// How far an attack is from inducing equal bit-flip rates on `|0>` and `|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub q_from_e1: f64,
    pub q_from_e2: f64,
    pub asymmetry: f64,
}

/// Ground-truth `Re<e_i|e_j>` of an attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProducts {
    pub re01: f64,
    pub re02: f64,
    pub re03: f64,
    pub re12: f64,
    pub re13: f64,
    pub re23: f64,
}

impl AttackOperator {
    /// Checks the dimension bound and the isometry constraints
    /// `‖e0‖² + ‖e1‖² = 1`, `‖e2‖² + ‖e3‖² = 1`, `<e0|e2> + <e1|e3> = 0`.
    pub fn new(
        e0: Vec<Complex64>,
        e1: Vec<Complex64>,
        e2: Vec<Complex64>,
        e3: Vec<Complex64>,
    ) -> Result<Self> {
        let d = e0.len();
        if d == 0 || d > MAX_ANCILLA_DIMENSION {
            return Err(Error::InvalidParameter(format!(
                "ancilla dimension {d} outside 1..={MAX_ANCILLA_DIMENSION}"
            )));
        }
        if [&e1, &e2, &e3].iter().any(|v| v.len() != d) {
            return Err(Error::InvalidParameter(
                "ancilla vectors differ in length".into(),
            ));
        }
        let attack = AttackOperator { e: [e0, e1, e2, e3] };
        let checks = [
            ("|e0|^2 + |e1|^2 = 1", (attack.norm(0) + attack.norm(1) - 1.0).abs()),
            ("|e2|^2 + |e3|^2 = 1", (attack.norm(2) + attack.norm(3) - 1.0).abs()),
            (
                "<e0|e2> + <e1|e3> = 0",
                (attack.overlap(0, 2) + attack.overlap(1, 3)).norm(),
            ),
        ];
        for (constraint, deviation) in checks {
            if !(deviation <= UNITARITY_TOLERANCE) {
                return Err(Error::Unitarity {
                    constraint,
                    deviation,
                });
            }
        }
        Ok(attack)
    }

    /// The noiseless channel: `e0 = e3 = |0>`, `e1 = e2 = 0`.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut unit = vec![Complex64::new(0.0, 0.0); dim.max(1)];
        unit[0] = Complex64::new(1.0, 0.0);
        let zero = vec![Complex64::new(0.0, 0.0); dim.max(1)];
        AttackOperator::new(unit.clone(), zero.clone(), zero, unit)
    }

    /// Eve copies the raw-key bit: `e0 = |0>`, `e3 = |1>`, no errors.
    pub fn perfect_copy(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "copying the key bit needs a two-dimensional ancilla".into(),
            ));
        }
        let zero = vec![Complex64::new(0.0, 0.0); dim];
        let mut e0 = zero.clone();
        let mut e3 = zero.clone();
        e0[0] = Complex64::new(1.0, 0.0);
        e3[1] = Complex64::new(1.0, 0.0);
        AttackOperator::new(e0, zero.clone(), zero, e3)
    }

    /// Purification of the Pauli channel `ρ ↦ Σ_k p_k σ_k ρ σ_k` with
    /// weights `(p_I, p_X, p_Y, p_Z)`, ancilla basis `|I>,|X>,|Y>,|Z>`.
    pub fn pauli(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|w| *w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "Pauli weights {weights:?} are not a probability vector"
            )));
        }
        let [pi, px, py, pz] = weights.map(f64::sqrt);
        let c = Complex64::new;
        let e0 = vec![c(pi, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(pz, 0.0)];
        let e1 = vec![c(0.0, 0.0), c(px, 0.0), c(0.0, py), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(px, 0.0), c(0.0, -py), c(0.0, 0.0)];
        let e3 = vec![c(pi, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-pz, 0.0)];
        AttackOperator::new(e0, e1, e2, e3)
    }

    /// Purification of the depolarizing channel `(1 - 2Q)ρ + Q·I`.
    pub fn depolarizing(q: f64) -> Result<Self> {
        AttackOperator::pauli([1.0 - 1.5 * q, 0.5 * q, 0.5 * q, 0.5 * q])
    }

    /// A Pauli attack that acts as the depolarizing channel on every state
    /// with real amplitudes (so it produces depolarizing statistics for the
    /// protocol's three states) while leaving Eve the most information:
    /// weights `((1-Q)², Q(1-Q), Q², Q(1-Q))`.
    pub fn depolarizing_optimal(q: f64) -> Result<Self> {
        let r = 1.0 - q;
        AttackOperator::pauli([r * r, q * r, q * q, q * r])
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.e[0].len()
    }

    /// The ancilla vector `e_i`, `i ∈ 0..4`.
    #[inline]
    pub fn e(&self, i: usize) -> &[Complex64] {
        &self.e[i]
    }

    #[inline]
    fn norm(&self, i: usize) -> f64 {
        norm_sq(&self.e[i])
    }

    /// `<e_i|e_j>`.
    #[inline]
    pub fn overlap(&self, i: usize, j: usize) -> Complex64 {
        inner(&self.e[i], &self.e[j])
    }

    pub fn symmetry_report(&self) -> SymmetryReport {
        let q1 = self.norm(1);
        let q2 = self.norm(2);
        SymmetryReport {
            q_from_e1: q1,
            q_from_e2: q2,
            asymmetry: (q1 - q2).abs(),
        }
    }

    /// The statistics Alice and Bob would observe under this attack.
    pub fn induced_statistics(&self, alpha: Alpha) -> Result<ObservedStatistics> {
        let sym = self.symmetry_report();
        if sym.asymmetry > SYMMETRY_TOLERANCE {
            return Err(Error::Asymmetric(sym.asymmetry));
        }
        let a = alpha.value();
        let b = alpha.beta();
        let [e0, e1, e2, e3] = &self.e;
        let q = sym.q_from_e1;
        // ā-component of U|a>
        let wrong: Vec<Complex64> = (0..self.dimension())
            .map(|k| e0[k] * (a * b) + e2[k] * (b * b) - e1[k] * (a * a) - e3[k] * (a * b))
            .collect();
        ObservedStatistics::new(
            a,
            q,
            norm_sq(&wrong),
            norm_sq(&combine(a, e0, b, e1)),
            norm_sq(&combine(a, e2, b, e3)),
            norm_sq(&combine(a, e0, b, e2)),
        )
    }

    /// `χ_AE = ½|0><0| ⊗ (|e0><e0| + |e1><e1|) + ½|1><1| ⊗ (|e2><e2| + |e3><e3|)`.
    pub fn joint_state(&self) -> Result<HermitianMatrix> {
        let block = |i: usize, j: usize| {
            HermitianMatrix::outer(&self.e[i])
                .add(&HermitianMatrix::outer(&self.e[j]))
                .map(|m| m.scale(0.5))
        };
        block(0, 1)?
            .block_embed(0, 2)
            .add(&block(2, 3)?.block_embed(1, 2))
    }

    /// Exact `S(A|E) = S(AE) - S(E)` of the raw-key bit against Eve.
    pub fn exact_conditional_entropy(&self) -> Result<f64> {
        let chi_ae = self.joint_state()?;
        let chi_e = chi_ae.partial_trace_first(2)?;
        Ok(von_neumann_entropy(&chi_ae)? - von_neumann_entropy(&chi_e)?)
    }

    /// Eve's state given no bit error, `(|e0><e0| + |e3><e3|) / 2(1-Q)`.
    pub fn rho_e(&self) -> Result<HermitianMatrix> {
        let weight = self.norm(0) + self.norm(3);
        if weight <= 0.0 {
            return Err(Error::InvalidParameter("Q = 1 leaves rho_E undefined".into()));
        }
        Ok(HermitianMatrix::outer(&self.e[0])
            .add(&HermitianMatrix::outer(&self.e[3]))?
            .scale(1.0 / weight))
    }

    /// Eve's state given a bit error, `(|e1><e1| + |e2><e2|) / 2Q`.
    pub fn sigma_e(&self) -> Result<HermitianMatrix> {
        let weight = self.norm(1) + self.norm(2);
        if weight <= 0.0 {
            return Err(Error::InvalidParameter("Q = 0 leaves sigma_E undefined".into()));
        }
        Ok(HermitianMatrix::outer(&self.e[1])
            .add(&HermitianMatrix::outer(&self.e[2]))?
            .scale(1.0 / weight))
    }

    pub fn exact_inner_products(&self) -> InnerProducts {
        let re = |i, j| self.overlap(i, j).re;
        InnerProducts {
            re01: re(0, 1),
            re02: re(0, 2),
            re03: re(0, 3),
            re12: re(1, 2),
            re13: re(1, 3),
            re23: re(2, 3),
        }
    }

    /// Multiplies the `|1>` input branch (`e2`, `e3`) by a unit `phase`,
    /// which keeps the operator unitary and rotates `<e0|e3>`.
    pub fn with_branch_phase(&self, phase: Complex64) -> Result<Self> {
        let rot = |v: &[Complex64]| v.iter().map(|z| z * phase).collect::<Vec<_>>();
        AttackOperator::new(
            self.e[0].clone(),
            self.e[1].clone(),
            rot(&self.e[2]),
            rot(&self.e[3]),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("attack always serializes")
    }
}
