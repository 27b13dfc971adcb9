//! Dense complex Hermitian matrices of the sizes that show up here
//! (at most 8x8: a qubit tensored with a four-dimensional ancilla).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation from Hermiticity accepted at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Convergence threshold handed to the eigensolver.
const EIGEN_EPS: f64 = 1e-15;

/// Iteration cap for the eigensolver; exceeding it is reported as
/// [`Error::NoConvergence`].
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// A `d x d` complex Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates shape and Hermiticity, then symmetrizes away the residual
    /// rounding so that the diagonal is exactly real.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        if !worst.is_finite() || worst > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(worst));
        }
        let mut m = HermitianMatrix { dim, entries };
        m.symmetrize();
        Ok(m)
    }

    /// Builds the matrix from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        HermitianMatrix::new(dim, entries)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        HermitianMatrix { dim, entries }
    }

    /// The (unnormalized) projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let entries = (0..dim * dim)
            .map(|k| v[k / dim] * v[k % dim].conj())
            .collect();
        let mut m = HermitianMatrix { dim, entries };
        m.symmetrize();
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self + other`, both of the same dimension.
    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                expected: self.dim * self.dim,
                got: other.dim * other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(HermitianMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    /// `|i><i| ⊗ self` embedded in a `blocks * dim` space, i.e. the
    /// block-diagonal matrix carrying `self` in block `index`.
    pub fn block_embed(&self, index: usize, blocks: usize) -> Self {
        let n = self.dim * blocks;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        let off = index * self.dim;
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries[(off + r) * n + off + c] = self.get(r, c);
            }
        }
        HermitianMatrix { dim: n, entries }
    }

    /// Traces out the leading factor of dimension `first_dim`, returning an
    /// operator on the trailing factor.
    pub fn partial_trace_first(&self, first_dim: usize) -> Result<Self> {
        if first_dim == 0 || !self.dim.is_multiple_of(first_dim) {
            return Err(Error::InvalidParameter(format!(
                "cannot split dimension {} with a leading factor of {}",
                self.dim, first_dim
            )));
        }
        let rest = self.dim / first_dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); rest * rest];
        for a in 0..first_dim {
            for r in 0..rest {
                for c in 0..rest {
                    entries[r * rest + c] += self.get(a * rest + r, a * rest + c);
                }
            }
        }
        Ok(HermitianMatrix { dim: rest, entries })
    }

    /// `U · self · U†` for a square `U` given row-major.
    pub fn conjugate_by(&self, unitary: &[Complex64]) -> Result<Self> {
        if unitary.len() != self.dim * self.dim {
            return Err(Error::Shape {
                expected: self.dim * self.dim,
                got: unitary.len(),
            });
        }
        let u = DMatrix::from_row_slice(self.dim, self.dim, unitary);
        let m = self.to_nalgebra();
        let out = &u * m * u.adjoint();
        let entries = (0..self.dim * self.dim)
            .map(|k| out[(k / self.dim, k % self.dim)])
            .collect();
        let mut h = HermitianMatrix {
            dim: self.dim,
            entries,
        };
        h.symmetrize();
        Ok(h)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    fn symmetrize(&mut self) {
        let d = self.dim;
        for i in 0..d {
            self.entries[i * d + i].im = 0.0;
            for j in (i + 1)..d {
                let avg = (self.entries[i * d + j] + self.entries[j * d + i].conj()) * 0.5;
                self.entries[i * d + j] = avg;
                self.entries[j * d + i] = avg.conj();
            }
        }
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    if m.dim() == 1 {
        return Ok(vec![m.get(0, 0).re]);
    }
    let eig = m
        .to_nalgebra()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITERATIONS)
        .ok_or(Error::NoConvergence(EIGEN_MAX_ITERATIONS))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}
