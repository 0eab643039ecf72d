//! Dense symmetric matrices, floating eigenvalues, and inertia.
//!
//! Two inertia kernels live here. [`inertia_float`] classifies eigenvalues
//! from a dense decomposition against a tolerance scaled to the matrix norm.
//! [`inertia_exact`] works from the integer characteristic polynomial and
//! counts roots with Sturm sequences, so the result depends on no tolerance.

mod exact;
mod poly;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Real;

pub use exact::{charpoly, charpoly_exact, count_roots_in, inertia_exact, negative_root_count, EXACT_MAX_DIM};
pub use poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix entry ({0}, {1}) is not finite")]
    NonFinite(usize, usize),
    #[error("matrix dimension {0} not supported here")]
    Dimension(usize),
    #[error("exact kernel limited to dimension {max}, got {dim}")]
    ExactTooLarge { dim: usize, max: usize },
    #[error("lower triangle has {found} entries, dimension {dim} needs {expected}")]
    TriangleLength {
        dim: usize,
        expected: usize,
        found: usize,
    },
}

/// Symmetric matrix stored as its lower triangle, row-major.
///
/// Symmetry holds by construction: `(i, j)` and `(j, i)` are the same cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSymmetric<T>", bound(deserialize = "T: Deserialize<'de>"))]
pub struct SymmetricMatrix<T> {
    dim: usize,
    lower_triangle_row_major: Vec<T>,
}

#[derive(Deserialize)]
struct RawSymmetric<T> {
    dim: usize,
    lower_triangle_row_major: Vec<T>,
}

impl<T> TryFrom<RawSymmetric<T>> for SymmetricMatrix<T> {
    type Error = SpectraError;

    fn try_from(raw: RawSymmetric<T>) -> Result<Self, Self::Error> {
        SymmetricMatrix::from_lower_triangle(raw.dim, raw.lower_triangle_row_major)
    }
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl<T> SymmetricMatrix<T> {
    pub fn from_lower_triangle(dim: usize, data: Vec<T>) -> Result<Self, SpectraError> {
        let expected = dim * (dim + 1) / 2;
        if data.len() != expected {
            return Err(SpectraError::TriangleLength {
                dim,
                expected,
                found: data.len(),
            });
        }
        Ok(Self {
            dim,
            lower_triangle_row_major: data,
        })
    }

    /// Fills the matrix from `f(i, j)` evaluated on `i >= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self {
            dim,
            lower_triangle_row_major: data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.lower_triangle_row_major[tri_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.lower_triangle_row_major[tri_index(i, j)] = value;
    }

    pub fn lower_triangle(&self) -> &[T] {
        &self.lower_triangle_row_major
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SymmetricMatrix<U> {
        SymmetricMatrix {
            dim: self.dim,
            lower_triangle_row_major: self.lower_triangle_row_major.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero> SymmetricMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            lower_triangle_row_major: vec![T::zero(); dim * (dim + 1) / 2],
        }
    }
}

impl<T: Real> SymmetricMatrix<T> {
    pub fn frobenius_norm(&self) -> T {
        let mut sum = T::zero();
        for i in 0..self.dim {
            for j in 0..=i {
                let v = *self.get(i, j);
                sum += if i == j { v * v } else { v * v + v * v };
            }
        }
        sum.sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + *self.get(i, i))
    }

    /// Euclidean norm of each row.
    pub fn row_norms(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .fold(T::zero(), |acc, j| {
                        let v = *self.get(i, j);
                        acc + v * v
                    })
                    .sqrt()
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| *self.get(i, j))
    }

    pub fn from_dense(m: &DMatrix<T>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    /// `D·M·D` for a diagonal `D` given by its entries.
    pub fn congruence_diag(&self, d: &[T]) -> Self {
        Self::from_fn(self.dim, |i, j| d[i] * *self.get(i, j) * d[j])
    }

    fn check_finite(&self) -> Result<(), SpectraError> {
        for i in 0..self.dim {
            for j in 0..=i {
                if !self.get(i, j).is_finite() {
                    return Err(SpectraError::NonFinite(i, j));
                }
            }
        }
        Ok(())
    }

    /// Sign-classification tolerance `1e-8 · max(1, ‖m‖_F)`.
    pub fn default_tolerance(&self) -> T {
        crate::lit::<T>(1e-8) * self.frobenius_norm().max(T::one())
    }
}

/// Eigenvalues sorted descending, with the tolerance used to classify signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub tolerance: T,
}

/// Full decomposition; column `i` of `eigenvectors` belongs to `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition<T: Real> {
    pub spectrum: Spectrum<T>,
    pub eigenvectors: DMatrix<T>,
}

impl<T: Real> Eigendecomposition<T> {
    pub fn vector(&self, i: usize) -> DVector<T> {
        self.eigenvectors.column(i).into_owned()
    }
}

/// Eigenvalues of `m`, descending, without eigenvectors.
pub fn eigenvalues<T: Real>(m: &SymmetricMatrix<T>) -> Result<Spectrum<T>, SpectraError> {
    if m.dim() == 0 {
        return Err(SpectraError::Dimension(0));
    }
    m.check_finite()?;
    let mut ev: Vec<T> = m.to_dense().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(Spectrum {
        eigenvalues: ev,
        tolerance: m.default_tolerance(),
    })
}

/// Eigenvalues and orthonormal eigenvectors, descending. Ties keep the
/// order in which the solver returned them.
pub fn eigen_sym<T: Real>(m: &SymmetricMatrix<T>) -> Result<Eigendecomposition<T>, SpectraError> {
    if m.dim() == 0 {
        return Err(SpectraError::Dimension(0));
    }
    m.check_finite()?;
    let eig = m.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
    });
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(m.dim(), m.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigendecomposition {
        spectrum: Spectrum {
            eigenvalues,
            tolerance: m.default_tolerance(),
        },
        eigenvectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InertiaMode {
    Float { epsilon: f64 },
    Exact,
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaTriple {
    pub n_pos: usize,
    pub n_zero: usize,
    pub n_neg: usize,
    pub n_nonneg: usize,
    pub mode: InertiaMode,
}

impl InertiaTriple {
    pub fn new(n_pos: usize, n_zero: usize, n_neg: usize, mode: InertiaMode) -> Self {
        Self {
            n_pos,
            n_zero,
            n_neg,
            n_nonneg: n_pos + n_zero,
            mode,
        }
    }

    pub fn dim(&self) -> usize {
        self.n_pos + self.n_zero + self.n_neg
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.n_pos, self.n_zero, self.n_neg)
    }
}

impl<T: Real> Spectrum<T> {
    /// Classifies against `±tolerance`; values within it count as zero.
    pub fn inertia(&self) -> InertiaTriple {
        let eps = self.tolerance;
        let n_pos = self.eigenvalues.iter().filter(|&&x| x > eps).count();
        let n_neg = self.eigenvalues.iter().filter(|&&x| x < -eps).count();
        InertiaTriple::new(
            n_pos,
            self.eigenvalues.len() - n_pos - n_neg,
            n_neg,
            InertiaMode::Float {
                epsilon: eps.to_f64().unwrap_or(f64::NAN),
            },
        )
    }

    /// Number of eigenvalues in the closed interval `[lo, hi]`.
    pub fn count_in(&self, lo: T, hi: T) -> usize {
        self.eigenvalues.iter().filter(|&&x| lo <= x && x <= hi).count()
    }
}

pub fn inertia_float<T: Real>(m: &SymmetricMatrix<T>) -> Result<InertiaTriple, SpectraError> {
    Ok(eigenvalues(m)?.inertia())
}
