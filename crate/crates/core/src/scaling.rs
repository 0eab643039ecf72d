//! Rescaling a weighted adjacency matrix to a 1-regular one (every row of
//! unit Euclidean norm) by a positive diagonal congruence.
//!
//! For a weighted adjacency matrix `A` of `G` with every edge weight nonzero,
//! set `M_ij = A_ij²`. When no pair of nonempty vertex sets `S`, `T` without
//! edges between them has `|S| + |T| >= n`, a positive diagonal `D` makes
//! `DMD` doubly stochastic, and `B = D^{1/2} A D^{1/2}` is then 1-regular
//! with the same inertia as `A`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::spectra::SymmetricMatrix;
use crate::{lit, Real};

/// Largest `n` for the exhaustive scalability search.
pub const EXACT_SEARCH_MAX_N: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("exhaustive scalability search needs n <= {EXACT_SEARCH_MAX_N} (got {0}) and the min-degree shortcut does not apply")]
    TooLarge(usize),
    #[error("graph is not scalable: |S| + |T| = {value} >= n = {n}")]
    NotScalable { value: usize, n: usize },
    #[error("matrix has dimension {matrix}, graph has {graph} vertices")]
    Dimension { matrix: usize, graph: usize },
    #[error("entry ({0}, {1}) is nonzero but is not an edge")]
    Support(usize, usize),
    #[error("edge ({0}, {1}) has zero weight; perturb the weights first")]
    ZeroEdgeWeight(usize, usize),
    #[error("row {0} of the squared matrix is zero")]
    ZeroRow(usize),
    #[error("no convergence after {iterations} sweeps, residual {residual:e}")]
    Convergence { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalabilityMethod {
    Exhaustive,
    MinDegree,
}

/// Outcome of the `|S| + |T| < n` test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalabilityWitness {
    pub scalable: bool,
    pub best_s: Vec<usize>,
    pub best_t: Vec<usize>,
    /// Exhaustive: the maximum of `|S| + |T|`. Min-degree: the upper bound
    /// `2(n - δ)` on it.
    pub best_value: usize,
    pub method: ScalabilityMethod,
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Decides whether `G` admits a 1-regular rescaling. `S` and `T` may overlap.
pub fn scalability_check(g: &Graph) -> Result<ScalabilityWitness, ScalingError> {
    let n = g.n();
    let delta = g.min_degree();
    if 2 * delta > n {
        // nonempty S, T with no edges between them have |S|, |T| <= n - δ
        let v = (0..n).find(|&v| g.degree(v) == delta).unwrap_or(0);
        let t = (0..n).filter(|&u| !g.has_edge(u, v)).collect();
        return Ok(ScalabilityWitness {
            scalable: true,
            best_s: vec![v],
            best_t: t,
            best_value: 2 * (n - delta),
            method: ScalabilityMethod::MinDegree,
        });
    }
    if n > EXACT_SEARCH_MAX_N {
        return Err(ScalingError::TooLarge(n));
    }
    let rows = g.bit_rows().expect("n <= 24");
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let non_nbr: Vec<u32> = rows.iter().map(|&r| full & !(r as u32)).collect();

    let mut best = (0usize, 0u32, 0u32);
    // depth-first over S in increasing vertex order; T(S) only shrinks as S grows
    fn search(v: usize, n: usize, s: u32, t: u32, non_nbr: &[u32], best: &mut (usize, u32, u32)) {
        for u in v..n {
            let s2 = s | 1 << u;
            let t2 = t & non_nbr[u];
            if t2 == 0 {
                continue;
            }
            let value = (s2.count_ones() + t2.count_ones()) as usize;
            if value > best.0 {
                *best = (value, s2, t2);
            }
            search(u + 1, n, s2, t2, non_nbr, best);
        }
    }
    search(0, n, 0, full, &non_nbr, &mut best);
    Ok(ScalabilityWitness {
        scalable: best.0 < n,
        best_s: mask_to_vec(best.1),
        best_t: mask_to_vec(best.2),
        best_value: best.0,
        method: ScalabilityMethod::Exhaustive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SinkhornOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingResult<T> {
    /// Diagonal of `D`; `D·M·D` is doubly stochastic to within `residual`.
    pub d: Vec<T>,
    /// `D^{1/2}·A·D^{1/2}`.
    pub b: SymmetricMatrix<T>,
    pub iterations: usize,
    /// `max_i |(DMD·1)_i - 1|`.
    pub residual: T,
    /// Residual after each sweep.
    pub residual_history: Vec<T>,
}

/// Replaces zero weights on edges of `g` by `1e-6·max(‖a‖_F, 1)`.
pub fn perturb_zero_edges<T: Real>(a: &SymmetricMatrix<T>, g: &Graph) -> SymmetricMatrix<T> {
    let eps = lit::<T>(1e-6) * a.frobenius_norm().max(T::one());
    let mut out = a.clone();
    for (u, v) in g.edges() {
        if a.get(u, v).is_zero() {
            out.set(u, v, eps);
        }
    }
    out
}

fn validate<T: Real>(a: &SymmetricMatrix<T>, g: &Graph) -> Result<(), ScalingError> {
    let n = g.n();
    if a.dim() != n {
        return Err(ScalingError::Dimension {
            matrix: a.dim(),
            graph: n,
        });
    }
    for i in 0..n {
        for j in 0..=i {
            let nonzero = !a.get(i, j).is_zero();
            let edge = g.has_edge(i, j);
            if nonzero && !edge {
                return Err(ScalingError::Support(j, i));
            }
            if edge && !nonzero {
                return Err(ScalingError::ZeroEdgeWeight(j, i));
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(ScalingError::ZeroRow(v));
    }
    Ok(())
}

/// Symmetric Sinkhorn–Knopp scaling of `M_ij = a_ij²`, iterating
/// `x ← sqrt(x / Mx)` until `x ∘ Mx` is within `tol` of the all-ones vector.
pub fn sinkhorn<T: Real>(
    a: &SymmetricMatrix<T>,
    g: &Graph,
    opts: &SinkhornOptions,
) -> Result<ScalingResult<T>, ScalingError> {
    validate(a, g)?;
    let witness = scalability_check(g)?;
    if !witness.scalable {
        return Err(ScalingError::NotScalable {
            value: witness.best_value,
            n: g.n(),
        });
    }

    let n = g.n();
    // sparse rows of M
    let rows: Vec<Vec<(usize, T)>> = (0..n)
        .map(|i| {
            g.neighbors(i)
                .map(|j| {
                    let w = *a.get(i, j);
                    (j, w * w)
                })
                .collect()
        })
        .collect();
    let mul = |x: &[T]| -> Vec<T> {
        rows.iter()
            .map(|r| r.iter().fold(T::zero(), |acc, &(j, m)| acc + m * x[j]))
            .collect()
    };
    let residual_of = |x: &[T], mx: &[T]| -> T {
        x.iter()
            .zip(mx)
            .fold(T::zero(), |acc, (&xi, &mi)| acc.max((xi * mi - T::one()).abs()))
    };

    let tol = lit::<T>(opts.tol);
    let mut x = vec![T::one(); n];
    let mut mx = mul(&x);
    let mut residual = residual_of(&x, &mx);
    let mut history = Vec::new();
    let mut iterations = 0;
    while residual > tol && iterations < opts.max_iter {
        for (xi, &mi) in x.iter_mut().zip(&mx) {
            *xi = (*xi / mi).sqrt();
        }
        mx = mul(&x);
        residual = residual_of(&x, &mx);
        history.push(residual);
        iterations += 1;
    }
    if residual > tol {
        return Err(ScalingError::Convergence {
            iterations,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let root: Vec<T> = x.iter().map(|v| v.sqrt()).collect();
    Ok(ScalingResult {
        b: a.congruence_diag(&root),
        d: x,
        iterations,
        residual,
        residual_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{incidence, standard, StandardGraph};
    use crate::spectra::inertia_float;

    fn c5() -> Graph {
        standard(StandardGraph::Cycle, 5).unwrap()
    }

    #[test]
    fn path_is_not_scalable() {
        let p3 = standard(StandardGraph::Path, 3).unwrap();
        let w = scalability_check(&p3).unwrap();
        assert!(!w.scalable);
        assert_eq!(w.best_value, 4);
        assert_eq!(w.best_s, vec![0, 2]);
        assert_eq!(w.best_t, vec![0, 2]);
    }

    #[test]
    fn c5_is_scalable() {
        let w = scalability_check(&c5()).unwrap();
        assert!(w.scalable);
        // S = {0}, T = {0, 2, 3}: overlapping sets count
        assert_eq!(w.best_value, 4);
        for &s in &w.best_s {
            for &t in &w.best_t {
                assert!(!c5().has_edge(s, t));
            }
        }
    }

    #[test]
    fn heawood_complement_uses_degree_shortcut() {
        let g = incidence(2).unwrap().complement();
        let w = scalability_check(&g).unwrap();
        assert!(w.scalable);
        assert_eq!(w.method, ScalabilityMethod::MinDegree);
        assert_eq!(w.best_value, 8);
    }

    #[test]
    fn large_sparse_graph_is_refused() {
        let g = standard(StandardGraph::Cycle, 30).unwrap();
        assert_eq!(scalability_check(&g), Err(ScalingError::TooLarge(30)));
    }

    #[test]
    fn regular_graph_fixed_point() {
        let a = c5().adjacency::<f64>();
        let r = sinkhorn(&a, &c5(), &SinkhornOptions::default()).unwrap();
        for &d in &r.d {
            assert!((d - 0.5f64.sqrt()).abs() < 1e-12);
        }
        for norm in r.b.row_norms() {
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chorded_cycle_converges_and_keeps_inertia() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let a = g.adjacency::<f64>();
        let r = sinkhorn(&a, &g, &SinkhornOptions::default()).unwrap();
        for norm in r.b.row_norms() {
            assert!((norm - 1.0).abs() < 1e-10);
        }
        assert_eq!(inertia_float(&r.b).unwrap().counts(), inertia_float(&a).unwrap().counts());
        assert!(r.d.iter().all(|&d| d > 0.0));
    }

    #[test]
    fn path_is_rejected_by_sinkhorn() {
        let p3 = standard(StandardGraph::Path, 3).unwrap();
        let err = sinkhorn(&p3.adjacency::<f64>(), &p3, &SinkhornOptions::default()).unwrap_err();
        assert_eq!(err, ScalingError::NotScalable { value: 4, n: 3 });
    }

    #[test]
    fn support_and_weight_checks() {
        let g = c5();
        let mut a = g.adjacency::<f64>();
        a.set(0, 2, 1.0);
        assert_eq!(sinkhorn(&a, &g, &SinkhornOptions::default()), Err(ScalingError::Support(0, 2)));
        let mut a = g.adjacency::<f64>();
        a.set(0, 1, 0.0);
        assert_eq!(
            sinkhorn(&a, &g, &SinkhornOptions::default()),
            Err(ScalingError::ZeroEdgeWeight(0, 1))
        );
        let fixed = perturb_zero_edges(&a, &g);
        assert!(*fixed.get(0, 1) > 0.0);
        assert!(sinkhorn(&fixed, &g, &SinkhornOptions::default()).is_ok());
    }

    #[test]
    fn isolated_vertex_is_a_zero_row() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(
            sinkhorn(&g.adjacency::<f64>(), &g, &SinkhornOptions::default()),
            Err(ScalingError::ZeroRow(2))
        );
    }

    #[test]
    fn single_precision_scaling() {
        let a = c5().adjacency::<f32>();
        let opts = SinkhornOptions { tol: 1e-6, max_iter: 1000 };
        let r = sinkhorn(&a, &c5(), &opts).unwrap();
        assert!(r.residual <= 1e-6);
    }
}
