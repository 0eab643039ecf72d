//! The Lovász theta function.
//!
//! For generalized Johnson graphs `G(n, k, {ℓ})` theta is evaluated exactly
//! from Linz's linear-programming characterization. For arbitrary graphs a
//! first-order splitting method produces a certified bracket: the upper end
//! is `λmax` of a feasible completion of the non-edge pattern, the lower end
//! is `⟨J, B⟩` for a repaired feasible dual matrix `B`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::Rational;

/// Largest graph accepted by the numeric solver.
pub const THETA_MAX_N: usize = 500;
pub const DEFAULT_ITERS: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-4;
const BRACKET_SLACK: f64 = 1e-9;
const CERTIFY_EVERY: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("unbounded constraint system: no u with S_u < 0")]
    Unbounded,
    #[error("graph has {0} vertices, solver is limited to {THETA_MAX_N}")]
    TooLarge(usize),
    #[error("bracket inverted: lower {lower} > upper {upper}")]
    Inverted { lower: f64, upper: f64 },
}

fn pascal_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigInt::one());
        row = next;
    }
    row
}

/// Exact binomial coefficient, zero outside `0 ≤ b ≤ a`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    pascal_row(a as usize).swap_remove(b as usize)
}

fn check_params(n: usize, k: usize, l: usize) -> Result<(), ThetaError> {
    if k == 0 || n <= k || l >= k {
        return Err(ThetaError::Parameter(format!(
            "need n > k >= 1 and 0 <= l < k, got n = {n}, k = {k}, l = {l}"
        )));
    }
    Ok(())
}

/// `f_{u,j} = C(u, j)·C(k−u, k−ℓ−j)·C(n−k−u, k−ℓ−j)`.
pub fn f_term(n: usize, k: usize, l: usize, u: usize, j: usize) -> BigInt {
    let (n, k, l, u, j) = (n as i64, k as i64, l as i64, u as i64, j as i64);
    binom(u, j) * binom(k - u, k - l - j) * binom(n - k - u, k - l - j)
}

/// `S_u = Σ_j (−1)^j f_{u,j}`.
pub fn s_term(n: usize, k: usize, l: usize, u: usize) -> BigInt {
    (0..=k - l).fold(BigInt::zero(), |acc, j| {
        let f = f_term(n, k, l, u, j);
        if j % 2 == 0 {
            acc + f
        } else {
            acc - f
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinzRow {
    pub u: usize,
    pub s_u: BigInt,
    /// `C / (−S_u)` when `S_u < 0`.
    pub constraint_bound: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinzResult {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub theta: Rational,
    /// `C(k, k−ℓ) / ((k−ℓ)(ℓ+1)) · (n−k)`.
    pub prop32_value: Rational,
    /// `C(k, k−ℓ)·C(n−k, k−ℓ)`.
    pub c: BigInt,
    pub per_u: Vec<LinzRow>,
    pub binding_u: usize,
    /// Set when `n < k³ + 1`.
    pub warning: Option<String>,
}

pub const OUTSIDE_REGIME: &str = "outside verified regime (n < k^3 + 1)";

fn in_regime(n: usize, k: usize) -> bool {
    n as u128 > (k as u128).pow(3)
}

/// Exact `ϑ(G(n, k, {ℓ})) = 1 + min_{S_u < 0} C / (−S_u)`.
pub fn linz_theta(n: usize, k: usize, l: usize) -> Result<LinzResult, ThetaError> {
    check_params(n, k, l)?;
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    let c = binom(ki, ki - li) * binom(ni - ki, ki - li);
    let per_u: Vec<LinzRow> = (0..=k)
        .map(|u| {
            let s_u = s_term(n, k, l, u);
            let constraint_bound = s_u
                .is_negative()
                .then(|| BigRational::new(c.clone(), -s_u.clone()));
            LinzRow { u, s_u, constraint_bound }
        })
        .collect();
    let (binding_u, best) = per_u
        .iter()
        .filter_map(|r| r.constraint_bound.as_ref().map(|b| (r.u, b)))
        .fold(None::<(usize, &Rational)>, |acc, (u, b)| match acc {
            Some((_, m)) if m <= b => acc,
            _ => Some((u, b)),
        })
        .ok_or(ThetaError::Unbounded)?;
    let prop32_value = BigRational::new(binom(ki, ki - li), BigInt::from((k - l) * (l + 1))) * BigInt::from(n - k);
    Ok(LinzResult {
        n,
        k,
        l,
        theta: Rational::one() + best,
        prop32_value,
        c,
        per_u,
        binding_u,
        warning: (!in_regime(n, k)).then(|| OUTSIDE_REGIME.to_string()),
    })
}

/// Checks `f_{u,j} ≥ f_{u,j+1}` for all `u ∈ [0, k]`, `j ∈ [max(0, u−ℓ), k−ℓ]`.
pub fn claim33_monotone(n: usize, k: usize, l: usize) -> Result<bool, ThetaError> {
    check_params(n, k, l)?;
    if !in_regime(n, k) {
        return Err(ThetaError::Parameter(format!("need n >= k^3 + 1, got n = {n}, k = {k}")));
    }
    Ok((0..=k).all(|u| (u.saturating_sub(l)..=k - l).all(|j| f_term(n, k, l, u, j) >= f_term(n, k, l, u, j + 1))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaBracket {
    pub lower: f64,
    pub upper: f64,
    pub iters_lower: usize,
    pub iters_upper: usize,
    /// Final primal and dual residuals of the splitting iteration.
    pub feasibility_residuals: Vec<f64>,
    /// Best certified upper bound after each certification, non-increasing.
    pub upper_history: Vec<f64>,
    /// Best certified lower bound after each certification, non-decreasing.
    pub lower_history: Vec<f64>,
}

impl ThetaBracket {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }
}

fn lambda_max(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

/// `λmax(J + Y)` where `Y` carries the free edge entries.
fn certify_upper(n: usize, edges: &[(usize, usize)], y: &[f64]) -> f64 {
    let mut a = DMatrix::from_element(n, n, 1.0);
    for (&(i, j), &w) in edges.iter().zip(y) {
        a[(i, j)] += w;
        a[(j, i)] += w;
    }
    lambda_max(&a)
}

/// Zeroes the edge entries of `x`, shifts it into the PSD cone if needed and
/// normalizes the trace; returns `⟨J, B⟩`.
fn certify_lower(x: &DMatrix<f64>, edges: &[(usize, usize)]) -> f64 {
    let n = x.nrows();
    let mut b = x.clone();
    for &(i, j) in edges {
        b[(i, j)] = 0.0;
        b[(j, i)] = 0.0;
    }
    let min = b.clone().symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if min < 0.0 {
        // a hair beyond -λmin to absorb rounding in the eigenvalue estimate
        let shift = -min * (1.0 + 1e-10) + 1e-14;
        for i in 0..n {
            b[(i, i)] += shift;
        }
    }
    let trace = b.trace();
    if !(trace > 0.0) {
        return 1.0;
    }
    b.sum() / trace
}

/// Splitting iteration on `max ⟨J, X⟩` over `X ⪰ 0`, `tr X = 1`, `X_ij = 0`
/// on edges, with the constraints expressed in an orthonormal basis so that
/// the dual update is explicit.
pub fn theta_bracket(g: &Graph, iters: usize, tol: f64) -> Result<ThetaBracket, ThetaError> {
    let n = g.n();
    if n > THETA_MAX_N {
        return Err(ThetaError::TooLarge(n));
    }
    if n == 0 {
        return Err(ThetaError::Parameter("empty vertex set".into()));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let nf = n as f64;
    if edges.is_empty() {
        return Ok(ThetaBracket {
            lower: nf,
            upper: nf,
            iters_lower: 0,
            iters_upper: 0,
            feasibility_residuals: vec![0.0, 0.0],
            upper_history: vec![nf],
            lower_history: vec![nf],
        });
    }

    let s2 = std::f64::consts::SQRT_2;
    let sn = nf.sqrt();
    // A(X): [tr X / √n, √2·X_e ...];  b = [1/√n, 0 ...]
    let apply = |x: &DMatrix<f64>| -> Vec<f64> {
        let mut out = Vec::with_capacity(edges.len() + 1);
        out.push(x.trace() / sn);
        out.extend(edges.iter().map(|&(i, j)| s2 * x[(i, j)]));
        out
    };
    let adjoint = |y: &[f64]| -> DMatrix<f64> {
        let mut m = DMatrix::from_diagonal_element(n, n, y[0] / sn);
        for (&(i, j), &w) in edges.iter().zip(&y[1..]) {
            m[(i, j)] = w / s2;
            m[(j, i)] = w / s2;
        }
        m
    };
    let c = DMatrix::from_element(n, n, -1.0);
    let mut b = vec![0.0; edges.len() + 1];
    b[0] = 1.0 / sn;

    let mut x = DMatrix::from_diagonal_element(n, n, 1.0 / nf);
    let mut s = DMatrix::<f64>::zeros(n, n);
    let mu = 1.0;
    let mut best_upper = nf;
    let mut best_lower = 1.0;
    let mut upper_history = vec![best_upper];
    let mut lower_history = vec![best_lower];
    let (mut iters_upper, mut iters_lower) = (0, 0);
    let (mut primal_res, mut dual_res) = (f64::INFINITY, f64::INFINITY);

    for it in 1..=iters {
        // y = -(μ(A(X) − b) + A(S − C))
        let ax = apply(&x);
        let asc = apply(&(&s - &c));
        let y: Vec<f64> = (0..b.len()).map(|i| -(mu * (ax[i] - b[i]) + asc[i])).collect();
        let v = &c - adjoint(&y) - &x * mu;
        let eig = SymmetricEigen::new(v.clone());
        let mut pos = DMatrix::<f64>::zeros(n, n);
        for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam > 0.0 {
                let q = eig.eigenvectors.column(idx);
                pos += q * q.transpose() * lam;
            }
        }
        let s_new = pos;
        let x_new = (&s_new - &v) / mu;

        let r: Vec<f64> = apply(&x_new).iter().zip(&b).map(|(a, b)| a - b).collect();
        primal_res = r.iter().map(|t| t * t).sum::<f64>().sqrt();
        dual_res = (&x_new - &x).norm() * mu;
        x = x_new;
        s = s_new;

        if it % CERTIFY_EVERY == 0 || it == iters {
            // the dual edge multipliers, scaled back to matrix entries, complete J
            let ye: Vec<f64> = y[1..].iter().map(|w| w / s2).collect();
            let up = certify_upper(n, &edges, &ye);
            if up < best_upper {
                best_upper = up;
                iters_upper = it;
            }
            let lo = certify_lower(&x, &edges);
            if lo > best_lower {
                best_lower = lo;
                iters_lower = it;
            }
            upper_history.push(best_upper);
            lower_history.push(best_lower);
            if best_upper - best_lower <= tol {
                break;
            }
        }
    }

    if best_lower > best_upper + BRACKET_SLACK {
        return Err(ThetaError::Inverted {
            lower: best_lower,
            upper: best_upper,
        });
    }
    Ok(ThetaBracket {
        lower: best_lower,
        upper: best_upper,
        iters_lower,
        iters_upper,
        feasibility_residuals: vec![primal_res, dual_res],
        upper_history,
        lower_history,
    })
}

/// Certified upper bound on `ϑ(g)`.
pub fn theta_upper(g: &Graph, iters: usize, tol: f64) -> Result<f64, ThetaError> {
    Ok(theta_bracket(g, iters, tol)?.upper)
}

/// Certified lower bound on `ϑ(g)`.
pub fn theta_lower(g: &Graph, iters: usize, tol: f64) -> Result<f64, ThetaError> {
    Ok(theta_bracket(g, iters, tol)?.lower)
}
