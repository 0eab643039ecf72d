//! Certificates bounding `n≥0(G)`.
//!
//! Upper bounds come from explicit weighted adjacency matrices (their
//! nonnegative-eigenvalue count) and from fitting matrices of low rank.
//! Lower bounds come from spanning spectral expanders in the complement and
//! from orthogonal representations.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{self, binomial, k_subsets, ConstructionError};
use crate::graph::{spectral_params, Graph};
use crate::spectra::{self, eigen_sym, SpectraError};
use crate::Matrix;

/// Relative soundness buffer: an eigenvalue counts as negative only below
/// `-WITNESS_MARGIN·max(1, ‖A‖_F)`.
pub const WITNESS_MARGIN: f64 = 1e-6;
/// Largest graph accepted by [`witness_search`].
pub const SEARCH_MAX_N: usize = 200;
/// Row norms of a 1-regular matrix must be within this of 1.
pub const ONE_REGULAR_TOL: f64 = 1e-6;
/// `|⟨A, Λ(λI - A_Γ)Λ⟩|` must be below this times `‖A‖_F`.
pub const FROBENIUS_ZERO_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum HypothesisClause {
    VertexCount { graph: usize, gamma: usize },
    /// Γ shares the edge `(u, v)` with G.
    EdgeOverlap { u: usize, v: usize },
    Irregular,
    /// `d < n/2 - 1` fails.
    DegreeTooLarge { d: usize, n: usize },
}

impl fmt::Display for HypothesisClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::VertexCount { graph, gamma } => {
                write!(f, "vertex counts differ ({graph} vs {gamma})")
            }
            Self::EdgeOverlap { u, v } => write!(f, "Γ edge ({u}, {v}) is an edge of G"),
            Self::Irregular => write!(f, "Γ is not regular"),
            Self::DegreeTooLarge { d, n } => write!(f, "d = {d} is not below n/2 - 1 = {}", *n as f64 / 2.0 - 1.0),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("hypothesis failed: {0}")]
    Hypothesis(HypothesisClause),
    #[error("matrix is not 1-regular: row {row} has norm {norm}")]
    NotOneRegular { row: usize, norm: f64 },
    #[error("entry ({i}, {j}) lies on an edge of Γ or the diagonal; Frobenius product = {frobenius_zero:e}")]
    SupportViolation { i: usize, j: usize, frobenius_zero: f64 },
    #[error("edge ({u}, {v}): inner product {inner:e} is not zero")]
    NotOrthogonal { u: usize, v: usize, inner: f64 },
    #[error("vector {vertex} has norm {norm}, expected 1")]
    NotUnit { vertex: usize, norm: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("fit violated at ({u}, {v}): entry {value}")]
    FitViolation { u: usize, v: usize, value: f64 },
    #[error("graph has {0} vertices, search is limited to {SEARCH_MAX_N}")]
    TooLarge(usize),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// `((d + λ) / (8λ))^{1/3}`.
pub fn cube_root_bound(d: f64, lambda: f64) -> f64 {
    ((d + lambda) / (8.0 * lambda)).cbrt()
}

/// Lower bound on `n≥0(G)` from a spanning `(n, d, λ)`-graph Γ of the complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderBoundResult {
    pub n: usize,
    /// Degree of Γ (the maximum degree when Γ is irregular).
    pub d: usize,
    /// `max(|λ₂|, |λₙ|)` measured on Γ.
    pub lambda: f64,
    pub bound: f64,
    pub hypothesis_ok: bool,
    pub violations: Vec<HypothesisClause>,
}

/// Evaluates the expander bound and lists every violated hypothesis clause.
pub fn evaluate_expander_bound(g: &Graph, gamma: &Graph) -> Result<ExpanderBoundResult, WitnessError> {
    let n = gamma.n();
    let mut violations = Vec::new();
    if g.n() != n {
        violations.push(HypothesisClause::VertexCount { graph: g.n(), gamma: n });
    } else if let Some((u, v)) = gamma.edges().find(|&(u, v)| g.has_edge(u, v)) {
        violations.push(HypothesisClause::EdgeOverlap { u, v });
    }
    let report = spectral_params(gamma)?;
    let d = report.degree.unwrap_or_else(|| gamma.max_degree());
    if !report.is_regular {
        violations.push(HypothesisClause::Irregular);
    }
    if !((d as f64) < n as f64 / 2.0 - 1.0) {
        violations.push(HypothesisClause::DegreeTooLarge { d, n });
    }
    Ok(ExpanderBoundResult {
        n,
        d,
        lambda: report.lambda,
        bound: cube_root_bound(d as f64, report.lambda),
        hypothesis_ok: violations.is_empty(),
        violations,
    })
}

/// As [`evaluate_expander_bound`], failing on the first violated clause.
pub fn expander_lower_bound(g: &Graph, gamma: &Graph) -> Result<ExpanderBoundResult, WitnessError> {
    let r = evaluate_expander_bound(g, gamma)?;
    match r.violations.first() {
        Some(c) => Err(WitnessError::Hypothesis(c.clone())),
        None => Ok(r),
    }
}

/// Every intermediate quantity of the expander argument, evaluated on a
/// concrete 1-regular matrix `A` supported on the complement of Γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    /// `n≥0(A)`.
    pub k: usize,
    pub lambda1: f64,
    /// `√n / (2k)`.
    pub lambda1_lower: f64,
    /// `‖v‖_∞` of the top unit eigenvector.
    pub vinf: f64,
    /// `2k / √n`.
    pub vinf_upper: f64,
    /// `⟨A, Λ(λI − A_Γ)Λ⟩`, zero by disjoint supports.
    pub frobenius_zero: f64,
    /// `Σ_{i≥2} λᵢ (vⁱ∘v)ᵀ(λI − A_Γ)(vⁱ∘v)`.
    pub tail_sum: f64,
    /// `λ₁ (v∘v)ᵀ(A_Γ − λI)(v∘v)`; equals `tail_sum`.
    pub head_term: f64,
    /// `(8k²λ/n) Σ_{i=2}^{k} λᵢ`, an upper bound for `tail_sum`.
    pub tail_upper: f64,
    /// `((d + λ)/n − 8k²λ/n) λ₁`, a lower bound for `head_term`.
    pub head_lower: f64,
    pub bound: f64,
    pub lambda1_ok: bool,
    pub vinf_ok: bool,
    pub frobenius_ok: bool,
    pub identity_ok: bool,
    pub tail_ok: bool,
    pub head_ok: bool,
    /// `k ≥ ((d + λ)/(8λ))^{1/3}`.
    pub final_inequality_ok: bool,
}

impl DiagnosticsReport {
    pub fn all_ok(&self) -> bool {
        self.lambda1_ok
            && self.vinf_ok
            && self.frobenius_ok
            && self.identity_ok
            && self.tail_ok
            && self.head_ok
            && self.final_inequality_ok
    }
}

fn quad_form(gamma: &Graph, lambda: f64, w: &[f64]) -> f64 {
    // wᵀ(λI − A_Γ)w
    let diag: f64 = w.iter().map(|x| x * x).sum::<f64>() * lambda;
    let off: f64 = gamma.edges().map(|(i, j)| 2.0 * w[i] * w[j]).sum();
    diag - off
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + IDENTITY_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Evaluates the proof quantities for `A` against a regular Γ.
pub fn proof_diagnostics(a: &Matrix, gamma: &Graph) -> Result<DiagnosticsReport, WitnessError> {
    let n = gamma.n();
    if a.dim() != n {
        return Err(WitnessError::Dimension(format!("matrix {} vs Γ {n}", a.dim())));
    }
    let d = gamma
        .regular_degree()
        .ok_or(WitnessError::Hypothesis(HypothesisClause::Irregular))?;
    let lambda = spectral_params(gamma)?.lambda;
    let fro = a.frobenius_norm();

    let eig = eigen_sym(a)?;
    let ev = &eig.spectrum.eigenvalues;
    let v: Vec<f64> = eig.vector(0).iter().copied().collect();

    let diag_part: f64 = (0..n).map(|i| lambda * a.get(i, i) * v[i] * v[i]).sum();
    let edge_part: f64 = gamma.edges().map(|(i, j)| 2.0 * a.get(i, j) * v[i] * v[j]).sum();
    let frobenius_zero = diag_part - edge_part;
    let offending = (0..n)
        .find(|&i| *a.get(i, i) != 0.0)
        .map(|i| (i, i))
        .or_else(|| gamma.edges().find(|&(i, j)| *a.get(i, j) != 0.0));
    if let Some((i, j)) = offending {
        return Err(WitnessError::SupportViolation { i, j, frobenius_zero });
    }
    if let Some((row, norm)) = a
        .row_norms()
        .into_iter()
        .enumerate()
        .find(|(_, r)| (r - 1.0).abs() > ONE_REGULAR_TOL)
    {
        return Err(WitnessError::NotOneRegular { row, norm });
    }

    let k = eig.spectrum.inertia().n_nonneg;
    let (nf, kf) = (n as f64, k as f64);
    let lambda1 = ev[0];
    let vinf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let tail_sum: f64 = (1..n)
        .map(|i| {
            let w: Vec<f64> = eig.eigenvectors.column(i).iter().zip(&v).map(|(a, b)| a * b).collect();
            ev[i] * quad_form(gamma, lambda, &w)
        })
        .sum();
    let vv: Vec<f64> = v.iter().map(|x| x * x).collect();
    let head_term = -lambda1 * quad_form(gamma, lambda, &vv);
    let scale = 8.0 * kf * kf * lambda / nf;
    let tail_upper = scale * ev[1..k.max(1)].iter().sum::<f64>();
    let head_lower = ((d as f64 + lambda) / nf - scale) * lambda1;
    let bound = cube_root_bound(d as f64, lambda);

    Ok(DiagnosticsReport {
        n,
        d,
        lambda,
        k,
        lambda1,
        lambda1_lower: nf.sqrt() / (2.0 * kf),
        vinf,
        vinf_upper: 2.0 * kf / nf.sqrt(),
        frobenius_zero,
        tail_sum,
        head_term,
        tail_upper,
        head_lower,
        bound,
        lambda1_ok: leq(nf.sqrt() / (2.0 * kf), lambda1),
        vinf_ok: leq(vinf, 2.0 * kf / nf.sqrt()),
        frobenius_ok: frobenius_zero.abs() <= FROBENIUS_ZERO_TOL * fro.max(1.0),
        identity_ok: (tail_sum - head_term).abs() <= IDENTITY_TOL * (1.0 + tail_sum.abs()),
        tail_ok: leq(tail_sum, tail_upper),
        head_ok: leq(head_lower, head_term),
        final_inequality_ok: kf >= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Unweighted,
    Negated,
    JohnsonClosedForm,
    RandomGaussian,
    SignPerturbed,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Unweighted,
        Strategy::Negated,
        Strategy::JohnsonClosedForm,
        Strategy::RandomGaussian,
        Strategy::SignPerturbed,
    ];
}

/// A weighted adjacency matrix and the sound nonnegative-eigenvalue count it
/// certifies as an upper bound on `n≥0(G)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub matrix: Matrix,
    pub upper_bound: usize,
    pub strategy: Strategy,
    /// Smallest `|λ|` among the eigenvalues counted negative.
    pub margin: Option<f64>,
    /// Threshold `ε` an eigenvalue had to clear (`λ < −ε`) to count negative.
    pub epsilon_margin: f64,
}

/// Counts with the soundness buffer: negatives must clear `-ε_margin`.
pub fn certify(matrix: Matrix, strategy: Strategy) -> Result<WitnessCertificate, WitnessError> {
    let spectrum = spectra::eigenvalues(&matrix)?;
    let eps = WITNESS_MARGIN * matrix.frobenius_norm().max(1.0);
    let negatives: Vec<f64> = spectrum.eigenvalues.iter().copied().filter(|&x| x < -eps).collect();
    Ok(WitnessCertificate {
        upper_bound: matrix.dim() - negatives.len(),
        margin: negatives.iter().map(|x| x.abs()).reduce(f64::min),
        epsilon_margin: eps,
        matrix,
        strategy,
    })
}

/// `M = UUᵀ − (k − ℓ)I − ℓJ` over the `k`-subsets of `[n]` in lexicographic
/// order: `M_AB = |A ∩ B| − ℓ` off the diagonal, zero on it.
pub fn johnson_matrix(n: usize, k: usize, l: usize) -> Result<Matrix, WitnessError> {
    if k == 0 || n <= k || l >= k {
        return Err(ConstructionError::Parameter(format!(
            "need 0 <= l < k < n, got n = {n}, k = {k}, l = {l}"
        ))
        .into());
    }
    let count = binomial(n as u64, k as u64);
    if count > constructions::JOHNSON_MAX_VERTICES {
        return Err(ConstructionError::Size {
            vertices: count,
            max: constructions::JOHNSON_MAX_VERTICES,
        }
        .into());
    }
    let subsets = k_subsets(n, k);
    Ok(Matrix::from_fn(subsets.len(), |a, b| {
        if a == b {
            0.0
        } else {
            subsets[a].intersection_size(&subsets[b]) as f64 - l as f64
        }
    }))
}

/// Witness for `n≥0(G(n, k, {ℓ})) ≤ n`. The support of the matrix is checked
/// against the graph exactly before counting.
pub fn johnson_witness(n: usize, k: usize, l: usize) -> Result<WitnessCertificate, WitnessError> {
    let m = johnson_matrix(n, k, l)?;
    let g = constructions::johnson(n, k, &[l])?;
    check_support(&m, &g)?;
    certify(m, Strategy::JohnsonClosedForm)
}

fn check_support(m: &Matrix, g: &Graph) -> Result<(), WitnessError> {
    for i in 0..m.dim() {
        for j in 0..=i {
            let nonzero = *m.get(i, j) != 0.0;
            if nonzero != g.has_edge(i, j) {
                return Err(WitnessError::FitViolation {
                    u: j,
                    v: i,
                    value: *m.get(i, j),
                });
            }
        }
    }
    Ok(())
}

/// Finds `(n, k, ℓ)` with `g` equal (as a labelled graph) to `G(n, k, {ℓ})`.
pub fn johnson_signature(g: &Graph) -> Option<(usize, usize, usize)> {
    let target = g.n() as u64;
    let degree = g.regular_degree()?;
    for k in 1usize.. {
        if binomial(2 * k as u64 + 1, k as u64) > target && k > 1 {
            break;
        }
        let mut n = k + 1;
        loop {
            let c = binomial(n as u64, k as u64);
            if c > target {
                break;
            }
            if c == target {
                for l in 0..k {
                    // degree of G(n, k, {l}) is C(n,k) − 1 − C(k,l)·C(n−k,k−l)
                    let non_nbrs = binomial(k as u64, l as u64) * binomial((n - k) as u64, (k - l) as u64);
                    if c - 1 - non_nbrs != degree as u64 {
                        continue;
                    }
                    if constructions::johnson(n, k, &[l]).is_ok_and(|h| &h == g) {
                        return Some((n, k, l));
                    }
                }
            }
            n += 1;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub strategies: Vec<Strategy>,
    pub seed: u64,
    pub rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            strategies: Strategy::ALL.to_vec(),
            seed: 0,
            rounds: 32,
        }
    }
}

fn matrix_hash(m: &Matrix) -> u64 {
    // FNV-1a over the bit patterns
    m.lower_triangle().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, x| {
        (h ^ x.to_bits()).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn weighted(g: &Graph, mut weight: impl FnMut() -> f64) -> Matrix {
    let mut m = Matrix::zeros(g.n());
    for (u, v) in g.edges() {
        m.set(u, v, weight());
    }
    m
}

/// Best sound upper bound on `n≥0(g)` over the requested strategies. The
/// unweighted adjacency matrix is always among the candidates.
pub fn witness_search(g: &Graph, opts: &SearchOptions) -> Result<WitnessCertificate, WitnessError> {
    if g.n() > SEARCH_MAX_N {
        return Err(WitnessError::TooLarge(g.n()));
    }
    let mut jobs: Vec<(Strategy, u64)> = vec![(Strategy::Unweighted, 0)];
    for &s in &opts.strategies {
        match s {
            Strategy::Unweighted => {}
            Strategy::Negated | Strategy::JohnsonClosedForm => jobs.push((s, 0)),
            Strategy::RandomGaussian | Strategy::SignPerturbed => {
                jobs.extend((0..opts.rounds as u64).map(|r| (s, r)));
            }
        }
    }
    jobs.sort();
    jobs.dedup();
    let signature = if jobs.iter().any(|j| j.0 == Strategy::JohnsonClosedForm) {
        johnson_signature(g)
    } else {
        None
    };

    let certificates: Vec<WitnessCertificate> = jobs
        .par_iter()
        .filter_map(|&(strategy, round)| {
            let m = match strategy {
                Strategy::Unweighted => g.adjacency(),
                Strategy::Negated => g.adjacency::<f64>().map(|x| -x),
                Strategy::JohnsonClosedForm => {
                    let (n, k, l) = signature?;
                    johnson_matrix(n, k, l).ok()?
                }
                Strategy::RandomGaussian | Strategy::SignPerturbed => {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    rng.set_stream(((strategy as u64) << 32) | round);
                    if strategy == Strategy::RandomGaussian {
                        weighted(g, || rng.sample(StandardNormal))
                    } else {
                        weighted(g, || if rng.random::<bool>() { 1.0 } else { -1.0 })
                    }
                }
            };
            Some(certify(m, strategy))
        })
        .collect::<Result<_, _>>()?;

    Ok(certificates
        .into_iter()
        .min_by_key(|c| (c.upper_bound, c.strategy, matrix_hash(&c.matrix)))
        .expect("unweighted candidate is always present"))
}

/// `n / d` for an orthogonal representation in dimension `d`: unit vectors
/// with adjacent vertices mapped to orthogonal vectors.
pub fn orth_rep_lower_bound(g: &Graph, vectors: &[Vec<f64>]) -> Result<f64, WitnessError> {
    if vectors.len() != g.n() {
        return Err(WitnessError::Dimension(format!(
            "{} vectors for {} vertices",
            vectors.len(),
            g.n()
        )));
    }
    let dim = vectors[0].len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(WitnessError::Dimension("vectors must share a positive dimension".into()));
    }
    for (vertex, x) in vectors.iter().enumerate() {
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > ORTHO_TOL {
            return Err(WitnessError::NotUnit { vertex, norm });
        }
    }
    for (u, v) in g.edges() {
        let inner: f64 = vectors[u].iter().zip(&vectors[v]).map(|(a, b)| a * b).sum();
        if inner.abs() > ORTHO_TOL {
            return Err(WitnessError::NotOrthogonal { u, v, inner });
        }
    }
    Ok(g.n() as f64 / dim as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaemersCertificate {
    pub rank: usize,
    /// `2·rank`.
    pub upper_bound: usize,
}

/// Upper bound `2·rank(m)` from a real matrix fitting `g`: unit diagonal and
/// zeros on non-adjacent pairs.
pub fn haemers_witness(g: &Graph, m: &DMatrix<f64>) -> Result<HaemersCertificate, WitnessError> {
    let n = g.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(WitnessError::Dimension(format!(
            "{}x{} matrix for {n} vertices",
            m.nrows(),
            m.ncols()
        )));
    }
    for u in 0..n {
        for v in 0..n {
            let value = m[(u, v)];
            let ok = if u == v {
                value == 1.0
            } else {
                g.has_edge(u, v) || value == 0.0
            };
            if !ok {
                return Err(WitnessError::FitViolation { u, v, value });
            }
        }
    }
    let sv = m.clone().singular_values();
    let largest = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * largest).count();
    Ok(HaemersCertificate {
        rank,
        upper_bound: 2 * rank,
    })
}
