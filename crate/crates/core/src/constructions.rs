//! Deterministic graph families: generalized Johnson graphs, Paley graphs,
//! projective-plane polarity and incidence graphs, and small fixtures.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::Matrix;

/// Largest vertex count a Johnson graph may have.
pub const JOHNSON_MAX_VERTICES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("{vertices} vertices exceeds the limit of {max}")]
    Size { vertices: u64, max: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn param(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Parameter(msg.into())
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `C(n, k)` in `u64`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A `k`-subset of `{0, …, n-1}` with strictly increasing elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    elements: Vec<usize>,
}

impl KSubset {
    pub fn new(mut elements: Vec<usize>, n: usize) -> Result<Self, ConstructionError> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(param("subset has repeated elements"));
        }
        if elements.last().is_some_and(|&x| x >= n) {
            return Err(param(format!("subset element outside 0..{n}")));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn intersection_size(&self, other: &KSubset) -> usize {
        let (a, b) = (&self.elements, &other.elements);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Position in the lexicographic order of all `k`-subsets of `[n]`.
    pub fn rank(&self, n: usize) -> u64 {
        let k = self.elements.len();
        let mut r = 0u64;
        let mut prev = 0usize;
        for (i, &e) in self.elements.iter().enumerate() {
            for x in prev..e {
                r += binomial((n - x - 1) as u64, (k - i - 1) as u64);
            }
            prev = e + 1;
        }
        r
    }

    /// Inverse of [`KSubset::rank`].
    pub fn unrank(mut r: u64, n: usize, k: usize) -> Self {
        let mut elements = Vec::with_capacity(k);
        let mut x = 0;
        for i in 0..k {
            loop {
                let c = binomial((n - x - 1) as u64, (k - i - 1) as u64);
                if r < c {
                    break;
                }
                r -= c;
                x += 1;
            }
            elements.push(x);
            x += 1;
        }
        Self { elements }
    }
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<KSubset> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(KSubset { elements: cur.clone() });
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn check_johnson(n: usize, k: usize, forbidden: &[usize]) -> Result<(), ConstructionError> {
    if k == 0 || n <= k {
        return Err(param(format!("need n > k >= 1, got n = {n}, k = {k}")));
    }
    if let Some(&l) = forbidden.iter().find(|&&l| l >= k) {
        return Err(param(format!("intersection size {l} not in 0..{k}")));
    }
    let v = binomial(n as u64, k as u64);
    if v > JOHNSON_MAX_VERTICES {
        return Err(ConstructionError::Size {
            vertices: v,
            max: JOHNSON_MAX_VERTICES,
        });
    }
    Ok(())
}

/// Generalized Johnson graph `G(n, k, L)`: `k`-subsets of `[n]` in
/// lexicographic order, adjacent iff distinct with intersection size not in `L`.
pub fn johnson(n: usize, k: usize, forbidden: &[usize]) -> Result<Graph, ConstructionError> {
    check_johnson(n, k, forbidden)?;
    let subsets = k_subsets(n, k);
    let mut excluded = vec![false; k];
    for &l in forbidden {
        excluded[l] = true;
    }
    Ok(Graph::from_fn(subsets.len(), |a, b| {
        !excluded[subsets[a].intersection_size(&subsets[b])]
    })?)
}

/// Arithmetic modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ConstructionError> {
        if !is_prime(p) {
            return Err(param(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow(a, self.p - 2))
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.p == 2 || self.pow(a, (self.p - 1) / 2) == 1
    }

    pub fn dot(&self, x: &[u64; 3], y: &[u64; 3]) -> u64 {
        (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) % self.p
    }
}

/// A point of PG(2, p): homogeneous coordinates whose first nonzero entry is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: [u64; 3],
}

impl ProjectivePoint {
    /// Normalizes a nonzero vector.
    pub fn new(field: &PrimeField, mut coords: [u64; 3]) -> Option<Self> {
        for c in &mut coords {
            *c %= field.order();
        }
        let lead = coords.iter().copied().find(|&c| c != 0)?;
        let inv = field.inv(lead)?;
        Some(Self {
            coords: coords.map(|c| field.mul(c, inv)),
        })
    }

    pub fn coords(&self) -> [u64; 3] {
        self.coords
    }
}

/// The `p² + p + 1` points of PG(2, p), sorted lexicographically.
pub fn projective_points(field: &PrimeField) -> Vec<ProjectivePoint> {
    let p = field.order();
    let mut pts = Vec::with_capacity((p * p + p + 1) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let x = [a, b, c];
                if let Some(pt) = ProjectivePoint::new(field, x) {
                    if pt.coords == x {
                        pts.push(pt);
                    }
                }
            }
        }
    }
    pts
}

/// Polarity graph together with its absolute points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityGraph {
    pub graph: Graph,
    pub points: Vec<ProjectivePoint>,
    /// Vertices `x` with `x·x = 0`.
    pub absolute_points: Vec<usize>,
}

/// Polarity graph of PG(2, q): distinct points adjacent iff `x·y = 0`.
pub fn polarity(q: u64) -> Result<PolarityGraph, ConstructionError> {
    let field = PrimeField::new(q)?;
    let points = projective_points(&field);
    let coords: Vec<[u64; 3]> = points.iter().map(|p| p.coords).collect();
    let graph = Graph::from_fn(points.len(), |u, v| field.dot(&coords[u], &coords[v]) == 0)?;
    let absolute_points = (0..points.len())
        .filter(|&v| field.dot(&coords[v], &coords[v]) == 0)
        .collect();
    Ok(PolarityGraph {
        graph,
        points,
        absolute_points,
    })
}

impl PolarityGraph {
    /// Adjacency matrix with a loop at every absolute point, i.e. the
    /// orthogonality relation `x·y = 0` including `x = y`. Its spectrum is
    /// `q + 1` once and `±√q` otherwise.
    pub fn polarity_matrix(&self) -> Matrix {
        let mut m: Matrix = self.graph.adjacency();
        for &v in &self.absolute_points {
            m.set(v, v, 1.0);
        }
        m
    }
}

/// Subgraph of the polarity graph induced on its non-absolute points.
pub fn polarity_core(q: u64) -> Result<Graph, ConstructionError> {
    let pg = polarity(q)?;
    let keep: Vec<usize> = (0..pg.graph.n())
        .filter(|v| pg.absolute_points.binary_search(v).is_err())
        .collect();
    Ok(pg.graph.induced(&keep)?)
}

/// Point–line incidence graph of PG(2, q). Points are vertices
/// `0..N`, lines `N..2N` with `N = q² + q + 1`.
pub fn incidence(q: u64) -> Result<Graph, ConstructionError> {
    let field = PrimeField::new(q)?;
    let coords: Vec<[u64; 3]> = projective_points(&field).iter().map(|p| p.coords).collect();
    let n = coords.len();
    Ok(Graph::from_fn(2 * n, |u, v| {
        u < n && v >= n && field.dot(&coords[u], &coords[v - n]) == 0
    })?)
}

/// Paley graph on `Z_q` for a prime `q ≡ 1 (mod 4)`.
pub fn paley(q: u64) -> Result<Graph, ConstructionError> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(param(format!("Paley graphs need a prime q ≡ 1 (mod 4), got {q}")));
    }
    let field = PrimeField::new(q)?;
    Ok(Graph::from_fn(q as usize, |u, v| field.is_square((v - u) as u64))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardGraph {
    Cycle,
    Path,
    Complete,
    Empty,
    Petersen,
    Heawood,
}

impl FromStr for StandardGraph {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "cycle" => Self::Cycle,
            "path" => Self::Path,
            "complete" => Self::Complete,
            "empty" => Self::Empty,
            "petersen" => Self::Petersen,
            "heawood" => Self::Heawood,
            other => return Err(param(format!("unknown graph family {other:?}"))),
        })
    }
}

impl fmt::Display for StandardGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cycle => "cycle",
            Self::Path => "path",
            Self::Complete => "complete",
            Self::Empty => "empty",
            Self::Petersen => "petersen",
            Self::Heawood => "heawood",
        })
    }
}

/// Small fixture graphs. Petersen is the Kneser graph K(5, 2) in Johnson
/// order; Heawood is `incidence(2)`.
pub fn standard(name: StandardGraph, n: usize) -> Result<Graph, ConstructionError> {
    let bad = || param(format!("{name} is not defined on {n} vertices"));
    match name {
        StandardGraph::Cycle if n >= 3 => Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?),
        StandardGraph::Path if n >= 1 => Ok(Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))?),
        StandardGraph::Complete if n >= 1 => Ok(Graph::from_fn(n, |_, _| true)?),
        StandardGraph::Empty if n >= 1 => Ok(Graph::empty(n)?),
        StandardGraph::Petersen if n == 10 => johnson(5, 2, &[1]),
        StandardGraph::Heawood if n == 14 => incidence(2),
        _ => Err(bad()),
    }
}
