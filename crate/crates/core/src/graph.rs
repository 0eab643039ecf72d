//! Immutable simple graphs on dense vertex indices `0..n`.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::{self, SymmetricMatrix};

/// Largest vertex count accepted by [`Graph`].
pub const MAX_VERTICES: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..={MAX_VERTICES}")]
    VertexCount(usize),
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("induced vertex set is empty")]
    EmptyInduced,
}

/// A simple undirected graph.
///
/// Adjacency is stored as sorted neighbour lists, so two graphs compare equal
/// exactly when they have the same vertex count and the same labelled edge set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Self {
            adj: vec![Vec::new(); n],
        })
    }

    /// Builds a graph from an edge list. Duplicate pairs (in either
    /// orientation) collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u].push(v as u32);
            g.adj[v].push(u as u32);
        }
        for row in &mut g.adj {
            row.sort_unstable();
            row.dedup();
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric adjacency predicate evaluated on `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for v in 1..n {
            for u in 0..v {
                if adjacent(u, v) {
                    g.adj[u].push(v as u32);
                    g.adj[v].push(u as u32);
                }
            }
        }
        for row in &mut g.adj {
            row.sort_unstable();
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&u| u as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|row| row.len() == d).then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The complement: `uv` is an edge iff `u != v` and `uv` is not an edge here.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, row)| {
                let mut out = Vec::with_capacity(n - 1 - row.len());
                let mut it = row.iter().peekable();
                for u in 0..n as u32 {
                    if it.peek() == Some(&&u) {
                        it.next();
                    } else if u as usize != v {
                        out.push(u);
                    }
                }
                out
            })
            .collect();
        Graph { adj }
    }

    /// Appends `t` universal vertices, adjacent to every other vertex
    /// (old and new).
    pub fn add_universal(&self, t: usize) -> Result<Graph, GraphError> {
        let n = self.n();
        let total = n + t;
        if total > MAX_VERTICES {
            return Err(GraphError::VertexCount(total));
        }
        let mut adj = self.adj.clone();
        for row in &mut adj {
            row.extend(n as u32..total as u32);
        }
        for w in n..total {
            adj.push((0..total as u32).filter(|&u| u as usize != w).collect());
        }
        Ok(Graph { adj })
    }

    /// The subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyInduced);
        }
        let mut index = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n() {
                return Err(GraphError::EndpointOutOfRange(v, v, self.n()));
            }
            index[v] = i as u32;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut row: Vec<u32> = self.adj[v]
                    .iter()
                    .map(|&u| index[u as usize])
                    .filter(|&i| i != u32::MAX)
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Ok(Graph { adj })
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    /// Dense adjacency matrix with unit weights.
    pub fn adjacency<T>(&self) -> SymmetricMatrix<T>
    where
        T: Clone + Zero + One,
    {
        let mut m = SymmetricMatrix::zeros(self.n());
        for (u, v) in self.edges() {
            m.set(u, v, T::one());
        }
        m
    }

    /// Adjacency rows as bit masks; requires `n <= 64`.
    pub fn bit_rows(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| {
            self.adj
                .iter()
                .map(|row| row.iter().fold(0u64, |m, &u| m | (1u64 << u)))
                .collect()
        })
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        queue.push_back(u);
                    } else if parent[v] != u {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Regularity and spectral expansion of an unweighted graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderReport {
    pub n: usize,
    pub is_regular: bool,
    pub degree: Option<usize>,
    /// `max(|λ₂|, |λₙ|)` of the adjacency spectrum, where the eigenvalue `-d`
    /// of a regular bipartite graph counts as trivial and is skipped.
    pub lambda: f64,
    /// Regular with `d < n/2 - 1`.
    pub satisfies_expander_hypothesis: bool,
}

/// Measures `(n, d, λ)` parameters. Regularity is decided from degrees only.
pub fn spectral_params(g: &Graph) -> Result<ExpanderReport, spectra::SpectraError> {
    let n = g.n();
    if n < 2 {
        return Err(spectra::SpectraError::Dimension(n));
    }
    let spectrum = spectra::eigenvalues(&g.adjacency::<f64>())?;
    let ev = &spectrum.eigenvalues;
    let degree = g.regular_degree();
    let tol = spectrum.tolerance.max(1e-9);
    let end = match degree {
        Some(d) if d > 0 && (ev[n - 1] + d as f64).abs() <= tol => n - 1,
        _ => n,
    };
    let lambda = ev[1..end].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let satisfies = degree.is_some_and(|d| (d as f64) < n as f64 / 2.0 - 1.0);
    Ok(ExpanderReport {
        n,
        is_regular: degree.is_some(),
        degree,
        lambda,
        satisfies_expander_hypothesis: satisfies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(3, [(0, 3)]), Err(GraphError::EndpointOutOfRange(0, 3, 3)));
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(Graph::empty(0), Err(GraphError::VertexCount(0)));
    }

    #[test]
    fn complement_of_complete_is_empty() {
        let k5 = Graph::from_fn(5, |_, _| true).unwrap();
        assert_eq!(k5.complement(), Graph::empty(5).unwrap());
    }

    #[test]
    fn c5_is_self_complementary() {
        let c5 = cycle(5);
        let co = c5.complement();
        // complement of the 5-cycle is the pentagram 0-2-4-1-3
        let pentagram = Graph::from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(co, pentagram);
        assert_eq!(co.regular_degree(), Some(2));
        assert!(co.is_connected());
    }

    #[test]
    fn universal_vertices() {
        let k2 = Graph::empty(1).unwrap().add_universal(1).unwrap();
        assert_eq!(k2, Graph::from_edges(2, [(0, 1)]).unwrap());
        let wheel = cycle(5).add_universal(1).unwrap();
        assert_eq!(wheel.degree(5), 5);
        assert_eq!(wheel.edge_count(), 10);
        let two = Graph::empty(2).unwrap().add_universal(2).unwrap();
        assert!(two.has_edge(2, 3));
        assert!(!two.has_edge(0, 1));
    }

    #[test]
    fn triangles() {
        assert!(cycle(5).is_triangle_free());
        assert!(!cycle(3).is_triangle_free());
    }

    #[test]
    fn girth_of_cycles() {
        assert_eq!(cycle(7).girth(), Some(7));
        assert_eq!(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap().girth(), None);
    }

    #[test]
    fn induced_relabels() {
        let h = cycle(5).induced(&[4, 0, 1]).unwrap();
        assert_eq!(h, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn c5_spectral_params() {
        let r = spectral_params(&cycle(5)).unwrap();
        assert_eq!(r.degree, Some(2));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.lambda - golden).abs() < 1e-10);
        assert!(!r.satisfies_expander_hypothesis);
    }

    #[test]
    fn k4_spectral_params() {
        let k4 = Graph::from_fn(4, |_, _| true).unwrap();
        let r = spectral_params(&k4).unwrap();
        assert_eq!(r.degree, Some(3));
        assert!((r.lambda - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bipartite_trivial_eigenvalue_skipped() {
        // C6 spectrum 2, 1, 1, -1, -1, -2
        let r = spectral_params(&cycle(6)).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-10);
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(spectral_params(&k2).unwrap().lambda, 0.0);
    }

    #[test]
    fn irregular_report_has_no_degree() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = spectral_params(&p3).unwrap();
        assert!(!r.is_regular);
        assert_eq!(r.degree, None);
        assert!(r.lambda <= p3.max_degree() as f64 + 1e-12);
    }
}
