//! Isomorphism-class enumeration by canonical augmentation.
//!
//! Graphs on `m + 1` vertices are grown from class representatives on `m`
//! vertices by adding a vertex with every neighbourhood. A child is kept only
//! when the new vertex is equivalent, under automorphisms of the child, to its
//! canonical deletion vertex: the removable vertex of largest degree, ties
//! broken by the largest canonical label. Removable means non-cut for the
//! connected family and any vertex otherwise.

use std::collections::HashSet;

use crate::graph::Graph;

use super::canon::{canon_rows, canonical_form, same_orbit};
use super::HarnessError;

pub const ENUM_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Connected,
    All,
}

fn connected_without(rows: &[u32], skip: usize) -> bool {
    let n = rows.len();
    let alive: u32 = ((1u64 << n) - 1) as u32 & !(1 << skip);
    if alive == 0 {
        return true;
    }
    let mut seen = 1u32 << alive.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = rows[v] & alive & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == alive
}

fn removable(rows: &[u32], family: Family) -> Vec<usize> {
    (0..rows.len())
        .filter(|&v| family == Family::All || connected_without(rows, v))
        .collect()
}

fn accept(rows: &[u32], family: Family) -> bool {
    let new = rows.len() - 1;
    let candidates = removable(rows, family);
    let degree = |v: usize| rows[v].count_ones();
    let top = candidates.iter().map(|&v| degree(v)).max().unwrap_or(0);
    if degree(new) < top {
        return false;
    }
    let pos = canon_rows(rows, None).positions();
    let w = candidates
        .into_iter()
        .filter(|&v| degree(v) == top)
        .max_by_key(|&v| pos[v])
        .expect("the new vertex is a candidate");
    same_orbit(rows, new, w)
}

fn children(parent: &[u32], family: Family, out: &mut Vec<Vec<u32>>) {
    let m = parent.len();
    let start = if family == Family::Connected && m > 0 { 1 } else { 0 };
    let mut siblings = HashSet::new();
    for mask in start..1u32 << m {
        let mut rows: Vec<u32> = parent
            .iter()
            .enumerate()
            .map(|(v, &r)| r | (mask >> v & 1) << m)
            .collect();
        rows.push(mask);
        if accept(&rows, family) && siblings.insert(canon_rows(&rows, None).certificate) {
            out.push(rows);
        }
    }
}

fn to_graph(rows: &[u32]) -> Graph {
    Graph::from_fn(rows.len(), |u, v| rows[u] >> v & 1 == 1).expect("small graph")
}

/// One representative per isomorphism class on `n` vertices, in a fixed order.
pub fn enumerate(n: usize, family: Family) -> Result<Vec<Graph>, HarnessError> {
    if n == 0 || n > ENUM_MAX_N {
        return Err(HarnessError::TooLarge {
            what: "enumeration",
            n,
            max: ENUM_MAX_N,
        });
    }
    let mut level: Vec<Vec<u32>> = vec![vec![0]];
    for _ in 1..n {
        let mut next = Vec::new();
        for parent in &level {
            children(parent, family, &mut next);
        }
        level = next;
    }
    Ok(level.iter().map(|r| to_graph(r)).collect())
}

pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>, HarnessError> {
    enumerate(n, Family::Connected)
}

/// Keeps the first graph of each isomorphism class, preserving input order.
pub fn dedupe_by_canonical(graphs: impl IntoIterator<Item = Graph>) -> Result<Vec<Graph>, HarnessError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in graphs {
        if seen.insert((g.n(), canonical_form(&g)?.certificate)) {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_connected(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn all_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate(n, Family::All).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn outputs_are_connected() {
        assert!(enumerate_connected(6).unwrap().iter().all(|g| g.is_connected()));
    }

    #[test]
    fn guard() {
        assert!(enumerate_connected(0).is_err());
        assert!(enumerate_connected(11).is_err());
    }

    #[test]
    fn dedupe_keeps_first() {
        let a = Graph::from_edges(3, [(0, 1)]).unwrap();
        let b = Graph::from_edges(3, [(1, 2)]).unwrap();
        let c = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(dedupe_by_canonical([a.clone(), b, c.clone()]).unwrap(), vec![a, c]);
    }
}
