//! Canonical labelling by individualization–refinement.
//!
//! The search tree individualizes vertices of the first non-singleton cell of
//! an equitable partition; leaves are compared by their adjacency bit string.
//! Siblings are pruned when they are twins of an explored vertex or lie in
//! its orbit under automorphisms already discovered at the leaves.

use std::collections::BTreeMap;

use crate::graph::Graph;

use super::HarnessError;

pub const CANON_MAX_N: usize = 16;
const MAX_STORED_AUTOMORPHISMS: usize = 64;

/// Canonical labelling: `labelling[i]` is the vertex placed at position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub labelling: Vec<usize>,
    /// Upper-triangle adjacency bits of the relabelled graph, column by column.
    pub certificate: u128,
}

impl Canonical {
    /// `position[v]` is the canonical label of vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.labelling.len()];
        for (i, &v) in self.labelling.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

pub(crate) fn rows_of(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).fold(0u32, |r, u| r | 1 << u))
        .collect()
}

pub fn canonical_form(g: &Graph) -> Result<Canonical, HarnessError> {
    if g.n() > CANON_MAX_N {
        return Err(HarnessError::TooLarge {
            what: "canonical form",
            n: g.n(),
            max: CANON_MAX_N,
        });
    }
    Ok(canon_rows(&rows_of(g), None))
}

/// The graph relabelled canonically; isomorphic inputs give equal outputs.
pub fn canonical_graph(g: &Graph) -> Result<Graph, HarnessError> {
    let c = canonical_form(g)?;
    let pos = c.positions();
    Ok(Graph::from_edges(g.n(), g.edges().map(|(u, v)| (pos[u], pos[v]))).expect("relabelling keeps edges valid"))
}

fn certificate(rows: &[u32], lab: &[usize]) -> u128 {
    let mut cert = 0u128;
    for j in 1..lab.len() {
        for i in 0..j {
            cert = cert << 1 | (rows[lab[i]] >> lab[j] & 1) as u128;
        }
    }
    cert
}

fn refine(rows: &[u32], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    'again: loop {
        for s in 0..cells.len() {
            let mask = cells[s].iter().fold(0u32, |m, &v| m | 1 << v);
            for c in 0..cells.len() {
                if cells[c].len() == 1 {
                    continue;
                }
                let count = |v: usize| (rows[v] & mask).count_ones();
                let first = count(cells[c][0]);
                if cells[c].iter().all(|&v| count(v) == first) {
                    continue;
                }
                let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for &v in &cells[c] {
                    groups.entry(count(v)).or_default().push(v);
                }
                cells.splice(c..=c, groups.into_values());
                continue 'again;
            }
        }
        return cells;
    }
}

struct Search<'a> {
    rows: &'a [u32],
    first: Option<(u128, Vec<usize>)>,
    best: Option<(u128, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    fn record_auto(&mut self, from: &[usize], to: &[usize]) {
        if self.autos.len() >= MAX_STORED_AUTOMORPHISMS || from == to {
            return;
        }
        let mut perm = vec![0; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            perm[a] = b;
        }
        self.autos.push(perm);
    }

    fn same_orbit(&self, prefix: &[usize], v: usize, explored: &[usize]) -> bool {
        let n = self.rows.len();
        let mut parent: Vec<usize> = (0..n).collect();
        for p in self.autos.iter().filter(|p| prefix.iter().all(|&x| p[x] == x)) {
            for (x, &y) in p.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == root)
    }

    fn leaf(&mut self, lab: Vec<usize>) {
        let cert = certificate(self.rows, &lab);
        match &self.first {
            None => {
                self.first = Some((cert, lab.clone()));
                self.best = Some((cert, lab));
                return;
            }
            Some((c, first)) if *c == cert => {
                let first = first.clone();
                self.record_auto(&first, &lab);
            }
            _ => {}
        }
        let (best_cert, best_lab) = self.best.clone().expect("set with first");
        if cert > best_cert {
            self.best = Some((cert, lab));
        } else if cert == best_cert {
            self.record_auto(&best_lab, &lab);
        }
    }

    fn run(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = refine(self.rows, cells);
        let Some(ci) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(cells.into_iter().flatten().collect());
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[ci] {
            let twin = explored
                .iter()
                .any(|&w| self.rows[v] & !(1 << w) == self.rows[w] & !(1 << v));
            if twin || self.same_orbit(prefix, v, &explored) {
                continue;
            }
            let rest: Vec<usize> = cells[ci].iter().copied().filter(|&u| u != v).collect();
            let mut next = cells.clone();
            next.splice(ci..=ci, [vec![v], rest]);
            prefix.push(v);
            self.run(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}

/// Canonical form of the graph given by bit rows, optionally respecting a
/// vertex colouring (cells ordered by colour).
pub(crate) fn canon_rows(rows: &[u32], colours: Option<&[usize]>) -> Canonical {
    let n = rows.len();
    if n == 0 {
        return Canonical {
            labelling: Vec::new(),
            certificate: 0,
        };
    }
    let cells: Vec<Vec<usize>> = match colours {
        None => vec![(0..n).collect()],
        Some(c) => {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for v in 0..n {
                groups.entry(c[v]).or_default().push(v);
            }
            groups.into_values().collect()
        }
    };
    let mut search = Search {
        rows,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    search.run(cells, &mut Vec::new());
    let (certificate, labelling) = search.best.expect("at least one leaf");
    Canonical { labelling, certificate }
}

/// Whether some automorphism maps `v` to `w`.
pub(crate) fn same_orbit(rows: &[u32], v: usize, w: usize) -> bool {
    if v == w {
        return true;
    }
    let mut colours = vec![0; rows.len()];
    colours[v] = 1;
    let a = canon_rows(rows, Some(&colours)).certificate;
    colours[v] = 0;
    colours[w] = 1;
    a == canon_rows(rows, Some(&colours)).certificate
}
