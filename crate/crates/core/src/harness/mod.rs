//! Exact combinatorial invariants, graph enumeration and the verification
//! suites behind the command-line tool.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::graph::Graph;
use crate::scaling::ScalingError;
use crate::spectra::SpectraError;
use crate::theta::ThetaError;
use crate::witnesses::WitnessError;

pub mod canon;
pub mod enumerate;
pub mod suites;

pub use canon::{canonical_form, canonical_graph, Canonical};
pub use enumerate::{dedupe_by_canonical, enumerate, enumerate_connected, Family};
pub use suites::{verify_expander, verify_johnson, verify_ng, verify_srg, GammaFamily, NgOptions, NgRecord};

pub const ALPHA_MAX_N: usize = 64;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{what} supports at most {max} vertices (got {n})")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("Ramsey table does not cover n = {0}")]
    RamseyCoverage(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Independence number by branch and bound over bitsets, bounding with a
/// greedy clique cover of the candidate set.
pub fn alpha_exact(g: &Graph) -> Result<usize, HarnessError> {
    let rows = g.bit_rows().ok_or(HarnessError::TooLarge {
        what: "alpha_exact",
        n: g.n(),
        max: ALPHA_MAX_N,
    })?;
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0;
    mis(&rows, all, 0, &mut best);
    Ok(best)
}

fn clique_cover_size(rows: &[u64], mut cand: u64) -> usize {
    let mut cliques = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut common = rows[v] & cand;
        cand &= !(1 << v);
        while common != 0 {
            let u = common.trailing_zeros() as usize;
            cand &= !(1 << u);
            common &= rows[u];
        }
        cliques += 1;
    }
    cliques
}

fn mis(rows: &[u64], cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover_size(rows, cand) <= *best {
        return;
    }
    let mut bits = cand;
    let (mut v, mut deg) = (0, 0);
    while bits != 0 {
        let u = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let d = (rows[u] & cand).count_ones();
        if d >= deg {
            (v, deg) = (u, d);
        }
    }
    if deg == 0 {
        *best = (*best).max(size + cand.count_ones() as usize);
        return;
    }
    mis(rows, cand & !(1 << v) & !rows[v], size + 1, best);
    mis(rows, cand & !(1 << v), size, best);
}

/// Classical Ramsey numbers needed for `n ≤ 9`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RamseyTable;

impl RamseyTable {
    pub const MAX_N: usize = 9;

    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        let (a, b) = (a.min(b), a.max(b));
        match (a, b) {
            (1, _) => Some(1),
            (2, b) => Some(b),
            (3, 3) => Some(6),
            (3, 4) => Some(9),
            (3, 5) => Some(14),
            (4, 4) => Some(18),
            _ => None,
        }
    }
}

/// `μₙ = min{ab : R(a+1, b+1) > n}`.
pub fn mu_lower(n: usize) -> Result<usize, HarnessError> {
    if n == 0 || n > RamseyTable::MAX_N {
        return Err(HarnessError::RamseyCoverage(n));
    }
    let table = RamseyTable;
    // a = 1 always qualifies with b = n, so only products below n matter
    let mut best = n;
    for a in 1..=n {
        for b in 1..=n {
            if a * b >= best {
                continue;
            }
            match table.get(a + 1, b + 1) {
                Some(r) if r > n => best = a * b,
                Some(_) => {}
                None => return Err(HarnessError::RamseyCoverage(n)),
            }
        }
    }
    Ok(best)
}

/// One failed assertion of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub record: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

/// Output of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub suite: String,
    pub params: serde_json::Value,
    pub records: Vec<R>,
    pub violations: Vec<Violation>,
    /// Filled in only on request so that reports stay reproducible.
    pub timing: Option<Timing>,
}

impl<R> Report<R> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A named numeric check with its observed value and the bound it must meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub value: String,
    pub bound: String,
    pub ok: bool,
}

impl CheckRecord {
    pub fn new(check: &str, value: impl ToString, bound: impl ToString, ok: bool) -> Self {
        Self {
            check: check.to_string(),
            value: value.to_string(),
            bound: bound.to_string(),
            ok,
        }
    }
}

pub(crate) fn check_report(suite: &str, params: serde_json::Value, records: Vec<CheckRecord>) -> Report<CheckRecord> {
    let violations = records
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.ok)
        .map(|(i, r)| Violation {
            record: i,
            check: r.check.clone(),
            detail: format!("value {} against bound {}", r.value, r.bound),
        })
        .collect();
    Report {
        suite: suite.to_string(),
        params,
        records,
        violations,
        timing: None,
    }
}
