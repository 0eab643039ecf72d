//! Verification suites. Each returns a [`Report`] whose violation list is
//! empty exactly when every assertion held.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constructions::{incidence, paley, polarity_core};
use crate::graph::{spectral_params, Graph};
use crate::graph6;
use crate::scaling::{sinkhorn, SinkhornOptions};
use crate::spectra::{self, inertia_exact};
use crate::theta::{claim33_monotone, linz_theta};
use crate::witnesses::{evaluate_expander_bound, johnson_witness, proof_diagnostics};
use crate::Rational;

use super::enumerate::{dedupe_by_canonical, enumerate, Family};
use super::{alpha_exact, check_report, mu_lower, CheckRecord, HarnessError, Report, RamseyTable, Violation};

/// Largest order of the exhaustive sweep.
pub const NG_MAX_N: usize = 9;

/// One graph of the Nordhaus–Gaddum sweep. Inertia counts are exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgRecord {
    pub graph6: String,
    pub n: usize,
    pub edges: usize,
    pub inertia_g: usize,
    pub inertia_cog: usize,
    pub product: usize,
    pub sum: usize,
    pub product_ok: bool,
    pub sum_ok: bool,
    pub product_tight: bool,
    pub sum_tight: bool,
    pub alpha_g: usize,
    pub alpha_cog: usize,
    /// `α ≤ n≥0` for both the graph and its complement.
    pub inertia_bound_ok: bool,
    /// `μₙ`, when the Ramsey table covers `n`.
    pub mu: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct NgOptions {
    pub max_n: usize,
    pub jobs: usize,
    pub all_graphs: bool,
    /// Replaces enumeration by these graphs (deduplicated by isomorphism class).
    pub source: Option<Vec<Graph>>,
}

fn ng_record(g: &Graph) -> Result<NgRecord, HarnessError> {
    let n = g.n();
    let co = g.complement();
    let inertia_g = inertia_exact(&g.adjacency())?.n_nonneg;
    let inertia_cog = inertia_exact(&co.adjacency())?.n_nonneg;
    let (alpha_g, alpha_cog) = (alpha_exact(g)?, alpha_exact(&co)?);
    let (product, sum) = (inertia_g * inertia_cog, inertia_g + inertia_cog);
    Ok(NgRecord {
        graph6: graph6::encode_string(g),
        n,
        edges: g.edge_count(),
        inertia_g,
        inertia_cog,
        product,
        sum,
        product_ok: product >= n,
        sum_ok: sum <= n + 1,
        product_tight: product == n,
        sum_tight: sum == n + 1,
        alpha_g,
        alpha_cog,
        inertia_bound_ok: alpha_g <= inertia_g && alpha_cog <= inertia_cog,
        mu: (n <= RamseyTable::MAX_N).then(|| mu_lower(n)).transpose()?,
    })
}

fn ng_violations(i: usize, r: &NgRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |check: &str, detail: String| {
        out.push(Violation {
            record: i,
            check: check.to_string(),
            detail: format!("{}: {detail}", r.graph6),
        })
    };
    if !r.product_ok {
        push("product", format!("{} * {} < {}", r.inertia_g, r.inertia_cog, r.n));
    }
    if !r.sum_ok {
        push("sum", format!("{} + {} > {} + 1", r.inertia_g, r.inertia_cog, r.n));
    }
    if !r.inertia_bound_ok {
        push("inertia_bound", format!("alpha ({}, {}) exceeds inertia", r.alpha_g, r.alpha_cog));
    }
    if let Some(mu) = r.mu {
        if r.product < mu {
            push("mu", format!("product {} < mu {mu}", r.product));
        }
    }
    out
}

/// Exact-inertia sweep of the product and additive Nordhaus–Gaddum bounds.
/// Records keep enumeration order regardless of the worker count.
pub fn verify_ng(opts: &NgOptions) -> Result<Report<NgRecord>, HarnessError> {
    use rayon::prelude::*;

    let family = if opts.all_graphs { Family::All } else { Family::Connected };
    let graphs: Vec<Graph> = match &opts.source {
        Some(src) => dedupe_by_canonical(src.iter().cloned())?
            .into_iter()
            .filter(|g| opts.all_graphs || g.is_connected())
            .collect(),
        None => {
            if opts.max_n > NG_MAX_N {
                return Err(HarnessError::TooLarge {
                    what: "Nordhaus-Gaddum sweep",
                    n: opts.max_n,
                    max: NG_MAX_N,
                });
            }
            let mut all = Vec::new();
            for n in 1..=opts.max_n {
                all.extend(enumerate(n, family)?);
            }
            all
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Parameter(e.to_string()))?;
    let records: Vec<NgRecord> = pool.install(|| graphs.par_iter().map(ng_record).collect::<Result<_, _>>())?;
    let violations = records.iter().enumerate().flat_map(|(i, r)| ng_violations(i, r)).collect();
    let mut counts = vec![0usize; records.iter().map(|r| r.n).max().unwrap_or(0) + 1];
    for r in &records {
        counts[r.n] += 1;
    }
    Ok(Report {
        suite: "ng".into(),
        params: json!({
            "max_n": opts.max_n,
            "family": if opts.all_graphs { "all" } else { "connected" },
            "external_source": opts.source.is_some(),
            "classes_per_n": &counts[1.min(counts.len())..],
        }),
        records,
        violations,
        timing: None,
    })
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Witness and theta side of the Johnson-graph separation at
/// `n = k³ + 1`, `ℓ = ⌊k/2⌋`. The spectral witness runs for `k ≤ 3`.
pub fn verify_johnson(k: usize) -> Result<Report<CheckRecord>, HarnessError> {
    if !(2..=12).contains(&k) {
        return Err(HarnessError::Parameter(format!("k must be in 2..=12, got {k}")));
    }
    let (n, l) = (k * k * k + 1, k / 2);
    let full = k <= 3;
    let mut records = Vec::new();
    if full {
        let w = johnson_witness(n, k, l)?;
        records.push(CheckRecord::new("witness_upper_bound", w.upper_bound, n, w.upper_bound <= n));
    }
    let linz = linz_theta(n, k, l)?;
    let two_k = Rational::from_integer((1u64 << k).into());
    records.push(CheckRecord::new(
        "theta_at_least_2^k",
        fmt_rational(&linz.theta),
        fmt_rational(&two_k),
        linz.theta >= two_k,
    ));
    let excess = &linz.theta - Rational::from_integer(1.into());
    records.push(CheckRecord::new(
        "theta_minus_one_at_least_prop32",
        fmt_rational(&excess),
        fmt_rational(&linz.prop32_value),
        excess >= linz.prop32_value,
    ));
    let mono = claim33_monotone(n, k, l)?;
    records.push(CheckRecord::new("claim33_monotone", mono, true, mono));
    Ok(check_report(
        "johnson",
        json!({
            "k": k,
            "n": n,
            "l": l,
            "mode": if full { "full" } else { "theta_only" },
            "binding_u": linz.binding_u,
        }),
        records,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaFamily {
    Heawood,
    IncidenceQ,
    PolarityCoreQ,
}

impl std::str::FromStr for GammaFamily {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heawood" => Ok(Self::Heawood),
            "incidence_q" | "incidence" => Ok(Self::IncidenceQ),
            "polarity_core_q" | "polarity_core" => Ok(Self::PolarityCoreQ),
            _ => Err(HarnessError::Parameter(format!("unknown gamma family {s:?}"))),
        }
    }
}

/// The expander chain on `G = complement(Γ)`.
pub fn verify_expander(gamma: GammaFamily, q: u64) -> Result<Report<CheckRecord>, HarnessError> {
    let q = if gamma == GammaFamily::Heawood { 2 } else { q };
    let params = json!({ "gamma": gamma, "q": q });
    if gamma == GammaFamily::PolarityCoreQ {
        let core = polarity_core(q)?;
        let sp = spectral_params(&core)?;
        let sqrt_q = (q as f64).sqrt();
        let records = vec![
            CheckRecord::new("vertices", core.n(), q * q, core.n() as u64 == q * q),
            CheckRecord::new("min_degree", core.min_degree(), "reported", true),
            CheckRecord::new("max_degree", core.max_degree(), "reported", true),
            CheckRecord::new("lambda_at_most_sqrt_q", sp.lambda, sqrt_q + 1e-8, sp.lambda <= sqrt_q + 1e-8),
        ];
        return Ok(check_report("expander", params, records));
    }

    let gamma_graph = incidence(q)?;
    let g = gamma_graph.complement();
    let bound = evaluate_expander_bound(&g, &gamma_graph)?;
    if let Some(c) = bound.violations.first() {
        return Err(crate::witnesses::WitnessError::Hypothesis(c.clone()).into());
    }
    let unweighted = spectra::inertia_float(&g.adjacency::<f64>())?.n_nonneg;
    let scaled = sinkhorn(&g.adjacency::<f64>(), &g, &SinkhornOptions::default())?;
    let diag = proof_diagnostics(&scaled.b, &gamma_graph)?;
    let alpha = alpha_exact(&g)?;
    let records = vec![
        CheckRecord::new("degree", bound.d, q + 1, bound.d as u64 == q + 1),
        CheckRecord::new("lambda", bound.lambda, (q as f64).sqrt(), (bound.lambda - (q as f64).sqrt()).abs() <= 1e-8),
        CheckRecord::new("expander_bound_below_unweighted_inertia", bound.bound, unweighted, bound.bound <= unweighted as f64),
        CheckRecord::new("alpha_at_most_inertia", alpha, unweighted, alpha <= unweighted),
        CheckRecord::new("sinkhorn_residual", scaled.residual, 1e-10, scaled.residual <= 1e-10),
        CheckRecord::new("frobenius_zero", diag.frobenius_zero, 0.0, diag.frobenius_ok),
        CheckRecord::new("lambda1_lower", diag.lambda1, diag.lambda1_lower, diag.lambda1_ok),
        CheckRecord::new("vinf_upper", diag.vinf, diag.vinf_upper, diag.vinf_ok),
        CheckRecord::new("tail_identity", diag.tail_sum, diag.head_term, diag.identity_ok),
        CheckRecord::new("tail_upper", diag.tail_sum, diag.tail_upper, diag.tail_ok),
        CheckRecord::new("head_lower", diag.head_term, diag.head_lower, diag.head_ok),
        CheckRecord::new("scaled_inertia_at_least_bound", diag.k, diag.bound, diag.final_inequality_ok),
    ];
    Ok(check_report("expander", params, records))
}

/// Eigenvalue multiplicities of a strongly regular graph and the identity
/// `(1 + f)(1 + g) = n + fg`.
pub fn verify_srg(q: u64) -> Result<Report<CheckRecord>, HarnessError> {
    let g = paley(q)?;
    let n = g.n();
    let spectrum = spectra::eigenvalues(&g.adjacency::<f64>())?;
    let ev = &spectrum.eigenvalues;
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &x in &ev[1..] {
        match groups.last_mut() {
            Some((v, m)) if (*v - x).abs() <= 1e-6 => *m += 1,
            _ => groups.push((x, 1)),
        }
    }
    let [(r, f), (s, gm)] = groups[..] else {
        return Err(HarnessError::Integrity(format!(
            "expected two non-principal eigenvalues, found {}",
            groups.len()
        )));
    };
    if !(r > 0.0 && s < 0.0) {
        return Err(HarnessError::Integrity(format!("eigenvalues r = {r}, s = {s} do not straddle zero")));
    }
    let inertia_g = spectra::inertia_float(&g.adjacency::<f64>())?.n_nonneg;
    let co = g.complement();
    let inertia_co = spectra::inertia_float(&co.adjacency::<f64>())?.n_nonneg;
    // complement spectrum: n − 1 − d, −1 − s (mult. g), −1 − r (mult. f)
    let f_co = if -1.0 - s > 0.0 { gm } else { 0 } + if -1.0 - r > 0.0 { f } else { 0 };
    let product = inertia_g * inertia_co;
    let records = vec![
        CheckRecord::new("f", f, (q - 1) / 2, f as u64 == (q - 1) / 2),
        CheckRecord::new("g", gm, (q - 1) / 2, gm as u64 == (q - 1) / 2),
        CheckRecord::new("inertia_g_is_1_plus_f", inertia_g, 1 + f, inertia_g == 1 + f),
        CheckRecord::new("inertia_complement_is_1_plus_f_complement", inertia_co, 1 + f_co, inertia_co == 1 + f_co),
        CheckRecord::new("product_is_n_plus_fg", product, n + f * gm, product == n + f * gm),
        CheckRecord::new("product_at_least_n", product, n, product >= n),
    ];
    Ok(check_report("srg", json!({ "q": q, "n": n, "r": r, "s": s }), records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ng_small_sweep() {
        let r = verify_ng(&NgOptions {
            max_n: 5,
            jobs: 2,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(r.records.len(), 1 + 1 + 2 + 6 + 21);
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn ng_named_records() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let r = ng_record(&c5).unwrap();
        assert_eq!((r.inertia_g, r.inertia_cog, r.product, r.sum), (3, 3, 9, 6));
        assert!(r.sum_tight);
        let k4 = Graph::from_fn(4, |_, _| true).unwrap();
        let r = ng_record(&k4).unwrap();
        assert_eq!((r.inertia_g, r.inertia_cog, r.product), (1, 4, 4));
        assert!(r.product_tight);
    }

    #[test]
    fn johnson_k2() {
        let r = verify_johnson(2).unwrap();
        assert!(r.passed());
        assert_eq!(r.records[0].value, "8");
        assert_eq!(r.records[1].value, "8");
    }

    #[test]
    fn johnson_k4_theta_only() {
        let r = verify_johnson(4).unwrap();
        assert!(r.passed());
        assert_eq!(r.params["mode"], "theta_only");
    }

    #[test]
    fn heawood_chain() {
        let r = verify_expander(GammaFamily::Heawood, 0).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn polarity_core_lambda() {
        let r = verify_expander(GammaFamily::PolarityCoreQ, 5).unwrap();
        assert!(r.passed(), "{:?}", r.records);
    }

    #[test]
    fn srg_identity() {
        for (q, product) in [(5, 9), (13, 49), (17, 81)] {
            let r = verify_srg(q).unwrap();
            assert!(r.passed(), "{:?}", r.records);
            assert_eq!(r.records[4].value, product.to_string());
        }
    }
}
