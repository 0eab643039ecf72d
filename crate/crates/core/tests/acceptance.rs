//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p inertia-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use inertia_core::constructions::{incidence, johnson, polarity, standard, StandardGraph};
use inertia_core::harness::{
    alpha_exact, enumerate, enumerate_connected, mu_lower, verify_expander, verify_johnson, verify_ng, verify_srg,
    Family, GammaFamily, NgOptions,
};
use inertia_core::scaling::{scalability_check, sinkhorn, SinkhornOptions};
use inertia_core::spectra::{eigenvalues, inertia_exact, inertia_float};
use inertia_core::theta::{linz_theta, theta_bracket, DEFAULT_ITERS};
use inertia_core::witnesses::{
    evaluate_expander_bound, johnson_witness, proof_diagnostics, witness_search, SearchOptions, Strategy,
};
use inertia_core::{Graph, IntegerSymmetricMatrix, Matrix, Rational};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rational(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn ng_sweep() -> Outcome {
    let start = Instant::now();
    let r = verify_ng(&NgOptions {
        max_n: 8,
        jobs: 0,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let counts: Vec<usize> = (1..=8).map(|n| r.records.iter().filter(|x| x.n == n).count()).collect();
    let expected = vec![1, 1, 2, 6, 21, 112, 853, 11117];
    ensure(
        counts == expected && r.violations.is_empty() && elapsed <= Duration::from_secs(600),
        format!("classes {counts:?}, {} violations, {:.1}s", r.violations.len(), elapsed.as_secs_f64()),
    )
}

fn exact_float_agreement() -> Outcome {
    let mut graphs = 0;
    let mut disagreements = 0;
    for n in 1..=7 {
        for g in enumerate_connected(n).map_err(|e| e.to_string())? {
            let e = inertia_exact(&g.adjacency()).unwrap();
            let f = inertia_float(&g.adjacency::<f64>()).unwrap();
            disagreements += usize::from(e.counts() != f.counts());
            graphs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let g = Graph::from_fn(n, |_, _| rng.random_bool(0.5)).unwrap();
        let mut weights = IntegerSymmetricMatrix::zeros(n);
        for (u, v) in g.edges() {
            let w = rng.random_range(1..=5i64) * if rng.random_bool(0.5) { 1 } else { -1 };
            weights.set(u, v, BigInt::from(w));
        }
        let f = weights.map(|x| x.to_f64().unwrap());
        let e = inertia_exact(&weights).unwrap();
        disagreements += usize::from(e.counts() != inertia_float(&f).unwrap().counts());
    }
    ensure(
        disagreements == 0,
        format!("{graphs} graphs + 500 weighted matrices, {disagreements} disagreements"),
    )
}

fn johnson_separation() -> Outcome {
    let w2 = johnson_witness(9, 2, 1).map_err(|e| e.to_string())?;
    let t2 = linz_theta(9, 2, 1).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let w3 = johnson_witness(28, 3, 1).map_err(|e| e.to_string())?;
    let t_witness3 = start.elapsed();
    let t3 = linz_theta(28, 3, 1).map_err(|e| e.to_string())?;
    let t4 = linz_theta(65, 4, 2).map_err(|e| e.to_string())?;
    let ok = w2.upper_bound == 8
        && t2.theta == rational(8)
        && w3.matrix.dim() == 3276
        && w3.upper_bound <= 28
        && t_witness3 <= Duration::from_secs(300)
        && t3.theta == rational(21)
        && t4.theta >= rational(16);
    ensure(
        ok,
        format!(
            "k=2: witness {} theta {}; k=3: witness {} on {} vertices in {:.1}s, theta {}; k=4: theta {}",
            w2.upper_bound,
            t2.theta,
            w3.upper_bound,
            w3.matrix.dim(),
            t_witness3.as_secs_f64(),
            t3.theta,
            t4.theta
        ),
    )
}

fn linz_cross_validation() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (l, target) in [(1, 8.0), (0, 4.5)] {
        let start = Instant::now();
        let b = theta_bracket(&johnson(9, 2, &[l]).unwrap(), DEFAULT_ITERS, 1e-4).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ok &= b.contains(target, 0.1) && t <= Duration::from_secs(60);
        details.push(format!("l={l}: [{:.6}, {:.6}] in {:.2}s", b.lower, b.upper, t.as_secs_f64()));
    }
    ensure(ok, details.join("; "))
}

fn theta_oracles() -> Outcome {
    let cases = [
        ("C5", standard(StandardGraph::Cycle, 5).unwrap(), 5f64.sqrt(), 0.05),
        ("Petersen", standard(StandardGraph::Petersen, 10).unwrap(), 4.0, 0.05),
        ("K6", standard(StandardGraph::Complete, 6).unwrap(), 1.0, 1e-4),
        ("empty7", standard(StandardGraph::Empty, 7).unwrap(), 7.0, 1e-4),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g, target, tol) in cases {
        let b = theta_bracket(&g, DEFAULT_ITERS, 1e-5).map_err(|e| e.to_string())?;
        let tight = tol < 1e-3;
        let fits = if tight {
            (b.lower - target).abs() <= tol && (b.upper - target).abs() <= tol
        } else {
            b.contains(target, tol)
        };
        ok &= fits;
        details.push(format!("{name} [{:.6}, {:.6}]", b.lower, b.upper));
    }
    ensure(ok, details.join("; "))
}

fn equality_cases() -> Outcome {
    let opts = SearchOptions::default();
    let c5 = witness_search(&standard(StandardGraph::Cycle, 5).unwrap(), &opts).map_err(|e| e.to_string())?;
    let c4 = witness_search(&standard(StandardGraph::Cycle, 4).unwrap(), &opts).map_err(|e| e.to_string())?;
    let (mu4, mu5) = (mu_lower(4).unwrap(), mu_lower(5).unwrap());
    let random = [Strategy::RandomGaussian, Strategy::SignPerturbed];
    let ok = c5.upper_bound == 2
        && c5.strategy == Strategy::Negated
        && c4.upper_bound == 2
        && random.contains(&c4.strategy)
        && c5.upper_bound * c5.upper_bound == mu5
        && c4.upper_bound * c4.upper_bound == mu4
        && mu4 == 4;
    ensure(
        ok,
        format!(
            "C5 {} ({:?}), C4 {} ({:?}), mu4 = {mu4}, mu5 = {mu5}",
            c5.upper_bound, c5.strategy, c4.upper_bound, c4.strategy
        ),
    )
}

fn expander_chain() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (name, q) in [("Heawood", 2), ("incidence(3)", 3), ("incidence(5)", 5)] {
        let gamma = incidence(q).unwrap();
        let g = gamma.complement();
        let bound = evaluate_expander_bound(&g, &gamma).map_err(|e| e.to_string())?;
        let a = sinkhorn(&g.adjacency::<f64>(), &g, &SinkhornOptions::default()).map_err(|e| e.to_string())?.b;
        let d = proof_diagnostics(&a, &gamma).map_err(|e| e.to_string())?;
        let frob_ok = d.frobenius_zero.abs() <= 1e-12 * a.frobenius_norm();
        let this = bound.hypothesis_ok
            && frob_ok
            && d.lambda1 >= d.lambda1_lower
            && d.vinf <= d.vinf_upper
            && d.k as f64 >= d.bound
            && d.all_ok();
        ok &= this;
        details.push(format!(
            "{name}: k = {} >= {:.3}, lambda1 {:.3} >= {:.3}, vinf {:.3} <= {:.3}, frob {:.1e}",
            d.k, d.bound, d.lambda1, d.lambda1_lower, d.vinf, d.vinf_upper, d.frobenius_zero
        ));
    }
    ensure(ok, details.join("; "))
}

fn sinkhorn_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = SinkhornOptions {
        tol: 1e-10,
        max_iter: 100_000,
    };
    let (mut done, mut worst_norm, mut max_sweeps, mut failures) = (0, 0f64, 0, 0);
    while done < 200 {
        let n = rng.random_range(3..=12);
        let g = Graph::from_fn(n, |_, _| rng.random_bool(0.6)).unwrap();
        if !scalability_check(&g).unwrap().scalable {
            continue;
        }
        let mut a = Matrix::zeros(n);
        for (u, v) in g.edges() {
            let w: f64 = rng.random_range(0.1..3.0);
            a.set(u, v, if rng.random_bool(0.5) { w } else { -w });
        }
        match sinkhorn(&a, &g, &opts) {
            Ok(r) => {
                for x in r.b.row_norms() {
                    worst_norm = worst_norm.max((x - 1.0).abs());
                }
                max_sweeps = max_sweeps.max(r.iterations);
                let preserved = inertia_float(&r.b).unwrap().counts() == inertia_float(&a).unwrap().counts();
                failures += usize::from(r.residual > 1e-10 || !preserved);
            }
            Err(_) => failures += 1,
        }
        done += 1;
    }
    let p3 = scalability_check(&standard(StandardGraph::Path, 3).unwrap()).unwrap();
    ensure(
        failures == 0 && worst_norm <= 1e-8 && !p3.scalable && p3.best_value == 4,
        format!(
            "200 graphs, {failures} failures, max sweeps {max_sweeps}, worst row-norm error {worst_norm:.1e}; P3 |S|+|T| = {}",
            p3.best_value
        ),
    )
}

fn inertia_bound() -> Outcome {
    let mut graphs = 0;
    let mut violations = 0;
    for n in 1..=7 {
        for g in enumerate(n, Family::All).map_err(|e| e.to_string())? {
            let k = inertia_exact(&g.adjacency()).unwrap().n_nonneg;
            violations += usize::from(alpha_exact(&g).unwrap() > k);
            graphs += 1;
        }
    }
    let heawood = incidence(2).unwrap();
    let alpha_co = alpha_exact(&heawood.complement()).unwrap();
    let tf = heawood.is_triangle_free();
    ensure(
        violations == 0 && alpha_co == 2 && tf,
        format!("{graphs} graphs, {violations} violations; alpha(complement(incidence(2))) = {alpha_co}, triangle-free {tf}"),
    )
}

fn srg_identity() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (q, product) in [(5, 9), (13, 49), (17, 81)] {
        let r = verify_srg(q).map_err(|e| e.to_string())?;
        let p = r.records.iter().find(|c| c.check == "product_is_n_plus_fg").unwrap();
        ok &= r.passed() && p.value == product.to_string();
        details.push(format!("q={q}: {} = {}", p.value, p.bound));
    }
    ensure(ok, details.join("; "))
}

fn polarity_spectra() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for q in [3u64, 5, 7] {
        let pg = polarity(q).unwrap();
        let ev = eigenvalues(&pg.polarity_matrix()).unwrap().eigenvalues;
        let bound = (q as f64).sqrt() + 1e-8;
        let inside = ev[1..].iter().all(|x| x.abs() <= bound);
        let loopless = eigenvalues(&pg.graph.adjacency::<f64>()).unwrap().eigenvalues;
        ok &= inside;
        details.push(format!(
            "q={q}: top {:.6}, rest in [{:.6}, {:.6}] (loopless least {:.4})",
            ev[0],
            ev[ev.len() - 1],
            ev[1],
            loopless[loopless.len() - 1]
        ));
    }
    ensure(ok, details.join("; "))
}

fn determinism() -> Outcome {
    fn twice<T: serde::Serialize>(f: impl Fn() -> T) -> bool {
        serde_json::to_string(&f()).unwrap() == serde_json::to_string(&f()).unwrap()
    }
    let ng = |jobs| {
        verify_ng(&NgOptions {
            max_n: 6,
            jobs,
            ..Default::default()
        })
        .unwrap()
    };
    let checks = [
        ("ng", twice(|| ng(1)) && serde_json::to_string(&ng(1)).unwrap() == serde_json::to_string(&ng(3)).unwrap()),
        ("johnson", twice(|| verify_johnson(2).unwrap()) && twice(|| verify_johnson(4).unwrap())),
        ("expander", twice(|| verify_expander(GammaFamily::IncidenceQ, 3).unwrap())),
        ("srg", twice(|| verify_srg(13).unwrap())),
        (
            "witness_search",
            twice(|| witness_search(&standard(StandardGraph::Petersen, 10).unwrap(), &SearchOptions::default()).unwrap()),
        ),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    ensure(
        failed.is_empty(),
        format!("suites compared: {}; differing: {failed:?}", checks.map(|c| c.0).join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 12] = [
        ng_sweep,
        exact_float_agreement,
        johnson_separation,
        linz_cross_validation,
        theta_oracles,
        equality_cases,
        expander_chain,
        sinkhorn_pipeline,
        inertia_bound,
        srg_identity,
        polarity_spectra,
        determinism,
    ];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("ACCEPTANCE {}: PASS {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("ACCEPTANCE {}: FAIL {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
