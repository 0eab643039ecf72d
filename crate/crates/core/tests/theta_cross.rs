use inertia_core::constructions::{johnson, standard, StandardGraph};
use inertia_core::harness::alpha_exact;
use inertia_core::theta::{linz_theta, theta_bracket, DEFAULT_ITERS};
use num_traits::ToPrimitive;

#[test]
fn linz_inside_numeric_bracket() {
    for n in 9..=13 {
        for l in 0..2 {
            let g = johnson(n, 2, &[l]).unwrap();
            let exact = linz_theta(n, 2, l).unwrap().theta.to_f64().unwrap();
            let b = theta_bracket(&g, DEFAULT_ITERS, 1e-3).unwrap();
            assert!(b.contains(exact, 1e-6), "n = {n}, l = {l}: {exact} not in [{}, {}]", b.lower, b.upper);
        }
    }
}

#[test]
fn sandwich() {
    let graphs = [
        standard(StandardGraph::Cycle, 5).unwrap(),
        standard(StandardGraph::Cycle, 7).unwrap(),
        standard(StandardGraph::Petersen, 10).unwrap(),
        standard(StandardGraph::Heawood, 14).unwrap(),
        johnson(7, 3, &[2]).unwrap(),
    ];
    for g in &graphs {
        let b = theta_bracket(g, DEFAULT_ITERS, 1e-4).unwrap();
        let co = theta_bracket(&g.complement(), DEFAULT_ITERS, 1e-4).unwrap();
        assert!(alpha_exact(g).unwrap() as f64 <= b.upper + 1e-9);
        assert!(b.lower <= b.upper);
        // ϑ(G)·ϑ(Ḡ) ≥ n
        assert!(b.upper * co.upper >= g.n() as f64 - 1e-6);
    }
}

#[test]
fn vertex_transitive_product() {
    for g in [standard(StandardGraph::Cycle, 7).unwrap(), standard(StandardGraph::Petersen, 10).unwrap()] {
        let a = theta_bracket(&g, DEFAULT_ITERS, 1e-5).unwrap();
        let b = theta_bracket(&g.complement(), DEFAULT_ITERS, 1e-5).unwrap();
        let n = g.n() as f64;
        assert!(a.lower * b.lower <= n + 1e-6 && n - 1e-2 <= a.upper * b.upper);
    }
}

#[test]
fn c7_closed_form() {
    let g = standard(StandardGraph::Cycle, 7).unwrap();
    let c = (std::f64::consts::PI / 7.0).cos();
    let expected = 7.0 * c / (1.0 + c);
    assert!(theta_bracket(&g, DEFAULT_ITERS, 1e-6).unwrap().contains(expected, 1e-6));
}
