use orthocolor::graph::Graph;
use orthocolor::search::{
    best_rational, gradient, loss, residual, search_ortho_coloring, search_ortho_edge_coloring, SolveConfig,
    SolveStatus, SphereAssignment,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Central differences of the loss with each row pushed back onto the
/// sphere after perturbation; on the sphere this is the Riemannian gradient.
fn finite_difference_gradient(a: &SphereAssignment, g: &Graph, h: f64) -> Vec<f64> {
    let rows = a.rows();
    let mut out = Vec::new();
    for v in 0..rows.len() {
        for k in 0..a.dim() {
            let shifted = |delta: f64| {
                let mut r = rows.clone();
                r[v][k] += delta;
                loss(&SphereAssignment::from_rows(a.dim(), &r).unwrap(), g).unwrap()
            };
            out.push((shifted(h) - shifted(-h)) / (2.0 * h));
        }
    }
    out
}

fn random_graph_with_edges(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.gen_range(3..9);
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
        if !pairs.is_empty() {
            return Graph::new(n, pairs).unwrap();
        }
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for instance in 0..25 {
        let g = random_graph_with_edges(&mut rng);
        let d = rng.gen_range(2..5);
        let a = SphereAssignment::random(g.order(), d, &mut rng);
        let analytic = gradient(&a, &g).unwrap();
        let numeric = finite_difference_gradient(&a, &g, 1e-6);
        let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(x, y)| x - y).collect();
        let rel = norm(&diff) / norm(&analytic).max(1e-12);
        assert!(rel <= 1e-6, "instance {instance}: relative error {rel:e}");
    }
}

#[test]
fn same_seed_same_report_regardless_of_threads() {
    let g = Graph::petersen();
    let mut cfg = SolveConfig::new(3);
    cfg.restarts = 12;
    cfg.max_iterations = 2_000;
    cfg.seed = 42;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search_ortho_edge_coloring(&g, &cfg).unwrap())
    };
    let first = run(1);
    assert_eq!(first, run(1));
    assert_eq!(first, run(3));
    cfg.seed = 43;
    assert_ne!(first.per_restart_losses, search_ortho_edge_coloring(&g, &cfg).unwrap().per_restart_losses);
}

#[test]
fn star_edges_hit_the_frame_potential_bound() {
    // The four edges of K_{1,4} pairwise meet, so their vectors form four
    // unit vectors in R^3. Their frame potential sum_{i,j} <x_i,x_j>^2 is at
    // least 16/3, which leaves at least 2/3 for the six off-diagonal pairs
    // and a largest |<x_i,x_j>| of at least 1/3.
    let mut cfg = SolveConfig::new(3);
    cfg.restarts = 30;
    let r = search_ortho_edge_coloring(&Graph::star(4), &cfg).unwrap();
    assert_eq!(r.status, SolveStatus::Exhausted);
    assert!(!r.rounding.certified);
    for (l, res) in r.per_restart_losses.iter().zip(&r.per_restart_residuals) {
        assert!(*l >= 2.0 / 3.0 - 1e-9, "loss {l}");
        assert!(*res >= 1.0 / 3.0 - 1e-9, "residual {res}");
    }
    assert!((r.residual - 1.0 / 3.0).abs() < 1e-6, "best residual {}", r.residual);
}

#[test]
fn five_cycle_in_the_plane() {
    // Best planar arrangement puts consecutive lines 72 degrees apart.
    let mut cfg = SolveConfig::new(2);
    cfg.restarts = 40;
    let r = search_ortho_coloring(&Graph::cycle(5), &cfg).unwrap();
    assert_eq!(r.status, SolveStatus::Exhausted);
    let golden = (5f64.sqrt() - 1.0) / 4.0;
    assert!((r.residual - golden).abs() < 1e-6, "residual {}", r.residual);
}

#[test]
fn four_cycle_in_the_plane_certifies() {
    let r = search_ortho_coloring(&Graph::cycle(4), &SolveConfig::new(2)).unwrap();
    assert_eq!(r.status, SolveStatus::Success);
    assert!(r.residual < 1e-9);
    assert!(r.rounding.certified);
    let cert = r.certificate.unwrap();
    let check = orthocolor::ortho::verify_ortho_coloring(&Graph::cycle(4), &cert, orthocolor::ortho::VerifyMode::Exact);
    assert!(check.unwrap().passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn residual_bounds_loss(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph_with_edges(&mut rng);
        let a = SphereAssignment::random(g.order(), d, &mut rng);
        let l = loss(&a, &g).unwrap();
        let r = residual(&a, &g).unwrap();
        prop_assert!(r * r <= l + 1e-12);
        prop_assert!(l <= g.size() as f64 * r * r + 1e-12);
        prop_assert!(a.max_norm_deviation() < 1e-12);
        let grad = gradient(&a, &g).unwrap();
        for v in 0..a.len() {
            let t: f64 = grad[v * d..(v + 1) * d].iter().zip(a.row(v)).map(|(x, y)| x * y).sum();
            prop_assert!(t.abs() < 1e-10);
        }
    }

    #[test]
    fn best_rational_is_close_and_small(x in -50.0f64..50.0, cap in 1u64..5000) {
        let q = best_rational(x, cap).unwrap();
        prop_assert!(q.denom() <= &num_bigint::BigInt::from(cap));
        let approx = q.numer().to_string().parse::<f64>().unwrap() / q.denom().to_string().parse::<f64>().unwrap();
        prop_assert!((approx - x).abs() <= 1.0 / cap as f64 + 1e-12);
    }
}
