//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use orthocolor::chroma::{
    chromatic_index, chromatic_number, coloring_to_orthogonal, tait_3_edge_coloring, ChromaOutcome,
    LowerBoundWitness, Target,
};
use orthocolor::dataset::{bases_graph, load_dataset, shared_vector_edge_coloring};
use orthocolor::graph::{
    degree_profile, has_perfect_matching, is_bipartite, is_hamiltonian, join, line_graph, validate_hamiltonian_cycle,
    Graph, HamiltonOutcome,
};
use orthocolor::ortho::{
    direct_sum_coloring, enumerate_orthobases, ks_decide, pi_bounds, verify_ortho_coloring, GapPair, OrthoColoring,
    VerifyMode,
};
use orthocolor::search::{
    gradient, loss, search_ortho_coloring, search_ortho_edge_coloring, SolveConfig, SolveStatus, SphereAssignment,
};
use orthocolor_cli::scan::{scan_graph, ScanStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 20_000_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn exact_verifies(g: &Graph, f: &OrthoColoring) -> bool {
    verify_ortho_coloring(g, f, VerifyMode::Exact).map(|r| r.passed).unwrap_or(false)
}

fn random_graph(rng: &mut ChaCha8Rng, lo: usize, hi: usize, p: f64) -> Graph {
    let n = rng.gen_range(lo..=hi);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let kept: Vec<_> = pairs.into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, kept).unwrap()
}

fn generalized_petersen(n: usize, k: usize) -> Graph {
    let pairs = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]);
    Graph::new(2 * n, pairs).unwrap()
}

fn mobius_ladder(k: usize) -> Graph {
    let n = 2 * k;
    let pairs = (0..n).map(|i| (i, (i + 1) % n)).chain((0..k).map(|i| (i, i + k)));
    Graph::new(n, pairs).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let report = orthocolor_cli::dataset_report(&load_dataset().map_err(|e| e.to_string())?, BUDGET);
    ensure((report.vertices, report.edges, report.max_degree) == (9, 18, 4), || {
        format!("graph is {}/{} with max degree {}", report.vertices, report.edges, report.max_degree)
    })?;
    ensure(report.chromatic_index == Some(5), || format!("chromatic index {:?}", report.chromatic_index))?;
    ensure(report.pi_prime_certified == Some(4), || format!("certified {:?}", report.pi_prime_certified))?;

    // independent re-check of the two halves of the certificate
    let ds = load_dataset().unwrap();
    let (g, f) = shared_vector_edge_coloring(&ds);
    ensure(exact_verifies(&g, &f) && f.dim == 4, || "vector edge coloring fails".into())?;
    let chi = chromatic_index(&g, BUDGET).map_err(|e| e.to_string())?;
    let r = chi.exact().ok_or("chromatic index inconclusive")?;
    ensure(r.certificate.validate(&g).is_ok() && r.certificate.k == 5, || "5-edge-coloring invalid".into())?;
    ensure(
        matches!(r.lower_bound, LowerBoundWitness::OddOrderRegular { degree: 4, order: 9 } | LowerBoundWitness::Exhaustion { .. }),
        || format!("unexpected lower-bound witness {:?}", r.lower_bound),
    )?;
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("chromatic index 5, orthogonal index 4 on 9 vertices / 18 edges in {t:.2?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let ds = load_dataset().map_err(|e| e.to_string())?;
    let e = enumerate_orthobases(ds.vectors());
    ensure(e.subsets_covered == 3060, || format!("covered {} subsets", e.subsets_covered))?;
    let mut listed: Vec<Vec<usize>> = ds
        .bases()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    listed.sort();
    let mut found = e.bases.clone();
    found.sort();
    ensure(found == listed, || format!("found {} bases, not the 9 listed", found.len()))?;
    let d = ks_decide(ds.vectors());
    ensure(d.is_ks() && d.witness.is_none(), || "a valid marking exists".into())?;
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("9 bases among C(18,4) = 3060 subsets; no marking after {} nodes; {t:.2?}", d.nodes))
}

fn criterion_3() -> Check {
    let ds = load_dataset().map_err(|e| e.to_string())?;
    let (g, _) = bases_graph(&ds);
    let p = degree_profile(&g);
    ensure(p.regular && p.max_degree == 4, || format!("degrees {:?}", p.degrees))?;
    ensure((g.order(), g.size()) == (9, 18), || format!("{} vertices, {} edges", g.order(), g.size()))?;
    ensure(has_perfect_matching(&g).is_none(), || "found a perfect matching".into())?;
    Ok("4-regular, 9 vertices, 18 edges, no perfect matching".into())
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bipartite: Vec<Graph> = vec![
        Graph::path(2),
        Graph::path(7),
        Graph::cycle(4),
        Graph::cycle(10),
        Graph::star(5),
        Graph::complete_bipartite(3, 3),
        Graph::complete_bipartite(2, 7),
        Graph::prism(4),
        Graph::prism(6),
    ];
    while bipartite.len() < 30 {
        let a = rng.gen_range(1..6);
        let b = rng.gen_range(1..6);
        let pairs: Vec<(usize, usize)> =
            (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::new(a + b, pairs).unwrap();
        if g.size() > 0 {
            bipartite.push(g);
        }
    }
    for (i, g) in bipartite.iter().enumerate() {
        ensure(is_bipartite(g).is_some(), || format!("graph {i} is not bipartite"))?;
        let b = pi_bounds(g, BUDGET);
        ensure((b.lower, b.upper) == (2, 2), || format!("bipartite graph {i}: bounds ({}, {})", b.lower, b.upper))?;
        ensure(exact_verifies(g, &b.lift), || format!("bipartite graph {i}: lift fails"))?;
    }

    let mut odd: Vec<Graph> = vec![
        Graph::cycle(3),
        Graph::cycle(5),
        Graph::cycle(9),
        Graph::petersen(),
        Graph::complete(5),
        Graph::prism(3),
        Graph::prism(5),
        mobius_ladder(4),
    ];
    while odd.len() < 20 {
        let g = random_graph(&mut rng, 4, 9, 0.5);
        if is_bipartite(&g).is_none() {
            odd.push(g);
        }
    }
    for (i, g) in odd.iter().enumerate() {
        let b = pi_bounds(g, BUDGET);
        ensure(b.lower >= 3 && b.lower <= b.upper, || format!("odd graph {i}: bounds ({}, {})", b.lower, b.upper))?;
        ensure(exact_verifies(g, &b.lift), || format!("odd graph {i}: lift fails"))?;
    }
    Ok(format!("{} bipartite graphs at (2,2), {} non-bipartite with lower bound >= 3, all lifts exact", bipartite.len(), odd.len()))
}

fn exact_chi(g: &Graph) -> Result<(usize, OrthoColoring), String> {
    let out = chromatic_number(g, None, None, BUDGET).map_err(|e| e.to_string())?;
    let r = out.exact().ok_or("chromatic number inconclusive")?;
    let lift = coloring_to_orthogonal(g, &r.certificate).map_err(|e| e.to_string())?;
    Ok((r.value, lift))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pairs = 25;
    for i in 0..pairs {
        let a = random_graph(&mut rng, 1, 7, 0.5);
        let b = random_graph(&mut rng, 1, 7, 0.5);
        let (ca, fa) = exact_chi(&a)?;
        let (cb, fb) = exact_chi(&b)?;
        let j = join(&a, &b);
        let (cj, _) = exact_chi(&j)?;
        ensure(cj == ca + cb, || format!("pair {i}: {cj} != {ca} + {cb}"))?;
        let (sum_graph, sum) = direct_sum_coloring(&a, &fa, &b, &fb).map_err(|e| e.to_string())?;
        ensure(sum_graph == j && sum.dim == ca + cb, || format!("pair {i}: direct sum has wrong shape"))?;
        ensure(exact_verifies(&j, &sum), || format!("pair {i}: direct sum fails"))?;
    }

    // The vector edge coloring of the dataset graph is an orthogonal
    // 4-coloring of its line graph, whose chromatic number is 5.
    let ds = load_dataset().unwrap();
    let (g, f) = shared_vector_edge_coloring(&ds);
    let lg = line_graph(&g).0;
    let seed = GapPair { pi: 4, chi: 5 };
    let vf = OrthoColoring::exact(Target::Vertex, 4, f.exact_vectors().unwrap().to_vec());
    let (jg, jf) = direct_sum_coloring(&lg, &vf, &lg, &vf).map_err(|e| e.to_string())?;
    ensure(exact_verifies(&jg, &jf) && jf.dim == 8, || "self-join direct sum fails".into())?;
    let (chi_j, _) = exact_chi(&jg)?;
    ensure(chi_j == 10, || format!("chromatic number of the self-join is {chi_j}"))?;
    ensure(seed.iterate_self_join(1) == GapPair { pi: jf.dim, chi: chi_j }, || "k = 1 does not match".into())?;
    for k in 0..=10u32 {
        let p = seed.iterate_self_join(k);
        ensure(p.gap() == (1isize << k) * seed.gap(), || format!("gap {} at k = {k}", p.gap()))?;
        ensure((p.pi, p.chi) == (4 << k, 5 << k), || format!("k = {k}: {:?}", p))?;
    }
    Ok(format!("{pairs} random joins additive with verified direct sums; self-join of (4,5) realized as (8,10); gap 2^k for k <= 10"))
}

fn finite_difference_error(rng: &mut ChaCha8Rng) -> f64 {
    let g = random_graph(rng, 3, 8, 0.6);
    let g = if g.size() == 0 { Graph::cycle(g.order()) } else { g };
    let d = rng.gen_range(2..5);
    let a = SphereAssignment::random(g.order(), d, rng);
    let analytic = gradient(&a, &g).unwrap();
    let rows = a.rows();
    let h = 1e-6;
    let mut err = 0.0f64;
    let mut norm = 0.0f64;
    for v in 0..rows.len() {
        for k in 0..d {
            let at = |delta: f64| {
                let mut r = rows.clone();
                r[v][k] += delta;
                loss(&SphereAssignment::from_rows(d, &r).unwrap(), &g).unwrap()
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            let an = analytic[v * d + k];
            err += (fd - an).powi(2);
            norm += an.powi(2);
        }
    }
    err.sqrt() / norm.sqrt().max(1e-12)
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let worst = (0..20).map(|_| finite_difference_error(&mut rng)).fold(0.0, f64::max);
    ensure(worst <= 1e-6, || format!("gradient relative error {worst:e}"))?;

    let c4 = search_ortho_coloring(&Graph::cycle(4), &SolveConfig::new(2)).map_err(|e| e.to_string())?;
    ensure(c4.status == SolveStatus::Success && c4.residual < 1e-9, || format!("C4 residual {:e}", c4.residual))?;
    ensure(c4.rounding.certified, || "C4 not certified".into())?;
    ensure(exact_verifies(&Graph::cycle(4), c4.certificate.as_ref().unwrap()), || "C4 certificate fails".into())?;

    let mut cfg = SolveConfig::new(3);
    cfg.restarts = 50;
    let star = search_ortho_edge_coloring(&Graph::star(4), &cfg).map_err(|e| e.to_string())?;
    ensure(star.status == SolveStatus::Exhausted && !star.rounding.certified, || "K1,4 succeeded".into())?;
    let least = star.per_restart_residuals.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(least >= 1.0 / 3.0 - 1e-9, || format!("K1,4 residual {least} below 1/3"))?;

    let mut cfg = SolveConfig::new(3);
    cfg.restarts = 16;
    cfg.seed = 99;
    let g = Graph::petersen();
    let a = search_ortho_edge_coloring(&g, &cfg).unwrap();
    let b = search_ortho_edge_coloring(&g, &cfg).unwrap();
    ensure(a == b, || "re-run differs".into())?;
    Ok(format!(
        "gradient error <= {worst:.1e} over 20 instances; C4 certified; K1,4 residual >= {least:.6}; reruns identical"
    ))
}

const PETERSEN_RESIDUAL: f64 = 0.2331971303228156;

fn criterion_7() -> Check {
    let start = Instant::now();
    let g = Graph::petersen();
    ensure(g.is_cubic(), || "not cubic".into())?;
    let chi = chromatic_index(&g, BUDGET).map_err(|e| e.to_string())?;
    let r = chi.exact().ok_or("chromatic index inconclusive")?;
    ensure(r.value == 4, || format!("chromatic index {}", r.value))?;
    ensure(
        matches!(is_hamiltonian(&g, u64::MAX).unwrap(), HamiltonOutcome::NoCycle { .. }),
        || "Hamiltonicity not refuted".into(),
    )?;

    let mut cfg = SolveConfig::new(3);
    cfg.restarts = 200;
    let rec = scan_graph(1, &g, BUDGET, &cfg);
    ensure(rec.status == ScanStatus::Candidate, || format!("pipeline status {:?}: {:?}", rec.status, rec.reason))?;
    ensure(rec.class == Some(2) && rec.chromatic_index == Some(4), || "not classified Class 2".into())?;
    ensure(rec.biconnected == Some(true) && rec.planar == Some(false), || "structure checks failed".into())?;
    let search = rec.search.ok_or("no search report")?;
    ensure(search.status == SolveStatus::Exhausted, || "search claims success".into())?;
    ensure(search.rounding.attempted && !search.rounding.certified, || "rounding certified".into())?;
    ensure((search.residual - PETERSEN_RESIDUAL).abs() < 1e-6, || {
        format!("residual {} drifted from regression value {PETERSEN_RESIDUAL}", search.residual)
    })?;
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "Class 2, non-Hamiltonian, non-planar, biconnected; best d=3 residual {:.10} (restart {} of {}), certification failed with {} violating pairs; {t:.2?}",
        search.residual, search.best_restart, search.restarts, search.rounding.failing_pairs
    ))
}

fn criterion_8() -> Check {
    let graphs = [
        ("K4", Graph::complete(4)),
        ("prism 3", Graph::prism(3)),
        ("cube", Graph::prism(4)),
        ("prism 5", Graph::prism(5)),
        ("prism 6", Graph::prism(6)),
        ("K3,3", Graph::complete_bipartite(3, 3)),
        ("Mobius ladder 8", mobius_ladder(4)),
        ("Mobius-Kantor", generalized_petersen(8, 3)),
        ("dodecahedron", generalized_petersen(10, 2)),
    ];
    for (name, g) in &graphs {
        ensure(g.is_cubic(), || format!("{name} is not cubic"))?;
        let out = is_hamiltonian(g, BUDGET).map_err(|e| e.to_string())?;
        let cycle = out.cycle().ok_or_else(|| format!("{name}: no Hamiltonian cycle found"))?;
        ensure(validate_hamiltonian_cycle(g, cycle), || format!("{name}: invalid cycle"))?;
        let c = tait_3_edge_coloring(g, cycle).map_err(|e| format!("{name}: {e}"))?;
        ensure(c.k == 3 && c.validate(g).is_ok(), || format!("{name}: improper edge coloring"))?;
        let lift = coloring_to_orthogonal(g, &c).map_err(|e| e.to_string())?;
        ensure(lift.dim == 3 && exact_verifies(g, &lift), || format!("{name}: lift fails"))?;
        ensure(degree_profile(g).max_degree == 3, || format!("{name}: max degree"))?;
        let chi = chromatic_index(g, BUDGET).map_err(|e| e.to_string())?;
        ensure(matches!(chi, ChromaOutcome::Exact(ref r) if r.value == 3), || format!("{name}: chromatic index"))?;
    }
    Ok(format!("{} cubic Hamiltonian graphs 3-edge-colored with exact lifts", graphs.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("dataset: chromatic index 5, orthogonal index 4", criterion_1),
        ("Kochen-Specker decision", criterion_2),
        ("bases graph structure", criterion_3),
        ("bipartite and odd-cycle bounds", criterion_4),
        ("join additivity and gap doubling", criterion_5),
        ("numeric solver", criterion_6),
        ("Petersen pipeline", criterion_7),
        ("Hamiltonian cubic graphs", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
