//! Command implementations for the `orthocolor` binary.
//!
//! Every command returns an [`Output`] (text plus exit code) instead of
//! printing, so the same code paths back the binary and the tests.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
//! 3 inconclusive (a search budget ran out).

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub mod scan;

use orthocolor::chroma::{chromatic_index, chromatic_number, ChromaOutcome, DEFAULT_NODE_BUDGET};
use orthocolor::dataset::{bases_graph, load_dataset, shared_vector_edge_coloring, KsDataset};
use orthocolor::graph::{degree_profile, from_graph6, has_perfect_matching, join, line_graph, parse_graph6_lines, to_graph6, Graph};
use orthocolor::ortho::{
    enumerate_orthobases, ks_decide, ks_decide_with_bases, parse_vector_file, verify_ortho_coloring, KsOutcome,
    VerifyMode,
};
use orthocolor::search::{search_ortho_coloring, search_ortho_edge_coloring, SolveConfig, SolveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orthocolor", version, about = "Orthogonal vector (edge-)coloring experiments")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the embedded 18-vector Kochen–Specker set and its 9-vertex bases graph.
    Dataset(DatasetArgs),
    /// Exact chromatic number, or chromatic index with --edge, of graph6 records.
    Chroma(ChromaArgs),
    /// Numerical search for an orthogonal d-coloring with rational certification.
    Search(SearchArgs),
    /// Run the cubic Class-2 pipeline over a graph6 stream.
    SnarkScan(ScanArgs),
    /// Join of two graphs, printed as graph6.
    Join { first: PathBuf, second: PathBuf },
    /// Line graph, printed as graph6.
    Linegraph { input: Option<PathBuf> },
    /// Kochen–Specker decision for a vector-set file.
    KsVerify(KsVerifyArgs),
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Vector-set file with a [bases] section to check instead of the embedded set.
    #[arg(long = "override")]
    pub override_file: Option<PathBuf>,
    #[arg(long)]
    pub export_vectors: Option<PathBuf>,
    #[arg(long)]
    pub export_graph: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct ChromaArgs {
    /// graph6 file; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub edge: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Denominator cap for rational rounding; 0 disables rounding.
    #[arg(long, default_value_t = 1_000_000)]
    pub round_denominator: u64,
}

impl SolverArgs {
    pub fn config(&self, d: usize) -> SolveConfig {
        let mut cfg = SolveConfig::new(d);
        cfg.restarts = self.restarts;
        cfg.seed = self.seed;
        cfg.tolerance = self.tol;
        cfg.max_iterations = self.max_iter;
        cfg.max_denominator = (self.round_denominator > 0).then_some(self.round_denominator);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub edge: bool,
    #[arg(short = 'd', long = "dim")]
    pub d: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write per-restart loss and residual as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct KsVerifyArgs {
    pub input: PathBuf,
    /// Check against the file's [bases] section only, not every basis in the set.
    #[arg(long)]
    pub listed_bases: bool,
    /// Exit 1 unless the set is Kochen–Specker.
    #[arg(long)]
    pub expect_ks: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {err:#}\n") }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub config: Value,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(subcommand: &str, inputs: Vec<String>, config: Value) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            inputs,
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }
}

fn path_label(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or("-".to_string(), |p| p.display().to_string())
}

fn read_input(p: &Option<PathBuf>, stdin: &str) -> Result<String> {
    match p {
        Some(path) if path.as_os_str() != "-" => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        _ => Ok(stdin.to_string()),
    }
}

fn read_graphs(p: &Option<PathBuf>, stdin: &str) -> Result<Vec<(usize, Graph)>> {
    let text = read_input(p, stdin)?;
    let records = parse_graph6_lines(&text);
    if records.is_empty() {
        anyhow::bail!("no graph6 records in {}", path_label(p));
    }
    records
        .into_iter()
        .map(|(line, r)| r.map(|g| (line, g)).with_context(|| format!("line {line}")))
        .collect()
}

fn read_one_graph(p: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    let (line, g) = parse_graph6_lines(&text)
        .into_iter()
        .next()
        .with_context(|| format!("no graph6 record in {}", p.display()))?;
    g.with_context(|| format!("{} line {line}", p.display()))
}

/// Parses `args` (including the program name) and runs the command,
/// reading `stdin` where a command takes its input from standard input.
pub fn run_args<I, S>(args: I, stdin: &str) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output::ok(text),
                _ => Output { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            }
        }
    }
}

pub fn run(cli: &Cli, stdin: &str) -> Output {
    let json = cli.json;
    let result = match &cli.command {
        Command::Dataset(a) => cmd_dataset(a, json),
        Command::Chroma(a) => cmd_chroma(a, json, stdin),
        Command::Search(a) => cmd_search(a, json, stdin),
        Command::SnarkScan(a) => scan::cmd_snark_scan(a, json, stdin),
        Command::Join { first, second } => cmd_join(first, second),
        Command::Linegraph { input } => cmd_linegraph(input, stdin),
        Command::KsVerify(a) => cmd_ks_verify(a, json),
    };
    result.unwrap_or_else(Output::usage)
}

fn render(json: bool, manifest: &RunManifest, report: &impl Serialize, text: String) -> String {
    if json {
        let mut v = serde_json::to_value(report).expect("reports serialize");
        if let Value::Object(map) = &mut v {
            map.insert("manifest".into(), serde_json::to_value(manifest).unwrap());
        }
        format!("{v}\n")
    } else {
        text
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct DatasetReport {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub chromatic_index: Option<usize>,
    pub pi_prime_certified: Option<usize>,
    pub ks: Option<bool>,
    pub bases_found: usize,
    pub subsets_covered: u128,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Checks on a validated dataset: graph shape, exact χ', the vector edge
/// coloring, odd order (no perfect matching), and the KS decision.
pub fn dataset_report(ds: &KsDataset, budget: u64) -> DatasetReport {
    let mut checks = Vec::new();
    let (g, _) = bases_graph(ds);
    let profile = degree_profile(&g);
    let d = ds.vectors().dim();
    checks.push(Check {
        name: "regular_bases_graph",
        passed: profile.regular && profile.max_degree == d,
        detail: format!("{} vertices, {} edges, degrees {:?}", g.order(), g.size(), profile.degrees),
    });

    let (cg, coloring) = shared_vector_edge_coloring(ds);
    let verified = verify_ortho_coloring(&cg, &coloring, VerifyMode::Exact).map(|r| r.passed).unwrap_or(false);
    let pi_prime = (verified && profile.max_degree == coloring.dim).then_some(coloring.dim);
    checks.push(Check {
        name: "vector_edge_coloring",
        passed: pi_prime.is_some(),
        detail: format!("exact orthogonal {}-edge-coloring, max degree {}", coloring.dim, profile.max_degree),
    });

    let chi_prime = match chromatic_index(&g, budget) {
        Ok(ChromaOutcome::Exact(r)) => Some(r.value),
        _ => None,
    };
    checks.push(Check {
        name: "chromatic_index",
        passed: chi_prime == Some(profile.max_degree + 1),
        detail: format!("chromatic index {:?}, max degree {}", chi_prime, profile.max_degree),
    });

    let matching = has_perfect_matching(&g);
    checks.push(Check {
        name: "no_perfect_matching",
        passed: matching.is_none() && g.order() % 2 == 1,
        detail: format!("order {}", g.order()),
    });

    let enumeration = enumerate_orthobases(ds.vectors());
    let all_listed = ds.bases().iter().all(|b| {
        let mut s = b.clone();
        s.sort_unstable();
        enumeration.bases.contains(&s)
    });
    checks.push(Check {
        name: "listed_bases_enumerated",
        passed: all_listed,
        detail: format!("{} bases among {} subsets", enumeration.bases.len(), enumeration.subsets_covered),
    });

    let decision = ks_decide_with_bases(ds.vectors().len(), enumeration.bases.clone());
    checks.push(Check {
        name: "kochen_specker",
        passed: decision.is_ks(),
        detail: format!("{:?} after {} search nodes", decision.outcome, decision.nodes),
    });

    let passed = checks.iter().all(|c| c.passed);
    DatasetReport {
        vertices: g.order(),
        edges: g.size(),
        max_degree: profile.max_degree,
        chromatic_index: chi_prime,
        pi_prime_certified: pi_prime,
        ks: Some(decision.is_ks()),
        bases_found: enumeration.bases.len(),
        subsets_covered: enumeration.subsets_covered,
        checks,
        passed,
    }
}

pub fn cmd_dataset(a: &DatasetArgs, json: bool) -> Result<Output> {
    let manifest = RunManifest::new(
        "dataset",
        vec![path_label(&a.override_file)],
        json!({"budget": a.budget}),
    );
    let ds = match &a.override_file {
        None => load_dataset().map_err(|e| (format!("load: {e}"), EXIT_CHECK_FAILED)),
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = parse_vector_file(&text)?;
            let bases = file.bases.context("override file needs a [bases] section")?;
            KsDataset::from_bases(file.vectors, bases).map_err(|e| (format!("validate: {e}"), EXIT_CHECK_FAILED))
        }
    };
    let ds = match ds {
        Ok(ds) => ds,
        Err((msg, code)) => {
            let report = json!({"passed": false, "failed_step": msg});
            let text = format!("FAIL {msg}\n");
            return Ok(Output { code, stdout: render(json, &manifest, &report, text), stderr: String::new() });
        }
    };
    if let Some(p) = &a.export_vectors {
        fs::write(p, ds.to_vector_file()).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &a.export_graph {
        fs::write(p, format!("{}\n", to_graph6(&bases_graph(&ds).0))).with_context(|| format!("writing {}", p.display()))?;
    }
    let report = dataset_report(&ds, a.budget);
    let mut text = String::new();
    for c in &report.checks {
        text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    text.push_str(&format!(
        "chromatic index {:?}, orthogonal index {:?}, Kochen-Specker {:?}\n",
        report.chromatic_index, report.pi_prime_certified, report.ks
    ));
    let code = if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Output { code, stdout: render(json, &manifest, &report, text), stderr: String::new() })
}

pub fn cmd_chroma(a: &ChromaArgs, json: bool, stdin: &str) -> Result<Output> {
    let graphs = read_graphs(&a.input, stdin)?;
    let manifest = RunManifest::new(
        "chroma",
        vec![path_label(&a.input)],
        json!({"edge": a.edge, "budget": a.budget}),
    );
    let mut out = String::new();
    let mut code = EXIT_OK;
    for (line, g) in graphs {
        let outcome = if a.edge {
            chromatic_index(&g, a.budget)?
        } else {
            chromatic_number(&g, None, None, a.budget)?
        };
        let name = if a.edge { "chromatic_index" } else { "chromatic_number" };
        let report = match &outcome {
            ChromaOutcome::Exact(r) => json!({
                "line": line, "status": "exact", name: r.value,
                "certificate": r.certificate, "lower_bound": r.lower_bound, "nodes": r.nodes,
            }),
            ChromaOutcome::Inconclusive { lower, upper, best, nodes } => {
                code = EXIT_INCONCLUSIVE;
                json!({
                    "line": line, "status": "inconclusive", "lower": lower, "upper": upper,
                    "certificate": best, "nodes": nodes,
                })
            }
        };
        let text = match &outcome {
            ChromaOutcome::Exact(r) => format!("line {line}: {name} = {}\n", r.value),
            ChromaOutcome::Inconclusive { lower, upper, .. } => {
                format!("line {line}: {name} in [{lower}, {upper}] (budget exhausted)\n")
            }
        };
        out.push_str(&render(json, &manifest, &report, text));
    }
    Ok(Output { code, stdout: out, stderr: String::new() })
}

pub fn search_text(line: usize, r: &SolveReport) -> String {
    let cert = if r.rounding.certified {
        format!("certified with denominators <= {}", r.rounding.denominator_used.unwrap())
    } else if r.rounding.attempted {
        "rational certification failed".to_string()
    } else {
        "rounding skipped".to_string()
    };
    format!(
        "line {line}: d={} {:?} residual {:.3e} over {} restarts (best #{}); {cert}\n",
        r.d, r.status, r.residual, r.restarts, r.best_restart
    )
}

pub fn cmd_search(a: &SearchArgs, json: bool, stdin: &str) -> Result<Output> {
    let graphs = read_graphs(&a.input, stdin)?;
    let cfg = a.solver.config(a.d);
    let manifest = RunManifest::new("search", vec![path_label(&a.input)], json!({"edge": a.edge, "solver": cfg}));
    let mut out = String::new();
    let mut csv = String::new();
    for (line, g) in graphs {
        let report = if a.edge {
            search_ortho_edge_coloring(&g, &cfg)?
        } else {
            search_ortho_coloring(&g, &cfg)?
        };
        csv.push_str(&report.restart_csv());
        let mut v = serde_json::to_value(&report)?;
        v["line"] = json!(line);
        out.push_str(&render(json, &manifest, &v, search_text(line, &report)));
    }
    if let Some(p) = &a.csv {
        fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(Output::ok(out))
}

pub fn cmd_join(first: &PathBuf, second: &PathBuf) -> Result<Output> {
    let g1 = read_one_graph(first)?;
    let g2 = read_one_graph(second)?;
    Ok(Output::ok(format!("{}\n", to_graph6(&join(&g1, &g2)))))
}

pub fn cmd_linegraph(input: &Option<PathBuf>, stdin: &str) -> Result<Output> {
    let mut out = String::new();
    for (_, g) in read_graphs(input, stdin)? {
        out.push_str(&to_graph6(&line_graph(&g).0));
        out.push('\n');
    }
    Ok(Output::ok(out))
}

pub fn cmd_ks_verify(a: &KsVerifyArgs, json: bool) -> Result<Output> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let file = parse_vector_file(&text)?;
    let manifest = RunManifest::new(
        "ks-verify",
        vec![a.input.display().to_string()],
        json!({"listed_bases": a.listed_bases}),
    );
    let (decision, covered) = if a.listed_bases {
        let bases = file.bases.clone().context("--listed-bases needs a [bases] section")?;
        (ks_decide_with_bases(file.vectors.len(), bases), None)
    } else {
        let e = enumerate_orthobases(&file.vectors);
        (ks_decide(&file.vectors), Some(e.subsets_covered))
    };
    let mut text = match decision.outcome {
        KsOutcome::Ks => format!(
            "Kochen-Specker: no valid marking over {} bases ({} search nodes)\n",
            decision.bases.len(),
            decision.nodes
        ),
        KsOutcome::NotKs => {
            let marked: Vec<usize> = decision
                .witness
                .as_ref()
                .unwrap()
                .iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect();
            format!("not Kochen-Specker: marking {:?} hits every one of {} bases once\n", marked, decision.bases.len())
        }
    };
    if let Some(c) = covered {
        text.push_str(&format!("{} vectors in dimension {}, {c} subsets covered\n", file.vectors.len(), file.vectors.dim()));
    }
    let report = json!({
        "ks": decision.is_ks(),
        "outcome": decision.outcome,
        "witness": decision.witness,
        "bases": decision.bases,
        "nodes": decision.nodes,
        "subsets_covered": covered,
    });
    let code = if a.expect_ks && !decision.is_ks() { EXIT_CHECK_FAILED } else { EXIT_OK };
    Ok(Output { code, stdout: render(json, &manifest, &report, text), stderr: String::new() })
}

/// Parses a single graph6 record; convenience for tests and scripts.
pub fn graph(record: &str) -> Result<Graph> {
    Ok(from_graph6(record)?)
}
