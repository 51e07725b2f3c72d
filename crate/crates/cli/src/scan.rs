//! The cubic Class-2 pipeline behind `snark-scan`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use orthocolor::chroma::{chromatic_index, ChromaOutcome};
use orthocolor::graph::{
    degree_profile, is_biconnected, is_hamiltonian, is_planar, parse_graph6_lines, Graph, HamiltonOutcome,
    DEFAULT_HAMILTON_BUDGET,
};
use orthocolor::search::{search_ortho_edge_coloring, SolveConfig, SolveReport};

use super::{path_label, read_input, render, search_text, Output, RunManifest, ScanArgs, EXIT_CHECK_FAILED, EXIT_INCONCLUSIVE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    /// Not a candidate; `reason` says why.
    Dismissed,
    /// Class 2, every structural check consistent, search ran.
    Candidate,
    /// A result contradicting known theory, which points at a solver bug.
    Contradiction,
    /// Some budget ran out before the record could be classified.
    Inconclusive,
    /// The record did not parse.
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub line: usize,
    pub status: ScanStatus,
    pub reason: Option<String>,
    pub vertices: Option<usize>,
    pub cubic: Option<bool>,
    pub biconnected: Option<bool>,
    pub chromatic_index: Option<usize>,
    pub class: Option<u8>,
    pub hamiltonian: Option<HamiltonOutcome>,
    pub planar: Option<bool>,
    pub search: Option<SolveReport>,
}

impl ScanRecord {
    fn blank(line: usize, status: ScanStatus, reason: impl Into<String>) -> Self {
        ScanRecord {
            line,
            status,
            reason: Some(reason.into()),
            vertices: None,
            cubic: None,
            biconnected: None,
            chromatic_index: None,
            class: None,
            hamiltonian: None,
            planar: None,
            search: None,
        }
    }

    fn finish(mut self, status: ScanStatus, reason: impl Into<String>) -> Self {
        self.status = status;
        self.reason = Some(reason.into());
        self
    }
}

/// Runs the pipeline on one graph. `chroma_budget` bounds both the
/// chromatic index and Hamiltonicity searches.
pub fn scan_graph(line: usize, g: &Graph, chroma_budget: u64, cfg: &SolveConfig) -> ScanRecord {
    let mut rec = ScanRecord::blank(line, ScanStatus::Dismissed, "");
    rec.vertices = Some(g.order());
    let profile = degree_profile(g);
    let cubic = g.order() > 0 && profile.regular && profile.max_degree == 3;
    rec.cubic = Some(cubic);
    if !cubic {
        return rec.finish(ScanStatus::Dismissed, "not 3-regular");
    }
    let bic = is_biconnected(g);
    rec.biconnected = Some(bic);
    if !bic {
        return rec.finish(ScanStatus::Dismissed, "not biconnected");
    }
    let chi = match chromatic_index(g, chroma_budget) {
        Ok(ChromaOutcome::Exact(r)) => r.value,
        Ok(ChromaOutcome::Inconclusive { lower, upper, .. }) => {
            return rec.finish(ScanStatus::Inconclusive, format!("chromatic index in [{lower}, {upper}]"));
        }
        Err(e) => return rec.finish(ScanStatus::Error, e.to_string()),
    };
    rec.chromatic_index = Some(chi);
    if chi == 3 {
        rec.class = Some(1);
        return rec.finish(ScanStatus::Dismissed, "class 1 (chromatic index 3)");
    }
    rec.class = Some(2);

    let ham = match is_hamiltonian(g, chroma_budget.max(DEFAULT_HAMILTON_BUDGET)) {
        Ok(h) => h,
        Err(e) => return rec.finish(ScanStatus::Error, e.to_string()),
    };
    let ham_found = ham.cycle().is_some();
    let ham_open = matches!(ham, HamiltonOutcome::Inconclusive { .. });
    rec.hamiltonian = Some(ham);
    if ham_found {
        return rec.finish(ScanStatus::Contradiction, "class 2 cubic graph with a Hamiltonian cycle");
    }
    let planar = is_planar(g);
    rec.planar = Some(planar);
    if planar {
        return rec.finish(ScanStatus::Contradiction, "planar biconnected class 2 cubic graph");
    }

    match search_ortho_edge_coloring(g, cfg) {
        Ok(report) => {
            let summary = if report.rounding.certified {
                "orthogonal 3-edge-coloring certified"
            } else {
                "no certified orthogonal 3-edge-coloring"
            };
            rec.search = Some(report);
            if ham_open {
                rec.finish(ScanStatus::Inconclusive, format!("Hamiltonicity budget exhausted; {summary}"))
            } else {
                rec.finish(ScanStatus::Candidate, summary)
            }
        }
        Err(e) => rec.finish(ScanStatus::Error, e.to_string()),
    }
}

fn record_text(r: &ScanRecord) -> String {
    let mut s = format!(
        "line {}: {:?}: {}\n",
        r.line,
        r.status,
        r.reason.as_deref().unwrap_or("")
    );
    if let Some(search) = &r.search {
        s.push_str("  ");
        s.push_str(&search_text(r.line, search));
    }
    s
}

pub fn cmd_snark_scan(a: &ScanArgs, json: bool, stdin: &str) -> anyhow::Result<Output> {
    let text = read_input(&a.input, stdin)?;
    let mut cfg = a.solver.config(3);
    cfg.d = 3;
    let manifest = RunManifest::new(
        "snark-scan",
        vec![path_label(&a.input)],
        json!({"budget": a.budget, "solver": cfg}),
    );
    let records: Vec<ScanRecord> = parse_graph6_lines(&text)
        .into_par_iter()
        .map(|(line, parsed)| match parsed {
            Ok(g) => scan_graph(line, &g, a.budget, &cfg),
            Err(e) => ScanRecord::blank(line, ScanStatus::Error, e.to_string()),
        })
        .collect();

    let mut code = super::EXIT_OK;
    let mut out = String::new();
    for r in &records {
        match r.status {
            ScanStatus::Contradiction | ScanStatus::Error => code = EXIT_CHECK_FAILED,
            ScanStatus::Inconclusive if code == super::EXIT_OK => code = EXIT_INCONCLUSIVE,
            _ => {}
        }
        out.push_str(&render(json, &manifest, r, record_text(r)));
    }
    Ok(Output { code, stdout: out, stderr: String::new() })
}
