use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use orthocolor::graph::{from_graph6, join, line_graph, to_graph6, Graph};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthocolor"))
}

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orthocolor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn json_lines(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn dataset_default_run() {
    let (code, out, _) = run(&["dataset", "--json"], "");
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["chromatic_index"], 5);
    assert_eq!(v["pi_prime_certified"], 4);
    assert_eq!(v["ks"], true);
    assert_eq!(v["manifest"]["subcommand"], "dataset");
    assert!(v["manifest"]["version"].is_string());

    let (code, text, _) = run(&["dataset"], "");
    assert_eq!(code, 0);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
}

#[test]
fn tampered_dataset_fails() {
    let vectors = scratch("ds.txt", "");
    let graph = scratch("ds.g6", "");
    let (code, _, _) = run(
        &["dataset", "--export-vectors", vectors.to_str().unwrap(), "--export-graph", graph.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0);

    let text = std::fs::read_to_string(&vectors).unwrap();
    let (code, _, _) = run(&["dataset", "--override", vectors.to_str().unwrap()], "");
    assert_eq!(code, 0, "unmodified export must pass");

    // (0,0,0,1) becomes (0,1,0,1), which is not orthogonal to (1,1,0,0)
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let first = lines.iter().position(|l| !l.starts_with('#') && !l.trim().is_empty()).unwrap();
    assert_eq!(lines[first], "0,0,0,1");
    lines[first] = "0,1,0,1".to_string();
    let tampered = scratch("tampered.txt", &(lines.join("\n") + "\n"));
    let (code, out, _) = run(&["dataset", "--json", "--override", tampered.to_str().unwrap()], "");
    assert_eq!(code, 1);
    let v = &json_lines(&out)[0];
    assert_eq!(v["passed"], false);
    assert!(v["failed_step"].as_str().unwrap().starts_with("validate"));

    let g6 = std::fs::read_to_string(&graph).unwrap();
    let (code, out, _) = run(&["chroma", "--edge", graph.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(out.contains("chromatic_index = 5"), "{out}");
    assert_eq!(from_graph6(g6.trim()).unwrap().size(), 18);

    let (code, out, _) = run(&["ks-verify", "--expect-ks", vectors.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("Kochen-Specker"), "{out}");
}

#[test]
fn chroma_examples() {
    let input = format!("{}\n{}\n", to_graph6(&Graph::petersen()), to_graph6(&Graph::cycle(4)));
    let (code, out, _) = run(&["chroma", "--edge", "--json"], &input);
    assert_eq!(code, 0);
    let v = json_lines(&out);
    assert_eq!(v[0]["chromatic_index"], 4);
    assert_eq!(v[1]["chromatic_index"], 2);
    assert_eq!(v[0]["certificate"]["target"], "edge");

    let (code, out, _) = run(&["chroma"], &format!("{}\n", to_graph6(&Graph::petersen())));
    assert_eq!(code, 0);
    assert!(out.contains("chromatic_number = 3"));
}

fn grotzsch() -> Graph {
    // Mycielski construction applied to C5
    let c5 = Graph::cycle(5);
    let mut pairs: Vec<(usize, usize)> = c5.edges().iter().map(|e| (e.u, e.v)).collect();
    for e in c5.edges() {
        pairs.push((e.u, 5 + e.v));
        pairs.push((e.v, 5 + e.u));
    }
    pairs.extend((5..10).map(|i| (i, 10)));
    Graph::new(11, pairs).unwrap()
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let input = format!("{}\n", to_graph6(&grotzsch()));
    let (code, out, _) = run(&["chroma", "--budget", "1", "--json"], &input);
    assert_eq!(code, 3);
    let v = &json_lines(&out)[0];
    assert_eq!(v["status"], "inconclusive");
    assert!(v["lower"].as_u64().unwrap() <= 4 && v["upper"].as_u64().unwrap() >= 4);

    let (code, out, _) = run(&["chroma"], &input);
    assert_eq!(code, 0);
    assert!(out.contains("chromatic_number = 4"));
}

#[test]
fn search_examples() {
    let c4 = format!("{}\n", to_graph6(&Graph::cycle(4)));
    let (code, out, _) = run(&["search", "-d", "2", "--json"], &c4);
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["status"], "success");
    assert_eq!(v["rounding"]["certified"], true);
    assert_eq!(v["manifest"]["config"]["solver"]["seed"], 0);

    let k3 = format!("{}\n", to_graph6(&Graph::complete(3)));
    let (code, out, _) = run(&["search", "-d", "3"], &k3);
    assert_eq!(code, 0);
    assert!(out.contains("Success"), "{out}");

    let petersen = format!("{}\n", to_graph6(&Graph::petersen()));
    let csv = scratch("restarts.csv", "");
    let args = ["search", "--edge", "-d", "3", "--restarts", "20", "--seed", "3", "--json", "--csv", csv.to_str().unwrap()];
    let (code, first, _) = run(&args, &petersen);
    assert_eq!(code, 0);
    let v = &json_lines(&first)[0];
    assert_eq!(v["status"], "exhausted");
    assert!(v["residual"].as_f64().unwrap() > 0.2);
    assert_eq!(v["rounding"]["certified"], false);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 21);
    let (_, second, _) = run(&args, &petersen);
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s.trim()).unwrap();
        v["manifest"]["timestamp"] = Value::Null;
        v
    };
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn snark_scan_stream() {
    let input = format!(
        "{}\n{}\n{}\nnot graph6 \u{1}\n",
        to_graph6(&Graph::complete(4)),
        to_graph6(&Graph::petersen()),
        to_graph6(&Graph::cycle(6)),
    );
    let (code, out, _) = run(&["snark-scan", "--restarts", "40", "--json"], &input);
    assert_eq!(code, 1, "the malformed record marks the run as failed");
    let v = json_lines(&out);
    assert_eq!(v.len(), 4);
    assert_eq!(v[0]["status"], "dismissed");
    assert_eq!(v[0]["chromatic_index"], 3);
    assert_eq!(v[1]["status"], "candidate");
    assert_eq!(v[1]["class"], 2);
    assert_eq!(v[1]["hamiltonian"]["status"], "no_cycle");
    assert_eq!(v[1]["planar"], false);
    assert_eq!(v[1]["search"]["rounding"]["certified"], false);
    assert_eq!(v[2]["reason"], "not 3-regular");
    assert_eq!(v[3]["status"], "error");
    assert_eq!(v.iter().map(|r| r["line"].as_u64().unwrap()).collect::<Vec<_>>(), vec![1, 2, 3, 4]);

    let (code, _, _) = run(&["snark-scan"], &format!("{}\n", to_graph6(&Graph::complete(4))));
    assert_eq!(code, 0);
}

#[test]
fn join_and_linegraph() {
    let k2 = scratch("k2.g6", &format!("{}\n", to_graph6(&Graph::complete(2))));
    let (code, out, _) = run(&["join", k2.to_str().unwrap(), k2.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert_eq!(from_graph6(out.trim()).unwrap(), Graph::complete(4));

    let (code, out, _) = run(&["linegraph"], &format!("{}\n", to_graph6(&Graph::star(3))));
    assert_eq!(code, 0);
    assert_eq!(from_graph6(out.trim()).unwrap(), Graph::complete(3));

    let p = Graph::petersen();
    let (_, out, _) = run(&["linegraph", "-"], &format!("{}\n", to_graph6(&p)));
    assert_eq!(from_graph6(out.trim()).unwrap(), line_graph(&p).0);
    let c5 = scratch("c5.g6", &to_graph6(&Graph::cycle(5)));
    let (_, out, _) = run(&["join", c5.to_str().unwrap(), k2.to_str().unwrap()], "");
    assert_eq!(from_graph6(out.trim()).unwrap(), join(&Graph::cycle(5), &Graph::complete(2)));
}

#[test]
fn ks_verify_negative() {
    // three mutually orthogonal vectors form a single basis, marked trivially
    let f = scratch("frame.txt", "1,0,0\n0,1,0\n0,0,1\n");
    let (code, out, _) = run(&["ks-verify", f.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("not Kochen-Specker"));
    let (code, _, _) = run(&["ks-verify", "--expect-ks", f.to_str().unwrap()], "");
    assert_eq!(code, 1);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(run(&["frobnicate"], "").0, 2);
    assert_eq!(run(&["search"], "").0, 2);
    let (code, _, err) = run(&["chroma"], "not graph6 !\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
    assert_eq!(run(&["chroma"], "").0, 2);
    assert_eq!(run(&["ks-verify", "/nonexistent/file"], "").0, 2);
    assert_eq!(run(&["--help"], "").0, 0);
}

#[test]
fn library_entry_point_matches_binary() {
    let out = orthocolor_cli::run_args(["orthocolor", "linegraph"], &format!("{}\n", to_graph6(&Graph::star(3))));
    assert_eq!(out.code, 0);
    assert_eq!(from_graph6(out.stdout.trim()).unwrap(), Graph::complete(3));
    assert_eq!(orthocolor_cli::run_args(["orthocolor", "search", "-d", "x"], "").code, 2);
}
