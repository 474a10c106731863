use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minorforge::{Graph, MinorModel};
use minorforge_cli::experiment::RunReport;
use minorforge_cli::format::{parse_graph, parse_model, write_graph};
use proptest::prelude::*;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minorforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--n", "20", "--p", "0.5", "--seed", "7"]);
    let b = run(&["gen", "--n", "20", "--p", "1/2", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let g = parse_graph(&stdout(&a)).unwrap();
    assert_eq!(g.graph.n(), 20);
}

#[test]
fn gen_complete_and_bipartite() {
    let k6 = parse_graph(&stdout(&run(&["gen", "--complete", "6"]))).unwrap();
    assert_eq!(k6.graph.m(), 15);
    let out = stdout(&run(&["gen", "--bipartite", "8", "12", "--p", "0.3", "--seed", "1"]));
    assert_eq!(out.lines().nth(1), Some("b 8"));
    let file = parse_graph(&out).unwrap();
    let (a, _) = file.sides().unwrap();
    assert!(file.graph.edges().all(|(u, v)| a.contains(&u) != a.contains(&v)));
}

#[test]
fn extract_mader_on_k6_is_the_identity() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k6.txt", &write_graph(&Graph::complete(6), None));
    let m = dir.path().join("m.txt");
    let o = run(&["extract", "mader", s(&g), "--d", "6", "--out", s(&m)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let model = parse_model(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(model, MinorModel::identity(&Graph::complete(6)));
}

#[test]
fn edgeless_dense_minor_is_a_certified_failure() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "e.txt", &write_graph(&Graph::empty(30), None));
    let o = run(&["extract", "dense-minor", s(&g), "--eps", "0.1", "--t", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = run(&[
        "extract",
        "dense-minor",
        s(&g),
        "--eps",
        "1/10",
        "--t",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["success"], false);
    assert!(v["reason"].as_str().unwrap().contains("average degree"));
}

#[test]
fn extracted_models_verify() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert!(run(&["gen", "--n", "120", "--p", "1/2", "--seed", "2", "--out", s(&g)])
        .status
        .success());
    for (kind, flags) in [
        ("mader", vec!["--d", "10"]),
        ("dense-connected", vec!["--d", "10"]),
        ("kconn", vec!["--k", "3"]),
        (
            "dense-minor",
            vec!["--eps", "1/10", "--t", "3", "--c-scale", "4", "--seed", "5"],
        ),
    ] {
        let m = dir.path().join(format!("{kind}.txt"));
        let mut args = vec!["extract", kind, s(&g), "--out", s(&m), "--format", "json"];
        args.extend(flags);
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{kind}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["pattern_order"].as_u64().unwrap() >= 2);
        let o = run(&["verify", s(&g), s(&m)]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        assert!(stdout(&o).contains("valid: true"));
    }
}

#[test]
fn bipartite_extraction_reads_the_sides() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert!(run(&[
        "gen",
        "--bipartite",
        "300",
        "60",
        "--p",
        "9/10",
        "--seed",
        "1",
        "--out",
        s(&g)
    ])
    .status
    .success());
    let o = run(&[
        "extract",
        "dense-minor-bipartite",
        s(&g),
        "--eps",
        "1/4",
        "--t",
        "2",
        "--c-scale",
        "1",
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
    let plain = dir.path().join("plain.txt");
    fs::write(&plain, write_graph(&Graph::complete_bipartite(3, 3), None)).unwrap();
    let o = run(&[
        "extract",
        "dense-minor-bipartite",
        s(&plain),
        "--eps",
        "1/4",
        "--t",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corrupted_model_names_the_pair() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", &write_graph(&Graph::complete(4), None));
    let m = write(&dir, "m.txt", "model 2\nf 0 0 1\nf 1 1 2\n");
    let o = run(&["verify", s(&g), s(&m)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("fragments 0 and 1 share vertex 1"));
}

#[test]
fn density_threshold_is_exact() {
    let dir = TempDir::new().unwrap();
    // one missing edge among ten pairs
    let g = write(
        &dir,
        "g.txt",
        &write_graph(&Graph::complete(5).without_edges([(0, 1)]), None),
    );
    let m = write(&dir, "m.txt", "model 5\nf 0 0\nf 1 1\nf 2 2\nf 3 3\nf 4 4\n");
    assert_eq!(
        run(&["verify", s(&g), s(&m), "--eps", "1/10", "--t", "5"])
            .status
            .code(),
        Some(0)
    );
    let o = run(&["verify", s(&g), s(&m), "--eps", "1/20", "--t", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("nonedges: 1"));
    assert!(stdout(&o).contains("density: 9/10"));
}

#[test]
fn paths_print_either_certificate() {
    let dir = TempDir::new().unwrap();
    let p5 = write(&dir, "p5.txt", &write_graph(&Graph::path(5), None));
    let o = run(&["paths", s(&p5), "--s", "0", "--t", "4", "--k", "1"]);
    assert_eq!(stdout(&o), "paths: 1\n0 1 2 3 4\n");

    let k33 = write(&dir, "k33.txt", &write_graph(&Graph::complete_bipartite(3, 3), None));
    let out = dir.path().join("cert.json");
    let o = run(&[
        "paths",
        s(&k33),
        "--s",
        "0,1,2",
        "--t",
        "3,4,5",
        "--k",
        "3",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let paths = cert["paths"].as_array().unwrap();
    assert_eq!(paths.len(), 3);
    assert!(paths.iter().all(|p| p.as_array().unwrap().len() == 2));

    let star = write(&dir, "star.txt", &write_graph(&Graph::star(5), None));
    let o = run(&["paths", s(&star), "--s", "1,2", "--t", "3,4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("separation of order 1\n"));
    assert!(text.contains("cut: 0\n"));
}

#[test]
fn linkage_via_pairs() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.txt", &write_graph(&Graph::cycle(4), None));
    assert_eq!(run(&["paths", s(&c4), "--pairs", "0-2,1-3"]).status.code(), Some(2));
    let k6 = write(&dir, "k6.txt", &write_graph(&Graph::complete(6), None));
    let o = run(&["paths", s(&k6), "--pairs", "0-1,2-3,4-5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "linkage");
}

#[test]
fn usage_and_io_errors_exit_with_one() {
    assert_eq!(run(&["gen"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "--n", "5", "--p", "x"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "/nonexistent/g", "/nonexistent/m"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "p 3 1\ne 0 0\n");
    assert_eq!(run(&["export-dot", s(&g)]).status.code(), Some(1));
    let g = write(&dir, "k.txt", &write_graph(&Graph::complete(4), None));
    assert_eq!(run(&["extract", "mader", s(&g)]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn experiment(dir: &TempDir, config: &str, extra: &[&str]) -> (Output, String) {
    let c = write(dir, "config.json", config);
    let out = dir.path().join("report.json");
    let mut args = vec!["experiment", s(&c), "--out", s(&out)];
    args.extend(extra);
    let o = run(&args);
    let text = fs::read_to_string(&out).unwrap_or_default();
    (o, text)
}

#[test]
fn empty_grid_gives_empty_report() {
    let dir = TempDir::new().unwrap();
    let (o, text) = experiment(
        &dir,
        r#"{"ensemble": {"kind": "gnp", "n": 10, "count": 3}}"#,
        &["--no-timing"],
    );
    assert_eq!(o.status.code(), Some(0));
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.schema, 1);
    assert!(report.records.is_empty());
    assert!(report.timing.is_none());
}

#[test]
fn complete_ensemble_always_succeeds() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"ensemble": {"kind": "complete", "n": 6, "count": 3},
        "p_grid": ["1"], "eps_grid": ["1/10"], "t_grid": [6], "seed": 4}"#;
    let (o, text) = experiment(&dir, config, &[]);
    assert_eq!(o.status.code(), Some(0));
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.aggregates.cells[0].rate, 1.0);
    assert_eq!(report.timing.as_ref().unwrap().record_ms.len(), 3);
}

/// Rates frozen from a first run of the pipeline on this grid.
const THRESHOLD_RATES: [f64; 2] = [0.0, 1.0];

#[test]
fn threshold_grid_is_monotone_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"ensemble": {"kind": "gnp", "n": 60, "count": 6},
        "p_grid": ["1/30", "1/2"], "eps_grid": ["1/10"], "t_grid": [2], "c_scale": "1", "seed": 11}"#;
    let csv = dir.path().join("table.csv");
    let (o, first) = experiment(&dir, config, &["--no-timing", "--csv", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let (_, second) = experiment(&dir, config, &["--no-timing", "--jobs", "1"]);
    assert_eq!(first, second);
    let report: RunReport = serde_json::from_str(&first).unwrap();
    let cells = &report.aggregates.cells;
    assert!(cells[0].mean_degree_multiple < cells[1].mean_degree_multiple);
    let rates: Vec<f64> = cells.iter().map(|c| c.rate).collect();
    assert_eq!(rates, THRESHOLD_RATES);
    assert!(rates.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 3);

    let report_path = dir.path().join("report.json");
    let o = run(&["verify", "--report", s(&report_path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "verified 6 success records\n");
}

#[test]
fn tampered_report_fails_verification() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"ensemble": {"kind": "complete", "n": 5, "count": 1},
        "p_grid": ["1"], "eps_grid": ["1/10"], "t_grid": [5]}"#;
    let (_, text) = experiment(&dir, config, &["--no-timing"]);
    let mut report: RunReport = serde_json::from_str(&text).unwrap();
    report.records[0].certificate.as_mut().unwrap().fragments[0].push(1);
    let path = write(&dir, "bad.json", &serde_json::to_string(&report).unwrap());
    assert_eq!(run(&["verify", "--report", s(&path)]).status.code(), Some(2));
}

// a checker for the DOT grammar: graph, statement lists, node, edge and
// attribute statements, subgraphs, attribute lists and IDs
mod dot_grammar {
    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Id(String),
        Sym(&'static str),
    }

    fn lex(text: &str) -> Result<Vec<Tok>, String> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'-') {
                out.push(Tok::Sym("--"));
                i += 2;
            } else if let Some(sym) = ["{", "}", "[", "]", ";", ",", "=", ":"]
                .iter()
                .find(|s| s.starts_with(c))
            {
                out.push(Tok::Sym(sym));
                i += 1;
            } else if c == '"' {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '"' {
                    j += if chars[j] == '\\' { 2 } else { 1 };
                }
                if j >= chars.len() {
                    return Err("unterminated string".into());
                }
                out.push(Tok::Id(chars[i..=j].iter().collect()));
                i = j + 1;
            } else if c.is_ascii_digit() || c == '.' {
                let j = (i..chars.len())
                    .find(|&j| !(chars[j].is_ascii_digit() || chars[j] == '.'))
                    .unwrap_or(chars.len());
                out.push(Tok::Id(chars[i..j].iter().collect()));
                i = j;
            } else if c.is_alphabetic() || c == '_' {
                let j = (i..chars.len())
                    .find(|&j| !(chars[j].is_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                out.push(Tok::Id(chars[i..j].iter().collect()));
                i = j;
            } else {
                return Err(format!("unexpected character {c:?}"));
            }
        }
        Ok(out)
    }

    #[derive(Default, Debug)]
    pub struct Counts {
        pub nodes: std::collections::BTreeSet<String>,
        pub edges: usize,
        pub subgraphs: Vec<String>,
    }

    struct P {
        toks: Vec<Tok>,
        at: usize,
        counts: Counts,
    }

    const KEYWORDS: [&str; 6] = ["graph", "digraph", "subgraph", "node", "edge", "strict"];

    impl P {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.at)
        }
        fn eat_sym(&mut self, s: &str) -> bool {
            if self.peek()
                == Some(&Tok::Sym(match s {
                    "{" => "{",
                    "}" => "}",
                    "[" => "[",
                    "]" => "]",
                    ";" => ";",
                    "," => ",",
                    "=" => "=",
                    "--" => "--",
                    _ => ":",
                }))
            {
                self.at += 1;
                true
            } else {
                false
            }
        }
        fn expect_sym(&mut self, s: &str) -> Result<(), String> {
            if self.eat_sym(s) {
                Ok(())
            } else {
                Err(format!("expected {s} at token {}", self.at))
            }
        }
        fn keyword(&self, k: &str) -> bool {
            matches!(self.peek(), Some(Tok::Id(x)) if x.eq_ignore_ascii_case(k))
        }
        fn id(&mut self) -> Result<String, String> {
            match self.peek().cloned() {
                Some(Tok::Id(x)) if !KEYWORDS.iter().any(|k| x.eq_ignore_ascii_case(k)) => {
                    self.at += 1;
                    Ok(x)
                }
                other => Err(format!("expected ID, found {other:?}")),
            }
        }
        fn graph(&mut self) -> Result<(), String> {
            if self.keyword("strict") {
                self.at += 1;
            }
            if !(self.keyword("graph") || self.keyword("digraph")) {
                return Err("expected graph".into());
            }
            self.at += 1;
            if !matches!(self.peek(), Some(Tok::Sym("{"))) {
                self.id()?;
            }
            self.expect_sym("{")?;
            self.stmt_list()?;
            self.expect_sym("}")?;
            if self.at != self.toks.len() {
                return Err("trailing tokens".into());
            }
            Ok(())
        }
        fn stmt_list(&mut self) -> Result<(), String> {
            while !matches!(self.peek(), Some(Tok::Sym("}")) | None) {
                self.stmt()?;
                self.eat_sym(";");
            }
            Ok(())
        }
        fn attr_list(&mut self) -> Result<(), String> {
            while self.eat_sym("[") {
                while !self.eat_sym("]") {
                    self.id()?;
                    self.expect_sym("=")?;
                    self.id()?;
                    if !self.eat_sym(";") {
                        self.eat_sym(",");
                    }
                }
            }
            Ok(())
        }
        fn subgraph(&mut self) -> Result<(), String> {
            if self.keyword("subgraph") {
                self.at += 1;
                if !matches!(self.peek(), Some(Tok::Sym("{"))) {
                    let name = self.id()?;
                    self.counts.subgraphs.push(name);
                }
            }
            self.expect_sym("{")?;
            self.stmt_list()?;
            self.expect_sym("}")
        }
        fn node_id(&mut self) -> Result<String, String> {
            let id = self.id()?;
            if self.eat_sym(":") {
                self.id()?;
            }
            Ok(id)
        }
        fn endpoint(&mut self) -> Result<(), String> {
            if self.keyword("subgraph") || matches!(self.peek(), Some(Tok::Sym("{"))) {
                self.subgraph()
            } else {
                let v = self.node_id()?;
                self.counts.nodes.insert(v);
                Ok(())
            }
        }
        fn stmt(&mut self) -> Result<(), String> {
            if self.keyword("graph") || self.keyword("node") || self.keyword("edge") {
                self.at += 1;
                return self.attr_list();
            }
            if let (Some(Tok::Id(_)), Some(Tok::Sym("="))) = (self.peek(), self.toks.get(self.at + 1)) {
                self.id()?;
                self.at += 1;
                self.id()?;
                return Ok(());
            }
            self.endpoint()?;
            while self.eat_sym("--") {
                self.endpoint()?;
                self.counts.edges += 1;
            }
            self.attr_list()
        }
    }

    pub fn check(text: &str) -> Result<Counts, String> {
        let mut p = P {
            toks: lex(text)?,
            at: 0,
            counts: Counts::default(),
        };
        p.graph()?;
        Ok(p.counts)
    }
}

#[test]
fn dot_export_conforms_to_the_grammar() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", &write_graph(&Graph::complete(3), None));
    let o = run(&["export-dot", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    let counts = dot_grammar::check(&stdout(&o)).unwrap();
    assert_eq!(counts.nodes.len(), 3);
    assert_eq!(counts.edges, 3);

    let g = write(&dir, "c6.txt", &write_graph(&Graph::cycle(6), None));
    let m = write(&dir, "m.txt", "model 3\nf 0 0 1\nf 1 2 3\nf 2 4 5\n");
    let o = run(&["export-dot", s(&g), s(&m)]);
    let counts = dot_grammar::check(&stdout(&o)).unwrap();
    assert_eq!(counts.subgraphs, vec!["cluster_0", "cluster_1", "cluster_2"]);
    assert_eq!(counts.edges, 6);
    assert!(dot_grammar::check("graph { 0 -- }").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trips(n in 0usize..14, bits in proptest::collection::vec(any::<bool>(), 91), side in proptest::option::of(0usize..14)) {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[k] {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let side = side.map(|a| a.min(n));
        let back = parse_graph(&write_graph(&g, side)).unwrap();
        prop_assert_eq!(back.graph, g);
        prop_assert_eq!(back.side_a, side);
    }
}
