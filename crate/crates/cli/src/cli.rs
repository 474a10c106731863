use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use minorforge::dense::{build_dense_minor_bipartite_with, build_dense_minor_with, BuildOptions};
use minorforge::extract::{dense_connected_minor, k_connected_subgraph, mader_min_degree_minor};
use minorforge::graph::{
    edge_density, fmt_rational, is_eps_t_dense, nonedge_count, parse_rational, random_bipartite, random_graph,
    vertex_connectivity,
};
use minorforge::link::{find_linkage, menger, MengerOutcome};
use minorforge::model::{pattern_graph, validate_model};
use minorforge::{Caps, Graph, MinorModel, Rational, Rng, Vertex, VertexSet};
use serde_json::{json, Value};

use crate::dot::to_dot;
use crate::experiment::{reverify, run_experiment, to_csv, ExperimentConfig, RunReport};
use crate::format::{parse_graph, parse_model, write_graph, write_model, GraphFile};

/// How a command ended. `Usage` and `Io` exit with 1, `Certified` (the
/// command ran but the construction or check did not succeed) with 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Certified(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Certified(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Certified(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "minorforge",
    version,
    about = "Certified dense minors, linkages and connectivity certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random or complete graph in the edge-list format.
    Gen(GenArgs),
    /// Extract a certified minor or subgraph.
    Extract(ExtractArgs),
    /// Re-check a model against a graph, or every success record of a report.
    Verify(VerifyArgs),
    /// Disjoint paths or a separation between two sets, or a linkage.
    Paths(PathsArgs),
    /// Sweep a grid of builder parameters over a seeded ensemble.
    Experiment(ExperimentArgs),
    /// Render a graph, optionally with a model overlay, as DOT.
    ExportDot(DotArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["n", "complete", "bipartite"])))]
pub struct GenArgs {
    /// Number of vertices of G(n, p).
    #[arg(long)]
    pub n: Option<usize>,
    /// Complete graph on this many vertices.
    #[arg(long)]
    pub complete: Option<usize>,
    /// Random bipartite graph with these side sizes.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub bipartite: Option<Vec<usize>>,
    /// Edge probability, `p/q` or a finite decimal.
    #[arg(long, default_value = "1/2")]
    pub p: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtractKind {
    Mader,
    DenseConnected,
    DenseMinor,
    DenseMinorBipartite,
    Kconn,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    pub kind: ExtractKind,
    pub graph: PathBuf,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value = "8")]
    pub c_scale: String,
    #[arg(long, default_value_t = minorforge::dense::DEFAULT_ATTEMPTS)]
    pub attempts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the model; printed after the summary otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required_unless_present = "report")]
    pub graph: Option<PathBuf>,
    #[arg(required_unless_present = "report")]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub t: Option<usize>,
    /// An experiment report whose success records are re-checked.
    #[arg(long, conflicts_with_all = ["graph", "model"])]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["s", "pairs"])))]
pub struct PathsArgs {
    pub graph: PathBuf,
    /// Source set, comma separated.
    #[arg(long, requires_all = ["t", "k"])]
    pub s: Option<String>,
    /// Target set, comma separated.
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Terminal pairs such as `0-5,1-4`.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Save the certificate as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the threshold table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Leave out the wall-clock timing object.
    #[arg(long)]
    pub no_timing: bool,
    /// Worker threads (all cores by default).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    pub graph: PathBuf,
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Extract(a) => extract(a),
        Command::Verify(a) => verify(a),
        Command::Paths(a) => paths(a),
        Command::Experiment(a) => experiment(a),
        Command::ExportDot(a) => export_dot(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<GraphFile, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<MinorModel, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn rational(flag: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::Usage(format!("--{flag}: `{text}` is not a rational")))
}

fn need<T: Copy>(flag: &str, v: Option<T>) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required here")))
}

fn vertex_list(flag: &str, text: &str) -> Result<VertexSet, Failure> {
    text.split(',')
        .filter(|w| !w.trim().is_empty())
        .map(|w| w.trim().parse::<Vertex>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--{flag}: expected comma separated vertices")))
}

fn gen(a: GenArgs) -> Outcome {
    let p = rational("p", &a.p)?;
    let mut rng = Rng::new(a.seed);
    let bad = |e: minorforge::GraphError| Failure::Usage(e.to_string());
    let text = if let Some(n) = a.complete {
        write_graph(&Graph::complete(n), None)
    } else if let Some(n) = a.n {
        write_graph(&random_graph(n, p, &mut rng).map_err(bad)?, None)
    } else {
        let sides = a.bipartite.unwrap_or_default();
        let (g, side_a, _) = random_bipartite(sides[0], sides[1], p, &mut rng).map_err(bad)?;
        write_graph(&g, Some(side_a.len()))
    };
    emit(a.out.as_deref(), &text)
}

fn summary(g: &Graph, model: &MinorModel) -> serde_json::Map<String, Value> {
    let pattern = pattern_graph(g, model).expect("extractors return valid models");
    let mut s = serde_json::Map::new();
    s.insert("pattern_order".into(), json!(pattern.n()));
    s.insert("pattern_edges".into(), json!(pattern.m()));
    s.insert("nonedges".into(), json!(nonedge_count(&pattern)));
    if let Ok(d) = edge_density(&pattern) {
        s.insert("density".into(), json!(fmt_rational(d)));
    }
    s.insert("min_degree".into(), json!(pattern.min_degree().unwrap_or(0)));
    if let Ok(k) = vertex_connectivity(&pattern) {
        s.insert("connectivity".into(), json!(k));
    }
    s
}

fn print_fields(fields: &serde_json::Map<String, Value>) {
    for (k, v) in fields {
        match v {
            Value::String(s) => println!("{k}: {s}"),
            other => println!("{k}: {other}"),
        }
    }
}

fn extract(a: ExtractArgs) -> Outcome {
    let file = load_graph(&a.graph)?;
    let g = &file.graph;
    let mut rng = Rng::new(a.seed);
    let c_scale = rational("c-scale", &a.c_scale)?;
    let mut extra = serde_json::Map::new();
    let result: Result<MinorModel, String> = match a.kind {
        ExtractKind::Mader => mader_min_degree_minor(g, need("d", a.d)?).map_err(|e| e.to_string()),
        ExtractKind::DenseConnected => dense_connected_minor(g, need("d", a.d)?).map_err(|e| e.to_string()),
        ExtractKind::Kconn => k_connected_subgraph(g, need("k", a.k)?)
            .map(MinorModel::singletons)
            .map_err(|e| e.to_string()),
        ExtractKind::DenseMinor => {
            let eps = rational(
                "eps",
                a.eps
                    .as_deref()
                    .ok_or_else(|| Failure::Usage("--eps is required here".into()))?,
            )?;
            let options = BuildOptions {
                c_scale,
                attempts: a.attempts,
                ..BuildOptions::default()
            };
            build_dense_minor_with(g, eps, need("t", a.t)?, &options, &mut rng)
                .map(|o| {
                    extra.insert("attempts".into(), json!(o.attempts()));
                    extra.insert("minor_order".into(), json!(o.minor_order));
                    o.model
                })
                .map_err(|e| e.to_string())
        }
        ExtractKind::DenseMinorBipartite => {
            let eps = rational(
                "eps",
                a.eps
                    .as_deref()
                    .ok_or_else(|| Failure::Usage("--eps is required here".into()))?,
            )?;
            let (side_a, side_b) = file
                .sides()
                .ok_or_else(|| Failure::Usage("graph file declares no bipartition (`b <a>` line)".into()))?;
            build_dense_minor_bipartite_with(g, &side_a, &side_b, eps, need("t", a.t)?, c_scale, a.attempts, &mut rng)
                .map(|o| {
                    extra.insert("attempts".into(), json!(o.attempts));
                    extra.insert("root".into(), json!(o.root));
                    o.model
                })
                .map_err(|e| e.to_string())
        }
    };
    let kind = a.kind.to_possible_value().unwrap().get_name().to_string();
    let model = match result {
        Ok(m) => m,
        Err(reason) => {
            if a.format == Format::Json {
                println!("{}", json!({"kind": kind, "success": false, "reason": reason}));
            }
            return Err(Failure::Certified(reason));
        }
    };
    let mut fields = serde_json::Map::new();
    fields.insert("kind".into(), json!(kind));
    fields.insert("success".into(), json!(true));
    fields.extend(summary(g, &model));
    fields.extend(extra);
    if let Some(out) = &a.out {
        emit(Some(out), &write_model(&model))?;
    }
    match a.format {
        Format::Json => {
            let frags: Vec<Vec<Vertex>> = model.fragments.iter().map(|f| f.iter().copied().collect()).collect();
            fields.insert("fragments".into(), json!(frags));
            println!("{}", Value::Object(fields));
        }
        Format::Text => {
            print_fields(&fields);
            if a.out.is_none() {
                print!("{}", write_model(&model));
            }
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Outcome {
    if let Some(path) = &a.report {
        let report: RunReport =
            serde_json::from_str(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let checked = reverify(&report).map_err(Failure::Certified)?;
        println!("verified {checked} success records");
        return Ok(());
    }
    let (gp, mp) = (a.graph.unwrap(), a.model.unwrap());
    let g = load_graph(&gp)?.graph;
    let model = load_model(&mp)?;
    let report = validate_model(&g, &model);
    let mut fields = serde_json::Map::new();
    let verdict = if let Some(v) = report.violations.first() {
        fields.insert("valid".into(), json!(false));
        fields.insert("violation".into(), json!(v.to_string()));
        Err(Failure::Certified(format!("invalid: {v}")))
    } else {
        let pattern = report.pattern.unwrap();
        fields.insert("valid".into(), json!(true));
        fields.extend(summary(&g, &model));
        let mut verdict = Ok(());
        if let Some(t) = a.t {
            let ok = pattern.n() == t;
            fields.insert("order_matches".into(), json!(ok));
            if !ok {
                verdict = Err(Failure::Certified(format!(
                    "pattern has {} vertices, expected {t}",
                    pattern.n()
                )));
            }
        }
        if let Some(eps) = &a.eps {
            let eps = rational("eps", eps)?;
            let dense = pattern.n() >= 2 && is_eps_t_dense(&pattern, eps).unwrap_or(false);
            fields.insert("eps".into(), json!(fmt_rational(eps)));
            fields.insert("dense".into(), json!(dense));
            if !dense && verdict.is_ok() {
                verdict = Err(Failure::Certified(format!(
                    "pattern is not ({}, {})-dense",
                    fmt_rational(eps),
                    pattern.n()
                )));
            }
        }
        verdict
    };
    match a.format {
        Format::Json => println!("{}", Value::Object(fields)),
        Format::Text => print_fields(&fields),
    }
    verdict
}

fn path_lines(paths: &[Vec<Vertex>]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
        .collect()
}

fn set_line(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn paths(a: PathsArgs) -> Outcome {
    let g = load_graph(&a.graph)?.graph;
    let caps = Caps::from_env();
    let (cert, verdict) = if let Some(pairs) = &a.pairs {
        let pairs: Vec<(Vertex, Vertex)> = pairs
            .split(',')
            .filter(|w| !w.trim().is_empty())
            .map(|w| {
                let (x, y) = w.split_once('-')?;
                Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Failure::Usage("--pairs: expected `u-v,u-v,...`".into()))?;
        match find_linkage(&g, &pairs, &caps) {
            Ok(Some(fam)) => (json!({"kind": "linkage", "paths": fam.paths}), Ok(())),
            Ok(None) => (
                json!({"kind": "not-linkable", "pairs": pairs}),
                Err(Failure::Certified("the pairs cannot be linked".into())),
            ),
            Err(e) => return Err(Failure::Certified(e.to_string())),
        }
    } else {
        let s = vertex_list("s", a.s.as_deref().unwrap())?;
        let t = vertex_list("t", a.t.as_deref().unwrap_or(""))?;
        match menger(&g, &s, &t, a.k.unwrap_or(0)).map_err(|e| Failure::Certified(e.to_string()))? {
            MengerOutcome::Paths(fam) => (json!({"kind": "paths", "paths": fam.paths}), Ok(())),
            MengerOutcome::Separation(sep) => (
                json!({
                    "kind": "separation",
                    "order": sep.order(),
                    "a": sep.a,
                    "b": sep.b,
                    "cut": sep.cut(),
                }),
                Ok(()),
            ),
        }
    };
    match a.format {
        Format::Json => println!("{cert}"),
        Format::Text => match cert["kind"].as_str().unwrap() {
            "separation" => {
                let set = |key: &str| -> VertexSet { serde_json::from_value(cert[key].clone()).unwrap() };
                println!("separation of order {}", cert["order"]);
                println!("A: {}", set_line(&set("a")));
                println!("B: {}", set_line(&set("b")));
                println!("cut: {}", set_line(&set("cut")));
            }
            "not-linkable" => println!("not linkable"),
            kind => {
                let ps: Vec<Vec<Vertex>> = serde_json::from_value(cert["paths"].clone()).unwrap();
                println!("{kind}: {}", ps.len());
                for line in path_lines(&ps) {
                    println!("{line}");
                }
            }
        },
    }
    if let Some(out) = &a.out {
        emit(Some(out), &format!("{cert}\n"))?;
    }
    verdict
}

fn experiment(a: ExperimentArgs) -> Outcome {
    let config: ExperimentConfig =
        serde_json::from_str(&read(&a.config)?).map_err(|e| Failure::Usage(format!("{}: {e}", a.config.display())))?;
    let run = || run_experiment(&config);
    let mut report = match a.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?
            .install(run),
        None => run(),
    }
    .map_err(Failure::Usage)?;
    if a.no_timing {
        report.timing = None;
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(a.out.as_deref(), &text)?;
    if let Some(csv) = &a.csv {
        emit(Some(csv), &to_csv(&report))?;
    }
    Ok(())
}

fn export_dot(a: DotArgs) -> Outcome {
    let g = load_graph(&a.graph)?.graph;
    let model = a.model.as_deref().map(load_model).transpose()?;
    emit(a.out.as_deref(), &to_dot(&g, model.as_ref()))
}
