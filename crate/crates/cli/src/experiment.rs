//! Seeded ensemble sweeps of the dense-minor builders.
//!
//! A cell is one `(p, eps, t)` combination. Cell `c` draws its instances
//! from `cell_seed = seed ^ splitmix64(c)`, and instance `i` of the cell
//! uses `Rng::new(splitmix64(cell_seed ^ i))` first for the host graph and
//! then for the builder. Cells and instances may run in parallel; the
//! report lists them in grid order regardless.

use std::fmt::Write as _;
use std::time::Instant;

use minorforge::dense::{build_dense_minor_bipartite_with, build_dense_minor_with, BuildOptions, DenseError};
use minorforge::graph::{
    average_degree, fmt_rational, is_eps_t_dense, log_inverse, nonedge_count, parse_rational, random_bipartite,
    random_graph, splitmix64, to_f64,
};
use minorforge::model::{pattern_graph, validate_model};
use minorforge::{Graph, MinorModel, Rational, Rng, VertexSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Host graph, bipartition for bipartite ensembles, and the builder's stream.
pub type Instance = (Graph, Option<(VertexSet, VertexSet)>, Rng);

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Ensemble {
    /// `G(n, p)`.
    Gnp { n: usize, count: usize },
    /// Random bipartite graph with sides `a` and `b`, edge probability `p`.
    Bipartite { a: usize, b: usize, count: usize },
    /// `count` copies of `K_n`; `p` is ignored.
    Complete { n: usize, count: usize },
}

impl Ensemble {
    fn count(&self) -> usize {
        match *self {
            Ensemble::Gnp { count, .. } | Ensemble::Bipartite { count, .. } | Ensemble::Complete { count, .. } => count,
        }
    }
}

/// Rationals are written as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    #[serde(default)]
    pub p_grid: Vec<String>,
    #[serde(default)]
    pub eps_grid: Vec<String>,
    #[serde(default)]
    pub t_grid: Vec<usize>,
    #[serde(default = "default_c_scale")]
    pub c_scale: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
}

fn default_c_scale() -> String {
    "8".into()
}

fn default_attempts() -> usize {
    minorforge::dense::DEFAULT_ATTEMPTS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub index: usize,
    pub p: Rational,
    pub eps: Rational,
    pub t: usize,
}

impl ExperimentConfig {
    pub fn cells(&self) -> Result<Vec<Cell>, String> {
        let rational = |s: &String| parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational"));
        let ps = self.p_grid.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
        let epss = self.eps_grid.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
        let mut cells = Vec::new();
        for &p in &ps {
            for &eps in &epss {
                for &t in &self.t_grid {
                    cells.push(Cell {
                        index: cells.len(),
                        p,
                        eps,
                        t,
                    });
                }
            }
        }
        Ok(cells)
    }

    pub fn c_scale(&self) -> Result<Rational, String> {
        parse_rational(&self.c_scale).ok_or_else(|| format!("`{}` is not a rational", self.c_scale))
    }

    pub fn cell_seed(&self, cell: usize) -> u64 {
        self.seed ^ splitmix64(cell as u64)
    }

    pub fn instance_seed(&self, cell: usize, instance: usize) -> u64 {
        splitmix64(self.cell_seed(cell) ^ instance as u64)
    }

    /// The host graph of one instance, with side A for bipartite
    /// ensembles, and the stream positioned for the builder.
    pub fn instance(&self, cell: &Cell, instance: usize) -> Result<Instance, String> {
        let mut rng = Rng::new(self.instance_seed(cell.index, instance));
        let (g, sides) = match self.ensemble {
            Ensemble::Gnp { n, .. } => (random_graph(n, cell.p, &mut rng).map_err(|e| e.to_string())?, None),
            Ensemble::Bipartite { a, b, .. } => {
                let (g, sa, sb) = random_bipartite(a, b, cell.p, &mut rng).map_err(|e| e.to_string())?;
                (g, Some((sa, sb)))
            }
            Ensemble::Complete { n, .. } => (Graph::complete(n), None),
        };
        Ok((g, sides, rng))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pattern_order: usize,
    pub nonedges: usize,
    /// Edge density of the pattern as `p/q`.
    pub density: String,
    pub fragments: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub cell: usize,
    pub instance: usize,
    pub seed: u64,
    pub p: String,
    pub eps: String,
    pub t: usize,
    pub n: usize,
    pub m: usize,
    pub average_degree: String,
    /// Average degree over `t sqrt(ln(1/eps))`.
    pub degree_multiple: f64,
    pub success: bool,
    pub attempts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub p: String,
    pub eps: String,
    pub t: usize,
    pub instances: usize,
    pub successes: usize,
    pub rate: f64,
    pub mean_degree_multiple: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub instances: usize,
    pub successes: usize,
    pub cells: Vec<CellSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub record_ms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub records: Vec<Record>,
    pub aggregates: Aggregates,
    /// Wall-clock data; the only part that differs between identical runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

fn certificate(g: &Graph, model: &MinorModel) -> Certificate {
    let pattern = pattern_graph(g, model).expect("builders return valid models");
    let nonedges = nonedge_count(&pattern);
    let k = pattern.n() as i64;
    let pairs = k * (k - 1) / 2;
    let density = if pairs == 0 {
        "1".to_string()
    } else {
        fmt_rational(Rational::new(pattern.m() as i64, pairs))
    };
    Certificate {
        pattern_order: pattern.n(),
        nonedges,
        density,
        fragments: model.fragments.iter().map(|f| f.iter().copied().collect()).collect(),
    }
}

fn run_instance(config: &ExperimentConfig, cell: &Cell, instance: usize, c_scale: Rational) -> Result<Record, String> {
    let (g, sides, mut rng) = config.instance(cell, instance)?;
    let avg = average_degree(&g);
    let scale = cell.t as f64 * log_inverse(cell.eps).sqrt();
    let outcome = match &sides {
        None => {
            let options = BuildOptions {
                c_scale,
                attempts: config.attempts,
                ..BuildOptions::default()
            };
            build_dense_minor_with(&g, cell.eps, cell.t, &options, &mut rng).map(|o| {
                let attempts = o.attempts();
                (o.model, attempts)
            })
        }
        Some((a, b)) => {
            build_dense_minor_bipartite_with(&g, a, b, cell.eps, cell.t, c_scale, config.attempts, &mut rng)
                .map(|o| (o.model, o.attempts))
        }
    };
    let (success, attempts, certificate, reason) = match outcome {
        Ok((model, attempts)) => (true, Some(attempts), Some(certificate(&g, &model)), None),
        Err(e) => {
            let attempts = match e {
                DenseError::AttemptsExhausted { attempts, .. } => Some(attempts),
                _ => None,
            };
            (false, attempts, None, Some(e.to_string()))
        }
    };
    Ok(Record {
        cell: cell.index,
        instance,
        seed: config.instance_seed(cell.index, instance),
        p: fmt_rational(cell.p),
        eps: fmt_rational(cell.eps),
        t: cell.t,
        n: g.n(),
        m: g.m(),
        average_degree: fmt_rational(avg),
        degree_multiple: if scale > 0.0 { to_f64(avg) / scale } else { 0.0 },
        success,
        attempts,
        certificate,
        reason,
    })
}

/// Runs every cell of the grid.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, String> {
    let start = Instant::now();
    let cells = config.cells()?;
    let c_scale = config.c_scale()?;
    let jobs: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|c| (0..config.ensemble.count()).map(move |i| (*c, i)))
        .collect();
    let timed: Vec<(Record, f64)> = jobs
        .par_iter()
        .map(|(cell, i)| {
            let t0 = Instant::now();
            run_instance(config, cell, *i, c_scale).map(|r| (r, t0.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_, _>>()?;
    let (records, record_ms): (Vec<Record>, Vec<f64>) = timed.into_iter().unzip();
    let summaries = cells
        .iter()
        .map(|c| {
            let mine: Vec<&Record> = records.iter().filter(|r| r.cell == c.index).collect();
            let successes = mine.iter().filter(|r| r.success).count();
            let instances = mine.len();
            CellSummary {
                cell: c.index,
                p: fmt_rational(c.p),
                eps: fmt_rational(c.eps),
                t: c.t,
                instances,
                successes,
                rate: if instances == 0 {
                    0.0
                } else {
                    successes as f64 / instances as f64
                },
                mean_degree_multiple: if instances == 0 {
                    0.0
                } else {
                    mine.iter().map(|r| r.degree_multiple).sum::<f64>() / instances as f64
                },
            }
        })
        .collect();
    let aggregates = Aggregates {
        instances: records.len(),
        successes: records.iter().filter(|r| r.success).count(),
        cells: summaries,
    };
    Ok(RunReport {
        schema: SCHEMA,
        config: config.clone(),
        records,
        aggregates,
        timing: Some(Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            record_ms,
        }),
    })
}

/// The threshold table, one row per cell.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from("cell,p,eps,t,instances,successes,rate,mean_degree_multiple\n");
    for c in &report.aggregates.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.4},{:.4}",
            c.cell, c.p, c.eps, c.t, c.instances, c.successes, c.rate, c.mean_degree_multiple
        )
        .unwrap();
    }
    out
}

/// Regenerates every host graph with a success record and re-checks its
/// model: valid, `t` fragments, `(eps, t)`-dense pattern, and the stored
/// summary numbers. Returns the number of records checked.
pub fn reverify(report: &RunReport) -> Result<usize, String> {
    if report.schema != SCHEMA {
        return Err(format!("schema {} is not supported", report.schema));
    }
    let cells = report.config.cells()?;
    let mut checked = 0;
    for rec in report.records.iter().filter(|r| r.success) {
        let cell = cells
            .get(rec.cell)
            .ok_or_else(|| format!("record names unknown cell {}", rec.cell))?;
        let (g, _, _) = report.config.instance(cell, rec.instance)?;
        let cert = rec
            .certificate
            .as_ref()
            .ok_or_else(|| format!("record {}/{} has no certificate", rec.cell, rec.instance))?;
        let model = MinorModel::new(cert.fragments.iter().map(|f| f.iter().copied().collect()).collect());
        let fail = |msg: String| Err(format!("record {}/{}: {msg}", rec.cell, rec.instance));
        let rep = validate_model(&g, &model);
        if let Some(v) = rep.violations.first() {
            return fail(v.to_string());
        }
        let pattern = rep.pattern.expect("valid model has a pattern");
        if pattern.n() != cell.t || !is_eps_t_dense(&pattern, cell.eps).map_err(|e| e.to_string())? {
            return fail("pattern is not dense enough".into());
        }
        if certificate(&g, &model) != *cert {
            return fail("stored summary differs from the recomputed one".into());
        }
        checked += 1;
    }
    Ok(checked)
}
