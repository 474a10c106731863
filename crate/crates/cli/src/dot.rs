use std::fmt::Write as _;

use minorforge::{Graph, MinorModel};

const PALETTE: &[&str] = &[
    "dodgerblue",
    "darkorange",
    "forestgreen",
    "crimson",
    "mediumpurple",
    "saddlebrown",
    "hotpink",
    "gray40",
    "olivedrab",
    "darkcyan",
];

/// Undirected DOT text. With a model, each fragment becomes a coloured
/// `cluster_<i>` subgraph holding its vertices.
pub fn to_dot(g: &Graph, model: Option<&MinorModel>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    let mut placed = vec![false; g.n()];
    if let Some(m) = model {
        for (i, f) in m.fragments.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            writeln!(out, "  subgraph cluster_{i} {{").unwrap();
            writeln!(out, "    label=\"{i}\";").unwrap();
            writeln!(out, "    color={colour};").unwrap();
            for &v in f.iter().filter(|&&v| v < g.n()) {
                writeln!(out, "    {v} [style=filled, fillcolor={colour}];").unwrap();
                placed[v] = true;
            }
            out.push_str("  }\n");
        }
    }
    for v in g.vertices().filter(|&v| !placed[v]) {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
