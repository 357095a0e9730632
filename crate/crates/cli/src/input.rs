//! Graph input: JSON documents, or a TSV edge list with a positions file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use graphmaps_core::graph::{InputGraph, RawGraph, RawNode};

/// Read a graph. `.json` files hold `{nodes: [{id, x, y, rank?}], edges: [[id, id]]}`;
/// anything else is a tab-separated edge list that needs `positions`, a
/// tab-separated `id x y [rank]` table.
pub fn read_graph(input: &Path, positions: Option<&Path>) -> Result<InputGraph> {
    let raw = if input.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
        serde_json::from_str::<RawGraph>(&text).with_context(|| format!("parsing {}", input.display()))?
    } else {
        let Some(pos) = positions else {
            bail!("{} is not JSON; pass --positions with an `id x y [rank]` table", input.display());
        };
        let edges = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
        let table = fs::read_to_string(pos).with_context(|| format!("reading {}", pos.display()))?;
        parse_tsv(&edges, &table)?
    };
    Ok(InputGraph::validate(&raw)?)
}

fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split('\t').map(str::trim).collect()))
}

pub fn parse_tsv(edges: &str, positions: &str) -> Result<RawGraph> {
    let mut g = RawGraph::default();
    for (line, f) in rows(positions) {
        let num = |k: usize| -> Result<f64> {
            f[k].parse().with_context(|| format!("positions line {line}: bad number {:?}", f[k]))
        };
        match f.len() {
            3 | 4 => g.nodes.push(RawNode {
                id: f[0].to_string(),
                x: num(1)?,
                y: num(2)?,
                rank: if f.len() == 4 { Some(num(3)?) } else { None },
            }),
            _ => bail!("positions line {line}: expected `id x y [rank]`"),
        }
    }
    for (line, f) in rows(edges) {
        if f.len() != 2 {
            bail!("edges line {line}: expected two tab-separated ids");
        }
        g.edges.push((f[0].to_string(), f[1].to_string()));
    }
    Ok(g)
}
