//! The serialized result of a build, and everything that can be derived
//! from it without rerunning the pipeline.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::geom::{dist_e, polyline_length, Point, Rect};
use crate::graph::Ranking;
use crate::levels::{LevelTiles, TransitionSet};
use crate::mesh::{stretch_factor, MeshDump, MeshError, TieRule, VertexKind};
use crate::routing::{Limits, ModConfig};
use crate::svg::SvgDoc;
use crate::zoom::{build_tile_tree_in, check_rank_condition, objective_f, LevelAssignment, TileMode, ZoomError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    #[default]
    Sim,
    Fast,
}

/// Build settings. Unset modification fields are derived from the point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub levels: usize,
    /// `None` searches for the smallest workable quota.
    pub quota: Option<usize>,
    pub mode: TileMode,
    pub seed: u64,
    pub tie_rule: TieRule,
    pub construction: Construction,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub thin_width: Option<f64>,
    pub median_iters: Option<usize>,
    pub port_radius: Option<f64>,
    /// Keep hidden nodes as obstacles when straightening upper-level routes.
    pub keep_hidden_nodes: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            levels: 3,
            quota: None,
            mode: TileMode::TwoD,
            seed: 0,
            tie_rule: TieRule::default(),
            construction: Construction::default(),
            alpha: None,
            beta: None,
            thin_width: None,
            median_iters: None,
            port_radius: None,
            keep_hidden_nodes: false,
        }
    }
}

/// Settings as used, after defaults and clamping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub build: BuildConfig,
    pub modification: ModConfig,
    pub limits: Limits,
    pub quota: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestNode {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub rank: f64,
    /// First level at which the node is drawn.
    pub level: usize,
}

impl ManifestNode {
    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRoute {
    pub edge: [usize; 2],
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestLevel {
    pub level: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub mesh: MeshDump,
    pub routes: Vec<ManifestRoute>,
    pub tiles: LevelTiles,
}

impl ManifestLevel {
    pub fn route(&self, edge: [usize; 2]) -> Option<&ManifestRoute> {
        self.routes.iter().find(|r| r.edge == edge)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Total length of distinct rails under routes, per level.
    pub ink: Vec<f64>,
    /// Of the competition mesh over all nodes.
    pub stretch: f64,
    /// Largest route length over endpoint distance at the bottom level.
    pub max_route_dilation: f64,
    /// Sum of squared per-tile appearance counts.
    pub objective: u64,
    pub quota: usize,
    pub max_tile_nodes: Vec<usize>,
    pub max_viewport_nodes: Vec<usize>,
    pub max_tile_rails: Vec<usize>,
    /// `[degree, count]` over junctions of the bottom-level mesh.
    pub junction_degrees: Vec<[usize; 2]>,
    pub rank_violations: usize,
}

impl Metrics {
    /// Equal up to floating-point summation order.
    pub fn approx_eq(&self, o: &Metrics, rel: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0);
        self.ink.len() == o.ink.len()
            && self.ink.iter().zip(&o.ink).all(|(&a, &b)| close(a, b))
            && close(self.stretch, o.stretch)
            && close(self.max_route_dilation, o.max_route_dilation)
            && self.objective == o.objective
            && self.quota == o.quota
            && self.max_tile_nodes == o.max_tile_nodes
            && self.max_viewport_nodes == o.max_viewport_nodes
            && self.max_tile_rails == o.max_tile_rails
            && self.junction_degrees == o.junction_degrees
            && self.rank_violations == o.rank_violations
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub config: ResolvedConfig,
    pub bounds: Rect,
    pub nodes: Vec<ManifestNode>,
    pub edges: Vec<[usize; 2]>,
    pub levels: Vec<ManifestLevel>,
    pub transitions: Vec<TransitionSet>,
    pub metrics: Metrics,
    /// Competition mesh over all nodes, before routing.
    pub base_mesh: MeshDump,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("malformed manifest: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("level {0} out of range 1..={1}")]
    BadLevel(usize, usize),
    #[error("inconsistent manifest: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Zoom(#[from] ZoomError),
}

fn key(p: Point) -> (u64, u64) {
    p.key()
}

/// Length of the distinct segments drawn by a set of polylines.
fn polyline_ink<'a>(lines: impl Iterator<Item = &'a [Point]>) -> f64 {
    let mut seen = BTreeSet::new();
    let mut ink = 0.0;
    for pts in lines {
        for w in pts.windows(2) {
            let (a, b) = (key(w[0]), key(w[1]));
            if seen.insert((a.min(b), a.max(b))) {
                ink += dist_e(w[0], w[1]);
            }
        }
    }
    ink
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Manifest, ManifestError> {
        let m: Manifest = serde_json::from_str(s)?;
        if m.format_version != FORMAT_VERSION {
            return Err(ManifestError::Version(m.format_version));
        }
        m.check_ids()?;
        Ok(m)
    }

    fn check_ids(&self) -> Result<(), ManifestError> {
        let n = self.nodes.len();
        let bad = |what: String| Err(ManifestError::Inconsistent(what));
        if self.levels.len() != self.config.build.levels {
            return bad(format!("{} levels, config says {}", self.levels.len(), self.config.build.levels));
        }
        if self.edges.iter().flatten().any(|&v| v >= n) {
            return bad("edge endpoint out of range".into());
        }
        for (i, l) in self.levels.iter().enumerate() {
            if l.level != i + 1 {
                return bad(format!("level {} stored at position {}", l.level, i + 1));
            }
            if l.nodes.iter().any(|&v| v >= n) {
                return bad(format!("node out of range at level {}", l.level));
            }
            if l.edges.iter().any(|&e| l.route(e).is_none()) {
                return bad(format!("edge without route at level {}", l.level));
            }
        }
        Ok(())
    }

    pub fn ranking(&self) -> Ranking {
        Ranking(self.nodes.iter().map(|v| v.rank).collect())
    }

    pub fn assignment(&self) -> LevelAssignment {
        LevelAssignment { g: self.nodes.iter().map(|v| v.level).collect() }
    }

    pub fn level(&self, i: usize) -> Result<&ManifestLevel, ManifestError> {
        if i == 0 || i > self.levels.len() {
            return Err(ManifestError::BadLevel(i, self.levels.len()));
        }
        Ok(&self.levels[i - 1])
    }

    /// Metrics from the stored geometry alone.
    pub fn recompute_metrics(&self) -> Result<Metrics, ManifestError> {
        let ink = self.levels.iter().map(|l| polyline_ink(l.routes.iter().map(|r| r.points.as_slice()))).collect();
        let stretch = stretch_factor(&self.base_mesh.to_mesh())?;
        let bottom = self.levels.last().ok_or_else(|| ManifestError::Inconsistent("no levels".into()))?;
        let max_route_dilation = bottom
            .routes
            .iter()
            .map(|r| polyline_length(&r.points) / dist_e(r.points[0], r.points[r.points.len() - 1]))
            .fold(0.0, f64::max);
        let pts: Vec<Point> = self.nodes.iter().map(|v| v.pos()).collect();
        let b = &self.config.build;
        let tree = build_tile_tree_in(&pts, self.bounds, b.levels, b.mode)?;
        let a = self.assignment();
        let mut max_tile_nodes = Vec::new();
        let mut max_viewport_nodes = Vec::new();
        let mut max_tile_rails = Vec::new();
        for l in &self.levels {
            let (cols, rows) = b.mode.grid(l.level);
            let mut count = vec![0usize; cols * rows];
            let mut rails = vec![0usize; cols * rows];
            for t in tree.level_tiles(l.level) {
                let tile = &tree.tiles[t];
                let (c, r) = tile.cell;
                count[r * cols + c] = tile.points.iter().filter(|&&p| a.g[p] <= l.level).count();
                rails[r * cols + c] = l
                    .mesh
                    .rails
                    .iter()
                    .filter(|&&[x, y]| {
                        let (p, q) = (&l.mesh.vertices[x], &l.mesh.vertices[y]);
                        tile.rect.intersects_segment(&crate::geom::Segment::new(Point::new(p.x, p.y), Point::new(q.x, q.y)))
                    })
                    .count();
            }
            let mut vmax = 0;
            for r in 0..=rows - rows.min(2) {
                for c in 0..=cols - cols.min(2) {
                    let mut s = 0;
                    for rr in r..r + rows.min(2) {
                        for cc in c..c + cols.min(2) {
                            s += count[rr * cols + cc];
                        }
                    }
                    vmax = vmax.max(s);
                }
            }
            max_tile_nodes.push(count.iter().copied().max().unwrap_or(0));
            max_viewport_nodes.push(vmax);
            max_tile_rails.push(rails.iter().copied().max().unwrap_or(0));
        }
        let mut degree = vec![0usize; bottom.mesh.vertices.len()];
        for &[x, y] in &bottom.mesh.rails {
            degree[x] += 1;
            degree[y] += 1;
        }
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for (v, &d) in bottom.mesh.vertices.iter().zip(&degree) {
            if v.kind == VertexKind::Junction {
                *hist.entry(d).or_default() += 1;
            }
        }
        Ok(Metrics {
            ink,
            stretch,
            max_route_dilation,
            objective: objective_f(&tree, &a),
            quota: self.config.quota,
            max_tile_nodes,
            max_viewport_nodes,
            max_tile_rails,
            junction_degrees: hist.into_iter().map(|(d, c)| [d, c]).collect(),
            rank_violations: check_rank_condition(&a, &self.ranking()).len(),
        })
    }

    /// Level `i` as SVG: rails, visible nodes as disks sized by rank and
    /// hidden nodes as small gray dots. Returns the document and its element count.
    pub fn level_svg(&self, i: usize) -> Result<(String, usize), ManifestError> {
        let l = self.level(i)?;
        let mut doc = SvgDoc::new(self.bounds);
        let w = doc.rel(0.0015);
        for &[a, b] in &l.mesh.rails {
            let (p, q) = (&l.mesh.vertices[a], &l.mesh.vertices[b]);
            doc.line(Point::new(p.x, p.y), Point::new(q.x, q.y), "#4a6fa5", w);
        }
        let (lo, hi) = self.nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.rank), hi.max(v.rank)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let visible: BTreeSet<usize> = l.nodes.iter().copied().collect();
        for (k, v) in self.nodes.iter().enumerate() {
            if visible.contains(&k) {
                let r = doc.rel(0.004 + 0.008 * (v.rank - lo) / span);
                doc.circle(v.pos(), r, "#c0392b", Some(&v.id));
            } else {
                let r = doc.rel(0.0015);
                doc.circle(v.pos(), r, "#bbb", None);
            }
        }
        let count = doc.element_count();
        Ok((doc.finish(), count))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ink_counts_shared_segments_once() {
        let a = [Point::new(0., 0.), Point::new(1., 0.), Point::new(1., 1.)];
        let b = [Point::new(1., 0.), Point::new(0., 0.)];
        assert_eq!(polyline_ink([&a[..], &b[..]].into_iter()), 2.0);
    }
}
