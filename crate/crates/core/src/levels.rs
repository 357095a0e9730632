//! Per-level graphs, meshes and routes derived bottom-up from the full
//! routing, plus the data for animating between consecutive levels.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{arc_params, sample_at, Point, Rect};
use crate::graph::InputGraph;
use crate::mesh::{Mesh, VertexId, VertexKind};
use crate::routing::{angle_ok, prune, Limits, Neighborhood, RoutedMesh};
use crate::zoom::{LevelAssignment, TileTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LevelError {
    #[error("edge ({0}, {1}) has no route at level {2}")]
    MissingRoute(usize, usize, usize),
    #[error("levels {0} and {1} are not consecutive")]
    NotConsecutive(usize, usize),
}

/// Nodes visible at a level and the edges they induce, both ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGraph {
    pub level: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

pub fn level_graphs(g: &InputGraph, a: &LevelAssignment, k: usize) -> Vec<LevelGraph> {
    (1..=k)
        .map(|i| {
            let nodes: Vec<usize> = (0..g.len()).filter(|&v| a.g[v] <= i).collect();
            let mut edges: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .map(|&(u, v)| (u.min(v), u.max(v)))
                .filter(|&(u, v)| a.g[u] <= i && a.g[v] <= i)
                .collect();
            edges.sort_unstable();
            LevelGraph { level: i, nodes, edges }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct LevelBundle {
    pub graph: LevelGraph,
    pub routed: RoutedMesh,
}

impl LevelBundle {
    pub fn level(&self) -> usize {
        self.graph.level
    }

    pub fn route_polyline(&self, edge: (usize, usize)) -> Option<Vec<Point>> {
        self.routed.routes.iter().find(|r| r.edge == edge).map(|r| r.polyline(&self.routed.mesh))
    }
}

/// Bundle for the level above: routes of edges missing from `prev` are
/// dropped, the detours of hidden nodes become plain junctions and unused
/// rails go. With `keep_hidden` a hidden node stays in the mesh as an
/// isolated obstacle; otherwise it is demoted and removed.
pub fn derive_level_mesh(bundle: &LevelBundle, prev: &LevelGraph, keep_hidden: bool) -> LevelBundle {
    let mut rm = bundle.routed.clone();
    let edges: BTreeSet<(usize, usize)> = prev.edges.iter().copied().collect();
    rm.routes.retain(|r| edges.contains(&r.edge));
    let visible: BTreeSet<usize> = prev.nodes.iter().copied().collect();
    let ids: Vec<VertexId> = rm.mesh.vertex_ids().collect();
    for v in ids {
        match rm.mesh.kind(v) {
            VertexKind::Detour(i) if !visible.contains(&i) => rm.mesh.set_kind(v, VertexKind::Junction),
            VertexKind::Node(i) if !visible.contains(&i) && !keep_hidden => {
                rm.mesh.set_kind(v, VertexKind::Junction)
            }
            _ => {}
        }
    }
    LevelBundle { graph: prev.clone(), routed: prune(rm) }
}

fn bend_removable(m: &Mesh, a: VertexId, b: VertexId, c: VertexId) -> bool {
    match m.kind(b) {
        VertexKind::Junction | VertexKind::Boundary => true,
        VertexKind::Detour(_) => {
            let (da, dc) = (m.pos(a) - m.pos(b), m.pos(c) - m.pos(b));
            da.cross(dc) == 0.0 && da.dot(dc) < 0.0
        }
        VertexKind::Node(_) => false,
    }
}

/// Replace the bend `a-b-c` by the chord `a-c` in every route that takes it.
/// Rails left without routes are removed. Undone unless the chord keeps the
/// limits and neither any route nor the total ink gets longer.
fn try_chord(rm: &mut RoutedMesh, a: VertexId, b: VertexId, c: VertexId, lim: &Limits) -> bool {
    if !bend_removable(&rm.mesh, a, b, c) {
        return false;
    }
    let takes = |ch: &[VertexId]| {
        ch.windows(3).any(|w| (w[0], w[1], w[2]) == (a, b, c) || (w[0], w[1], w[2]) == (c, b, a))
    };
    let users: Vec<usize> = (0..rm.routes.len()).filter(|&i| takes(&rm.routes[i].chain)).collect();
    let usage = rm.usage();
    let through = users.len();
    let m = &mut rm.mesh;
    let (ab, bc, ac) = (m.rail_length(a, b), m.rail_length(b, c), m.rail_length(a, c));
    if ac > ab + bc {
        return false;
    }
    let drop_ab = usage[&(a.min(b), a.max(b))] == through;
    let drop_bc = usage[&(b.min(c), b.max(c))] == through;
    let existed = m.has_rail(a, c);
    let freed = if drop_ab { ab } else { 0.0 } + if drop_bc { bc } else { 0.0 };
    if !existed && ac > freed {
        return false;
    }
    if drop_ab {
        m.remove_rail(a, b);
    }
    if drop_bc {
        m.remove_rail(b, c);
    }
    let ok = existed || {
        m.add_rail(a, c);
        let nb = Neighborhood::around(m, m.pos(a), ac + lim.beta);
        nb.rail_ok(m, a, c, lim) && angle_ok(m, a, lim) && angle_ok(m, c, lim)
    };
    if !ok {
        m.remove_rail(a, c);
        if drop_ab {
            m.add_rail(a, b);
        }
        if drop_bc {
            m.add_rail(b, c);
        }
        return false;
    }
    for i in users {
        let ch = &mut rm.routes[i].chain;
        let k = ch.windows(3).position(|w| w[1] == b && (w[0] == a || w[0] == c)).expect("route takes the bend");
        ch.remove(k + 1);
    }
    if m.degree(b) == 0 && !m.kind(b).is_node() {
        m.remove_vertex(b);
    }
    true
}

/// Straighten routes bend by bend until no chord can be taken.
pub fn simplify_routes(mut b: LevelBundle, lim: &Limits) -> LevelBundle {
    loop {
        let mut changed = false;
        for ri in 0..b.routed.routes.len() {
            let mut k = 1;
            while k + 1 < b.routed.routes[ri].chain.len() {
                let ch = &b.routed.routes[ri].chain;
                let (x, y, z) = (ch[k - 1], ch[k], ch[k + 1]);
                if try_chord(&mut b.routed, x, y, z, lim) {
                    changed = true;
                    k = k.saturating_sub(1).max(1);
                } else {
                    k += 1;
                }
            }
        }
        if !changed {
            break;
        }
    }
    b.routed = prune(b.routed);
    b
}

/// Control polylines of one edge at two consecutive levels, sampled at the
/// union of both polylines' arc-length breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeTransition {
    pub edge: (usize, usize),
    pub params: Vec<f64>,
    pub from: Vec<Point>,
    pub to: Vec<Point>,
}

impl EdgeTransition {
    pub fn new(edge: (usize, usize), from: &[Point], to: &[Point]) -> EdgeTransition {
        let mut params: Vec<f64> = arc_params(from).into_iter().chain(arc_params(to)).collect();
        params.sort_by(f64::total_cmp);
        params.dedup();
        EdgeTransition { edge, from: sample_at(from, &params), to: sample_at(to, &params), params }
    }

    pub fn frame(&self, t: f64) -> Vec<Point> {
        self.from.iter().zip(&self.to).map(|(&p, &q)| p.lerp(q, t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionSet {
    pub from_level: usize,
    pub to_level: usize,
    pub edges: Vec<EdgeTransition>,
}

/// Transitions for every edge visible at the lower-numbered level.
pub fn build_transitions(lo: &LevelBundle, hi: &LevelBundle) -> Result<TransitionSet, LevelError> {
    if hi.level() != lo.level() + 1 {
        return Err(LevelError::NotConsecutive(lo.level(), hi.level()));
    }
    let edges = lo
        .graph
        .edges
        .iter()
        .map(|&e| {
            let from = lo.route_polyline(e).ok_or(LevelError::MissingRoute(e.0, e.1, lo.level()))?;
            let to = hi.route_polyline(e).ok_or(LevelError::MissingRoute(e.0, e.1, hi.level()))?;
            Ok(EdgeTransition::new(e, &from, &to))
        })
        .collect::<Result<_, _>>()?;
    Ok(TransitionSet { from_level: lo.level(), to_level: hi.level(), edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileReport {
    pub cell: (usize, usize),
    pub nodes: usize,
    pub rails: usize,
}

/// Nodes inside a window of up to 2x2 tiles; `cell` is its lower-left tile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewportReport {
    pub cell: (usize, usize),
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTiles {
    pub level: usize,
    pub tiles: Vec<TileReport>,
    pub viewports: Vec<ViewportReport>,
}

fn cell_span(lo: f64, hi: f64, min: f64, width: f64, k: usize) -> (usize, usize) {
    if !(width > 0.0) {
        return (0, k - 1);
    }
    let idx = |x: f64| ((x - min) / width * k as f64).floor();
    let a = (idx(lo) - 1.0).max(0.0) as usize;
    let b = ((idx(hi) + 1.0).max(0.0) as usize).min(k - 1);
    (a.min(k - 1), b)
}

/// Visible nodes and rails meeting each tile of the bundle's level, and node
/// totals over every viewport window.
pub fn tile_metrics(b: &LevelBundle, t: &TileTree) -> LevelTiles {
    let level = b.level();
    let (cols, rows) = t.mode.grid(level);
    let ids: Vec<usize> = t.level_tiles(level).collect();
    let mut grid = vec![usize::MAX; cols * rows];
    for &i in &ids {
        let (c, r) = t.tiles[i].cell;
        grid[r * cols + c] = i;
    }
    let mut nodes = vec![0usize; cols * rows];
    for &v in &b.graph.nodes {
        let (c, r) = t.tiles[t.tile_of(v, level)].cell;
        nodes[r * cols + c] += 1;
    }
    let root: Rect = t.root().rect;
    let m = &b.routed.mesh;
    let mut rails = vec![0usize; cols * rows];
    for (x, y) in m.rails() {
        let s = m.segment(x, y);
        let (c0, c1) = cell_span(s.a.x.min(s.b.x), s.a.x.max(s.b.x), root.min.x, root.width(), cols);
        let (r0, r1) = cell_span(s.a.y.min(s.b.y), s.a.y.max(s.b.y), root.min.y, root.height(), rows);
        for r in r0..=r1 {
            for c in c0..=c1 {
                if t.tiles[grid[r * cols + c]].rect.intersects_segment(&s) {
                    rails[r * cols + c] += 1;
                }
            }
        }
    }
    let tiles = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (c, r)))
        .map(|(c, r)| TileReport { cell: (c, r), nodes: nodes[r * cols + c], rails: rails[r * cols + c] })
        .collect();
    let (wc, wr) = (cols.min(2), rows.min(2));
    let mut viewports = Vec::new();
    for r in 0..=rows - wr {
        for c in 0..=cols - wc {
            let total = (r..r + wr).flat_map(|rr| (c..c + wc).map(move |cc| (cc, rr))).map(|(cc, rr)| nodes[rr * cols + cc]).sum();
            viewports.push(ViewportReport { cell: (c, r), nodes: total });
        }
    }
    LevelTiles { level, tiles, viewports }
}
