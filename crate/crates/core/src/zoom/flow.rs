//! Flow network over the tile tree and a successive-shortest-path
//! min-cost max-flow solver.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write;

use serde::Serialize;

use super::TileTree;

/// Stands in for infinite capacity; no flow can exceed the point count.
pub const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    /// Source to root, free.
    Dotted,
    /// One unit of the source-to-tile arc; the k-th unit costs 2k - 1.
    Dashed { tile: usize, k: i64 },
    Tree { parent: usize, child: usize },
    /// Internal arc of a non-leaf tile carrying its quota.
    Split { tile: usize },
    /// Leaf tile to the super-sink.
    Sink { tile: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
    pub cost: i64,
    pub kind: ArcKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub source: usize,
    pub sink: usize,
    /// Production of the source.
    pub supply: i64,
    pub arcs: Vec<FlowArc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flow {
    pub arc_flow: Vec<i64>,
    pub value: i64,
    pub cost: i64,
}

impl FlowNetwork {
    /// Flow entering tile `tile` straight from the source.
    pub fn source_inflow(&self, flow: &Flow, tile: usize) -> i64 {
        self.arcs
            .iter()
            .zip(&flow.arc_flow)
            .filter(|(a, _)| match a.kind {
                ArcKind::Dotted => tile == 0,
                ArcKind::Dashed { tile: t, .. } => t == tile,
                _ => false,
            })
            .map(|(_, &f)| f)
            .sum()
    }

    /// Text dump in DIMACS min-cost-flow form, nodes numbered from 1. Arc
    /// flows follow as `f` lines when given.
    pub fn to_dimacs(&self, flow: Option<&Flow>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "c tile tree flow network");
        let _ = writeln!(s, "p min {} {}", self.node_count, self.arcs.len());
        let _ = writeln!(s, "n {} {}", self.source + 1, self.supply);
        let _ = writeln!(s, "n {} {}", self.sink + 1, -self.supply);
        for a in &self.arcs {
            let _ = writeln!(s, "a {} {} 0 {} {}", a.from + 1, a.to + 1, a.cap, a.cost);
        }
        if let Some(f) = flow {
            let _ = writeln!(s, "c value {} cost {}", f.value, f.cost);
            for (a, &x) in self.arcs.iter().zip(&f.arc_flow) {
                if x > 0 {
                    let _ = writeln!(s, "f {} {} {}", a.from + 1, a.to + 1, x);
                }
            }
        }
        s
    }
}

/// Network of the tile tree: the source feeds the root for free and every
/// other tile through unit arcs of cost 1, 3, 5, ..., tree arcs are free and
/// unbounded, non-leaf tiles pass at most `quota`, and each leaf drains its
/// point count into the sink.
pub fn build_flow_network(t: &TileTree, quota: usize) -> FlowNetwork {
    let (source, sink) = (0, 1);
    let mut node_count = 2;
    let mut tin = Vec::with_capacity(t.tiles.len());
    let mut tout = Vec::with_capacity(t.tiles.len());
    for tile in &t.tiles {
        tin.push(node_count);
        node_count += 1;
        if tile.is_leaf() {
            tout.push(tin[tin.len() - 1]);
        } else {
            tout.push(node_count);
            node_count += 1;
        }
    }
    let mut arcs = vec![FlowArc { from: source, to: tin[0], cap: UNBOUNDED, cost: 0, kind: ArcKind::Dotted }];
    for (i, tile) in t.tiles.iter().enumerate() {
        if i != 0 {
            for k in 1..=tile.points.len() as i64 {
                arcs.push(FlowArc { from: source, to: tin[i], cap: 1, cost: 2 * k - 1, kind: ArcKind::Dashed { tile: i, k } });
            }
        }
        if tile.is_leaf() {
            arcs.push(FlowArc {
                from: tout[i],
                to: sink,
                cap: tile.points.len() as i64,
                cost: 0,
                kind: ArcKind::Sink { tile: i },
            });
        } else {
            arcs.push(FlowArc { from: tin[i], to: tout[i], cap: quota as i64, cost: 0, kind: ArcKind::Split { tile: i } });
            for &c in &tile.children {
                arcs.push(FlowArc {
                    from: tout[i],
                    to: tin[c],
                    cap: UNBOUNDED,
                    cost: 0,
                    kind: ArcKind::Tree { parent: i, child: c },
                });
            }
        }
    }
    FlowNetwork { node_count, source, sink, supply: t.point_count() as i64, arcs }
}

/// Maximum flow of least cost, by successive shortest augmenting paths with
/// node potentials. Costs must be non-negative.
pub fn solve_mcmf(net: &FlowNetwork) -> Flow {
    let n = net.node_count;
    // residual edge 2i is arc i, 2i + 1 its reverse
    let mut cap: Vec<i64> = Vec::with_capacity(2 * net.arcs.len());
    let mut head = Vec::with_capacity(2 * net.arcs.len());
    let mut cost = Vec::with_capacity(2 * net.arcs.len());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in net.arcs.iter().enumerate() {
        debug_assert!(a.cost >= 0 && a.cap >= 0);
        cap.extend([a.cap, 0]);
        head.extend([a.to, a.from]);
        cost.extend([a.cost, -a.cost]);
        out[a.from].push(2 * i);
        out[a.to].push(2 * i + 1);
    }
    let mut pot = vec![0i64; n];
    let (mut value, mut total) = (0i64, 0i64);
    while value < net.supply {
        let mut dist = vec![i64::MAX; n];
        let mut via = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[net.source] = 0;
        heap.push(Reverse((0i64, net.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &out[u] {
                if cap[e] == 0 {
                    continue;
                }
                let v = head[e];
                let nd = d + cost[e] + pot[u] - pot[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    via[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[net.sink] == i64::MAX {
            break;
        }
        for v in 0..n {
            if dist[v] != i64::MAX {
                pot[v] += dist[v];
            }
        }
        let mut push = net.supply - value;
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            push = push.min(cap[e]);
            v = head[e ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            cap[e] -= push;
            cap[e ^ 1] += push;
            total += push * cost[e];
            v = head[e ^ 1];
        }
        value += push;
    }
    let arc_flow = (0..net.arcs.len()).map(|i| cap[2 * i + 1]).collect();
    Flow { arc_flow, value, cost: total }
}
