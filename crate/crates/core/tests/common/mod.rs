#![allow(dead_code)]

use std::collections::BTreeSet;

use graphmaps_core::geom::{arc_params, point_seg_dist, Point, Segment};
use graphmaps_core::graph::{InputGraph, RawGraph};
use graphmaps_core::manifest::Manifest;
use graphmaps_core::zoom::build_tile_tree_in;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SAMPLE: &str = include_str!("../../../../samples/sample20.json");

pub fn sample_graph() -> InputGraph {
    let raw: RawGraph = serde_json::from_str(SAMPLE).unwrap();
    InputGraph::validate(&raw).unwrap()
}

/// Random connected-ish graph with `n` nodes and about `1.5 n` edges.
pub fn random_graph(seed: u64, n: usize, ranked: bool) -> InputGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = RawGraph::default();
    for i in 0..n {
        raw.nodes.push(graphmaps_core::graph::RawNode {
            id: format!("v{i}"),
            x: rng.gen_range(0.0..100.0),
            y: rng.gen_range(0.0..100.0),
            rank: ranked.then(|| rng.gen_range(0.0..1.0)),
        });
    }
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert((j, i));
    }
    while edges.len() < 3 * n / 2 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    raw.edges = edges.into_iter().map(|(a, b)| (format!("v{a}"), format!("v{b}"))).collect();
    InputGraph::validate(&raw).unwrap()
}

/// Quota on non-leaf tiles, 4Q per viewport above the bottom, nesting,
/// induced edges, routes for every edge and the rank condition.
pub fn check_quota_and_nesting(m: &Manifest) -> Result<(), String> {
    let q = m.config.quota;
    let k = m.levels.len();
    let pts: Vec<Point> = m.nodes.iter().map(|v| v.pos()).collect();
    let tree = build_tile_tree_in(&pts, m.bounds, k, m.config.build.mode).map_err(|e| e.to_string())?;
    for l in &m.levels {
        let shown: BTreeSet<usize> = l.nodes.iter().copied().collect();
        let expect: BTreeSet<usize> = (0..m.nodes.len()).filter(|&v| m.nodes[v].level <= l.level).collect();
        if shown != expect {
            return Err(format!("level {}: node set differs from assignment", l.level));
        }
        let induced: BTreeSet<[usize; 2]> =
            m.edges.iter().copied().filter(|e| shown.contains(&e[0]) && shown.contains(&e[1])).collect();
        if l.edges.iter().copied().collect::<BTreeSet<_>>() != induced {
            return Err(format!("level {}: edges not induced", l.level));
        }
        for e in &l.edges {
            let r = l.route(*e).ok_or(format!("level {}: edge {e:?} has no route", l.level))?;
            if r.points[0] != pts[e[0]] || *r.points.last().unwrap() != pts[e[1]] {
                return Err(format!("level {}: route {e:?} does not end at its nodes", l.level));
            }
            // no route runs through or next to a foreign visible node
            for &v in &l.nodes {
                if v == e[0] || v == e[1] {
                    continue;
                }
                for w in r.points.windows(2) {
                    if point_seg_dist(pts[v], &Segment::new(w[0], w[1])) <= 0.0 {
                        return Err(format!("level {}: route {e:?} touches node {v}", l.level));
                    }
                }
            }
        }
        if l.level < k {
            for t in tree.level_tiles(l.level) {
                let s = tree.tiles[t].points.iter().filter(|p| shown.contains(p)).count();
                if s > q {
                    return Err(format!("level {}: tile {:?} shows {s} > {q}", l.level, tree.tiles[t].cell));
                }
            }
            if let Some(v) = l.tiles.viewports.iter().find(|v| v.nodes > 4 * q) {
                return Err(format!("level {}: viewport {:?} shows {} > 4Q", l.level, v.cell, v.nodes));
            }
        }
    }
    for w in m.levels.windows(2) {
        let lo: BTreeSet<usize> = w[0].nodes.iter().copied().collect();
        let hi: BTreeSet<usize> = w[1].nodes.iter().copied().collect();
        if !lo.is_subset(&hi) {
            return Err(format!("level {} not nested in {}", w[0].level, w[1].level));
        }
    }
    if m.levels.last().map(|l| l.nodes.len()) != Some(m.nodes.len()) {
        return Err("bottom level misses nodes".into());
    }
    for a in 0..m.nodes.len() {
        for b in 0..m.nodes.len() {
            if m.nodes[a].rank > m.nodes[b].rank && m.nodes[a].level > m.nodes[b].level {
                return Err(format!("rank condition: {} deeper than {}", m.nodes[a].id, m.nodes[b].id));
            }
        }
    }
    Ok(())
}

/// Frames at t = 0 and 1 reproduce the stored routes and every frame keeps
/// the node endpoints.
pub fn check_transitions(m: &Manifest) -> Result<(), String> {
    if m.transitions.len() + 1 != m.levels.len() {
        return Err("one transition per consecutive level pair expected".into());
    }
    for (tr, w) in m.transitions.iter().zip(m.levels.windows(2)) {
        if (tr.from_level, tr.to_level) != (w[0].level, w[1].level) {
            return Err("transition levels out of order".into());
        }
        let covered: BTreeSet<[usize; 2]> = tr.edges.iter().map(|e| [e.edge.0, e.edge.1]).collect();
        if covered != w[0].edges.iter().copied().collect() {
            return Err(format!("transition {} does not cover the edges of its level", tr.from_level));
        }
        for e in &tr.edges {
            let key = [e.edge.0, e.edge.1];
            let sides = [(0.0, &w[0].route(key).unwrap().points), (1.0, &w[1].route(key).unwrap().points)];
            for (t, stored) in sides {
                let frame = e.frame(t);
                let own = arc_params(stored);
                let mut j = 0;
                for (i, &s) in e.params.iter().enumerate() {
                    if j < own.len() && own[j] == s {
                        if frame[i].x.to_bits() != stored[j].x.to_bits() || frame[i].y.to_bits() != stored[j].y.to_bits() {
                            return Err(format!("edge {key:?} t={t}: vertex {j} differs"));
                        }
                        j += 1;
                    } else {
                        let seg = Segment::new(stored[j - 1], stored[j]);
                        if point_seg_dist(frame[i], &seg) > 1e-9 * (1.0 + seg.length()) {
                            return Err(format!("edge {key:?} t={t}: inserted point off the route"));
                        }
                    }
                }
                if j != stored.len() {
                    return Err(format!("edge {key:?} t={t}: {} of {} vertices matched", j, stored.len()));
                }
            }
            let (a, b) = (m.nodes[key[0]].pos(), m.nodes[key[1]].pos());
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let f = e.frame(t);
                if f[0] != a || f[f.len() - 1] != b {
                    return Err(format!("edge {key:?}: endpoints move at t={t}"));
                }
            }
        }
    }
    Ok(())
}
