//! Face enumeration of the planar routed mesh and removal of thin faces.

use std::collections::{BTreeSet, HashMap};

use super::{loop_erase, prune, ModConfig, RoutedMesh};
use crate::geom::{seg_seg_dist, Point, Segment};
use crate::mesh::{Mesh, VertexId, VertexKind};

/// Boundary walk of one face. Bounded faces have positive signed area.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub cycle: Vec<VertexId>,
    pub area: f64,
}

impl Face {
    fn is_simple(&self) -> bool {
        let s: BTreeSet<_> = self.cycle.iter().collect();
        s.len() == self.cycle.len()
    }

    fn contains_directed(&self, a: VertexId, b: VertexId) -> bool {
        let k = self.cycle.len();
        (0..k).any(|i| self.cycle[i] == a && self.cycle[(i + 1) % k] == b)
    }

    /// Walk from `from` forward along the cycle until `to`.
    fn walk(&self, from: VertexId, to: VertexId) -> Vec<VertexId> {
        let k = self.cycle.len();
        let start = self.cycle.iter().position(|&v| v == from).expect("vertex on face");
        let mut out = vec![from];
        let mut i = start;
        loop {
            i = (i + 1) % k;
            out.push(self.cycle[i]);
            if self.cycle[i] == to || out.len() > k + 1 {
                break;
            }
        }
        out
    }
}

fn sorted_around(m: &Mesh) -> HashMap<VertexId, Vec<VertexId>> {
    m.vertex_ids()
        .map(|v| {
            let c = m.pos(v);
            let mut nb: Vec<(f64, VertexId)> = m
                .neighbors(v)
                .map(|w| {
                    let d = m.pos(w) - c;
                    (d.y.atan2(d.x), w)
                })
                .collect();
            nb.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            (v, nb.into_iter().map(|(_, w)| w).collect())
        })
        .collect()
}

/// All faces, by half-edge traversal with the face on the left.
pub fn faces(m: &Mesh) -> Vec<Face> {
    let around = sorted_around(m);
    let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut out = Vec::new();
    for (a, b) in m.rails() {
        for (u, v) in [(a, b), (b, a)] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut x, mut y) = (u, v);
            while seen.insert((x, y)) {
                cycle.push(x);
                let ring = &around[&y];
                let i = ring.iter().position(|&w| w == x).expect("half-edge twin");
                let z = ring[(i + ring.len() - 1) % ring.len()];
                (x, y) = (y, z);
            }
            let area = signed_area(&cycle.iter().map(|&v| m.pos(v)).collect::<Vec<_>>());
            out.push(Face { cycle, area });
        }
    }
    out
}

fn signed_area(pts: &[Point]) -> f64 {
    let k = pts.len();
    0.5 * (0..k).map(|i| pts[i].cross(pts[(i + 1) % k])).sum::<f64>()
}

fn strictly_inside(poly: &[Point], q: Point) -> bool {
    let k = poly.len();
    let mut inside = false;
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        if crate::geom::point_seg_dist(q, &Segment::new(a, b)) == 0.0 {
            return false;
        }
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if q.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Smallest distance between two non-adjacent maximal straight pieces of the
/// face boundary. Infinite when every pair is adjacent.
pub fn face_width(m: &Mesh, f: &Face) -> f64 {
    let pts: Vec<Point> = f.cycle.iter().map(|&v| m.pos(v)).collect();
    let k = pts.len();
    let corners: Vec<usize> = (0..k)
        .filter(|&i| {
            let d1 = pts[i] - pts[(i + k - 1) % k];
            let d2 = pts[(i + 1) % k] - pts[i];
            !(d1.cross(d2) == 0.0 && d1.dot(d2) > 0.0)
        })
        .collect();
    let s = corners.len();
    if s < 4 {
        return f64::INFINITY;
    }
    let segs: Vec<Segment> =
        (0..s).map(|i| Segment::new(pts[corners[i]], pts[corners[(i + 1) % s]])).collect();
    let mut w = f64::INFINITY;
    for i in 0..s {
        for j in i + 2..s {
            if i == 0 && j == s - 1 {
                continue;
            }
            w = w.min(seg_seg_dist(&segs[i], &segs[j]));
        }
    }
    w
}

fn path_len(m: &Mesh, p: &[VertexId]) -> f64 {
    p.windows(2).map(|w| m.rail_length(w[0], w[1])).sum()
}

/// Remove the longest edge of thin bounded faces that touch no node or detour
/// polygon, rerouting along the shorter admissible side, until none is left.
pub fn refine_faces(mut rm: RoutedMesh, cfg: &ModConfig) -> RoutedMesh {
    loop {
        let all = faces(&rm.mesh);
        let m = &rm.mesh;
        let candidate = all.iter().find_map(|f| {
            if f.area <= 0.0 || !f.is_simple() {
                return None;
            }
            if f.cycle.iter().any(|&v| matches!(m.kind(v), VertexKind::Node(_) | VertexKind::Detour(_))) {
                return None;
            }
            let poly: Vec<Point> = f.cycle.iter().map(|&v| m.pos(v)).collect();
            if m.vertex_ids().any(|v| !f.cycle.contains(&v) && strictly_inside(&poly, m.pos(v))) {
                return None;
            }
            if face_width(m, f) >= cfg.thin_width {
                return None;
            }
            let k = f.cycle.len();
            // longest edge, lowest id pair on ties
            let key = |i: usize| {
                let (u, v) = (f.cycle[i], f.cycle[(i + 1) % k]);
                (m.rail_length(u, v), u.min(v), u.max(v))
            };
            let i = (0..k).max_by(|&a, &b| {
                let (ka, kb) = (key(a), key(b));
                ka.0.total_cmp(&kb.0).then((kb.1, kb.2).cmp(&(ka.1, ka.2)))
            })?;
            let (x, y) = (f.cycle[i], f.cycle[(i + 1) % k]);
            // sides from x to y avoiding the removed edge
            let own = {
                let mut w = f.walk(y, x);
                w.reverse();
                w
            };
            let other = all.iter().find(|g| g.contains_directed(y, x)).map(|g| g.walk(x, y));
            let admissible = |p: &Vec<VertexId>| p[1..p.len() - 1].iter().all(|&v| !m.kind(v).is_node());
            let mut side = own;
            if let Some(o) = other.filter(|o| admissible(o) && !o[1..o.len() - 1].contains(&x)) {
                let (lo, ls) = (path_len(m, &o), path_len(m, &side));
                if lo < ls || (lo == ls && o < side) {
                    side = o;
                }
            }
            Some((x, y, side))
        });
        let Some((x, y, side)) = candidate else { break };
        rm.mesh.remove_rail(x, y);
        let back: Vec<VertexId> = side.iter().rev().copied().collect();
        for r in rm.routes.iter_mut() {
            let mut walk = Vec::with_capacity(r.chain.len() + side.len());
            for (i, &v) in r.chain.iter().enumerate() {
                let next = r.chain.get(i + 1).copied();
                if v == x && next == Some(y) {
                    walk.extend_from_slice(&side[..side.len() - 1]);
                } else if v == y && next == Some(x) {
                    walk.extend_from_slice(&back[..back.len() - 1]);
                } else {
                    walk.push(v);
                }
            }
            r.chain = loop_erase(&walk);
        }
    }
    prune(rm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::routing::{route_edges, total_ink};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn cfg(thin: f64) -> ModConfig {
        ModConfig { alpha: 45.0, beta: 0.01, thin_width: thin, median_iters: 5, port_radius: 0.1 }
    }

    /// Two nodes joined across a 10 x `h` sliver of junctions.
    fn sliver(h: f64) -> RoutedMesh {
        let mut m = Mesh::new(Rect::new(p(-1., 0.), p(11., 1.)));
        let a = m.add_vertex(p(-1., 0.), VertexKind::Node(0));
        let b = m.add_vertex(p(11., 0.), VertexKind::Node(1));
        let j1 = m.add_vertex(p(0., 0.), VertexKind::Junction);
        let j2 = m.add_vertex(p(10., 0.), VertexKind::Junction);
        let j3 = m.add_vertex(p(10., h), VertexKind::Junction);
        let j4 = m.add_vertex(p(0., h), VertexKind::Junction);
        for (u, v) in [(a, j1), (j1, j2), (j2, b), (j1, j4), (j4, j3), (j3, j2)] {
            m.add_rail(u, v);
        }
        let mut rm = route_edges(m, &[(0, 1)], 2).unwrap();
        // keep the upper side in use so that it survives pruning
        rm.routes.push(crate::routing::Route { edge: (0, 1), chain: vec![a, j1, j4, j3, j2, b] });
        rm
    }

    #[test]
    fn faces_of_a_square() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(1., 1.)));
        let ids: Vec<_> = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]
            .iter()
            .map(|&q| m.add_vertex(q, VertexKind::Junction))
            .collect();
        for i in 0..4 {
            m.add_rail(ids[i], ids[(i + 1) % 4]);
        }
        let fs = faces(&m);
        assert_eq!(fs.len(), 2);
        let areas: Vec<f64> = fs.iter().map(|f| f.area).collect();
        assert!(areas.contains(&1.0) && areas.contains(&-1.0));
        let inner = fs.iter().find(|f| f.area > 0.0).unwrap();
        assert_eq!(face_width(&m, inner), 1.0);
    }

    #[test]
    fn thin_sliver_loses_its_longest_rail() {
        let rm = sliver(0.05);
        let before = total_ink(&rm);
        let out = refine_faces(rm, &cfg(0.1));
        out.validate().unwrap();
        // (j1, j2) is the lower-id longest rail
        assert!(!out.mesh.has_rail(2, 3));
        assert_eq!(out.routes[0].chain, vec![0, 2, 5, 4, 3, 1]);
        assert!(total_ink(&out) < before);
    }

    #[test]
    fn wide_faces_are_kept() {
        let rm = sliver(0.5);
        let out = refine_faces(rm.clone(), &cfg(0.1));
        assert_eq!(out.mesh.rails(), rm.mesh.rails());
        assert_eq!(out.routes, rm.routes);
    }

    #[test]
    fn faces_on_nodes_are_kept() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(10., 0.05)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let b = m.add_vertex(p(10., 0.), VertexKind::Node(1));
        let c = m.add_vertex(p(10., 0.05), VertexKind::Junction);
        let d = m.add_vertex(p(0., 0.05), VertexKind::Junction);
        for (u, v) in [(a, b), (b, c), (c, d), (d, a)] {
            m.add_rail(u, v);
        }
        let mut rm = route_edges(m, &[(0, 1)], 2).unwrap();
        rm.routes.push(crate::routing::Route { edge: (0, 1), chain: vec![a, d, c, b] });
        let out = refine_faces(rm.clone(), &cfg(1.0));
        assert_eq!(out.mesh.rails(), rm.mesh.rails());
    }

    #[test]
    fn width_skips_adjacent_pieces() {
        // L-shaped hexagon: the two arms are 1 apart
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(3., 3.)));
        let ids: Vec<_> = [p(0., 0.), p(3., 0.), p(3., 1.), p(1., 1.), p(1., 3.), p(0., 3.)]
            .iter()
            .map(|&q| m.add_vertex(q, VertexKind::Junction))
            .collect();
        for i in 0..6 {
            m.add_rail(ids[i], ids[(i + 1) % 6]);
        }
        let inner = faces(&m).into_iter().find(|f| f.area > 0.0).unwrap();
        assert_eq!(face_width(&m, &inner), 1.0);
    }
}
