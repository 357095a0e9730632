//! Angular resolution and vertex-rail clearance, globally and locally.

use serde::{Deserialize, Serialize};

use super::ModConfig;
use crate::geom::{dist_e, point_seg_dist, seg_intersect, Point};
use crate::mesh::{Mesh, VertexId};

const ANGLE_SLACK: f64 = 1e-10;
const CLEARANCE_SLACK: f64 = 1e-12;

/// Thresholds the modification passes maintain. Angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub alpha: f64,
    pub beta: f64,
}

impl Limits {
    /// Requested limits, lowered to what the mesh already has so that the
    /// starting state is admissible.
    pub fn effective(m: &Mesh, cfg: &ModConfig) -> Limits {
        Limits { alpha: cfg.alpha.min(min_angle(m)), beta: cfg.beta.min(min_clearance(m)) }
    }
}

/// Smallest angle between angularly consecutive rails at `v`, in degrees.
/// Infinite below degree 2.
pub fn min_angle_at(m: &Mesh, v: VertexId) -> f64 {
    let c = m.pos(v);
    let mut dirs: Vec<f64> = m
        .neighbors(v)
        .map(|w| {
            let d = m.pos(w) - c;
            d.y.atan2(d.x).to_degrees()
        })
        .collect();
    if dirs.len() < 2 {
        return f64::INFINITY;
    }
    dirs.sort_by(f64::total_cmp);
    let wrap = 360.0 - (dirs[dirs.len() - 1] - dirs[0]);
    dirs.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
}

pub fn min_angle(m: &Mesh) -> f64 {
    m.vertex_ids().map(|v| min_angle_at(m, v)).fold(f64::INFINITY, f64::min)
}

/// Smallest distance between a vertex and a rail not incident to it.
pub fn min_clearance(m: &Mesh) -> f64 {
    let mut rails: Vec<(f64, f64, VertexId, VertexId)> = m
        .rails()
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (m.pos(a), m.pos(b));
            (pa.x.min(pb.x), pa.x.max(pb.x), a, b)
        })
        .collect();
    rails.sort_by(|l, r| l.0.total_cmp(&r.0));
    let mut best = f64::INFINITY;
    for v in m.vertex_ids() {
        let p = m.pos(v);
        for &(lo, hi, a, b) in &rails {
            if lo > p.x + best {
                break;
            }
            if hi < p.x - best || a == v || b == v {
                continue;
            }
            best = best.min(point_seg_dist(p, &m.segment(a, b)));
        }
    }
    best
}

/// Vertices and rails near a region, for local re-checks.
pub(crate) struct Neighborhood {
    vertices: Vec<VertexId>,
    rails: Vec<(VertexId, VertexId)>,
}

impl Neighborhood {
    pub(crate) fn around(m: &Mesh, centre: Point, radius: f64) -> Neighborhood {
        let vertices = m.vertex_ids().filter(|&v| dist_e(m.pos(v), centre) <= radius).collect();
        let rails = m
            .rails()
            .into_iter()
            .filter(|&(a, b)| point_seg_dist(centre, &m.segment(a, b)) <= radius)
            .collect();
        Neighborhood { vertices, rails }
    }

    /// Vertex `v` keeps clearance from nearby rails not incident to it.
    pub(crate) fn point_ok(&self, m: &Mesh, v: VertexId, lim: &Limits) -> bool {
        let p = m.pos(v);
        let need = lim.beta * (1.0 - CLEARANCE_SLACK);
        self.rails
            .iter()
            .filter(|&&(a, b)| a != v && b != v && m.has_rail(a, b))
            .all(|&(a, b)| point_seg_dist(p, &m.segment(a, b)) >= need)
    }

    /// Rail `(a, b)` keeps clearance from nearby vertices and crosses no nearby rail.
    pub(crate) fn rail_ok(&self, m: &Mesh, a: VertexId, b: VertexId, lim: &Limits) -> bool {
        let seg = m.segment(a, b);
        let need = lim.beta * (1.0 - CLEARANCE_SLACK);
        let clear = self
            .vertices
            .iter()
            .filter(|&&w| w != a && w != b && m.contains_vertex(w))
            .filter(|&&w| m.degree(w) > 0 || m.kind(w).is_node())
            .all(|&w| point_seg_dist(m.pos(w), &seg) >= need);
        if !clear {
            return false;
        }
        self.rails.iter().filter(|&&(c, d)| (c, d) != (a.min(b), a.max(b)) && m.has_rail(c, d)).all(|&(c, d)| {
            let shared = c == a || c == b || d == a || d == b;
            match seg_intersect(&seg, &m.segment(c, d)) {
                Err(_) => false,
                Ok(Some(_)) => shared,
                Ok(None) => true,
            }
        })
    }
}

pub(crate) fn angle_ok(m: &Mesh, v: VertexId, lim: &Limits) -> bool {
    min_angle_at(m, v) >= lim.alpha - ANGLE_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::mesh::VertexKind;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn angles() {
        let mut m = Mesh::new(Rect::new(p(-1., -1.), p(1., 1.)));
        let c = m.add_vertex(p(0., 0.), VertexKind::Junction);
        let a = m.add_vertex(p(1., 0.), VertexKind::Boundary);
        assert_eq!(min_angle_at(&m, c), f64::INFINITY);
        m.add_rail(c, a);
        let b = m.add_vertex(p(-1., 0.), VertexKind::Boundary);
        m.add_rail(c, b);
        assert!((min_angle_at(&m, c) - 180.0).abs() < 1e-12);
        let d = m.add_vertex(p(1., 1.), VertexKind::Boundary);
        m.add_rail(c, d);
        assert!((min_angle_at(&m, c) - 45.0).abs() < 1e-12);
        assert!((min_angle(&m) - 45.0).abs() < 1e-12);
    }

    #[test]
    fn clearance_matches_brute_force() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(4., 4.)));
        let ids: Vec<_> = [p(0., 0.), p(4., 0.), p(2., 0.5), p(2., 3.), p(0., 4.)]
            .iter()
            .map(|&q| m.add_vertex(q, VertexKind::Junction))
            .collect();
        m.add_rail(ids[0], ids[1]);
        m.add_rail(ids[2], ids[3]);
        m.add_rail(ids[3], ids[4]);
        let mut brute = f64::INFINITY;
        for v in m.vertex_ids() {
            for (a, b) in m.rails() {
                if v != a && v != b {
                    brute = brute.min(point_seg_dist(m.pos(v), &m.segment(a, b)));
                }
            }
        }
        assert_eq!(min_clearance(&m), brute);
        assert_eq!(brute, 0.5);
    }
}
