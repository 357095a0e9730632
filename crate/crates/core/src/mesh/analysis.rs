//! Planarity check, monotone witness paths and stretch factor.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError, VertexId};
use crate::geom::{dist_e, seg_intersect, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    /// +x, +y
    First,
    /// -x, +y
    Second,
    /// -x, -y
    Third,
    /// +x, -y
    Fourth,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] =
        [Quadrant::First, Quadrant::Second, Quadrant::Third, Quadrant::Fourth];

    pub fn signs(self) -> (f64, f64) {
        match self {
            Quadrant::First => (1.0, 1.0),
            Quadrant::Second => (-1.0, 1.0),
            Quadrant::Third => (-1.0, -1.0),
            Quadrant::Fourth => (1.0, -1.0),
        }
    }

    /// Whether `to` is reachable from `from` moving only in this quadrant's directions.
    pub fn admits(self, from: Point, to: Point) -> bool {
        let (sx, sy) = self.signs();
        (to.x - from.x) * sx >= 0.0 && (to.y - from.y) * sy >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dist(pub f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dist {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Single-source shortest path lengths, indexed by vertex id. Vertices for
/// which `pass` is false can be reached but not passed through.
pub(crate) fn dijkstra(mesh: &Mesh, src: VertexId, pass: impl Fn(VertexId) -> bool) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; mesh.id_bound()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Reverse((Dist(0.0), src)));
    while let Some(Reverse((Dist(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        if v != src && !pass(v) {
            continue;
        }
        for w in mesh.neighbors(v) {
            let nd = d + mesh.rail_length(v, w);
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((Dist(nd), w)));
            }
        }
    }
    dist
}

/// First pair of rails that meet anywhere other than a shared endpoint.
pub fn find_crossing(mesh: &Mesh) -> Option<((VertexId, VertexId), (VertexId, VertexId))> {
    let mut rails: Vec<(f64, f64, (VertexId, VertexId))> = mesh
        .rails()
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (mesh.pos(a), mesh.pos(b));
            (pa.x.min(pb.x), pa.x.max(pb.x), (a, b))
        })
        .collect();
    rails.sort_by(|l, r| l.0.total_cmp(&r.0));
    for i in 0..rails.len() {
        let (_, hi, r1) = rails[i];
        let s1 = mesh.segment(r1.0, r1.1);
        for &(lo2, _, r2) in &rails[i + 1..] {
            if lo2 > hi {
                break;
            }
            let shared = r1.0 == r2.0 || r1.0 == r2.1 || r1.1 == r2.0 || r1.1 == r2.1;
            match seg_intersect(&s1, &mesh.segment(r2.0, r2.1)) {
                Err(_) => return Some((r1, r2)),
                Ok(Some(_)) if !shared => return Some((r1, r2)),
                _ => {}
            }
        }
    }
    None
}

/// An xy-monotone path from `node` into `quadrant` that ends on the bounding
/// rectangle. A node already on a side the quadrant faces yields a single point.
pub fn monotone_path_witness(
    mesh: &Mesh,
    node: VertexId,
    quadrant: Quadrant,
) -> Result<Vec<Point>, MeshError> {
    if !mesh.contains_vertex(node) || !mesh.kind(node).is_node() {
        return Err(MeshError::NotANode(node));
    }
    let r = mesh.boundary();
    let start = mesh.pos(node);
    let (sx, sy) = quadrant.signs();
    let faces = (sx > 0.0 && start.x == r.max.x)
        || (sx < 0.0 && start.x == r.min.x)
        || (sy > 0.0 && start.y == r.max.y)
        || (sy < 0.0 && start.y == r.min.y);
    if faces {
        return Ok(vec![start]);
    }
    let mut dead: HashSet<VertexId> = HashSet::new();
    let mut path = vec![node];
    // iterative DFS; each frame keeps its remaining candidate list
    let mut stack: Vec<Vec<VertexId>> = vec![candidates(mesh, node, quadrant)];
    while let Some(frame) = stack.last_mut() {
        match frame.pop() {
            Some(next) => {
                if dead.contains(&next) || path.contains(&next) {
                    continue;
                }
                path.push(next);
                if r.on_boundary(mesh.pos(next)) {
                    return Ok(path.into_iter().map(|v| mesh.pos(v)).collect());
                }
                stack.push(candidates(mesh, next, quadrant));
            }
            None => {
                stack.pop();
                if let Some(v) = path.pop() {
                    dead.insert(v);
                }
            }
        }
    }
    Err(MeshError::NoMonotonePath(node, quadrant))
}

fn candidates(mesh: &Mesh, v: VertexId, q: Quadrant) -> Vec<VertexId> {
    let p = mesh.pos(v);
    let mut c: Vec<VertexId> = mesh.neighbors(v).filter(|&w| q.admits(p, mesh.pos(w))).collect();
    c.reverse();
    c
}

/// Largest ratio of shortest mesh path to Euclidean distance over node pairs.
pub fn stretch_factor(mesh: &Mesh) -> Result<f64, MeshError> {
    let nodes: Vec<VertexId> = mesh.node_vertices().collect();
    let mut worst = 0.0f64;
    for (i, &s) in nodes.iter().enumerate() {
        let dist = dijkstra(mesh, s, |_| true);
        for &t in &nodes[i + 1..] {
            if !dist[t].is_finite() {
                return Err(MeshError::Disconnected(s, t));
            }
            worst = worst.max(dist[t] / dist_e(mesh.pos(s), mesh.pos(t)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::mesh::{build_mesh_sim, TieRule, VertexKind};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn two_point() -> Mesh {
        build_mesh_sim(&[p(0., 0.), p(4., 2.)], TieRule::default()).unwrap()
    }

    #[test]
    fn two_point_stretch() {
        let s = stretch_factor(&two_point()).unwrap();
        assert!((s - 6.0 / 20f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_node_stretch_is_zero() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(1., 1.)));
        m.add_vertex(p(0.5, 0.5), VertexKind::Node(0));
        assert_eq!(stretch_factor(&m), Ok(0.0));
    }

    #[test]
    fn disconnected_is_an_error() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(1., 1.)));
        m.add_vertex(p(0., 0.), VertexKind::Node(0));
        m.add_vertex(p(1., 1.), VertexKind::Node(1));
        assert_eq!(stretch_factor(&m), Err(MeshError::Disconnected(0, 1)));
    }

    #[test]
    fn witnesses_on_two_point_mesh() {
        let m = two_point();
        // (0,0) is the lower-left corner: quadrants 2, 3, 4 face outwards
        for q in [Quadrant::Second, Quadrant::Third, Quadrant::Fourth] {
            assert_eq!(monotone_path_witness(&m, 0, q).unwrap(), vec![p(0., 0.)]);
        }
        let w = monotone_path_witness(&m, 0, Quadrant::First).unwrap();
        assert_eq!(w[0], p(0., 0.));
        assert!(w.len() >= 2);
        assert!(m.boundary().on_boundary(*w.last().unwrap()));
        assert_eq!(monotone_path_witness(&m, 2, Quadrant::First), Err(MeshError::NotANode(2)));
    }

    #[test]
    fn crossing_detection() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(2., 2.)));
        let a = m.add_vertex(p(0., 1.), VertexKind::Boundary);
        let b = m.add_vertex(p(2., 1.), VertexKind::Boundary);
        let c = m.add_vertex(p(1., 0.), VertexKind::Boundary);
        let d = m.add_vertex(p(1., 2.), VertexKind::Boundary);
        m.add_rail(a, b);
        assert!(find_crossing(&m).is_none());
        m.add_rail(c, d);
        assert!(find_crossing(&m).is_some());
        m.remove_rail(c, d);
        let e = m.add_vertex(p(1., 1.), VertexKind::Junction);
        m.add_rail(a, e);
        // collinear overlap with a shared endpoint
        assert!(find_crossing(&m).is_some());
    }

    #[test]
    fn two_point_mesh_is_planar() {
        assert!(find_crossing(&two_point()).is_none());
    }
}
