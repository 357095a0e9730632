//! Edge routing on the competition mesh and the local clean-up passes.

mod detour;
mod faces;
mod measure;
mod passes;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{dist_e, Point};
use crate::mesh::{dijkstra, Mesh, VertexId, VertexKind};
use crate::svg::SvgDoc;

pub use detour::{add_detours, max_port_radius};
pub use faces::{face_width, faces, refine_faces, Face};
pub use measure::{min_angle, min_angle_at, min_clearance, Limits};
pub(crate) use measure::{angle_ok, Neighborhood};
pub use passes::{median_pass, shortcut_pass};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("port radius {radius} must be below {limit}")]
    PortRadiusTooLarge { radius: f64, limit: f64 },
    #[error("port radius must be positive")]
    NonPositiveRadius,
    #[error("rail at node {0} is not axis-aligned")]
    ObliqueRail(usize),
    #[error("graph node {0} has no vertex in the mesh")]
    MissingNode(usize),
    #[error("no admissible path between nodes {0} and {1}")]
    Unreachable(usize, usize),
    #[error("route for edge ({0}, {1}) is invalid: {2}")]
    InvalidRoute(usize, usize, &'static str),
}

/// Tunables for the local modifications. Angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModConfig {
    pub alpha: f64,
    pub beta: f64,
    pub thin_width: f64,
    pub median_iters: usize,
    pub port_radius: f64,
}

impl ModConfig {
    /// Defaults scaled to the point set.
    pub fn for_points(points: &[Point]) -> ModConfig {
        let n = points.len();
        let mut dmin = f64::INFINITY;
        let mut nn_sum = 0.0;
        for (i, &p) in points.iter().enumerate() {
            let mut nn = f64::INFINITY;
            for (j, &q) in points.iter().enumerate() {
                if i != j {
                    nn = nn.min(dist_e(p, q));
                }
            }
            dmin = dmin.min(nn);
            nn_sum += nn;
        }
        if n < 2 {
            dmin = 1.0;
            nn_sum = n as f64;
        }
        ModConfig {
            alpha: 45.0,
            beta: 0.25 * dmin,
            thin_width: 0.1 * nn_sum / n.max(1) as f64,
            median_iters: 20,
            port_radius: 0.2 * dmin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    /// Graph edge as (lower, higher) node index.
    pub edge: (usize, usize),
    pub chain: Vec<VertexId>,
}

impl Route {
    pub fn length(&self, m: &Mesh) -> f64 {
        self.chain.windows(2).map(|w| m.rail_length(w[0], w[1])).sum()
    }

    pub fn polyline(&self, m: &Mesh) -> Vec<Point> {
        self.chain.iter().map(|&v| m.pos(v)).collect()
    }

    pub(crate) fn rails(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.chain.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

#[derive(Debug, Clone)]
pub struct RoutedMesh {
    pub mesh: Mesh,
    pub routes: Vec<Route>,
    /// Mesh vertex of each graph node.
    pub node_vertex: Vec<VertexId>,
}

impl RoutedMesh {
    /// Number of routes over each rail.
    pub fn usage(&self) -> BTreeMap<(VertexId, VertexId), usize> {
        let mut u: BTreeMap<_, usize> = self.mesh.rails().into_iter().map(|r| (r, 0)).collect();
        for r in &self.routes {
            for rail in r.rails() {
                *u.entry(rail).or_default() += 1;
            }
        }
        u
    }

    pub fn validate(&self) -> Result<(), RoutingError> {
        for r in &self.routes {
            let (a, b) = r.edge;
            let bad = |why| Err(RoutingError::InvalidRoute(a, b, why));
            if r.chain.len() < 2 {
                return bad("fewer than two vertices");
            }
            if r.chain[0] != self.node_vertex[a] || *r.chain.last().unwrap() != self.node_vertex[b] {
                return bad("endpoints differ from the edge's nodes");
            }
            if r.chain.windows(2).any(|w| !self.mesh.has_rail(w[0], w[1])) {
                return bad("consecutive vertices not joined by a rail");
            }
            if r.chain[1..r.chain.len() - 1].iter().any(|&v| self.mesh.kind(v).is_node()) {
                return bad("passes through a node");
            }
            let distinct: BTreeSet<_> = r.chain.iter().collect();
            if distinct.len() != r.chain.len() {
                return bad("repeats a vertex");
            }
        }
        Ok(())
    }

    /// Dump of the used rails, routes and node vertices.
    pub fn to_svg(&self) -> String {
        let mut doc = SvgDoc::new(self.mesh.boundary());
        let w = doc.rel(0.002);
        let usage = self.usage();
        for (&(a, b), &u) in &usage {
            let colour = if u > 0 { "#333" } else { "#ccc" };
            doc.line(self.mesh.pos(a), self.mesh.pos(b), colour, w * (1.0 + (u as f64).sqrt()));
        }
        let r = doc.rel(0.004);
        for v in self.mesh.vertex_ids() {
            match self.mesh.kind(v) {
                VertexKind::Node(i) => doc.circle(self.mesh.pos(v), r * 1.6, "#c0392b", Some(&i.to_string())),
                VertexKind::Detour(_) => doc.circle(self.mesh.pos(v), r * 0.5, "#2980b9", None),
                _ => doc.circle(self.mesh.pos(v), r * 0.5, "#222", None),
            }
        }
        doc.finish()
    }
}

/// Vertex id of every graph node, from the node tags in the mesh.
pub fn node_vertices(m: &Mesh, n: usize) -> Result<Vec<VertexId>, RoutingError> {
    let mut out = vec![usize::MAX; n];
    for v in m.vertex_ids() {
        if let VertexKind::Node(i) = m.kind(v) {
            if i < n {
                out[i] = v;
            }
        }
    }
    match out.iter().position(|&v| v == usize::MAX) {
        Some(i) => Err(RoutingError::MissingNode(i)),
        None => Ok(out),
    }
}

/// Shortest path from `s` to `t` whose interior avoids node vertices. Among
/// equally short paths the lexicographically smallest id sequence wins.
pub(crate) fn shortest_chain(m: &Mesh, s: VertexId, t: VertexId) -> Option<Vec<VertexId>> {
    let pass = |v: VertexId| !m.kind(v).is_node();
    let dist = dijkstra(m, t, pass);
    if !dist[s].is_finite() {
        return None;
    }
    let tol = 1e-12 * (1.0 + dist[s]);
    let mut chain = vec![s];
    let mut cur = s;
    while cur != t {
        let next = m
            .neighbors(cur)
            .filter(|&w| w == t || pass(w))
            .find(|&w| dist[w] < dist[cur] && (dist[w] + m.rail_length(cur, w) - dist[cur]).abs() <= tol)?;
        chain.push(next);
        cur = next;
    }
    Some(chain)
}

/// Route every edge as a node-avoiding shortest path.
pub fn route_edges(m: Mesh, edges: &[(usize, usize)], n: usize) -> Result<RoutedMesh, RoutingError> {
    let node_vertex = node_vertices(&m, n)?;
    let mut routes = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        let (a, b) = (a.min(b), a.max(b));
        let chain = shortest_chain(&m, node_vertex[a], node_vertex[b])
            .ok_or(RoutingError::Unreachable(a, b))?;
        routes.push(Route { edge: (a, b), chain });
    }
    Ok(RoutedMesh { mesh: m, routes, node_vertex })
}

/// Drop unused rails and the non-node vertices left isolated.
pub fn prune(mut rm: RoutedMesh) -> RoutedMesh {
    for (&(a, b), &u) in &rm.usage() {
        if u == 0 {
            rm.mesh.remove_rail(a, b);
        }
    }
    let isolated: Vec<VertexId> = rm
        .mesh
        .vertex_ids()
        .filter(|&v| rm.mesh.degree(v) == 0 && !rm.mesh.kind(v).is_node())
        .collect();
    for v in isolated {
        rm.mesh.remove_vertex(v);
    }
    rm
}

/// Total length of the distinct rails used by routes.
pub fn total_ink(rm: &RoutedMesh) -> f64 {
    rm.usage()
        .into_iter()
        .filter(|&(_, u)| u > 0)
        .map(|((a, b), _)| rm.mesh.rail_length(a, b))
        .sum()
}

/// Remove cycles from a walk, keeping the first visit of every vertex.
pub(crate) fn loop_erase(walk: &[VertexId]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(pos) = out.iter().position(|&u| u == v) {
            out.truncate(pos + 1);
        } else {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::mesh::{build_mesh_sim, dijkstra, TieRule};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// Three nodes on a horizontal line joined by straight rails.
    fn line_mesh() -> Mesh {
        let mut m = Mesh::new(Rect::new(p(0., -1.), p(4., 1.)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let w = m.add_vertex(p(2., 0.), VertexKind::Node(1));
        let b = m.add_vertex(p(4., 0.), VertexKind::Node(2));
        let c = m.add_vertex(p(0., 1.), VertexKind::Boundary);
        let d = m.add_vertex(p(4., 1.), VertexKind::Boundary);
        let e = m.add_vertex(p(2., 1.), VertexKind::Boundary);
        m.add_rail(a, w);
        m.add_rail(w, b);
        m.add_rail(a, c);
        m.add_rail(c, e);
        m.add_rail(e, d);
        m.add_rail(d, b);
        m.add_rail(w, e);
        m
    }

    #[test]
    fn foreign_node_is_avoided() {
        let m = line_mesh();
        let rm = route_edges(m.clone(), &[(0, 2)], 3).unwrap();
        let r = &rm.routes[0];
        assert!(r.chain.iter().all(|&v| v != 1));
        // unrestricted shortest path through the middle node is 4
        let free = dijkstra(&m, 0, |_| true)[2];
        assert_eq!(free, 4.0);
        assert_eq!(r.length(&rm.mesh), 6.0);
        assert!(r.length(&rm.mesh) > free);
        rm.validate().unwrap();
    }

    #[test]
    fn adjacent_nodes_use_their_rail() {
        let rm = route_edges(line_mesh(), &[(0, 1)], 3).unwrap();
        assert_eq!(rm.routes[0].chain, vec![0, 1]);
    }

    #[test]
    fn unreachable_endpoints_error() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(1., 1.)));
        m.add_vertex(p(0., 0.), VertexKind::Node(0));
        m.add_vertex(p(1., 1.), VertexKind::Node(1));
        assert_eq!(route_edges(m, &[(0, 1)], 2).unwrap_err(), RoutingError::Unreachable(0, 1));
    }

    #[test]
    fn equal_length_paths_break_ties_by_ids() {
        // two L-shaped paths of length 2 between opposite corners
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(1., 1.)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let b = m.add_vertex(p(1., 1.), VertexKind::Node(1));
        let hi = m.add_vertex(p(0., 1.), VertexKind::Boundary);
        let lo = m.add_vertex(p(1., 0.), VertexKind::Boundary);
        for (x, y) in [(a, hi), (hi, b), (a, lo), (lo, b)] {
            m.add_rail(x, y);
        }
        let rm = route_edges(m, &[(1, 0)], 2).unwrap();
        assert_eq!(rm.routes[0].chain, vec![a, hi.min(lo), b]);
    }

    #[test]
    fn prune_and_ink() {
        let rm = route_edges(line_mesh(), &[(0, 1), (1, 2)], 3).unwrap();
        let pruned = prune(rm);
        assert_eq!(pruned.mesh.rail_count(), 2);
        assert_eq!(pruned.mesh.vertex_count(), 3);
        assert_eq!(total_ink(&pruned), 4.0);
        pruned.validate().unwrap();

        let none = prune(route_edges(line_mesh(), &[], 3).unwrap());
        assert_eq!(none.mesh.rail_count(), 0);
        assert!(none.mesh.vertex_ids().all(|v| none.mesh.kind(v).is_node()));
    }

    #[test]
    fn shared_rail_counts_once() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(3., 1.)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let j = m.add_vertex(p(2., 0.), VertexKind::Junction);
        let b = m.add_vertex(p(3., 0.), VertexKind::Node(1));
        let c = m.add_vertex(p(2., 1.), VertexKind::Node(2));
        m.add_rail(a, j);
        m.add_rail(j, b);
        m.add_rail(j, c);
        let rm = route_edges(m, &[(0, 1), (0, 2)], 3).unwrap();
        assert_eq!(rm.usage()[&(a, j)], 2);
        assert_eq!(total_ink(&rm), 4.0);
    }

    #[test]
    fn loop_erasure() {
        assert_eq!(loop_erase(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(loop_erase(&[1, 2, 3, 4]), vec![1, 2, 3, 4]);
        assert_eq!(loop_erase(&[1, 2, 1, 3]), vec![1, 3]);
    }

    #[test]
    fn routes_on_detoured_random_mesh() {
        let pts = [p(0., 0.), p(4., 2.), p(1., 3.), p(3.5, 0.5)];
        let m = build_mesh_sim(&pts, TieRule::default()).unwrap();
        let r = 0.9 * max_port_radius(&m).unwrap();
        let m = add_detours(&m, r).unwrap();
        let rm = route_edges(m, &[(0, 1), (2, 3), (0, 2)], 4).unwrap();
        rm.validate().unwrap();
        let pruned = prune(rm);
        pruned.validate().unwrap();
        assert!(crate::mesh::find_crossing(&pruned.mesh).is_none());
    }
}
