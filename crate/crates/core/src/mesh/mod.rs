//! Competition mesh: four axis-aligned rays per point, grown at equal speed,
//! each stopping at the first ray (or the bounding rectangle) it meets.
//!
//! [`build_mesh_sim`] runs the event simulation and is the reference
//! construction. [`build_mesh_fast`] is the four-phase sweep construction.
//! The same [`Mesh`] type is later edited in place by edge routing.

mod analysis;
mod cones;
mod fast;
mod sanitize;
mod sim;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{dist_e, Point, Rect, Segment};
use crate::svg::SvgDoc;

pub use analysis::{find_crossing, monotone_path_witness, stretch_factor, Quadrant};
pub(crate) use analysis::dijkstra;
pub use cones::{cone_neighbors, cone_of, ConeNeighborTable};
pub use fast::{build_mesh_fast, delta_y};
pub use sanitize::{in_general_position, sanitize};
pub use sim::{build_mesh_sim, simulate_rays, RayDir, RayOutcome, StopCause, TieRule};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("points are not in general position (shared x or y coordinate)")]
    NotGeneralPosition,
    #[error("all points share the same y coordinate")]
    FlatY,
    #[error("mesh is disconnected: no path between node vertices {0} and {1}")]
    Disconnected(VertexId, VertexId),
    #[error("vertex {0} is not a node vertex")]
    NotANode(VertexId),
    #[error("no monotone path from vertex {0} in quadrant {1:?}")]
    NoMonotonePath(VertexId, Quadrant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// Graph node, by index into the input graph.
    Node(usize),
    Junction,
    /// Ray end on the bounding rectangle.
    Boundary,
    /// Vertex of the detour polygon around the given node.
    Detour(usize),
}

impl VertexKind {
    pub fn is_node(&self) -> bool {
        matches!(self, VertexKind::Node(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub pos: Point,
    pub kind: VertexKind,
}

/// Planar straight-line graph over nodes and junctions.
///
/// Vertex ids are stable: removing a vertex leaves a hole so ids held by
/// routes stay valid. Node `i` of the input graph is always vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Option<Vertex>>,
    adj: Vec<BTreeSet<VertexId>>,
    boundary: Rect,
}

impl Mesh {
    pub fn new(boundary: Rect) -> Self {
        Mesh { vertices: Vec::new(), adj: Vec::new(), boundary }
    }

    pub fn boundary(&self) -> Rect {
        self.boundary
    }

    pub fn add_vertex(&mut self, pos: Point, kind: VertexKind) -> VertexId {
        self.vertices.push(Some(Vertex { pos, kind }));
        self.adj.push(BTreeSet::new());
        self.vertices.len() - 1
    }

    /// Removes an isolated vertex.
    pub fn remove_vertex(&mut self, v: VertexId) {
        assert!(self.adj[v].is_empty(), "removing vertex {v} with rails attached");
        self.vertices[v] = None;
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.get(v).is_some_and(|x| x.is_some())
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        self.vertices[v].as_ref().expect("live vertex")
    }

    pub fn pos(&self, v: VertexId) -> Point {
        self.vertex(v).pos
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.vertex(v).kind
    }

    pub fn set_pos(&mut self, v: VertexId, p: Point) {
        self.vertices[v].as_mut().expect("live vertex").pos = p;
    }

    pub fn set_kind(&mut self, v: VertexId, k: VertexKind) {
        self.vertices[v].as_mut().expect("live vertex").kind = k;
    }

    /// Upper bound of vertex ids (including removed slots).
    pub fn id_bound(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().enumerate().filter_map(|(i, v)| v.as_ref().map(|_| i))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids().count()
    }

    pub fn node_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_ids().filter(|&v| self.kind(v).is_node())
    }

    /// Number of vertices that are not graph nodes.
    pub fn junction_count(&self) -> usize {
        self.vertex_ids().filter(|&v| !self.kind(v).is_node()).count()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_rail(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(&b))
    }

    pub fn add_rail(&mut self, a: VertexId, b: VertexId) {
        assert_ne!(a, b, "rail endpoints must differ");
        assert!(self.contains_vertex(a) && self.contains_vertex(b));
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn remove_rail(&mut self, a: VertexId, b: VertexId) {
        self.adj[a].remove(&b);
        self.adj[b].remove(&a);
    }

    /// Every rail once, as `(lo, hi)` in ascending order.
    pub fn rails(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in self.vertex_ids() {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn rail_count(&self) -> usize {
        self.vertex_ids().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    pub fn rail_length(&self, a: VertexId, b: VertexId) -> f64 {
        dist_e(self.pos(a), self.pos(b))
    }

    pub fn segment(&self, a: VertexId, b: VertexId) -> Segment {
        Segment::new(self.pos(a), self.pos(b))
    }

    pub fn total_length(&self) -> f64 {
        self.rails().iter().map(|&(a, b)| self.rail_length(a, b)).sum()
    }

    /// Number of maximal straight segments: chains of rails that continue
    /// straight through their shared vertices count once.
    pub fn maximal_rail_count(&self) -> usize {
        let rails = self.rails();
        // a rail continues straight at v when v has an opposite rail
        let straight_partner = |v: VertexId, from: VertexId| -> Option<VertexId> {
            let d = self.pos(from) - self.pos(v);
            self.neighbors(v).find(|&w| {
                w != from && {
                    let e = self.pos(w) - self.pos(v);
                    d.cross(e) == 0.0 && d.dot(e) < 0.0
                }
            })
        };
        // every straight chain has exactly two ends
        let mut ends = 0usize;
        for &(a, b) in &rails {
            if straight_partner(a, b).is_none() {
                ends += 1;
            }
            if straight_partner(b, a).is_none() {
                ends += 1;
            }
        }
        ends / 2
    }

    pub fn to_dump(&self) -> MeshDump {
        let ids: Vec<VertexId> = self.vertex_ids().collect();
        let mut remap = HashMap::new();
        let vertices = ids
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                remap.insert(v, i);
                let vx = self.vertex(v);
                DumpVertex { x: vx.pos.x, y: vx.pos.y, kind: vx.kind }
            })
            .collect();
        let rails = self.rails().into_iter().map(|(a, b)| [remap[&a], remap[&b]]).collect();
        MeshDump { boundary: self.boundary, vertices, rails }
    }

    pub fn to_svg(&self) -> String {
        let mut doc = SvgDoc::new(self.boundary);
        let w = doc.rel(0.002);
        for (a, b) in self.rails() {
            doc.line(self.pos(a), self.pos(b), "#555", w);
        }
        let r = doc.rel(0.004);
        for v in self.vertex_ids() {
            let (fill, rr) = match self.kind(v) {
                VertexKind::Node(_) => ("#c0392b", r * 1.6),
                VertexKind::Detour(_) => ("#2980b9", r * 0.6),
                _ => ("#222", r * 0.6),
            };
            doc.circle(self.pos(v), rr, fill, None);
        }
        doc.finish()
    }

    /// Assemble a mesh from axis-aligned ray segments. Every segment is split
    /// at each vertex lying on it; vertex `i` is `points[i]`.
    pub(crate) fn from_ray_segments(
        points: &[Point],
        segments: &[(usize, Point)],
        boundary: Rect,
    ) -> Mesh {
        let mut mesh = Mesh::new(boundary);
        let mut by_key: HashMap<(u64, u64), VertexId> = HashMap::new();
        for (i, &p) in points.iter().enumerate() {
            let id = mesh.add_vertex(p, VertexKind::Node(i));
            by_key.insert(p.key(), id);
        }
        for &(_, end) in segments {
            by_key.entry(end.key()).or_insert_with(|| {
                let kind =
                    if boundary.on_boundary(end) { VertexKind::Boundary } else { VertexKind::Junction };
                mesh.add_vertex(end, kind)
            });
        }
        let mut by_x: HashMap<u64, Vec<VertexId>> = HashMap::new();
        let mut by_y: HashMap<u64, Vec<VertexId>> = HashMap::new();
        for v in mesh.vertex_ids() {
            let (kx, ky) = mesh.pos(v).key();
            by_x.entry(kx).or_default().push(v);
            by_y.entry(ky).or_default().push(v);
        }
        let mut rails = BTreeSet::new();
        for &(src, end) in segments {
            let start = points[src];
            let (kx, ky) = start.key();
            let mut on: Vec<(f64, VertexId)> = if start.x == end.x {
                let (lo, hi) = (start.y.min(end.y), start.y.max(end.y));
                by_x[&kx]
                    .iter()
                    .map(|&v| (mesh.pos(v).y, v))
                    .filter(|&(y, _)| y >= lo && y <= hi)
                    .collect()
            } else {
                debug_assert_eq!(start.y, end.y, "ray segments are axis-aligned");
                let (lo, hi) = (start.x.min(end.x), start.x.max(end.x));
                by_y[&ky]
                    .iter()
                    .map(|&v| (mesh.pos(v).x, v))
                    .filter(|&(x, _)| x >= lo && x <= hi)
                    .collect()
            };
            on.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in on.windows(2) {
                let (a, b) = (w[0].1, w[1].1);
                rails.insert((a.min(b), a.max(b)));
            }
        }
        for (a, b) in rails {
            mesh.add_rail(a, b);
        }
        mesh
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpVertex {
    pub x: f64,
    pub y: f64,
    pub kind: VertexKind,
}

/// Serializable snapshot of a mesh with compacted vertex ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDump {
    pub boundary: Rect,
    pub vertices: Vec<DumpVertex>,
    pub rails: Vec<[usize; 2]>,
}

impl MeshDump {
    pub fn to_mesh(&self) -> Mesh {
        let mut m = Mesh::new(self.boundary);
        for v in &self.vertices {
            m.add_vertex(Point::new(v.x, v.y), v.kind);
        }
        for &[a, b] in &self.rails {
            m.add_rail(a, b);
        }
        m
    }
}
