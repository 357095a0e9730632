//! Octagonal detour polygons around nodes.

use std::f64::consts::FRAC_1_SQRT_2;

use super::RoutingError;
use crate::geom::{dist_e, point_seg_dist, Point};
use crate::mesh::{Mesh, VertexId, VertexKind};

/// Strict upper bound on the octagon radius: half the closest node pair, half
/// the shortest rail at a node, and the distance from any node to a rail not
/// incident to it.
pub fn max_port_radius(m: &Mesh) -> Result<f64, RoutingError> {
    let nodes: Vec<VertexId> = m.node_vertices().collect();
    let mut bound = f64::INFINITY;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            bound = bound.min(0.5 * dist_e(m.pos(a), m.pos(b)));
        }
        for w in m.neighbors(a) {
            bound = bound.min(0.5 * m.rail_length(a, w));
        }
    }
    for (x, y) in m.rails() {
        let seg = m.segment(x, y);
        for &c in &nodes {
            if c != x && c != y {
                bound = bound.min(point_seg_dist(m.pos(c), &seg));
            }
        }
    }
    Ok(bound)
}

fn octagon_offset(k: usize, r: f64) -> Point {
    let d = r * FRAC_1_SQRT_2;
    match k {
        0 => Point::new(r, 0.0),
        1 => Point::new(d, d),
        2 => Point::new(0.0, r),
        3 => Point::new(-d, d),
        4 => Point::new(-r, 0.0),
        5 => Point::new(-d, -d),
        6 => Point::new(0.0, -r),
        _ => Point::new(d, -d),
    }
}

/// Surround each node by a regular octagon of radius `r` with corners on the
/// axes and diagonals. Axis rails are cut where they cross the octagon and the
/// node keeps only the spokes to those ports.
pub fn add_detours(m: &Mesh, r: f64) -> Result<Mesh, RoutingError> {
    if !(r > 0.0) {
        return Err(RoutingError::NonPositiveRadius);
    }
    let limit = max_port_radius(m)?;
    if r >= limit {
        return Err(RoutingError::PortRadiusTooLarge { radius: r, limit });
    }
    let mut out = m.clone();
    let nodes: Vec<VertexId> = m.node_vertices().collect();
    for c in nodes {
        let VertexKind::Node(i) = m.kind(c) else { unreachable!() };
        let centre = m.pos(c);
        let mut slots: [Option<VertexId>; 8] = [None; 8];
        let around: Vec<VertexId> = out.neighbors(c).collect();
        for w in around {
            let d = out.pos(w) - centre;
            let k = match (d.x, d.y) {
                (x, y) if y == 0.0 && x > 0.0 => 0,
                (x, y) if x == 0.0 && y > 0.0 => 2,
                (x, y) if y == 0.0 && x < 0.0 => 4,
                (x, y) if x == 0.0 && y < 0.0 => 6,
                _ => return Err(RoutingError::ObliqueRail(i)),
            };
            let port = out.add_vertex(centre + octagon_offset(k, r), VertexKind::Detour(i));
            out.remove_rail(c, w);
            out.add_rail(c, port);
            out.add_rail(port, w);
            slots[k] = Some(port);
        }
        let ring: Vec<VertexId> = (0..8)
            .map(|k| {
                slots[k].unwrap_or_else(|| out.add_vertex(centre + octagon_offset(k, r), VertexKind::Detour(i)))
            })
            .collect();
        for k in 0..8 {
            out.add_rail(ring[k], ring[(k + 1) % 8]);
        }
    }
    Ok(out)
}
