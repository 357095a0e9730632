//! Junction moves towards the geometric median and degree-2 shortcuts.

use super::measure::{angle_ok, Neighborhood};
use super::{Limits, ModConfig, RoutedMesh};
use crate::geom::{dist_e, geometric_median, median_cost, Point};
use crate::mesh::{Mesh, VertexId, VertexKind};

const SEARCH_STEPS: usize = 32;

fn movable(k: VertexKind) -> bool {
    matches!(k, VertexKind::Junction | VertexKind::Boundary)
}

fn placement_ok(m: &Mesh, v: VertexId, nb: &Neighborhood, lim: &Limits) -> bool {
    if !angle_ok(m, v, lim) || !nb.point_ok(m, v, lim) {
        return false;
    }
    m.neighbors(v).all(|u| angle_ok(m, u, lim) && nb.rail_ok(m, v, u, lim))
}

/// Move junctions towards the geometric median of their neighbours, as far
/// along the straight line as the limits allow.
pub fn median_pass(mut rm: RoutedMesh, cfg: &ModConfig, lim: &Limits) -> RoutedMesh {
    let diag = rm.mesh.boundary().diagonal().max(f64::MIN_POSITIVE);
    let ids: Vec<VertexId> = rm.mesh.vertex_ids().collect();
    for _ in 0..cfg.median_iters {
        let mut moved = 0.0f64;
        for &v in &ids {
            let m = &mut rm.mesh;
            if !m.contains_vertex(v) || !movable(m.kind(v)) || m.degree(v) < 2 {
                continue;
            }
            let around: Vec<Point> = m.neighbors(v).map(|u| m.pos(u)).collect();
            let cur = m.pos(v);
            let Ok(target) = geometric_median(&around, 1e-12 * diag, 500) else { continue };
            let (c0, c1) = (median_cost(&around, cur), median_cost(&around, target));
            if !(c1 < c0 * (1.0 - 1e-12)) {
                continue;
            }
            let step = dist_e(cur, target);
            let reach = around.iter().map(|&q| dist_e(cur, q)).fold(0.0, f64::max) + step + lim.beta;
            let nb = Neighborhood::around(m, cur, reach);
            let try_at = |m: &mut Mesh, t: f64| {
                m.set_pos(v, cur.lerp(target, t));
                placement_ok(m, v, &nb, lim)
            };
            let t = if try_at(m, 1.0) {
                1.0
            } else {
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..SEARCH_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if try_at(m, mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            };
            m.set_pos(v, cur.lerp(target, t));
            moved = moved.max(dist_e(cur, m.pos(v)));
        }
        if moved < 1e-6 * diag {
            break;
        }
    }
    rm
}

/// Replace degree-2 junctions by the chord between their neighbours when the
/// chord keeps the limits. Detour vertices go only when they are straight.
pub fn shortcut_pass(mut rm: RoutedMesh, lim: &Limits) -> RoutedMesh {
    loop {
        let mut changed = false;
        let ids: Vec<VertexId> = rm.mesh.vertex_ids().collect();
        for v in ids {
            let m = &mut rm.mesh;
            if !m.contains_vertex(v) || m.degree(v) != 2 {
                continue;
            }
            let nbrs: Vec<VertexId> = m.neighbors(v).collect();
            let (a, b) = (nbrs[0], nbrs[1]);
            let (da, db) = (m.pos(a) - m.pos(v), m.pos(b) - m.pos(v));
            let straight = da.cross(db) == 0.0 && da.dot(db) < 0.0;
            let eligible = match m.kind(v) {
                VertexKind::Junction | VertexKind::Boundary => true,
                VertexKind::Detour(_) => straight,
                VertexKind::Node(_) => false,
            };
            if !eligible {
                continue;
            }
            let existed = m.has_rail(a, b);
            m.remove_rail(a, v);
            m.remove_rail(v, b);
            if !existed {
                m.add_rail(a, b);
            }
            let ok = existed || {
                let nb = Neighborhood::around(m, m.pos(a), dist_e(m.pos(a), m.pos(b)) + lim.beta);
                nb.rail_ok(m, a, b, lim)
            };
            let ok = ok && angle_ok(m, a, lim) && angle_ok(m, b, lim);
            if !ok {
                if !existed {
                    m.remove_rail(a, b);
                }
                m.add_rail(a, v);
                m.add_rail(v, b);
                continue;
            }
            m.remove_vertex(v);
            for r in rm.routes.iter_mut() {
                r.chain.retain(|&w| w != v);
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    rm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::routing::{min_angle, route_edges, total_ink};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn cfg() -> ModConfig {
        ModConfig { alpha: 45.0, beta: 0.05, thin_width: 0.0, median_iters: 20, port_radius: 0.1 }
    }

    fn star(centre: Point, leaves: &[Point]) -> RoutedMesh {
        let mut m = Mesh::new(Rect::new(p(-2., -2.), p(2., 2.)));
        let ids: Vec<VertexId> =
            leaves.iter().enumerate().map(|(i, &q)| m.add_vertex(q, VertexKind::Node(i))).collect();
        let c = m.add_vertex(centre, VertexKind::Junction);
        for &i in &ids {
            m.add_rail(c, i);
        }
        let edges: Vec<(usize, usize)> = (1..leaves.len()).map(|i| (0, i)).collect();
        route_edges(m, &edges, leaves.len()).unwrap()
    }

    #[test]
    fn centred_junction_stays() {
        let rm = star(p(0., 0.), &[p(1., 1.), p(-1., 1.), p(-1., -1.), p(1., -1.)]);
        let out = median_pass(rm.clone(), &cfg(), &Limits { alpha: 45.0, beta: 0.05 });
        assert_eq!(out.mesh.pos(4), p(0., 0.));
    }

    #[test]
    fn t_junction_moves_and_saves_ink() {
        let rm = star(p(0., 0.), &[p(-1., 0.), p(1., 0.), p(0.3, 1.)]);
        let before = total_ink(&rm);
        let lim = Limits { alpha: 10.0, beta: 0.05 };
        let out = median_pass(rm, &cfg(), &lim);
        assert!(total_ink(&out) < before);
        assert!(min_angle(&out.mesh) >= lim.alpha - 1e-9);
        out.validate().unwrap();
    }

    #[test]
    fn alpha_blocks_move_at_last_feasible_point() {
        // v heads for the Fermat point (0, 1/sqrt 3); the angle at A between
        // A-v and A-D shrinks on the way and reaches 30 degrees at y = tan 40
        let mut m = Mesh::new(Rect::new(p(-1., 0.), p(1., 3.)));
        let a = m.add_vertex(p(-1., 0.), VertexKind::Node(0));
        let b = m.add_vertex(p(1., 0.), VertexKind::Node(1));
        let c = m.add_vertex(p(0., 3.), VertexKind::Node(2));
        let d10 = 10f64.to_radians();
        let d = m.add_vertex(p(-1. + 0.5 * d10.cos(), 0.5 * d10.sin()), VertexKind::Node(3));
        let v = m.add_vertex(p(0., 1.), VertexKind::Junction);
        for u in [a, b, c] {
            m.add_rail(v, u);
        }
        m.add_rail(a, d);
        let rm = route_edges(m, &[(0, 1), (1, 2), (0, 3)], 4).unwrap();
        let lim = Limits { alpha: 30.0, beta: 0.01 };
        let out = median_pass(rm, &ModConfig { median_iters: 1, ..cfg() }, &lim);
        let at_a = crate::routing::min_angle_at(&out.mesh, a);
        assert!(at_a >= lim.alpha - 1e-9);
        assert!(at_a < lim.alpha + 1e-6, "stopped early at angle {at_a}");
        assert!((out.mesh.pos(v).y - 40f64.to_radians().tan()).abs() < 1e-6);
    }

    #[test]
    fn collinear_junction_is_removed() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(2., 0.)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let j = m.add_vertex(p(1., 0.), VertexKind::Junction);
        let b = m.add_vertex(p(2., 0.), VertexKind::Node(1));
        m.add_rail(a, j);
        m.add_rail(j, b);
        let rm = route_edges(m, &[(0, 1)], 2).unwrap();
        let out = shortcut_pass(rm, &Limits { alpha: 45.0, beta: 0.5 });
        assert!(!out.mesh.contains_vertex(j));
        assert_eq!(out.routes[0].chain, vec![a, b]);
    }

    #[test]
    fn bend_near_node_is_kept() {
        let mut m = Mesh::new(Rect::new(p(0., 0.), p(2., 2.)));
        let a = m.add_vertex(p(0., 0.), VertexKind::Node(0));
        let b = m.add_vertex(p(2., 2.), VertexKind::Node(1));
        let j = m.add_vertex(p(2., 0.), VertexKind::Junction);
        // an isolated node 0.07 off the chord a-b
        m.add_vertex(p(1.05, 0.95), VertexKind::Node(2));
        m.add_rail(a, j);
        m.add_rail(j, b);
        let rm = route_edges(m, &[(0, 1)], 3).unwrap();
        let lim = Limits { alpha: 30.0, beta: 0.1 };
        let out = shortcut_pass(rm.clone(), &lim);
        assert!(out.mesh.contains_vertex(j));
        assert_eq!(out.routes, rm.routes);
        // a looser limit lets it go
        let out = shortcut_pass(rm, &Limits { alpha: 30.0, beta: 0.05 });
        assert!(!out.mesh.contains_vertex(j));
    }

    #[test]
    fn fixpoint_has_no_removable_junction() {
        let rm = star(p(0., 0.), &[p(-1., 0.), p(1., 0.5)]);
        let lim = Limits { alpha: 30.0, beta: 0.05 };
        let out = shortcut_pass(rm, &lim);
        let again = shortcut_pass(out.clone(), &lim);
        assert_eq!(out.mesh.rails(), again.mesh.rails());
        assert!(!out.mesh.contains_vertex(2));
    }
}
