//! Four-phase sweep construction: vertical rays from cone neighbours, then
//! horizontal rays by ray shooting against shrunken vertical segments.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::Bound;

use super::cones::cone_neighbors;
use super::sim::check_points;
use super::{Mesh, MeshError};
use crate::geom::{dist_m, Point};

/// Smallest positive gap between y coordinates.
pub fn delta_y(points: &[Point]) -> Result<f64, MeshError> {
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    ys.windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .min_by(f64::total_cmp)
        .ok_or(MeshError::FlatY)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct X(f64);

impl Eq for X {}

impl PartialOrd for X {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for X {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PieceKind {
    Stub,
    Shrunk,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    kind: PieceKind,
    /// Junction stub left by a vertical ray that this point's horizontal ray
    /// stopped; that horizontal ray passes through it.
    owner: Option<usize>,
}

/// Vertical pieces grouped by x; queries scan columns outward from the source.
#[derive(Default)]
struct RayShooter {
    cols: BTreeMap<X, Vec<Piece>>,
}

impl RayShooter {
    fn insert(&mut self, x: f64, lo: f64, hi: f64, kind: PieceKind) {
        self.insert_owned(x, lo, hi, kind, None);
    }

    fn insert_owned(&mut self, x: f64, lo: f64, hi: f64, kind: PieceKind, owner: Option<usize>) {
        if lo <= hi {
            self.cols.entry(X(x)).or_default().push(Piece { lo, hi, kind, owner });
        }
    }

    fn hit_in(pieces: &[Piece], y: f64, shooter: usize) -> Option<usize> {
        pieces.iter().position(|p| p.lo <= y && y <= p.hi && p.owner != Some(shooter))
    }

    fn shoot(&self, from: Point, shooter: usize, leftwards: bool) -> Option<(f64, usize)> {
        let y = from.y;
        let hit = |(x, ps): (&X, &Vec<Piece>)| Self::hit_in(ps, y, shooter).map(|i| (x.0, i));
        if leftwards {
            self.cols.range(..X(from.x)).rev().find_map(hit)
        } else {
            self.cols.range((Bound::Excluded(X(from.x)), Bound::Unbounded)).find_map(hit)
        }
    }

    /// A horizontal ray ended at (x, y) on piece `idx`: a shrunken segment is
    /// split around the new junction, which gets its own stub.
    fn record_hit(&mut self, x: f64, idx: usize, y: f64, dy: f64) {
        let col = self.cols.get_mut(&X(x)).expect("hit column exists");
        let piece = col[idx];
        if piece.kind == PieceKind::Shrunk {
            col.swap_remove(idx);
            self.insert(x, piece.lo, y - dy / 3.0, PieceKind::Shrunk);
            self.insert(x, y + dy / 3.0, piece.hi, PieceKind::Shrunk);
        }
        self.insert(x, y - dy / 4.0, y + dy / 4.0, PieceKind::Stub);
    }
}

/// Sweep construction. Requires distinct x's and distinct y's.
pub fn build_mesh_fast(points: &[Point]) -> Result<Mesh, MeshError> {
    let rect = check_points(points)?;
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) || ys.windows(2).any(|w| w[0] == w[1]) {
        return Err(MeshError::NotGeneralPosition);
    }
    let dy = delta_y(points)?;
    let cones = cone_neighbors(points);
    let nearest = |w: usize, cs: [u8; 2]| -> Option<usize> {
        cs.iter().filter_map(|&c| cones.get(w, c)).min_by(|&a, &b| {
            dist_m(points[w], points[a]).total_cmp(&dist_m(points[w], points[b])).then(a.cmp(&b))
        })
    };

    let mut segments: Vec<(usize, Point)> = Vec::with_capacity(4 * points.len());
    let mut shooter = RayShooter::default();

    // phases 1 and 2
    for (w, &p) in points.iter().enumerate() {
        let top = nearest(w, [2, 3]);
        let bottom = nearest(w, [6, 7]);
        shooter.insert(p.x, p.y - dy / 4.0, p.y + dy / 4.0, PieceKind::Stub);
        for (stopper, fallback) in [(top, rect.max.y), (bottom, rect.min.y)] {
            let end = stopper.map_or(fallback, |q| points[q].y);
            if end == p.y {
                continue;
            }
            segments.push((w, Point::new(p.x, end)));
            let (lo, hi) = (p.y.min(end), p.y.max(end));
            shooter.insert(p.x, lo + dy / 3.0, hi - dy / 3.0, PieceKind::Shrunk);
            shooter.insert_owned(p.x, end - dy / 4.0, end + dy / 4.0, PieceKind::Stub, stopper);
        }
    }

    // phases 3 and 4
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x));
    for leftwards in [true, false] {
        let iter: Box<dyn Iterator<Item = &usize>> =
            if leftwards { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
        for &w in iter {
            let p = points[w];
            let end = match shooter.shoot(p, w, leftwards) {
                Some((x, idx)) => {
                    shooter.record_hit(x, idx, p.y, dy);
                    Point::new(x, p.y)
                }
                None => Point::new(if leftwards { rect.min.x } else { rect.max.x }, p.y),
            };
            if end != p {
                segments.push((w, end));
            }
        }
    }

    Ok(Mesh::from_ray_segments(points, &segments, rect))
}
