//! Random perturbation into general position.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{dist_m, Point, Rect};

/// Distinct x's, distinct y's, no point pair on a common diagonal and, per
/// point, pairwise distinct Manhattan distances to all others.
pub fn in_general_position(points: &[Point]) -> bool {
    let mut xs = HashSet::new();
    let mut ys = HashSet::new();
    for p in points {
        if !xs.insert(p.x.to_bits()) || !ys.insert(p.y.to_bits()) {
            return false;
        }
    }
    for (i, &w) in points.iter().enumerate() {
        let mut seen = HashSet::with_capacity(points.len());
        for (j, &q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if (q.x - w.x).abs() == (q.y - w.y).abs() {
                return false;
            }
            if !seen.insert(dist_m(w, q).to_bits()) {
                return false;
            }
        }
    }
    true
}

/// Perturb each coordinate by at most `1e-7 * diagonal` until the set is in
/// general position. Points already in general position are returned as is.
pub fn sanitize(points: &[Point], seed: u64) -> Vec<Point> {
    if in_general_position(points) {
        return points.to_vec();
    }
    let diag = Rect::bounding(points.iter().copied()).map_or(0.0, |r| r.diagonal());
    // all points coincide: fall back to an absolute scale
    let eps = 1e-7 * if diag > 0.0 { diag } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let out: Vec<Point> = points
            .iter()
            .map(|p| Point::new(p.x + rng.gen_range(-eps..=eps), p.y + rng.gen_range(-eps..=eps)))
            .collect();
        if in_general_position(&out) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_input_untouched() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(4.0, 2.0), Point::new(1.5, 7.25)];
        assert!(in_general_position(&pts));
        assert_eq!(sanitize(&pts, 3), pts);
    }

    #[test]
    fn grid_is_fixed_within_bound() {
        let pts: Vec<Point> =
            (0..25).map(|i| Point::new((i % 5) as f64, (i / 5) as f64)).collect();
        assert!(!in_general_position(&pts));
        let out = sanitize(&pts, 11);
        assert!(in_general_position(&out));
        let bound = 1e-7 * 32f64.sqrt();
        for (a, b) in pts.iter().zip(&out) {
            assert!((a.x - b.x).abs() <= bound && (a.y - b.y).abs() <= bound);
        }
        assert_eq!(out, sanitize(&pts, 11));
    }

    #[test]
    fn diagonal_pairs_rejected() {
        assert!(!in_general_position(&[Point::new(0.0, 0.0), Point::new(1.0, 1.0)]));
        // w=(0,0) sees (3,1) and (1,-3) at the same distance
        assert!(!in_general_position(&[
            Point::new(0.0, 0.0),
            Point::new(3.0, 1.5),
            Point::new(1.0, -3.5)
        ]));
    }
}
