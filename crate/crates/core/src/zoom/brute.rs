//! Exhaustive search over all level assignments, for small instances.

use super::{LevelAssignment, TileTree, ZoomError};
use crate::zoom::objective_f;

pub const BRUTE_MAX_POINTS: usize = 12;
pub const BRUTE_MAX_HEIGHT: usize = 3;

/// Least objective over every assignment that keeps each non-leaf tile within
/// `quota` and shows something at the top level. `None` if no assignment does.
pub fn brute_force_optimum(t: &TileTree, quota: usize) -> Result<Option<u64>, ZoomError> {
    let n = t.point_count();
    if n > BRUTE_MAX_POINTS || t.height > BRUTE_MAX_HEIGHT {
        return Err(ZoomError::TooLarge { points: n, height: t.height });
    }
    let rho = t.height;
    let mut a = LevelAssignment { g: vec![1; n] };
    let mut best: Option<u64> = None;
    loop {
        let s = a.visible_counts(t);
        let quota_ok = t.tiles.iter().zip(&s).all(|(tile, &c)| tile.is_leaf() || c <= quota);
        if quota_ok && (n == 0 || s[0] > 0) {
            let f = objective_f(t, &a);
            best = Some(best.map_or(f, |b| b.min(f)));
        }
        // odometer over {1..rho}^n
        let mut i = 0;
        while i < n && a.g[i] == rho {
            a.g[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
        a.g[i] += 1;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::zoom::{build_tile_tree, TileMode};

    fn three_one() -> TileTree {
        let pts = [Point::new(0., 0.), Point::new(1., 0.), Point::new(2., 0.), Point::new(10., 0.)];
        build_tile_tree(&pts, 2, TileMode::OneD).unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(brute_force_optimum(&three_one(), 2).unwrap(), Some(2));
        assert_eq!(brute_force_optimum(&three_one(), 1).unwrap(), Some(5));
        assert_eq!(brute_force_optimum(&three_one(), 4).unwrap(), Some(0));
        assert_eq!(brute_force_optimum(&three_one(), 0).unwrap(), None);
        let pts = [Point::new(0., 0.), Point::new(1., 1.)];
        let flat = build_tile_tree(&pts, 1, TileMode::TwoD).unwrap();
        assert_eq!(brute_force_optimum(&flat, 0).unwrap(), Some(0));
        assert_eq!(brute_force_optimum(&flat, 5).unwrap(), Some(0));
    }

    #[test]
    fn too_large() {
        let pts: Vec<Point> = (0..13).map(|i| Point::new(i as f64, 0.)).collect();
        let t = build_tile_tree(&pts, 2, TileMode::OneD).unwrap();
        assert!(matches!(brute_force_optimum(&t, 3), Err(ZoomError::TooLarge { .. })));
        let t = build_tile_tree(&pts[..4], 4, TileMode::OneD).unwrap();
        assert!(matches!(brute_force_optimum(&t, 3), Err(ZoomError::TooLarge { .. })));
    }
}
