//! Eight 45° cones around a point and per-cone Manhattan nearest neighbours.

use crate::geom::{dist_m, Point};

/// Cone (1..=8) of `q` around `w`, counter-clockwise from the positive x axis.
/// Each cone is half-open: it contains its clockwise boundary ray.
pub fn cone_of(w: Point, q: Point) -> Option<u8> {
    let dx = q.x - w.x;
    let dy = q.y - w.y;
    if dx == 0.0 && dy == 0.0 {
        return None;
    }
    let (ax, ay) = (dx.abs(), dy.abs());
    let c = if dy >= 0.0 {
        if dx > 0.0 && dy < dx {
            1
        } else if dx > 0.0 {
            2
        } else if dy > ax {
            3
        } else if dy > 0.0 {
            4
        } else {
            5
        }
    } else if dx < 0.0 && ay < ax {
        5
    } else if dx < 0.0 {
        6
    } else if dx < ay {
        7
    } else {
        8
    };
    Some(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeNeighborTable {
    entries: Vec<[Option<usize>; 8]>,
}

impl ConeNeighborTable {
    /// Nearest neighbour of point `w` in cone `cone` (1..=8).
    pub fn get(&self, w: usize, cone: u8) -> Option<usize> {
        assert!((1..=8).contains(&cone), "cone index out of range: {cone}");
        self.entries[w][cone as usize - 1]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Exact O(n²) scan; ties go to the lower index.
pub fn cone_neighbors(points: &[Point]) -> ConeNeighborTable {
    let entries = points
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut best: [Option<(f64, usize)>; 8] = [None; 8];
            for (j, &q) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let Some(c) = cone_of(w, q) else { continue };
                let d = dist_m(w, q);
                let slot = &mut best[c as usize - 1];
                if slot.map_or(true, |(bd, _)| d < bd) {
                    *slot = Some((d, j));
                }
            }
            best.map(|b| b.map(|(_, j)| j))
        })
        .collect();
    ConeNeighborTable { entries }
}
