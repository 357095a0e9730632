//! Tile tree: one level per zoom level, each tile split into a 2x2 grid
//! (or two halves along x in 1D mode) at the next level.

use serde::{Deserialize, Serialize};

use super::ZoomError;
use crate::geom::{Point, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TileMode {
    #[serde(rename = "1d")]
    OneD,
    #[default]
    #[serde(rename = "2d")]
    TwoD,
}

impl TileMode {
    /// Grid size (columns, rows) at `level`.
    pub fn grid(self, level: usize) -> (usize, usize) {
        let k = 1usize << (level - 1);
        match self {
            TileMode::OneD => (k, 1),
            TileMode::TwoD => (k, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    /// 1 for the root.
    pub level: usize,
    pub rect: Rect,
    /// Column and row in the level's grid, row 0 at the bottom.
    pub cell: (usize, usize),
    /// Indices of the points inside, ascending.
    pub points: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl Tile {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Tiles in breadth-first order; tile 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct TileTree {
    pub height: usize,
    pub mode: TileMode,
    pub tiles: Vec<Tile>,
    /// `tile_of[p][z-1]` is the level-`z` tile containing point `p`.
    tile_of: Vec<Vec<usize>>,
}

impl TileTree {
    pub fn root(&self) -> &Tile {
        &self.tiles[0]
    }

    pub fn point_count(&self) -> usize {
        self.tile_of.len()
    }

    pub fn tile_of(&self, p: usize, level: usize) -> usize {
        self.tile_of[p][level - 1]
    }

    pub fn level_tiles(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.tiles.len()).filter(move |&i| self.tiles[i].level == level)
    }

    /// Level-`level` tile at a grid cell.
    pub fn tile_at(&self, level: usize, cell: (usize, usize)) -> Option<usize> {
        let (cols, rows) = self.mode.grid(level);
        if cell.0 >= cols || cell.1 >= rows {
            return None;
        }
        // levels are stored contiguously in breadth-first order
        self.level_tiles(level).find(|&i| self.tiles[i].cell == cell)
    }
}

/// Split `r` at its midpoints. Children are ordered by (row, column) so that
/// breadth-first order is deterministic.
fn split(r: Rect, mode: TileMode) -> Vec<(Rect, (usize, usize))> {
    let mx = 0.5 * (r.min.x + r.max.x);
    match mode {
        TileMode::OneD => vec![
            (Rect::new(r.min, Point::new(mx, r.max.y)), (0, 0)),
            (Rect::new(Point::new(mx, r.min.y), r.max), (1, 0)),
        ],
        TileMode::TwoD => {
            let my = 0.5 * (r.min.y + r.max.y);
            vec![
                (Rect::new(r.min, Point::new(mx, my)), (0, 0)),
                (Rect::new(Point::new(mx, r.min.y), Point::new(r.max.x, my)), (1, 0)),
                (Rect::new(Point::new(r.min.x, my), Point::new(mx, r.max.y)), (0, 1)),
                (Rect::new(Point::new(mx, my), r.max), (1, 1)),
            ]
        }
    }
}

/// Half-open membership against the split lines: a point on a midline goes
/// to the upper/right child, so the global max edges stay closed.
fn child_slot(p: Point, r: Rect, mode: TileMode) -> usize {
    let right = p.x >= 0.5 * (r.min.x + r.max.x);
    match mode {
        TileMode::OneD => right as usize,
        TileMode::TwoD => {
            let up = p.y >= 0.5 * (r.min.y + r.max.y);
            2 * up as usize + right as usize
        }
    }
}

/// Tile tree of the given height over the bounding box of `points`.
pub fn build_tile_tree(points: &[Point], height: usize, mode: TileMode) -> Result<TileTree, ZoomError> {
    if height < 1 {
        return Err(ZoomError::ZeroHeight);
    }
    let bounds = Rect::bounding(points.iter().copied()).unwrap_or(Rect::new(Point::default(), Point::default()));
    build_tile_tree_in(points, bounds, height, mode)
}

/// As [`build_tile_tree`] with an explicit root rectangle containing every point.
pub fn build_tile_tree_in(
    points: &[Point],
    bounds: Rect,
    height: usize,
    mode: TileMode,
) -> Result<TileTree, ZoomError> {
    if height < 1 {
        return Err(ZoomError::ZeroHeight);
    }
    if let Some(p) = points.iter().position(|&q| !bounds.contains(q)) {
        return Err(ZoomError::OutsideBounds(p));
    }
    let mut tiles = vec![Tile {
        level: 1,
        rect: bounds,
        cell: (0, 0),
        points: (0..points.len()).collect(),
        parent: None,
        children: Vec::new(),
    }];
    let mut tile_of = vec![vec![0usize; height]; points.len()];
    let mut frontier = vec![0usize];
    for level in 2..=height {
        let mut next = Vec::new();
        for &t in &frontier {
            let (rect, (c, r)) = (tiles[t].rect, tiles[t].cell);
            let kids: Vec<usize> = split(rect, mode)
                .into_iter()
                .map(|(cr, (dc, dr))| {
                    let cell = match mode {
                        TileMode::OneD => (2 * c + dc, 0),
                        TileMode::TwoD => (2 * c + dc, 2 * r + dr),
                    };
                    tiles.push(Tile { level, rect: cr, cell, points: Vec::new(), parent: Some(t), children: Vec::new() });
                    tiles.len() - 1
                })
                .collect();
            for p in std::mem::take(&mut tiles[t].points) {
                let k = kids[child_slot(points[p], rect, mode)];
                tiles[k].points.push(p);
                tile_of[p][level - 1] = k;
                tiles[t].points.push(p);
            }
            tiles[t].children = kids.clone();
            next.extend(kids);
        }
        frontier = next;
    }
    Ok(TileTree { height, mode, tiles, tile_of })
}
