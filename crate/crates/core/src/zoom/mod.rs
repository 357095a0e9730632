//! Zoom level assignment: which nodes become visible at which level, with a
//! per-tile node quota and as few nodes as possible appearing at once.

mod assign;
mod brute;
mod flow;
mod tiles;

use thiserror::Error;

pub use assign::{
    assignment_from_flow, check_rank_condition, min_quota, objective_f, priority_order, solve_levels,
    LevelAssignment, LevelSolution,
};
pub use brute::{brute_force_optimum, BRUTE_MAX_HEIGHT, BRUTE_MAX_POINTS};
pub use flow::{build_flow_network, solve_mcmf, ArcKind, Flow, FlowArc, FlowNetwork, UNBOUNDED};
pub use tiles::{build_tile_tree, build_tile_tree_in, Tile, TileMode, TileTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZoomError {
    #[error("tile tree height must be at least 1")]
    ZeroHeight,
    #[error("point {0} lies outside the tile tree bounds")]
    OutsideBounds(usize),
    #[error("infeasible at quota {quota}: {reason}")]
    Infeasible { quota: usize, reason: String },
    #[error("ranking has {got} entries for {expected} points")]
    RankCount { expected: usize, got: usize },
    #[error("instance too large for exhaustive search: {points} points, height {height}")]
    TooLarge { points: usize, height: usize },
}
