//! Multi-level graph maps: competition mesh, edge routing and zoom levels.

pub mod geom;
pub mod graph;
pub mod levels;
pub mod manifest;
pub mod mesh;
pub mod pipeline;
pub mod routing;
pub mod svg;
pub mod zoom;
