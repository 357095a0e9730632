//! Input graph to manifest: mesh, routing, level assignment, per-level
//! bundles and transitions.

use thiserror::Error;

use crate::graph::{GraphError, InputGraph};
use crate::levels::{
    build_transitions, derive_level_mesh, level_graphs, simplify_routes, tile_metrics, LevelBundle, LevelError,
};
use crate::manifest::{
    BuildConfig, Construction, Manifest, ManifestLevel, ManifestNode, ManifestRoute, Metrics, ResolvedConfig,
    FORMAT_VERSION,
};
use crate::mesh::{build_mesh_fast, build_mesh_sim, sanitize, stretch_factor, MeshError, VertexKind};
use crate::routing::{
    add_detours, max_port_radius, median_pass, prune, refine_faces, route_edges, shortcut_pass, total_ink, Limits,
    ModConfig, RoutingError,
};
use crate::zoom::{build_tile_tree_in, min_quota, solve_levels, ZoomError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Zoom(#[from] ZoomError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error("rank condition fails at quota {quota}: {} violating pairs, first {:?}", pairs.len(), pairs.first())]
    RankCondition { quota: usize, pairs: Vec<(String, String)> },
}

/// Default octagon radius is kept well inside the admissible bound.
const PORT_RADIUS_SHARE: f64 = 0.9;

fn resolve_mod(cfg: &BuildConfig, pts: &[crate::geom::Point], max_port: f64) -> ModConfig {
    let mut m = ModConfig::for_points(pts);
    m.alpha = cfg.alpha.unwrap_or(m.alpha);
    m.beta = cfg.beta.unwrap_or(m.beta);
    m.thin_width = cfg.thin_width.unwrap_or(m.thin_width);
    m.median_iters = cfg.median_iters.unwrap_or(m.median_iters);
    m.port_radius = cfg.port_radius.unwrap_or(m.port_radius.min(PORT_RADIUS_SHARE * max_port));
    m
}

pub fn build(g: &InputGraph, cfg: &BuildConfig) -> Result<Manifest, PipelineError> {
    if cfg.levels < 1 {
        return Err(PipelineError::Config("levels must be at least 1".into()));
    }
    if cfg.quota == Some(0) {
        return Err(ZoomError::Infeasible { quota: 0, reason: "quota must be at least 1".into() }.into());
    }
    let n = g.len();
    let ranks = g.ranking()?;
    let pts = sanitize(&g.positions(), cfg.seed);
    let mesh = match cfg.construction {
        Construction::Sim => build_mesh_sim(&pts, cfg.tie_rule)?,
        Construction::Fast => build_mesh_fast(&pts)?,
    };
    let stretch = stretch_factor(&mesh)?;

    let mcfg = resolve_mod(cfg, &pts, max_port_radius(&mesh)?);
    let rm = prune(route_edges(add_detours(&mesh, mcfg.port_radius)?, g.edges(), n)?);
    let lim = Limits::effective(&rm.mesh, &mcfg);
    let rm = refine_faces(rm, &mcfg);
    let rm = median_pass(rm, &mcfg, &lim);
    let rm = shortcut_pass(rm, &lim);
    let max_route_dilation = rm
        .routes
        .iter()
        .map(|r| r.length(&rm.mesh) / crate::geom::dist_e(pts[r.edge.0], pts[r.edge.1]))
        .fold(0.0, f64::max);

    let bounds = mesh.boundary();
    let tree = build_tile_tree_in(&pts, bounds, cfg.levels, cfg.mode)?;
    let quota = match cfg.quota {
        Some(q) => q,
        None => min_quota(&tree, &ranks).ok_or_else(|| ZoomError::Infeasible {
            quota: n,
            reason: "no quota satisfies the rank condition".into(),
        })?,
    };
    let sol = solve_levels(&tree, quota, &ranks)?;
    if !sol.is_valid() {
        let id = |i: usize| g.nodes()[i].id.clone();
        let pairs = sol.violations.iter().map(|&(a, b)| (id(a), id(b))).collect();
        return Err(PipelineError::RankCondition { quota, pairs });
    }

    let graphs = level_graphs(g, &sol.assignment, cfg.levels);
    let k = cfg.levels;
    let mut bundles: Vec<LevelBundle> = Vec::with_capacity(k);
    bundles.push(LevelBundle { graph: graphs[k - 1].clone(), routed: rm });
    for i in (0..k - 1).rev() {
        let above = bundles.last().expect("bottom level present");
        let b = simplify_routes(derive_level_mesh(above, &graphs[i], cfg.keep_hidden_nodes), &lim);
        bundles.push(b);
    }
    bundles.reverse();
    let transitions =
        bundles.windows(2).map(|w| build_transitions(&w[0], &w[1])).collect::<Result<Vec<_>, _>>()?;

    let mut levels = Vec::with_capacity(k);
    let mut ink = Vec::with_capacity(k);
    let (mut max_tile_nodes, mut max_viewport_nodes, mut max_tile_rails) = (vec![], vec![], vec![]);
    for b in &bundles {
        let tiles = tile_metrics(b, &tree);
        max_tile_nodes.push(tiles.tiles.iter().map(|t| t.nodes).max().unwrap_or(0));
        max_tile_rails.push(tiles.tiles.iter().map(|t| t.rails).max().unwrap_or(0));
        max_viewport_nodes.push(tiles.viewports.iter().map(|v| v.nodes).max().unwrap_or(0));
        ink.push(total_ink(&b.routed));
        levels.push(ManifestLevel {
            level: b.level(),
            nodes: b.graph.nodes.clone(),
            edges: b.graph.edges.iter().map(|&(u, v)| [u, v]).collect(),
            mesh: b.routed.mesh.to_dump(),
            routes: b
                .routed
                .routes
                .iter()
                .map(|r| ManifestRoute { edge: [r.edge.0, r.edge.1], points: r.polyline(&b.routed.mesh) })
                .collect(),
            tiles,
        });
    }
    let bottom = &bundles[k - 1].routed.mesh;
    let mut hist = std::collections::BTreeMap::<usize, usize>::new();
    for v in bottom.vertex_ids().filter(|&v| bottom.kind(v) == VertexKind::Junction) {
        *hist.entry(bottom.degree(v)).or_default() += 1;
    }
    let metrics = Metrics {
        ink,
        stretch,
        max_route_dilation,
        objective: sol.cost,
        quota,
        max_tile_nodes,
        max_viewport_nodes,
        max_tile_rails,
        junction_degrees: hist.into_iter().map(|(d, c)| [d, c]).collect(),
        rank_violations: sol.violations.len(),
    };
    let nodes = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, v)| ManifestNode {
            id: v.id.clone(),
            x: pts[i].x,
            y: pts[i].y,
            rank: ranks.get(i),
            level: sol.assignment.g[i],
        })
        .collect();
    Ok(Manifest {
        format_version: FORMAT_VERSION,
        config: ResolvedConfig { build: cfg.clone(), modification: mcfg, limits: lim, quota },
        bounds,
        nodes,
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        levels,
        transitions,
        metrics,
        base_mesh: mesh.to_dump(),
    })
}
