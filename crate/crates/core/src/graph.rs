//! Input graph: validated node positions, importance ranks and edges.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, Rect};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate node id {0:?}")]
    DuplicateId(String),
    #[error("coincident positions: {0:?} and {1:?}")]
    CoincidentPositions(String, String),
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?}-{1:?}")]
    DuplicateEdge(String, String),
    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),
    #[error("non-finite coordinate on node {0:?}")]
    NonFinite(String),
    #[error("invalid rank on node {0:?}: ranks must be finite and non-negative")]
    BadRank(String),
    #[error("ranks must be given for every node or for none")]
    PartialRanks,
    #[error("empty graph")]
    Empty,
}

/// Graph description as read from JSON, before validation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RawGraph {
    pub nodes: Vec<RawNode>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawNode {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub pos: Point,
    pub rank: Option<f64>,
}

/// A validated graph. Nodes are addressed by their index; edges are stored
/// as `(lo, hi)` index pairs in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct InputGraph {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl InputGraph {
    pub fn validate(raw: &RawGraph) -> Result<InputGraph, GraphError> {
        let mut index = HashMap::with_capacity(raw.nodes.len());
        let mut seen_pos: HashMap<(u64, u64), usize> = HashMap::new();
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for (i, rn) in raw.nodes.iter().enumerate() {
            let pos = Point::new(rn.x, rn.y);
            if !pos.is_finite() {
                return Err(GraphError::NonFinite(rn.id.clone()));
            }
            if let Some(r) = rn.rank {
                if !r.is_finite() || r < 0.0 {
                    return Err(GraphError::BadRank(rn.id.clone()));
                }
            }
            if index.insert(rn.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(rn.id.clone()));
            }
            if let Some(&j) = seen_pos.get(&pos.key()) {
                return Err(GraphError::CoincidentPositions(
                    raw.nodes[j].id.clone(),
                    rn.id.clone(),
                ));
            }
            seen_pos.insert(pos.key(), i);
            nodes.push(Node { id: rn.id.clone(), pos, rank: rn.rank });
        }
        let ranked = nodes.iter().filter(|n| n.rank.is_some()).count();
        if ranked != 0 && ranked != nodes.len() {
            return Err(GraphError::PartialRanks);
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut seen_edges = HashSet::new();
        for (a, b) in &raw.edges {
            let ia = *index.get(a).ok_or_else(|| GraphError::UnknownNode(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| GraphError::UnknownNode(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            let e = (ia.min(ib), ia.max(ib));
            if !seen_edges.insert(e) {
                return Err(GraphError::DuplicateEdge(a.clone(), b.clone()));
            }
            edges.push(e);
        }
        Ok(InputGraph { nodes, edges, index })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|n| n.pos).collect()
    }

    /// Replace node positions (same order), e.g. after general-position
    /// perturbation. Positions must stay pairwise distinct.
    pub fn with_positions(&self, pos: &[Point]) -> InputGraph {
        assert_eq!(pos.len(), self.nodes.len());
        let mut g = self.clone();
        for (n, &p) in g.nodes.iter_mut().zip(pos) {
            n.pos = p;
        }
        g
    }

    pub fn has_explicit_ranks(&self) -> bool {
        !self.nodes.is_empty() && self.nodes.iter().all(|n| n.rank.is_some())
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn bounding_rect(&self) -> Result<Rect, GraphError> {
        Rect::bounding(self.nodes.iter().map(|n| n.pos)).ok_or(GraphError::Empty)
    }

    /// Explicit ranks when present, otherwise PageRank with default settings.
    pub fn ranking(&self) -> Result<Ranking, GraphError> {
        if self.has_explicit_ranks() {
            Ok(Ranking(self.nodes.iter().map(|n| n.rank.unwrap_or(0.0)).collect()))
        } else {
            pagerank(self, DEFAULT_DAMPING, DEFAULT_PAGERANK_EPS)
        }
    }
}

/// Node importance, indexed like [`InputGraph::nodes`]. Higher is more important.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking(pub Vec<f64>);

impl Ranking {
    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_PAGERANK_EPS: f64 = 1e-10;
const PAGERANK_MAX_ITER: usize = 10_000;

/// PageRank by power iteration; every undirected edge is two arcs and
/// dangling mass is spread uniformly.
pub fn pagerank(g: &InputGraph, damping: f64, eps: f64) -> Result<Ranking, GraphError> {
    let n = g.len();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let adj = g.neighbors();
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&v| adj[v].is_empty()).map(|v| rank[v]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for (u, nb) in adj.iter().enumerate() {
            if nb.is_empty() {
                continue;
            }
            let share = damping * rank[u] / nb.len() as f64;
            for &v in nb {
                next[v] += share;
            }
        }
        let delta: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < eps {
            break;
        }
    }
    // renormalise away accumulated rounding
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|r| *r /= total);
    Ok(Ranking(rank))
}
