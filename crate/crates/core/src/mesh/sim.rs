//! Event-driven simulation of the competing rays.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError};
use crate::geom::{Point, Rect};

/// How simultaneous perpendicular hits are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// The horizontal ray survives; the vertical one stops.
    #[default]
    HorizontalWins,
    VerticalWins,
    /// The ray of the lower-indexed point survives.
    LowerIndexWins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayDir {
    Up,
    Down,
    Left,
    Right,
}

impl RayDir {
    pub const ALL: [RayDir; 4] = [RayDir::Up, RayDir::Down, RayDir::Left, RayDir::Right];

    pub fn is_horizontal(self) -> bool {
        matches!(self, RayDir::Left | RayDir::Right)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCause {
    /// Stopped on ray `blocker` (index `4 * node + dir`), which had grown
    /// `blocker_reach` to get to the stopping point.
    Ray { blocker: usize, blocker_reach: f64 },
    /// Collinear rays meeting from opposite sides.
    HeadOn { other: usize },
    Boundary,
    /// Source already on the bounding rectangle in this direction.
    ZeroLength,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayOutcome {
    pub node: usize,
    pub dir: RayDir,
    pub end: Point,
    pub length: f64,
    pub cause: StopCause,
}

#[derive(Debug, Clone, Copy)]
enum EventKind {
    Cross { victim: usize, blocker: usize, at: Point, reach: f64 },
    HeadOn { a: usize, b: usize, at: Point },
    Boundary { ray: usize, at: Point },
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: EventKind,
}

impl Event {
    fn order_key(&self) -> (u8, usize, usize) {
        match self.kind {
            EventKind::Cross { victim, blocker, .. } => (0, victim, blocker),
            EventKind::HeadOn { a, b, .. } => (1, a, b),
            EventKind::Boundary { ray, .. } => (2, ray, 0),
        }
    }

    fn cmp(&self, o: &Event) -> Ordering {
        self.time.total_cmp(&o.time).then_with(|| self.order_key().cmp(&o.order_key()))
    }
}

fn ray_id(node: usize, dir: RayDir) -> usize {
    4 * node + dir.slot()
}

pub(super) fn check_points(points: &[Point]) -> Result<Rect, MeshError> {
    if points.len() < 2 {
        return Err(MeshError::TooFewPoints(points.len()));
    }
    let mut seen = std::collections::HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = seen.insert(p.key(), i) {
            return Err(MeshError::CoincidentPoints(j, i));
        }
    }
    Ok(Rect::bounding(points.iter().copied()).expect("non-empty"))
}

fn boundary_hit(p: Point, dir: RayDir, r: &Rect) -> (f64, Point) {
    match dir {
        RayDir::Up => (r.max.y - p.y, Point::new(p.x, r.max.y)),
        RayDir::Down => (p.y - r.min.y, Point::new(p.x, r.min.y)),
        RayDir::Left => (p.x - r.min.x, Point::new(r.min.x, p.y)),
        RayDir::Right => (r.max.x - p.x, Point::new(r.max.x, p.y)),
    }
}

/// Grow all rays simultaneously and report where and why each one stopped.
///
/// Candidate hits between every horizontal/vertical ray pair are enumerated
/// up front and replayed in time order; a hit is valid when the victim is
/// still growing and the blocker actually reached the crossing point.
pub fn simulate_rays(points: &[Point], tie: TieRule) -> Result<Vec<RayOutcome>, MeshError> {
    let rect = check_points(points)?;
    let n = points.len();
    let mut events = Vec::with_capacity(n * n + 4 * n);
    let mut state: Vec<Option<(f64, Point, StopCause)>> = vec![None; 4 * n];

    for (i, &p) in points.iter().enumerate() {
        for dir in RayDir::ALL {
            let (limit, at) = boundary_hit(p, dir, &rect);
            let id = ray_id(i, dir);
            if limit > 0.0 {
                events.push(Event { time: limit, kind: EventKind::Boundary { ray: id, at } });
            } else {
                state[id] = Some((0.0, p, StopCause::ZeroLength));
            }
        }
    }

    for (i, &pi) in points.iter().enumerate() {
        for (j, &pj) in points.iter().enumerate() {
            if i == j || pi.x == pj.x || pi.y == pj.y {
                continue;
            }
            // horizontal ray of i against vertical ray of j
            let at = Point::new(pj.x, pi.y);
            let hdir = if pj.x > pi.x { RayDir::Right } else { RayDir::Left };
            let vdir = if pi.y > pj.y { RayDir::Up } else { RayDir::Down };
            let (h, v) = (ray_id(i, hdir), ray_id(j, vdir));
            let th = (pj.x - pi.x).abs();
            let tv = (pi.y - pj.y).abs();
            let horizontal_stops = match th.total_cmp(&tv) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => match tie {
                    TieRule::HorizontalWins => false,
                    TieRule::VerticalWins => true,
                    TieRule::LowerIndexWins => i > j,
                },
            };
            let kind = if horizontal_stops {
                EventKind::Cross { victim: h, blocker: v, at, reach: tv }
            } else {
                EventKind::Cross { victim: v, blocker: h, at, reach: th }
            };
            events.push(Event { time: th.max(tv), kind });
        }
    }

    // collinear rays approaching each other (only without general position)
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (points[i], points[j]);
            if pi.y == pj.y && pi.x < pj.x {
                let at = Point::new(0.5 * (pi.x + pj.x), pi.y);
                events.push(Event {
                    time: 0.5 * (pj.x - pi.x),
                    kind: EventKind::HeadOn {
                        a: ray_id(i, RayDir::Right),
                        b: ray_id(j, RayDir::Left),
                        at,
                    },
                });
            }
            if pi.x == pj.x && pi.y < pj.y {
                let at = Point::new(pi.x, 0.5 * (pi.y + pj.y));
                events.push(Event {
                    time: 0.5 * (pj.y - pi.y),
                    kind: EventKind::HeadOn {
                        a: ray_id(i, RayDir::Up),
                        b: ray_id(j, RayDir::Down),
                        at,
                    },
                });
            }
        }
    }

    events.sort_by(Event::cmp);

    for ev in &events {
        match ev.kind {
            EventKind::Cross { victim, blocker, at, reach } => {
                if state[victim].is_some() {
                    continue;
                }
                if let Some((len, _, _)) = state[blocker] {
                    if len < reach {
                        continue;
                    }
                }
                debug_assert!(reach <= ev.time, "blocker must arrive no later than the victim");
                state[victim] =
                    Some((ev.time, at, StopCause::Ray { blocker, blocker_reach: reach }));
            }
            EventKind::HeadOn { a, b, at } => {
                if state[a].is_none() && state[b].is_none() {
                    state[a] = Some((ev.time, at, StopCause::HeadOn { other: b }));
                    state[b] = Some((ev.time, at, StopCause::HeadOn { other: a }));
                }
            }
            EventKind::Boundary { ray, at } => {
                if state[ray].is_none() {
                    state[ray] = Some((ev.time, at, StopCause::Boundary));
                }
            }
        }
    }

    Ok(state
        .into_iter()
        .enumerate()
        .map(|(id, s)| {
            let (length, end, cause) = s.expect("every ray reaches the boundary eventually");
            RayOutcome { node: id / 4, dir: RayDir::ALL[id % 4], end, length, cause }
        })
        .collect())
}

/// Reference construction of the competition mesh.
pub fn build_mesh_sim(points: &[Point], tie: TieRule) -> Result<Mesh, MeshError> {
    let rect = check_points(points)?;
    let rays = simulate_rays(points, tie)?;
    let segments: Vec<(usize, Point)> =
        rays.iter().filter(|r| r.length > 0.0).map(|r| (r.node, r.end)).collect();
    Ok(Mesh::from_ray_segments(points, &segments, rect))
}
