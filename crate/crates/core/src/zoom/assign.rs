//! Level assignment from a flow, the rank condition and the quota search.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{build_flow_network, solve_mcmf, TileTree, ZoomError};
use crate::graph::Ranking;

/// First zoom level (1-based) at which each point is visible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAssignment {
    pub g: Vec<usize>,
}

impl LevelAssignment {
    /// Visible points per tile.
    pub fn visible_counts(&self, t: &TileTree) -> Vec<usize> {
        t.tiles.iter().map(|tile| tile.points.iter().filter(|&&p| self.g[p] <= tile.level).count()).collect()
    }

    /// Points appearing when zooming from the parent into each tile; zero at the root.
    pub fn deltas(&self, t: &TileTree) -> Vec<usize> {
        t.tiles
            .iter()
            .map(|tile| match tile.parent {
                None => 0,
                Some(_) => tile.points.iter().filter(|&&p| self.g[p] == tile.level).count(),
            })
            .collect()
    }
}

/// Points from most to least important: rank descending, then index ascending.
pub fn priority_order(ranks: &Ranking) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by(|&a, &b| ranks.get(b).total_cmp(&ranks.get(a)).then(a.cmp(&b)));
    order
}

/// Read the levels off a flow: deepest tiles first, each tile hands its
/// source inflow worth of levels to its least important unassigned points.
pub fn assignment_from_flow(
    t: &TileTree,
    net: &super::FlowNetwork,
    flow: &super::Flow,
    ranks: &Ranking,
) -> Result<LevelAssignment, ZoomError> {
    let n = t.point_count();
    if ranks.len() != n {
        return Err(ZoomError::RankCount { expected: n, got: ranks.len() });
    }
    if flow.value != n as i64 {
        let quota = net
            .arcs
            .iter()
            .find(|a| matches!(a.kind, super::ArcKind::Split { .. }))
            .map_or(0, |a| a.cap as usize);
        return Err(ZoomError::Infeasible { quota, reason: format!("flow {} of {n}", flow.value) });
    }
    let mut prio = vec![0usize; n];
    for (i, p) in priority_order(ranks).into_iter().enumerate() {
        prio[p] = i;
    }
    let mut g = vec![usize::MAX; n];
    for z in (1..=t.height).rev() {
        for w in t.level_tiles(z) {
            let x = net.source_inflow(flow, w) as usize;
            let mut open: Vec<usize> = t.tiles[w].points.iter().copied().filter(|&p| g[p] == usize::MAX).collect();
            open.sort_by_key(|&p| Reverse(prio[p]));
            debug_assert!(x <= open.len());
            for &p in open.iter().take(x) {
                g[p] = z;
            }
        }
    }
    debug_assert!(g.iter().all(|&z| z != usize::MAX));
    Ok(LevelAssignment { g })
}

/// Pairs `(q, q2)` where `q` is strictly more important than `q2` yet
/// appears at a deeper level.
pub fn check_rank_condition(a: &LevelAssignment, ranks: &Ranking) -> Vec<(usize, usize)> {
    let order = priority_order(ranks);
    let mut out = Vec::new();
    // levels of strictly more important points seen so far
    let mut above: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && ranks.get(order[j]).total_cmp(&ranks.get(order[i])) == Ordering::Equal {
            j += 1;
        }
        for &q2 in &order[i..j] {
            for (_, qs) in above.range(a.g[q2] + 1..) {
                out.extend(qs.iter().map(|&q| (q, q2)));
            }
        }
        for &q in &order[i..j] {
            above.entry(a.g[q]).or_default().push(q);
        }
        i = j;
    }
    out.sort_unstable();
    out
}

/// Sum over tree edges of the squared number of newly visible points.
pub fn objective_f(t: &TileTree, a: &LevelAssignment) -> u64 {
    a.deltas(t).iter().map(|&d| (d * d) as u64).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSolution {
    pub quota: usize,
    pub assignment: LevelAssignment,
    /// Cost of the optimal flow, equal to the objective of the assignment.
    pub cost: u64,
    pub violations: Vec<(usize, usize)>,
}

impl LevelSolution {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Optimal assignment at quota `q`. A quota of zero leaves the top level
/// empty and is rejected unless the tree has a single level.
pub fn solve_levels(t: &TileTree, q: usize, ranks: &Ranking) -> Result<LevelSolution, ZoomError> {
    let n = t.point_count();
    if q == 0 && n > 0 && t.height > 1 {
        return Err(ZoomError::Infeasible { quota: q, reason: "nothing may be shown at the top level".into() });
    }
    let net = build_flow_network(t, q);
    let flow = solve_mcmf(&net);
    let assignment = assignment_from_flow(t, &net, &flow, ranks)?;
    let violations = check_rank_condition(&assignment, ranks);
    Ok(LevelSolution { quota: q, assignment, cost: flow.cost as u64, violations })
}

/// Smallest quota admitting a rank-consistent optimal assignment, by binary
/// search over `1..=n`. The returned quota is valid and the one below it is
/// not. `None` for an empty point set or when even `n` fails.
pub fn min_quota(t: &TileTree, ranks: &Ranking) -> Option<usize> {
    let n = t.point_count();
    let ok = |q: usize| solve_levels(t, q, ranks).map(|s| s.is_valid()).unwrap_or(false);
    if n == 0 || !ok(n) {
        return None;
    }
    let (mut lo, mut hi) = (0usize, n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
