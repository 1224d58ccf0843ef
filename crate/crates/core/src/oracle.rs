//! Breadth-first search over the flip graph.
//!
//! This is the ground truth the FPT solver is checked against. It is only
//! practical for small point sets.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::dag::FlipSequence;
use crate::triangulation::{CanonicalKey, Edge, PointSetMismatch, Triangulation};

pub const DEFAULT_CAP: usize = 10;
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    PointSetMismatch(#[from] PointSetMismatch),
    #[error("search exceeded the budget of {0} triangulations")]
    BudgetExceeded(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct BfsConfig {
    /// Deepest distance searched.
    pub cap: usize,
    /// Maximum number of distinct triangulations stored.
    pub node_budget: usize,
}

impl Default for BfsConfig {
    fn default() -> Self {
        BfsConfig { cap: DEFAULT_CAP, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfsOutcome {
    pub distance: Option<usize>,
    pub states_explored: usize,
}

/// Flip distance from `from` to `to`, or `None` if it exceeds `config.cap`.
pub fn bfs_distance(
    from: &Triangulation,
    to: &Triangulation,
    config: BfsConfig,
) -> Result<BfsOutcome, OracleError> {
    from.check_same_point_set(to)?;
    let target = to.canonical_key();
    let mut seen: HashMap<CanonicalKey, usize> = HashMap::new();
    seen.insert(from.canonical_key(), 0);
    if from == to {
        return Ok(BfsOutcome { distance: Some(0), states_explored: 1 });
    }
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        if d == config.cap {
            break;
        }
        for e in t.admissible_edges() {
            let (next, _) = t.apply_flip(e).expect("admissible");
            let key = next.canonical_key();
            if key == target {
                return Ok(BfsOutcome { distance: Some(d + 1), states_explored: seen.len() + 1 });
            }
            if let Entry::Vacant(v) = seen.entry(key) {
                v.insert(d + 1);
                if seen.len() > config.node_budget {
                    return Err(OracleError::BudgetExceeded(config.node_budget));
                }
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(BfsOutcome { distance: None, states_explored: seen.len() })
}

/// Distance labels of every triangulation within `depth` flips of `root`.
pub fn distance_labels(
    root: &Triangulation,
    depth: usize,
    node_budget: usize,
) -> Result<HashMap<CanonicalKey, usize>, OracleError> {
    let mut seen = HashMap::from([(root.canonical_key(), 0usize)]);
    let mut queue = VecDeque::from([(root.clone(), 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for e in t.admissible_edges() {
            let (next, _) = t.apply_flip(e).expect("admissible");
            if let Entry::Vacant(v) = seen.entry(next.canonical_key()) {
                v.insert(d + 1);
                if seen.len() > node_budget {
                    return Err(OracleError::BudgetExceeded(node_budget));
                }
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(seen)
}

/// Every triangulation of `t`'s point set (the flip graph is connected).
pub fn enumerate_all(t: &Triangulation, node_budget: usize) -> Result<Vec<Triangulation>, OracleError> {
    let mut seen = HashMap::from([(t.canonical_key(), ())]);
    let mut out = vec![t.clone()];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i].clone();
        i += 1;
        for e in cur.admissible_edges() {
            let (next, _) = cur.apply_flip(e).expect("admissible");
            if let Entry::Vacant(v) = seen.entry(next.canonical_key()) {
                v.insert(());
                if seen.len() > node_budget {
                    return Err(OracleError::BudgetExceeded(node_budget));
                }
                out.push(next);
            }
        }
    }
    Ok(out)
}

/// Up to `limit` distinct shortest flip sequences from `from` to `to`, given
/// their distance `d`. Enumerated in canonical edge order.
pub fn enumerate_minimal_solutions(
    from: &Triangulation,
    to: &Triangulation,
    d: usize,
    limit: usize,
) -> Result<Vec<FlipSequence>, OracleError> {
    from.check_same_point_set(to)?;
    let labels = distance_labels(to, d, DEFAULT_NODE_BUDGET)?;
    if labels.get(&from.canonical_key()) != Some(&d) || limit == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<Vec<Edge>> = Vec::new();
    let mut path = Vec::with_capacity(d);
    descend(from.clone(), d, &labels, &mut path, &mut out, limit);
    Ok(out
        .into_iter()
        .map(|edges| FlipSequence::apply(from, &edges).expect("geodesic replays"))
        .collect())
}

fn descend(
    t: Triangulation,
    remaining: usize,
    labels: &HashMap<CanonicalKey, usize>,
    path: &mut Vec<Edge>,
    out: &mut Vec<Vec<Edge>>,
    limit: usize,
) {
    if remaining == 0 {
        out.push(path.clone());
        return;
    }
    for e in t.admissible_edges() {
        if out.len() >= limit {
            return;
        }
        let (next, _) = t.apply_flip(e).expect("admissible");
        if labels.get(&next.canonical_key()) == Some(&(remaining - 1)) {
            path.push(e);
            descend(next, remaining - 1, labels, path, out, limit);
            path.pop();
        }
    }
}
