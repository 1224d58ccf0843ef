//! Flip sequences and their dependency DAG.
//!
//! Flip `j` depends on an earlier flip `i` when the edge created by `i` is the
//! edge flipped by `j`, or lies in a common triangle with it just before `j`,
//! and nothing between them flipped that created edge away. Any topological
//! order of this DAG replays to the same final triangulation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::triangulation::{Edge, FlipError, Triangulation};

/// One flip of a sequence. `position` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FlipRecord {
    pub position: usize,
    pub eps: Edge,
    pub phi: Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("flip {position} ({edge}) is inadmissible: {source}")]
    Inadmissible {
        position: usize,
        edge: Edge,
        #[source]
        source: FlipError,
    },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
}

/// A validated flip sequence with every intermediate triangulation.
#[derive(Debug, Clone)]
pub struct FlipSequence {
    records: Vec<FlipRecord>,
    snapshots: Vec<Triangulation>,
}

impl FlipSequence {
    pub fn apply(base: &Triangulation, edges: &[Edge]) -> Result<Self, DagError> {
        let mut snapshots = Vec::with_capacity(edges.len() + 1);
        let mut records = Vec::with_capacity(edges.len());
        snapshots.push(base.clone());
        for (i, &e) in edges.iter().enumerate() {
            let (next, phi) = snapshots[i].apply_flip(e).map_err(|source| DagError::Inadmissible {
                position: i + 1,
                edge: e,
                source,
            })?;
            records.push(FlipRecord { position: i + 1, eps: e, phi });
            snapshots.push(next);
        }
        Ok(FlipSequence { records, snapshots })
    }

    pub fn base(&self) -> &Triangulation {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Triangulation {
        self.snapshots.last().unwrap()
    }

    pub fn records(&self) -> &[FlipRecord] {
        &self.records
    }

    /// `T_i`, the triangulation after the first `i` flips.
    pub fn snapshot(&self, i: usize) -> &Triangulation {
        &self.snapshots[i]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record for 1-based position `i`.
    pub fn record(&self, i: usize) -> &FlipRecord {
        &self.records[i - 1]
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.records.iter().map(|r| r.eps).collect()
    }

    /// True iff `edge` is flipped strictly between positions `i` and `j`.
    pub fn flipped_between(&self, edge: Edge, i: usize, j: usize) -> bool {
        (i + 1..j).any(|p| self.record(p).eps == edge)
    }

    /// Replays the flips in the order `perm` (1-based positions), matching
    /// each flip by its recorded edge.
    pub fn replay(&self, perm: &[usize]) -> Result<Triangulation, DagError> {
        check_permutation(perm, self.len())?;
        let mut t = self.base().clone();
        for &p in perm {
            let e = self.record(p).eps;
            t.flip_in_place(e)
                .map_err(|source| DagError::Inadmissible { position: p, edge: e, source })?;
        }
        Ok(t)
    }
}

fn check_permutation(perm: &[usize], r: usize) -> Result<(), DagError> {
    let mut seen = vec![false; r + 1];
    if perm.len() != r {
        return Err(DagError::NotAPermutation(r));
    }
    for &p in perm {
        if p == 0 || p > r || seen[p] {
            return Err(DagError::NotAPermutation(r));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Dependency DAG over flips `1..=r`. Arcs always point to a later flip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipDag {
    nodes: usize,
    arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Essentiality {
    Essential,
    Nonessential,
}

impl FlipDag {
    pub fn build(seq: &FlipSequence) -> Self {
        let r = seq.len();
        let mut arcs = Vec::new();
        for j in 1..=r {
            let fj = seq.record(j);
            let before = seq.snapshot(j - 1);
            for i in 1..j {
                let phi = seq.record(i).phi;
                let touches = phi == fj.eps || before.share_triangle(phi, fj.eps);
                if touches && !seq.flipped_between(phi, i, j) {
                    arcs.push((i, j));
                }
            }
        }
        Self::from_arcs(r, arcs)
    }

    /// Panics if an arc does not go from a smaller to a larger node in `1..=nodes`.
    pub fn from_arcs(nodes: usize, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let mut succ = vec![Vec::new(); nodes + 1];
        let mut pred = vec![Vec::new(); nodes + 1];
        for &(i, j) in &arcs {
            assert!(1 <= i && i < j && j <= nodes, "bad arc ({i},{j})");
            succ[i].push(j);
            pred[j].push(i);
        }
        FlipDag { nodes, arcs, succ, pred }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.pred[i]
    }

    pub fn indegree(&self, i: usize) -> usize {
        self.pred[i].len()
    }

    pub fn max_indegree(&self) -> usize {
        (1..=self.nodes).map(|i| self.indegree(i)).max().unwrap_or(0)
    }

    pub fn is_topological_sort(&self, perm: &[usize]) -> Result<bool, DagError> {
        check_permutation(perm, self.nodes)?;
        let mut pos = vec![0; self.nodes + 1];
        for (k, &p) in perm.iter().enumerate() {
            pos[p] = k;
        }
        Ok(self.arcs.iter().all(|&(i, j)| pos[i] < pos[j]))
    }

    /// Weakly connected components, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.nodes + 1];
        let mut out = Vec::new();
        for start in 1..=self.nodes {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = Vec::new();
            let mut stack = vec![start];
            label[start] = id;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.succ[v].iter().chain(&self.pred[v]) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A component is essential iff one of its flips removes an edge of the
    /// base triangulation that is absent from `target`.
    pub fn classify_essential(
        &self,
        seq: &FlipSequence,
        target: &Triangulation,
    ) -> Vec<(Vec<usize>, Essentiality)> {
        let changed: BTreeSet<Edge> = seq
            .base()
            .changed_edges(target)
            .map(|v| v.into_iter().collect())
            .unwrap_or_default();
        self.components()
            .into_iter()
            .map(|c| {
                let ess = if c.iter().any(|&i| changed.contains(&seq.record(i).eps)) {
                    Essentiality::Essential
                } else {
                    Essentiality::Nonessential
                };
                (c, ess)
            })
            .collect()
    }

    /// Directed reachability; every node reaches itself.
    pub fn path_exists(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        if from > to {
            return false;
        }
        let mut seen = vec![false; self.nodes + 1];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in &self.succ[v] {
                if w == to {
                    return true;
                }
                if w < to && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Kahn's algorithm; `pick` chooses among the currently available sources.
    fn topo_with(&self, mut pick: impl FnMut(&[usize]) -> usize) -> Vec<usize> {
        let mut indeg: Vec<usize> = (0..=self.nodes).map(|i| if i == 0 { 0 } else { self.indegree(i) }).collect();
        let mut ready: Vec<usize> = (1..=self.nodes).filter(|&i| indeg[i] == 0).collect();
        let mut out = Vec::with_capacity(self.nodes);
        while !ready.is_empty() {
            let k = pick(&ready);
            let v = ready.swap_remove(k);
            out.push(v);
            for &w in &self.succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        out
    }

    /// Lexicographically smallest topological sort.
    pub fn topo_lex_min(&self) -> Vec<usize> {
        self.topo_with(argmin)
    }

    /// Lexicographically largest topological sort.
    pub fn topo_lex_max(&self) -> Vec<usize> {
        self.topo_with(argmax)
    }

    /// Topological sort with uniformly random tie-breaking.
    pub fn topo_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.topo_with(|ready| rng.gen_range(0..ready.len()))
    }

    /// A topological sort in which each component forms one consecutive
    /// block, blocks in the order given by `component_order` (indices into
    /// [`FlipDag::components`]).
    pub fn topo_blocks(&self, component_order: &[usize]) -> Vec<usize> {
        let comps = self.components();
        let mut comp_of = vec![0; self.nodes + 1];
        for (c, nodes) in comps.iter().enumerate() {
            for &v in nodes {
                comp_of[v] = c;
            }
        }
        let mut current = 0;
        self.topo_with(|ready| {
            loop {
                let want = component_order[current];
                if let Some(k) = (0..ready.len()).filter(|&k| comp_of[ready[k]] == want).min_by_key(|&k| ready[k]) {
                    return k;
                }
                current += 1;
            }
        })
    }

    pub fn random_component_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.components().len()).collect();
        order.shuffle(rng);
        order
    }

    /// One `i -> j` line per arc, wrapped in a digraph block.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph flips {\n");
        for i in 1..=self.nodes {
            let _ = writeln!(s, "  {i};");
        }
        for &(i, j) in &self.arcs {
            let _ = writeln!(s, "  {i} -> {j};");
        }
        s.push_str("}\n");
        s
    }
}

fn argmin(ready: &[usize]) -> usize {
    (0..ready.len()).min_by_key(|&k| ready[k]).unwrap()
}

fn argmax(ready: &[usize]) -> usize {
    (0..ready.len()).max_by_key(|&k| ready[k]).unwrap()
}

/// Whether flips `i < h` of `seq` satisfy one of the sufficient conditions
/// for a directed path from `i` to `h` within their component:
/// the edge created by `h` crosses the edge removed by `i`; `h` recreates the
/// edge removed by `i`; both remove the same edge; or the edge created by `i`
/// is removed by `h` or shares a triangle with it in some `T_j`, `i <= j < h`.
pub fn path_condition(seq: &FlipSequence, i: usize, h: usize) -> Option<PathCondition> {
    debug_assert!(i < h);
    let (fi, fh) = (seq.record(i), seq.record(h));
    let pts = seq.base().point_set();
    if pts.crosses(fh.phi, fi.eps) {
        return Some(PathCondition::Crossing);
    }
    if fh.phi == fi.eps {
        return Some(PathCondition::Restores);
    }
    if fi.eps == fh.eps {
        return Some(PathCondition::SameEdge);
    }
    if fi.phi == fh.eps || (i..h).any(|j| seq.snapshot(j).share_triangle(fi.phi, fh.eps)) {
        return Some(PathCondition::Touches);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathCondition {
    Crossing,
    Restores,
    SameEdge,
    Touches,
}
