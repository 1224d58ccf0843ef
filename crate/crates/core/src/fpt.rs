//! Fixed-parameter decision procedure for "is the flip distance exactly k?".
//!
//! A walker sits on an edge of the current triangulation and owns a stack of
//! edges. Each action is one of
//!
//! * `Move` to an edge sharing a triangle with the current one,
//! * `FlipMove`: flip the current edge, then move to one of the four edges
//!   that bounded its quadrilateral,
//! * `FlipPushMove`: as `FlipMove`, pushing the new diagonal first,
//! * `FlipJump`: flip, then jump to the edge on top of the stack,
//! * `FlipJumpPop`: as `FlipJump`, popping the stack,
//!
//! so at most 4 + 4 + 4 + 1 + 1 = 14 choices exist in any state.
//!
//! The solver guesses how the `k` flips split into groups (a composition of
//! `k`). Group `l` is performed by one run of the walker that starts on the
//! next still-changed edge (an edge of the initial triangulation that is
//! absent from the target), performs exactly `k_l` flips, and uses at most
//! `2 k_l` actions. The instance is accepted if some choice of composition
//! and actions ends at the target.
//!
//! With pruning on, each run is explored breadth-first by action count and
//! deduplicated on `(triangulation, edge, stack, flips)`; failed
//! `(triangulation, position, flips left, stack)` configurations between runs
//! are remembered. With pruning off every action sequence is enumerated
//! depth-first.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::triangulation::{CanonicalKey, Edge, PointSetMismatch, Triangulation};

/// Upper bound on the number of concrete actions available in any state.
pub const MAX_ACTIONS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Move,
    FlipMove,
    FlipPushMove,
    FlipJump,
    FlipJumpPop,
}

impl ActionKind {
    pub fn flips(self) -> bool {
        !matches!(self, ActionKind::Move)
    }
}

/// A concrete action. `choice` indexes the sorted list of edges sharing a
/// triangle with the current edge; jump kinds carry none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Action {
    pub kind: ActionKind,
    pub choice: Option<u8>,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.choice {
            Some(c) => write!(f, "{:?}[{c}]", self.kind),
            None => write!(f, "{:?}", self.kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState {
    pub tri: Triangulation,
    pub at: Edge,
    /// Top of stack is the last element.
    pub stack: Vec<Edge>,
    pub flips_done: usize,
    pub actions_done: usize,
}

impl MachineState {
    pub fn new(tri: Triangulation, at: Edge) -> Self {
        MachineState { tri, at, stack: Vec::new(), flips_done: 0, actions_done: 0 }
    }
}

/// An applicable action, resolved against a state but not yet performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    action: Action,
    /// Edge the walker ends on.
    target: Edge,
}

/// Appends every applicable action from `(tri, at, stack)` to `out`.
fn enumerate_steps(tri: &Triangulation, at: Edge, stack: &[Edge], out: &mut Vec<Step>) {
    out.clear();
    let Ok(around) = tri.edges_sharing_triangle(at) else {
        return;
    };
    for (i, &e) in around.iter().enumerate() {
        out.push(Step { action: Action { kind: ActionKind::Move, choice: Some(i as u8) }, target: e });
    }
    if !tri.is_admissible(at) {
        return;
    }
    // Interior edge: `around` is exactly the quadrilateral boundary, which
    // survives the flip.
    for kind in [ActionKind::FlipMove, ActionKind::FlipPushMove] {
        for (i, &e) in around.iter().enumerate() {
            out.push(Step { action: Action { kind, choice: Some(i as u8) }, target: e });
        }
    }
    // The flip removes only `at`, so the top survives iff it is another edge
    // of the current triangulation.
    if let Some(&top) = stack.last() {
        if top != at && tri.contains_edge(top) {
            for kind in [ActionKind::FlipJump, ActionKind::FlipJumpPop] {
                out.push(Step { action: Action { kind, choice: None }, target: top });
            }
        }
    }
}

/// Every action applicable in `s`, paired with the resulting state.
pub fn legal_actions(s: &MachineState) -> Vec<(Action, MachineState)> {
    let mut steps = Vec::with_capacity(MAX_ACTIONS);
    enumerate_steps(&s.tri, s.at, &s.stack, &mut steps);
    steps
        .into_iter()
        .map(|step| {
            let mut next = s.clone();
            next.actions_done += 1;
            if step.action.kind.flips() {
                let phi = next.tri.flip_in_place(s.at).expect("admissible");
                next.flips_done += 1;
                match step.action.kind {
                    ActionKind::FlipPushMove => next.stack.push(phi),
                    ActionKind::FlipJumpPop => {
                        next.stack.pop();
                    }
                    _ => {}
                }
            }
            next.at = step.target;
            (step.action, next)
        })
        .collect()
}

/// An ordered tuple of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// All compositions of `k` in lexicographic order; `k = 0` yields the empty
/// composition once.
pub fn compositions(k: usize) -> Compositions {
    Compositions { next: Some(vec![1; k]) }
}

pub struct Compositions {
    next: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.next.take()?;
        if cur.len() >= 2 {
            // Lexicographic successor: fold the last part into the one before
            // it plus a tail of ones.
            let mut succ = cur.clone();
            let last = succ.pop().unwrap();
            *succ.last_mut().unwrap() += 1;
            succ.extend(std::iter::repeat_n(1, last - 1));
            self.next = Some(succ);
        }
        Some(Composition(cur))
    }
}

/// What happens to the stack between runs of the walker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StackMode {
    #[default]
    ClearPerIteration,
    Persist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub pruning: bool,
    pub stack_mode: StackMode,
    /// Abort once this many machine states have been generated.
    pub state_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { pruning: true, stack_mode: StackMode::ClearPerIteration, state_budget: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    /// Successor states generated.
    pub states_explored: u64,
    /// States expanded (action lists computed).
    pub expansions: u64,
    /// Largest action list seen.
    pub max_branching: usize,
    /// Action lists longer than [`MAX_ACTIONS`]; always zero.
    pub branching_violations: u64,
}

impl SolverStats {
    pub fn merge(&mut self, other: &SolverStats) {
        self.states_explored += other.states_explored;
        self.expansions += other.expansions;
        self.max_branching = self.max_branching.max(other.max_branching);
        self.branching_violations += other.branching_violations;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    PointSetMismatch(#[from] PointSetMismatch),
    #[error("solver exceeded the budget of {0} states")]
    BudgetExceeded(u64),
}

/// Result of one exact-k search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub accepted: bool,
    /// Flips of an accepting run, in order.
    pub witness: Option<Vec<Edge>>,
}

/// One finished run of the walker.
#[derive(Debug, Clone)]
struct RunOutcome {
    tri: Triangulation,
    stack: Vec<Edge>,
    flips: Vec<Edge>,
}

type RunKey = (CanonicalKey, Edge, usize, Vec<Edge>);
type FailKey = (CanonicalKey, usize, usize, Vec<Edge>);

pub struct Solver {
    config: SolverConfig,
    stats: SolverStats,
    steps_pool: Vec<Vec<Step>>,
    run_cache: HashMap<RunKey, std::rc::Rc<Vec<RunOutcome>>>,
    failed: HashSet<FailKey>,
}

/// Search context for one `(initial, target, k)` query.
/// Called with (triangulation, stack, flips) when a run completes; returning
/// `true` stops the enumeration.
type RunVisitor<'a> = dyn FnMut(&mut Solver, &Triangulation, &[Edge], &[Edge]) -> Result<bool, SolverError> + 'a;

struct Query<'a> {
    target: &'a Triangulation,
    order: &'a [Edge],
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            stats: SolverStats::default(),
            steps_pool: Vec::new(),
            run_cache: HashMap::new(),
            failed: HashSet::new(),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    pub fn reset_stats(&mut self) {
        self.stats = SolverStats::default();
    }

    fn record_expansion(&mut self, branching: usize) -> Result<(), SolverError> {
        self.stats.expansions += 1;
        self.stats.states_explored += branching as u64;
        self.stats.max_branching = self.stats.max_branching.max(branching);
        if branching > MAX_ACTIONS {
            self.stats.branching_violations += 1;
        }
        match self.config.state_budget {
            Some(b) if self.stats.states_explored > b => Err(SolverError::BudgetExceeded(b)),
            _ => Ok(()),
        }
    }

    fn take_steps(&mut self) -> Vec<Step> {
        self.steps_pool.pop().unwrap_or_else(|| Vec::with_capacity(MAX_ACTIONS))
    }

    /// Triangulations reachable from `(tri, start, empty stack)` by runs that
    /// perform exactly `k_l` flips within `2 k_l` actions, deduplicated.
    pub fn run_iteration(
        &mut self,
        tri: &Triangulation,
        start: Edge,
        k_l: usize,
    ) -> Result<Vec<Triangulation>, SolverError> {
        let runs = if self.config.pruning {
            self.runs_bfs(tri, start, k_l, &[])?
        } else {
            let mut all = Vec::new();
            let mut work = tri.clone();
            let mut stack = Vec::new();
            let mut flips = Vec::new();
            self.runs_dfs(&mut work, start, &mut stack, &mut flips, 0, k_l, &mut |_, t, s, f| {
                all.push(RunOutcome { tri: t.clone(), stack: s.to_vec(), flips: f.to_vec() });
                Ok(false)
            })?;
            all
        };
        let mut seen = HashSet::new();
        Ok(runs
            .into_iter()
            .filter(|r| seen.insert(r.tri.canonical_key()))
            .map(|r| r.tri)
            .collect())
    }

    /// Breadth-first over action count with state deduplication. The first
    /// visit of a state uses the fewest actions, so dropping later visits
    /// loses nothing.
    fn runs_bfs(
        &mut self,
        tri: &Triangulation,
        start: Edge,
        k_l: usize,
        stack: &[Edge],
    ) -> Result<Vec<RunOutcome>, SolverError> {
        struct Node {
            tri: Triangulation,
            at: Edge,
            stack: Vec<Edge>,
            flips: Vec<Edge>,
        }
        let mut outcomes = Vec::new();
        let mut finished: HashSet<(CanonicalKey, Vec<Edge>)> = HashSet::new();
        let mut seen: HashSet<(CanonicalKey, Edge, Vec<Edge>, usize)> = HashSet::new();
        seen.insert((tri.canonical_key(), start, stack.to_vec(), 0));
        let mut frontier =
            vec![Node { tri: tri.clone(), at: start, stack: stack.to_vec(), flips: Vec::new() }];
        let mut steps = self.take_steps();
        for actions in 0..2 * k_l {
            let budget_after = 2 * k_l - actions - 1;
            let mut next = Vec::new();
            for node in frontier {
                enumerate_steps(&node.tri, node.at, &node.stack, &mut steps);
                self.record_expansion(steps.len())?;
                for step in &steps {
                    let mut s = Node {
                        tri: node.tri.clone(),
                        at: step.target,
                        stack: node.stack.clone(),
                        flips: node.flips.clone(),
                    };
                    if step.action.kind.flips() {
                        let phi = s.tri.flip_in_place(node.at).expect("admissible");
                        s.flips.push(node.at);
                        match step.action.kind {
                            ActionKind::FlipPushMove => s.stack.push(phi),
                            ActionKind::FlipJumpPop => {
                                s.stack.pop();
                            }
                            _ => {}
                        }
                        if s.flips.len() == k_l {
                            if finished.insert((s.tri.canonical_key(), s.stack.clone())) {
                                outcomes.push(RunOutcome { tri: s.tri, stack: s.stack, flips: s.flips });
                            }
                            continue;
                        }
                    }
                    if budget_after < k_l - s.flips.len() {
                        continue;
                    }
                    if seen.insert((s.tri.canonical_key(), s.at, s.stack.clone(), s.flips.len())) {
                        next.push(s);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        self.steps_pool.push(steps);
        Ok(outcomes)
    }

    /// Depth-first over every action sequence, flipping in place and undoing
    /// on the way back. `on_done` is called for each completed run and may
    /// stop the search by returning `true`.
    #[allow(clippy::too_many_arguments)]
    fn runs_dfs(
        &mut self,
        tri: &mut Triangulation,
        at: Edge,
        stack: &mut Vec<Edge>,
        flips: &mut Vec<Edge>,
        actions: usize,
        k_l: usize,
        on_done: &mut RunVisitor<'_>,
    ) -> Result<bool, SolverError> {
        let mut steps = self.take_steps();
        enumerate_steps(tri, at, stack, &mut steps);
        self.record_expansion(steps.len())?;
        let budget_after = 2 * k_l - actions - 1;
        let mut found = false;
        for step in &steps {
            if !step.action.kind.flips() {
                if budget_after >= k_l - flips.len() {
                    found = self.runs_dfs(tri, step.target, stack, flips, actions + 1, k_l, on_done)?;
                }
            } else {
                let phi = tri.flip_in_place(at).expect("admissible");
                flips.push(at);
                let popped = match step.action.kind {
                    ActionKind::FlipPushMove => {
                        stack.push(phi);
                        None
                    }
                    ActionKind::FlipJumpPop => stack.pop(),
                    _ => None,
                };
                found = if flips.len() == k_l {
                    on_done(self, tri, stack, flips)?
                } else if budget_after >= k_l - flips.len() {
                    self.runs_dfs(tri, step.target, stack, flips, actions + 1, k_l, on_done)?
                } else {
                    false
                };
                match step.action.kind {
                    ActionKind::FlipPushMove => {
                        stack.pop();
                    }
                    ActionKind::FlipJumpPop => stack.push(popped.expect("nonempty stack")),
                    _ => {}
                }
                flips.pop();
                tri.flip_in_place(phi).expect("flip back");
            }
            if found {
                break;
            }
        }
        self.steps_pool.push(steps);
        Ok(found)
    }

    /// Whether some composition of `k` and some runs of the walker transform
    /// `initial` into `target` with exactly `k` flips.
    pub fn exists_solution_with_exactly_k_flips(
        &mut self,
        initial: &Triangulation,
        target: &Triangulation,
        k: usize,
    ) -> Result<Decision, SolverError> {
        initial.check_same_point_set(target)?;
        self.run_cache.clear();
        self.failed.clear();
        if k == 0 {
            let accepted = initial == target;
            return Ok(Decision { accepted, witness: accepted.then(Vec::new) });
        }
        let order = initial.changed_edges(target)?;
        let q = Query { target, order: &order };
        let witness = if self.config.pruning {
            self.search_memo(&q, initial, 0, k, &[])?
        } else {
            let mut found = None;
            for comp in compositions(k) {
                let mut work = initial.clone();
                let mut flips = Vec::new();
                if self.search_raw(&q, &mut work, 0, comp.parts(), &[], &mut flips)? {
                    found = Some(flips);
                    break;
                }
            }
            found
        };
        Ok(Decision { accepted: witness.is_some(), witness })
    }

    /// Exactly `k`: a `k`-flip solution exists and none with fewer flips.
    pub fn decide_flip_distance_eq(
        &mut self,
        initial: &Triangulation,
        target: &Triangulation,
        k: usize,
    ) -> Result<bool, SolverError> {
        for shorter in 0..k {
            if self.exists_solution_with_exactly_k_flips(initial, target, shorter)?.accepted {
                return Ok(false);
            }
        }
        Ok(self.exists_solution_with_exactly_k_flips(initial, target, k)?.accepted)
    }

    /// Smallest `k <= max_k` accepted by the solver.
    pub fn smallest_accepted(
        &mut self,
        initial: &Triangulation,
        target: &Triangulation,
        max_k: usize,
    ) -> Result<Option<usize>, SolverError> {
        for k in 0..=max_k {
            if self.exists_solution_with_exactly_k_flips(initial, target, k)?.accepted {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// First still-changed edge of the order at or after `pos`.
    fn next_start(q: &Query<'_>, tri: &Triangulation, mut pos: usize) -> Option<usize> {
        while pos < q.order.len() && !tri.contains_edge(q.order[pos]) {
            pos += 1;
        }
        (pos < q.order.len()).then_some(pos)
    }

    fn start_stack(&self, stack: &[Edge]) -> Vec<Edge> {
        match self.config.stack_mode {
            StackMode::ClearPerIteration => Vec::new(),
            StackMode::Persist => stack.to_vec(),
        }
    }

    /// Memoized search: the composition is chosen part by part.
    fn search_memo(
        &mut self,
        q: &Query<'_>,
        tri: &Triangulation,
        pos: usize,
        remaining: usize,
        stack: &[Edge],
    ) -> Result<Option<Vec<Edge>>, SolverError> {
        if remaining == 0 {
            return Ok((tri == q.target).then(Vec::new));
        }
        let Some(pos) = Self::next_start(q, tri, pos) else {
            return Ok(None);
        };
        let stack = self.start_stack(stack);
        let fail_key = (tri.canonical_key(), pos, remaining, stack.clone());
        if self.failed.contains(&fail_key) {
            return Ok(None);
        }
        let start = q.order[pos];
        for part in 1..=remaining {
            let key = (tri.canonical_key(), start, part, stack.clone());
            let runs = match self.run_cache.get(&key) {
                Some(r) => r.clone(),
                None => {
                    let r = std::rc::Rc::new(self.runs_bfs(tri, start, part, &stack)?);
                    self.run_cache.insert(key, r.clone());
                    r
                }
            };
            for run in runs.iter() {
                if let Some(rest) = self.search_memo(q, &run.tri, pos + 1, remaining - part, &run.stack)? {
                    let mut w = run.flips.clone();
                    w.extend(rest);
                    return Ok(Some(w));
                }
            }
        }
        self.failed.insert(fail_key);
        Ok(None)
    }

    /// Unmemoized search for one fixed composition.
    fn search_raw(
        &mut self,
        q: &Query<'_>,
        tri: &mut Triangulation,
        pos: usize,
        parts: &[usize],
        stack: &[Edge],
        flips: &mut Vec<Edge>,
    ) -> Result<bool, SolverError> {
        let Some((&part, rest)) = parts.split_first() else {
            return Ok(&*tri == q.target);
        };
        let Some(pos) = Self::next_start(q, tri, pos) else {
            return Ok(false);
        };
        let mut run_stack = self.start_stack(stack);
        let start = q.order[pos];
        let mut run_flips = Vec::new();
        let mut accepted_tail: Option<Vec<Edge>> = None;
        let found = self.runs_dfs(tri, start, &mut run_stack, &mut run_flips, 0, part, &mut |solver, t, s, f| {
            let mut t = t.clone();
            let mut tail = Vec::new();
            if solver.search_raw(q, &mut t, pos + 1, rest, s, &mut tail)? {
                let mut w = f.to_vec();
                w.extend(tail);
                accepted_tail = Some(w);
                return Ok(true);
            }
            Ok(false)
        })?;
        if found {
            flips.extend(accepted_tail.expect("witness recorded"));
        }
        Ok(found)
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

/// One-shot convenience wrapper.
pub fn decide_flip_distance_eq(
    initial: &Triangulation,
    target: &Triangulation,
    k: usize,
    config: SolverConfig,
) -> Result<bool, SolverError> {
    Solver::new(config).decide_flip_distance_eq(initial, target, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::FlipSequence;
    use crate::oracle::{bfs_distance, BfsConfig};

    fn square() -> Triangulation {
        Triangulation::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)], &[[0, 1, 2], [0, 2, 3]]).unwrap()
    }

    fn pentagon_fans() -> (Triangulation, Triangulation) {
        let pts = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)];
        let a = Triangulation::from_coords(&pts, &[[0, 1, 2], [0, 2, 3], [0, 3, 4]]).unwrap();
        let b = Triangulation::build(a.point_set().clone(), &[[1, 2, 3], [1, 3, 4], [1, 4, 0]]).unwrap();
        (a, b)
    }

    fn both_modes() -> [SolverConfig; 2] {
        [SolverConfig::default(), SolverConfig { pruning: false, ..Default::default() }]
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compositions(0).collect::<Vec<_>>(), vec![Composition(vec![])]);
        assert_eq!(compositions(1).collect::<Vec<_>>(), vec![Composition(vec![1])]);
        let c3: Vec<_> = compositions(3).map(|c| c.0).collect();
        assert_eq!(c3, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(compositions(10).count(), 512);
        let all: Vec<_> = compositions(6).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|c| c.total() == 6 && c.parts().iter().all(|&p| p >= 1)));
    }

    #[test]
    fn legal_actions_on_square() {
        let s = MachineState::new(square(), Edge::new(0, 2));
        let acts = legal_actions(&s);
        assert_eq!(acts.len(), 12);
        let count = |k| acts.iter().filter(|(a, _)| a.kind == k).count();
        assert_eq!(count(ActionKind::Move), 4);
        assert_eq!(count(ActionKind::FlipMove), 4);
        assert_eq!(count(ActionKind::FlipPushMove), 4);
        for (a, next) in &acts {
            assert_eq!(next.actions_done, 1);
            assert_eq!(next.flips_done, a.kind.flips() as usize);
            assert!(next.tri.contains_edge(next.at));
            assert_eq!(next.stack.len(), (a.kind == ActionKind::FlipPushMove) as usize);
            if a.kind == ActionKind::FlipPushMove {
                assert_eq!(next.stack, vec![Edge::new(1, 3)]);
            }
        }

        let s = MachineState::new(square(), Edge::new(0, 1));
        let acts = legal_actions(&s);
        assert_eq!(acts.len(), 2);
        assert!(acts.iter().all(|(a, _)| a.kind == ActionKind::Move));
    }

    #[test]
    fn jump_actions_need_a_live_stack_top() {
        let (a, _) = pentagon_fans();
        let mut s = MachineState::new(a.clone(), Edge::new(0, 2));
        s.stack = vec![Edge::new(0, 3)];
        let acts = legal_actions(&s);
        assert_eq!(acts.len(), 14);
        let (_, jumped) = acts.iter().find(|(a, _)| a.kind == ActionKind::FlipJumpPop).unwrap();
        assert_eq!(jumped.at, Edge::new(0, 3));
        assert!(jumped.stack.is_empty());
        // The top is the edge being flipped: no jump.
        s.stack = vec![Edge::new(0, 2)];
        assert_eq!(legal_actions(&s).len(), 12);
        // The top is not in the triangulation: no jump.
        s.stack = vec![Edge::new(1, 3)];
        assert_eq!(legal_actions(&s).len(), 12);
    }

    #[test]
    fn run_iteration_examples() {
        for cfg in both_modes() {
            let mut solver = Solver::new(cfg);
            let t = square();
            let out = solver.run_iteration(&t, Edge::new(0, 2), 1).unwrap();
            let (u, _) = t.apply_flip(Edge::new(0, 2)).unwrap();
            assert_eq!(out, vec![u.clone()]);
            // Move to the diagonal, then flip it: two actions.
            let out = solver.run_iteration(&t, Edge::new(0, 1), 1).unwrap();
            assert_eq!(out, vec![u]);
            let out = solver.run_iteration(&t, Edge::new(0, 1), 2).unwrap();
            // Two flips of the square's only diagonal return to the start.
            assert_eq!(out, vec![t.clone()]);
        }
    }

    #[test]
    fn run_iteration_outputs_are_k_flips_away() {
        let (a, _) = pentagon_fans();
        for cfg in both_modes() {
            let mut solver = Solver::new(cfg);
            for k_l in 1..=3 {
                let out = solver.run_iteration(&a, Edge::new(0, 2), k_l).unwrap();
                assert!(!out.is_empty());
                for t in &out {
                    let d = bfs_distance(&a, t, BfsConfig::default()).unwrap().distance.unwrap();
                    assert!(d <= k_l, "k_l={k_l} d={d}");
                }
            }
        }
    }

    #[test]
    fn exists_examples() {
        for cfg in both_modes() {
            let mut solver = Solver::new(cfg);
            let t = square();
            assert!(solver.exists_solution_with_exactly_k_flips(&t, &t, 0).unwrap().accepted);
            assert!(!solver.exists_solution_with_exactly_k_flips(&t, &t, 1).unwrap().accepted);
            let (u, _) = t.apply_flip(Edge::new(0, 2)).unwrap();
            assert!(solver.exists_solution_with_exactly_k_flips(&t, &u, 1).unwrap().accepted);
            assert!(!solver.exists_solution_with_exactly_k_flips(&t, &u, 0).unwrap().accepted);

            let (a, b) = pentagon_fans();
            let d = solver.exists_solution_with_exactly_k_flips(&a, &b, 2).unwrap();
            assert!(d.accepted);
            let w = d.witness.unwrap();
            assert_eq!(w.len(), 2);
            assert_eq!(FlipSequence::apply(&a, &w).unwrap().last(), &b);
            assert!(!solver.exists_solution_with_exactly_k_flips(&a, &b, 1).unwrap().accepted);
        }
    }

    #[test]
    fn decide_examples() {
        let t = square();
        let (u, _) = t.apply_flip(Edge::new(0, 2)).unwrap();
        for cfg in both_modes() {
            for k in 0..4 {
                assert_eq!(decide_flip_distance_eq(&t, &t, k, cfg).unwrap(), k == 0);
                assert_eq!(decide_flip_distance_eq(&t, &u, k, cfg).unwrap(), k == 1);
            }
        }
        let other = Triangulation::from_coords(&[(0, 0), (2, 0), (2, 2), (0, 2)], &[[0, 1, 2], [0, 2, 3]]).unwrap();
        assert!(matches!(
            decide_flip_distance_eq(&t, &other, 1, SolverConfig::default()),
            Err(SolverError::PointSetMismatch(_))
        ));
    }

    #[test]
    fn state_budget() {
        let (a, b) = pentagon_fans();
        let cfg = SolverConfig { state_budget: Some(5), ..Default::default() };
        assert_eq!(
            Solver::new(cfg).exists_solution_with_exactly_k_flips(&a, &b, 2),
            Err(SolverError::BudgetExceeded(5))
        );
    }
}
