//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flipdist::dag::{path_condition, FlipDag, FlipSequence};
use flipdist::fpt::{compositions, legal_actions, MachineState, Solver, SolverConfig, SolverStats, MAX_ACTIONS};
use flipdist::instance::{generate_instance, scramble, GenConfig, HullShape, Instance};
use flipdist::oracle::{bfs_distance, enumerate_minimal_solutions, BfsConfig};
use flipdist::Triangulation;

const PRUNED_BUDGET: Duration = Duration::from_secs(600);
const RAW_BUDGET: Duration = Duration::from_secs(60);

struct Case {
    seed: u64,
    inst: Instance,
    d: usize,
}

struct Report {
    lines: Vec<(bool, String, String)>,
}

impl Report {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        eprintln!("finished {name}");
        self.lines.push((ok, name.to_string(), detail));
    }
}

fn instance(n: usize, shape: HullShape, scramble: usize, seed: u64) -> Instance {
    let file = generate_instance(&GenConfig::new(n, shape, scramble, seed)).expect("generator");
    Instance::from_file(file).expect("generated instance is valid")
}

/// Seeded instances with `n` in 5..=8 and oracle distance at most 4,
/// spread over distances: up to 12 at distance 0 and 30 at each of 1..=4.
fn oracle_cases() -> Vec<Case> {
    let quota = [12, 30, 30, 30, 30];
    let mut have = [0usize; 5];
    let mut out = Vec::new();
    for seed in 0u64.. {
        if have == quota || seed > 20_000 {
            break;
        }
        let n = 5 + (seed % 4) as usize;
        let shape = if seed % 3 == 0 { HullShape::Polygon } else { HullShape::Random };
        let inst = instance(n, shape, 2 + (seed % 5) as usize, seed);
        let Some(d) = bfs_distance(&inst.initial, &inst.target, BfsConfig::default()).unwrap().distance else {
            continue;
        };
        if d < quota.len() && have[d] < quota[d] {
            have[d] += 1;
            out.push(Case { seed, inst, d });
        }
    }
    out
}

/// Checks `exists(k)` for `k <= d` and derives the exact-distance decisions:
/// accepted at `d`, rejected at every smaller `k`.
fn decide_matches(solver: &mut Solver, c: &Case, tally: &mut DagTally) -> Result<(), String> {
    let mut accepted_below = false;
    for k in 0..=c.d {
        let exists = solver
            .exists_solution_with_exactly_k_flips(&c.inst.initial, &c.inst.target, k)
            .map_err(|e| format!("seed {}: {e}", c.seed))?;
        let decide = exists.accepted && !accepted_below;
        if decide != (k == c.d) {
            return Err(format!("seed {} d={}: decide(k={k}) = {decide}", c.seed, c.d));
        }
        if let Some(w) = exists.witness {
            let seq = FlipSequence::apply(&c.inst.initial, &w).map_err(|e| format!("seed {}: {e}", c.seed))?;
            if seq.last() != &c.inst.target || w.len() != k {
                return Err(format!("seed {}: witness of length {} does not reach the target", c.seed, w.len()));
            }
            tally.bounds(&FlipDag::build(&seq), format!("seed {} witness", c.seed));
        }
        accepted_below |= exists.accepted;
    }
    Ok(())
}

fn run_oracle_equivalence(report: &mut Report, cases: &[Case], stats: &mut SolverStats, tally: &mut DagTally) {
    let mut failures = Vec::new();
    let t0 = Instant::now();
    let mut solver = Solver::new(SolverConfig::default());
    for c in cases {
        if let Err(e) = decide_matches(&mut solver, c, tally) {
            failures.push(e);
        }
    }
    let pruned = t0.elapsed();
    stats.merge(solver.stats());

    let raw_cases: Vec<&Case> = cases.iter().filter(|c| c.d <= 3).collect();
    let t1 = Instant::now();
    let mut raw = Solver::new(SolverConfig { pruning: false, ..SolverConfig::default() });
    for c in &raw_cases {
        if let Err(e) = decide_matches(&mut raw, c, tally) {
            failures.push(format!("pruning off: {e}"));
        }
    }
    let unpruned = t1.elapsed();
    stats.merge(raw.stats());

    let mut hist = [0usize; 5];
    for c in cases {
        hist[c.d] += 1;
    }
    let ok = failures.is_empty() && cases.len() >= 100 && pruned <= PRUNED_BUDGET && unpruned <= RAW_BUDGET;
    let mut detail = format!(
        "{} instances (by distance 0..4: {hist:?}); pruning on {:.2?} (budget {PRUNED_BUDGET:?}); \
         pruning off on {} instances with d<=3 {:.2?} (budget {RAW_BUDGET:?}); {} mismatches",
        cases.len(),
        pruned,
        raw_cases.len(),
        unpruned,
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    report.record("1 oracle equivalence", ok, detail);
}

fn random_sequence(rng: &mut ChaCha8Rng, seed: u64) -> FlipSequence {
    let n = 5 + rng.gen_range(0..4);
    let shape = if rng.gen_bool(0.3) { HullShape::Polygon } else { HullShape::Random };
    let inst = instance(n, shape, 0, seed);
    let len = rng.gen_range(1..=6);
    let mut t = inst.initial.clone();
    let mut edges = Vec::new();
    for _ in 0..len {
        let Some(&e) = t.admissible_edges().choose(rng) else { break };
        t.flip_in_place(e).unwrap();
        edges.push(e);
    }
    FlipSequence::apply(&inst.initial, &edges).unwrap()
}

fn sampled_sorts(dag: &FlipDag, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut sorts = vec![dag.topo_lex_min(), dag.topo_lex_max()];
    for _ in 0..4 {
        sorts.push(dag.topo_random(rng));
    }
    for _ in 0..3 {
        let order = dag.random_component_order(rng);
        sorts.push(dag.topo_blocks(&order));
    }
    sorts
}

fn check_replay(seq: &FlipSequence, dag: &FlipDag, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let sorts = sampled_sorts(dag, rng);
    for perm in &sorts {
        if !dag.is_topological_sort(perm).map_err(|e| e.to_string())? {
            return Err(format!("{perm:?} is not a topological sort"));
        }
        let t = seq.replay(perm).map_err(|e| format!("{perm:?}: {e}"))?;
        if &t != seq.last() {
            return Err(format!("{perm:?} replays to a different triangulation"));
        }
    }
    Ok(sorts.len())
}

fn check_bounds(dag: &FlipDag) -> Result<(), String> {
    let nodes = dag.node_count();
    if dag.max_indegree() > 5 || dag.arcs().len() > 5 * nodes {
        return Err(format!("{nodes} nodes, {} arcs, max indegree {}", dag.arcs().len(), dag.max_indegree()));
    }
    Ok(())
}

/// Pairs `i < h` in one component that satisfy a path condition; returns
/// (pairs checked, violations).
fn check_paths(seq: &FlipSequence, dag: &FlipDag) -> (usize, Vec<String>) {
    let mut comp_of = vec![usize::MAX; seq.len() + 1];
    for (c, nodes) in dag.components().iter().enumerate() {
        for &v in nodes {
            comp_of[v] = c;
        }
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for h in 1..=seq.len() {
        for i in 1..h {
            if comp_of[i] != comp_of[h] {
                continue;
            }
            if let Some(cond) = path_condition(seq, i, h) {
                checked += 1;
                if !dag.path_exists(i, h) {
                    bad.push(format!("{i}->{h} ({cond:?})"));
                }
            }
        }
    }
    (checked, bad)
}

struct DagTally {
    dags: usize,
    bound_failures: Vec<String>,
    path_pairs: usize,
    path_failures: Vec<String>,
}

impl DagTally {
    fn bounds(&mut self, dag: &FlipDag, label: String) {
        self.dags += 1;
        if let Err(e) = check_bounds(dag) {
            self.bound_failures.push(format!("{label}: {e}"));
        }
    }
}

fn run_replay(report: &mut Report, tally: &mut DagTally) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sorts = 0;
    let mut failures = Vec::new();
    const SEQUENCES: u64 = 250;
    for s in 0..SEQUENCES {
        let seq = random_sequence(&mut rng, 10_000 + s);
        let dag = FlipDag::build(&seq);
        match check_replay(&seq, &dag, &mut rng) {
            Ok(k) => sorts += k,
            Err(e) => failures.push(format!("sequence {s}: {e}")),
        }
        tally.bounds(&dag, format!("sequence {s}"));
    }
    let mut detail = format!("{SEQUENCES} sequences (length <= 6, n <= 8), {sorts} sampled sorts replayed");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; {} failures, first: {f}", failures.len()));
    }
    report.record("2 topological sorts replay", failures.is_empty(), detail);
}

fn run_essential(report: &mut Report, cases: &[Case], tally: &mut DagTally) {
    const LIMIT: usize = 20;
    let mut solutions = 0;
    let mut components = 0;
    let mut failures = Vec::new();
    for c in cases.iter().filter(|c| c.d > 0) {
        let sols = enumerate_minimal_solutions(&c.inst.initial, &c.inst.target, c.d, LIMIT).unwrap();
        if sols.is_empty() {
            failures.push(format!("seed {}: no minimal solution enumerated", c.seed));
        }
        for seq in &sols {
            solutions += 1;
            let dag = FlipDag::build(seq);
            tally.bounds(&dag, format!("seed {}", c.seed));
            let (pairs, bad) = check_paths(seq, &dag);
            tally.path_pairs += pairs;
            tally.path_failures.extend(bad.into_iter().map(|b| format!("seed {}: {b}", c.seed)));
            for (comp, ess) in dag.classify_essential(seq, &c.inst.target) {
                components += 1;
                if ess != flipdist::dag::Essentiality::Essential {
                    failures.push(format!("seed {}: component {comp:?} is nonessential", c.seed));
                }
            }
        }
    }
    let mut detail = format!("{solutions} minimal solutions (<= {LIMIT} per instance), {components} components");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; {} failures, first: {f}", failures.len()));
    }
    report.record("4 minimal solutions have only essential components", failures.is_empty(), detail);
}

fn run_bounds(report: &mut Report, tally: &DagTally) {
    let mut detail = format!(
        "{} DAGs (witnesses, random sequences, minimal solutions): indegree <= 5 and arcs <= 5 * nodes",
        tally.dags
    );
    if let Some(f) = tally.bound_failures.first() {
        detail.push_str(&format!("; {} failures, first: {f}", tally.bound_failures.len()));
    }
    report.record("3 DAG degree bounds", tally.bound_failures.is_empty(), detail);
}

fn run_paths(report: &mut Report, tally: &DagTally) {
    let mut detail = format!("{} same-component pairs with a path condition in minimal solutions", tally.path_pairs);
    if let Some(f) = tally.path_failures.first() {
        detail.push_str(&format!("; {} without a path, first: {f}", tally.path_failures.len()));
    }
    report.record("5 path conditions imply paths", tally.path_failures.is_empty() && tally.path_pairs > 0, detail);
}

/// Walker states with random positions and stacks; the stack mixes edges of
/// the triangulation with edges that are not in it.
fn run_branching(report: &mut Report, stats: &SolverStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb4a);
    let mut max_seen = 0;
    let mut violations = 0;
    const STATES: u64 = 2_000;
    for s in 0..STATES {
        let inst = instance(5 + (s % 4) as usize, HullShape::Random, 5, 20_000 + s);
        let tri = scramble(&inst.initial, 3, &mut rng);
        let edges: Vec<_> = tri.edges().collect();
        let foreign: Vec<_> = inst.target.edges().filter(|e| !tri.contains_edge(*e)).collect();
        let mut state = MachineState::new(tri.clone(), *edges.choose(&mut rng).unwrap());
        for _ in 0..rng.gen_range(0..4) {
            let pool = if rng.gen_bool(0.5) || foreign.is_empty() { &edges } else { &foreign };
            state.stack.push(*pool.choose(&mut rng).unwrap());
        }
        let b = legal_actions(&state).len();
        max_seen = max_seen.max(b);
        if b > MAX_ACTIONS {
            violations += 1;
        }
    }
    let worst = max_seen.max(stats.max_branching);
    let total_violations = violations + stats.branching_violations;
    let ok = worst <= MAX_ACTIONS && total_violations == 0;
    report.record(
        "6 branching factor",
        ok,
        format!(
            "max {worst} (limit {MAX_ACTIONS}) over {} solver expansions and {STATES} sampled states; {total_violations} violations",
            stats.expansions
        ),
    );
}

fn run_compositions(report: &mut Report) {
    let mut bad = Vec::new();
    for k in 1..=16usize {
        let mut count = 0u64;
        let mut ok = true;
        for c in compositions(k) {
            count += 1;
            ok &= c.total() == k && c.parts().iter().all(|&p| p >= 1);
        }
        if count != 1 << (k - 1) || !ok {
            bad.push(format!("k={k}: {count}"));
        }
    }
    report.record(
        "7 composition counts",
        bad.is_empty(),
        if bad.is_empty() { "2^(k-1) compositions for k = 1..=16".into() } else { bad.join(", ") },
    );
}

fn run_double_flip(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1f);
    const FLIPS: usize = 10_000;
    let mut failures = Vec::new();
    let mut done = 0;
    let mut s = 0u64;
    while done < FLIPS {
        let n = 4 + (s % 7) as usize;
        let shape = if s.is_multiple_of(4) { HullShape::Polygon } else { HullShape::Random };
        let inst = instance(n, shape, 0, 30_000 + s);
        s += 1;
        let mut t: Triangulation = scramble(&inst.initial, 8, &mut rng);
        let (tris, edges) = (t.triangles().len(), t.num_edges());
        let (nn, h) = (t.num_points(), t.hull_size());
        if tris != 2 * nn - h - 2 || edges != 3 * nn - h - 3 {
            failures.push(format!("seed {}: counts {tris}/{edges}", 30_000 + s));
        }
        for _ in 0..50 {
            let Some(&e) = t.admissible_edges().choose(&mut rng) else { break };
            let (flipped, phi) = t.apply_flip(e).unwrap();
            let (back, psi) = flipped.apply_flip(phi).unwrap();
            if back != t || psi != e || flipped.triangles().len() != tris || flipped.num_edges() != edges {
                failures.push(format!("flip {e:?} -> {phi:?} not reversible"));
            }
            done += 1;
            t = flipped;
            if done == FLIPS {
                break;
            }
        }
    }
    let mut detail = format!("{FLIPS} random flips over {s} point sets");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; {} failures, first: {f}", failures.len()));
    }
    report.record("8 double flip restores; counts invariant", failures.is_empty(), detail);
}

fn run_neutrality(report: &mut Report, cases: &[Case], stats: &mut SolverStats) {
    let mut on = Solver::new(SolverConfig::default());
    let mut off = Solver::new(SolverConfig { pruning: false, ..SolverConfig::default() });
    let picked: Vec<&Case> = cases.iter().filter(|c| c.d <= 3).step_by(2).take(30).collect();
    let mut queries = 0;
    let mut diffs = Vec::new();
    for c in &picked {
        for k in 0..=c.d + 1 {
            let a = on.exists_solution_with_exactly_k_flips(&c.inst.initial, &c.inst.target, k).unwrap();
            let b = off.exists_solution_with_exactly_k_flips(&c.inst.initial, &c.inst.target, k).unwrap();
            queries += 1;
            if a.accepted != b.accepted {
                diffs.push(format!("seed {} k={k}: on={} off={}", c.seed, a.accepted, b.accepted));
            }
        }
    }
    stats.merge(on.stats());
    stats.merge(off.stats());
    let mut detail = format!("{} instances with d <= 3, {queries} queries (k = 0..=d+1)", picked.len());
    if let Some(f) = diffs.first() {
        detail.push_str(&format!("; {} differ, first: {f}", diffs.len()));
    }
    report.record("9 pruning neutrality", diffs.is_empty() && picked.len() >= 30, detail);
}

fn main() -> ExitCode {
    let mut report = Report { lines: Vec::new() };
    let mut stats = SolverStats::default();
    let mut tally = DagTally { dags: 0, bound_failures: Vec::new(), path_pairs: 0, path_failures: Vec::new() };

    let cases = oracle_cases();
    run_oracle_equivalence(&mut report, &cases, &mut stats, &mut tally);
    run_replay(&mut report, &mut tally);
    run_essential(&mut report, &cases, &mut tally);
    run_bounds(&mut report, &tally);
    run_paths(&mut report, &tally);
    run_compositions(&mut report);
    run_double_flip(&mut report);
    run_neutrality(&mut report, &cases, &mut stats);
    run_branching(&mut report, &stats);

    report.lines.sort_by(|a, b| a.1.cmp(&b.1));
    for (ok, name, detail) in &report.lines {
        println!("{} {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed: Vec<_> = report.lines.iter().filter(|l| !l.0).map(|l| l.1.clone()).collect();
    println!("acceptance: {} passed, {} failed", report.lines.len() - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join("; "));
        ExitCode::FAILURE
    }
}
