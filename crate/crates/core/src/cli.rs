//! Commands behind the `flipdist` binary.
//!
//! Machine-readable output is JSON lines; anything meant for people goes to
//! standard error in the binary.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dag::{DagError, Essentiality, FlipDag, FlipRecord, FlipSequence};
use crate::fpt::{Solver, SolverConfig, SolverError};
use crate::instance::{generate_instance, GenConfig, GenError, HullShape, Instance, InstanceError};
use crate::oracle::{self, BfsConfig, OracleError};
use crate::triangulation::{Edge, PointId};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const REJECT: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
    pub const BUDGET_EXCEEDED: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error("the fpt engine needs k (instance `k` line or --k)")]
    MissingK,
    #[error("flip distance exceeds the cap of {0}")]
    CapExceeded(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot parse edge `{0}` (expected `a-b`)")]
    BadEdge(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("bad bench config: {0}")]
    Config(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CapExceeded(_)
            | CliError::Oracle(OracleError::BudgetExceeded(_))
            | CliError::Solver(SolverError::BudgetExceeded(_)) => exit::BUDGET_EXCEEDED,
            _ => exit::INPUT_ERROR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Fpt,
    Both,
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    pub engine: Engine,
    pub cap: usize,
    pub node_budget: usize,
    /// Overrides the instance's `k`.
    pub k: Option<usize>,
    pub solver: SolverConfig,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            engine: Engine::Both,
            cap: oracle::DEFAULT_CAP,
            node_budget: oracle::DEFAULT_NODE_BUDGET,
            k: None,
            solver: SolverConfig::default(),
        }
    }
}

/// One `distance` record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub n: usize,
    pub h: usize,
    pub k: Option<usize>,
    pub engine: Engine,
    /// Oracle: the distance. Fpt: `"accept"` or `"reject"`. Both: an object
    /// with `oracle`, `fpt` and `agree`.
    pub result: Value,
    pub states_explored: u64,
    pub millis: u128,
}

impl DistanceReport {
    pub fn exit_code(&self) -> i32 {
        let ok = match self.engine {
            Engine::Oracle => true,
            Engine::Fpt => self.result == "accept",
            Engine::Both => self.result["agree"] == true,
        };
        if ok {
            exit::SUCCESS
        } else {
            exit::REJECT
        }
    }
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accept"
    } else {
        "reject"
    }
}

pub fn cmd_distance(inst: &Instance, opts: &DistanceOptions) -> Result<DistanceReport, CliError> {
    let started = Instant::now();
    let k = opts.k.or(inst.file.k);
    let bfs = BfsConfig { cap: opts.cap, node_budget: opts.node_budget };
    let run_oracle = || -> Result<(usize, u64), CliError> {
        let out = oracle::bfs_distance(&inst.initial, &inst.target, bfs)?;
        let d = out.distance.ok_or(CliError::CapExceeded(opts.cap))?;
        Ok((d, out.states_explored as u64))
    };
    let mut solver = Solver::new(opts.solver);
    let (result, states, k) = match opts.engine {
        Engine::Oracle => {
            let (d, states) = run_oracle()?;
            (json!(d), states, k)
        }
        Engine::Fpt => {
            let k = k.ok_or(CliError::MissingK)?;
            let accepted = solver.decide_flip_distance_eq(&inst.initial, &inst.target, k)?;
            (json!(verdict(accepted)), solver.stats().states_explored, Some(k))
        }
        Engine::Both => {
            let (d, oracle_states) = run_oracle()?;
            let k = k.unwrap_or(d);
            let accepted = solver.decide_flip_distance_eq(&inst.initial, &inst.target, k)?;
            let agree = accepted == (d == k);
            (
                json!({ "oracle": d, "fpt": verdict(accepted), "agree": agree }),
                oracle_states + solver.stats().states_explored,
                Some(k),
            )
        }
    };
    Ok(DistanceReport {
        n: inst.n(),
        h: inst.h(),
        k,
        engine: opts.engine,
        result,
        states_explored: states,
        millis: started.elapsed().as_millis(),
    })
}

/// Parses edges written `a-b` (or `a,b`), separated by whitespace or `;`.
pub fn parse_edge_list(text: &str) -> Result<Vec<Edge>, CliError> {
    text.split(|c: char| c.is_whitespace() || c == ';')
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let bad = || CliError::BadEdge(tok.to_string());
            let (a, b) = tok.split_once(['-', ',']).ok_or_else(bad)?;
            let a: PointId = a.trim().parse().map_err(|_| bad())?;
            let b: PointId = b.trim().parse().map_err(|_| bad())?;
            Edge::try_new(a, b).ok_or_else(bad)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub nodes: Vec<usize>,
    pub essentiality: Essentiality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DagReport {
    pub nodes: Vec<FlipRecord>,
    pub arcs: Vec<(usize, usize)>,
    pub components: Vec<ComponentReport>,
    pub reaches_final: bool,
}

impl DagReport {
    /// Plain-text listing followed by a Graphviz digraph.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nodes {}", self.nodes.len());
        for r in &self.nodes {
            let _ = writeln!(s, "{} {} {}", r.position, r.eps, r.phi);
        }
        let _ = writeln!(s, "arcs {}", self.arcs.len());
        for (i, j) in &self.arcs {
            let _ = writeln!(s, "{i} {j}");
        }
        let _ = writeln!(s, "components {}", self.components.len());
        for c in &self.components {
            let nodes: Vec<String> = c.nodes.iter().map(|v| v.to_string()).collect();
            let tag = match c.essentiality {
                Essentiality::Essential => "essential",
                Essentiality::Nonessential => "nonessential",
            };
            let _ = writeln!(s, "{tag} {}", nodes.join(" "));
        }
        s.push_str(&FlipDag::from_arcs(self.nodes.len(), self.arcs.clone()).to_dot());
        s
    }
}

pub fn cmd_dag(inst: &Instance, flips: &[Edge]) -> Result<DagReport, CliError> {
    let seq = FlipSequence::apply(&inst.initial, flips)?;
    let dag = FlipDag::build(&seq);
    let components = dag
        .classify_essential(&seq, &inst.target)
        .into_iter()
        .map(|(nodes, essentiality)| ComponentReport { nodes, essentiality })
        .collect();
    Ok(DagReport {
        nodes: seq.records().to_vec(),
        arcs: dag.arcs().to_vec(),
        components,
        reaches_final: seq.last() == &inst.target,
    })
}

pub fn cmd_gen(cfg: &GenConfig) -> Result<Instance, CliError> {
    Ok(Instance::from_file(generate_instance(cfg)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchSuite {
    pub n: usize,
    pub scramble: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub shape: HullShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub suites: Vec<BenchSuite>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_pruning")]
    pub pruning: bool,
}

fn default_cap() -> usize {
    oracle::DEFAULT_CAP
}

fn default_pruning() -> bool {
    true
}

/// One bench row. Schema:
///
/// | field | meaning |
/// |---|---|
/// | `suite`, `trial`, `seed` | which instance; `seed` regenerates it |
/// | `n`, `h`, `scramble`, `shape` | instance shape |
/// | `oracle_distance` | BFS distance, `null` above the cap |
/// | `fpt_exact` | exact-k answer for k = 0..=oracle_distance |
/// | `fpt_decision` | exactly-k decision at k = oracle_distance |
/// | `agree` | decision accepted and every smaller k rejected |
/// | `oracle_states`, `fpt_states` | states generated |
/// | `oracle_millis`, `fpt_millis` | wall time |
/// | `error` | failure message; other result fields are then `null` |
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub suite: usize,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub h: Option<usize>,
    pub scramble: usize,
    pub shape: HullShape,
    pub oracle_distance: Option<usize>,
    pub fpt_exact: Vec<bool>,
    pub fpt_decision: Option<bool>,
    pub agree: Option<bool>,
    pub oracle_states: u64,
    pub fpt_states: u64,
    pub oracle_millis: u128,
    pub fpt_millis: u128,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub rows: usize,
    pub compared: usize,
    pub agreed: usize,
    pub errors: usize,
    pub agreement_rate: f64,
}

/// Seed of trial `trial` in a suite.
pub fn trial_seed(suite: &BenchSuite, trial: usize) -> u64 {
    suite.seed.wrapping_mul(1_000_003).wrapping_add(trial as u64)
}

fn bench_one(suite_idx: usize, suite: &BenchSuite, trial: usize, cap: usize, solver: SolverConfig) -> BenchRow {
    let seed = trial_seed(suite, trial);
    let mut row = BenchRow {
        suite: suite_idx,
        trial,
        seed,
        n: suite.n,
        h: None,
        scramble: suite.scramble,
        shape: suite.shape,
        oracle_distance: None,
        fpt_exact: Vec::new(),
        fpt_decision: None,
        agree: None,
        oracle_states: 0,
        fpt_states: 0,
        oracle_millis: 0,
        fpt_millis: 0,
        error: None,
    };
    let inst = match cmd_gen(&GenConfig::new(suite.n, suite.shape, suite.scramble, seed)) {
        Ok(i) => i,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.h = Some(inst.h());
    let t0 = Instant::now();
    let out = oracle::bfs_distance(&inst.initial, &inst.target, BfsConfig { cap, ..Default::default() });
    row.oracle_millis = t0.elapsed().as_millis();
    let d = match out {
        Ok(o) => {
            row.oracle_states = o.states_explored as u64;
            row.oracle_distance = o.distance;
            match o.distance {
                Some(d) => d,
                None => {
                    row.error = Some(CliError::CapExceeded(cap).to_string());
                    return row;
                }
            }
        }
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let t0 = Instant::now();
    let mut s = Solver::new(solver);
    let mut exact = Vec::with_capacity(d + 1);
    for k in 0..=d {
        match s.exists_solution_with_exactly_k_flips(&inst.initial, &inst.target, k) {
            Ok(dec) => exact.push(dec.accepted),
            Err(e) => {
                row.error = Some(e.to_string());
                break;
            }
        }
    }
    row.fpt_millis = t0.elapsed().as_millis();
    row.fpt_states = s.stats().states_explored;
    if row.error.is_none() {
        let decision = exact[d] && exact[..d].iter().all(|a| !a);
        row.fpt_decision = Some(decision);
        row.agree = Some(decision);
    }
    row.fpt_exact = exact;
    row
}

/// Runs every suite; rows come back in suite/trial order.
pub fn cmd_bench(cfg: &BenchConfig, jobs: Option<usize>) -> (Vec<BenchRow>, BenchSummary) {
    let solver = SolverConfig { pruning: cfg.pruning, ..Default::default() };
    let work: Vec<(usize, &BenchSuite, usize)> = cfg
        .suites
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.trials).map(move |t| (i, s, t)))
        .collect();
    let run = || -> Vec<BenchRow> {
        work.par_iter().map(|&(i, s, t)| bench_one(i, s, t, cfg.cap, solver)).collect()
    };
    let rows = match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    let compared = rows.iter().filter(|r| r.agree.is_some()).count();
    let agreed = rows.iter().filter(|r| r.agree == Some(true)).count();
    let summary = BenchSummary {
        rows: rows.len(),
        compared,
        agreed,
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        agreement_rate: if compared == 0 { 1.0 } else { agreed as f64 / compared as f64 },
    };
    (rows, summary)
}
