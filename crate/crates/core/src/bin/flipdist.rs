use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flipdist::cli::{
    self, exit, BenchConfig, BenchSuite, CliError, DistanceOptions, Engine,
};
use flipdist::fpt::{SolverConfig, StackMode};
use flipdist::instance::{parse_instance, render_instance, GenConfig, HullShape, Instance};
use flipdist::oracle;

#[derive(Parser)]
#[command(name = "flipdist", version, about = "Flip distance between triangulations of a point set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Memoize solver states.
    #[arg(long, value_enum, default_value = "on")]
    pruning: Switch,
    /// Keep the walker's stack between runs instead of clearing it.
    #[arg(long)]
    persist_stack: bool,
    /// Abort the solver after this many generated states.
    #[arg(long)]
    state_budget: Option<u64>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            pruning: self.pruning == Switch::On,
            stack_mode: if self.persist_stack { StackMode::Persist } else { StackMode::ClearPerIteration },
            state_budget: self.state_budget,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file ("-" for stdin).
    Validate { file: PathBuf },
    /// Generate a random instance.
    Gen {
        #[arg(long, short)]
        n: usize,
        #[arg(long, value_enum, default_value = "random")]
        shape: HullShape,
        #[arg(long, default_value_t = 3)]
        scramble: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write this k into the instance.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute or decide the flip distance of an instance.
    Distance {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        engine: Engine,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_NODE_BUDGET)]
        node_budget: usize,
        /// Overrides the instance's k.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print the dependency DAG of a flip sequence applied to the initial triangulation.
    Dag {
        file: PathBuf,
        /// Edges to flip, e.g. "0-2 1-3".
        #[arg(long, default_value = "")]
        flips: String,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Cross-check both engines on generated instances (JSON lines).
    Bench {
        /// JSON config: {"suites":[{"n":6,"scramble":3,"trials":10,"seed":1}],"cap":10,"pruning":true}
        config: Option<PathBuf>,
        #[arg(long, short)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        scramble: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random")]
        shape: HullShape,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value = "on")]
        pruning: Switch,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load(path: &Path) -> Result<Instance, CliError> {
    Ok(parse_instance(&read_text(path)?)?)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { file } => {
            let inst = load(&file)?;
            let changed = inst.initial.changed_edges(&inst.target).expect("shared point set");
            eprintln!(
                "ok: n={} h={} triangles={} changed_edges={}",
                inst.n(),
                inst.h(),
                inst.initial.triangles().len(),
                changed.len()
            );
            Ok(exit::SUCCESS)
        }
        Command::Gen { n, shape, scramble, seed, k, output } => {
            let inst = cli::cmd_gen(&GenConfig::new(n, shape, scramble, seed))?;
            let mut file = inst.file;
            file.k = k;
            let text = render_instance(&file);
            match output {
                Some(p) => std::fs::write(p, text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            eprintln!("generated n={n} shape={shape:?} scramble={scramble} seed={seed}");
            Ok(exit::SUCCESS)
        }
        Command::Distance { file, engine, cap, node_budget, k, solver } => {
            let inst = load(&file)?;
            let opts = DistanceOptions { engine, cap, node_budget, k, solver: solver.config() };
            let report = cli::cmd_distance(&inst, &opts)?;
            print_json(&report)?;
            if engine == Engine::Both && report.result["agree"] != true {
                eprintln!("DISAGREEMENT between oracle and fpt engine");
            }
            Ok(report.exit_code())
        }
        Command::Dag { file, flips, json } => {
            let inst = load(&file)?;
            let edges = cli::parse_edge_list(&flips)?;
            let report = cli::cmd_dag(&inst, &edges)?;
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            Ok(exit::SUCCESS)
        }
        Command::Bench { config, n, scramble, trials, seed, shape, cap, pruning, jobs } => {
            let cfg: BenchConfig = match (config, n) {
                (Some(path), _) => serde_json::from_str(&read_text(&path)?)?,
                (None, Some(n)) => BenchConfig {
                    suites: vec![BenchSuite { n, scramble, trials, seed, shape }],
                    cap,
                    pruning: pruning == Switch::On,
                },
                (None, None) => BenchConfig {
                    suites: (5..=8)
                        .map(|n| BenchSuite { n, scramble, trials, seed, shape })
                        .collect(),
                    cap,
                    pruning: pruning == Switch::On,
                },
            };
            let (rows, summary) = cli::cmd_bench(&cfg, jobs);
            for row in &rows {
                print_json(row)?;
            }
            eprintln!(
                "rows={} compared={} agreed={} errors={} agreement={:.1}%",
                summary.rows,
                summary.compared,
                summary.agreed,
                summary.errors,
                100.0 * summary.agreement_rate
            );
            Ok(if summary.agreed == summary.compared { exit::SUCCESS } else { exit::REJECT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
