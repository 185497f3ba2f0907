use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nestbpo::format::{GraphFile, InstanceFile, SolutionFile, TraceFile};
use nestbpo::instances::{from_maxcut, generate, removal_experiment, RandomModel};
use nestbpo::oracle::{brute_force_max, DEFAULT_NODE_LIMIT};
use nestbpo::{is_alpha_acyclic, is_beta_acyclic, lift_trace, reduce, solve, Error, Instance};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

/// Exact binary polynomial optimization over beta-acyclic hypergraphs.
///
/// Exit codes: 0 success, 1 I/O error, 2 invalid input, 3 instance not
/// beta-acyclic, 4 arithmetic overflow, 5 instance too large for the oracle.
#[derive(Parser)]
#[command(name = "nestbpo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a beta-acyclic instance exactly.
    Solve {
        /// Instance file; `-` or omitted reads standard input.
        input: Option<PathBuf>,
    },
    /// Report beta- and alpha-acyclicity.
    Classify { input: Option<PathBuf> },
    /// Strip nest points, writing the core instance and the lifting trace.
    Reduce {
        input: Option<PathBuf>,
        /// Where to write the core instance (nodes renumbered densely).
        #[arg(short = 'o', long)]
        core: PathBuf,
        #[arg(short = 't', long)]
        trace: PathBuf,
    },
    /// Extend a core solution to the original nodes.
    Lift {
        #[arg(short = 't', long)]
        trace: PathBuf,
        /// Solution of the core instance written by `reduce`.
        #[arg(short = 's', long)]
        solution: PathBuf,
        /// Original instance; when given, the objective is reported too.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Maximize by exhaustive enumeration.
    Oracle {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        limit: usize,
    },
    /// Draw a random instance.
    Gen {
        #[arg(short = 'n', long)]
        nodes: usize,
        #[arg(short = 'm', long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        pmin: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        pmax: i64,
    },
    /// Convert a weighted graph into an equivalent instance.
    Maxcut { input: Option<PathBuf> },
    /// Average removed-node percentages over random instances, as CSV.
    Bench {
        /// Comma-separated cells `NxM`, e.g. `300x300,300x150`.
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone)]
struct Grid(Vec<(usize, usize)>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.split(',')
        .map(|cell| {
            let (n, m) = cell
                .trim()
                .split_once('x')
                .ok_or_else(|| format!("cell `{cell}` is not NxM"))?;
            let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("cell `{cell}`: {e}"));
            Ok((parse(n)?, parse(m)?))
        })
        .collect::<Result<_, _>>()
        .map(Grid)
}

enum Failure {
    Io(String),
    Invalid(String),
    NotBetaAcyclic,
    Overflow,
    TooLarge(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::NotBetaAcyclic => 3,
            Failure::Overflow => 4,
            Failure::TooLarge(_) => 5,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow => Failure::Overflow,
            Error::TooLarge { .. } => Failure::TooLarge(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn is_stdin(path: &Option<PathBuf>) -> bool {
    path.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_json<T: DeserializeOwned>(path: &Option<PathBuf>) -> Result<T, Failure> {
    let (name, text) = if is_stdin(path) {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("standard input: {e}")))?;
        ("standard input".to_string(), text)
    } else {
        let p = path.as_ref().expect("not stdin");
        let text = fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        (p.display().to_string(), text)
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{name}: {e}")))
}

fn read_instance(path: &Option<PathBuf>) -> Result<Instance, Failure> {
    Ok(read_json::<InstanceFile>(path)?.to_instance()?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(io::stdout().lock(), "{text}").map_err(|e| Failure::Io(format!("standard output: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { input } => {
            let instance = read_instance(&input)?;
            match solve(&instance) {
                Ok(sol) => print_json(&SolutionFile::new(&sol.assignment, Some(sol.objective))),
                Err(Error::NotBetaAcyclic(reduced)) => {
                    eprintln!(
                        "error: instance is not beta-acyclic; {} of {} nodes remain after removing nest points",
                        reduced.core.node_count(),
                        reduced.original_node_count
                    );
                    print_json(&json!({
                        "beta_acyclic": false,
                        "core_nodes": reduced.core.node_count(),
                        "core_edges": reduced.core.edge_count(),
                        "hint": "reduce",
                    }))?;
                    Err(Failure::NotBetaAcyclic)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Classify { input } => {
            let instance = read_instance(&input)?;
            let beta = is_beta_acyclic(instance.hypergraph());
            let alpha = is_alpha_acyclic(instance.hypergraph());
            print_json(&json!({
                "beta_acyclic": beta.acyclic,
                "alpha_acyclic": alpha.acyclic,
                "elimination_order": beta.elimination_order,
            }))
        }
        Command::Reduce { input, core, trace } => {
            let instance = read_instance(&input)?;
            let reduced = reduce(&instance)?;
            let (core_file, _) = InstanceFile::from_instance(&reduced.core);
            write_json(&core, &core_file)?;
            write_json(&trace, &TraceFile::from_reduced(&reduced))?;
            print_json(&json!({
                "original_nodes": reduced.original_node_count,
                "removed_nodes": reduced.trace.records.len(),
                "core_nodes": reduced.core.node_count(),
                "core_edges": reduced.core.edge_count(),
                "accumulated_offset": reduced.trace.accumulated_offset,
            }))
        }
        Command::Lift {
            trace,
            solution,
            instance,
        } => {
            let trace_file: TraceFile = read_json(&Some(trace))?;
            let (trace, core_nodes) = trace_file.to_trace()?;
            let core_bits = read_json::<SolutionFile>(&Some(solution))?.bits()?;
            if core_bits.len() != core_nodes.len() {
                return Err(Failure::Invalid(format!(
                    "core solution has {} entries but the core has {} nodes",
                    core_bits.len(),
                    core_nodes.len()
                )));
            }
            let x = lift_trace(
                &trace,
                trace_file.original_node_count,
                core_nodes.into_iter().zip(core_bits),
            )?;
            let objective = match instance {
                Some(path) => Some(read_instance(&Some(path))?.evaluate(&x)?),
                None => None,
            };
            print_json(&SolutionFile::new(&x, objective))
        }
        Command::Oracle { input, limit } => {
            let instance = read_instance(&input)?;
            let sol = brute_force_max(&instance, limit)?;
            print_json(&SolutionFile::new(&sol.assignment, Some(sol.objective)))
        }
        Command::Gen {
            nodes,
            edges,
            seed,
            pmin,
            pmax,
        } => {
            let instance = generate(&RandomModel::new(nodes, edges, seed).with_profit_range(pmin, pmax))?;
            print_json(&InstanceFile::from_instance(&instance).0)
        }
        Command::Maxcut { input } => {
            let graph = read_json::<GraphFile>(&input)?.to_graph()?;
            print_json(&InstanceFile::from_instance(&from_maxcut(&graph)?).0)
        }
        Command::Bench { grid, reps, seed } => {
            let rows = removal_experiment(&grid.0, reps, seed)?;
            let mut out = io::stdout().lock();
            let emit = || -> io::Result<()> {
                writeln!(out, "n,m,mean_removed_pct,mean_removed_pct_all")?;
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{:.4},{:.4}",
                        r.n, r.m, r.mean_removed_pct, r.mean_removed_pct_all
                    )?;
                }
                Ok(())
            };
            emit().map_err(|e| Failure::Io(format!("standard output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(msg) | Failure::Invalid(msg) | Failure::TooLarge(msg) => eprintln!("error: {msg}"),
                Failure::Overflow => eprintln!("error: profit arithmetic overflowed 64-bit integers"),
                Failure::NotBetaAcyclic => {}
            }
            ExitCode::from(failure.code())
        }
    }
}
