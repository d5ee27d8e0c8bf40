//! `vmlab`: command-line harness over the core library.
//!
//! Exit codes: 0 on completion, 2 when a search or enumeration budget was
//! exceeded, 1 on any other error.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use vmlab_core::experiments::{run_experiment, write_outputs, ExperimentConfig};
use vmlab_core::graph6::{from_graph6, to_graph6};
use vmlab_core::matroid::{count_bases, is_minor, sample_uniform_matroid, BinaryMatroid};
use vmlab_core::minor::{is_vertex_minor, DEFAULT_BUDGET};
use vmlab_core::ramsey::vm_ramsey;
use vmlab_core::walks::{
    apply_walk_step, linf_distance_to_uniform, plain_mixing_bound, DistShape, GraphDistribution,
    WalkKind,
};
use vmlab_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "vmlab", version, about = "graph, walk, and matroid experiments")]
struct Cli {
    /// Worker threads for parallel campaigns (default: all cores).
    #[arg(long, global = true, env = "VMLAB_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured experiment campaign.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Vertex-minor queries on graph6 inputs.
    Vm {
        #[command(subcommand)]
        action: VmAction,
    },
    /// Exact random-walk mixing on graph distributions.
    Walk {
        #[command(subcommand)]
        action: WalkAction,
    },
    /// Vertex-minor Ramsey values.
    Ramsey {
        #[command(subcommand)]
        action: RamseyAction,
    },
    /// Binary matroid utilities.
    Matroid {
        #[command(subcommand)]
        action: MatroidAction,
    },
}

#[derive(Subcommand)]
enum ExperimentAction {
    /// Run the experiment described by a JSON config file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's output path prefix.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VmAction {
    /// Decide whether H (second file) is a vertex-minor of G (first file).
    Check {
        g: PathBuf,
        h: PathBuf,
        /// Comma-separated labels of G that H's vertices 0,1,... map to
        /// (default: identity).
        #[arg(long)]
        on: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum WalkAction {
    /// Mix a point mass with the given steps and compare the exact distance
    /// to the spectral bound.
    Mix {
        #[arg(long)]
        k: usize,
        /// Comma-separated step kinds, e.g. `com,piv,com`.
        #[arg(long)]
        steps: String,
    },
}

#[derive(Subcommand)]
enum RamseyAction {
    /// Exhaustive vertex-minor Ramsey value with certificates.
    Vm {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum MatroidAction {
    /// Is N (second file) a labeled minor of M (first file)? JSON inputs.
    Minor { m: PathBuf, n: PathBuf },
    /// Sample a uniformly random rank-r binary matroid on ground 0..n.
    Sample {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        ground: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count the bases of a matroid given as JSON.
    Bases { m: PathBuf },
}

enum CliError {
    Budget(String),
    Other(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Budget(msg) => CliError::Budget(msg),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Experiment { action: ExperimentAction::Run(args) } => run_campaign(args),
        Command::Vm { action: VmAction::Check { g, h, on, budget } } => vm_check(g, h, on, budget),
        Command::Walk { action: WalkAction::Mix { k, steps } } => walk_mix(k, &steps),
        Command::Ramsey { action: RamseyAction::Vm { k } } => ramsey_vm(k),
        Command::Matroid { action } => matroid(action),
    }
}

fn run_campaign(args: RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let record = run_experiment(&config)?;
    let prefix = args
        .output
        .or_else(|| config.output.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(&config.id));
    write_outputs(&record, &prefix)?;
    println!("{}", serde_json::to_string_pretty(&record.aggregates)?);
    println!(
        "wrote {} and {}",
        prefix.with_extension("json").display(),
        prefix.with_extension("csv").display()
    );
    let budget_hit = matches!(
        record.aggregates,
        vmlab_core::experiments::Aggregates::Universality { budget_exceeded, .. } if budget_exceeded > 0
    );
    if budget_hit {
        return Err(CliError::Budget("some trials exceeded the search budget".into()));
    }
    Ok(())
}

fn vm_check(g: PathBuf, h: PathBuf, on: Option<String>, budget: u64) -> Result<(), CliError> {
    let g = from_graph6(std::fs::read_to_string(&g)?.trim())?;
    let h_raw = from_graph6(std::fs::read_to_string(&h)?.trim())?;
    let h = match on {
        None => h_raw,
        Some(list) => {
            let labels: Vec<usize> = list
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Other(format!("bad --on list: {e}")))?;
            if labels.len() != h_raw.live_count() {
                return Err(CliError::Other(format!(
                    "--on lists {} labels for an H with {} vertices",
                    labels.len(),
                    h_raw.live_count()
                )));
            }
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != labels.len() {
                return Err(CliError::Other("--on labels must be distinct".into()));
            }
            let mut mapped = vmlab_core::minor::graph_on_labels(&sorted, 0);
            for (a, b) in h_raw.edges() {
                mapped.add_edge(labels[a], labels[b]);
            }
            mapped
        }
    };
    match is_vertex_minor(&g, &h, budget)? {
        Some(witness) => {
            println!("vertex-minor: yes");
            println!("{}", serde_json::to_string(&witness)?);
        }
        None => println!("vertex-minor: no"),
    }
    Ok(())
}

fn walk_mix(k: usize, steps: &str) -> Result<(), CliError> {
    let kinds: Vec<WalkKind> = steps
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(WalkKind::from_str)
        .collect::<Result<_, _>>()?;
    if kinds.iter().any(|s| *s == WalkKind::BPiv) {
        return Err(CliError::Other("walk mix drives plain shapes; use com/piv steps".into()));
    }
    let mut mu = GraphDistribution::point_mass_edgeless(DistShape::Plain { k })?;
    let mut m1 = 0usize;
    let mut m2 = 0usize;
    for &kind in &kinds {
        mu = apply_walk_step(&mu, kind)?;
        match kind {
            WalkKind::Com => m1 += 1,
            WalkKind::Piv => m2 += 1,
            WalkKind::BPiv => unreachable!(),
        }
    }
    let dist = linf_distance_to_uniform(&mu);
    let bound = plain_mixing_bound(k, m1, m2);
    println!("k = {k}, steps = {} (com: {m1}, piv: {m2}, m = {})", kinds.len(), m1 + 2 * m2);
    println!("exact L_inf distance: {dist} = {:.3e}", dist.to_f64());
    println!("spectral bound:       {bound} = {:.3e}", bound.to_f64());
    if m1 + 2 * m2 > 2 * k {
        println!("bound holds: {}", if dist.le(&bound) { "yes" } else { "NO" });
    } else {
        println!("bound needs m > 2k; not applicable at these step counts");
    }
    Ok(())
}

fn ramsey_vm(k: usize) -> Result<(), CliError> {
    let result = vm_ramsey(k)?;
    println!("R_vm({k}) = {}", result.value);
    if result.counterexamples.is_empty() {
        println!("no counterexamples below the threshold");
    } else {
        println!(
            "counterexample classes on {} vertices ({}):",
            result.value - 1,
            result.counterexamples.len()
        );
        for g in &result.counterexamples {
            println!("{}", to_graph6(g));
        }
    }
    Ok(())
}

fn matroid(action: MatroidAction) -> Result<(), CliError> {
    match action {
        MatroidAction::Minor { m, n } => {
            let m = BinaryMatroid::from_json(&std::fs::read_to_string(&m)?)?;
            let n = BinaryMatroid::from_json(&std::fs::read_to_string(&n)?)?;
            println!("minor: {}", if is_minor(&m, &n)? { "yes" } else { "no" });
        }
        MatroidAction::Sample { rank, ground, seed } => {
            let m = sample_uniform_matroid(rank, ground, seed)?;
            println!("{}", m.to_json());
        }
        MatroidAction::Bases { m } => {
            let m = BinaryMatroid::from_json(&std::fs::read_to_string(&m)?)?;
            println!("{}", count_bases(&m)?);
        }
    }
    Ok(())
}
