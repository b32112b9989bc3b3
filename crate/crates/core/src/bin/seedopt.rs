use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seedopt::experiment::{run_experiment, write_csv, ConfigFile, ExperimentConfig};
use seedopt::generate::{generate_synthetic, SyntheticSpec};
use seedopt::io::{load_edge_list, load_propagation_log, save_edge_list, write_edge_list, EdgeListOptions};
use seedopt::{assign_uniform, assign_weighted_cascade, estimate_probs_mle, DirectedGraph, Error, Model};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_ALL_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "seedopt", version, about = "Seed-set optimization for influence propagation")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SEEDOPT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic graph as an edge list.
    Gen(GenArgs),
    /// Rewrite the probabilities of an edge list.
    Probs(ProbsArgs),
    /// Estimate the spread of given seeds.
    Estimate(RunArgs),
    /// Pick k seeds maximizing spread.
    Maxinf(RunArgs),
    /// Cheapest seed set reaching a coverage threshold.
    Mintss(RunArgs),
    /// Fewest steps to reach a coverage threshold with k seeds.
    Mintime(RunArgs),
    /// Run the task named in the config (or --task) across all methods and sweep points.
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// erdos-renyi, power-law, path, star or dag-layered.
    #[arg(long)]
    generator: String,
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
    #[arg(long, default_value_t = 0.1)]
    arc_prob: f64,
    /// Edge list to write (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProbsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    symmetrize: bool,
    /// uniform, wc or mle.
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    p: Option<f64>,
    /// Propagation log for mle.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML file with any of the options below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    graph_seed: Option<u64>,
    #[arg(long)]
    arc_prob: Option<f64>,
    #[arg(long)]
    costs: Option<PathBuf>,
    /// given, uniform, wc or mle.
    #[arg(long)]
    probs: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    model: Option<Model>,
    /// Only for sweep: mintss, mintime, maxinf or estimate.
    #[arg(long)]
    task: Option<String>,
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<f64>>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, short, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Step bound, or inf.
    #[arg(long)]
    horizon: Option<String>,
    /// greedy, random, high-degree, pagerank, sp.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Seed labels for estimate.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<String>>,
    #[arg(long)]
    n_sims: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Lazy (CELF) greedy evaluation.
    #[arg(long)]
    lazy: bool,
    /// Fill the wall_ms column (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    /// CSV to write (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, task: Option<&str>) -> Result<ExperimentConfig, Error> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if task.is_some() && self.task.is_some() {
            return Err(Error::InvalidParameter("--task is only accepted by sweep".into()));
        }
        let flags = ConfigFile {
            graph: self.graph,
            symmetrize: self.symmetrize.then_some(true),
            generator: self.generator,
            nodes: self.nodes,
            graph_seed: self.graph_seed,
            arc_prob: self.arc_prob,
            costs: self.costs,
            probs: self.probs,
            p: self.p,
            log: self.log,
            model: self.model,
            task: task.map(str::to_string).or(self.task),
            eta: self.eta,
            epsilon: self.epsilon,
            k: self.k,
            horizon: self.horizon,
            methods: self.methods,
            seeds: self.seeds,
            n_sims: self.n_sims,
            master_seed: self.master_seed,
            lazy: self.lazy.then_some(true),
            timing: self.timing.then_some(true),
            output: self.output,
        };
        base.merge(flags).into_config()
    }
}

enum Failure {
    Error(Error),
    AllFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn write_graph(g: &DirectedGraph, output: Option<PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => save_edge_list(g, path),
        None => write_edge_list(g, std::io::stdout().lock()).map_err(|e| Error::Io { path: "<stdout>".into(), source: e }),
    }
}

fn sweep(args: RunArgs, task: Option<&str>) -> Result<(), Failure> {
    let cfg = args.into_config(task)?;
    let result = run_experiment(&cfg)?;
    for row in &result.rows {
        if let Some(e) = &row.error {
            eprintln!("seedopt: {} at eta={:?} k={:?} failed: {e}", row.method, row.eta, row.k);
        }
    }
    if cfg.output.is_none() {
        let mut out = std::io::stdout().lock();
        write_csv(&result, &mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?;
    }
    if result.all_failed() {
        return Err(Failure::AllFailed);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::InvalidParameter("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    match cli.cmd {
        Command::Gen(a) => {
            let spec = SyntheticSpec::new(a.generator.parse()?, a.nodes, a.graph_seed).with_prob(a.arc_prob);
            write_graph(&generate_synthetic(&spec)?, a.output)?;
        }
        Command::Probs(a) => {
            let opts = EdgeListOptions { default_prob: Some(1.0), symmetrize: a.symmetrize };
            let g = load_edge_list(&a.graph, opts)?;
            let g = match a.scheme.as_str() {
                "uniform" => {
                    let p = a.p.ok_or_else(|| Error::InvalidParameter("uniform needs --p".into()))?;
                    assign_uniform(&g, p)?
                }
                "wc" => assign_weighted_cascade(&g)?,
                "mle" => {
                    let path = a.log.ok_or_else(|| Error::InvalidParameter("mle needs --log".into()))?;
                    estimate_probs_mle(&g, &load_propagation_log(&g, path)?)?
                }
                s => return Err(Error::InvalidParameter(format!("unknown scheme {s:?}")).into()),
            };
            write_graph(&g, a.output)?;
        }
        Command::Estimate(a) => sweep(a, Some("estimate"))?,
        Command::Maxinf(a) => sweep(a, Some("maxinf"))?,
        Command::Mintss(a) => sweep(a, Some("mintss"))?,
        Command::Mintime(a) => sweep(a, Some("mintime"))?,
        Command::Sweep(a) => sweep(a, None)?,
    }
    Ok(())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("seedopt: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::AllFailed) => {
            eprintln!("seedopt: every sweep point failed to reach its target");
            ExitCode::from(EXIT_ALL_FAILED)
        }
        Err(Failure::Error(e)) => {
            eprintln!("seedopt: {}", one_line(&e.to_string()));
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_VALIDATION })
        }
    }
}
