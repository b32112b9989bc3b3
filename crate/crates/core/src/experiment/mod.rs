//! Experiment sweeps: every method at every sweep point, written as one CSV row each.

mod config;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

pub use config::{ConfigFile, ExperimentConfig, GraphSource, Method, ProbScheme, Task, DEFAULT_N_SIMS};

use crate::error::{Error, Result};
use crate::generate::generate_synthetic;
use crate::graph::{DirectedGraph, NodeId};
use crate::heuristics::{heuristic_mintime_with, prefix_mintss, rank_nodes, HeuristicSpec};
use crate::io::{load_costs, load_edge_list, load_propagation_log, EdgeListOptions};
use crate::opt::{greedy_maxinf, greedy_mintss, mintime_with, GreedyOptions, MintimeOptions};
use crate::oracle::MonteCarloOracle;
use crate::probs::{assign_uniform, assign_weighted_cascade, estimate_probs_mle};
use crate::propagation::{check_model, estimate_spread, Horizon, SeedSet, SpreadEstimate};
use crate::rng::{derive_seed, str_key};

pub const CSV_HEADER: [&str; 12] = [
    "method", "task", "eta", "k", "epsilon", "seed_size", "seed_cost", "time_R", "coverage", "std_err", "wall_ms",
    "status",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
        }
    }
}

/// One (method, sweep point) outcome. Metric fields are `None` on failed rows.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub method: String,
    pub task: Task,
    pub eta: Option<f64>,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub seed_size: Option<usize>,
    pub seed_cost: Option<f64>,
    pub time_r: Option<u32>,
    pub coverage: Option<f64>,
    pub std_err: Option<f64>,
    pub wall_ms: Option<u128>,
    pub status: Status,
    /// Why the row failed, when an error (rather than an unmet threshold) caused it.
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentResult {
    /// True when there is at least one row and every row failed.
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.status == Status::Failed)
    }
}

/// Loads or generates the graph and applies costs and the probability scheme.
pub fn load_graph(cfg: &ExperimentConfig) -> Result<DirectedGraph> {
    let g = match &cfg.graph {
        GraphSource::File { path, symmetrize } => {
            // probabilities are only required in the file when they are used as given
            let default_prob = if cfg.probs == ProbScheme::Given { None } else { Some(1.0) };
            load_edge_list(path, EdgeListOptions { default_prob, symmetrize: *symmetrize })?
        }
        GraphSource::Synthetic(spec) => generate_synthetic(spec)?,
    };
    let g = match &cfg.costs {
        Some(path) => load_costs(&g, path)?,
        None => g,
    };
    match &cfg.probs {
        ProbScheme::Given => Ok(g),
        ProbScheme::Uniform(p) => assign_uniform(&g, *p),
        ProbScheme::WeightedCascade => assign_weighted_cascade(&g),
        ProbScheme::Mle(path) => {
            let log = load_propagation_log(&g, path)?;
            estimate_probs_mle(&g, &log)
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Point {
    eta: Option<f64>,
    k: Option<usize>,
}

fn sweep_points(cfg: &ExperimentConfig) -> Vec<Point> {
    match cfg.task {
        Task::Mintss => cfg.etas.iter().map(|&e| Point { eta: Some(e), k: None }).collect(),
        Task::Mintime => {
            cfg.ks.iter().flat_map(|&k| cfg.etas.iter().map(move |&e| Point { eta: Some(e), k: Some(k) })).collect()
        }
        Task::Maxinf => cfg.ks.iter().map(|&k| Point { eta: None, k: Some(k) }).collect(),
        Task::Estimate => vec![Point { eta: None, k: None }],
    }
}

/// Checks the parts of the config that depend on the graph.
pub fn validate_against(cfg: &ExperimentConfig, g: &DirectedGraph) -> Result<()> {
    let n = g.node_count();
    check_model(g, cfg.model)?;
    if let Some(&eta) = cfg.etas.iter().find(|&&e| e > n as f64) {
        return Err(Error::invalid(format!("eta = {eta} exceeds the {n} nodes")));
    }
    if let Some(&k) = cfg.ks.iter().find(|&&k| k > n) {
        return Err(Error::invalid(format!("k = {k} exceeds the {n} nodes")));
    }
    for s in &cfg.seeds {
        g.node_by_label(s).ok_or_else(|| Error::UnknownNode(s.clone()))?;
    }
    Ok(())
}

struct Outcome {
    seeds: SeedSet,
    time_r: Option<u32>,
    estimate: SpreadEstimate,
    ok: bool,
}

fn run_one(cfg: &ExperimentConfig, g: &DirectedGraph, method: Method, point: Point, point_idx: usize) -> Result<Outcome> {
    let seed = derive_seed(cfg.master_seed, point_idx as u64);
    let oracle = MonteCarloOracle::new(g, cfg.model, cfg.horizon, cfg.n_sims, seed)?;
    let greedy = GreedyOptions { lazy: cfg.lazy, ..GreedyOptions::default() };
    let order = |m: Method| match m {
        Method::Greedy => unreachable!(),
        Method::Heuristic(kind) => {
            rank_nodes(g, &HeuristicSpec::new(kind).with_seed(derive_seed(seed, str_key(kind.name()))))
        }
    };
    let eps = cfg.epsilon;

    match cfg.task {
        Task::Mintss => {
            let eta = point.eta.expect("mintss point has eta");
            let res = match method {
                Method::Greedy => greedy_mintss(&oracle, eta, eps, g.costs(), greedy)?,
                m => prefix_mintss(&oracle, &order(m), g.costs(), eta, eps)?,
            };
            let estimate = oracle.estimate(res.seeds.nodes())?;
            Ok(Outcome { seeds: res.seeds, time_r: None, estimate, ok: res.feasible })
        }
        Task::Mintime => {
            let (eta, k) = (point.eta.expect("mintime point has eta"), point.k.expect("mintime point has k"));
            let res = match method {
                Method::Greedy => {
                    let opts = MintimeOptions { greedy, ..MintimeOptions::default() };
                    mintime_with(g.node_count(), |h| oracle.with_horizon(h), k, eta, eps, opts)?
                }
                m => heuristic_mintime_with(g, &oracle, &order(m), k, eta, eps)?,
            };
            let h = res.time.map_or(Horizon::Steps(g.node_count().saturating_sub(1) as u32), Horizon::Steps);
            let estimate = oracle.with_horizon(h).estimate(res.seeds.nodes())?;
            Ok(Outcome { ok: res.feasible(), time_r: res.time, seeds: res.seeds, estimate })
        }
        Task::Maxinf => {
            let k = point.k.expect("maxinf point has k");
            let seeds = match method {
                Method::Greedy => greedy_maxinf(&oracle, k, greedy)?,
                m => SeedSet::with_costs(order(m).into_iter().take(k), g.costs())?,
            };
            let estimate = oracle.estimate(seeds.nodes())?;
            Ok(Outcome { seeds, time_r: None, estimate, ok: true })
        }
        Task::Estimate => {
            let nodes: Vec<NodeId> = cfg
                .seeds
                .iter()
                .map(|s| g.node_by_label(s).ok_or_else(|| Error::UnknownNode(s.clone())))
                .collect::<Result<_>>()?;
            let seeds = SeedSet::with_costs(nodes, g.costs())?;
            let estimate = estimate_spread(g, cfg.model, seeds.nodes(), cfg.horizon, cfg.n_sims, seed)?;
            Ok(Outcome { seeds, time_r: cfg.horizon.steps(), estimate, ok: true })
        }
    }
}

/// Runs every (method, sweep point) pair on `g`. Rows are ordered by method, then sweep point,
/// whatever order they finish in.
pub fn run_on_graph(cfg: &ExperimentConfig, g: &DirectedGraph) -> Result<ExperimentResult> {
    validate_against(cfg, g)?;
    let points = sweep_points(cfg);
    let methods: Vec<Method> = if cfg.task == Task::Estimate { vec![Method::Greedy] } else { cfg.methods.clone() };
    let jobs: Vec<(Method, usize)> =
        methods.iter().flat_map(|&m| (0..points.len()).map(move |i| (m, i))).collect();

    let rows = jobs
        .par_iter()
        .map(|&(method, idx)| {
            let point = points[idx];
            let start = Instant::now();
            let outcome = run_one(cfg, g, method, point, idx);
            let wall_ms = cfg.timing.then(|| start.elapsed().as_millis());
            let mut row = ExperimentRow {
                method: if cfg.task == Task::Estimate { "mc".into() } else { method.name().into() },
                task: cfg.task,
                eta: point.eta,
                k: point.k,
                epsilon: matches!(cfg.task, Task::Mintss | Task::Mintime).then_some(cfg.epsilon),
                seed_size: None,
                seed_cost: None,
                time_r: None,
                coverage: None,
                std_err: None,
                wall_ms,
                status: Status::Failed,
                error: None,
            };
            match outcome {
                Ok(o) if o.ok => {
                    row.seed_size = Some(o.seeds.len());
                    row.seed_cost = Some(o.seeds.total_cost());
                    row.time_r = o.time_r;
                    row.coverage = Some(o.estimate.mean);
                    row.std_err = Some(o.estimate.std_err);
                    row.status = Status::Ok;
                }
                Ok(_) => {}
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(ExperimentResult { rows })
}

/// Loads the graph, runs the sweep, and writes the CSV when `cfg.output` is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let g = load_graph(cfg)?;
    let result = run_on_graph(cfg, &g)?;
    if let Some(path) = &cfg.output {
        emit_csv(&result, path)?;
    }
    Ok(result)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn write_csv(result: &ExperimentResult, w: impl Write) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in &result.rows {
        out.write_record([
            r.method.clone(),
            r.task.name().to_string(),
            opt(r.eta),
            opt(r.k),
            opt(r.epsilon),
            opt(r.seed_size),
            opt(r.seed_cost),
            opt(r.time_r),
            opt(r.coverage),
            opt(r.std_err),
            opt(r.wall_ms),
            r.status.as_str().to_string(),
        ])?;
    }
    out.flush()
}

pub fn emit_csv(result: &ExperimentResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(result, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
