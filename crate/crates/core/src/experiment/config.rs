use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::generate::{GeneratorKind, SyntheticSpec};
use crate::heuristics::HeuristicKind;
use crate::propagation::{Horizon, Model};

pub const DEFAULT_N_SIMS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    File { path: PathBuf, symmetrize: bool },
    Synthetic(SyntheticSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProbScheme {
    /// Use the probabilities in the edge list.
    Given,
    Uniform(f64),
    WeightedCascade,
    Mle(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Mintss,
    Mintime,
    Maxinf,
    Estimate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Mintss => "mintss",
            Task::Mintime => "mintime",
            Task::Maxinf => "maxinf",
            Task::Estimate => "estimate",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mintss" => Ok(Task::Mintss),
            "mintime" => Ok(Task::Mintime),
            "maxinf" => Ok(Task::Maxinf),
            "estimate" => Ok(Task::Estimate),
            _ => Err(Error::invalid(format!("unknown task {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Greedy,
    Heuristic(HeuristicKind),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Heuristic(h) => h.name(),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Method::Greedy),
            _ => s.parse().map(Method::Heuristic),
        }
    }
}

/// A fully validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub costs: Option<PathBuf>,
    pub probs: ProbScheme,
    pub model: Model,
    pub task: Task,
    pub etas: Vec<f64>,
    pub epsilon: f64,
    pub ks: Vec<usize>,
    pub horizon: Horizon,
    pub methods: Vec<Method>,
    /// Seed labels for the `estimate` task.
    pub seeds: Vec<String>,
    pub n_sims: usize,
    pub master_seed: u64,
    pub lazy: bool,
    /// Record wall-clock time per row. Off by default so that reruns are byte-identical.
    pub timing: bool,
    pub output: Option<PathBuf>,
}

/// Key-value form of [`ExperimentConfig`], as read from a TOML file or assembled from CLI flags.
/// Every key is optional; [`ConfigFile::merge`] lets a later layer override an earlier one.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub graph: Option<PathBuf>,
    pub symmetrize: Option<bool>,
    pub generator: Option<String>,
    pub nodes: Option<usize>,
    pub graph_seed: Option<u64>,
    pub arc_prob: Option<f64>,
    pub costs: Option<PathBuf>,
    pub probs: Option<String>,
    pub p: Option<f64>,
    pub log: Option<PathBuf>,
    pub model: Option<Model>,
    pub task: Option<String>,
    pub eta: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub k: Option<Vec<usize>>,
    pub horizon: Option<String>,
    pub methods: Option<Vec<String>>,
    pub seeds: Option<Vec<String>>,
    pub n_sims: Option<usize>,
    pub master_seed: Option<u64>,
    pub lazy: Option<bool>,
    pub timing: Option<bool>,
    pub output: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($base:ident, $over:ident, $($f:ident),*) => {
        $( if $over.$f.is_some() { $base.$f = $over.$f; } )*
    };
}

impl ConfigFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("config: {}", e.message())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(mut self, over: ConfigFile) -> Self {
        merge_fields!(
            self, over, graph, symmetrize, generator, nodes, graph_seed, arc_prob, costs, probs, p, log, model,
            task, eta, epsilon, k, horizon, methods, seeds, n_sims, master_seed, lazy, timing, output
        );
        self
    }

    /// Checks everything that does not need the graph itself.
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let graph = match (self.graph, self.generator) {
            (Some(_), Some(_)) => return Err(Error::invalid("give either graph or generator, not both")),
            (None, None) => return Err(Error::invalid("no graph or generator given")),
            (Some(path), None) => GraphSource::File { path, symmetrize: self.symmetrize.unwrap_or(false) },
            (None, Some(kind)) => {
                let kind: GeneratorKind = kind.parse()?;
                let n = self.nodes.ok_or_else(|| Error::invalid("generator needs nodes"))?;
                let spec = SyntheticSpec::new(kind, n, self.graph_seed.unwrap_or(0));
                GraphSource::Synthetic(match self.arc_prob {
                    Some(p) => spec.with_prob(p),
                    None => spec,
                })
            }
        };
        let probs = match self.probs.as_deref().unwrap_or("given") {
            "given" => ProbScheme::Given,
            "uniform" => {
                let p = self.p.ok_or_else(|| Error::invalid("uniform probabilities need p"))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
                }
                ProbScheme::Uniform(p)
            }
            "wc" => ProbScheme::WeightedCascade,
            "mle" => ProbScheme::Mle(self.log.ok_or_else(|| Error::invalid("mle probabilities need log"))?),
            other => return Err(Error::invalid(format!("unknown probability scheme {other:?}"))),
        };
        let task: Task = self.task.as_deref().ok_or_else(|| Error::invalid("no task given"))?.parse()?;
        let etas = self.eta.unwrap_or_default();
        let ks = self.k.unwrap_or_default();
        let epsilon = self.epsilon.unwrap_or(0.0);
        let methods = self
            .methods
            .unwrap_or_else(|| vec!["greedy".into()])
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<Method>>>()?;
        let horizon: Horizon = self.horizon.as_deref().unwrap_or("inf").parse()?;
        let n_sims = self.n_sims.unwrap_or(DEFAULT_N_SIMS);
        if n_sims == 0 {
            return Err(Error::invalid("n_sims must be at least 1"));
        }
        match task {
            Task::Mintss | Task::Mintime => {
                if etas.is_empty() {
                    return Err(Error::invalid(format!("{} needs at least one eta", task.name())));
                }
                for &eta in &etas {
                    crate::opt::validate_cover_params(eta, epsilon)?;
                }
                if task == Task::Mintime && ks.is_empty() {
                    return Err(Error::invalid("mintime needs at least one k"));
                }
            }
            Task::Maxinf if ks.is_empty() => return Err(Error::invalid("maxinf needs at least one k")),
            Task::Estimate if self.seeds.as_ref().is_none_or(Vec::is_empty) => {
                return Err(Error::invalid("estimate needs seeds"));
            }
            _ => {}
        }
        if ks.contains(&0) {
            return Err(Error::invalid("budget k must be at least 1"));
        }
        if methods.is_empty() {
            return Err(Error::invalid("methods list is empty"));
        }
        Ok(ExperimentConfig {
            graph,
            costs: self.costs,
            probs,
            model: self.model.unwrap_or(Model::Ic),
            task,
            etas,
            epsilon,
            ks,
            horizon,
            methods,
            seeds: self.seeds.unwrap_or_default(),
            n_sims,
            master_seed: self.master_seed.unwrap_or(0),
            lazy: self.lazy.unwrap_or(false),
            timing: self.timing.unwrap_or(false),
            output: self.output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_and_override() {
        let base = ConfigFile::parse(
            r#"
            generator = "star"
            nodes = 5
            arc-prob = 1.0
            task = "mintss"
            eta = [3, 5]
            epsilon = 0.5
            methods = ["greedy", "random"]
            n-sims = 100
            "#,
        )
        .unwrap();
        let cfg = base.clone().merge(ConfigFile { n_sims: Some(7), ..Default::default() }).into_config().unwrap();
        assert_eq!(cfg.n_sims, 7);
        assert_eq!(cfg.etas, vec![3.0, 5.0]);
        assert_eq!(cfg.methods, vec![Method::Greedy, Method::Heuristic(HeuristicKind::Random)]);
        assert!(matches!(cfg.graph, GraphSource::Synthetic(s) if s.n == 5 && s.arc_prob == 1.0));
    }

    #[test]
    fn validation_errors() {
        assert!(ConfigFile::parse("bogus = 1").is_err());
        let ok = ConfigFile {
            generator: Some("path".into()),
            nodes: Some(3),
            task: Some("mintss".into()),
            eta: Some(vec![2.0]),
            epsilon: Some(0.5),
            ..Default::default()
        };
        assert!(ok.clone().into_config().is_ok());
        let bad = |f: ConfigFile| f.into_config().is_err();
        assert!(bad(ConfigFile { epsilon: Some(0.0), ..ok.clone() }));
        assert!(bad(ConfigFile { n_sims: Some(0), ..ok.clone() }));
        assert!(bad(ConfigFile { graph: Some("x".into()), ..ok.clone() }));
        assert!(bad(ConfigFile { methods: Some(vec!["pmia".into()]), ..ok.clone() }));
        assert!(bad(ConfigFile { task: Some("mintime".into()), ..ok.clone() }));
        assert!(bad(ConfigFile { task: Some("estimate".into()), ..ok }));
    }
}
