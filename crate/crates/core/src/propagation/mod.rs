//! Cascade simulation and spread computation for the Independent Cascade and Linear Threshold
//! models.

pub(crate) mod exact;
mod montecarlo;
mod simulate;

use std::fmt;
use std::str::FromStr;

pub use exact::{exact_spread, ExactCaps, LiveEdgeWorlds};
pub use montecarlo::{estimate_spread, estimate_spread_profile, SpreadProfile};
pub use simulate::{simulate_once, CascadeTrace, Simulator};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Deserialize, serde::Serialize)]
pub enum Model {
    #[serde(alias = "ic", alias = "IC")]
    Ic,
    #[serde(alias = "lt", alias = "LT")]
    Lt,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(Model::Ic),
            "lt" => Ok(Model::Lt),
            _ => Err(Error::invalid(format!("unknown model {s:?} (expected ic or lt)"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ic => "IC",
            Model::Lt => "LT",
        })
    }
}

/// Time bound on a cascade. `Steps(0)` leaves only the seeds active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Horizon {
    Steps(u32),
    #[default]
    Unbounded,
}

impl Horizon {
    /// True when a node activated at `step` is still inside the horizon.
    #[inline]
    pub fn allows(self, step: u32) -> bool {
        match self {
            Horizon::Steps(r) => step <= r,
            Horizon::Unbounded => true,
        }
    }

    pub fn steps(self) -> Option<u32> {
        match self {
            Horizon::Steps(r) => Some(r),
            Horizon::Unbounded => None,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Steps(r) => write!(f, "{r}"),
            Horizon::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "unbounded" | "" => Ok(Horizon::Unbounded),
            _ => s
                .parse::<u32>()
                .map(Horizon::Steps)
                .map_err(|_| Error::invalid(format!("bad horizon {s:?}"))),
        }
    }
}

/// Distinct nodes in pick order, with their summed cost.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SeedSet {
    nodes: Vec<NodeId>,
    total_cost: f64,
}

impl SeedSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a seed set with unit costs.
    pub fn from_nodes(nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut s = SeedSet::new();
        for v in nodes {
            s.insert(v, 1.0)?;
        }
        Ok(s)
    }

    /// Builds a seed set charging each node its cost in `costs`.
    pub fn with_costs(nodes: impl IntoIterator<Item = NodeId>, costs: &[f64]) -> Result<Self> {
        let mut s = SeedSet::new();
        for v in nodes {
            let c = *costs.get(v.index()).ok_or_else(|| Error::UnknownNode(v.to_string()))?;
            s.insert(v, c)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, v: NodeId, cost: f64) -> Result<()> {
        if self.nodes.contains(&v) {
            return Err(Error::invalid(format!("node {v} is already a seed")));
        }
        self.nodes.push(v);
        self.total_cost += cost;
        Ok(())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    /// Members in ascending id order.
    pub fn sorted(&self) -> Vec<NodeId> {
        let mut v = self.nodes.clone();
        v.sort_unstable();
        v
    }
}

/// Mean activated-node count over a batch of simulations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n_sims: usize,
    pub horizon: Horizon,
}

pub(crate) fn check_seeds(g: &DirectedGraph, seeds: &[NodeId]) -> Result<()> {
    match seeds.iter().find(|v| v.index() >= g.node_count()) {
        Some(v) => Err(Error::UnknownNode(v.to_string())),
        None => Ok(()),
    }
}

pub(crate) fn check_model(g: &DirectedGraph, model: Model) -> Result<()> {
    match model {
        Model::Ic => Ok(()),
        Model::Lt => g.check_lt_weights(),
    }
}
