//! Budget-boosted MINTIME search.
//!
//! For `R = 0, 1, ..` run greedy cover against the horizon-`R` spread with at most
//! `ceil(k (1 + ln(η/ε)))` seeds, and stop at the first `R` that reaches `η - ε`. With an exact
//! oracle this `R` is never larger than the optimal time for `k` seeds and full coverage `η`.

use super::greedy::{greedy_mintss, validate_cover_params, GreedyOptions};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::oracle::{CoverageOracle, MonteCarloOracle};
use crate::propagation::{Horizon, Model, SeedSet};

#[derive(Clone, Debug, PartialEq)]
pub struct MintimeResult {
    pub seeds: SeedSet,
    /// First horizon that met the coverage target; `None` on failure.
    pub time: Option<u32>,
    /// Coverage of `seeds` within `time` (within the last horizon tried on failure).
    pub achieved_coverage: f64,
    /// Seed budget that was enforced.
    pub budget: usize,
}

impl MintimeResult {
    pub fn feasible(&self) -> bool {
        self.time.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MintimeOptions {
    pub greedy: GreedyOptions,
    /// Scale the budget by `1 + ln(η/ε)`. Without it the budget is exactly `k`.
    pub budget_boost: bool,
    /// Last horizon to try; defaults to `n - 1`.
    pub max_horizon: Option<u32>,
}

impl Default for MintimeOptions {
    fn default() -> Self {
        MintimeOptions { greedy: GreedyOptions::default(), budget_boost: true, max_horizon: None }
    }
}

/// `ceil(k (1 + ln(η/ε)))`.
pub fn boosted_budget(k: usize, eta: f64, eps: f64) -> usize {
    (k as f64 * (1.0 + (eta / eps).ln())).ceil() as usize
}

/// MINTIME over any family of horizon-indexed oracles on `n` elements with unit costs.
pub fn mintime_with<O, F>(n: usize, oracle_at: F, k: usize, eta: f64, eps: f64, opts: MintimeOptions) -> Result<MintimeResult>
where
    O: CoverageOracle,
    F: Fn(Horizon) -> O,
{
    if k == 0 {
        return Err(Error::invalid("budget k must be at least 1"));
    }
    validate_cover_params(eta, eps)?;
    if eta > n as f64 {
        return Err(Error::invalid(format!("eta = {eta} exceeds the {n} nodes")));
    }
    let budget = if opts.budget_boost { boosted_budget(k, eta, eps) } else { k }.min(n);
    let last = opts.max_horizon.unwrap_or(n.saturating_sub(1) as u32);
    let costs = vec![1.0; n];
    let greedy = GreedyOptions { max_seeds: Some(budget), ..opts.greedy };

    let mut fallback = MintimeResult { seeds: SeedSet::new(), time: None, achieved_coverage: 0.0, budget };
    for r in 0..=last {
        let res = greedy_mintss(&oracle_at(Horizon::Steps(r)), eta, eps, &costs, greedy)?;
        if res.feasible {
            return Ok(MintimeResult { seeds: res.seeds, time: Some(r), achieved_coverage: res.achieved_coverage, budget });
        }
        fallback.seeds = res.seeds;
        fallback.achieved_coverage = res.achieved_coverage;
    }
    Ok(fallback)
}

/// MINTIME with Monte Carlo spread estimates.
#[allow(clippy::too_many_arguments)]
pub fn mintime(
    g: &DirectedGraph,
    model: Model,
    k: usize,
    eta: f64,
    eps: f64,
    n_sims: usize,
    master_seed: u64,
    opts: MintimeOptions,
) -> Result<MintimeResult> {
    let base = MonteCarloOracle::new(g, model, Horizon::Unbounded, n_sims, master_seed)?;
    mintime_with(g.node_count(), |h| base.with_horizon(h), k, eta, eps, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    #[test]
    fn star_one_hop() {
        let g = DirectedGraph::from_arcs(5, (1..5).map(|i| (0, i, 1.0))).unwrap();
        let r = mintime(&g, Model::Ic, 1, 5.0, 0.5, 1, 0, MintimeOptions::default()).unwrap();
        assert_eq!(r.time, Some(1));
        assert_eq!(r.seeds.nodes(), &[NodeId(0)]);
        assert_eq!(r.budget, 4);
    }

    #[test]
    fn path_with_and_without_boost() {
        let g = DirectedGraph::from_arcs(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        // the boosted budget ceil(1 + ln 8) = 4 seeds covers the path at R = 0
        let r = mintime(&g, Model::Ic, 1, 4.0, 0.5, 1, 0, MintimeOptions::default()).unwrap();
        assert_eq!((r.time, r.seeds.len()), (Some(0), 4));
        let plain = MintimeOptions { budget_boost: false, ..Default::default() };
        let r = mintime(&g, Model::Ic, 1, 4.0, 0.5, 1, 0, plain).unwrap();
        assert_eq!(r.time, Some(3));
        assert_eq!(r.seeds.nodes(), &[NodeId(0)]);
    }

    #[test]
    fn infeasible_reports_failure() {
        let g = DirectedGraph::from_arcs(4, [(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        let plain = MintimeOptions { budget_boost: false, ..Default::default() };
        let r = mintime(&g, Model::Ic, 2, 3.0, 0.5, 10, 0, plain).unwrap();
        assert!(!r.feasible());
        assert!(mintime(&g, Model::Ic, 0, 3.0, 0.5, 10, 0, plain).is_err());
        assert!(mintime(&g, Model::Ic, 1, 5.0, 0.5, 10, 0, plain).is_err());
    }

    #[test]
    fn boosted_budget_values() {
        assert_eq!(boosted_budget(1, 5.0, 0.5), 4);
        assert_eq!(boosted_budget(2, 5.0, 0.5), 7);
        assert_eq!(boosted_budget(1, 1.0, 0.5), 2);
    }
}
