//! Baseline seed-selection heuristics, for comparison with greedy.
//!
//! Each heuristic fixes a total order on the nodes. MINTSS takes prefixes of that order until the
//! estimated spread reaches `η - ε`; MINTIME takes the first `k` nodes and scans the horizon.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::opt::{MintimeResult, MintssResult};
use crate::oracle::{CoverageOracle, MonteCarloOracle};
use crate::propagation::{estimate_spread_profile, Horizon, Model, SeedSet};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    Random,
    HighDegree,
    PageRank,
    Sp,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 4] =
        [HeuristicKind::Random, HeuristicKind::HighDegree, HeuristicKind::PageRank, HeuristicKind::Sp];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Random => "random",
            HeuristicKind::HighDegree => "high-degree",
            HeuristicKind::PageRank => "pagerank",
            HeuristicKind::Sp => "sp",
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(HeuristicKind::Random),
            "high-degree" | "degree" => Ok(HeuristicKind::HighDegree),
            "pagerank" | "page-rank" => Ok(HeuristicKind::PageRank),
            "sp" => Ok(HeuristicKind::Sp),
            "pmia" => Err(Error::Unimplemented("heuristic pmia".into())),
            _ => Err(Error::invalid(format!("unknown heuristic {s:?}"))),
        }
    }
}

/// A heuristic with its parameters. Build with [`HeuristicSpec::new`] and the `with_*` setters,
/// which validate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeuristicSpec {
    kind: HeuristicKind,
    damping: f64,
    max_iter: usize,
    tolerance: f64,
    sp_floor: f64,
    rng_seed: u64,
}

impl HeuristicSpec {
    pub fn new(kind: HeuristicKind) -> Self {
        HeuristicSpec { kind, damping: 0.85, max_iter: 200, tolerance: 1e-8, sp_floor: 1e-3, rng_seed: 0 }
    }

    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    /// PageRank damping factor in `(0, 1)`.
    pub fn with_damping(mut self, d: f64) -> Result<Self> {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::invalid(format!("damping {d} outside (0, 1)")));
        }
        self.damping = d;
        Ok(self)
    }

    /// PageRank iteration cap and L1 convergence tolerance.
    pub fn with_iterations(mut self, max_iter: usize, tolerance: f64) -> Result<Self> {
        if max_iter == 0 || tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::invalid("PageRank needs max_iter >= 1 and tolerance > 0"));
        }
        self.max_iter = max_iter;
        self.tolerance = tolerance;
        Ok(self)
    }

    /// Paths whose probability falls below `floor` are ignored by the SP heuristic.
    pub fn with_sp_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0 && floor <= 1.0) {
            return Err(Error::invalid(format!("path probability floor {floor} outside (0, 1]")));
        }
        self.sp_floor = floor;
        Ok(self)
    }
}

/// All nodes, best first.
pub fn rank_nodes(g: &DirectedGraph, spec: &HeuristicSpec) -> Vec<NodeId> {
    let n = g.node_count();
    match spec.kind {
        HeuristicKind::Random => {
            let mut order: Vec<NodeId> = g.nodes().collect();
            order.shuffle(&mut stream(spec.rng_seed, 0));
            order
        }
        HeuristicKind::HighDegree => {
            let mut order: Vec<NodeId> = g.nodes().collect();
            order.sort_by_key(|&v| (Reverse(g.out_degree(v)), v));
            order
        }
        HeuristicKind::PageRank => {
            let score = pagerank(g, spec.damping, spec.max_iter, spec.tolerance);
            let mut order: Vec<NodeId> = (0..n).map(NodeId::from).collect();
            order.sort_by(|&a, &b| score[b.index()].total_cmp(&score[a.index()]).then(a.cmp(&b)));
            order
        }
        HeuristicKind::Sp => sp_order(g, spec.sp_floor),
    }
}

/// PageRank on the reversed graph: node `u` passes its score to each in-neighbour `v` in
/// proportion to `p(v, u)`. Nodes without incoming weight spread their score uniformly.
pub fn pagerank(g: &DirectedGraph, damping: f64, max_iter: usize, tolerance: f64) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let w_in: Vec<f64> = g.nodes().map(|u| g.in_weight(u)).collect();
    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&u| w_in[u] <= 0.0).map(|u| rank[u]).sum();
        let base = (1.0 - damping) / n as f64 + damping * dangling / n as f64;
        next.fill(base);
        for v in g.nodes() {
            let (heads, probs) = g.out_arcs(v);
            let mut acc = 0.0;
            for (&u, &p) in heads.iter().zip(probs) {
                if w_in[u.index()] > 0.0 {
                    acc += rank[u.index()] * p / w_in[u.index()];
                }
            }
            next[v.index()] += damping * acc;
        }
        let delta: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < tolerance {
            break;
        }
    }
    rank
}

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64, NodeId);

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on -log p
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Highest path probability from `s` to every node reached above `floor`, by Dijkstra on `-ln p`.
fn max_prob_paths(g: &DirectedGraph, s: NodeId, floor: f64, best: &mut [f64], out: &mut Vec<(NodeId, f64)>) {
    let limit = -floor.ln();
    out.clear();
    let mut heap = BinaryHeap::from([Dist(0.0, s)]);
    best[s.index()] = 0.0;
    let mut touched = vec![s];
    while let Some(Dist(d, v)) = heap.pop() {
        if d > best[v.index()] {
            continue;
        }
        out.push((v, (-d).exp()));
        let (heads, probs) = g.out_arcs(v);
        for (&u, &p) in heads.iter().zip(probs) {
            if p <= 0.0 {
                continue;
            }
            let nd = d - p.ln();
            if nd <= limit + 1e-12 && nd < best[u.index()] {
                if best[u.index()].is_infinite() {
                    touched.push(u);
                }
                best[u.index()] = nd;
                heap.push(Dist(nd, u));
            }
        }
    }
    for v in touched {
        best[v.index()] = f64::INFINITY;
    }
}

/// Greedy order under the surrogate `Σ_u 1 - Π_{s ∈ S} (1 - pmax(s, u))`.
fn sp_order(g: &DirectedGraph, floor: f64) -> Vec<NodeId> {
    let n = g.node_count();
    let mut best = vec![f64::INFINITY; n];
    let mut buf = Vec::new();
    let reach: Vec<Vec<(NodeId, f64)>> = g
        .nodes()
        .map(|s| {
            max_prob_paths(g, s, floor, &mut best, &mut buf);
            buf.clone()
        })
        .collect();

    let mut miss = vec![1.0f64; n];
    let gain = |s: usize, miss: &[f64]| reach[s].iter().map(|&(u, p)| miss[u.index()] * p).sum::<f64>();
    // (gain, Reverse(id), round): stale entries are re-scored before being accepted
    let mut heap: BinaryHeap<(OrdF64, Reverse<NodeId>, usize)> =
        (0..n).map(|s| (OrdF64(gain(s, &miss)), Reverse(NodeId::from(s)), 0)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((OrdF64(_), Reverse(s), round)) = heap.pop() {
        if round == order.len() {
            for &(u, p) in &reach[s.index()] {
                miss[u.index()] *= 1.0 - p;
            }
            order.push(s);
        } else {
            heap.push((OrdF64(gain(s.index(), &miss)), Reverse(s), order.len()));
        }
    }
    order
}

#[derive(Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// MINTSS by rank prefixes, with the same Monte Carlo oracle as greedy.
#[allow(clippy::too_many_arguments)]
pub fn heuristic_mintss(
    g: &DirectedGraph,
    model: Model,
    spec: &HeuristicSpec,
    eta: f64,
    eps: f64,
    n_sims: usize,
    master_seed: u64,
) -> Result<MintssResult> {
    let oracle = MonteCarloOracle::new(g, model, Horizon::Unbounded, n_sims, master_seed)?;
    prefix_mintss(&oracle, &rank_nodes(g, spec), g.costs(), eta, eps)
}

/// Adds `order` one element at a time until `f(S) >= η - ε`; infeasible if the order runs out.
pub fn prefix_mintss<O: CoverageOracle>(
    oracle: &O,
    order: &[NodeId],
    costs: &[f64],
    eta: f64,
    eps: f64,
) -> Result<MintssResult> {
    crate::opt::validate_cover_params(eta, eps)?;
    let mut seeds = SeedSet::new();
    let mut current = 0.0;
    let mut gains = Vec::new();
    for &v in order {
        if current >= eta - eps {
            break;
        }
        let c = *costs.get(v.index()).ok_or_else(|| Error::UnknownNode(v.to_string()))?;
        seeds.insert(v, c)?;
        let value = oracle.eval(seeds.nodes());
        gains.push(value.min(eta) - current.min(eta));
        current = value;
    }
    Ok(MintssResult {
        iterations: seeds.len(),
        seeds,
        achieved_coverage: current,
        marginal_gains: gains,
        feasible: current >= eta - eps,
    })
}

/// MINTIME with the top `k` ranked nodes: the first horizon whose estimated spread reaches
/// `η - ε`.
#[allow(clippy::too_many_arguments)]
pub fn heuristic_mintime(
    g: &DirectedGraph,
    model: Model,
    spec: &HeuristicSpec,
    k: usize,
    eta: f64,
    eps: f64,
    n_sims: usize,
    master_seed: u64,
) -> Result<MintimeResult> {
    let oracle = MonteCarloOracle::new(g, model, Horizon::Unbounded, n_sims, master_seed)?;
    heuristic_mintime_with(g, &oracle, &rank_nodes(g, spec), k, eta, eps)
}

/// MINTIME with the first `k` nodes of `order`, reading every horizon off one batch of cascades
/// drawn from the oracle's stream for that set.
pub fn heuristic_mintime_with(
    g: &DirectedGraph,
    oracle: &MonteCarloOracle<'_>,
    order: &[NodeId],
    k: usize,
    eta: f64,
    eps: f64,
) -> Result<MintimeResult> {
    if k == 0 {
        return Err(Error::invalid("budget k must be at least 1"));
    }
    crate::opt::validate_cover_params(eta, eps)?;
    let n = g.node_count();
    let seeds = SeedSet::with_costs(order.iter().copied().take(k.min(n)), g.costs())?;
    let last = n.saturating_sub(1) as u32;
    let profile = estimate_spread_profile(
        g,
        oracle.model(),
        seeds.nodes(),
        Horizon::Steps(last),
        oracle.n_sims(),
        oracle.master_seed(),
    )?;
    let budget = seeds.len();
    for r in 0..=last {
        let c = profile.at(r).mean;
        if c >= eta - eps {
            return Ok(MintimeResult { seeds, time: Some(r), achieved_coverage: c, budget });
        }
    }
    let c = profile.at(last).mean;
    Ok(MintimeResult { seeds, time: None, achieved_coverage: c, budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> DirectedGraph {
        DirectedGraph::from_arcs(5, (1..5).map(|i| (0, i, 1.0))).unwrap()
    }

    #[test]
    fn high_degree_puts_center_first() {
        let order = rank_nodes(&star(), &HeuristicSpec::new(HeuristicKind::HighDegree));
        assert_eq!(order, (0..5).map(NodeId).collect::<Vec<_>>());
    }

    #[test]
    fn random_is_a_seeded_permutation() {
        let g = DirectedGraph::from_arcs(30, (1..30).map(|i| (i - 1, i, 0.5))).unwrap();
        let spec = HeuristicSpec::new(HeuristicKind::Random).with_seed(9);
        let a = rank_nodes(&g, &spec);
        assert_eq!(a, rank_nodes(&g, &spec));
        assert_ne!(a, rank_nodes(&g, &spec.with_seed(10)));
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, g.nodes().collect::<Vec<_>>());
    }

    #[test]
    fn pagerank_two_nodes() {
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.9)]).unwrap();
        let pr = pagerank(&g, 0.85, 200, 1e-12);
        // PR0 = 0.075 + 0.85 (PR1 + PR0 / 2), PR1 = 0.075 + 0.85 PR0 / 2
        let pr0 = 0.13875 / 0.21375;
        assert!((pr[0] - pr0).abs() < 1e-9);
        assert!((pr[1] - (1.0 - pr0)).abs() < 1e-9);
        let order = rank_nodes(&g, &HeuristicSpec::new(HeuristicKind::PageRank));
        assert_eq!(order, vec![NodeId(0), NodeId(1)]);
    }

    #[test]
    fn sp_prefers_the_best_source() {
        // 0 reaches 1 and 2 surely; 3 reaches 4 with probability 0.5
        let g = DirectedGraph::from_arcs(5, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 0.5)]).unwrap();
        let order = rank_nodes(&g, &HeuristicSpec::new(HeuristicKind::Sp));
        assert_eq!(order[..2], [NodeId(0), NodeId(3)]);
        assert_eq!(order.len(), 5);
    }

    #[test]
    fn sp_floor_prunes_long_paths() {
        let mut best = vec![f64::INFINITY; 4];
        let mut out = Vec::new();
        let g = DirectedGraph::from_arcs(4, [(0, 1, 0.1), (1, 2, 0.1), (2, 3, 0.1)]).unwrap();
        max_prob_paths(&g, NodeId(0), 0.005, &mut best, &mut out);
        let reached: Vec<NodeId> = out.iter().map(|x| x.0).collect();
        assert_eq!(reached, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert!(best.iter().all(|d| d.is_infinite()));
    }

    #[test]
    fn spec_validation() {
        let s = HeuristicSpec::new(HeuristicKind::PageRank);
        assert!(s.with_damping(1.0).is_err());
        assert!(s.with_iterations(0, 1e-8).is_err());
        assert!(s.with_sp_floor(0.0).is_err());
        assert!(matches!("pmia".parse::<HeuristicKind>(), Err(Error::Unimplemented(_))));
        assert_eq!("high-degree".parse::<HeuristicKind>().unwrap(), HeuristicKind::HighDegree);
    }

    #[test]
    fn mintss_star_and_infeasible() {
        let spec = HeuristicSpec::new(HeuristicKind::HighDegree);
        let r = heuristic_mintss(&star(), Model::Ic, &spec, 5.0, 0.5, 10, 1).unwrap();
        assert!(r.feasible);
        assert_eq!(r.seeds.nodes(), &[NodeId(0)]);
        let g = DirectedGraph::from_arcs(3, [(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        let r = heuristic_mintss(&g, Model::Ic, &spec, 4.0, 0.5, 10, 1).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.seeds.len(), 3);
    }

    #[test]
    fn mintime_path_and_infeasible() {
        let g = DirectedGraph::from_arcs(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let spec = HeuristicSpec::new(HeuristicKind::HighDegree);
        let r = heuristic_mintime(&g, Model::Ic, &spec, 1, 3.0, 0.5, 5, 0).unwrap();
        assert_eq!((r.time, r.seeds.nodes()), (Some(2), &[NodeId(0)][..]));
        let h = DirectedGraph::from_arcs(3, [(0, 1, 0.0)]).unwrap();
        let r = heuristic_mintime(&h, Model::Ic, &spec, 1, 2.0, 0.5, 5, 0).unwrap();
        assert!(!r.feasible());
    }
}
