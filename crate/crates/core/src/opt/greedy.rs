//! Greedy selection over a coverage oracle.
//!
//! Each round scores every unchosen element against the current set and takes the best; equal
//! scores go to the smallest id. Candidate values may be computed in parallel, but the argmax is
//! always reduced in ascending id order, so results never depend on scheduling.
//!
//! The lazy variant keeps stale scores in a max-heap and only re-evaluates the top entry
//! (CELF). For a submodular objective a stale score is an upper bound, so lazy and plain greedy
//! pick the same elements.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::oracle::CoverageOracle;
use crate::propagation::SeedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Use lazy (CELF) re-evaluation instead of scoring every candidate each round.
    pub lazy: bool,
    /// Evaluate candidates of a round in parallel.
    pub parallel: bool,
    /// Stop MINTSS with a failure once this many seeds are chosen.
    pub max_seeds: Option<usize>,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions { lazy: false, parallel: true, max_seeds: None }
    }
}

impl GreedyOptions {
    pub fn lazy() -> Self {
        GreedyOptions { lazy: true, ..Self::default() }
    }
}

/// Output of [`greedy_mintss`].
#[derive(Clone, Debug, PartialEq)]
pub struct MintssResult {
    pub seeds: SeedSet,
    /// Oracle value of `seeds`.
    pub achieved_coverage: f64,
    pub iterations: usize,
    /// Truncated gain `min(f(S ∪ {w}), η) - f(S)` of each pick, in pick order.
    pub marginal_gains: Vec<f64>,
    /// False when the loop ended without reaching `η - ε`.
    pub feasible: bool,
}

#[derive(Clone, Copy, Debug)]
struct Pick {
    node: NodeId,
    score: f64,
    value: f64,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    score: f64,
    node: NodeId,
    value: f64,
    round: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // higher score first, then smaller id
    fn cmp(&self, other: &Self) -> Ordering {
        self.score.total_cmp(&other.score).then_with(|| other.node.cmp(&self.node))
    }
}

/// Round-by-round candidate selection shared by the MAXINF and MINTSS drivers.
struct Selector<'o, O, F> {
    oracle: &'o O,
    score: F,
    opts: GreedyOptions,
    chosen: Vec<NodeId>,
    taken: Vec<bool>,
    heap: Option<BinaryHeap<Entry>>,
    round: usize,
}

impl<'o, O, F> Selector<'o, O, F>
where
    O: CoverageOracle,
    F: Fn(NodeId, f64, f64) -> f64 + Sync,
{
    /// `score(w, f(S ∪ {w}), f(S))` ranks candidates.
    fn new(oracle: &'o O, opts: GreedyOptions, score: F) -> Self {
        let n = oracle.ground_set_size();
        Selector { oracle, score, opts, chosen: Vec::new(), taken: vec![false; n], heap: None, round: 0 }
    }

    fn value_with(&self, w: NodeId) -> f64 {
        let mut s = Vec::with_capacity(self.chosen.len() + 1);
        s.extend_from_slice(&self.chosen);
        s.push(w);
        self.oracle.eval(&s)
    }

    fn evaluate_all(&self, base: f64) -> Vec<Pick> {
        let candidates: Vec<NodeId> =
            (0..self.taken.len()).filter(|&i| !self.taken[i]).map(NodeId::from).collect();
        let eval = |&w: &NodeId| {
            let value = self.value_with(w);
            Pick { node: w, score: (self.score)(w, value, base), value }
        };
        if self.opts.parallel {
            candidates.par_iter().map(eval).collect()
        } else {
            candidates.iter().map(eval).collect()
        }
    }

    /// Best candidate against the current set with value `base`; `None` once every element is taken.
    fn next(&mut self, base: f64) -> Option<Pick> {
        let round = self.round;
        self.round += 1;
        if !self.opts.lazy {
            // ascending ids with strict `>` keeps the smallest id among ties
            return self.evaluate_all(base).into_iter().reduce(|best, p| if p.score > best.score { p } else { best });
        }
        if self.heap.is_none() {
            let heap = self
                .evaluate_all(base)
                .into_iter()
                .map(|p| Entry { score: p.score, node: p.node, value: p.value, round })
                .collect();
            self.heap = Some(heap);
        }
        loop {
            let top = self.heap.as_mut().expect("initialized above").pop()?;
            if top.round == round {
                return Some(Pick { node: top.node, score: top.score, value: top.value });
            }
            let value = self.value_with(top.node);
            let score = (self.score)(top.node, value, base);
            self.heap.as_mut().expect("initialized above").push(Entry { score, node: top.node, value, round });
        }
    }

    fn take(&mut self, w: NodeId) {
        self.taken[w.index()] = true;
        self.chosen.push(w);
    }
}

/// Picks `k` elements, each maximizing the marginal gain `f(S ∪ {w}) - f(S)`.
pub fn greedy_maxinf<O: CoverageOracle>(oracle: &O, k: usize, opts: GreedyOptions) -> Result<SeedSet> {
    let n = oracle.ground_set_size();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("budget k = {k} outside [1, {n}]")));
    }
    let mut sel = Selector::new(oracle, opts, |_, value, base| value - base);
    let mut seeds = SeedSet::new();
    let mut base = oracle.eval(&[]);
    while seeds.len() < k {
        let pick = sel.next(base).expect("k <= ground set size");
        sel.take(pick.node);
        seeds.insert(pick.node, 1.0)?;
        base = pick.value;
    }
    Ok(seeds)
}

pub(crate) fn validate_cover_params(eta: f64, eps: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("coverage threshold eta = {eta} must be positive")));
    }
    if !(eps > 0.0 && eps < eta) {
        return Err(Error::invalid(format!("shortfall eps = {eps} must satisfy 0 < eps < eta = {eta}")));
    }
    Ok(())
}

/// Cost-aware greedy cover: while `f(S) < η - ε`, add the element maximizing
/// `(min(f(S ∪ {w}), η) - f(S)) / c(w)`.
///
/// With an exact oracle the result costs at most `(1 + ln(η/ε))` times the cheapest set reaching
/// `η`. The loop gives up (with `feasible = false` and the partial set) when no candidate has a
/// positive truncated gain, when the ground set is exhausted, or when `opts.max_seeds` is hit.
pub fn greedy_mintss<O: CoverageOracle>(
    oracle: &O,
    eta: f64,
    eps: f64,
    costs: &[f64],
    opts: GreedyOptions,
) -> Result<MintssResult> {
    validate_cover_params(eta, eps)?;
    let n = oracle.ground_set_size();
    if costs.len() != n {
        return Err(Error::invalid(format!("{} costs for a ground set of {n}", costs.len())));
    }
    if let Some(c) = costs.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::invalid(format!("costs must be positive, got {c}")));
    }

    let target = eta - eps;
    let mut seeds = SeedSet::new();
    let mut gains = Vec::new();
    let mut value = oracle.eval(&[]);
    let done = |seeds: SeedSet, value: f64, gains: Vec<f64>, feasible: bool| MintssResult {
        iterations: seeds.len(),
        seeds,
        achieved_coverage: value,
        marginal_gains: gains,
        feasible,
    };
    if value >= target {
        return Ok(done(seeds, value, gains, true));
    }
    // cheap infeasibility check before paying for a full greedy run
    let everything: Vec<NodeId> = (0..n).map(NodeId::from).collect();
    if oracle.eval(&everything) < target {
        return Ok(done(seeds, value, gains, false));
    }

    let mut sel = Selector::new(oracle, opts, |w: NodeId, v: f64, base: f64| (v.min(eta) - base) / costs[w.index()]);
    while value < target {
        if opts.max_seeds.is_some_and(|m| seeds.len() >= m) {
            return Ok(done(seeds, value, gains, false));
        }
        let Some(pick) = sel.next(value) else {
            return Ok(done(seeds, value, gains, false));
        };
        if pick.score <= 0.0 {
            return Ok(done(seeds, value, gains, false));
        }
        sel.take(pick.node);
        seeds.insert(pick.node, costs[pick.node.index()])?;
        gains.push(pick.value.min(eta) - value);
        value = pick.value;
    }
    Ok(done(seeds, value, gains, true))
}
