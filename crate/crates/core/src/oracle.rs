//! Set-function oracles consumed by the greedy drivers.
//!
//! A [`CoverageOracle`] is a monotone submodular `f: 2^X -> R` with `f(∅) = 0`, where the ground
//! set `X` is `{0, .., ground_set_size() - 1}`. Spread oracles use node ids directly; synthetic
//! oracles use the same `NodeId` type for their elements.

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::propagation::{
    check_model, estimate_spread, exact_spread, ExactCaps, Horizon, LiveEdgeWorlds, Model, SpreadEstimate,
};
use crate::propagation::exact::{live_reach, ReachMass};
use crate::rng::{derive_seed, set_hash, splitmix64};

pub trait CoverageOracle: Sync {
    fn ground_set_size(&self) -> usize;

    /// Value of the set. Order and duplicates in `set` do not matter.
    fn eval(&self, set: &[NodeId]) -> f64;

    /// True when `eval` returns the function value itself rather than an estimate.
    fn is_exact(&self) -> bool {
        true
    }

    /// `Some(δ)` when every value is known to lie in `[(1 - δ) f(S), f(S)]`.
    fn relative_error_bound(&self) -> Option<f64> {
        None
    }
}

impl<T: CoverageOracle + ?Sized> CoverageOracle for &T {
    fn ground_set_size(&self) -> usize {
        (**self).ground_set_size()
    }
    fn eval(&self, set: &[NodeId]) -> f64 {
        (**self).eval(set)
    }
    fn is_exact(&self) -> bool {
        (**self).is_exact()
    }
    fn relative_error_bound(&self) -> Option<f64> {
        (**self).relative_error_bound()
    }
}

/// Monte Carlo spread oracle.
///
/// Every set is evaluated on the same simulation seeds (common random numbers), so the value is
/// the average spread over one fixed sample of live-edge worlds. That sample average is itself
/// monotone and submodular, and marginal gains are not swamped by independent noise.
#[derive(Clone, Copy, Debug)]
pub struct MonteCarloOracle<'g> {
    g: &'g DirectedGraph,
    model: Model,
    horizon: Horizon,
    n_sims: usize,
    master_seed: u64,
}

impl<'g> MonteCarloOracle<'g> {
    pub fn new(g: &'g DirectedGraph, model: Model, horizon: Horizon, n_sims: usize, master_seed: u64) -> Result<Self> {
        if n_sims == 0 {
            return Err(Error::invalid("n_sims must be at least 1"));
        }
        check_model(g, model)?;
        Ok(MonteCarloOracle { g, model, horizon, n_sims, master_seed })
    }

    pub fn with_horizon(&self, horizon: Horizon) -> Self {
        MonteCarloOracle { horizon, ..*self }
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.g
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n_sims(&self) -> usize {
        self.n_sims
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Full estimate (with standard error) for `set`, consistent with [`CoverageOracle::eval`].
    pub fn estimate(&self, set: &[NodeId]) -> Result<SpreadEstimate> {
        estimate_spread(self.g, self.model, set, self.horizon, self.n_sims, self.master_seed)
    }
}

impl CoverageOracle for MonteCarloOracle<'_> {
    fn ground_set_size(&self) -> usize {
        self.g.node_count()
    }

    fn eval(&self, set: &[NodeId]) -> f64 {
        self.estimate(set).expect("oracle inputs validated at construction").mean
    }

    fn is_exact(&self) -> bool {
        self.g.is_deterministic()
    }
}

/// Exact spread oracle for small graphs.
///
/// When the table fits in memory it stores, per world and node, the bitset of nodes reachable
/// within the horizon; a query is then an OR over the seeds per world.
#[derive(Clone, Debug)]
pub struct ExactSpreadOracle<'g> {
    g: &'g DirectedGraph,
    model: Model,
    horizon: Horizon,
    caps: ExactCaps,
    table: Option<ReachTable>,
}

#[derive(Clone, Debug)]
struct ReachTable {
    words: usize,
    probs: Vec<f64>,
    // world-major, then node, then `words` u64s
    bits: Vec<u64>,
}

const MAX_TABLE_WORDS: usize = 1 << 23;

impl<'g> ExactSpreadOracle<'g> {
    pub fn new(g: &'g DirectedGraph, model: Model, horizon: Horizon, caps: ExactCaps) -> Result<Self> {
        let worlds = LiveEdgeWorlds::new(g, model, caps)?;
        let n = g.node_count();
        let words = n.div_ceil(64).max(1);
        let table = (worlds.count().saturating_mul(n).saturating_mul(words) <= MAX_TABLE_WORDS).then(|| {
            let mut probs = Vec::with_capacity(worlds.count());
            let mut bits = Vec::with_capacity(worlds.count() * n * words);
            let mut dist = vec![u32::MAX; n];
            let mut queue = Vec::new();
            worlds.for_each(|p, live| {
                probs.push(p);
                for v in g.nodes() {
                    live_reach(g, live, &[v], horizon, &mut dist, &mut queue);
                    let start = bits.len();
                    bits.resize(start + words, 0);
                    for u in &queue {
                        bits[start + u.index() / 64] |= 1 << (u.index() % 64);
                    }
                }
            });
            ReachTable { words, probs, bits }
        });
        Ok(ExactSpreadOracle { g, model, horizon, caps, table })
    }

    /// Exact value as a `Result` (the trait method panics on out-of-range nodes).
    pub fn value(&self, set: &[NodeId]) -> Result<f64> {
        crate::propagation::check_seeds(self.g, set)?;
        let Some(t) = &self.table else {
            return exact_spread(self.g, self.model, set, self.horizon, self.caps);
        };
        if set.is_empty() {
            return Ok(0.0);
        }
        let n = self.g.node_count();
        let mut acc = vec![0u64; t.words];
        let mut mass = ReachMass::new(n);
        for (w, &p) in t.probs.iter().enumerate() {
            acc.iter_mut().for_each(|x| *x = 0);
            for v in set {
                let row = &t.bits[(w * n + v.index()) * t.words..][..t.words];
                for (a, r) in acc.iter_mut().zip(row) {
                    *a |= r;
                }
            }
            mass.add(p, |u| acc[u / 64] >> (u % 64) & 1 == 1);
        }
        Ok(mass.total())
    }
}

impl CoverageOracle for ExactSpreadOracle<'_> {
    fn ground_set_size(&self) -> usize {
        self.g.node_count()
    }

    fn eval(&self, set: &[NodeId]) -> f64 {
        self.value(set).expect("seed outside the graph")
    }
}

/// Oracle backed by a closure.
pub struct FnOracle<F> {
    n: usize,
    exact: bool,
    f: F,
}

impl<F: Fn(&[NodeId]) -> f64 + Sync> FnOracle<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnOracle { n, exact: true, f }
    }

    pub fn estimated(n: usize, f: F) -> Self {
        FnOracle { n, exact: false, f }
    }
}

impl<F: Fn(&[NodeId]) -> f64 + Sync> CoverageOracle for FnOracle<F> {
    fn ground_set_size(&self) -> usize {
        self.n
    }
    fn eval(&self, set: &[NodeId]) -> f64 {
        (self.f)(set)
    }
    fn is_exact(&self) -> bool {
        self.exact
    }
}

/// Weighted set coverage: element `i` covers the universe items `covers[i]`; the value of a set
/// is the total weight of the items it covers.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCoverage {
    weights: Vec<f64>,
    covers: Vec<Vec<usize>>,
}

impl WeightedCoverage {
    pub fn new(weights: Vec<f64>, covers: Vec<Vec<usize>>) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::invalid("item weights must be finite and non-negative"));
        }
        if covers.iter().flatten().any(|&i| i >= weights.len()) {
            return Err(Error::invalid("covered item outside the universe"));
        }
        Ok(WeightedCoverage { weights, covers })
    }

    pub fn universe_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl CoverageOracle for WeightedCoverage {
    fn ground_set_size(&self) -> usize {
        self.covers.len()
    }

    fn eval(&self, set: &[NodeId]) -> f64 {
        let mut hit = vec![false; self.weights.len()];
        for v in set {
            for &i in &self.covers[v.index()] {
                hit[i] = true;
            }
        }
        // sum in item order so the value does not depend on the order of `set`
        hit.iter().zip(&self.weights).filter(|(h, _)| **h).map(|(_, w)| w).sum()
    }
}

/// Area covered by unions of intervals laid out in parallel columns.
///
/// Element `i` owns the segments `segments[i]`, each `(column, lo, hi)`; the value of a set is the
/// total length of the union of its segments, column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalCover {
    segments: Vec<Vec<(usize, f64, f64)>>,
}

impl IntervalCover {
    pub fn new(segments: Vec<Vec<(usize, f64, f64)>>) -> Result<Self> {
        if segments.iter().flatten().any(|&(_, lo, hi)| !(lo <= hi && lo.is_finite() && hi.is_finite())) {
            return Err(Error::invalid("segment with lo > hi"));
        }
        Ok(IntervalCover { segments })
    }
}

impl CoverageOracle for IntervalCover {
    fn ground_set_size(&self) -> usize {
        self.segments.len()
    }

    fn eval(&self, set: &[NodeId]) -> f64 {
        let mut segs: Vec<(usize, f64, f64)> =
            set.iter().flat_map(|v| self.segments[v.index()].iter().copied()).collect();
        segs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        let mut total = 0.0;
        let mut cur: Option<(usize, f64, f64)> = None;
        for (c, lo, hi) in segs {
            match cur {
                Some((cc, clo, chi)) if cc == c && lo <= chi => cur = Some((cc, clo, chi.max(hi))),
                _ => {
                    if let Some((_, clo, chi)) = cur {
                        total += chi - clo;
                    }
                    cur = Some((c, lo, hi));
                }
            }
        }
        if let Some((_, clo, chi)) = cur {
            total += chi - clo;
        }
        total
    }
}

/// Ground set on which greedy cover is arbitrarily worse than optimal.
///
/// Elements: `w1 = 0`, `w2 = 1`, `v_i = i + 1` for `i = 1..=l`. Two unit-height columns; `w1`
/// covers `[0, 1 - 2^-(l+1))` of the first column and `w2` the same span of the second; `v_i`
/// covers `[1 - 2^-(i-1), 1 - 2^-i)` of both. Hence `f(v_i) = 2^-(i-1)`,
/// `f({v_1..v_l}) = 2 - 2^-(l-1)` and `f({w1, w2}) = f(X) = 2 - 2^-l`.
pub fn wolsey_instance(l: u32) -> Result<IntervalCover> {
    if l == 0 || l > 60 {
        return Err(Error::invalid(format!("wolsey instance needs 1 <= l <= 60, got {l}")));
    }
    let half = |k: u32| 0.5f64.powi(k as i32);
    let top = 1.0 - half(l + 1);
    let mut segments = vec![vec![(0, 0.0, top)], vec![(1, 0.0, top)]];
    for i in 1..=l {
        let (lo, hi) = (1.0 - half(i - 1), 1.0 - half(i));
        segments.push(vec![(0, lo, hi), (1, lo, hi)]);
    }
    IntervalCover::new(segments)
}

/// Wraps an oracle so every value is shrunk by a pseudo-random factor in `(1 - δ, 1]`.
///
/// The factor is a pure function of `(rng_seed, S)`, so repeated queries agree.
#[derive(Clone, Debug)]
pub struct NoisyOracle<O> {
    base: O,
    delta: f64,
    seed: u64,
}

pub fn noisy_oracle<O: CoverageOracle>(base: O, delta: f64, rng_seed: u64) -> Result<NoisyOracle<O>> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta {delta} outside [0, 1)")));
    }
    Ok(NoisyOracle { base, delta, seed: rng_seed })
}

impl<O: CoverageOracle> NoisyOracle<O> {
    pub fn base(&self) -> &O {
        &self.base
    }
}

impl<O: CoverageOracle> CoverageOracle for NoisyOracle<O> {
    fn ground_set_size(&self) -> usize {
        self.base.ground_set_size()
    }

    fn eval(&self, set: &[NodeId]) -> f64 {
        let u = (splitmix64(derive_seed(self.seed, set_hash(set))) >> 11) as f64 / (1u64 << 53) as f64;
        self.base.eval(set) * (1.0 - self.delta * u)
    }

    fn is_exact(&self) -> bool {
        self.delta == 0.0 && self.base.is_exact()
    }

    fn relative_error_bound(&self) -> Option<f64> {
        Some(self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn wolsey_closed_forms() {
        let f = wolsey_instance(3).unwrap();
        assert_eq!(f.ground_set_size(), 5);
        assert_eq!(f.eval(&ids(&[2, 3, 4])), 1.75);
        assert_eq!(f.eval(&ids(&[0, 1])), 1.875);
        assert_eq!(f.eval(&[]), 0.0);
        assert_eq!(f.eval(&ids(&[0])), 1.0 - 1.0 / 16.0);
        assert_eq!(f.eval(&ids(&[2])), 1.0);
        assert_eq!(f.eval(&ids(&[4])), 0.25);
        assert_eq!(f.eval(&ids(&[0, 1, 2, 3, 4])), 1.875);
        for l in 1..=8 {
            let f = wolsey_instance(l).unwrap();
            let vs: Vec<NodeId> = (2..l + 2).map(NodeId).collect();
            assert_eq!(f.eval(&vs), 2.0 - 0.5f64.powi(l as i32 - 1));
            assert_eq!(f.eval(&ids(&[0, 1])), 2.0 - 0.5f64.powi(l as i32));
        }
        assert!(wolsey_instance(0).is_err());
    }

    #[test]
    fn noisy_bounds_and_consistency() {
        let base = wolsey_instance(4).unwrap();
        let same = noisy_oracle(&base, 0.0, 1).unwrap();
        let noisy = noisy_oracle(&base, 0.2, 1).unwrap();
        for mask in 0u32..64 {
            let s: Vec<NodeId> = (0..6).filter(|i| mask >> i & 1 == 1).map(NodeId).collect();
            let f = base.eval(&s);
            assert_eq!(same.eval(&s), f);
            let x = noisy.eval(&s);
            assert!(x <= f && x >= 0.8 * f);
            let mut rev = s.clone();
            rev.reverse();
            assert_eq!(noisy.eval(&rev), x);
        }
        assert!(noisy_oracle(&base, 1.0, 0).is_err());
        assert_eq!(noisy.relative_error_bound(), Some(0.2));
        assert!(!noisy.is_exact());
    }

    #[test]
    fn weighted_coverage_values() {
        let f = WeightedCoverage::new(vec![1.0, 2.0, 4.0], vec![vec![0, 1], vec![1, 2], vec![]]).unwrap();
        assert_eq!(f.eval(&ids(&[0])), 3.0);
        assert_eq!(f.eval(&ids(&[0, 1])), 7.0);
        assert_eq!(f.eval(&ids(&[2])), 0.0);
        assert!(WeightedCoverage::new(vec![1.0], vec![vec![3]]).is_err());
    }

    #[test]
    fn exact_table_matches_direct_enumeration() {
        let g = DirectedGraph::from_arcs(5, [(0, 1, 0.5), (1, 2, 0.3), (0, 3, 0.9), (3, 2, 0.2), (2, 4, 0.6)])
            .unwrap();
        for horizon in [Horizon::Steps(0), Horizon::Steps(1), Horizon::Steps(2), Horizon::Unbounded] {
            let o = ExactSpreadOracle::new(&g, Model::Ic, horizon, ExactCaps::default()).unwrap();
            for mask in 0u32..32 {
                let s: Vec<NodeId> = (0..5).filter(|i| mask >> i & 1 == 1).map(NodeId).collect();
                let direct = exact_spread(&g, Model::Ic, &s, horizon, ExactCaps::default()).unwrap();
                assert_eq!(o.eval(&s), direct);
            }
        }
    }

    #[test]
    fn monte_carlo_oracle_is_repeatable() {
        let g = DirectedGraph::from_arcs(3, [(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let o = MonteCarloOracle::new(&g, Model::Ic, Horizon::Unbounded, 500, 3).unwrap();
        let a = o.eval(&ids(&[0, 2]));
        assert_eq!(a, o.eval(&ids(&[2, 0])));
        assert_eq!(o.eval(&[]), 0.0);
        assert!(!o.is_exact());
        assert!(MonteCarloOracle::new(&g, Model::Ic, Horizon::Unbounded, 0, 3).is_err());
    }
}
