//! Exact expected spread by enumerating live-edge worlds.
//!
//! Under IC each arc is independently live with its probability. Under LT each node keeps at most
//! one incoming arc, arc `(v, u)` with probability `b_{v,u}` and none with the remaining mass. In
//! both cases the nodes active within `R` steps are exactly those within `R` live hops of a seed.

use super::{check_model, check_seeds, Horizon, Model};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCaps {
    /// IC: maximum number of arcs with probability strictly between 0 and 1.
    pub ic_arcs: usize,
    /// LT: maximum number of nodes whose incoming choice is random.
    pub lt_nodes: usize,
    /// Upper bound on the number of worlds, whichever model.
    pub worlds: usize,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps { ic_arcs: 20, lt_nodes: 12, worlds: 1 << 24 }
    }
}

#[derive(Clone, Debug)]
enum Worlds {
    /// `uncertain[j]` is the arc index of the j-th random arc; `base` holds the arcs with p = 1.
    Ic { uncertain: Vec<usize>, base: Vec<bool> },
    /// Per random node, the options `(arc index or none, probability)`; `base` holds forced arcs.
    Lt { choices: Vec<Vec<(Option<usize>, f64)>>, base: Vec<bool> },
}

/// Enumerator over the live-edge worlds of a graph.
#[derive(Clone, Debug)]
pub struct LiveEdgeWorlds<'g> {
    g: &'g DirectedGraph,
    worlds: Worlds,
    count: usize,
}

impl<'g> LiveEdgeWorlds<'g> {
    pub fn new(g: &'g DirectedGraph, model: Model, caps: ExactCaps) -> Result<Self> {
        check_model(g, model)?;
        let m = g.arc_count();
        let (worlds, count) = match model {
            Model::Ic => {
                let mut base = vec![false; m];
                let mut uncertain = Vec::new();
                for (i, &p) in g.probs().iter().enumerate() {
                    if p >= 1.0 {
                        base[i] = true;
                    } else if p > 0.0 {
                        uncertain.push(i);
                    }
                }
                if uncertain.len() > caps.ic_arcs {
                    return Err(Error::EnumerationCapExceeded {
                        what: "random IC arcs",
                        size: uncertain.len(),
                        cap: caps.ic_arcs,
                    });
                }
                let count = 1usize << uncertain.len();
                (Worlds::Ic { uncertain, base }, count)
            }
            Model::Lt => {
                let mut base = vec![false; m];
                let mut choices = Vec::new();
                for u in g.nodes() {
                    let mut opts: Vec<(Option<usize>, f64)> = g
                        .in_arcs(u)
                        .map(|(_, a)| (Some(a), g.arc_prob(a)))
                        .filter(|&(_, b)| b > 0.0)
                        .collect();
                    let rest = 1.0 - opts.iter().map(|o| o.1).sum::<f64>();
                    if rest > 1e-12 {
                        opts.push((None, rest));
                    }
                    match opts.as_slice() {
                        [] | [(None, _)] => {}
                        [(Some(a), _)] => base[*a] = true,
                        _ => choices.push(opts),
                    }
                }
                if choices.len() > caps.lt_nodes {
                    return Err(Error::EnumerationCapExceeded {
                        what: "random LT nodes",
                        size: choices.len(),
                        cap: caps.lt_nodes,
                    });
                }
                let count = choices
                    .iter()
                    .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
                    .unwrap_or(usize::MAX);
                (Worlds::Lt { choices, base }, count)
            }
        };
        if count > caps.worlds {
            return Err(Error::EnumerationCapExceeded { what: "live-edge worlds", size: count, cap: caps.worlds });
        }
        Ok(LiveEdgeWorlds { g, worlds, count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Calls `f(probability, live)` for every world with nonzero probability, in a fixed order.
    /// `live[a]` tells whether arc `a` is live.
    pub fn for_each(&self, mut f: impl FnMut(f64, &[bool])) {
        match &self.worlds {
            Worlds::Ic { uncertain, base } => {
                let mut live = base.clone();
                for mask in 0..self.count {
                    let mut prob = 1.0;
                    for (j, &a) in uncertain.iter().enumerate() {
                        let p = self.g.arc_prob(a);
                        let on = mask >> j & 1 == 1;
                        live[a] = on;
                        prob *= if on { p } else { 1.0 - p };
                    }
                    f(prob, &live);
                }
            }
            Worlds::Lt { choices, base } => {
                let mut live = base.clone();
                let mut digit = vec![0usize; choices.len()];
                for _ in 0..self.count {
                    let mut prob = 1.0;
                    for (c, &d) in choices.iter().zip(&digit) {
                        for (k, &(arc, b)) in c.iter().enumerate() {
                            if let Some(a) = arc {
                                live[a] = k == d;
                            }
                            if k == d {
                                prob *= b;
                            }
                        }
                    }
                    f(prob, &live);
                    for (d, c) in digit.iter_mut().zip(choices) {
                        *d += 1;
                        if *d < c.len() {
                            break;
                        }
                        *d = 0;
                    }
                }
            }
        }
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.g
    }
}

/// Breadth-first reach over live arcs, at most `horizon` hops. Uses `dist` as scratch
/// (`u32::MAX` = unvisited) and leaves the visited nodes in `queue`.
pub(crate) fn live_reach(
    g: &DirectedGraph,
    live: &[bool],
    sources: &[NodeId],
    horizon: Horizon,
    dist: &mut [u32],
    queue: &mut Vec<NodeId>,
) {
    for &v in queue.iter() {
        dist[v.index()] = u32::MAX;
    }
    queue.clear();
    for &s in sources {
        if dist[s.index()] == u32::MAX {
            dist[s.index()] = 0;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let d = dist[v.index()];
        if !horizon.allows(d + 1) {
            continue;
        }
        for a in g.out_range(v) {
            let u = g.arc_head(a);
            if live[a] && dist[u.index()] == u32::MAX {
                dist[u.index()] = d + 1;
                queue.push(u);
            }
        }
    }
}

/// Expected number of nodes active within `horizon`, summed over all live-edge worlds.
pub fn exact_spread(
    g: &DirectedGraph,
    model: Model,
    seeds: &[NodeId],
    horizon: Horizon,
    caps: ExactCaps,
) -> Result<f64> {
    check_seeds(g, seeds)?;
    let worlds = LiveEdgeWorlds::new(g, model, caps)?;
    if seeds.is_empty() {
        return Ok(0.0);
    }
    let mut dist = vec![u32::MAX; g.node_count()];
    let mut queue = Vec::new();
    let mut mass = ReachMass::new(g.node_count());
    worlds.for_each(|prob, live| {
        live_reach(g, live, seeds, horizon, &mut dist, &mut queue);
        mass.add(prob, |u| dist[u] != u32::MAX);
    });
    Ok(mass.total())
}

/// Per-node probability mass of the worlds that reach it and of those that miss it.
///
/// Summing `p * count` over worlds leaves rounding residue even when the count is the same in
/// every world; taking the smaller side per node makes certain outcomes come out exact.
pub(crate) struct ReachMass {
    hit: Vec<f64>,
    miss: Vec<f64>,
}

impl ReachMass {
    pub(crate) fn new(n: usize) -> Self {
        ReachMass { hit: vec![0.0; n], miss: vec![0.0; n] }
    }

    pub(crate) fn add(&mut self, prob: f64, reached: impl Fn(usize) -> bool) {
        for (u, (h, m)) in self.hit.iter_mut().zip(&mut self.miss).enumerate() {
            if reached(u) {
                *h += prob;
            } else {
                *m += prob;
            }
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.hit.iter().zip(&self.miss).map(|(&h, &m)| if m < h { 1.0 - m } else { h }).sum()
    }
}
