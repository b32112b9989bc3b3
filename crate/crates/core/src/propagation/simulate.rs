use super::{check_model, check_seeds, Horizon, Model};
use crate::error::Result;
use crate::graph::{DirectedGraph, NodeId};
use crate::rng::unit;

/// Activation step per node; seeds are at step 0, `None` means never activated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeTrace {
    pub activation_time: Vec<Option<u32>>,
}

impl CascadeTrace {
    pub fn activated_count(&self) -> usize {
        self.activation_time.iter().filter(|t| t.is_some()).count()
    }

    pub fn active_within(&self, r: u32) -> usize {
        self.activation_time.iter().filter(|t| matches!(t, Some(s) if *s <= r)).count()
    }
}

/// Reusable scratch space for running many cascades on one graph.
///
/// Per-node state is invalidated with a generation stamp instead of being cleared, so a run costs
/// time proportional to the cascade, not to the graph.
pub struct Simulator<'g> {
    g: &'g DirectedGraph,
    model: Model,
    stamp: u32,
    active: Vec<u32>,
    touched: Vec<u32>,
    threshold: Vec<f64>,
    weight: Vec<f64>,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
}

impl<'g> Simulator<'g> {
    /// The caller is responsible for having validated LT weights (see [`DirectedGraph::check_lt_weights`]).
    pub fn new(g: &'g DirectedGraph, model: Model) -> Self {
        let n = g.node_count();
        let lt = model == Model::Lt;
        Simulator {
            g,
            model,
            stamp: 0,
            active: vec![0; n],
            touched: if lt { vec![0; n] } else { Vec::new() },
            threshold: if lt { vec![0.0; n] } else { Vec::new() },
            weight: if lt { vec![0.0; n] } else { Vec::new() },
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.active.fill(0);
            self.touched.fill(0);
            self.stamp = 1;
        }
    }

    /// Runs one cascade and calls `on_step(step, newly_active)` for every non-empty step,
    /// starting with the seeds at step 0. Returns the number of active nodes at the end.
    ///
    /// Every draw is keyed by `sim_seed` and the arc (IC coin) or node (LT threshold) it belongs
    /// to, never by the order of use. So a bounded run is an exact prefix of the unbounded run, and
    /// runs from different seed sets with the same `sim_seed` see the same live-edge world.
    pub fn run(
        &mut self,
        seeds: &[NodeId],
        horizon: Horizon,
        sim_seed: u64,
        mut on_step: impl FnMut(u32, &[NodeId]),
    ) -> usize {
        self.bump();
        let cur = self.stamp;
        self.frontier.clear();
        for &s in seeds {
            if self.active[s.index()] != cur {
                self.active[s.index()] = cur;
                self.frontier.push(s);
            }
        }
        self.frontier.sort_unstable();
        let mut total = self.frontier.len();
        if total > 0 {
            on_step(0, &self.frontier);
        }

        let g = self.g;
        let mut step = 0u32;
        while !self.frontier.is_empty() && horizon.allows(step + 1) {
            self.next.clear();
            match self.model {
                Model::Ic => {
                    for &v in &self.frontier {
                        for a in g.out_range(v) {
                            let u = g.arc_head(a);
                            if self.active[u.index()] == cur {
                                continue;
                            }
                            let p = g.arc_prob(a);
                            let hit = p >= 1.0 || (p > 0.0 && unit(sim_seed, a as u64) < p);
                            if hit {
                                self.active[u.index()] = cur;
                                self.next.push(u);
                            }
                        }
                    }
                }
                Model::Lt => {
                    for &v in &self.frontier {
                        let (heads, weights) = g.out_arcs(v);
                        for (&u, &b) in heads.iter().zip(weights) {
                            let ui = u.index();
                            if self.active[ui] == cur {
                                continue;
                            }
                            if self.touched[ui] != cur {
                                self.touched[ui] = cur;
                                self.threshold[ui] = unit(sim_seed, ui as u64);
                                self.weight[ui] = 0.0;
                            }
                            self.weight[ui] += b;
                            if self.weight[ui] > 0.0 && self.weight[ui] >= self.threshold[ui] {
                                self.active[ui] = cur;
                                self.next.push(u);
                            }
                        }
                    }
                }
            }
            step += 1;
            self.next.sort_unstable();
            std::mem::swap(&mut self.frontier, &mut self.next);
            if !self.frontier.is_empty() {
                total += self.frontier.len();
                on_step(step, &self.frontier);
            }
        }
        total
    }

    /// Number of nodes active at the end of one cascade.
    pub fn count(&mut self, seeds: &[NodeId], horizon: Horizon, sim_seed: u64) -> usize {
        self.run(seeds, horizon, sim_seed, |_, _| {})
    }
}

/// One cascade from `seeds` with every draw keyed by `rng_seed`.
pub fn simulate_once(
    g: &DirectedGraph,
    model: Model,
    seeds: &[NodeId],
    horizon: Horizon,
    rng_seed: u64,
) -> Result<CascadeTrace> {
    check_seeds(g, seeds)?;
    check_model(g, model)?;
    let mut activation_time = vec![None; g.node_count()];
    let mut sim = Simulator::new(g, model);
    sim.run(seeds, horizon, rng_seed, |step, nodes| {
        for v in nodes {
            activation_time[v.index()] = Some(step);
        }
    });
    Ok(CascadeTrace { activation_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn path(p: f64) -> DirectedGraph {
        DirectedGraph::from_arcs(3, [(0, 1, p), (1, 2, p)]).unwrap()
    }

    #[test]
    fn deterministic_path_respects_horizon() {
        let g = path(1.0);
        let t = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Steps(1), 3).unwrap();
        assert_eq!(t.activation_time, vec![Some(0), Some(1), None]);
        let t = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Unbounded, 3).unwrap();
        assert_eq!(t.activation_time, vec![Some(0), Some(1), Some(2)]);
        let t = simulate_once(&g, Model::Lt, &[NodeId(0)], Horizon::Steps(0), 3).unwrap();
        assert_eq!(t.activation_time, vec![Some(0), None, None]);
    }

    #[test]
    fn zero_probability_keeps_only_seeds() {
        let g = DirectedGraph::from_arcs(4, [(0, 1, 0.0), (1, 2, 0.0), (0, 3, 0.0), (3, 2, 0.0)]).unwrap();
        for model in [Model::Ic, Model::Lt] {
            for seed in 0..20 {
                let t = simulate_once(&g, model, &[NodeId(0), NodeId(3)], Horizon::Unbounded, seed).unwrap();
                assert_eq!(t.activated_count(), 2);
            }
        }
    }

    #[test]
    fn same_seed_same_trace() {
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.5)]).unwrap();
        for s in 0..10 {
            let a = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Unbounded, s).unwrap();
            let b = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Unbounded, s).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn activated_nodes_have_parent_one_step_earlier() {
        let g = crate::generate::generate_synthetic(
            &crate::generate::SyntheticSpec::new(crate::generate::GeneratorKind::ErdosRenyi { p_edge: 0.1 }, 40, 2)
                .with_prob(0.4),
        )
        .unwrap();
        for s in 0..30 {
            let t = simulate_once(&g, Model::Ic, &[NodeId(0), NodeId(5)], Horizon::Unbounded, s).unwrap();
            for u in g.nodes() {
                match t.activation_time[u.index()] {
                    Some(0) => assert!(u == NodeId(0) || u == NodeId(5)),
                    Some(k) => assert!(g
                        .in_arcs(u)
                        .any(|(v, _)| t.activation_time[v.index()] == Some(k - 1))),
                    None => {}
                }
            }
        }
    }

    #[test]
    fn bounded_run_is_prefix_of_unbounded() {
        let g = crate::generate::generate_synthetic(
            &crate::generate::SyntheticSpec::new(crate::generate::GeneratorKind::PowerLaw { m: 2 }, 60, 4)
                .with_prob(0.3),
        )
        .unwrap();
        for s in 0..20 {
            let full = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Unbounded, s).unwrap();
            for r in 0..4 {
                let part = simulate_once(&g, Model::Ic, &[NodeId(0)], Horizon::Steps(r), s).unwrap();
                assert_eq!(part.activated_count(), full.active_within(r));
            }
        }
    }

    #[test]
    fn errors() {
        let g = path(0.5);
        assert!(matches!(
            simulate_once(&g, Model::Ic, &[NodeId(7)], Horizon::Unbounded, 0),
            Err(Error::UnknownNode(_))
        ));
        let heavy = DirectedGraph::from_arcs(3, [(0, 2, 0.7), (1, 2, 0.7)]).unwrap();
        assert!(matches!(
            simulate_once(&heavy, Model::Lt, &[NodeId(0)], Horizon::Unbounded, 0),
            Err(Error::LtWeightsExceeded { .. })
        ));
    }
}
