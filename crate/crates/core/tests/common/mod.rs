#![allow(dead_code)]

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use seedopt::{DirectedGraph, Horizon, Model, NodeId};

pub type TestRng = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

/// `m` distinct random arcs on `n` nodes (fewer if the graph fills up).
pub fn random_pairs(rng: &mut TestRng, n: usize, m: usize) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(m);
    all
}

/// IC graph whose arcs are sure with probability `p_sure`, otherwise uniform in `[0.1, 0.9]`.
pub fn random_ic(rng: &mut TestRng, n: usize, m: usize, p_sure: f64) -> DirectedGraph {
    let arcs: Vec<(usize, usize, f64)> = random_pairs(rng, n, m)
        .into_iter()
        .map(|(u, v)| {
            let p = if rng.random_bool(p_sure) { 1.0 } else { rng.random_range(0.1..0.9) };
            (u, v, p)
        })
        .collect();
    DirectedGraph::from_arcs(n, arcs).unwrap()
}

/// IC graph with at most `max_random` arcs of probability strictly inside (0, 1).
pub fn random_ic_capped(rng: &mut TestRng, n: usize, m: usize, max_random: usize) -> DirectedGraph {
    let mut random_left = max_random;
    let arcs: Vec<(usize, usize, f64)> = random_pairs(rng, n, m)
        .into_iter()
        .map(|(u, v)| {
            let p = if random_left > 0 && rng.random_bool(0.7) {
                random_left -= 1;
                rng.random_range(0.1..0.9)
            } else {
                1.0
            };
            (u, v, p)
        })
        .collect();
    DirectedGraph::from_arcs(n, arcs).unwrap()
}

/// LT graph: each node's incoming weights sum to a random total in `[0.3, 1]`.
pub fn random_lt(rng: &mut TestRng, n: usize, m: usize) -> DirectedGraph {
    let pairs = random_pairs(rng, n, m);
    let mut raw: Vec<f64> = pairs.iter().map(|_| rng.random_range(0.1..1.0)).collect();
    for u in 0..n {
        let idx: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].1 == u).collect();
        let total: f64 = idx.iter().map(|&i| raw[i]).sum();
        let target = rng.random_range(0.3..1.0);
        for &i in &idx {
            raw[i] = raw[i] / total * target;
        }
    }
    DirectedGraph::from_arcs(n, pairs.iter().zip(&raw).map(|(&(u, v), &w)| (u, v, w))).unwrap()
}

pub fn random_subset(rng: &mut TestRng, n: usize) -> Vec<NodeId> {
    (0..n).filter(|_| rng.random_bool(0.4)).map(NodeId::from).collect()
}

fn reach_count(n: usize, live: &[(usize, usize)], seeds: &[NodeId], horizon: Horizon) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in live {
        adj[u].push(v);
    }
    let mut dist = vec![usize::MAX; n];
    let mut q = VecDeque::new();
    for s in seeds {
        if dist[s.index()] == usize::MAX {
            dist[s.index()] = 0;
            q.push_back(s.index());
        }
    }
    let limit = horizon.steps().map_or(usize::MAX, |r| r as usize);
    while let Some(u) = q.pop_front() {
        if dist[u] == limit {
            continue;
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist.iter().filter(|&&d| d != usize::MAX).count()
}

/// Expected spread by direct enumeration of live-edge worlds, over every arc (sure ones included).
pub fn naive_spread(g: &DirectedGraph, model: Model, seeds: &[NodeId], horizon: Horizon) -> f64 {
    let n = g.node_count();
    let arcs: Vec<(usize, usize, f64)> = g.arcs().map(|a| (a.tail.index(), a.head.index(), a.prob)).collect();
    match model {
        Model::Ic => {
            let mut total = 0.0;
            for mask in 0u64..(1u64 << arcs.len()) {
                let mut p = 1.0;
                let mut live = Vec::new();
                for (i, &(u, v, q)) in arcs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        p *= q;
                        live.push((u, v));
                    } else {
                        p *= 1.0 - q;
                    }
                }
                if p > 0.0 {
                    total += p * reach_count(n, &live, seeds, horizon) as f64;
                }
            }
            total
        }
        Model::Lt => {
            // per node: pick one incoming arc with its weight, or none with the rest
            let options: Vec<Vec<(Option<usize>, f64)>> = (0..n)
                .map(|u| {
                    let ins: Vec<(Option<usize>, f64)> =
                        arcs.iter().filter(|a| a.1 == u).map(|a| (Some(a.0), a.2)).collect();
                    let rest = 1.0 - ins.iter().map(|x| x.1).sum::<f64>();
                    let mut o = ins;
                    o.push((None, rest.max(0.0)));
                    o
                })
                .collect();
            let mut total = 0.0;
            let mut choice = vec![0usize; n];
            loop {
                let mut p = 1.0;
                let mut live = Vec::new();
                for u in 0..n {
                    let (tail, w) = options[u][choice[u]];
                    p *= w;
                    if let Some(t) = tail {
                        live.push((t, u));
                    }
                }
                if p > 0.0 {
                    total += p * reach_count(n, &live, seeds, horizon) as f64;
                }
                let mut i = 0;
                while i < n {
                    choice[i] += 1;
                    if choice[i] < options[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            total
        }
    }
}

/// Every subset of `0..n` as a sorted node list, indexed by bitmask.
pub fn all_subsets(n: usize) -> Vec<Vec<NodeId>> {
    (0u32..(1 << n)).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(NodeId::from).collect()).collect()
}
