//! Exhaustive optima for small instances, used to check the greedy guarantees.

use std::cmp::Ordering;

use super::mintime::MintimeResult;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::oracle::CoverageOracle;
use crate::propagation::{check_model, Model, SeedSet};

/// Largest ground set [`brute_force_mintss`] will enumerate.
pub const MINTSS_CAP: usize = 20;
/// Largest graph [`brute_force_mintime`] will enumerate.
pub const MINTIME_CAP: usize = 16;
const MAXINF_COMBINATIONS_CAP: u128 = 50_000_000;

/// Absolute slack when testing `f(S) >= η`, for values summed over many worlds.
pub const FEASIBILITY_TOL: f64 = 1e-9;

fn mask_nodes(mask: u32) -> Vec<NodeId> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(NodeId).collect()
}

/// Minimum-cost set with `f(S) >= η`; ties in cost go to the lexicographically smallest sorted
/// node list.
pub fn brute_force_mintss<O: CoverageOracle>(oracle: &O, eta: f64, costs: &[f64]) -> Result<SeedSet> {
    let n = oracle.ground_set_size();
    if n > MINTSS_CAP {
        return Err(Error::EnumerationCapExceeded { what: "ground set", size: n, cap: MINTSS_CAP });
    }
    if costs.len() != n {
        return Err(Error::invalid(format!("{} costs for a ground set of {n}", costs.len())));
    }
    if eta <= 0.0 {
        return Ok(SeedSet::new());
    }
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    for mask in 1u32..(1u32 << n) {
        let nodes = mask_nodes(mask);
        let cost: f64 = nodes.iter().map(|v| costs[v.index()]).sum();
        if let Some((bc, bn)) = &best {
            let tol = 1e-12 * bc.abs().max(1.0);
            let worse = cost > bc + tol || ((cost - bc).abs() <= tol && nodes.cmp(bn) != Ordering::Less);
            if worse {
                continue;
            }
        }
        if oracle.eval(&nodes) >= eta - FEASIBILITY_TOL {
            best = Some((cost, nodes));
        }
    }
    match best {
        Some((_, nodes)) => SeedSet::with_costs(nodes, costs),
        None => Err(Error::Infeasible(format!("no subset reaches eta = {eta}"))),
    }
}

/// Best set of exactly `k` elements and its value; ties go to the lexicographically smallest set.
pub fn brute_force_maxinf<O: CoverageOracle>(oracle: &O, k: usize) -> Result<(SeedSet, f64)> {
    let n = oracle.ground_set_size();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("budget k = {k} outside [1, {n}]")));
    }
    let combos = (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1));
    if combos > MAXINF_COMBINATIONS_CAP {
        return Err(Error::EnumerationCapExceeded {
            what: "k-subsets",
            size: combos.min(usize::MAX as u128) as usize,
            cap: MAXINF_COMBINATIONS_CAP as usize,
        });
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    loop {
        let nodes: Vec<NodeId> = idx.iter().map(|&i| NodeId::from(i)).collect();
        let v = oracle.eval(&nodes);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, nodes));
        }
        // next combination in lexicographic order
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { break };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    let (v, nodes) = best.expect("at least one combination");
    Ok((SeedSet::from_nodes(nodes)?, v))
}

/// Exact MINTIME on a deterministic graph: the smallest `R` such that some set of at most `k`
/// nodes reaches at least `η` nodes (itself included) within `R` hops over probability-1 arcs.
///
/// Among optimal sets the smallest, then lexicographically first, is returned.
pub fn brute_force_mintime(g: &DirectedGraph, model: Model, k: usize, eta: f64) -> Result<MintimeResult> {
    let n = g.node_count();
    if n > MINTIME_CAP {
        return Err(Error::EnumerationCapExceeded { what: "nodes", size: n, cap: MINTIME_CAP });
    }
    if !g.is_deterministic() {
        return Err(Error::invalid("brute-force MINTIME needs all arc probabilities in {0, 1}"));
    }
    check_model(g, model)?;
    if k == 0 {
        return Err(Error::invalid("budget k must be at least 1"));
    }
    let k = k.min(n);
    let budget = k;
    if eta <= 0.0 {
        return Ok(MintimeResult { seeds: SeedSet::new(), time: Some(0), achieved_coverage: 0.0, budget });
    }

    // hop distance over live arcs
    let mut dist = vec![vec![u32::MAX; n]; n];
    for s in g.nodes() {
        let d = &mut dist[s.index()];
        d[s.index()] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let (heads, probs) = g.out_arcs(v);
            for (&u, &p) in heads.iter().zip(probs) {
                if p == 1.0 && d[u.index()] == u32::MAX {
                    d[u.index()] = d[v.index()] + 1;
                    queue.push_back(u);
                }
            }
        }
    }

    let mut subsets: Vec<u32> = (1u32..(1u32 << n)).filter(|m| m.count_ones() as usize <= k).collect();
    subsets.sort_by_key(|&m| (m.count_ones(), mask_nodes(m)));

    for r in 0..n as u32 {
        let reach: Vec<u32> = (0..n)
            .map(|s| (0..n).filter(|&u| dist[s][u] <= r).fold(0u32, |acc, u| acc | 1 << u))
            .collect();
        for &m in &subsets {
            let covered = (0..n).filter(|&s| m >> s & 1 == 1).fold(0u32, |acc, s| acc | reach[s]);
            let c = covered.count_ones() as f64;
            if c >= eta - FEASIBILITY_TOL {
                return Ok(MintimeResult {
                    seeds: SeedSet::from_nodes(mask_nodes(m))?,
                    time: Some(r),
                    achieved_coverage: c,
                    budget,
                });
            }
        }
    }
    Err(Error::Infeasible(format!("no set of {k} seeds reaches eta = {eta}")))
}
