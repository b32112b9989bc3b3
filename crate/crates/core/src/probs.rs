//! Arc probability assignment schemes.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::io::PropagationLog;

/// Every arc gets probability `p`.
pub fn assign_uniform(g: &DirectedGraph, p: f64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("uniform probability {p} outside [0, 1]")));
    }
    g.map_probs(|_, _| p)
}

/// Weighted cascade: arc `(v, u)` gets `1 / in_degree(u)`.
pub fn assign_weighted_cascade(g: &DirectedGraph) -> Result<DirectedGraph> {
    g.map_probs(|_, a| 1.0 / g.in_degree(a.head) as f64)
}

/// Maximum-likelihood probabilities from a repost log.
///
/// For arc `(v, u)` the estimate is the number of items `u` reposted from `v` divided by the
/// number of items `v` posted (every item `v` posted counts as one exposure of `u`). Arcs whose
/// tail never posted get probability 0.
pub fn estimate_probs_mle(g: &DirectedGraph, log: &PropagationLog) -> Result<DirectedGraph> {
    let n = g.node_count();
    for r in &log.records {
        for v in [r.reposter, r.source] {
            if v.index() >= n {
                return Err(Error::UnknownNode(v.to_string()));
            }
        }
    }

    // (item, node) -> time of that node's own post of the item
    let mut post_time: HashMap<(&str, NodeId), i64> = HashMap::new();
    for r in &log.records {
        if let Some(prev) = post_time.insert((r.item.as_str(), r.reposter), r.time) {
            if prev != r.time {
                return Err(Error::InvalidLog(format!(
                    "node {} posts item {} twice",
                    g.label(r.reposter),
                    r.item
                )));
            }
        }
    }
    for r in &log.records {
        if r.reposter == r.source {
            continue;
        }
        if let Some(&t_src) = post_time.get(&(r.item.as_str(), r.source)) {
            if r.time <= t_src {
                return Err(Error::InvalidLog(format!(
                    "item {}: {} reposts at {} but source {} posted at {}",
                    r.item,
                    g.label(r.reposter),
                    r.time,
                    g.label(r.source),
                    t_src
                )));
            }
        }
    }

    let mut posted: Vec<HashSet<&str>> = vec![HashSet::new(); n];
    let mut reposts: HashMap<(NodeId, NodeId), HashSet<&str>> = HashMap::new();
    for r in &log.records {
        posted[r.reposter.index()].insert(&r.item);
        posted[r.source.index()].insert(&r.item);
        if r.reposter != r.source {
            reposts.entry((r.source, r.reposter)).or_default().insert(&r.item);
        }
    }

    g.map_probs(|_, a| {
        let exposures = posted[a.tail.index()].len();
        if exposures == 0 {
            return 0.0;
        }
        let hits = reposts.get(&(a.tail, a.head)).map_or(0, HashSet::len);
        hits as f64 / exposures as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::RepostRecord;

    fn rec(reposter: u32, source: u32, item: &str, time: i64) -> RepostRecord {
        RepostRecord { reposter: NodeId(reposter), source: NodeId(source), item: item.into(), time }
    }

    #[test]
    fn uniform_replaces_every_probability() {
        let g = DirectedGraph::from_arcs(3, [(0, 1, 0.3), (1, 2, 0.7)]).unwrap();
        let g = assign_uniform(&g, 0.1).unwrap();
        assert!(g.probs().iter().all(|&p| p == 0.1));
        assert!(assign_uniform(&g, -0.1).is_err());
        assert!(assign_uniform(&g, 1.1).is_err());
    }

    #[test]
    fn weighted_cascade_star_into_center() {
        let g = DirectedGraph::from_arcs(5, [(1, 0, 0.0), (2, 0, 0.0), (3, 0, 0.0), (4, 0, 0.0)]).unwrap();
        let g = assign_weighted_cascade(&g).unwrap();
        assert!(g.probs().iter().all(|&p| p == 0.25));

        let g = DirectedGraph::from_arcs(3, [(0, 2, 0.0), (1, 2, 0.0), (2, 0, 0.0)]).unwrap();
        let g = assign_weighted_cascade(&g).unwrap();
        let by_arc: Vec<_> = g.arcs().map(|a| (a.tail.0, a.head.0, a.prob)).collect();
        assert_eq!(by_arc, vec![(0, 2, 0.5), (1, 2, 0.5), (2, 0, 1.0)]);
    }

    #[test]
    fn mle_half_of_four_items() {
        // v = 0 posted items 1..4, u = 1 reposted 1 and 2 from v
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.0)]).unwrap();
        let mut records: Vec<_> = (1..=4).map(|i| rec(0, 0, &i.to_string(), i)).collect();
        records.push(rec(1, 0, "1", 10));
        records.push(rec(1, 0, "2", 11));
        let g = estimate_probs_mle(&g, &PropagationLog { records }).unwrap();
        assert_eq!(g.probs(), &[0.5]);
    }

    #[test]
    fn mle_every_item_reposted() {
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.0)]).unwrap();
        // source-only appearances count as posts too
        let records = vec![rec(1, 0, "a", 2), rec(1, 0, "b", 3), rec(1, 0, "c", 4)];
        let g = estimate_probs_mle(&g, &PropagationLog { records }).unwrap();
        assert_eq!(g.probs(), &[1.0]);
    }

    #[test]
    fn mle_empty_log_gives_zero() {
        let g = DirectedGraph::from_arcs(3, [(0, 1, 0.4), (1, 2, 0.9)]).unwrap();
        let g = estimate_probs_mle(&g, &PropagationLog::default()).unwrap();
        assert!(g.probs().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn mle_rejects_out_of_order_repost() {
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.0)]).unwrap();
        let records = vec![rec(0, 0, "a", 5), rec(1, 0, "a", 5)];
        assert!(matches!(estimate_probs_mle(&g, &PropagationLog { records }), Err(Error::InvalidLog(_))));
        let records = vec![rec(7, 0, "a", 5)];
        assert!(matches!(estimate_probs_mle(&g, &PropagationLog { records }), Err(Error::UnknownNode(_))));
    }
}
