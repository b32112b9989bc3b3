//! Immutable directed graph with per-arc influence probabilities and per-node costs.
//!
//! Arcs are stored twice in compressed sparse row form: once grouped by tail (out-arcs, sorted by
//! head) for cascades, and once grouped by head (in-arcs, sorted by tail) for the linear
//! threshold model and the probability schemes that depend on in-degree.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense node index in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single arc `tail -> head` with its influence probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    cost: Vec<f64>,
    // out-arcs, grouped by tail, heads ascending
    out_offsets: Vec<usize>,
    out_heads: Vec<NodeId>,
    out_probs: Vec<f64>,
    // in-arcs, grouped by head, tails ascending; `in_arc` maps back into the out arrays
    in_offsets: Vec<usize>,
    in_tails: Vec<NodeId>,
    in_arc: Vec<usize>,
}

impl DirectedGraph {
    /// Builds a graph with labels `"0".."n-1"` and unit costs.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut b = GraphBuilder::with_nodes(n);
        for (u, v, p) in arcs {
            b.add_arc(NodeId::from(u), NodeId::from(v), p)?;
        }
        Ok(b.build())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.out_heads.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    #[inline]
    pub fn out_range(&self, v: NodeId) -> std::ops::Range<usize> {
        self.out_offsets[v.index()]..self.out_offsets[v.index() + 1]
    }

    /// Heads and probabilities of the out-arcs of `v`, heads ascending.
    #[inline]
    pub fn out_arcs(&self, v: NodeId) -> (&[NodeId], &[f64]) {
        let r = self.out_range(v);
        (&self.out_heads[r.clone()], &self.out_probs[r])
    }

    /// Iterates `(tail, arc index)` over the in-arcs of `u`, tails ascending.
    pub fn in_arcs(&self, u: NodeId) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        let r = self.in_offsets[u.index()]..self.in_offsets[u.index() + 1];
        self.in_tails[r.clone()].iter().copied().zip(self.in_arc[r].iter().copied())
    }

    #[inline]
    pub fn arc_head(&self, arc: usize) -> NodeId {
        self.out_heads[arc]
    }

    #[inline]
    pub fn arc_prob(&self, arc: usize) -> f64 {
        self.out_probs[arc]
    }

    /// All arcs in `(tail, head)` order. The position in this iteration is the arc index.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.nodes().flat_map(move |v| {
            let (heads, probs) = self.out_arcs(v);
            heads.iter().zip(probs).map(move |(&head, &prob)| Arc { tail: v, head, prob })
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.out_probs
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_range(v).len()
    }

    #[inline]
    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_offsets[u.index() + 1] - self.in_offsets[u.index()]
    }

    pub fn costs(&self) -> &[f64] {
        &self.cost
    }

    pub fn cost(&self, v: NodeId) -> f64 {
        self.cost[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    /// Reverse lookup from an original label to the dense id.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        // graphs are small enough that a linear scan beats keeping a second map in sync
        self.labels.iter().position(|l| l == label).map(NodeId::from)
    }

    pub fn label_map(&self) -> HashMap<&str, NodeId> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), NodeId::from(i))).collect()
    }

    /// True when every arc probability is exactly 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.out_probs.iter().all(|&p| p == 0.0 || p == 1.0)
    }

    /// Sum of incoming weights of `u`.
    pub fn in_weight(&self, u: NodeId) -> f64 {
        self.in_arcs(u).map(|(_, a)| self.out_probs[a]).sum()
    }

    /// Checks the linear threshold precondition: incoming weights of every node sum to at most 1.
    pub fn check_lt_weights(&self) -> Result<()> {
        for u in self.nodes() {
            let sum = self.in_weight(u);
            if sum > 1.0 + 1e-9 {
                return Err(Error::LtWeightsExceeded { node: u.0, sum });
            }
        }
        Ok(())
    }

    /// Same topology with probabilities produced by `f(arc index, arc)`.
    pub fn map_probs(&self, mut f: impl FnMut(usize, Arc) -> f64) -> Result<Self> {
        let probs: Vec<f64> = self.arcs().enumerate().map(|(i, a)| f(i, a)).collect();
        for (i, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { line: i + 1, value: p });
            }
        }
        Ok(DirectedGraph { out_probs: probs, ..self.clone() })
    }

    pub fn with_costs(&self, cost: Vec<f64>) -> Result<Self> {
        if cost.len() != self.node_count() {
            return Err(Error::invalid(format!(
                "cost vector has {} entries for {} nodes",
                cost.len(),
                self.node_count()
            )));
        }
        if let Some((i, c)) = cost.iter().enumerate().find(|(_, &c)| !(c > 0.0 && c.is_finite())) {
            return Err(Error::invalid(format!("cost of node {} must be positive, got {c}", self.labels[i])));
        }
        Ok(DirectedGraph { cost, ..self.clone() })
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::invalid("label count does not match node count"));
        }
        Ok(DirectedGraph { labels, ..self.clone() })
    }
}

/// Incremental construction with validation of the graph invariants.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    arcs: Vec<(NodeId, NodeId, f64)>,
    seen: std::collections::HashSet<(NodeId, NodeId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pre-creates nodes labelled `"0".."n-1"`.
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.node(&i.to_string());
        }
        b
    }

    /// Id for `label`, assigning the next dense id on first sight.
    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId::from(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, prob: f64) -> Result<()> {
        self.add_arc_at(0, tail, head, prob)
    }

    pub(crate) fn add_arc_at(&mut self, line: usize, tail: NodeId, head: NodeId, prob: f64) -> Result<()> {
        let n = self.labels.len();
        if tail.index() >= n || head.index() >= n {
            return Err(Error::UnknownNode(format!("{}", tail.max(head))));
        }
        if tail == head {
            return Err(Error::SelfLoop { line, node: self.labels[tail.index()].clone() });
        }
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::ProbabilityOutOfRange { line, value: prob });
        }
        if !self.seen.insert((tail, head)) {
            return Err(Error::DuplicateArc {
                line,
                src: self.labels[tail.index()].clone(),
                dst: self.labels[head.index()].clone(),
            });
        }
        self.arcs.push((tail, head, prob));
        Ok(())
    }

    pub fn contains_arc(&self, tail: NodeId, head: NodeId) -> bool {
        self.seen.contains(&(tail, head))
    }

    pub fn build(mut self) -> DirectedGraph {
        let n = self.labels.len();
        self.arcs.sort_by_key(|&(t, h, _)| (t, h));

        let mut out_offsets = vec![0usize; n + 1];
        for &(t, _, _) in &self.arcs {
            out_offsets[t.index() + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_heads: Vec<NodeId> = self.arcs.iter().map(|a| a.1).collect();
        let out_probs: Vec<f64> = self.arcs.iter().map(|a| a.2).collect();

        let mut in_offsets = vec![0usize; n + 1];
        for &(_, h, _) in &self.arcs {
            in_offsets[h.index() + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut fill = in_offsets.clone();
        let mut in_tails = vec![NodeId(0); self.arcs.len()];
        let mut in_arc = vec![0usize; self.arcs.len()];
        // arcs are sorted by tail, so each head's in-list comes out tail-ascending
        for (idx, &(t, h, _)) in self.arcs.iter().enumerate() {
            let slot = fill[h.index()];
            in_tails[slot] = t;
            in_arc[slot] = idx;
            fill[h.index()] += 1;
        }

        DirectedGraph {
            labels: self.labels,
            cost: vec![1.0; n],
            out_offsets,
            out_heads,
            out_probs,
            in_offsets,
            in_tails,
            in_arc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn in_degree_matches_arc_heads() {
        let g = DirectedGraph::from_arcs(4, [(0, 1, 0.5), (2, 1, 0.5), (3, 1, 0.1), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.in_degree(NodeId(1)), 3);
        assert_eq!(g.in_degree(NodeId(2)), 1);
        assert_eq!(g.in_degree(NodeId(0)), 0);
        for u in g.nodes() {
            let heads = g.arcs().filter(|a| a.head == u).count();
            assert_eq!(heads, g.in_degree(u));
        }
        let tails: Vec<_> = g.in_arcs(NodeId(1)).map(|(t, _)| t.0).collect();
        assert_eq!(tails, vec![0, 2, 3]);
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(matches!(DirectedGraph::from_arcs(2, [(1, 1, 0.5)]), Err(Error::SelfLoop { .. })));
        assert!(matches!(
            DirectedGraph::from_arcs(2, [(0, 1, 0.5), (0, 1, 0.2)]),
            Err(Error::DuplicateArc { .. })
        ));
        assert!(matches!(
            DirectedGraph::from_arcs(2, [(0, 1, 1.5)]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn costs_must_be_positive() {
        let g = DirectedGraph::from_arcs(2, [(0, 1, 0.5)]).unwrap();
        assert!(g.with_costs(vec![1.0, 0.0]).is_err());
        assert!(g.with_costs(vec![1.0]).is_err());
        assert_eq!(g.with_costs(vec![2.0, 0.5]).unwrap().cost(NodeId(0)), 2.0);
    }

    #[test]
    fn lt_weight_check() {
        let g = DirectedGraph::from_arcs(3, [(0, 2, 0.6), (1, 2, 0.6)]).unwrap();
        assert!(matches!(g.check_lt_weights(), Err(Error::LtWeightsExceeded { node: 2, .. })));
        let g = DirectedGraph::from_arcs(3, [(0, 2, 0.5), (1, 2, 0.5)]).unwrap();
        assert!(g.check_lt_weights().is_ok());
    }
}
