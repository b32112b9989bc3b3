//! Seed-set optimization for influence propagation in social networks.
//!
//! The crate covers three problems on a directed graph with arc influence probabilities:
//!
//! * MINTSS: the cheapest seed set whose expected spread reaches a threshold `η`
//!   ([`greedy_mintss`], within a shortfall `ε`),
//! * MINTIME: with at most `k` seeds, the fewest propagation steps needed to reach `η`
//!   ([`mintime`]),
//! * MAXINF: the `k` seeds with the largest expected spread ([`greedy_maxinf`]).
//!
//! Spread is computed under the Independent Cascade or Linear Threshold model, either by Monte
//! Carlo simulation ([`estimate_spread`]) or exactly by live-edge enumeration on small graphs
//! ([`exact_spread`]). The greedy drivers only see a [`CoverageOracle`], so they also run on
//! synthetic submodular functions.

pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod opt;
pub mod oracle;
pub mod probs;
pub mod propagation;
pub mod rng;

pub use error::{Error, Result};
pub use generate::{generate_synthetic, GeneratorKind, SyntheticSpec};
pub use graph::{DirectedGraph, GraphBuilder, NodeId};
pub use heuristics::{heuristic_mintime, heuristic_mintss, pagerank, rank_nodes, HeuristicKind, HeuristicSpec};
pub use io::{load_edge_list, EdgeListOptions, PropagationLog};
pub use opt::{
    brute_force_maxinf, brute_force_mintime, brute_force_mintss, greedy_maxinf, greedy_mintss, mintime,
    mintime_with, GreedyOptions, MintimeOptions, MintimeResult, MintssResult,
};
pub use oracle::{noisy_oracle, wolsey_instance, CoverageOracle, ExactSpreadOracle, MonteCarloOracle};
pub use probs::{assign_uniform, assign_weighted_cascade, estimate_probs_mle};
pub use propagation::{
    estimate_spread, exact_spread, simulate_once, CascadeTrace, ExactCaps, Horizon, Model, SeedSet, SpreadEstimate,
};
