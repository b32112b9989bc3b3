//! Seed-set optimization over coverage oracles.

mod brute;
mod greedy;
mod mintime;

pub use brute::{
    brute_force_maxinf, brute_force_mintime, brute_force_mintss, FEASIBILITY_TOL, MINTIME_CAP, MINTSS_CAP,
};
pub use greedy::{greedy_maxinf, greedy_mintss, GreedyOptions, MintssResult};
pub use mintime::{boosted_budget, mintime, mintime_with, MintimeOptions, MintimeResult};

pub(crate) use greedy::validate_cover_params;
