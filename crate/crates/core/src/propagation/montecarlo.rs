use rayon::prelude::*;

use super::{check_model, check_seeds, Horizon, Model, Simulator, SpreadEstimate};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::rng::derive_seed;

// Small enough to balance, large enough that rayon's split overhead stays negligible.
const MIN_SIMS_PER_TASK: usize = 32;

/// Mean and standard error from integer per-simulation counts. Integer accumulation keeps the
/// result independent of summation order.
fn summarize(sum: u128, sum_sq: u128, n: usize, horizon: Horizon) -> SpreadEstimate {
    let nn = n as u128;
    let mean = sum as f64 / n as f64;
    let std_err = if n > 1 {
        // n * sum_sq - sum^2 >= 0 by Cauchy-Schwarz; exact in u128
        let num = nn * sum_sq - sum * sum;
        let var = num as f64 / (nn * (nn - 1)) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    SpreadEstimate { mean, std_err, n_sims: n, horizon }
}

/// Monte Carlo estimate of the expected number of active nodes.
///
/// Simulation `i` is keyed by `(master_seed, i)` whatever the seed set, so the estimate is bit-identical for
/// any thread count.
pub fn estimate_spread(
    g: &DirectedGraph,
    model: Model,
    seeds: &[NodeId],
    horizon: Horizon,
    n_sims: usize,
    master_seed: u64,
) -> Result<SpreadEstimate> {
    if n_sims == 0 {
        return Err(Error::invalid("n_sims must be at least 1"));
    }
    check_seeds(g, seeds)?;
    check_model(g, model)?;
    if seeds.is_empty() {
        return Ok(SpreadEstimate { mean: 0.0, std_err: 0.0, n_sims, horizon });
    }
    let counts: Vec<u32> = (0..n_sims)
        .into_par_iter()
        .with_min_len(MIN_SIMS_PER_TASK)
        .map_init(
            || Simulator::new(g, model),
            |sim, i| sim.count(seeds, horizon, derive_seed(master_seed, i as u64)) as u32,
        )
        .collect();
    let (sum, sum_sq) = counts
        .iter()
        .fold((0u128, 0u128), |(s, q), &c| (s + c as u128, q + (c as u128) * (c as u128)));
    Ok(summarize(sum, sum_sq, n_sims, horizon))
}

/// Spread estimates for every horizon `0..=R` from a single batch of cascades.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadProfile {
    steps: Vec<SpreadEstimate>,
    limit: Horizon,
}

impl SpreadProfile {
    /// Estimate for horizon `r`. Past the deepest simulated step the unbounded value is returned.
    pub fn at(&self, r: u32) -> SpreadEstimate {
        let last = self.steps.len() - 1;
        let mut e = self.steps[(r as usize).min(last)];
        e.horizon = Horizon::Steps(r);
        e
    }

    /// Estimate at the profile's own limit.
    pub fn last(&self) -> SpreadEstimate {
        let mut e = *self.steps.last().expect("profile has at least step 0");
        e.horizon = self.limit;
        e
    }

    /// Deepest step recorded.
    pub fn depth(&self) -> u32 {
        (self.steps.len() - 1) as u32
    }
}

/// Runs `n_sims` cascades once and reads off `σ^r` for every `r` up to `limit`.
///
/// Because a bounded cascade consumes randomness as a prefix of the unbounded one,
/// `profile.at(r)` equals `estimate_spread(.., Horizon::Steps(r), n_sims, master_seed)` exactly.
pub fn estimate_spread_profile(
    g: &DirectedGraph,
    model: Model,
    seeds: &[NodeId],
    limit: Horizon,
    n_sims: usize,
    master_seed: u64,
) -> Result<SpreadProfile> {
    if n_sims == 0 {
        return Err(Error::invalid("n_sims must be at least 1"));
    }
    check_seeds(g, seeds)?;
    check_model(g, model)?;
    let per_sim: Vec<Vec<u32>> = (0..n_sims)
        .into_par_iter()
        .with_min_len(MIN_SIMS_PER_TASK)
        .map_init(
            || Simulator::new(g, model),
            |sim, i| {
                let mut cumulative = Vec::new();
                let mut total = 0u32;
                sim.run(seeds, limit, derive_seed(master_seed, i as u64), |step, nodes| {
                    // steps are consecutive: an empty step ends the cascade
                    debug_assert_eq!(step as usize, cumulative.len());
                    total += nodes.len() as u32;
                    cumulative.push(total);
                });
                cumulative
            },
        )
        .collect();

    let depth = match limit {
        Horizon::Steps(r) => r as usize,
        Horizon::Unbounded => per_sim.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0),
    };
    let mut steps = Vec::with_capacity(depth + 1);
    for r in 0..=depth {
        let (mut sum, mut sum_sq) = (0u128, 0u128);
        for c in &per_sim {
            let v = c.get(r).or(c.last()).copied().unwrap_or(0) as u128;
            sum += v;
            sum_sq += v * v;
        }
        steps.push(summarize(sum, sum_sq, n_sims, Horizon::Steps(r as u32)));
    }
    Ok(SpreadProfile { steps, limit })
}
