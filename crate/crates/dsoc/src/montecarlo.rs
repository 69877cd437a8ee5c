//! Stochastic oracle for the analytic channel formulas.
//!
//! Two simulations live here: maximum-likelihood PPM symbol detection over
//! Poisson slot counts (validates the closed-form symbol error rate) and a
//! non-paralyzable dead-time process (validates the `1/(1+lτ)` blocking
//! factor). Both are deterministic for a fixed seed regardless of how many
//! worker threads execute them: trials are split into fixed-size chunks,
//! each chunk runs its own counter-derived RNG stream, and the aggregation
//! is an order-independent integer sum.

use crate::ppm::{PoissonSlotModel, PpmConfig};
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("flux must be positive and finite, got {0} /s")]
    InvalidFlux(f64),
    #[error("horizon must be positive and much longer than the dead time")]
    InvalidHorizon,
}

/// Trials per RNG chunk. Fixed so results do not depend on thread count.
const CHUNK_TRIALS: u64 = 8192;

/// Configuration of a symbol-error simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub ppm: PpmConfig,
    pub slot_model: PoissonSlotModel,
}

/// Estimated error probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub errors: u64,
    pub trials: u64,
}

/// SplitMix64 step; decorrelates per-chunk seeds derived from a base seed.
fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `Poisson(0)` degenerates to the constant zero; `rand_distr` rejects a
/// zero mean, so the distribution is only materialized for positive means.
fn poisson_for(mean: f64) -> Option<Poisson<f64>> {
    (mean > 0.0).then(|| Poisson::new(mean).expect("positive mean"))
}

fn sample(rng: &mut ChaCha8Rng, dist: &Option<Poisson<f64>>) -> u64 {
    match dist {
        Some(p) => p.sample(rng) as u64,
        None => 0,
    }
}

/// Estimate the PPM symbol error rate by direct simulation.
///
/// Per trial: the pulsed slot count is drawn from `Poisson(Ks + Kb)`, each
/// of the `M - 1` empty slots from `Poisson(Kb)`, and the decision is the
/// argmax count with uniform-random tie-breaking.
pub fn simulate_ser(cfg: &SimConfig) -> Result<SerEstimate, SimError> {
    if cfg.trials == 0 {
        return Err(SimError::NoTrials);
    }
    let m = u64::from(cfg.ppm.order().get());
    let ks = cfg.slot_model.signal_mean_per_pulse();
    let kb = cfg.slot_model.noise_mean_per_slot();
    let pulsed_dist = poisson_for(ks + kb);
    let empty_dist = poisson_for(kb);

    let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, chunk));
            let trials_here = CHUNK_TRIALS.min(cfg.trials - chunk * CHUNK_TRIALS);
            let mut errors = 0u64;
            for _ in 0..trials_here {
                if !decide_correctly(&mut rng, m, &pulsed_dist, &empty_dist) {
                    errors += 1;
                }
            }
            errors
        })
        .sum();

    let estimate = errors as f64 / cfg.trials as f64;
    let stderr = (estimate * (1.0 - estimate) / cfg.trials as f64).sqrt();
    Ok(SerEstimate { estimate, stderr, errors, trials: cfg.trials })
}

/// One ML detection trial; the pulse occupies slot 0 without loss of
/// generality. Returns whether the decision lands on the pulsed slot.
fn decide_correctly(
    rng: &mut ChaCha8Rng,
    m: u64,
    pulsed_dist: &Option<Poisson<f64>>,
    empty_dist: &Option<Poisson<f64>>,
) -> bool {
    let pulsed = sample(rng, pulsed_dist);
    if empty_dist.is_none() {
        // Empty slots are identically zero: a positive pulsed count wins
        // outright, otherwise all M slots tie at zero.
        return if pulsed > 0 { true } else { rng.gen_range(0..m) == 0 };
    }
    let mut max_count = pulsed;
    let mut ties = 1u64; // slots holding the max so far, pulsed included
    let mut pulsed_is_max = true;
    for _ in 1..m {
        let count = sample(rng, empty_dist);
        if count > max_count {
            max_count = count;
            ties = 1;
            pulsed_is_max = false;
        } else if count == max_count {
            ties += 1;
        }
    }
    // Uniform tie-break across the argmax set.
    pulsed_is_max && rng.gen_range(0..ties) == 0
}

/// Outcome of a dead-time throughput simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingEstimate {
    /// Fraction of arrivals that were counted.
    pub throughput_ratio: f64,
    pub arrived: u64,
    pub counted: u64,
}

/// Simulate a non-paralyzable dead-time detector: Poisson arrivals at
/// `flux_per_s`, an arrival counted only if no *counted* arrival happened
/// in the preceding `dead_time_s` (blocked arrivals do not extend the dead
/// time). Returns counted/arrived over the horizon.
pub fn simulate_blocking(
    flux_per_s: f64,
    dead_time_s: f64,
    horizon_s: f64,
    seed: u64,
) -> Result<BlockingEstimate, SimError> {
    if !flux_per_s.is_finite() || flux_per_s <= 0.0 {
        return Err(SimError::InvalidFlux(flux_per_s));
    }
    if !horizon_s.is_finite() || horizon_s <= 0.0 || horizon_s <= dead_time_s {
        return Err(SimError::InvalidHorizon);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exp = rand_distr::Exp::new(flux_per_s).expect("positive rate");

    let mut t = 0.0f64;
    let mut arrived = 0u64;
    let mut counted = 0u64;
    let mut last_counted = f64::NEG_INFINITY;
    loop {
        t += exp.sample(&mut rng);
        if t >= horizon_s {
            break;
        }
        arrived += 1;
        if t - last_counted >= dead_time_s {
            counted += 1;
            last_counted = t;
        }
    }
    if arrived == 0 {
        return Err(SimError::InvalidHorizon);
    }
    Ok(BlockingEstimate { throughput_ratio: counted as f64 / arrived as f64, arrived, counted })
}
