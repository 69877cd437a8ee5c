//! Pulse-position-modulation signaling arithmetic and Poisson channel
//! statistics.
//!
//! A PPM symbol divides a symbol period into `M` slots and places a single
//! pulse in one of them, carrying `log2(M)` bits. With a photon-counting
//! receiver the per-slot detected photon counts are Poisson distributed,
//! which makes the uncoded symbol error probability available in closed
//! form when background counts are negligible.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PpmError {
    #[error("PPM order must be a power of two >= 2, got {0}")]
    InvalidOrder(u32),
    #[error("slot time must be positive and finite, got {0} s")]
    InvalidSlotTime(f64),
    #[error("code rate must lie in (0, 1], got {0}")]
    InvalidCodeRate(f64),
    #[error("photon mean must be non-negative and finite, got {0}")]
    InvalidMean(f64),
}

/// PPM modulation order `M = 2^k`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PpmOrder(u32);

impl PpmOrder {
    pub fn new(order: u32) -> Result<Self, PpmError> {
        if order < 2 || !order.is_power_of_two() {
            return Err(PpmError::InvalidOrder(order));
        }
        Ok(Self(order))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Bits carried per symbol, `log2(M)`.
    pub fn bits_per_symbol(self) -> f64 {
        f64::from(self.0.trailing_zeros())
    }
}

/// A PPM operating configuration: order, slot time, and code rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpmConfig {
    order: PpmOrder,
    slot_time_s: f64,
    code_rate: f64,
}

impl PpmConfig {
    pub fn new(order: PpmOrder, slot_time_s: f64, code_rate: f64) -> Result<Self, PpmError> {
        if !slot_time_s.is_finite() || slot_time_s <= 0.0 {
            return Err(PpmError::InvalidSlotTime(slot_time_s));
        }
        if !code_rate.is_finite() || code_rate <= 0.0 || code_rate > 1.0 {
            return Err(PpmError::InvalidCodeRate(code_rate));
        }
        Ok(Self { order, slot_time_s, code_rate })
    }

    /// Uncoded variant (code rate 1) of the same order and slot time.
    pub fn uncoded(order: PpmOrder, slot_time_s: f64) -> Result<Self, PpmError> {
        Self::new(order, slot_time_s, 1.0)
    }

    pub fn order(&self) -> PpmOrder {
        self.order
    }

    pub fn slot_time_s(&self) -> f64 {
        self.slot_time_s
    }

    pub fn code_rate(&self) -> f64 {
        self.code_rate
    }

    /// Symbol period `M · T_slot`.
    pub fn symbol_time_s(&self) -> f64 {
        f64::from(self.order.get()) * self.slot_time_s
    }
}

/// Per-slot Poisson photon statistics: mean signal photons in the pulsed
/// slot (`Ks`) and mean background photons in any slot (`Kb`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonSlotModel {
    signal_mean_per_pulse: f64,
    noise_mean_per_slot: f64,
}

impl PoissonSlotModel {
    pub fn new(signal_mean_per_pulse: f64, noise_mean_per_slot: f64) -> Result<Self, PpmError> {
        for &k in &[signal_mean_per_pulse, noise_mean_per_slot] {
            if !k.is_finite() || k < 0.0 {
                return Err(PpmError::InvalidMean(k));
            }
        }
        Ok(Self { signal_mean_per_pulse, noise_mean_per_slot })
    }

    /// Build the slot statistics from photon fluxes *incident on the
    /// detector*, folding in the detector quantum efficiency:
    /// `Ks = η · l_s · M · T_slot` and `Kb = η · l_n · T_slot`.
    ///
    /// The signal pulse concentrates the whole symbol's energy in one slot,
    /// hence the factor `M` on the signal mean only.
    pub fn from_incident_fluxes(
        signal_flux_per_s: f64,
        noise_flux_per_s: f64,
        cfg: &PpmConfig,
        quantum_efficiency: f64,
    ) -> Result<Self, PpmError> {
        Self::new(
            quantum_efficiency * signal_flux_per_s * cfg.symbol_time_s(),
            quantum_efficiency * noise_flux_per_s * cfg.slot_time_s(),
        )
    }

    /// Build the slot statistics from *already-detected* fluxes (quantum
    /// efficiency applied upstream). Use exactly one of the two entry
    /// points, never both, so the efficiency is not applied twice.
    pub fn from_detected_fluxes(
        signal_flux_per_s: f64,
        noise_flux_per_s: f64,
        cfg: &PpmConfig,
    ) -> Result<Self, PpmError> {
        Self::from_incident_fluxes(signal_flux_per_s, noise_flux_per_s, cfg, 1.0)
    }

    pub fn signal_mean_per_pulse(&self) -> f64 {
        self.signal_mean_per_pulse
    }

    pub fn noise_mean_per_slot(&self) -> f64 {
        self.noise_mean_per_slot
    }
}

/// Coded data rate `R_ecc · log2(M) / (M · T_slot)` in bits per second.
pub fn data_rate_bps(cfg: &PpmConfig) -> f64 {
    cfg.code_rate() * cfg.order().bits_per_symbol() / cfg.symbol_time_s()
}

/// Poisson probability mass `K^k e^-K / k!`, evaluated in log space so that
/// large counts and means do not overflow.
pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    debug_assert!(mean >= 0.0);
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    (kf * mean.ln() - mean - ln_factorial(k)).exp()
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Uncoded maximum-likelihood symbol error probability of `M`-ary PPM on a
/// Poisson channel with no background counts: `P_s = (M-1) e^-Ks / M`.
///
/// At `Ks = 0` every slot reads zero and the detector guesses uniformly,
/// which is where the `(M-1)/M` factor comes from.
pub fn symbol_error_probability(order: PpmOrder, ks: f64) -> f64 {
    debug_assert!(ks >= 0.0);
    let m = f64::from(order.get());
    (m - 1.0) / m * (-ks).exp()
}

/// Bit error probability via the orthogonal-signaling mapping
/// `P_b = P_s · (M/2)/(M-1) = e^-Ks / 2`.
///
/// Unlike the raw symbol error rate, this is strictly decreasing in `M` at
/// equal detected energy per slot `Ks/M`, which is the ordering BER charts
/// display.
pub fn bit_error_probability(order: PpmOrder, ks: f64) -> f64 {
    let m = f64::from(order.get());
    symbol_error_probability(order, ks) * (m / 2.0) / (m - 1.0)
}
