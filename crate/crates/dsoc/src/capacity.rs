//! Soft capacity of the PPM photon-counting Poisson channel, regime
//! classification, and quantum-limit comparisons.
//!
//! The capacity model is a single closed form whose denominator is a sum of
//! three watts-valued terms. Whichever term dominates names the operating
//! regime:
//!
//! * **noise limited** — `2·Pn/(M-1)` dominates; capacity grows
//!   quadratically with received power,
//! * **quantum limited** — `Pr/ln M` dominates; capacity grows linearly,
//! * **bandwidth limited** — `Pr²·M·T_slot/(ln M · E)` dominates; capacity
//!   saturates at `log2(M)/(M·T_slot)`.

use crate::ppm::PpmConfig;
use crate::quantities::{PhotonEnergyJ, PowerW};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CapacityError {
    #[error("channel transmittivity must lie in (0, 1], got {0}")]
    InvalidTransmittivity(f64),
}

/// Which power the capacity formula consumed. Published planet tables quote
/// the power *before* the photon detector, while an end-to-end pipeline may
/// hand over post-detection power; the flag keeps reports auditable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerTap {
    PreDetector,
    Detected,
}

impl PowerTap {
    pub fn label(self) -> &'static str {
        match self {
            PowerTap::PreDetector => "pre_detector",
            PowerTap::Detected => "detected",
        }
    }
}

/// Dominant denominator term of the capacity formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NoiseLimited,
    QuantumLimited,
    BandwidthLimited,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::NoiseLimited => "noise_limited",
            Regime::QuantumLimited => "quantum_limited",
            Regime::BandwidthLimited => "bandwidth_limited",
        }
    }
}

/// Inputs to a capacity evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub received_power: PowerW,
    pub noise_power: PowerW,
    pub photon_energy: PhotonEnergyJ,
    pub ppm: PpmConfig,
    pub power_tap: PowerTap,
}

/// Capacity value plus the denominator breakdown that classifies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    pub capacity_bps: f64,
    pub regime: Regime,
    pub term_noise_w: f64,
    pub term_quantum_w: f64,
    pub term_bandwidth_w: f64,
    pub power_tap: PowerTap,
}

/// Soft capacity of the PPM photon-counting receiver in bits per second:
///
/// ```text
/// C = (1 / (ln2 · E)) · Pr² / ( Pn·2/(M-1) + Pr/ln M + Pr²·M·T_slot/(ln M · E) )
/// ```
///
/// Zero received power yields zero capacity (not an error).
pub fn ppm_pc_capacity(op: &OperatingPoint) -> CapacityReport {
    let pr = op.received_power.watts();
    let pn = op.noise_power.watts();
    let e = op.photon_energy.joules();
    let m = f64::from(op.ppm.order().get());
    let ln_m = m.ln();
    let t_slot = op.ppm.slot_time_s();

    let term_noise = pn * 2.0 / (m - 1.0);
    let term_quantum = pr / ln_m;
    let term_bandwidth = pr * pr * m * t_slot / (ln_m * e);

    let capacity_bps = if pr == 0.0 {
        0.0
    } else {
        let denom = term_noise + term_quantum + term_bandwidth;
        pr * pr / (std::f64::consts::LN_2 * e * denom)
    };

    let regime = if term_noise >= term_quantum && term_noise >= term_bandwidth {
        Regime::NoiseLimited
    } else if term_quantum >= term_bandwidth {
        Regime::QuantumLimited
    } else {
        Regime::BandwidthLimited
    };

    CapacityReport {
        capacity_bps,
        regime,
        term_noise_w: term_noise,
        term_quantum_w: term_quantum,
        term_bandwidth_w: term_bandwidth,
        power_tap: op.power_tap,
    }
}

/// The rate the capacity saturates at for large received power,
/// `log2(M) / (M · T_slot)`.
pub fn saturation_rate_bps(ppm: &PpmConfig) -> f64 {
    ppm.order().bits_per_symbol() / ppm.symbol_time_s()
}

/// Holevo bound corresponding to a PPM photon-counting capacity:
/// `C_Holevo = 2.561 · C_PCR`.
pub fn holevo_limit_bps(c_pcr_bps: f64) -> f64 {
    2.561 * c_pcr_bps
}

/// Asymptotic Holevo dimensional/photon-efficiency trade-off,
/// `c_d = e · c_p · 2^(-c_p)`. Reference curve for plots only; it plays no
/// role in link design.
pub fn holevo_dimensional_efficiency(photon_efficiency_bits: f64) -> f64 {
    std::f64::consts::E * photon_efficiency_bits * 2.0f64.powf(-photon_efficiency_bits)
}

/// Modulation scheme for the number-state capacity factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsScheme {
    Ook,
    Ppm,
}

/// Multiplicative factor applied to the Holevo curve for number-state
/// signaling over a channel of transmittivity `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsFactor {
    pub factor: f64,
    /// Set when the factor exceeds 1, i.e. the printed formula would place
    /// the scheme above the Holevo limit. Reported rather than clamped.
    pub exceeds_holevo: bool,
}

/// Default transmittivity above which the near-unity OOK branch is used.
pub const NS_NEAR_UNITY_THRESHOLD: f64 = 0.9;

/// Number-state capacity factor versus channel transmittivity.
///
/// For PPM the factor is `eta/e`, which stays below 1 even at `eta = 1`. For
/// OOK the factor is `2^f(eta)` with a small-`eta` branch `f = eta/e` and a
/// near-unity branch `f = |eta-1|^(eta-1) / e^(1-eta)`; the two branches are
/// switched at `threshold` rather than blended. The near-unity branch uses
/// the magnitude of `eta-1` as the base, the only real-valued reading of the
/// expression, and equals the printed `0^0/e^0 = 1` at `eta = 1` exactly.
pub fn ns_dimensional_factor(
    eta: f64,
    scheme: NsScheme,
    threshold: f64,
) -> Result<NsFactor, CapacityError> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(CapacityError::InvalidTransmittivity(eta));
    }
    let factor = match scheme {
        NsScheme::Ppm => eta / std::f64::consts::E,
        NsScheme::Ook => {
            let f = if eta >= threshold {
                (eta - 1.0).abs().powf(eta - 1.0) * (eta - 1.0).exp()
            } else {
                eta / std::f64::consts::E
            };
            2.0f64.powf(f)
        }
    };
    Ok(NsFactor { factor, exceeds_holevo: factor > 1.0 })
}
