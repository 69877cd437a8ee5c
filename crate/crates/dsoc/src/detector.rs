//! Photon-counting detection losses and detected power.
//!
//! A photon-counting detector goes blind for a dead time after each
//! detection event (blocking loss) and time-stamps events with a random
//! delay (jitter loss). Both impairments, together with the quantum
//! efficiency, separate the power arriving at the detector from the power
//! the decoder effectively sees.
//!
//! Loss quantities are carried as dB >= 0 and converted to linear factors
//! <= 1 at use sites.

use crate::ppm::PpmOrder;
use crate::quantities::{DecibelLoss, PhotonEnergyJ, PowerW};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectorError {
    #[error("quantum efficiency must lie in (0, 1], got {0}")]
    InvalidQuantumEfficiency(f64),
    #[error("dead time must be non-negative and finite, got {0} s")]
    InvalidDeadTime(f64),
    #[error("jitter sigma must be non-negative and finite, got {0} s")]
    InvalidJitterSigma(f64),
    #[error("photon flux must be non-negative and finite, got {0} /s")]
    InvalidFlux(f64),
}

/// Shape of the jitter-loss polynomial in the normalized jitter `Ψ`.
///
/// The closed form is printed with two coefficients on linear `Ψ`
/// (`a·Ψ + b·Ψ + 1`); a quadratic reading (`a·Ψ² + b·Ψ + 1`) is equally
/// plausible from the source material, so both are selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JitterForm {
    LinearAsPrinted,
    Quadratic,
}

/// Jitter-loss polynomial coefficients `(a, b)`, default `(5, 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterPolynomial {
    pub coeffs: (f64, f64),
    pub form: JitterForm,
}

impl Default for JitterPolynomial {
    fn default() -> Self {
        Self { coeffs: (5.0, 2.0), form: JitterForm::LinearAsPrinted }
    }
}

/// Physical parameters of a photon-counting detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonCountingDetector {
    pub quantum_efficiency: f64,
    pub dead_time_s: f64,
    pub jitter_sigma_s: f64,
    pub jitter_polynomial: JitterPolynomial,
}

impl PhotonCountingDetector {
    pub fn new(
        quantum_efficiency: f64,
        dead_time_s: f64,
        jitter_sigma_s: f64,
    ) -> Result<Self, DetectorError> {
        if !quantum_efficiency.is_finite() || quantum_efficiency <= 0.0 || quantum_efficiency > 1.0 {
            return Err(DetectorError::InvalidQuantumEfficiency(quantum_efficiency));
        }
        if !dead_time_s.is_finite() || dead_time_s < 0.0 {
            return Err(DetectorError::InvalidDeadTime(dead_time_s));
        }
        if !jitter_sigma_s.is_finite() || jitter_sigma_s < 0.0 {
            return Err(DetectorError::InvalidJitterSigma(jitter_sigma_s));
        }
        Ok(Self {
            quantum_efficiency,
            dead_time_s,
            jitter_sigma_s,
            jitter_polynomial: JitterPolynomial::default(),
        })
    }

    pub fn with_jitter_polynomial(mut self, polynomial: JitterPolynomial) -> Self {
        self.jitter_polynomial = polynomial;
        self
    }
}

/// Signal and noise photon fluxes incident on the detection process,
/// photons per second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPair {
    pub signal_flux_per_s: f64,
    pub noise_flux_per_s: f64,
}

impl FluxPair {
    pub fn new(signal_flux_per_s: f64, noise_flux_per_s: f64) -> Result<Self, DetectorError> {
        for &f in &[signal_flux_per_s, noise_flux_per_s] {
            if !f.is_finite() || f < 0.0 {
                return Err(DetectorError::InvalidFlux(f));
            }
        }
        Ok(Self { signal_flux_per_s, noise_flux_per_s })
    }

    /// Fluxes from powers: `l_s = P_r,ap · η_det / E` and `l_n = P_n / E`.
    pub fn from_powers(
        pr_ap: PowerW,
        noise_power: PowerW,
        quantum_efficiency: f64,
        photon_energy: PhotonEnergyJ,
    ) -> Result<Self, DetectorError> {
        let e = photon_energy.joules();
        Self::new(pr_ap.watts() * quantum_efficiency / e, noise_power.watts() / e)
    }

    pub fn total_per_s(&self) -> f64 {
        self.signal_flux_per_s + self.noise_flux_per_s
    }
}

/// Steady-state throughput factor `μ = 1/(1 + l·τ)` of a single
/// non-paralyzable detector with total incident flux `l` and dead time `τ`
/// (Markov detector-state model, single-detector case).
pub fn blocking_loss(flux: &FluxPair, dead_time_s: f64) -> f64 {
    1.0 / (1.0 + flux.total_per_s() * dead_time_s)
}

/// Normalized jitter variance driving the jitter loss:
///
/// ```text
/// Ψ = (σ_j / T_slot) · (1 + tanh(R_ecc - 1/2)) / 1.25^log2(M)
/// ```
pub fn jitter_psi(jitter_sigma_s: f64, slot_time_s: f64, code_rate: f64, order: PpmOrder) -> f64 {
    debug_assert!(slot_time_s > 0.0);
    (jitter_sigma_s / slot_time_s) * (1.0 + (code_rate - 0.5).tanh())
        / 1.25f64.powf(order.bits_per_symbol())
}

/// Jitter loss in dB from the normalized jitter `Ψ`.
pub fn jitter_loss(psi: f64, polynomial: &JitterPolynomial) -> DecibelLoss {
    debug_assert!(psi >= 0.0);
    let (a, b) = polynomial.coeffs;
    let arg = match polynomial.form {
        JitterForm::LinearAsPrinted => a * psi + b * psi + 1.0,
        JitterForm::Quadratic => a * psi * psi + b * psi + 1.0,
    };
    DecibelLoss::new(10.0 * arg.log10()).expect("finite jitter loss")
}

/// Detected power `P_det = P_r,ap · L_b · L_j · η_det`, with the blocking
/// factor already linear and the jitter loss converted from dB.
pub fn detected_power(
    pr_ap: PowerW,
    detector: &PhotonCountingDetector,
    blocking: f64,
    jitter: DecibelLoss,
) -> PowerW {
    let p = pr_ap.watts() * blocking * jitter.linear_factor() * detector.quantum_efficiency;
    PowerW::new(p).expect("detected power stays non-negative")
}

/// Required power once a practical code's efficiency gap is paid:
/// `P_rq = η_coding · P_det`, where the gap is given in dB >= 0.
pub fn required_power_with_coding(p_det: PowerW, coding_gap: DecibelLoss) -> PowerW {
    PowerW::new(p_det.watts() / coding_gap.linear_factor()).expect("scaled power is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{photon_energy, LengthM};
    use proptest::prelude::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        ((got - want) / want).abs()
    }

    fn order(m: u32) -> PpmOrder {
        PpmOrder::new(m).unwrap()
    }

    #[test]
    fn blocking_identity_without_photons() {
        let flux = FluxPair::new(0.0, 0.0).unwrap();
        assert_eq!(blocking_loss(&flux, 50e-9), 1.0);
    }

    #[test]
    fn blocking_half_at_unity_flux_dead_time_product() {
        let flux = FluxPair::new(1e6, 0.0).unwrap();
        assert_eq!(blocking_loss(&flux, 1e-6), 0.5);
    }

    #[test]
    fn blocking_at_mars_operating_point() {
        // Pr = 4.5053e-12 W through a 50% efficient detector at 1550 nm.
        let e = photon_energy(LengthM::new(1550e-9).unwrap()).unwrap();
        let flux = FluxPair::from_powers(
            PowerW::new(4.5053e-12).unwrap(),
            PowerW::new(1.1620e-16).unwrap(),
            0.5,
            e,
        )
        .unwrap();
        assert!(rel_err(flux.signal_flux_per_s, 1.757e7) < 1e-3);
        let mu = blocking_loss(&flux, 50e-9);
        assert!(rel_err(mu, 0.532) < 1e-3, "mu = {mu}");
    }

    #[test]
    fn jitter_psi_zero_sigma() {
        assert_eq!(jitter_psi(0.0, 0.25e-9, 0.5, order(16)), 0.0);
    }

    #[test]
    fn jitter_psi_tanh_term_is_unity_at_half_rate() {
        // tanh(0) = 0, so the (1 + tanh) factor is exactly 1.
        let psi = jitter_psi(1e-9, 1e-9, 0.5, order(16));
        assert!(rel_err(psi, 0.4096) < 1e-12, "psi = {psi}");
    }

    #[test]
    fn jitter_loss_printed_coefficients() {
        let lj = jitter_loss(0.4096, &JitterPolynomial::default());
        assert!((lj.db() - 5.874).abs() < 1e-2, "Lj = {} dB", lj.db());
        assert_eq!(jitter_loss(0.0, &JitterPolynomial::default()).db(), 0.0);
    }

    #[test]
    fn jitter_loss_negligible_below_one_slot() {
        // σ_j/T_slot < 1 keeps the loss small; >> 1 blows it up.
        let small = jitter_psi(0.05e-9, 1e-9, 0.5, order(16));
        let poly = JitterPolynomial::default();
        assert!(jitter_loss(small, &poly).db() < 0.6);
        let large = jitter_psi(240e-9, 0.25e-9, 0.5, order(16));
        assert!(jitter_loss(large, &poly).db() > 30.0);
    }

    #[test]
    fn jitter_quadratic_form_selectable() {
        let quad = JitterPolynomial { coeffs: (5.0, 2.0), form: JitterForm::Quadratic };
        let psi = 0.4096;
        let want = 10.0 * (5.0 * psi * psi + 2.0 * psi + 1.0f64).log10();
        assert!((jitter_loss(psi, &quad).db() - want).abs() < 1e-12);
    }

    #[test]
    fn detected_power_ideal_detector_is_identity() {
        let det = PhotonCountingDetector::new(1.0, 0.0, 0.0).unwrap();
        let pr = PowerW::new(3.3e-12).unwrap();
        let p = detected_power(pr, &det, 1.0, DecibelLoss::new(0.0).unwrap());
        assert_eq!(p, pr);
    }

    #[test]
    fn detected_power_mars_composition() {
        let det = PhotonCountingDetector::new(0.5, 50e-9, 0.0).unwrap();
        let pr = PowerW::new(1.0).unwrap();
        let p = detected_power(pr, &det, 0.53226, DecibelLoss::new(0.0).unwrap());
        assert!(rel_err(p.watts(), 0.266) < 1e-2);
        assert!((p.dbw() - (-5.75)).abs() < 1e-2);
    }

    #[test]
    fn coding_gap_scales_power_up() {
        let p = PowerW::new(1e-12).unwrap();
        assert_eq!(required_power_with_coding(p, DecibelLoss::new(0.0).unwrap()), p);
        let scppm = required_power_with_coding(p, DecibelLoss::new(0.5).unwrap());
        assert!(rel_err(scppm.watts() / 1e-12, 1.122) < 1e-3);
        let rs = required_power_with_coding(p, DecibelLoss::new(2.5).unwrap());
        assert!(rel_err(rs.watts() / 1e-12, 1.778) < 1e-3);
    }

    proptest! {
        #[test]
        fn blocking_decreasing_in_flux_dead_time(l in 0.0..1e9f64, tau_ns in 0.0..1e3f64) {
            let tau = tau_ns * 1e-9;
            let flux = FluxPair::new(l, 0.0).unwrap();
            let mu = blocking_loss(&flux, tau);
            prop_assert!(mu > 0.0 && mu <= 1.0);
            let busier = FluxPair::new(l + 1e6, 0.0).unwrap();
            prop_assert!(blocking_loss(&busier, tau) <= mu);
        }

        #[test]
        fn blocking_improves_as_received_power_drops(pr_exp in -16.0..-9.0f64) {
            // Further from the sun-side planet, fewer photons, less blocking.
            let e = photon_energy(LengthM::new(1550e-9).unwrap()).unwrap();
            let pr = 10f64.powf(pr_exp);
            let near = FluxPair::from_powers(
                PowerW::new(pr).unwrap(), PowerW::new(1e-16).unwrap(), 0.5, e).unwrap();
            let far = FluxPair::from_powers(
                PowerW::new(pr / 4.0).unwrap(), PowerW::new(1e-16).unwrap(), 0.5, e).unwrap();
            prop_assert!(blocking_loss(&far, 50e-9) > blocking_loss(&near, 50e-9));
        }

        #[test]
        fn jitter_loss_monotone(psi in 0.0..100.0f64) {
            let poly = JitterPolynomial::default();
            prop_assert!(jitter_loss(psi + 0.01, &poly).db() > jitter_loss(psi, &poly).db());
            prop_assert!(jitter_loss(psi, &poly).db() >= 0.0);
        }

        #[test]
        fn detected_never_exceeds_incident(
            pr_exp in -16.0..-6.0f64,
            eta in 0.01..1.0f64,
            mu in 0.0..1.0f64,
            lj_db in 0.0..40.0f64,
        ) {
            let det = PhotonCountingDetector::new(eta, 50e-9, 0.0).unwrap();
            let pr = PowerW::new(10f64.powf(pr_exp)).unwrap();
            let p = detected_power(pr, &det, mu, DecibelLoss::new(lj_db).unwrap());
            prop_assert!(p.watts() <= pr.watts());
        }
    }
}
