//! Detected noise power: diffuse background radiance, point-source
//! irradiance, dark counts, and transmitter leakage.
//!
//! Radiances are spectral (per µm), so the optical filter bandwidth
//! multiplies both the extended-source and star terms; the dark-count term
//! converts an electron rate per detector area into watts through the
//! photon energy.

use crate::quantities::{PhotonEnergyJ, PowerW};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("radiance and irradiance values must be non-negative, got {0}")]
    InvalidRadiance(f64),
    #[error("filter width must be positive, got {0} um")]
    InvalidFilterWidth(f64),
    #[error("background reduction must lie in (0, 1], got {0}")]
    InvalidReduction(f64),
    #[error("focal length must be positive, got {0} m")]
    InvalidFocalLength(f64),
    #[error("detector diameter must be positive, got {0} m")]
    InvalidDetectorDiameter(f64),
    #[error("detector half-angle d/F must stay below pi, got {0}")]
    FieldOfViewOutOfRange(f64),
}

/// Diffuse and point-source background seen by the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundEnvironment {
    /// Sky radiance, W/m²/sr/µm.
    pub sky_radiance: f64,
    /// Planet radiance in the field of view, W/m²/sr/µm.
    pub planet_radiance: f64,
    /// Dimensionless stray-light multiplier on the planet term.
    pub stray_factor: f64,
    /// Star irradiance, W/m²/µm.
    pub star_irradiance: f64,
    /// Bandpass optical filter width, µm.
    pub filter_width_um: f64,
    /// Multiplicative background suppression in (0, 1].
    pub background_reduction: f64,
}

impl BackgroundEnvironment {
    pub fn new(
        sky_radiance: f64,
        planet_radiance: f64,
        stray_factor: f64,
        star_irradiance: f64,
        filter_width_um: f64,
        background_reduction: f64,
    ) -> Result<Self, NoiseError> {
        for &v in &[sky_radiance, planet_radiance, stray_factor, star_irradiance] {
            if !v.is_finite() || v < 0.0 {
                return Err(NoiseError::InvalidRadiance(v));
            }
        }
        if !filter_width_um.is_finite() || filter_width_um <= 0.0 {
            return Err(NoiseError::InvalidFilterWidth(filter_width_um));
        }
        if !background_reduction.is_finite()
            || background_reduction <= 0.0
            || background_reduction > 1.0
        {
            return Err(NoiseError::InvalidReduction(background_reduction));
        }
        Ok(Self {
            sky_radiance,
            planet_radiance,
            stray_factor,
            star_irradiance,
            filter_width_um,
            background_reduction,
        })
    }
}

/// Receiver-side optics feeding the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverOptics {
    focal_length_m: f64,
    detector_diameter_m: f64,
    receiver_area_m2: f64,
    receiver_efficiency: f64,
}

impl ReceiverOptics {
    /// `receiver_diameter_m` is the primary aperture diameter; the collecting
    /// area is derived from it.
    pub fn new(
        focal_length_m: f64,
        detector_diameter_m: f64,
        receiver_diameter_m: f64,
        receiver_efficiency: f64,
    ) -> Result<Self, NoiseError> {
        if !focal_length_m.is_finite() || focal_length_m <= 0.0 {
            return Err(NoiseError::InvalidFocalLength(focal_length_m));
        }
        if !detector_diameter_m.is_finite() || detector_diameter_m <= 0.0 {
            return Err(NoiseError::InvalidDetectorDiameter(detector_diameter_m));
        }
        let half_angle = detector_diameter_m / focal_length_m;
        if half_angle >= std::f64::consts::PI {
            return Err(NoiseError::FieldOfViewOutOfRange(half_angle));
        }
        Ok(Self {
            focal_length_m,
            detector_diameter_m,
            receiver_area_m2: std::f64::consts::PI * (receiver_diameter_m / 2.0).powi(2),
            receiver_efficiency,
        })
    }

    pub fn focal_length_m(&self) -> f64 {
        self.focal_length_m
    }

    pub fn detector_diameter_m(&self) -> f64 {
        self.detector_diameter_m
    }

    pub fn receiver_area_m2(&self) -> f64 {
        self.receiver_area_m2
    }

    pub fn receiver_efficiency(&self) -> f64 {
        self.receiver_efficiency
    }
}

/// Detector-side noise parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorNoiseParams {
    /// Dark rate, electrons/s/m² of detector area.
    pub dark_rate_e_s_m2: f64,
    /// Number of detectors in the array.
    pub array_count: u32,
    /// Fraction of pre-detector received power leaking into the noise path.
    pub leakage_ratio: f64,
    /// Detector quantum efficiency in (0, 1].
    pub quantum_efficiency: f64,
}

/// Solid angle seen by the detector through the telescope,
/// `Ω_fov = 2π(1 - cos(d_detector / F_length))` steradians.
///
/// Evaluated as `4π·sin²(θ/2)`, which is exact for the µrad-scale detector
/// half-angles where the naive `1 - cos θ` form loses most of its digits.
pub fn field_of_view_sr(optics: &ReceiverOptics) -> f64 {
    let half = optics.detector_diameter_m / optics.focal_length_m / 2.0;
    4.0 * std::f64::consts::PI * half.sin().powi(2)
}

/// Background power collected per detector:
///
/// ```text
/// P_b = [ Ω_fov·η_r·A_r·(H_sky + H_planet·H_stray) + N_star·η_r·A_r ] · B_f
/// ```
///
/// scaled by the background-reduction factor. The filter width multiplies
/// the extended-source term as well as the star term: the radiances are
/// spectral densities, so the bandwidth factor is dimensionally required
/// on both.
pub fn background_power(env: &BackgroundEnvironment, optics: &ReceiverOptics) -> PowerW {
    let fov = field_of_view_sr(optics);
    let eta_a = optics.receiver_efficiency * optics.receiver_area_m2;
    let extended = fov * eta_a * (env.sky_radiance + env.planet_radiance * env.stray_factor);
    let point = env.star_irradiance * eta_a;
    let watts = (extended + point) * env.filter_width_um * env.background_reduction;
    PowerW::new(watts).expect("background power is non-negative")
}

/// Total detected noise power:
///
/// ```text
/// P_n = η_det·P_b·K_array + d²·i_d·E·K_array + η_leakage·P_r,ap·η_det
/// ```
pub fn noise_power(
    background: PowerW,
    noise: &DetectorNoiseParams,
    optics: &ReceiverOptics,
    photon_energy: PhotonEnergyJ,
    pr_ap: PowerW,
) -> PowerW {
    let k = f64::from(noise.array_count);
    let background_term = noise.quantum_efficiency * background.watts() * k;
    let dark_term =
        optics.detector_diameter_m.powi(2) * noise.dark_rate_e_s_m2 * photon_energy.joules() * k;
    let leakage_term = noise.leakage_ratio * pr_ap.watts() * noise.quantum_efficiency;
    PowerW::new(background_term + dark_term + leakage_term).expect("noise power is non-negative")
}
