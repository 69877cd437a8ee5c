//! Laguerre-Gaussian beam propagation and orbital-angular-momentum mode
//! accounting.
//!
//! An LG mode with azimuthal index `l` carries a helical phase `e^(ilφ)`
//! and, for `p = 0`, a ring ("donut") intensity profile whose radius grows
//! with `|l|`. Over interplanetary distances the beam is deep in the far
//! field, `w(z) ≈ w0·z/z_R`, so the ring diameter at the receiver ends up
//! hundreds of kilometers wide — the geometry that motivates partial-
//! aperture reception studies.
//!
//! Mode modulation sends one mode per symbol and encodes extra bits in the
//! choice of mode: `log2(N)` additional bits per symbol for `N` modes.

use crate::quantities::LengthM;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OamError {
    #[error("beam waist must be positive, got {0} m")]
    NonPositiveWaist(f64),
    #[error("wavelength must be positive, got {0} m")]
    NonPositiveWavelength(f64),
    #[error("ring radius is only defined for p = 0, got p = {0}")]
    MultiRingMode(u32),
    #[error("mode count must be a power of two >= 1, got {0}")]
    InvalidModeCount(u32),
    #[error("sample count must be at least 2, got {0}")]
    TooFewSamples(usize),
}

/// A Laguerre-Gaussian mode: azimuthal index `l` (sign is twist direction),
/// radial index `p`, waist, and wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgBeamSpec {
    pub azimuthal_index: i32,
    pub radial_index: u32,
    pub waist_m: f64,
    pub wavelength: LengthM,
}

impl LgBeamSpec {
    pub fn new(
        azimuthal_index: i32,
        radial_index: u32,
        waist_m: f64,
        wavelength: LengthM,
    ) -> Result<Self, OamError> {
        if !waist_m.is_finite() || waist_m <= 0.0 {
            return Err(OamError::NonPositiveWaist(waist_m));
        }
        if wavelength.meters() <= 0.0 {
            return Err(OamError::NonPositiveWavelength(wavelength.meters()));
        }
        Ok(Self { azimuthal_index, radial_index, waist_m, wavelength })
    }

    /// Rayleigh range `z_R = π·w0²/λ`, the distance over which the beam
    /// cross-section doubles.
    pub fn rayleigh_range_m(&self) -> f64 {
        std::f64::consts::PI * self.waist_m * self.waist_m / self.wavelength.meters()
    }

    /// Wavenumber `k = 2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength.meters()
    }

    fn abs_l(&self) -> u32 {
        self.azimuthal_index.unsigned_abs()
    }
}

/// Beam radius `w(z) = w0·sqrt(1 + z²/z_R²)`.
pub fn beam_radius_m(spec: &LgBeamSpec, z_m: f64) -> f64 {
    debug_assert!(z_m >= 0.0);
    let zr = spec.rayleigh_range_m();
    spec.waist_m * (1.0 + (z_m / zr).powi(2)).sqrt()
}

/// Generalized Laguerre polynomial `L_p^alpha(x)` by the three-term
/// recurrence `(k+1)·L_{k+1} = (2k+1+alpha-x)·L_k - (k+alpha)·L_{k-1}`.
pub fn laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    match p {
        0 => 1.0,
        _ => {
            let mut prev = 1.0;
            let mut current = 1.0 + alpha - x;
            for k in 1..p {
                let kf = f64::from(k);
                let next =
                    ((2.0 * kf + 1.0 + alpha - x) * current - (kf + alpha) * prev) / (kf + 1.0);
                prev = current;
                current = next;
            }
            current
        }
    }
}

/// Normalization constant giving each mode unit total power,
/// `C = sqrt(2·p! / (π·(p+|l|)!))`.
pub fn normalization_constant(l: i32, p: u32) -> f64 {
    let abs_l = l.unsigned_abs();
    // p!/(p+|l|)! without forming either factorial
    let mut ratio = 1.0;
    for k in (p + 1)..=(p + abs_l) {
        ratio /= f64::from(k);
    }
    (2.0 * ratio / std::f64::consts::PI).sqrt()
}

/// Complex field amplitude of the LG mode at cylindrical coordinates
/// `(r, φ, z)`:
///
/// ```text
/// E = C/w(z) · (√2·r/w)^|l| · e^(-r²/w²) · L_p^|l|(2r²/w²)
///       · exp(-i·k·r²·z/(2(z²+z_R²)) + i·l·φ + i·(2p+|l|+1)·arctan(z/z_R))
/// ```
pub fn lg_field(spec: &LgBeamSpec, r_m: f64, phi_rad: f64, z_m: f64) -> Complex64 {
    debug_assert!(r_m >= 0.0);
    let w = beam_radius_m(spec, z_m);
    let zr = spec.rayleigh_range_m();
    let abs_l = f64::from(spec.abs_l());
    let u = 2.0 * r_m * r_m / (w * w);

    let amplitude = normalization_constant(spec.azimuthal_index, spec.radial_index) / w
        * (std::f64::consts::SQRT_2 * r_m / w).powf(abs_l)
        * (-r_m * r_m / (w * w)).exp()
        * laguerre(spec.radial_index, abs_l, u);

    let curvature = -spec.wavenumber() * r_m * r_m * z_m / (2.0 * (z_m * z_m + zr * zr));
    let helical = f64::from(spec.azimuthal_index) * phi_rad;
    let gouy = (2.0 * f64::from(spec.radial_index) + abs_l + 1.0) * (z_m / zr).atan();

    amplitude * Complex64::new(0.0, curvature + helical + gouy).exp()
}

/// Radius of peak intensity of a single-ring (`p = 0`) mode,
/// `r_peak = w(z)·sqrt(|l|/2)`. Zero for the fundamental `l = 0` mode.
pub fn ring_radius_m(spec: &LgBeamSpec, z_m: f64) -> Result<f64, OamError> {
    if spec.radial_index != 0 {
        return Err(OamError::MultiRingMode(spec.radial_index));
    }
    Ok(beam_radius_m(spec, z_m) * (f64::from(spec.abs_l()) / 2.0).sqrt())
}

/// Radial intensity profile sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamProfile {
    pub distance_m: f64,
    pub radius_at_z_m: f64,
    /// Peak-intensity radius for `p = 0`; `None` for multi-ring modes.
    pub ring_radius_m: Option<f64>,
    /// `(r, |E|²)` pairs; radii are uniform from 0 to the sampled maximum.
    pub samples: Vec<(f64, f64)>,
}

impl BeamProfile {
    /// Radius of the sample with the largest intensity.
    pub fn peak_sample_radius_m(&self) -> f64 {
        self.samples
            .iter()
            .fold((0.0, f64::MIN), |best, &(r, i)| if i > best.1 { (r, i) } else { best })
            .0
    }

    /// Total beam power `∫ |E|²·2πr dr` by trapezoidal quadrature over the
    /// sampled radii.
    pub fn total_power(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|pair| {
                let (r0, i0) = pair[0];
                let (r1, i1) = pair[1];
                std::f64::consts::PI * (r1 - r0) * (r0 * i0 + r1 * i1)
            })
            .sum()
    }

    /// Samples rescaled so the peak intensity is 1, for plotting/CSV export.
    pub fn normalized_samples(&self) -> Vec<(f64, f64)> {
        let peak = self.samples.iter().map(|&(_, i)| i).fold(f64::MIN, f64::max);
        if peak <= 0.0 {
            return self.samples.clone();
        }
        self.samples.iter().map(|&(r, i)| (r, i / peak)).collect()
    }
}

/// Sample the radial intensity profile at propagation distance `z` on
/// `n_samples` radii from 0 to `r_max_waists · w(z)`. The grid scales with
/// the local beam radius, so profiles at different distances resolve the
/// beam equally well.
pub fn sample_profile(
    spec: &LgBeamSpec,
    z_m: f64,
    n_samples: usize,
    r_max_waists: f64,
) -> Result<BeamProfile, OamError> {
    if n_samples < 2 {
        return Err(OamError::TooFewSamples(n_samples));
    }
    let w = beam_radius_m(spec, z_m);
    let r_max = r_max_waists * w;
    let samples: Vec<(f64, f64)> = (0..n_samples)
        .map(|i| {
            let r = r_max * (i as f64) / ((n_samples - 1) as f64);
            (r, lg_field(spec, r, 0.0, z_m).norm_sqr())
        })
        .collect();
    let ring = if spec.radial_index == 0 { Some(ring_radius_m(spec, z_m)?) } else { None };
    Ok(BeamProfile { distance_m: z_m, radius_at_z_m: w, ring_radius_m: ring, samples })
}

/// A polar-raster sample `(r, φ, |E|², phase)` for 2-D beam-front exports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSample {
    pub r_m: f64,
    pub phi_rad: f64,
    pub intensity: f64,
    pub phase_rad: f64,
}

/// Sample the beam front on an `n_r × n_phi` polar grid out to
/// `r_max_waists · w(z)`.
pub fn polar_raster(
    spec: &LgBeamSpec,
    z_m: f64,
    n_r: usize,
    n_phi: usize,
    r_max_waists: f64,
) -> Result<Vec<RasterSample>, OamError> {
    if n_r < 2 || n_phi < 2 {
        return Err(OamError::TooFewSamples(n_r.min(n_phi)));
    }
    let w = beam_radius_m(spec, z_m);
    let r_max = r_max_waists * w;
    let mut out = Vec::with_capacity(n_r * n_phi);
    for i in 0..n_r {
        let r = r_max * (i as f64) / ((n_r - 1) as f64);
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * (j as f64) / (n_phi as f64);
            let field = lg_field(spec, r, phi, z_m);
            out.push(RasterSample {
                r_m: r,
                phi_rad: phi,
                intensity: field.norm_sqr(),
                phase_rad: field.arg(),
            });
        }
    }
    Ok(out)
}

/// Bits per symbol of mode modulation over `n_modes = 2^c` OAM modes
/// carrying an `M`-ary PPM payload: `log2(M) + log2(N)`.
pub fn mm_bits_per_symbol(n_modes: u32, order: crate::ppm::PpmOrder) -> Result<f64, OamError> {
    if n_modes == 0 || !n_modes.is_power_of_two() {
        return Err(OamError::InvalidModeCount(n_modes));
    }
    Ok(order.bits_per_symbol() + f64::from(n_modes.trailing_zeros()))
}

/// Spectral-efficiency multiplier of mode modulation relative to plain PPM,
/// `1 + log2(N)/log2(M)`.
pub fn mm_spectral_multiplier(n_modes: u32, order: crate::ppm::PpmOrder) -> Result<f64, OamError> {
    Ok(mm_bits_per_symbol(n_modes, order)? / order.bits_per_symbol())
}
