//! Planet catalog, mission parameter presets, configuration ingestion, and
//! sweep orchestration.
//!
//! A [`MissionPreset`] is the flat record of every link parameter the
//! pipeline needs, loadable from a line-oriented `key = value` file. The
//! sweep runs the full chain — link budget, noise, detection, capacity —
//! over a distance/diameter/order/slot grid and emits one row per
//! combination in deterministic grid order.

use crate::capacity::{ppm_pc_capacity, CapacityReport, OperatingPoint, PowerTap, Regime};
use crate::detector::{
    blocking_loss, detected_power, jitter_loss, jitter_psi, DetectorError, FluxPair,
    PhotonCountingDetector,
};
use crate::link_budget::{
    received_power, LinkBudgetError, LinkScenario, PathEnvironment, PointingLossMode, Terminal,
};
use crate::noise::{
    background_power, noise_power, BackgroundEnvironment, DetectorNoiseParams, NoiseError,
    ReceiverOptics,
};
use crate::ppm::{PpmConfig, PpmError, PpmOrder};
use crate::quantities::{
    photon_energy, DecibelLoss, LengthM, PhotonEnergyJ, PowerW, QuantityError, SPEED_OF_LIGHT_M_S,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    LinkBudget(#[from] LinkBudgetError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Ppm(#[from] PpmError),
    #[error("aperture and power must be positive for the figure of merit")]
    DegenerateFigureOfMerit,
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    MalformedConfigLine { line: usize, text: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownConfigKey { line: usize, key: String },
    #[error("config line {line}: cannot parse `{value}` for key `{key}`")]
    InvalidConfigValue { line: usize, key: String, value: String },
}

/// Night-sky background radiance, W/m²/sr/µm. The daytime value for the
/// same band is the preset default of 85.
pub const NIGHT_SKY_RADIANCE: f64 = 1e-5;

// ---------------------------------------------------------------------------
// Planet catalog
// ---------------------------------------------------------------------------

/// Which of a body's stored distances a command used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Min,
    Avg,
    Max,
}

impl DistanceKind {
    pub fn label(self) -> &'static str {
        match self {
            DistanceKind::Min => "min",
            DistanceKind::Avg => "avg",
            DistanceKind::Max => "max",
        }
    }
}

/// One body in the catalog with its Earth-range envelope and the reference
/// received power used by the published capacity table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetEntry {
    pub name: &'static str,
    pub min_distance: LengthM,
    pub avg_distance: LengthM,
    pub max_distance: LengthM,
    pub reference_received_power: PowerW,
}

impl PlanetEntry {
    pub fn distance(&self, kind: DistanceKind) -> LengthM {
        match kind {
            DistanceKind::Min => self.min_distance,
            DistanceKind::Avg => self.avg_distance,
            DistanceKind::Max => self.max_distance,
        }
    }
}

/// The six bodies of the capacity table. Only Mars carries a distinct
/// min/avg/max envelope (0.36 AU closest approach, 225e6 km average,
/// 401e6 km at the far conjunction figure used for beam-spread studies; a
/// 410e6 km variant of the same figure circulates, the catalog keeps 401).
pub fn planet_catalog() -> Vec<PlanetEntry> {
    let entry = |name, min_m: f64, avg_m: f64, max_m: f64, pr: f64| PlanetEntry {
        name,
        min_distance: LengthM::new(min_m).expect("catalog distance"),
        avg_distance: LengthM::new(avg_m).expect("catalog distance"),
        max_distance: LengthM::new(max_m).expect("catalog distance"),
        reference_received_power: PowerW::new(pr).expect("catalog power"),
    };
    vec![
        entry("mercury", 58e9, 58e9, 58e9, 5.1856e-12),
        entry("mars", 5.38552e10, 225e9, 4.01e11, 4.5053e-12),
        entry("jupiter", 778e9, 778e9, 778e9, 1.7741e-12),
        entry("saturn", 1.2e12, 1.2e12, 1.2e12, 9.2772e-13),
        entry("neptune", 4.5e12, 4.5e12, 4.5e12, 7.8951e-14),
        entry("pluto", 5.9e12, 5.9e12, 5.9e12, 4.6219e-14),
    ]
}

/// One-way light travel time in seconds.
pub fn one_way_delay_s(distance: LengthM) -> f64 {
    distance.meters() / SPEED_OF_LIGHT_M_S
}

/// System-level figure of merit `10 · Dis² · R / (Dia · P)` with distance
/// in AU, rate in bits/s, aperture in meters, and power in watts.
pub fn figure_of_merit(
    distance_au: f64,
    rate_bps: f64,
    aperture_m: f64,
    power_w: f64,
) -> Result<f64, ScenarioError> {
    if !aperture_m.is_finite() || aperture_m <= 0.0 || !power_w.is_finite() || power_w <= 0.0 {
        return Err(ScenarioError::DegenerateFigureOfMerit);
    }
    Ok(10.0 * distance_au * distance_au * rate_bps / (aperture_m * power_w))
}

// ---------------------------------------------------------------------------
// Mission preset
// ---------------------------------------------------------------------------

/// Pointing-loss entry mode for the preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointingMode {
    Fixed,
    Computed,
}

/// Flat record of the Mars-link parameter set. Field names double as the
/// config-file keys; units are fixed per key (suffix) and never parsed from
/// the value.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionPreset {
    pub wavelength_nm: f64,
    pub range_m: f64,
    pub transmit_power_w: f64,
    pub transmitter_diameter_m: f64,
    pub transmitter_secondary_diameter_m: f64,
    pub transmitter_efficiency: f64,
    pub receiver_diameter_m: f64,
    pub receiver_secondary_aperture_m: f64,
    pub receiver_efficiency: f64,
    pub receiver_quantum_efficiency: f64,
    pub focal_length_m: f64,
    pub detector_diameter_m: f64,
    pub optical_filter_um: f64,
    pub atmospheric_transmittance: f64,
    pub scintillation_loss_db: f64,
    pub pointing_loss_db: f64,
    pub cirrus_loss_db: f64,
    pub link_margin_db: f64,
    pub pointing_mode: PointingMode,
    pub pointing_rms_error_urad: f64,
    pub probability_level: f64,
    pub modulation_order: u32,
    pub slot_time_ns: f64,
    pub coding_ratio: f64,
    pub coding_efficiency: f64,
    pub background_noise_reduction: f64,
    pub radiance_planets_sky: f64,
    pub planet_radiance: f64,
    pub stray_factor: f64,
    pub star_irradiance: f64,
    pub leakage_ratio: f64,
    pub detector_array: u32,
    pub detector_dark_rate: f64,
    pub blocking_time_ns: f64,
    pub jitter_time_ns: f64,
}

impl Default for MissionPreset {
    /// The Mars link analysis parameter set: 1550 nm, 0.22 m / 4 m
    /// apertures, 4 W transmit, photon-counting detector with 50 ns dead
    /// time, fixed 1.95 dB pointing loss.
    fn default() -> Self {
        Self {
            wavelength_nm: 1550.0,
            range_m: 225e9,
            transmit_power_w: 4.0,
            transmitter_diameter_m: 0.22,
            transmitter_secondary_diameter_m: 0.0,
            transmitter_efficiency: 0.6,
            receiver_diameter_m: 4.0,
            receiver_secondary_aperture_m: 0.0,
            receiver_efficiency: 0.4,
            receiver_quantum_efficiency: 0.5,
            focal_length_m: 16.0,
            detector_diameter_m: 30e-6,
            optical_filter_um: 0.2e-3,
            atmospheric_transmittance: 0.943,
            scintillation_loss_db: 0.01,
            pointing_loss_db: 1.95,
            cirrus_loss_db: 0.5,
            link_margin_db: 4.0,
            pointing_mode: PointingMode::Fixed,
            pointing_rms_error_urad: 0.7,
            probability_level: 1e-14,
            modulation_order: 16,
            slot_time_ns: 0.25,
            coding_ratio: 0.5,
            coding_efficiency: 0.8,
            background_noise_reduction: 0.5,
            radiance_planets_sky: 85.0,
            planet_radiance: 0.0,
            stray_factor: 0.0,
            star_irradiance: 0.0,
            leakage_ratio: 0.0,
            detector_array: 1,
            detector_dark_rate: 1e12,
            blocking_time_ns: 50.0,
            jitter_time_ns: 240.0,
        }
    }
}

impl MissionPreset {
    pub fn wavelength(&self) -> Result<LengthM, ScenarioError> {
        Ok(LengthM::new(self.wavelength_nm * 1e-9)?)
    }

    pub fn photon_energy(&self) -> Result<PhotonEnergyJ, ScenarioError> {
        Ok(photon_energy(self.wavelength()?)?)
    }

    pub fn ppm(&self) -> Result<PpmConfig, ScenarioError> {
        Ok(PpmConfig::new(
            PpmOrder::new(self.modulation_order)?,
            self.slot_time_ns * 1e-9,
            self.coding_ratio,
        )?)
    }

    fn transmitter(&self) -> Result<Terminal, ScenarioError> {
        Ok(Terminal::new(
            LengthM::new(self.transmitter_diameter_m)?,
            LengthM::new(self.transmitter_secondary_diameter_m)?,
            self.transmitter_efficiency,
        )?)
    }

    fn receiver(&self, diameter_m: f64) -> Result<Terminal, ScenarioError> {
        Ok(Terminal::new(
            LengthM::new(diameter_m)?,
            LengthM::new(self.receiver_secondary_aperture_m)?,
            self.receiver_efficiency,
        )?)
    }

    pub fn environment(&self) -> Result<PathEnvironment, ScenarioError> {
        let pointing = match self.pointing_mode {
            PointingMode::Fixed => PointingLossMode::FixedDb(DecibelLoss::new(self.pointing_loss_db)?),
            PointingMode::Computed => PointingLossMode::Computed {
                sigma_rad: self.pointing_rms_error_urad * 1e-6,
                p0: self.probability_level,
            },
        };
        Ok(PathEnvironment {
            atmospheric_transmittance: self.atmospheric_transmittance,
            cirrus_loss: DecibelLoss::new(self.cirrus_loss_db)?,
            scintillation_loss: DecibelLoss::new(self.scintillation_loss_db)?,
            pointing,
            link_margin: DecibelLoss::new(self.link_margin_db)?,
        })
    }

    /// Link scenario at an explicit range and receiver diameter.
    pub fn link_scenario_at(
        &self,
        range_m: f64,
        receiver_diameter_m: f64,
    ) -> Result<LinkScenario, ScenarioError> {
        Ok(LinkScenario {
            tx: self.transmitter()?,
            rx: self.receiver(receiver_diameter_m)?,
            env: self.environment()?,
            range: LengthM::new(range_m)?,
            wavelength: self.wavelength()?,
            tx_power: PowerW::new(self.transmit_power_w)?,
        })
    }

    /// Link scenario at the preset's own range and receiver diameter.
    pub fn link_scenario(&self) -> Result<LinkScenario, ScenarioError> {
        self.link_scenario_at(self.range_m, self.receiver_diameter_m)
    }

    pub fn background(&self) -> Result<BackgroundEnvironment, ScenarioError> {
        Ok(BackgroundEnvironment::new(
            self.radiance_planets_sky,
            self.planet_radiance,
            self.stray_factor,
            self.star_irradiance,
            self.optical_filter_um,
            self.background_noise_reduction,
        )?)
    }

    pub fn receiver_optics(&self, receiver_diameter_m: f64) -> Result<ReceiverOptics, ScenarioError> {
        Ok(ReceiverOptics::new(
            self.focal_length_m,
            self.detector_diameter_m,
            receiver_diameter_m,
            self.receiver_efficiency,
        )?)
    }

    pub fn detector_noise(&self) -> DetectorNoiseParams {
        DetectorNoiseParams {
            dark_rate_e_s_m2: self.detector_dark_rate,
            array_count: self.detector_array,
            leakage_ratio: self.leakage_ratio,
            quantum_efficiency: self.receiver_quantum_efficiency,
        }
    }

    pub fn detector(&self) -> Result<PhotonCountingDetector, ScenarioError> {
        Ok(PhotonCountingDetector::new(
            self.receiver_quantum_efficiency,
            self.blocking_time_ns * 1e-9,
            self.jitter_time_ns * 1e-9,
        )?)
    }

    /// Total detected noise power for a given receiver diameter and
    /// pre-detector received power.
    pub fn noise_power_at(
        &self,
        receiver_diameter_m: f64,
        pr_ap: PowerW,
    ) -> Result<PowerW, ScenarioError> {
        let optics = self.receiver_optics(receiver_diameter_m)?;
        let pb = background_power(&self.background()?, &optics);
        Ok(noise_power(pb, &self.detector_noise(), &optics, self.photon_energy()?, pr_ap))
    }

    /// Resolved `key = value` lines in the fixed key order, suitable for
    /// echoing before results and for re-ingestion as a config file.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let f = |v: f64| format!("{v}");
        vec![
            ("wavelength_nm", f(self.wavelength_nm)),
            ("range_m", f(self.range_m)),
            ("transmit_power_w", f(self.transmit_power_w)),
            ("transmitter_diameter_m", f(self.transmitter_diameter_m)),
            ("transmitter_secondary_diameter_m", f(self.transmitter_secondary_diameter_m)),
            ("transmitter_efficiency", f(self.transmitter_efficiency)),
            ("receiver_diameter_m", f(self.receiver_diameter_m)),
            ("receiver_secondary_aperture_m", f(self.receiver_secondary_aperture_m)),
            ("receiver_efficiency", f(self.receiver_efficiency)),
            ("receiver_quantum_efficiency", f(self.receiver_quantum_efficiency)),
            ("focal_length_m", f(self.focal_length_m)),
            ("detector_diameter_m", f(self.detector_diameter_m)),
            ("optical_filter_um", f(self.optical_filter_um)),
            ("atmospheric_transmittance", f(self.atmospheric_transmittance)),
            ("scintillation_loss_db", f(self.scintillation_loss_db)),
            ("pointing_loss_db", f(self.pointing_loss_db)),
            ("cirrus_loss_db", f(self.cirrus_loss_db)),
            ("link_margin_db", f(self.link_margin_db)),
            (
                "pointing_mode",
                match self.pointing_mode {
                    PointingMode::Fixed => "fixed".to_string(),
                    PointingMode::Computed => "computed".to_string(),
                },
            ),
            ("pointing_rms_error_urad", f(self.pointing_rms_error_urad)),
            ("probability_level", f(self.probability_level)),
            ("modulation_order", format!("{}", self.modulation_order)),
            ("slot_time_ns", f(self.slot_time_ns)),
            ("coding_ratio", f(self.coding_ratio)),
            ("coding_efficiency", f(self.coding_efficiency)),
            ("background_noise_reduction", f(self.background_noise_reduction)),
            ("radiance_planets_sky", f(self.radiance_planets_sky)),
            ("planet_radiance", f(self.planet_radiance)),
            ("stray_factor", f(self.stray_factor)),
            ("star_irradiance", f(self.star_irradiance)),
            ("leakage_ratio", f(self.leakage_ratio)),
            ("detector_array", format!("{}", self.detector_array)),
            ("detector_dark_rate", f(self.detector_dark_rate)),
            ("blocking_time_ns", f(self.blocking_time_ns)),
            ("jitter_time_ns", f(self.jitter_time_ns)),
        ]
    }

    /// Overlay `key = value` lines onto this preset. Lines are trimmed,
    /// `#` starts a comment, blank lines are skipped, and unknown keys are
    /// rejected.
    pub fn apply_config(&mut self, text: &str) -> Result<(), ScenarioError> {
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = match raw.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ScenarioError::MalformedConfigLine { line: line_no, text: raw.to_string() }
            })?;
            self.set(key.trim(), value.trim(), line_no)?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ScenarioError> {
        let bad_value = || ScenarioError::InvalidConfigValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        macro_rules! parse_f64 {
            ($field:ident) => {{
                self.$field = value.parse::<f64>().map_err(|_| bad_value())?;
                Ok(())
            }};
        }
        match key {
            "wavelength_nm" => parse_f64!(wavelength_nm),
            "range_m" => parse_f64!(range_m),
            "transmit_power_w" => parse_f64!(transmit_power_w),
            "transmitter_diameter_m" => parse_f64!(transmitter_diameter_m),
            "transmitter_secondary_diameter_m" => parse_f64!(transmitter_secondary_diameter_m),
            "transmitter_efficiency" => parse_f64!(transmitter_efficiency),
            "receiver_diameter_m" => parse_f64!(receiver_diameter_m),
            "receiver_secondary_aperture_m" => parse_f64!(receiver_secondary_aperture_m),
            "receiver_efficiency" => parse_f64!(receiver_efficiency),
            "receiver_quantum_efficiency" => parse_f64!(receiver_quantum_efficiency),
            "focal_length_m" => parse_f64!(focal_length_m),
            "detector_diameter_m" => parse_f64!(detector_diameter_m),
            "optical_filter_um" => parse_f64!(optical_filter_um),
            "atmospheric_transmittance" => parse_f64!(atmospheric_transmittance),
            "scintillation_loss_db" => parse_f64!(scintillation_loss_db),
            "pointing_loss_db" => parse_f64!(pointing_loss_db),
            "cirrus_loss_db" => parse_f64!(cirrus_loss_db),
            "link_margin_db" => parse_f64!(link_margin_db),
            "pointing_mode" => {
                self.pointing_mode = match value {
                    "fixed" => PointingMode::Fixed,
                    "computed" => PointingMode::Computed,
                    _ => return Err(bad_value()),
                };
                Ok(())
            }
            "pointing_rms_error_urad" => parse_f64!(pointing_rms_error_urad),
            "probability_level" => parse_f64!(probability_level),
            "modulation_order" => {
                self.modulation_order = value.parse::<u32>().map_err(|_| bad_value())?;
                Ok(())
            }
            "slot_time_ns" => parse_f64!(slot_time_ns),
            "coding_ratio" => parse_f64!(coding_ratio),
            "coding_efficiency" => parse_f64!(coding_efficiency),
            "background_noise_reduction" => parse_f64!(background_noise_reduction),
            "radiance_planets_sky" => parse_f64!(radiance_planets_sky),
            "planet_radiance" => parse_f64!(planet_radiance),
            "stray_factor" => parse_f64!(stray_factor),
            "star_irradiance" => parse_f64!(star_irradiance),
            "leakage_ratio" => parse_f64!(leakage_ratio),
            "detector_array" => {
                self.detector_array = value.parse::<u32>().map_err(|_| bad_value())?;
                Ok(())
            }
            "detector_dark_rate" => parse_f64!(detector_dark_rate),
            "blocking_time_ns" => parse_f64!(blocking_time_ns),
            "jitter_time_ns" => parse_f64!(jitter_time_ns),
            _ => Err(ScenarioError::UnknownConfigKey { line, key: key.to_string() }),
        }
    }
}

/// Parse a standalone config file into a preset (defaults + overrides).
pub fn parse_config(text: &str) -> Result<MissionPreset, ScenarioError> {
    let mut preset = MissionPreset::default();
    preset.apply_config(text)?;
    Ok(preset)
}

// ---------------------------------------------------------------------------
// Sweeps and tables
// ---------------------------------------------------------------------------

/// One capacity-versus-distance grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub distance_m: f64,
    pub receiver_diameter_m: f64,
    pub order: PpmOrder,
    pub slot_time_s: f64,
    /// The power handed to the capacity formula (at the configured tap).
    pub pr_w: f64,
    pub pn_w: f64,
    pub capacity_bps: f64,
    pub regime: Regime,
}

/// Run the full pipeline over the cartesian grid
/// `distances × diameters × orders × slots` and return rows in that
/// deterministic nesting order. Rows are computed in parallel.
///
/// `tap` selects which power the capacity formula consumes: the published
/// planet-table analyses use the pre-detector power, an end-to-end
/// throughput estimate uses the detected power.
pub fn capacity_vs_distance_sweep(
    preset: &MissionPreset,
    distances_m: &[f64],
    diameters_m: &[f64],
    orders: &[PpmOrder],
    slots_s: &[f64],
    tap: PowerTap,
) -> Result<Vec<SweepRow>, ScenarioError> {
    let mut grid = Vec::new();
    for &distance in distances_m {
        for &diameter in diameters_m {
            for &order in orders {
                for &slot in slots_s {
                    grid.push((distance, diameter, order, slot));
                }
            }
        }
    }
    grid.par_iter()
        .map(|&(distance, diameter, order, slot)| sweep_row(preset, distance, diameter, order, slot, tap))
        .collect()
}

fn sweep_row(
    preset: &MissionPreset,
    distance_m: f64,
    diameter_m: f64,
    order: PpmOrder,
    slot_s: f64,
    tap: PowerTap,
) -> Result<SweepRow, ScenarioError> {
    let e = preset.photon_energy()?;
    let scenario = preset.link_scenario_at(distance_m, diameter_m)?;
    let pr_ap = received_power(&scenario)?.received_power;
    let pn = preset.noise_power_at(diameter_m, pr_ap)?;

    let pr_tapped = match tap {
        PowerTap::PreDetector => pr_ap,
        PowerTap::Detected => {
            let det = preset.detector()?;
            let flux = FluxPair::from_powers(pr_ap, pn, det.quantum_efficiency, e)?;
            let mu = blocking_loss(&flux, det.dead_time_s);
            let psi = jitter_psi(det.jitter_sigma_s, slot_s, preset.coding_ratio, order);
            let lj = jitter_loss(psi, &det.jitter_polynomial);
            detected_power(pr_ap, &det, mu, lj)
        }
    };

    let report = capacity_report(pr_tapped, pn, e, order, slot_s, tap)?;
    Ok(SweepRow {
        distance_m,
        receiver_diameter_m: diameter_m,
        order,
        slot_time_s: slot_s,
        pr_w: pr_tapped.watts(),
        pn_w: pn.watts(),
        capacity_bps: report.capacity_bps,
        regime: report.regime,
    })
}

fn capacity_report(
    pr: PowerW,
    pn: PowerW,
    e: PhotonEnergyJ,
    order: PpmOrder,
    slot_s: f64,
    tap: PowerTap,
) -> Result<CapacityReport, ScenarioError> {
    let op = OperatingPoint {
        received_power: pr,
        noise_power: pn,
        photon_energy: e,
        ppm: PpmConfig::uncoded(order, slot_s)?,
        power_tap: tap,
    };
    Ok(ppm_pc_capacity(&op))
}

/// One row of the planet capacity table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanetRow {
    pub name: &'static str,
    pub distance_m: f64,
    pub received_power_w: f64,
    pub capacity_bps: f64,
    pub delay_s: f64,
}

/// Reproduce the planet capacity table: feed each body's reference received
/// power into the capacity formula at a fixed noise power, order, and slot
/// time, and annotate the one-way delay at the body's average distance.
pub fn planets_table(
    entries: &[PlanetEntry],
    pn: PowerW,
    order: PpmOrder,
    slot_s: f64,
    wavelength: LengthM,
) -> Result<Vec<PlanetRow>, ScenarioError> {
    let e = photon_energy(wavelength)?;
    entries
        .iter()
        .map(|entry| {
            let report = capacity_report(
                entry.reference_received_power,
                pn,
                e,
                order,
                slot_s,
                PowerTap::PreDetector,
            )?;
            Ok(PlanetRow {
                name: entry.name,
                distance_m: entry.avg_distance.meters(),
                received_power_w: entry.reference_received_power.watts(),
                capacity_bps: report.capacity_bps,
                delay_s: one_way_delay_s(entry.avg_distance),
            })
        })
        .collect()
}

/// Logarithmically spaced grid between two positive endpoints, inclusive.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    assert!(start > 0.0 && stop > start && points >= 2);
    let ratio = (stop / start).powf(1.0 / (points - 1) as f64);
    (0..points)
        .map(|i| {
            if i == points - 1 {
                stop
            } else {
                start * ratio.powi(i as i32)
            }
        })
        .collect()
}
