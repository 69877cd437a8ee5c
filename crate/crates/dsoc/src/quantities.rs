//! Physical quantity value types and unit conversions shared by every other
//! module.
//!
//! Only the quantities this crate actually needs are modeled; this is not a
//! general units framework. All values are stored in SI base units and the
//! types are small `Copy` newtypes, freely shareable across threads.

use thiserror::Error;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Planck constant, J·s (exact, 2019 SI).
pub const PLANCK_CONSTANT_J_S: f64 = 6.626_070_15e-34;

/// One astronomical unit in meters.
pub const ASTRONOMICAL_UNIT_M: f64 = 149_597_870_700.0;

/// Validation failure for a physical quantity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantityError {
    #[error("power must be finite and non-negative, got {0}")]
    InvalidPower(f64),
    #[error("length must be finite and non-negative, got {0}")]
    InvalidLength(f64),
    #[error("decibel value must be finite, got {0}")]
    InvalidDecibel(f64),
    #[error("wavelength must be positive, got {0} m")]
    NonPositiveWavelength(f64),
}

/// Optical power in watts. Non-negative and finite by construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerW(f64);

impl PowerW {
    pub fn new(watts: f64) -> Result<Self, QuantityError> {
        if !watts.is_finite() || watts < 0.0 {
            return Err(QuantityError::InvalidPower(watts));
        }
        Ok(Self(watts))
    }

    pub fn watts(self) -> f64 {
        self.0
    }

    /// Power relative to 1 W, in dB. Returns `-inf` for zero power.
    pub fn dbw(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// A loss (or gain gap) expressed in decibels. Positive values attenuate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DecibelLoss(f64);

impl DecibelLoss {
    pub fn new(db: f64) -> Result<Self, QuantityError> {
        if !db.is_finite() {
            return Err(QuantityError::InvalidDecibel(db));
        }
        Ok(Self(db))
    }

    /// Express a linear transmission factor in (0, 1] as a dB loss.
    pub fn from_linear_factor(factor: f64) -> Result<Self, QuantityError> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(QuantityError::InvalidDecibel(factor));
        }
        Ok(Self(linear_to_db(factor)))
    }

    pub fn db(self) -> f64 {
        self.0
    }

    /// The multiplicative transmission factor, `10^(-dB/10)`.
    pub fn linear_factor(self) -> f64 {
        db_to_linear(self.0)
    }
}

/// A length in meters, non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LengthM(f64);

impl LengthM {
    pub fn new(meters: f64) -> Result<Self, QuantityError> {
        if !meters.is_finite() || meters < 0.0 {
            return Err(QuantityError::InvalidLength(meters));
        }
        Ok(Self(meters))
    }

    pub fn from_au(au: f64) -> Result<Self, QuantityError> {
        Self::new(au * ASTRONOMICAL_UNIT_M)
    }

    pub fn meters(self) -> f64 {
        self.0
    }

    pub fn as_au(self) -> f64 {
        self.0 / ASTRONOMICAL_UNIT_M
    }
}

/// Energy of a single photon at the scenario wavelength, joules.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PhotonEnergyJ(f64);

impl PhotonEnergyJ {
    pub fn joules(self) -> f64 {
        self.0
    }
}

/// Convert an attenuation in dB to the linear transmission factor
/// `10^(-dB/10)`. Inverse of [`linear_to_db`].
pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(-db / 10.0)
}

/// Convert a linear transmission factor to an attenuation in dB.
pub fn linear_to_db(factor: f64) -> f64 {
    -10.0 * factor.log10()
}

/// Photon energy `h·c/λ` for a signal wavelength.
pub fn photon_energy(wavelength: LengthM) -> Result<PhotonEnergyJ, QuantityError> {
    let lambda = wavelength.meters();
    if lambda <= 0.0 {
        return Err(QuantityError::NonPositiveWavelength(lambda));
    }
    Ok(PhotonEnergyJ(PLANCK_CONSTANT_J_S * SPEED_OF_LIGHT_M_S / lambda))
}
