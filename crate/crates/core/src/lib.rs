//! Near-field two-slit atom interference with a scattered photon.
//!
//! The atom passes a double slit of separation `d = 1` and width `a` and is
//! detected on a screen at distance `L`. A photon of wavelength `lambda`
//! scatters off it on the way. Depending on how (and whether) the photon is
//! measured, the atom pattern ranges from full two-slit fringes to the sum
//! of two single-slit patterns.
//!
//! Units: `d = 1`, `hbar = 1`.

pub mod apparatus;
pub mod entanglement;
pub mod error;
pub mod patterns;
pub mod photon_modes;
pub mod quadrature;
pub mod semiclassical;

pub use apparatus::{
    default_grid, full_grid, validate, validate_with, ApparatusConfig, ConfigFile, DetectorGrid, RegimeOverride,
    ValidatedConfig,
};
pub use error::{Error, QuadratureError, Result};
pub use patterns::{AtomPattern, JointPattern, NoPhotonPatterns, QuadratureSettings, SlitField};
pub use photon_modes::{OverlapAmplitude, PhotonMode, Side, SincLens};
