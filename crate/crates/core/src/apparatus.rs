//! Apparatus geometry, unit conventions, and detector grids.
//!
//! Every length is expressed in units of the slit separation `d`, which is
//! fixed to 1, and `hbar = 1`. The atom's longitudinal momentum is therefore
//! `p0 = 2 pi / lambda_dB` and the photon wavenumber `k = 2 pi / lambda`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slit separation. All other lengths are ratios to this one.
pub const SLIT_SEPARATION: f64 = 1.0;

/// Largest half-span a default grid covers, in units of `d`.
pub const MAX_HALF_SPAN: f64 = 6.0;

/// Minimum number of detector samples per fringe period.
pub const SAMPLES_PER_FRINGE: usize = 20;

/// Required ratio between the photon wavelength and the slit width, and
/// between the photon wavelength and the atom de Broglie wavelength.
pub const REGIME_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApparatusConfig {
    pub slit_width: f64,
    pub screen_distance: f64,
    pub photon_wavelength: f64,
    pub atom_de_broglie: f64,
}

impl Default for ApparatusConfig {
    /// `a = d/100`, `L = 10 d`, `lambda = d/10`, `lambda_dB = d/250`.
    fn default() -> Self {
        Self {
            slit_width: 0.01,
            screen_distance: 10.0,
            photon_wavelength: 0.1,
            atom_de_broglie: 0.004,
        }
    }
}

impl ApparatusConfig {
    /// Copy with a different photon wavelength.
    pub fn with_wavelength(mut self, photon_wavelength: f64) -> Self {
        self.photon_wavelength = photon_wavelength;
        self
    }

    /// Multiply every length by `factor`. Physics depends only on ratios to
    /// `d`, so this is used to check scale invariance.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            slit_width: self.slit_width * factor,
            screen_distance: self.screen_distance * factor,
            photon_wavelength: self.photon_wavelength * factor,
            atom_de_broglie: self.atom_de_broglie * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `lambda >= 10 a`: an atom in one slit is a point source of photons.
    PointSource,
    /// `lambda >= 10 lambda_dB`: recoil does not perturb the transit phase.
    HighMomentum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeViolation {
    pub constraint: Constraint,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for RegimeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constraint {
            Constraint::PointSource => write!(
                f,
                "point-source: photon_wavelength {} < {} x slit_width = {}",
                self.lhs, REGIME_RATIO, self.rhs
            ),
            Constraint::HighMomentum => write!(
                f,
                "high-momentum: photon_wavelength {} < {} x atom_de_broglie = {}",
                self.lhs, REGIME_RATIO, self.rhs
            ),
        }
    }
}

/// Which regime checks may be bypassed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeOverride {
    pub allow_violations: bool,
}

/// A configuration that passed [`validate`]. Immutable; cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedConfig {
    inner: ApparatusConfig,
}

pub fn validate(config: ApparatusConfig) -> Result<ValidatedConfig> {
    validate_with(config, RegimeOverride::default())
}

/// Positivity is always enforced. Regime violations are collected and
/// reported together unless `overrides` allows them.
pub fn validate_with(config: ApparatusConfig, overrides: RegimeOverride) -> Result<ValidatedConfig> {
    let positive = [
        ("slit_width", config.slit_width),
        ("screen_distance", config.screen_distance),
        ("photon_wavelength", config.photon_wavelength),
        ("atom_de_broglie", config.atom_de_broglie),
    ];
    for (name, value) in positive {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                value,
                reason: "must be finite and positive",
            });
        }
    }
    if config.slit_width >= SLIT_SEPARATION {
        return Err(Error::InvalidParameter {
            name: "slit_width",
            value: config.slit_width,
            reason: "slits overlap (width must be below the separation)",
        });
    }

    let mut violations = Vec::new();
    let point_source_rhs = REGIME_RATIO * config.slit_width;
    if config.photon_wavelength < point_source_rhs {
        violations.push(RegimeViolation {
            constraint: Constraint::PointSource,
            lhs: config.photon_wavelength,
            rhs: point_source_rhs,
        });
    }
    let high_momentum_rhs = REGIME_RATIO * config.atom_de_broglie;
    if config.photon_wavelength < high_momentum_rhs {
        violations.push(RegimeViolation {
            constraint: Constraint::HighMomentum,
            lhs: config.photon_wavelength,
            rhs: high_momentum_rhs,
        });
    }
    if !violations.is_empty() {
        if overrides.allow_violations {
            for v in &violations {
                log::warn!("regime check overridden: {v}");
            }
        } else {
            return Err(Error::Regime(violations));
        }
    }
    Ok(ValidatedConfig { inner: config })
}

impl ValidatedConfig {
    pub fn config(&self) -> &ApparatusConfig {
        &self.inner
    }

    /// Revalidate with a different photon wavelength.
    pub fn with_wavelength(&self, photon_wavelength: f64, overrides: RegimeOverride) -> Result<Self> {
        validate_with(self.inner.with_wavelength(photon_wavelength), overrides)
    }

    pub fn slit_separation(&self) -> f64 {
        SLIT_SEPARATION
    }

    pub fn slit_width(&self) -> f64 {
        self.inner.slit_width
    }

    pub fn screen_distance(&self) -> f64 {
        self.inner.screen_distance
    }

    pub fn photon_wavelength(&self) -> f64 {
        self.inner.photon_wavelength
    }

    pub fn atom_de_broglie(&self) -> f64 {
        self.inner.atom_de_broglie
    }

    /// Longitudinal atom momentum `p0 = 2 pi / lambda_dB`.
    pub fn atom_momentum(&self) -> f64 {
        2.0 * PI / self.inner.atom_de_broglie
    }

    /// Photon wavenumber `k = 2 pi / lambda`.
    pub fn photon_wavenumber(&self) -> f64 {
        2.0 * PI / self.inner.photon_wavelength
    }

    /// Two-slit fringe period at the detector, `lambda_dB L / d`.
    pub fn fringe_period(&self) -> f64 {
        self.inner.atom_de_broglie * self.inner.screen_distance / SLIT_SEPARATION
    }
}

/// Atom detector sample positions. Uniform, strictly increasing, and
/// mirror-symmetric about `x = 0`, which is always a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorGrid {
    positions: Vec<f64>,
    spacing: f64,
}

impl DetectorGrid {
    /// `points` samples (odd) covering `[-half_span, half_span]`. The spacing
    /// must resolve at least [`SAMPLES_PER_FRINGE`] samples per fringe.
    pub fn symmetric(config: &ValidatedConfig, half_span: f64, points: usize) -> Result<Self> {
        if !(half_span.is_finite() && half_span >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "grid_span",
                value: half_span,
                reason: "must be finite and non-negative",
            });
        }
        if points.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "grid_points",
                value: points as f64,
                reason: "must be odd so that x = 0 is sampled",
            });
        }
        if points == 1 || half_span == 0.0 {
            return Ok(Self::single_point());
        }
        let half = (points - 1) / 2;
        let spacing = half_span / half as f64;
        let max_spacing = config.fringe_period() / SAMPLES_PER_FRINGE as f64;
        if spacing > max_spacing * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter {
                name: "grid_points",
                value: points as f64,
                reason: "grid spacing exceeds 1/20 of the fringe period",
            });
        }
        Ok(Self::from_spacing(half, spacing))
    }

    fn single_point() -> Self {
        Self {
            positions: vec![0.0],
            spacing: 0.0,
        }
    }

    fn from_spacing(half: usize, spacing: f64) -> Self {
        let half = half as i64;
        let positions = (-half..=half).map(|i| i as f64 * spacing).collect();
        Self { positions, spacing }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn span(&self) -> (f64, f64) {
        (self.positions[0], self.positions[self.positions.len() - 1])
    }

    /// Index of the `x = 0` sample.
    pub fn center_index(&self) -> usize {
        self.positions.len() / 2
    }

    /// Same span at twice the sample density (`n -> 2n - 1`). Every original
    /// sample is reproduced exactly.
    pub fn refined(&self) -> Self {
        if self.positions.len() == 1 {
            return self.clone();
        }
        let half = (self.positions.len() - 1) / 2;
        Self::from_spacing(2 * half, self.spacing / 2.0)
    }
}

/// Grid covering `+-min(6 d, fringes_per_side x period)` with
/// [`SAMPLES_PER_FRINGE`] samples per fringe period.
pub fn default_grid(config: &ValidatedConfig, fringes_per_side: usize) -> DetectorGrid {
    let period = config.fringe_period();
    let spacing = period / SAMPLES_PER_FRINGE as f64;
    let requested = fringes_per_side as f64 * period;
    let half_span = requested.min(MAX_HALF_SPAN);
    if half_span <= 0.0 {
        return DetectorGrid::single_point();
    }
    let half = (half_span / spacing - 1e-9).ceil() as usize;
    DetectorGrid::from_spacing(half, spacing)
}

/// Grid spanning the full `+-6 d` detector range.
pub fn full_grid(config: &ValidatedConfig) -> DetectorGrid {
    default_grid(config, usize::MAX)
}

/// Contents of a `key = value` configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfigFile {
    pub apparatus: ApparatusConfig,
    /// Half-width of the detector grid in units of `d`.
    pub grid_span: Option<f64>,
    pub grid_points: Option<usize>,
}

impl ConfigFile {
    /// Resolve the detector grid: explicit settings if present, the full
    /// default grid otherwise.
    pub fn grid(&self, config: &ValidatedConfig) -> Result<DetectorGrid> {
        match (self.grid_span, self.grid_points) {
            (None, None) => Ok(full_grid(config)),
            (span, points) => {
                let half_span = span.unwrap_or(MAX_HALF_SPAN);
                let points = match points {
                    Some(p) => p,
                    None => {
                        let spacing = config.fringe_period() / SAMPLES_PER_FRINGE as f64;
                        2 * (half_span / spacing - 1e-9).ceil() as usize + 1
                    }
                };
                DetectorGrid::symmetric(config, half_span, points)
            }
        }
    }
}

impl FromStr for ConfigFile {
    type Err = Error;

    /// Lines are `key = value`; `#` starts a comment. Missing keys keep
    /// their defaults, unknown or repeated keys are errors.
    fn from_str(text: &str) -> Result<Self> {
        let mut out = ConfigFile::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::ConfigParse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(parse_err(format!("duplicate key `{key}`")));
            }
            let float = || {
                value
                    .parse::<f64>()
                    .map_err(|e| parse_err(format!("`{key}`: cannot parse `{value}`: {e}")))
            };
            match key {
                "slit_width" => out.apparatus.slit_width = float()?,
                "screen_distance" => out.apparatus.screen_distance = float()?,
                "photon_wavelength" => out.apparatus.photon_wavelength = float()?,
                "atom_de_broglie" => out.apparatus.atom_de_broglie = float()?,
                "grid_span" => out.grid_span = Some(float()?),
                "grid_points" => {
                    out.grid_points = Some(value.parse::<usize>().map_err(|e| {
                        parse_err(format!("`grid_points`: cannot parse `{value}`: {e}"))
                    })?)
                }
                other => return Err(parse_err(format!("unknown key `{other}`"))),
            }
            seen.push(key.to_string());
        }
        Ok(out)
    }
}

impl fmt::Display for ConfigFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.apparatus;
        writeln!(f, "slit_width = {}", a.slit_width)?;
        writeln!(f, "screen_distance = {}", a.screen_distance)?;
        writeln!(f, "photon_wavelength = {}", a.photon_wavelength)?;
        writeln!(f, "atom_de_broglie = {}", a.atom_de_broglie)?;
        if let Some(span) = self.grid_span {
            writeln!(f, "grid_span = {span}")?;
        }
        if let Some(points) = self.grid_points {
            writeln!(f, "grid_points = {points}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper() -> ValidatedConfig {
        validate(ApparatusConfig::default()).unwrap()
    }

    #[test]
    fn paper_defaults_are_valid() {
        let cfg = paper();
        assert_eq!(cfg.slit_width(), 0.01);
        assert_eq!(cfg.screen_distance(), 10.0);
        assert_eq!(cfg.photon_wavelength(), 0.1);
        assert!((cfg.fringe_period() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn point_source_violation_is_reported() {
        let cfg = ApparatusConfig {
            photon_wavelength: 0.02,
            atom_de_broglie: 0.001,
            ..Default::default()
        };
        match validate(cfg) {
            Err(Error::Regime(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].constraint, Constraint::PointSource);
                assert_eq!(v[0].lhs, 0.02);
                assert!((v[0].rhs - 0.1).abs() < 1e-15);
            }
            other => panic!("expected regime violation, got {other:?}"),
        }
    }

    #[test]
    fn high_momentum_violation_is_reported() {
        let cfg = ApparatusConfig {
            atom_de_broglie: 0.05,
            ..Default::default()
        };
        match validate(cfg) {
            Err(Error::Regime(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].constraint, Constraint::HighMomentum);
                assert!((v[0].rhs - 0.5).abs() < 1e-15);
            }
            other => panic!("expected regime violation, got {other:?}"),
        }
    }

    #[test]
    fn both_violations_listed_and_override_accepts() {
        let cfg = ApparatusConfig {
            photon_wavelength: 0.02,
            atom_de_broglie: 0.05,
            ..Default::default()
        };
        match validate(cfg) {
            Err(Error::Regime(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
        let ok = validate_with(cfg, RegimeOverride { allow_violations: true }).unwrap();
        // never clamped
        assert_eq!(ok.photon_wavelength(), 0.02);
    }

    #[test]
    fn non_positive_lengths_are_never_overridable() {
        let cfg = ApparatusConfig {
            slit_width: 0.0,
            ..Default::default()
        };
        let err = validate_with(cfg, RegimeOverride { allow_violations: true }).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "slit_width", .. }));
    }

    #[test]
    fn default_grid_resolves_fringes() {
        let cfg = paper();
        let grid = full_grid(&cfg);
        assert!(grid.spacing() <= cfg.fringe_period() / 20.0 + 1e-15);
        assert_eq!(grid.len(), 6001);
        assert_eq!(grid.span(), (-6.0, 6.0));
        assert_eq!(grid.positions()[grid.center_index()], 0.0);
    }

    #[test]
    fn zero_fringes_gives_single_point() {
        let grid = default_grid(&paper(), 0);
        assert_eq!(grid.positions(), &[0.0]);
    }

    #[test]
    fn zoomed_grid_covers_requested_fringes() {
        let cfg = paper();
        let grid = default_grid(&cfg, 3);
        assert_eq!(grid.len(), 121);
        assert!((grid.span().1 - 0.12).abs() < 1e-12);
    }

    #[test]
    fn grid_is_symmetric_and_increasing() {
        let grid = full_grid(&paper());
        let p = grid.positions();
        let n = p.len();
        for i in 0..n {
            assert_eq!(p[i], -p[n - 1 - i]);
            if i > 0 {
                assert!(p[i] > p[i - 1]);
            }
        }
    }

    #[test]
    fn refined_grid_contains_original_samples() {
        let grid = default_grid(&paper(), 10);
        let fine = grid.refined();
        assert_eq!(fine.len(), 2 * grid.len() - 1);
        for (i, x) in grid.positions().iter().enumerate() {
            assert_eq!(fine.positions()[2 * i], *x);
        }
    }

    #[test]
    fn coarse_explicit_grid_is_rejected() {
        let err = DetectorGrid::symmetric(&paper(), 6.0, 601).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "grid_points", .. }));
        assert!(DetectorGrid::symmetric(&paper(), 6.0, 6000).is_err());
        assert!(DetectorGrid::symmetric(&paper(), 6.0, 6001).is_ok());
    }

    #[test]
    fn config_file_round_trip() {
        let text = "# paper geometry\nslit_width = 0.01\nscreen_distance = 10\n\
                    photon_wavelength = 0.1 # short\natom_de_broglie = 0.004\ngrid_span = 2\n";
        let parsed: ConfigFile = text.parse().unwrap();
        assert_eq!(parsed.apparatus, ApparatusConfig::default());
        assert_eq!(parsed.grid_span, Some(2.0));
        let again: ConfigFile = parsed.to_string().parse().unwrap();
        assert_eq!(again, parsed);
        let grid = parsed.grid(&paper()).unwrap();
        assert_eq!(grid.span(), (-2.0, 2.0));
        assert_eq!(grid.len(), 2001);
    }

    #[test]
    fn config_file_errors() {
        let unknown = "slit_width = 0.01\nwavelength = 3\n".parse::<ConfigFile>();
        assert!(matches!(unknown, Err(Error::ConfigParse { line: 2, .. })));
        let dup = "slit_width = 0.01\nslit_width = 0.02\n".parse::<ConfigFile>();
        assert!(matches!(dup, Err(Error::ConfigParse { line: 2, .. })));
        let junk = "slit_width 0.01\n".parse::<ConfigFile>();
        assert!(matches!(junk, Err(Error::ConfigParse { line: 1, .. })));
        let nan = "grid_points = -3\n".parse::<ConfigFile>();
        assert!(nan.is_err());
    }
}
