//! Atom probability patterns at the detector plane `z = L`.
//!
//! The atom amplitude at detector position `x` is the sum over aperture
//! points `x'` of `e^(i Phi(x, x'))` with the high-momentum Fresnel phase
//! `Phi = p0 (x - x')^2 / (2 L)`. Photon scattering multiplies each slit's
//! contribution by `<gamma_n|gamma_x'>`, held constant across a slit since
//! the photon wavelength is much larger than the slit width. All patterns
//! therefore derive from the two single-slit amplitudes `psi_L(x)` and
//! `psi_R(x)`, which [`SlitField`] computes once per grid.

mod fringes;

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::apparatus::{DetectorGrid, RegimeOverride, ValidatedConfig};
use crate::error::{Error, Result};
use crate::photon_modes::{
    farfield_phase, scattering_weight, ImagingKernel, PhotonMode, Side, SincLens,
};
use crate::quadrature::{
    integrate_complex, GaussLegendre, Integrand1D, RecoilQuadrature, DEFAULT_RULE_ORDER,
};

pub use fringes::{
    central_envelope, fringe_count, fringe_phase_shift, visibility, wrap_phase, FringeWindow,
};

/// Values below this are treated as rounding noise and clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// Quadrature settings shared by every pattern computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSettings {
    /// Gauss-Legendre order per panel, for both aperture and recoil integrals.
    pub rule_order: usize,
    /// Total recoil nodes; `None` scales 1024 nodes at `k d = 20 pi` with `k d`.
    pub recoil_samples: Option<usize>,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rule_order: DEFAULT_RULE_ORDER,
            recoil_samples: None,
        }
    }
}

impl QuadratureSettings {
    /// Twice the rule order and twice the recoil nodes.
    pub fn doubled(&self, config: &ValidatedConfig) -> Self {
        Self {
            rule_order: 2 * self.rule_order,
            recoil_samples: Some(2 * self.recoil_sample_count(config)),
        }
    }

    pub fn recoil_sample_count(&self, config: &ValidatedConfig) -> usize {
        self.recoil_samples.unwrap_or_else(|| {
            RecoilQuadrature::default_samples(
                config.photon_wavenumber(),
                config.slit_separation(),
                self.rule_order,
            )
        })
    }

    pub fn recoil_quadrature(&self, config: &ValidatedConfig) -> Result<RecoilQuadrature> {
        let rule = GaussLegendre::new(self.rule_order)?;
        Ok(RecoilQuadrature::for_separation(
            config.photon_wavenumber(),
            config.slit_separation(),
            self.recoil_sample_count(config),
            &rule,
        )?)
    }
}

/// Fresnel transit phase `Phi(x, x') = p0 (x - x')^2 / (2 L)`.
pub fn fresnel_phase(x: f64, source: f64, config: &ValidatedConfig) -> f64 {
    let dx = x - source;
    config.atom_momentum() * dx * dx / (2.0 * config.screen_distance())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitSelection {
    Only(Side),
    Both,
}

/// Per-slit factors `<gamma_n|gamma_x'>` evaluated at the slit centers,
/// as `[left, right]`. `None` means no photon was scattered.
pub fn slit_coefficients(
    photon: Option<&PhotonMode>,
    config: &ValidatedConfig,
    kernel: &dyn ImagingKernel,
) -> Result<[Complex64; 2]> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let d = config.slit_separation();
    let Some(photon) = photon else {
        return Ok([one, one]);
    };
    photon.check(config.photon_wavenumber())?;
    Ok(match *photon {
        PhotonMode::SlitOrigin(Side::Left) => [one, zero],
        PhotonMode::SlitOrigin(Side::Right) => [zero, one],
        PhotonMode::FarField { kappa } => Side::BOTH.map(|s| farfield_phase(s.center(d), kappa)),
        PhotonMode::ImagePoint { x } => Side::BOTH.map(|s| kernel.amplitude(x - s.center(d))),
    })
}

/// Evaluates single-slit Fresnel integrals at arbitrary detector points.
#[derive(Debug, Clone)]
pub struct Propagator {
    config: ValidatedConfig,
    rule: GaussLegendre,
}

impl Propagator {
    pub fn new(config: &ValidatedConfig, settings: &QuadratureSettings) -> Result<Self> {
        Ok(Self {
            config: *config,
            rule: GaussLegendre::new(settings.rule_order)?,
        })
    }

    pub fn config(&self) -> &ValidatedConfig {
        &self.config
    }

    /// `psi_side(x) = int_{slit} e^(i Phi(x, x')) dx'`.
    pub fn single_slit(&self, x: f64, side: Side) -> Result<Complex64> {
        let cfg = &self.config;
        let center = side.center(cfg.slit_separation());
        let half = 0.5 * cfg.slit_width();
        let rate = cfg.atom_momentum() * ((x - center).abs() + half) / cfg.screen_distance();
        let integrand = Integrand1D::new(
            |source| Complex64::from_polar(1.0, fresnel_phase(x, source, cfg)),
            rate,
        );
        Ok(integrate_complex(&integrand, center - half, center + half, &self.rule)?)
    }

    /// Amplitude through one or both slits, correlated with `photon`.
    /// Two-slit amplitudes carry the `1/sqrt 2` of the initial superposition.
    pub fn amplitude(
        &self,
        x: f64,
        selection: SlitSelection,
        photon: Option<&PhotonMode>,
        kernel: &dyn ImagingKernel,
    ) -> Result<Complex64> {
        let [c_left, c_right] = slit_coefficients(photon, &self.config, kernel)?;
        Ok(match selection {
            SlitSelection::Only(Side::Left) => c_left * self.single_slit(x, Side::Left)?,
            SlitSelection::Only(Side::Right) => c_right * self.single_slit(x, Side::Right)?,
            SlitSelection::Both => {
                (c_left * self.single_slit(x, Side::Left)? + c_right * self.single_slit(x, Side::Right)?)
                    * FRAC_1_SQRT_2
            }
        })
    }
}

/// Slit amplitude at one detector point with default quadrature and the
/// default imaging lens at the configured wavelength.
pub fn slit_amplitude(
    x: f64,
    selection: SlitSelection,
    photon: Option<&PhotonMode>,
    config: &ValidatedConfig,
) -> Result<Complex64> {
    let lens = SincLens::new(config.photon_wavelength());
    Propagator::new(config, &QuadratureSettings::default())?.amplitude(x, selection, photon, &lens)
}

/// Sampled probability density on a detector grid, in an arbitrary scale
/// shared by patterns derived from the same field.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomPattern {
    grid: Arc<DetectorGrid>,
    values: Vec<f64>,
    label: String,
}

impl AtomPattern {
    /// Rejects values below `-NEGATIVE_TOLERANCE`; smaller negatives are
    /// clamped to zero.
    pub fn new(grid: Arc<DetectorGrid>, mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        assert_eq!(grid.len(), values.len(), "pattern length must match its grid");
        for (v, &x) in values.iter_mut().zip(grid.positions()) {
            if !v.is_finite() || *v < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeProbability { x, value: *v });
            }
            if *v < 0.0 {
                log::debug!("clamping {v:e} at x = {x} to zero");
                *v = 0.0;
            }
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &DetectorGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<DetectorGrid> {
        Arc::clone(&self.grid)
    }

    pub fn positions(&self) -> &[f64] {
        self.grid.positions()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value_at_center(&self) -> f64 {
        self.values[self.grid.center_index()]
    }

    /// Trapezoid integral over the whole grid.
    pub fn integral(&self) -> f64 {
        let (lo, hi) = self.grid.span();
        self.integral_between(lo, hi)
    }

    /// Trapezoid integral over the samples inside `[lo, hi]`.
    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        let x = self.grid.positions();
        let mut total = 0.0;
        for i in 1..x.len() {
            if x[i - 1] >= lo && x[i] <= hi {
                total += 0.5 * (self.values[i - 1] + self.values[i]) * (x[i] - x[i - 1]);
            }
        }
        total
    }

    /// Copy scaled by `factor`, with a new label.
    pub fn scaled(&self, factor: f64, label: impl Into<String>) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * factor).collect(),
            label: label.into(),
        }
    }

    /// Copy with unit trapezoid integral over the grid span.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.integral();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pattern integral",
                value: total,
                reason: "pattern is not normalizable",
            });
        }
        Ok(self.scaled(1.0 / total, self.label.clone()))
    }

    /// `int |p - q| dx` between the unit-normalized patterns.
    pub fn l1_distance(&self, other: &AtomPattern) -> Result<f64> {
        if self.grid.positions() != other.grid.positions() {
            return Err(Error::GridMismatch);
        }
        let p = self.normalized()?;
        let q = other.normalized()?;
        let diff: Vec<f64> = p.values.iter().zip(&q.values).map(|(a, b)| (a - b).abs()).collect();
        let diff = AtomPattern {
            grid: Arc::clone(&self.grid),
            values: diff,
            label: String::new(),
        };
        Ok(diff.integral())
    }

    /// Fraction of the total integral lying in `[lo, hi]`.
    pub fn mass_fraction(&self, lo: f64, hi: f64) -> f64 {
        self.integral_between(lo, hi) / self.integral()
    }
}

/// An atom pattern conditioned on one photon detection outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPattern {
    pub photon: PhotonMode,
    /// Atom pattern given the photon outcome, on the same scale as the
    /// no-photon coherent pattern.
    pub atom_pattern: AtomPattern,
    /// Relative likelihood of the photon outcome.
    pub joint_scale: f64,
}

impl JointPattern {
    /// `joint_scale x atom_pattern`, the arbitrarily scaled joint density.
    pub fn joint(&self) -> AtomPattern {
        self.atom_pattern
            .scaled(self.joint_scale, format!("{} (joint)", self.atom_pattern.label))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoPhotonPatterns {
    pub single_left: AtomPattern,
    pub single_right: AtomPattern,
    /// `|psi_L + psi_R|^2 / 2`
    pub coherent: AtomPattern,
    /// `(|psi_L|^2 + |psi_R|^2) / 2`
    pub incoherent: AtomPattern,
}

/// Single-slit amplitudes on a detector grid.
///
/// The amplitudes depend on slit width, screen distance, and de Broglie
/// wavelength but not on the photon wavelength, so one field can be
/// retuned across wavelengths with [`SlitField::retuned`].
#[derive(Debug, Clone)]
pub struct SlitField {
    config: ValidatedConfig,
    settings: QuadratureSettings,
    grid: Arc<DetectorGrid>,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl SlitField {
    /// Evaluates `psi_L`, `psi_R` at every grid point. Grid points are
    /// independent and each uses fixed nodes, so the result does not depend
    /// on the rayon worker count.
    pub fn compute(config: &ValidatedConfig, grid: &DetectorGrid, settings: &QuadratureSettings) -> Result<Self> {
        let propagator = Propagator::new(config, settings)?;
        let amps: Vec<(Complex64, Complex64)> = grid
            .positions()
            .par_iter()
            .map(|&x| {
                Ok((
                    propagator.single_slit(x, Side::Left)?,
                    propagator.single_slit(x, Side::Right)?,
                ))
            })
            .collect::<Result<_>>()?;
        let (left, right) = amps.into_iter().unzip();
        Ok(Self {
            config: *config,
            settings: *settings,
            grid: Arc::new(grid.clone()),
            left,
            right,
        })
    }

    /// Same amplitudes under a different photon wavelength.
    pub fn retuned(&self, photon_wavelength: f64, overrides: RegimeOverride) -> Result<Self> {
        Ok(Self {
            config: self.config.with_wavelength(photon_wavelength, overrides)?,
            ..self.clone()
        })
    }

    pub fn config(&self) -> &ValidatedConfig {
        &self.config
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    pub fn grid(&self) -> &DetectorGrid {
        &self.grid
    }

    pub fn left(&self) -> &[Complex64] {
        &self.left
    }

    pub fn right(&self) -> &[Complex64] {
        &self.right
    }

    fn pattern(&self, values: Vec<f64>, label: impl Into<String>) -> Result<AtomPattern> {
        AtomPattern::new(Arc::clone(&self.grid), values, label)
    }

    pub fn no_photon(&self) -> Result<NoPhotonPatterns> {
        let single_left: Vec<f64> = self.left.iter().map(|a| a.norm_sqr()).collect();
        let single_right: Vec<f64> = self.right.iter().map(|a| a.norm_sqr()).collect();
        let coherent = self
            .left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| 0.5 * (l + r).norm_sqr())
            .collect();
        let incoherent = single_left
            .iter()
            .zip(&single_right)
            .map(|(l, r)| 0.5 * (l + r))
            .collect();
        Ok(NoPhotonPatterns {
            single_left: self.pattern(single_left, "single_L")?,
            single_right: self.pattern(single_right, "single_R")?,
            coherent: self.pattern(coherent, "coherent")?,
            incoherent: self.pattern(incoherent, "incoherent")?,
        })
    }

    /// `|c_L psi_L + c_R psi_R|^2 / (|c_L|^2 + |c_R|^2)`: equal to the
    /// coherent pattern for `c_L = c_R` and to a single-slit pattern when
    /// one coefficient vanishes.
    pub fn conditional(&self, coefficients: [Complex64; 2], label: impl Into<String>) -> Result<AtomPattern> {
        let norm = (coefficients[0].norm_sqr() + coefficients[1].norm_sqr()).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateCondition);
        }
        let [cl, cr] = coefficients.map(|c| c / norm);
        let values = self
            .left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| (cl * l + cr * r).norm_sqr())
            .collect();
        self.pattern(values, label)
    }

    /// Pattern given far-field detection with recoil `kappa`;
    /// `joint_scale = W(kappa)`.
    pub fn farfield_partial(&self, kappa: f64) -> Result<JointPattern> {
        let k = self.config.photon_wavenumber();
        let weight = scattering_weight(kappa, k)?;
        let photon = PhotonMode::FarField { kappa };
        let lens = SincLens::new(self.config.photon_wavelength());
        let coefficients = slit_coefficients(Some(&photon), &self.config, &lens)?;
        Ok(JointPattern {
            photon,
            atom_pattern: self.conditional(coefficients, format!("farfield kappa={kappa}"))?,
            joint_scale: weight,
        })
    }

    /// Pattern given imaging detection at `x_gamma` with the default lens.
    pub fn imaging_partial(&self, x_gamma: f64) -> Result<JointPattern> {
        let lens = SincLens::new(self.config.photon_wavelength());
        self.imaging_partial_with(x_gamma, &lens)
    }

    /// `joint_scale` is the mask average of `|h(x_gamma - x')|^2`, so it is
    /// 1 for an image point centered on a resolved slit.
    pub fn imaging_partial_with(&self, x_gamma: f64, kernel: &dyn ImagingKernel) -> Result<JointPattern> {
        let photon = PhotonMode::ImagePoint { x: x_gamma };
        let coefficients = slit_coefficients(Some(&photon), &self.config, kernel)?;
        let joint_scale = mask_kernel_weight(x_gamma, &self.config, kernel, self.settings.rule_order)?
            .iter()
            .sum::<f64>()
            / (2.0 * self.config.slit_width());
        Ok(JointPattern {
            photon,
            atom_pattern: self.conditional(coefficients, format!("imaging x_gamma={x_gamma}"))?,
            joint_scale,
        })
    }

    /// No-detector marginal: the `W`-weighted average over recoil of the
    /// far-field conditional patterns, evaluated per detector point.
    pub fn decohered(&self) -> Result<AtomPattern> {
        let recoil = self.settings.recoil_quadrature(&self.config)?;
        let d = self.config.slit_separation();
        let phases: Vec<[Complex64; 2]> = recoil
            .nodes()
            .iter()
            .map(|&kappa| Side::BOTH.map(|s| farfield_phase(s.center(d), kappa)))
            .collect();
        let total = recoil.total_weight();
        let values = self
            .left
            .par_iter()
            .zip(self.right.par_iter())
            .map(|(l, r)| {
                let mut sum = 0.0;
                for (c, w) in phases.iter().zip(recoil.weights()) {
                    sum += w * 0.5 * (c[0] * l + c[1] * r).norm_sqr();
                }
                sum / total
            })
            .collect();
        self.pattern(values, format!("decohered lambda={}", self.config.photon_wavelength()))
    }

    /// Far-field partial patterns at every recoil node, `W`-weighted and
    /// summed. Equals [`SlitField::decohered`] when the photon is ignored.
    pub fn farfield_marginal(&self) -> Result<AtomPattern> {
        let recoil = self.settings.recoil_quadrature(&self.config)?;
        let mut acc = vec![0.0; self.grid.len()];
        let mut norm = 0.0;
        for (&kappa, &w) in recoil.nodes().iter().zip(recoil.base_weights()) {
            let partial = self.farfield_partial(kappa)?;
            let scale = w * partial.joint_scale;
            norm += scale;
            for (a, v) in acc.iter_mut().zip(partial.atom_pattern.values()) {
                *a += scale * v;
            }
        }
        acc.iter_mut().for_each(|a| *a /= norm);
        self.pattern(acc, "farfield marginal")
    }

    /// `int dx_gamma joint_scale(x_gamma) pattern(x_gamma)` over
    /// `|x_gamma| <= half_range`, normalized by the total photon likelihood.
    pub fn imaging_marginal(&self, kernel: &dyn ImagingKernel, half_range: f64) -> Result<AtomPattern> {
        let rule = GaussLegendre::new(self.settings.rule_order)?;
        let panels = crate::quadrature::panel_count(2.0 * kernel.oscillation_rate(), 2.0 * half_range);
        let width = 2.0 * half_range / panels as f64;
        let nodes: Vec<(f64, f64)> = (0..panels)
            .flat_map(|p| {
                let a = -half_range + p as f64 * width;
                rule.mapped(a, a + width).collect::<Vec<_>>()
            })
            .collect();
        let partials: Vec<(f64, JointPattern)> = nodes
            .par_iter()
            .map(|&(x_gamma, w)| Ok((w, self.imaging_partial_with(x_gamma, kernel)?)))
            .collect::<Result<_>>()?;
        let mut acc = vec![0.0; self.grid.len()];
        let mut norm = 0.0;
        for (w, partial) in &partials {
            let scale = w * partial.joint_scale;
            norm += scale;
            for (a, v) in acc.iter_mut().zip(partial.atom_pattern.values()) {
                *a += scale * v;
            }
        }
        acc.iter_mut().for_each(|a| *a /= norm);
        self.pattern(acc, "imaging marginal")
    }
}

/// `int_{slit} |h(x_gamma - x')|^2 dx'` for `[left, right]`.
pub(crate) fn mask_kernel_weight(
    x_gamma: f64,
    config: &ValidatedConfig,
    kernel: &dyn ImagingKernel,
    rule_order: usize,
) -> Result<[f64; 2]> {
    let rule = GaussLegendre::new(rule_order)?;
    let half = 0.5 * config.slit_width();
    let d = config.slit_separation();
    let mut out = [0.0; 2];
    for (slot, side) in out.iter_mut().zip(Side::BOTH) {
        let c = side.center(d);
        let integrand = Integrand1D::new(
            |source| Complex64::new(kernel.amplitude(x_gamma - source).norm_sqr(), 0.0),
            2.0 * kernel.oscillation_rate(),
        );
        *slot = integrate_complex(&integrand, c - half, c + half, &rule)?.re;
    }
    Ok(out)
}

pub fn no_photon_patterns(config: &ValidatedConfig, grid: &DetectorGrid) -> Result<NoPhotonPatterns> {
    SlitField::compute(config, grid, &QuadratureSettings::default())?.no_photon()
}

pub fn farfield_partial_pattern(kappa: f64, config: &ValidatedConfig, grid: &DetectorGrid) -> Result<JointPattern> {
    scattering_weight(kappa, config.photon_wavenumber())?;
    SlitField::compute(config, grid, &QuadratureSettings::default())?.farfield_partial(kappa)
}

pub fn imaging_partial_pattern(x_gamma: f64, config: &ValidatedConfig, grid: &DetectorGrid) -> Result<JointPattern> {
    SlitField::compute(config, grid, &QuadratureSettings::default())?.imaging_partial(x_gamma)
}

pub fn decohered_pattern(config: &ValidatedConfig, grid: &DetectorGrid) -> Result<AtomPattern> {
    SlitField::compute(config, grid, &QuadratureSettings::default())?.decohered()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apparatus::{default_grid, validate, ApparatusConfig};
    use std::f64::consts::PI;

    fn paper() -> ValidatedConfig {
        validate(ApparatusConfig::default()).unwrap()
    }

    #[test]
    fn fresnel_phase_values() {
        let cfg = paper();
        assert_eq!(fresnel_phase(0.3, 0.3, &cfg), 0.0);
        let got = fresnel_phase(0.004, 0.0, &cfg);
        assert!((got - PI / 2500.0).abs() < 1e-15);
        assert_eq!(fresnel_phase(0.7, -0.2, &cfg), fresnel_phase(-0.2, 0.7, &cfg));
    }

    #[test]
    fn center_amplitudes_mirror() {
        let cfg = paper();
        let l = slit_amplitude(0.0, SlitSelection::Only(Side::Left), None, &cfg).unwrap();
        let r = slit_amplitude(0.0, SlitSelection::Only(Side::Right), None, &cfg).unwrap();
        assert!((l - r).norm() < 1e-12 * l.norm());
    }

    #[test]
    fn symmetric_mask_gives_equal_slit_amplitudes() {
        // Mirror image: psi_L(x) = psi_R(-x) for every x.
        let cfg = paper();
        let prop = Propagator::new(&cfg, &QuadratureSettings::default()).unwrap();
        for x in [0.0, 0.013, 0.5, 2.7, -4.1] {
            let l = prop.single_slit(x, Side::Left).unwrap();
            let r = prop.single_slit(-x, Side::Right).unwrap();
            assert!((l - r).norm() < 1e-12 * l.norm(), "x = {x}");
        }
    }

    #[test]
    fn farfield_amplitude_composes_single_slits() {
        let cfg = paper();
        let prop = Propagator::new(&cfg, &QuadratureSettings::default()).unwrap();
        let lens = SincLens::new(cfg.photon_wavelength());
        let kappa = 37.0;
        let photon = PhotonMode::FarField { kappa };
        for x in [0.0, 0.11, -1.3] {
            let both = prop.amplitude(x, SlitSelection::Both, Some(&photon), &lens).unwrap();
            let l = prop.single_slit(x, Side::Left).unwrap();
            let r = prop.single_slit(x, Side::Right).unwrap();
            let want = (Complex64::from_polar(1.0, -kappa * 0.5) * l
                + Complex64::from_polar(1.0, kappa * 0.5) * r)
                / 2f64.sqrt();
            assert!((both - want).norm() < 1e-10 * want.norm().max(1e-6));
        }
    }

    #[test]
    fn origin_photon_localizes() {
        let cfg = paper();
        let prop = Propagator::new(&cfg, &QuadratureSettings::default()).unwrap();
        let lens = SincLens::new(cfg.photon_wavelength());
        let photon = PhotonMode::SlitOrigin(Side::Right);
        let both = prop.amplitude(0.3, SlitSelection::Both, Some(&photon), &lens).unwrap();
        let r = prop.single_slit(0.3, Side::Right).unwrap();
        assert!((both * 2f64.sqrt() - r).norm() < 1e-15);
    }

    #[test]
    fn coherent_peak_is_global_maximum() {
        let cfg = paper();
        let grid = default_grid(&cfg, 40);
        let p = no_photon_patterns(&cfg, &grid).unwrap();
        let center = p.coherent.value_at_center();
        assert!(p.coherent.values().iter().all(|&v| v <= center * (1.0 + 1e-12)));
        let ratio = center / p.incoherent.value_at_center();
        assert!((1.9..=2.0 + 1e-12).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn kappa_zero_equals_coherent() {
        let cfg = paper();
        let grid = default_grid(&cfg, 10);
        let field = SlitField::compute(&cfg, &grid, &QuadratureSettings::default()).unwrap();
        let p = field.farfield_partial(0.0).unwrap();
        let coherent = field.no_photon().unwrap().coherent;
        let peak = coherent.value_at_center();
        for (a, b) in p.atom_pattern.values().iter().zip(coherent.values()) {
            assert!((a - b).abs() <= 1e-14 * peak);
        }
        assert_eq!(p.joint_scale, 2.0 * cfg.photon_wavenumber().powi(2));
        assert!(field.farfield_partial(-1.0).is_err());
        assert!(field.farfield_partial(2.0 * cfg.photon_wavenumber() + 1e-9).is_err());
    }

    #[test]
    fn degenerate_condition_is_an_error() {
        let cfg = paper();
        let grid = default_grid(&cfg, 1);
        let field = SlitField::compute(&cfg, &grid, &QuadratureSettings::default()).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(field.conditional([zero, zero], "x"), Err(Error::DegenerateCondition)));
    }

    #[test]
    fn negative_values_beyond_tolerance_are_rejected() {
        let grid = Arc::new(default_grid(&paper(), 0));
        assert!(AtomPattern::new(Arc::clone(&grid), vec![-1e-9], "bad").is_err());
        let clamped = AtomPattern::new(grid, vec![-1e-13], "ok").unwrap();
        assert_eq!(clamped.values(), &[0.0]);
    }

    #[test]
    fn l1_distance_properties() {
        let cfg = paper();
        let grid = default_grid(&cfg, 20);
        let p = no_photon_patterns(&cfg, &grid).unwrap();
        assert_eq!(p.coherent.l1_distance(&p.coherent).unwrap(), 0.0);
        let d = p.coherent.l1_distance(&p.incoherent).unwrap();
        assert!(d > 0.1 && d <= 2.0);
        let other = no_photon_patterns(&cfg, &default_grid(&cfg, 10)).unwrap();
        assert!(matches!(p.coherent.l1_distance(&other.coherent), Err(Error::GridMismatch)));
    }
}
