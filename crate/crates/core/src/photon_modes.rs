//! Photon basis amplitudes and the slit overlap `Gamma = <gamma_R|gamma_L>`.
//!
//! Three photon bases are used: the slit-origin states `|gamma_L>`,
//! `|gamma_R>`; far-field recoil states labelled by
//! `kappa_x = k - k_fx in [0, 2k]`; and image-plane points `x_gamma` behind a
//! unit-magnification lens. The lens inverts the image, so image coordinates
//! are relabelled such that an emitter at `x'` images to `x_gamma = x'`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::apparatus::SLIT_SEPARATION;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_complex, GaussLegendre, Integrand1D, RecoilQuadrature, DEFAULT_RULE_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// Slit center: `-d/2` for the left slit, `+d/2` for the right.
    pub fn center(self, separation: f64) -> f64 {
        match self {
            Side::Left => -0.5 * separation,
            Side::Right => 0.5 * separation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonMode {
    /// Photon emitted from one slit.
    SlitOrigin(Side),
    /// Far-field detection with recoil `kappa_x`.
    FarField { kappa: f64 },
    /// Imaging detection at `x_gamma`.
    ImagePoint { x: f64 },
}

impl PhotonMode {
    /// Checks `kappa in [0, 2k]` and finiteness of image points.
    pub fn check(&self, wavenumber: f64) -> Result<()> {
        match *self {
            PhotonMode::SlitOrigin(_) => Ok(()),
            PhotonMode::FarField { kappa } => check_kappa(kappa, wavenumber),
            PhotonMode::ImagePoint { x } if x.is_finite() => Ok(()),
            PhotonMode::ImagePoint { x } => Err(Error::InvalidParameter {
                name: "x_gamma",
                value: x,
                reason: "must be finite",
            }),
        }
    }
}

fn check_kappa(kappa: f64, wavenumber: f64) -> Result<()> {
    let hi = 2.0 * wavenumber;
    if (0.0..=hi).contains(&kappa) {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "kappa_x",
            value: kappa,
            lo: 0.0,
            hi,
        })
    }
}

/// Azimuthally integrated scattering weight `2k^2 + kappa^2 - 2 k kappa`.
pub fn scattering_weight(kappa: f64, wavenumber: f64) -> Result<f64> {
    check_kappa(kappa, wavenumber)?;
    Ok(scattering_weight_unchecked(kappa, wavenumber))
}

pub(crate) fn scattering_weight_unchecked(kappa: f64, wavenumber: f64) -> f64 {
    2.0 * wavenumber * wavenumber + kappa * kappa - 2.0 * wavenumber * kappa
}

/// `<k_f|gamma_x'>` up to the common scattering amplitude: `e^(i kappa x')`.
pub fn farfield_phase(source: f64, kappa: f64) -> Complex64 {
    Complex64::from_polar(1.0, kappa * source)
}

/// Amplitude point-spread function of a lens, as a function of the
/// image-plane offset `u = x_gamma - x'`.
pub trait ImagingKernel: Sync {
    fn amplitude(&self, offset: f64) -> Complex64;

    /// Bound on `|d arg h / du|`-like oscillation, used to size quadrature panels.
    fn oscillation_rate(&self) -> f64;
}

/// Ideal diffraction-limited lens with full collection:
/// `h(u) = sin(k u) / (k u)`, `h(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincLens {
    wavenumber: f64,
}

impl SincLens {
    pub fn new(photon_wavelength: f64) -> Self {
        Self {
            wavenumber: 2.0 * PI / photon_wavelength,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }
}

impl ImagingKernel for SincLens {
    fn amplitude(&self, offset: f64) -> Complex64 {
        let arg = self.wavenumber * offset;
        let value = if arg.abs() < 1e-8 {
            1.0 - arg * arg / 6.0
        } else {
            arg.sin() / arg
        };
        Complex64::new(value, 0.0)
    }

    fn oscillation_rate(&self) -> f64 {
        self.wavenumber
    }
}

/// `<x_gamma|gamma_x'>` for the default lens at wavelength `lambda`.
pub fn imaging_kernel(x_gamma: f64, source: f64, photon_wavelength: f64) -> Complex64 {
    SincLens::new(photon_wavelength).amplitude(x_gamma - source)
}

/// `Gamma = <gamma_R|gamma_L>` at a given `lambda / d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapAmplitude {
    pub value: Complex64,
    pub lambda_over_d: f64,
}

impl OverlapAmplitude {
    /// Overlap with an explicit value, checking `|Gamma| <= 1`.
    pub fn new(value: Complex64, lambda_over_d: f64) -> Result<Self> {
        if value.norm() > 1.0 + 1e-12 {
            return Err(Error::OverlapOutOfRange(value.norm()));
        }
        Ok(Self { value, lambda_over_d })
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// Far-field evaluation of the slit overlap
/// `Gamma = int W(kappa) e^(-i kappa d) dkappa / int W(kappa) dkappa`.
///
/// Projecting `|gamma_L>` (source at `-d/2`) and `|gamma_R>` (source at
/// `+d/2`) onto recoil states gives `<gamma_R|gamma_L> = sum |S|^2
/// e^(-i kappa d)`; the weight `W` carries `|S|^2` after the azimuthal
/// integral. `Gamma = 1` exactly when `d = 0`.
pub fn slit_overlap(photon_wavelength: f64, separation: f64) -> Result<OverlapAmplitude> {
    let rule = GaussLegendre::new(DEFAULT_RULE_ORDER)?;
    let k = 2.0 * PI / photon_wavelength;
    let samples = RecoilQuadrature::default_samples(k, separation, rule.order());
    slit_overlap_with(&RecoilQuadrature::new(k, samples, &rule), separation)
}

/// [`slit_overlap`] on a caller-provided recoil rule.
pub fn slit_overlap_with(recoil: &RecoilQuadrature, separation: f64) -> Result<OverlapAmplitude> {
    if !(recoil.wavenumber() > 0.0 && recoil.wavenumber().is_finite()) {
        return Err(Error::InvalidParameter {
            name: "photon_wavelength",
            value: 2.0 * PI / recoil.wavenumber(),
            reason: "must be finite and positive",
        });
    }
    let integral = recoil.integrate(|kappa| Complex64::from_polar(1.0, -kappa * separation))?;
    let gamma = integral / recoil.total_weight();
    let lambda = 2.0 * PI / recoil.wavenumber();
    // Rounding can push |Gamma| a few ulps over 1 when d -> 0.
    let gamma = if gamma.norm() > 1.0 && gamma.norm() <= 1.0 + 1e-12 {
        gamma / gamma.norm()
    } else {
        gamma
    };
    OverlapAmplitude::new(gamma, lambda / SLIT_SEPARATION)
}

/// Imaging-basis evaluation of the same overlap,
/// `int h*(u - d/2) h(u + d/2) du / int |h(u)|^2 du`, truncated to
/// `|u| <= half_range`.
pub fn imaging_overlap(kernel: &dyn ImagingKernel, separation: f64, half_range: f64) -> Result<Complex64> {
    let rule = GaussLegendre::new(DEFAULT_RULE_ORDER)?;
    let rate = 2.0 * kernel.oscillation_rate();
    let cross = Integrand1D::new(
        |u| kernel.amplitude(u - 0.5 * separation).conj() * kernel.amplitude(u + 0.5 * separation),
        rate,
    );
    let norm = Integrand1D::new(|u| Complex64::new(kernel.amplitude(u).norm_sqr(), 0.0), rate);
    let num = integrate_complex(&cross, -half_range, half_range, &rule)?;
    let den = integrate_complex(&norm, -half_range, half_range, &rule)?;
    Ok(num / den.re)
}
