#![allow(dead_code)]

use std::f64::consts::PI;

use lightscope::apparatus::{default_grid, full_grid, validate, ApparatusConfig, RegimeOverride, ValidatedConfig};
use lightscope::patterns::{QuadratureSettings, SlitField};
use num_complex::Complex64;

pub fn paper() -> ValidatedConfig {
    validate(ApparatusConfig::default()).unwrap()
}

pub fn at_lambda(lambda: f64) -> ValidatedConfig {
    paper().with_wavelength(lambda, RegimeOverride::default()).unwrap()
}

/// Slit amplitudes over `+-fringes` periods at the given photon wavelength.
pub fn field(lambda: f64, fringes: usize) -> SlitField {
    let cfg = at_lambda(lambda);
    SlitField::compute(&cfg, &default_grid(&cfg, fringes), &QuadratureSettings::default()).unwrap()
}

pub fn full_field(lambda: f64) -> SlitField {
    let cfg = at_lambda(lambda);
    SlitField::compute(&cfg, &full_grid(&cfg), &QuadratureSettings::default()).unwrap()
}

/// `<gamma_R|gamma_L>` in closed form. With `q = kappa - k` the weight is
/// `k^2 + q^2` and the recoil phase `e^(-i k d) e^(-i q d)`; the odd part
/// of the `q` integral vanishes.
pub fn closed_form_overlap(lambda: f64, d: f64) -> Complex64 {
    let k = 2.0 * PI / lambda;
    let (s, c) = (k * d).sin_cos();
    let int_cos = 2.0 * s / d;
    let int_q2_cos = 2.0 * (k * k * s / d + 2.0 * k * c / (d * d) - 2.0 * s / (d * d * d));
    let real = (k * k * int_cos + int_q2_cos) * 3.0 / (8.0 * k.powi(3));
    Complex64::from_polar(1.0, -k * d) * real
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `max |a - b| / max |b|`.
pub fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = max_abs(b);
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
