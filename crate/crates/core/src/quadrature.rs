//! Complex-valued composite Gauss-Legendre quadrature for oscillatory
//! integrands.
//!
//! Panel counts are driven by a declared phase rate so that no panel spans
//! more than [`MAX_PANEL_PHASE`] radians. With order-16 panels this is
//! converged to rounding error for the integrands used here.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::QuadratureError;
use crate::photon_modes::scattering_weight_unchecked;

/// Largest phase excursion allowed within one panel.
pub const MAX_PANEL_PHASE: f64 = PI / 4.0;

/// Default Gauss-Legendre order per panel.
pub const DEFAULT_RULE_ORDER: usize = 16;

/// Recoil nodes used at `k d = 20 pi` (`lambda = d/10`); scaled with `k d`.
pub const REFERENCE_RECOIL_SAMPLES: usize = 1024;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self, QuadratureError> {
        if order < 2 {
            return Err(QuadratureError::RuleOrderTooLow(order));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Map the rule onto `[lo, hi]`, yielding `(x, w)` pairs.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(t, w)| (mid + half * t, half * w))
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// A complex integrand together with an upper bound on its local phase rate
/// `|d arg f / dx|` in radians per unit length.
pub struct Integrand1D<F> {
    pub f: F,
    pub max_phase_rate: f64,
}

impl<F: Fn(f64) -> Complex64> Integrand1D<F> {
    pub fn new(f: F, max_phase_rate: f64) -> Self {
        Self { f, max_phase_rate }
    }
}

/// Number of panels needed so each spans at most [`MAX_PANEL_PHASE`].
pub fn panel_count(max_phase_rate: f64, width: f64) -> usize {
    let phase = max_phase_rate.abs() * width;
    ((phase / MAX_PANEL_PHASE).ceil() as usize).max(1)
}

/// Composite Gauss-Legendre integral of `f` over `[lo, hi]`.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    integrand: &Integrand1D<F>,
    lo: f64,
    hi: f64,
    rule: &GaussLegendre,
) -> Result<Complex64, QuadratureError> {
    if !(lo < hi) {
        return Err(QuadratureError::InvalidInterval { lo, hi });
    }
    let panels = panel_count(integrand.max_phase_rate, hi - lo);
    let width = (hi - lo) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let b = if p + 1 == panels { hi } else { a + width };
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in rule.mapped(a, b) {
            let v = (integrand.f)(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(QuadratureError::NonFiniteIntegrand { at: x });
            }
            panel += v * w;
        }
        total += panel;
    }
    Ok(total)
}

/// Fixed nodes on `[0, 2k]` with weights that already include the angular
/// scattering weight `W(kappa) = 2k^2 + kappa^2 - 2 k kappa`.
///
/// The sum over nodes runs in a fixed order, so results do not depend on
/// how callers parallelize over detector positions.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoilQuadrature {
    wavenumber: f64,
    nodes: Vec<f64>,
    base_weights: Vec<f64>,
    weights: Vec<f64>,
    total_weight: f64,
}

impl RecoilQuadrature {
    /// `samples` total nodes split into panels of `rule.order()` points.
    pub fn new(wavenumber: f64, samples: usize, rule: &GaussLegendre) -> Self {
        let order = rule.order();
        let panels = samples.div_ceil(order).max(1);
        let hi = 2.0 * wavenumber;
        let width = hi / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut base_weights = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = p as f64 * width;
            let b = if p + 1 == panels { hi } else { a + width };
            for (x, w) in rule.mapped(a, b) {
                nodes.push(x);
                base_weights.push(w);
                weights.push(w * scattering_weight_unchecked(x, wavenumber));
            }
        }
        let total_weight = weights.iter().sum();
        Self {
            wavenumber,
            nodes,
            base_weights,
            weights,
            total_weight,
        }
    }

    /// Default node count for a slit separation `d`: 1024 at `k d = 20 pi`,
    /// scaled linearly with `k d`, never fewer than four panels.
    pub fn default_samples(wavenumber: f64, separation: f64, order: usize) -> usize {
        let reference = 20.0 * PI;
        let scaled = REFERENCE_RECOIL_SAMPLES as f64 * wavenumber * separation / reference;
        let panels = (scaled / order as f64).ceil() as usize;
        panels.max(4) * order
    }

    /// Smallest node count that keeps 16 samples per cycle of `e^(i kappa d)`.
    pub fn required_samples(wavenumber: f64, separation: f64) -> usize {
        (16.0 * 2.0 * wavenumber * separation / (2.0 * PI)).ceil() as usize
    }

    /// As [`RecoilQuadrature::new`], rejecting node counts that cannot
    /// resolve the `e^(i kappa d)` oscillation.
    pub fn for_separation(
        wavenumber: f64,
        separation: f64,
        samples: usize,
        rule: &GaussLegendre,
    ) -> Result<Self, QuadratureError> {
        let required = Self::required_samples(wavenumber, separation);
        if samples < required {
            return Err(QuadratureError::InsufficientSamples { samples, required });
        }
        Ok(Self::new(wavenumber, samples, rule))
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Plain quadrature weights, without `W(kappa)`.
    pub fn base_weights(&self) -> &[f64] {
        &self.base_weights
    }

    /// Quadrature weights multiplied by `W(kappa)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_0^{2k} W(kappa) dkappa`, which is `8 k^3 / 3` up to rounding.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// `int_0^{2k} W(kappa) g(kappa) dkappa`.
    pub fn integrate<G: Fn(f64) -> Complex64>(&self, g: G) -> Result<Complex64, QuadratureError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (&kappa, &w) in self.nodes.iter().zip(&self.weights) {
            let v = g(kappa);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(QuadratureError::NonFiniteIntegrand { at: kappa });
            }
            total += v * w;
        }
        Ok(total)
    }

    /// Real-valued variant of [`RecoilQuadrature::integrate`].
    pub fn integrate_real<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64, QuadratureError> {
        let mut total = 0.0;
        for (&kappa, &w) in self.nodes.iter().zip(&self.weights) {
            let v = g(kappa);
            if !v.is_finite() {
                return Err(QuadratureError::NonFiniteIntegrand { at: kappa });
            }
            total += v * w;
        }
        Ok(total)
    }
}

/// `int_0^{2k} W(kappa) g(kappa) dkappa` with `samples` nodes of the default
/// order.
pub fn integrate_weighted_recoil<G: Fn(f64) -> Complex64>(
    g: G,
    wavenumber: f64,
    samples: usize,
) -> Result<Complex64, QuadratureError> {
    let rule = GaussLegendre::new(DEFAULT_RULE_ORDER)?;
    RecoilQuadrature::new(wavenumber, samples, &rule).integrate(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rule_is_exact_for_polynomials() {
        for order in [2, 3, 5, 8, 16, 32] {
            let rule = GaussLegendre::new(order).unwrap();
            assert_relative_eq!(rule.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-14);
            for deg in 0..(2 * order) {
                let got: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "order {order} degree {deg}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rule_order_below_two_is_rejected() {
        assert_eq!(GaussLegendre::new(1), Err(QuadratureError::RuleOrderTooLow(1)));
    }

    #[test]
    fn constant_integrand() {
        let rule = GaussLegendre::new(16).unwrap();
        let f = Integrand1D::new(|_| c(1.0, 0.0), 0.0);
        let v = integrate_complex(&f, 0.0, 1.0, &rule).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn quarter_wave_exponential() {
        // int_{-1}^{1} e^{i pi x / 2} dx = 4 / pi
        let rule = GaussLegendre::new(16).unwrap();
        let f = Integrand1D::new(|x| Complex64::from_polar(1.0, PI * x / 2.0), PI / 2.0);
        let v = integrate_complex(&f, -1.0, 1.0, &rule).unwrap();
        assert_relative_eq!(v.re, 4.0 / PI, epsilon = 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn rapidly_oscillating_chirp_matches_closed_form() {
        // int_0^1 e^{i 500 x} dx
        let rule = GaussLegendre::new(16).unwrap();
        let f = Integrand1D::new(|x| Complex64::from_polar(1.0, 500.0 * x), 500.0);
        let v = integrate_complex(&f, 0.0, 1.0, &rule).unwrap();
        let want = (Complex64::from_polar(1.0, 500.0) - 1.0) / c(0.0, 500.0);
        assert!((v - want).norm() < 1e-13);
    }

    #[test]
    fn errors() {
        let rule = GaussLegendre::new(4).unwrap();
        let f = Integrand1D::new(|_| c(1.0, 0.0), 0.0);
        assert!(matches!(
            integrate_complex(&f, 1.0, 1.0, &rule),
            Err(QuadratureError::InvalidInterval { .. })
        ));
        let bad = Integrand1D::new(|x| c(1.0 / (x - 0.5), 0.0), 0.0);
        let rule1 = GaussLegendre::new(3).unwrap();
        assert!(matches!(
            integrate_complex(&bad, 0.0, 1.0, &rule1),
            Err(QuadratureError::NonFiniteIntegrand { .. })
        ));
    }

    #[test]
    fn panel_count_tracks_phase() {
        assert_eq!(panel_count(0.0, 1.0), 1);
        assert_eq!(panel_count(PI / 4.0, 1.0), 1);
        assert_eq!(panel_count(PI, 1.0), 4);
        assert_eq!(panel_count(1000.0, 0.01), 13);
    }

    #[test]
    fn recoil_weight_integral_is_closed_form() {
        // int_0^{2k} (2k^2 + q^2 - 2kq) dq = 8 k^3 / 3
        for k in [0.0628, 1.0, 2.0 * PI, 20.0 * PI] {
            let v = integrate_weighted_recoil(|_| c(1.0, 0.0), k, 64).unwrap();
            assert_relative_eq!(v.re, 8.0 * k * k * k / 3.0, max_relative = 1e-13);
            let v0 = integrate_weighted_recoil(|q| Complex64::from_polar(1.0, q * 0.0), k, 64).unwrap();
            assert_eq!(v, v0);
        }
    }

    #[test]
    fn recoil_phase_integral_against_fine_trapezoid() {
        // lambda = 10 d: brute-force trapezoid at ten times the node count.
        let k = 2.0 * PI / 10.0;
        let d = 1.0;
        let samples = 64;
        let v = integrate_weighted_recoil(|q| Complex64::from_polar(1.0, q * d), k, samples).unwrap();
        let n = 10 * samples * 100;
        let h = 2.0 * k / n as f64;
        let mut brute = c(0.0, 0.0);
        for i in 0..=n {
            let q = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            brute += Complex64::from_polar(1.0, q * d) * (2.0 * k * k + q * q - 2.0 * k * q) * (w * h);
        }
        assert!((v - brute).norm() / brute.norm() < 1e-8);
        let ratio = v.norm() / (8.0 * k.powi(3) / 3.0);
        assert!(ratio > 0.9, "ratio {ratio}");
    }

    #[test]
    fn default_recoil_samples() {
        let order = DEFAULT_RULE_ORDER;
        assert_eq!(RecoilQuadrature::default_samples(2.0 * PI / 0.1, 1.0, order), 1024);
        assert_eq!(RecoilQuadrature::default_samples(2.0 * PI / 100.0, 1.0, order), 64);
        assert_eq!(RecoilQuadrature::required_samples(2.0 * PI / 0.1, 1.0), 320);
        let rule = GaussLegendre::new(order).unwrap();
        assert!(RecoilQuadrature::for_separation(2.0 * PI / 0.1, 1.0, 256, &rule).is_err());
        assert!(RecoilQuadrature::for_separation(2.0 * PI / 0.1, 1.0, 320, &rule).is_ok());
    }

    #[test]
    fn doubling_recoil_nodes_is_converged() {
        let k = 2.0 * PI / 0.1;
        let g = |q: f64| Complex64::from_polar(1.0, q);
        let a = integrate_weighted_recoil(g, k, 1024).unwrap();
        let b = integrate_weighted_recoil(g, k, 2048).unwrap();
        let scale = 8.0 * k.powi(3) / 3.0;
        assert!((a - b).norm() / scale < 1e-12);
    }

    proptest! {
        #[test]
        fn integration_is_linear(
            alpha_re in -3.0..3.0f64, alpha_im in -3.0..3.0f64,
            beta_re in -3.0..3.0f64, beta_im in -3.0..3.0f64,
            freq in 0.0..200.0f64,
        ) {
            let rule = GaussLegendre::new(16).unwrap();
            let alpha = c(alpha_re, alpha_im);
            let beta = c(beta_re, beta_im);
            let f = |x: f64| Complex64::from_polar(1.0, freq * x * x);
            let g = |x: f64| c(x.cos(), x * x);
            let rate = 2.0 * freq;
            let combined = Integrand1D::new(|x| alpha * f(x) + beta * g(x), rate);
            let lhs = integrate_complex(&combined, -1.0, 1.0, &rule).unwrap();
            let rhs = alpha * integrate_complex(&Integrand1D::new(f, rate), -1.0, 1.0, &rule).unwrap()
                + beta * integrate_complex(&Integrand1D::new(g, rate), -1.0, 1.0, &rule).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
