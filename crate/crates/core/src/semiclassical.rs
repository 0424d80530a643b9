//! Narrow-slit phase bookkeeping for a recoiling atom.
//!
//! With `p0 = 2 pi / lambda_dB` and `hbar = 1`, the interferometer phase at
//! detector position `x` is `p0 d x / L` before recoil and
//! `p0 d x / L - kappa d` after a transverse kick `kappa`. The kick also
//! moves the arrival point by `kappa L / p0`, which exactly restores the
//! pre-recoil phase.

use serde::Serialize;

use crate::apparatus::ValidatedConfig;

/// Phase bookkeeping at one detector position and recoil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub x: f64,
    pub kappa_x: f64,
    pub phase_no_recoil: f64,
    pub phase_with_recoil: f64,
    pub deflection: f64,
    pub carry_residual: f64,
}

impl PhaseReport {
    pub fn new(x: f64, kappa_x: f64, config: &ValidatedConfig) -> Self {
        Self {
            x,
            kappa_x,
            phase_no_recoil: phase_no_recoil(x, config),
            phase_with_recoil: phase_with_recoil(x, kappa_x, config),
            deflection: deflection(kappa_x, config),
            carry_residual: phase_carry_check(x, kappa_x, config).residual,
        }
    }
}

/// `p0 d x / L`.
pub fn phase_no_recoil(x: f64, config: &ValidatedConfig) -> f64 {
    config.atom_momentum() * config.slit_separation() * x / config.screen_distance()
}

/// `p0 d x / L - kappa d`.
pub fn phase_with_recoil(x: f64, kappa_x: f64, config: &ValidatedConfig) -> f64 {
    phase_no_recoil(x, config) - kappa_x * config.slit_separation()
}

/// Arrival-point shift `kappa L / p0`.
pub fn deflection(kappa_x: f64, config: &ValidatedConfig) -> f64 {
    kappa_x * config.screen_distance() / config.atom_momentum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseCarry {
    /// Post-recoil phase at the deflected point.
    pub lhs: f64,
    /// Pre-recoil phase at the undeflected point.
    pub rhs: f64,
    pub residual: f64,
}

/// Compares the post-recoil phase at `x + deflection` with the pre-recoil
/// phase at `x`.
pub fn phase_carry_check(x: f64, kappa_x: f64, config: &ValidatedConfig) -> PhaseCarry {
    let lhs = phase_with_recoil(x + deflection(kappa_x, config), kappa_x, config);
    let rhs = phase_no_recoil(x, config);
    PhaseCarry {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SloppyArgument {
    /// `p_x -> p_x + kappa` inserted into the pre-recoil phase at the
    /// original `x`: `phase_no_recoil(x) + kappa d`.
    pub naive_phase: f64,
    /// The phase the atom actually carries: `phase_no_recoil(x)`.
    pub correct_phase: f64,
}

impl SloppyArgument {
    pub fn discrepancy(&self) -> f64 {
        self.naive_phase - self.correct_phase
    }
}

/// The naive substitution only relabels the phase-versus-angle relation:
/// `naive_phase` equals the unperturbed phase at `x + deflection`.
pub fn sloppy_argument_demo(x: f64, kappa_x: f64, config: &ValidatedConfig) -> SloppyArgument {
    SloppyArgument {
        naive_phase: phase_no_recoil(x, config) + kappa_x * config.slit_separation(),
        correct_phase: phase_no_recoil(x, config),
    }
}

/// Phase error from a longitudinal kick `kappa_z`: `(x / L) kappa_z d`.
pub fn longitudinal_smearing(x: f64, kappa_z: f64, config: &ValidatedConfig) -> f64 {
    x / config.screen_distance() * kappa_z * config.slit_separation()
}

/// Smearing below this is treated as negligible.
pub const SMEARING_THRESHOLD: f64 = std::f64::consts::PI / 10.0;

pub fn smearing_negligible(x: f64, kappa_z: f64, config: &ValidatedConfig) -> bool {
    longitudinal_smearing(x, kappa_z, config).abs() < SMEARING_THRESHOLD
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apparatus::{validate, ApparatusConfig};
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use std::f64::consts::PI;

    fn paper() -> ValidatedConfig {
        validate(ApparatusConfig::default()).unwrap()
    }

    #[test]
    fn no_recoil_phase() {
        let cfg = paper();
        assert_eq!(phase_no_recoil(0.0, &cfg), 0.0);
        let period = cfg.fringe_period();
        assert!((phase_no_recoil(period, &cfg) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn with_recoil_phase() {
        let cfg = paper();
        assert_eq!(phase_with_recoil(0.37, 0.0, &cfg), phase_no_recoil(0.37, &cfg));
        assert!((phase_with_recoil(0.0, 2.0 * PI, &cfg) + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn deflection_values() {
        let cfg = paper();
        assert_eq!(deflection(0.0, &cfg), 0.0);
        let k = cfg.photon_wavenumber();
        assert!((deflection(2.0 * k, &cfg) - 0.8).abs() < 1e-12);
        assert!((deflection(3.0, &cfg) - 3.0 * deflection(1.0, &cfg)).abs() < 1e-15);
    }

    #[test]
    fn sloppy_argument_values() {
        let cfg = paper();
        let zero = sloppy_argument_demo(0.2, 0.0, &cfg);
        assert_eq!(zero.naive_phase, zero.correct_phase);
        let full = sloppy_argument_demo(0.2, 2.0 * PI, &cfg);
        assert!((full.discrepancy() - 2.0 * PI).abs() < 1e-12);
        // naive bookkeeping reproduces the unperturbed phase at the deflected point
        let kappa = 17.0;
        let s = sloppy_argument_demo(0.1, kappa, &cfg);
        assert!((s.naive_phase - phase_no_recoil(0.1 + deflection(kappa, &cfg), &cfg)).abs() < 1e-10);
        for kappa in [0.0, 1.0, 30.0, 125.0] {
            assert_eq!(sloppy_argument_demo(0.1, kappa, &cfg).correct_phase, s.correct_phase);
        }
    }

    #[test]
    fn longitudinal_smearing_values() {
        let cfg = paper();
        let lambda = cfg.photon_wavelength();
        let d = cfg.slit_separation();
        let l = cfg.screen_distance();
        let kz = 2.0 * PI / lambda;
        assert_eq!(longitudinal_smearing(0.0, kz, &cfg), 0.0);
        assert!((longitudinal_smearing(l * lambda / d, kz, &cfg) - 2.0 * PI).abs() < 1e-12);
        let x = l * lambda / (10.0 * d);
        assert!((longitudinal_smearing(x, kz, &cfg) - PI / 5.0).abs() < 1e-12);
        assert!(!smearing_negligible(x, kz, &cfg));
        assert!(smearing_negligible(x / 4.0, kz, &cfg));
    }

    #[test]
    fn phase_carry_sweep() {
        let cfg = paper();
        let k = cfg.photon_wavenumber();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = rng.gen_range(-6.0..=6.0);
            let kappa = rng.gen_range(0.0..=2.0 * k);
            worst = worst.max(phase_carry_check(x, kappa, &cfg).residual);
        }
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn report_fields() {
        let cfg = paper();
        let r = PhaseReport::new(0.5, 10.0, &cfg);
        assert!(r.carry_residual < 1e-12);
        assert_eq!(r.deflection, deflection(10.0, &cfg));
        assert!([r.phase_no_recoil, r.phase_with_recoil, r.deflection].iter().all(|v| v.is_finite()));
    }

    proptest! {
        #[test]
        fn phase_carry_holds(x in -6.0..6.0f64, frac in 0.0..=1.0f64) {
            let cfg = paper();
            let kappa = 2.0 * cfg.photon_wavenumber() * frac;
            prop_assert!(phase_carry_check(x, kappa, &cfg).residual < 1e-10);
        }
    }
}
