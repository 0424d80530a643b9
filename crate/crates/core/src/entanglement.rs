//! Joint atom-photon states, reduced density matrices, and branching.
//!
//! The photon states `|gamma_L>`, `|gamma_R>` are not orthogonal in
//! general, so they are expressed in an orthonormal basis built by
//! Gram-Schmidt from `|gamma_L>`:
//!
//! ```text
//! |e1> = |gamma_L>
//! |e2> = (|gamma_R> - Gamma* |gamma_L>) / sqrt(1 - |Gamma|^2)
//! ```
//!
//! with `Gamma = <gamma_R|gamma_L>`. Joint states are ordered
//! `L e1, L e2, R e1, R e2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::apparatus::ValidatedConfig;
use crate::error::{Error, Result};
use crate::patterns::mask_kernel_weight;
use crate::photon_modes::{ImagingKernel, OverlapAmplitude, SincLens};
use crate::quadrature::DEFAULT_RULE_ORDER;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !(n == 2 || n == 4) {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected 2x2 or 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let trace = matrix.trace();
        if (trace - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let out = Self { matrix };
        if let Some(low) = out.eigenvalues().iter().copied().find(|&e| e < -EIGEN_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {low:e}")));
        }
        Ok(out)
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(state: &DVector<Complex64>) -> Result<Self> {
        Self::new(state * state.adjoint())
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// `Tr(rho^2)`, in `[1/dim, 1]`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Purity `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Photon states in the orthonormal basis seeded from one of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSchmidtSeed {
    Left,
    Right,
}

/// Coordinates of `(|gamma_L>, |gamma_R>)` in the orthonormal basis.
fn photon_coordinates(gamma: Complex64, seed: GramSchmidtSeed) -> ([Complex64; 2], [Complex64; 2]) {
    let s = c((1.0 - gamma.norm_sqr()).max(0.0).sqrt());
    match seed {
        // <e1|gamma_R> = <gamma_L|gamma_R> = Gamma*
        GramSchmidtSeed::Left => ([c(1.0), c(0.0)], [gamma.conj(), s]),
        // <e1|gamma_L> = <gamma_R|gamma_L> = Gamma
        GramSchmidtSeed::Right => ([gamma, s], [c(1.0), c(0.0)]),
    }
}

fn check_overlap(gamma: Complex64) -> Result<()> {
    if gamma.norm() > 1.0 + 1e-12 {
        return Err(Error::OverlapOutOfRange(gamma.norm()));
    }
    Ok(())
}

/// `(|L>|gamma_L> + |R>|gamma_R>) / sqrt 2` as a 4-vector.
pub fn joint_state(gamma: Complex64, seed: GramSchmidtSeed) -> Result<DVector<Complex64>> {
    check_overlap(gamma)?;
    let (g_left, g_right) = photon_coordinates(gamma, seed);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(DVector::from_vec(vec![
        g_left[0] * h,
        g_left[1] * h,
        g_right[0] * h,
        g_right[1] * h,
    ]))
}

/// Pure joint density matrix in the basis seeded from `|gamma_L>`.
pub fn joint_density(gamma: &OverlapAmplitude) -> Result<DensityMatrix> {
    joint_density_seeded(gamma.value, GramSchmidtSeed::Left)
}

pub fn joint_density_seeded(gamma: Complex64, seed: GramSchmidtSeed) -> Result<DensityMatrix> {
    check_overlap(gamma)?;
    // 1/2 applied once so the Gamma = 0, 1 limits come out exact
    let (g_left, g_right) = photon_coordinates(gamma, seed);
    let v = DVector::from_vec(vec![g_left[0], g_left[1], g_right[0], g_right[1]]);
    DensityMatrix::new(&v * v.adjoint() * c(0.5))
}

/// Partial trace over the photon factor of a 4x4 atom-photon matrix.
/// Gives `1/2 [[1, Gamma], [Gamma*, 1]]` for [`joint_density`].
pub fn reduce_to_atom(joint: &DensityMatrix) -> Result<DensityMatrix> {
    if joint.dimension() != 4 {
        return Err(Error::InvalidDensityMatrix(format!(
            "partial trace needs a 4x4 matrix, got {0}x{0}",
            joint.dimension()
        )));
    }
    let m = joint.matrix();
    let reduced = DMatrix::from_fn(2, 2, |a, b| (0..2).map(|p| m[(2 * a + p, 2 * b + p)]).sum());
    DensityMatrix::new(reduced)
}

/// Atom matrix after `n` independent scatterings, each contributing a
/// factor `Gamma` to the branch overlap.
pub fn atom_density_after(n_photons: u32, gamma: Complex64) -> Result<DensityMatrix> {
    check_overlap(gamma)?;
    let overlap = gamma.powu(n_photons);
    DensityMatrix::new(DMatrix::from_row_slice(
        2,
        2,
        &[c(0.5), overlap * 0.5, overlap.conj() * 0.5, c(0.5)],
    ))
}

/// `<L, gamma_R, gamma_L | chi_2>` for the two-photon state
/// `(|L gamma_L gamma_L> + |R gamma_R gamma_R>) / sqrt 2`.
///
/// Built from explicit photon coordinates; equals `Gamma / sqrt 2`.
pub fn two_photon_cross_amplitude(gamma: Complex64) -> Result<Complex64> {
    check_overlap(gamma)?;
    let (g_left, g_right) = photon_coordinates(gamma, GramSchmidtSeed::Left);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // chi_2 in atom x photon x photon, index = 4 a + 2 p1 + p2
    let mut chi = [Complex64::new(0.0, 0.0); 8];
    for p1 in 0..2 {
        for p2 in 0..2 {
            chi[2 * p1 + p2] += g_left[p1] * g_left[p2] * h;
            chi[4 + 2 * p1 + p2] += g_right[p1] * g_right[p2] * h;
        }
    }
    // bra: <L| <gamma_R| <gamma_L|
    let mut amp = Complex64::new(0.0, 0.0);
    for p1 in 0..2 {
        for p2 in 0..2 {
            amp += (g_right[p1] * g_left[p2]).conj() * chi[2 * p1 + p2];
        }
    }
    Ok(amp)
}

/// Posterior slit probabilities after one imaging photon at `x_gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhichPath {
    pub left: f64,
    pub right: f64,
}

/// Born-rule posterior with mask-integrated `|h|^2` weights for each slit.
pub fn which_path_posterior(x_gamma: f64, config: &ValidatedConfig) -> Result<WhichPath> {
    which_path_posterior_with(x_gamma, config, &SincLens::new(config.photon_wavelength()))
}

pub fn which_path_posterior_with(
    x_gamma: f64,
    config: &ValidatedConfig,
    kernel: &dyn ImagingKernel,
) -> Result<WhichPath> {
    let [left, right] = mask_kernel_weight(x_gamma, config, kernel, DEFAULT_RULE_ORDER)?;
    let total = left + right;
    if !(total > 0.0) {
        return Err(Error::DegenerateCondition);
    }
    Ok(WhichPath {
        left: left / total,
        right: right / total,
    })
}

/// `1 - |Gamma|^n`: how far the two branch environments are from
/// overlapping after `n` scattered photons.
pub fn branch_distinguishability(n_photons: u32, gamma: Complex64) -> Result<f64> {
    check_overlap(gamma)?;
    Ok(1.0 - gamma.norm().min(1.0).powi(n_photons as i32))
}
