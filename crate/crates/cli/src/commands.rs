//! Command execution. An [`Invocation`] holds everything needed to
//! reproduce a run; it is what the manifest stores.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lightscope::apparatus::{validate_with, ConfigFile, RegimeOverride, ValidatedConfig};
use lightscope::entanglement::{
    atom_density_after, branch_distinguishability, joint_density, reduce_to_atom, which_path_posterior, DensityMatrix,
};
use lightscope::patterns::{AtomPattern, QuadratureSettings, SlitField};
use lightscope::photon_modes::slit_overlap;
use lightscope::semiclassical::PhaseReport;
use lightscope::Error;
use serde::{Deserialize, Serialize};

use crate::output::{write_svg, Table};

const X_HEADER: &str = "x (units of d)";

/// Recoil panels in units of k.
pub const DEFAULT_KAPPAS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];
pub const DEFAULT_X_GAMMAS: [f64; 2] = [0.0, 0.5];
/// Zoomed pattern half-width in fringe periods.
const ZOOM_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CommandSpec {
    Pattern,
    Farfield { kappas: Vec<f64> },
    Imaging { x_gammas: Vec<f64> },
    Decohere,
    OverlapSweep,
    Density,
    Branch { max_photons: u32 },
    Semiclassical,
}

impl CommandSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Pattern => "pattern",
            Self::Farfield { .. } => "farfield",
            Self::Imaging { .. } => "imaging",
            Self::Decohere => "decohere",
            Self::OverlapSweep => "overlap-sweep",
            Self::Density => "density",
            Self::Branch { .. } => "branch",
            Self::Semiclassical => "semiclassical",
        }
    }
}

/// A fully resolved run: the command, the parsed configuration with any
/// command-line grid override applied, and the wavelength list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub command: CommandSpec,
    pub config: ConfigFile,
    /// Photon wavelengths to run; empty means the configured one.
    pub lambdas: Vec<f64>,
    pub override_regime: bool,
    pub svg: bool,
}

impl Invocation {
    pub fn quadrature(&self) -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn overrides(&self) -> RegimeOverride {
        RegimeOverride {
            allow_violations: self.override_regime,
        }
    }

    fn wavelengths(&self) -> Vec<f64> {
        if self.lambdas.is_empty() {
            vec![self.config.apparatus.photon_wavelength]
        } else {
            self.lambdas.clone()
        }
    }

    fn validated(&self, lambda: f64) -> Result<ValidatedConfig> {
        Ok(validate_with(self.config.apparatus.with_wavelength(lambda), self.overrides())?)
    }

    /// Runs the command, writing into `out`. Returns the written file names
    /// relative to `out`.
    pub fn execute(&self, out: &Path) -> Result<Vec<String>> {
        std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        let mut sink = Sink {
            dir: out.to_path_buf(),
            written: Vec::new(),
            svg: self.svg,
        };
        match &self.command {
            CommandSpec::Pattern => self.pattern(&mut sink)?,
            CommandSpec::Farfield { kappas } => self.farfield(kappas, &mut sink)?,
            CommandSpec::Imaging { x_gammas } => self.imaging(x_gammas, &mut sink)?,
            CommandSpec::Decohere => self.decohere(&mut sink)?,
            CommandSpec::OverlapSweep => self.overlap_sweep(&mut sink)?,
            CommandSpec::Density => self.density(&mut sink)?,
            CommandSpec::Branch { max_photons } => self.branch(*max_photons, &mut sink)?,
            CommandSpec::Semiclassical => self.semiclassical(&mut sink)?,
        }
        Ok(sink.written)
    }

    /// Slit amplitudes at the first wavelength; other wavelengths reuse them.
    fn field(&self) -> Result<SlitField> {
        let cfg = self.validated(self.wavelengths()[0])?;
        let grid = self.config.grid(&cfg)?;
        Ok(SlitField::compute(&cfg, &grid, &self.quadrature())?)
    }

    fn fields(&self) -> Result<Vec<SlitField>> {
        let first = self.field()?;
        let mut out = Vec::new();
        for lambda in self.wavelengths() {
            out.push(first.retuned(lambda, self.overrides())?);
        }
        Ok(out)
    }

    fn pattern(&self, sink: &mut Sink) -> Result<()> {
        let field = self.field()?;
        let np = field.no_photon()?;
        let series = [np.single_left, np.single_right, np.coherent, np.incoherent]
            .iter()
            .map(AtomPattern::normalized)
            .collect::<Result<Vec<_>, _>>()?;
        let table = |range: std::ops::Range<usize>| {
            let mut t = Table::new().column(X_HEADER, field.grid().positions()[range.clone()].to_vec());
            for (name, p) in ["single_L", "single_R", "coherent", "incoherent"].iter().zip(&series) {
                t = t.column(format!("{name} (units of 1/d)"), p.values()[range.clone()].to_vec());
            }
            t
        };
        let n = field.grid().len();
        sink.table("pattern.csv", &table(0..n))?;

        let half = ZOOM_PERIODS * field.config().fringe_period();
        let x = field.grid().positions();
        let zoom = x.partition_point(|&v| v < -half)..x.partition_point(|&v| v <= half);
        sink.table("pattern_zoom.csv", &table(zoom.clone()))?;

        let names = ["single_L", "single_R", "coherent", "incoherent"];
        let plot: Vec<(&str, &[f64])> = names.iter().zip(&series).map(|(n, p)| (*n, p.values())).collect();
        sink.svg("pattern.svg", "no photon", x, &plot)?;
        let zoomed: Vec<(&str, &[f64])> = plot.iter().map(|(n, v)| (*n, &v[zoom.clone()])).collect();
        sink.svg("pattern_zoom.svg", "no photon, central fringes", &x[zoom], &zoomed)?;
        Ok(())
    }

    fn farfield(&self, kappas: &[f64], sink: &mut Sink) -> Result<()> {
        let kappas = if kappas.is_empty() { DEFAULT_KAPPAS.to_vec() } else { kappas.to_vec() };
        for &frac in &kappas {
            if !(0.0..=2.0).contains(&frac) {
                return Err(Error::Domain {
                    quantity: "kappa / k",
                    value: frac,
                    lo: 0.0,
                    hi: 2.0,
                }
                .into());
            }
        }
        for field in self.fields()? {
            let lambda = field.config().photon_wavelength();
            let k = field.config().photon_wavenumber();
            let x = field.grid().positions();
            let mut plot = Vec::new();
            for &frac in &kappas {
                let partial = field.farfield_partial(frac * k)?;
                let p = partial.atom_pattern.normalized()?;
                let table = Table::new()
                    .column(X_HEADER, x.to_vec())
                    .column("atom_probability (units of 1/d)", p.values().to_vec())
                    .column("joint_scale (1/d^2)", vec![partial.joint_scale; x.len()]);
                sink.table(&format!("farfield_lambda{lambda}_kappa{frac}k.csv"), &table)?;
                plot.push((format!("kappa={frac}k"), p));
            }
            let average = field.farfield_marginal()?.normalized()?;
            let table = Table::new()
                .column(X_HEADER, x.to_vec())
                .column("atom_probability (units of 1/d)", average.values().to_vec());
            sink.table(&format!("farfield_lambda{lambda}_average.csv"), &table)?;
            plot.push(("average".to_string(), average));
            let series: Vec<(&str, &[f64])> = plot.iter().map(|(n, p)| (n.as_str(), p.values())).collect();
            sink.svg(&format!("farfield_lambda{lambda}.svg"), &format!("far field, lambda = {lambda} d"), x, &series)?;
        }
        Ok(())
    }

    fn imaging(&self, x_gammas: &[f64], sink: &mut Sink) -> Result<()> {
        let x_gammas = if x_gammas.is_empty() {
            DEFAULT_X_GAMMAS.to_vec()
        } else {
            x_gammas.to_vec()
        };
        for field in self.fields()? {
            let lambda = field.config().photon_wavelength();
            let x = field.grid().positions();
            let mut plot = Vec::new();
            for &x_gamma in &x_gammas {
                let partial = field.imaging_partial(x_gamma)?;
                let p = partial.atom_pattern.normalized()?;
                let table = Table::new()
                    .column(X_HEADER, x.to_vec())
                    .column("atom_probability (units of 1/d)", p.values().to_vec())
                    .column("joint_scale (dimensionless)", vec![partial.joint_scale; x.len()]);
                sink.table(&format!("imaging_lambda{lambda}_x{x_gamma}.csv"), &table)?;
                plot.push((format!("x_gamma={x_gamma}"), p));
            }
            let series: Vec<(&str, &[f64])> = plot.iter().map(|(n, p)| (n.as_str(), p.values())).collect();
            sink.svg(&format!("imaging_lambda{lambda}.svg"), &format!("imaging, lambda = {lambda} d"), x, &series)?;
        }
        Ok(())
    }

    fn decohere(&self, sink: &mut Sink) -> Result<()> {
        for field in self.fields()? {
            let lambda = field.config().photon_wavelength();
            let np = field.no_photon()?;
            let decohered = field.decohered()?.normalized()?;
            let coherent = np.coherent.normalized()?;
            let incoherent = np.incoherent.normalized()?;
            let x = field.grid().positions();
            let table = Table::new()
                .column(X_HEADER, x.to_vec())
                .column("decohered (units of 1/d)", decohered.values().to_vec())
                .column("coherent (units of 1/d)", coherent.values().to_vec())
                .column("incoherent (units of 1/d)", incoherent.values().to_vec());
            sink.table(&format!("decohere_lambda{lambda}.csv"), &table)?;
            sink.svg(
                &format!("decohere_lambda{lambda}.svg"),
                &format!("photon ignored, lambda = {lambda} d"),
                x,
                &[
                    ("decohered", decohered.values()),
                    ("coherent", coherent.values()),
                    ("incoherent", incoherent.values()),
                ],
            )?;
        }
        Ok(())
    }

    fn overlap_sweep(&self, sink: &mut Sink) -> Result<()> {
        let lambdas: Vec<f64> = if self.lambdas.is_empty() {
            (0..=40).map(|i| 0.1 * 10f64.powf(i as f64 / 10.0)).collect()
        } else {
            self.lambdas.clone()
        };
        let d = lightscope::apparatus::SLIT_SEPARATION;
        let mut cols: [Vec<f64>; 6] = Default::default();
        for &lambda in &lambdas {
            let gamma = slit_overlap(lambda, d)?;
            let atom = reduce_to_atom(&joint_density(&gamma)?)?;
            for (col, v) in cols.iter_mut().zip([
                lambda / d,
                gamma.value.re,
                gamma.value.im,
                gamma.norm(),
                atom.purity(),
                gamma.norm(),
            ]) {
                col.push(v);
            }
        }
        let names = [
            "lambda (units of d)",
            "re_gamma (dimensionless)",
            "im_gamma (dimensionless)",
            "abs_gamma (dimensionless)",
            "purity (dimensionless)",
            "visibility_prediction (dimensionless)",
        ];
        let table = names
            .iter()
            .zip(cols)
            .fold(Table::new(), |t, (name, col)| t.column(*name, col));
        sink.table("overlap_sweep.csv", &table)
    }

    fn density(&self, sink: &mut Sink) -> Result<()> {
        for lambda in self.wavelengths() {
            let cfg = self.validated(lambda)?;
            let gamma = slit_overlap(lambda, cfg.slit_separation())?;
            let joint = joint_density(&gamma)?;
            let atom = reduce_to_atom(&joint)?;
            let mut cols: [Vec<f64>; 5] = Default::default();
            for (tag, m) in [(4.0, &joint), (2.0, &atom)] {
                let n = m.dimension();
                for i in 0..n {
                    for j in 0..n {
                        let e = m.entry(i, j);
                        for (col, v) in cols.iter_mut().zip([tag, i as f64, j as f64, e.re, e.im]) {
                            col.push(v);
                        }
                    }
                }
            }
            let names = [
                "dimension",
                "row",
                "col",
                "re (dimensionless)",
                "im (dimensionless)",
            ];
            let table = names.iter().zip(cols).fold(Table::new(), |t, (n, c)| t.column(*n, c));
            sink.table(&format!("density_lambda{lambda}.csv"), &table)?;

            let mut text = format!(
                "lambda = {lambda} d\nGamma = <gamma_R|gamma_L> = {:.12e} {:+.12e}i, |Gamma| = {:.12e}\n\n",
                gamma.value.re,
                gamma.value.im,
                gamma.norm()
            );
            text.push_str("joint state, basis (L e1, L e2, R e1, R e2):\n");
            text.push_str(&pretty(&joint));
            text.push_str(&format!("purity = {:.12e}\n\n", joint.purity()));
            text.push_str("atom, basis (L, R):\n");
            text.push_str(&pretty(&atom));
            text.push_str(&format!("purity = {:.12e}\n", atom.purity()));
            let eig = atom.eigenvalues();
            text.push_str(&format!("eigenvalues = {:.12e}, {:.12e}\n", eig[0], eig[1]));
            sink.text(&format!("density_lambda{lambda}.txt"), &text)?;
        }
        Ok(())
    }

    fn branch(&self, max_photons: u32, sink: &mut Sink) -> Result<()> {
        for lambda in self.wavelengths() {
            let cfg = self.validated(lambda)?;
            let gamma = slit_overlap(lambda, cfg.slit_separation())?.value;
            let mut cols: [Vec<f64>; 3] = Default::default();
            for n in 0..=max_photons {
                let rho = atom_density_after(n, gamma)?;
                for (col, v) in cols.iter_mut().zip([
                    n as f64,
                    branch_distinguishability(n, gamma)?,
                    rho.entry(0, 1).norm(),
                ]) {
                    col.push(v);
                }
            }
            let table = Table::new()
                .column("photons", cols[0].clone())
                .column("distinguishability (dimensionless)", cols[1].clone())
                .column("abs_rho_LR (dimensionless)", cols[2].clone());
            sink.table(&format!("branch_lambda{lambda}.csv"), &table)?;

            let xs: Vec<f64> = (0..=12).map(|i| -0.75 + 0.125 * i as f64).collect();
            let mut left = Vec::new();
            let mut right = Vec::new();
            for &x in &xs {
                let p = which_path_posterior(x, &cfg)?;
                left.push(p.left);
                right.push(p.right);
            }
            let table = Table::new()
                .column("x_gamma (units of d)", xs)
                .column("p_left (dimensionless)", left)
                .column("p_right (dimensionless)", right);
            sink.table(&format!("branch_posterior_lambda{lambda}.csv"), &table)?;
        }
        Ok(())
    }

    fn semiclassical(&self, sink: &mut Sink) -> Result<()> {
        for lambda in self.wavelengths() {
            let cfg = self.validated(lambda)?;
            let k = cfg.photon_wavenumber();
            let mut rows = Vec::new();
            for &frac in &DEFAULT_KAPPAS {
                for i in 0..=24 {
                    rows.push(PhaseReport::new(-6.0 + 0.5 * i as f64, frac * k, &cfg));
                }
            }
            let col = |f: fn(&PhaseReport) -> f64| rows.iter().map(f).collect::<Vec<_>>();
            let table = Table::new()
                .column(X_HEADER, col(|r| r.x))
                .column("kappa_x (1/d)", col(|r| r.kappa_x))
                .column("phase_no_recoil (rad)", col(|r| r.phase_no_recoil))
                .column("phase_with_recoil (rad)", col(|r| r.phase_with_recoil))
                .column("deflection (units of d)", col(|r| r.deflection))
                .column("carry_residual (rad)", col(|r| r.carry_residual));
            sink.table(&format!("semiclassical_lambda{lambda}.csv"), &table)?;
        }
        Ok(())
    }
}

fn pretty(m: &DensityMatrix) -> String {
    let n = m.dimension();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let e = m.entry(i, j);
                format!("{:+.6e}{:+.6e}i", e.re, e.im)
            })
            .collect();
        out.push_str("  ");
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}

/// Writes files into the output directory and records their names.
struct Sink {
    dir: PathBuf,
    written: Vec<String>,
    svg: bool,
}

impl Sink {
    fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        table.write(&self.dir.join(name))?;
        self.record(name);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.record(name);
        Ok(())
    }

    fn svg(&mut self, name: &str, title: &str, x: &[f64], series: &[(&str, &[f64])]) -> Result<()> {
        if !self.svg {
            return Ok(());
        }
        if x.len() < 2 {
            bail!("cannot plot fewer than two samples");
        }
        write_svg(&self.dir.join(name), title, x, series)?;
        self.record(name);
        Ok(())
    }

    fn record(&mut self, name: &str) {
        log::info!("wrote {}", self.dir.join(name).display());
        self.written.push(name.to_string());
    }
}
