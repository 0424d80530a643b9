use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lightscope", version, about = "Two-slit atom interference with a scattered photon")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// `key = value` apparatus file; defaults are used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing [default: current directory;
    /// for replay, the manifest's directory].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Photon wavelength in units of d; repeat to run several. Overrides the
    /// config value.
    #[arg(long = "lambda", global = true, value_name = "LAMBDA")]
    pub lambdas: Vec<f64>,

    /// Number of detector samples (odd).
    #[arg(long, global = true, value_name = "N")]
    pub grid_points: Option<usize>,

    /// Also write SVG line plots.
    #[arg(long, global = true)]
    pub svg: bool,

    /// Run even when the wavelength violates the regime checks.
    #[arg(long, global = true)]
    pub override_regime: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-slit, coherent and incoherent patterns with no photon.
    Pattern,
    /// Patterns conditioned on far-field photon detection, plus their average.
    Farfield {
        /// Recoil in units of k, in [0, 2]; repeatable.
        #[arg(long = "kappa", value_name = "KAPPA")]
        kappas: Vec<f64>,
    },
    /// Patterns conditioned on imaging detection at x_gamma.
    Imaging {
        /// Image-plane position in units of d; repeatable.
        #[arg(long = "xgamma", value_name = "X", allow_negative_numbers = true)]
        x_gammas: Vec<f64>,
    },
    /// Pattern with the scattered photon ignored.
    Decohere,
    /// Slit overlap, purity and predicted visibility against wavelength.
    OverlapSweep,
    /// Joint and reduced density matrices.
    Density,
    /// Branch distinguishability against photon number, and which-path
    /// posteriors.
    Branch {
        /// Largest photon number in the table.
        #[arg(long, default_value_t = 10)]
        max_photons: u32,
    },
    /// Narrow-slit phase bookkeeping table.
    Semiclassical,
    /// Re-run a previous invocation from its manifest.
    Replay {
        manifest: PathBuf,
    },
}
