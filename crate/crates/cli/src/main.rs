mod args;
mod commands;
mod manifest;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Parser;
use lightscope::apparatus::ConfigFile;
use lightscope::Error;

use args::{Cli, Command, GlobalArgs};
use commands::{CommandSpec, Invocation};
use manifest::RunManifest;

/// A replayed run whose outputs differ from the originals.
#[derive(Debug)]
struct ReplayMismatch(Vec<String>);

impl std::fmt::Display for ReplayMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "replayed outputs differ: {}", self.0.join(", "))
    }
}

impl std::error::Error for ReplayMismatch {}

fn load_config(global: &GlobalArgs) -> Result<ConfigFile> {
    let mut config = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            text.parse::<ConfigFile>()
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    if let Some(points) = global.grid_points {
        config.grid_points = Some(points);
    }
    Ok(config)
}

fn invocation(global: &GlobalArgs, command: &Command) -> Result<Invocation> {
    let command = match command {
        Command::Pattern => CommandSpec::Pattern,
        Command::Farfield { kappas } => CommandSpec::Farfield { kappas: kappas.clone() },
        Command::Imaging { x_gammas } => CommandSpec::Imaging {
            x_gammas: x_gammas.clone(),
        },
        Command::Decohere => CommandSpec::Decohere,
        Command::OverlapSweep => CommandSpec::OverlapSweep,
        Command::Density => CommandSpec::Density,
        Command::Branch { max_photons } => CommandSpec::Branch {
            max_photons: *max_photons,
        },
        Command::Semiclassical => CommandSpec::Semiclassical,
        Command::Replay { .. } => unreachable!("replay is handled separately"),
    };
    Ok(Invocation {
        command,
        config: load_config(global)?,
        lambdas: global.lambdas.clone(),
        override_regime: global.override_regime,
        svg: global.svg,
    })
}

fn run(invocation: &Invocation, out: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let outputs = invocation.execute(out)?;
    let manifest = RunManifest {
        command: invocation.command.name().to_string(),
        invocation: invocation.clone(),
        quadrature: invocation.quadrature(),
        outputs,
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: rayon::current_num_threads(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    manifest.write(out)?;
    Ok(manifest)
}

fn replay(manifest_path: &Path, out: Option<&PathBuf>) -> Result<()> {
    let original = RunManifest::read(manifest_path)?;
    let source_dir = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let out = out.cloned().unwrap_or_else(|| source_dir.clone());
    let replayed = run(&original.invocation, &out)?;
    let same_dir = std::fs::canonicalize(&out).ok() == std::fs::canonicalize(&source_dir).ok();
    if same_dir {
        return Ok(());
    }
    let mut differing = Vec::new();
    for name in &replayed.outputs {
        let a = std::fs::read(source_dir.join(name)).with_context(|| format!("reading original {name}"))?;
        let b = std::fs::read(out.join(name))?;
        if a != b {
            differing.push(name.clone());
        }
    }
    if replayed.outputs != original.outputs {
        differing.push("output list".to_string());
    }
    if !differing.is_empty() {
        return Err(ReplayMismatch(differing).into());
    }
    println!("replayed {} outputs, byte-identical", replayed.outputs.len());
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            bail!(Error::InvalidParameter {
                name: "threads",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match &cli.command {
        Command::Replay { manifest } => replay(manifest, cli.global.out.as_ref()),
        command => {
            let invocation = invocation(&cli.global, command)?;
            let out = cli.global.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let manifest = run(&invocation, &out)?;
            for name in &manifest.outputs {
                println!("{}", out.join(name).display());
            }
            Ok(())
        }
    }
}

/// 2 for usage, configuration and IO problems, 1 for numerical failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::InvalidParameter { .. } | Error::Regime(_) | Error::ConfigParse { .. } | Error::Domain { .. } => 2,
            _ => 1,
        };
    }
    if err.downcast_ref::<ReplayMismatch>().is_some() {
        return 1;
    }
    if err.chain().any(|c| c.is::<std::io::Error>() || c.is::<serde_json::Error>()) {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
