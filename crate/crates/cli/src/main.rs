//! Experiment recipes for the exterior cloak library.
//!
//! Every command writes into `--out` and finishes with a `manifest.json`
//! listing each file and its parameters. Exit codes: 0 on success, 2 for
//! invalid configuration, 3 for numerical failures.

mod config;
mod elastic;
mod helm;
mod laplace;
mod manifest;
mod poly;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use config::{Settings, ValidationError};
use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(name = "excloak", version, about = "Active exterior cloaking experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Wavelength.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Device distance from the origin (default 6 lambda).
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Tetrahedron circumradius (default delta / 3).
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Plane-wave direction `x,y,z`, normalised on input.
    #[arg(long, global = true, allow_hyphen_values = true)]
    incident_dir: Option<String>,
    /// Level of `|u_d|` for the extended-device map.
    #[arg(long, global = true)]
    level: Option<f64>,
    /// Slice heights in units of sigma, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    slice_z: Option<String>,
    /// Samples per axis.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Extra `key=value` settings (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// |P_{n,s}| and |P_{n,s} - 1| maps, level masks and the region boundary.
    PolyMap,
    /// Quasistatic cloak of a near-resonant disk with the probe u_0 = x.
    LaplaceDemo,
    /// Constant-z slices of the device and total fields.
    HelmSlices,
    /// Interior residual, exterior leakage and open area over a delta sweep.
    HelmPerf,
    /// Tetrahedron, device positions and ball radii.
    TetraGeom,
    /// Torque-spring condensation and tensor transformation checks.
    ElasticVerify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::PolyMap => "poly-map",
            Command::LaplaceDemo => "laplace-demo",
            Command::HelmSlices => "helm-slices",
            Command::HelmPerf => "helm-perf",
            Command::TetraGeom => "tetra-geom",
            Command::ElasticVerify => "elastic-verify",
        }
    }
}

fn settings(common: &Common) -> anyhow::Result<Settings> {
    let mut cfg = match &common.config {
        Some(path) => Settings::read(path)?,
        None => Settings::default(),
    };
    let mut flags = Settings::default();
    let numbers = [("lambda", common.lambda), ("delta", common.delta), ("sigma", common.sigma), ("level", common.level)];
    for (key, value) in numbers {
        if let Some(v) = value {
            flags.set(key, &v.to_string());
        }
    }
    if let Some(v) = &common.incident_dir {
        flags.set("incident_dir", v);
    }
    if let Some(v) = &common.slice_z {
        flags.set("slice_z", v);
    }
    if let Some(v) = common.resolution {
        flags.set("resolution", &v.to_string());
    }
    for pair in &common.set {
        flags.set_pair(pair)?;
    }
    cfg.merge(&flags);
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<PathBuf> {
    let cfg = settings(&cli.common)?;
    let params: serde_json::Map<String, Value> =
        cfg.entries().iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let mut manifest = Manifest::new(&cli.common.out, cli.command.name(), Value::Object(params))?;
    match cli.command {
        Command::PolyMap => poly::run(&cfg, &mut manifest)?,
        Command::LaplaceDemo => laplace::run(&cfg, &mut manifest)?,
        Command::HelmSlices => helm::run_slices(&cfg, &mut manifest)?,
        Command::HelmPerf => helm::run_perf(&cfg, &mut manifest)?,
        Command::TetraGeom => helm::run_geometry(&cfg, &mut manifest)?,
        Command::ElasticVerify => elastic::run(&cfg, &mut manifest)?,
    }
    manifest.finish()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ValidationError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
