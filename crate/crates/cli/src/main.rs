//! `mcurve`: generate, analyze, fit and render monotone-curvature curves.
//!
//! Exit codes: 0 success, 1 bad arguments or input, 2 outside the curve's
//! domain, 3 degenerate data, 4 no solution or empty drawable region.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::commands::Failure;
use crate::config::{Config, OUT_DIR_ENV};

#[derive(Parser, Debug)]
#[command(name = "mcurve", version, about = "Monotone-curvature curves: generate, analyze, fit, render")]
struct Cli {
    /// `key = value` file with tol, samples, out_dir, lambda_min, lambda_max.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides MCURVE_OUT_DIR and the config file).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample a curve of the family and write it as CSV.
    Curve(commands::CurveArgs),
    /// Logarithmic curvature graph of a family member or a CSV curve.
    Lcg(commands::LcgArgs),
    /// Fit a segment between two points with given tangent directions.
    Fit(commands::FitArgs),
    /// Chord angles reachable for a turning angle.
    Region(commands::RegionArgs),
    /// Sample a quaternion integral curve in 3D.
    Qi(commands::QiArgs),
    /// Place primitives along a curve.
    Ornament(commands::OrnamentArgs),
    /// Check that curvature is monotone.
    Check(commands::CheckArgs),
    /// Render curves as SVG with a stroke-width ladder.
    Plot(commands::PlotArgs),
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::args(format!("cannot read config {}: {e}", path.display())))?;
            Config::parse(&text).map_err(Failure::args)?
        }
        None => Config::default(),
    };
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()) {
        cfg.out_dir = PathBuf::from(dir);
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    cfg.validate().map_err(Failure::args)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli)?;
    let ctx = commands::Context { cfg, json: cli.json };
    match &cli.cmd {
        Cmd::Curve(a) => commands::curve(&ctx, a),
        Cmd::Lcg(a) => commands::lcg(&ctx, a),
        Cmd::Fit(a) => commands::fit(&ctx, a),
        Cmd::Region(a) => commands::region(&ctx, a),
        Cmd::Qi(a) => commands::qi(&ctx, a),
        Cmd::Ornament(a) => commands::ornament(&ctx, a),
        Cmd::Check(a) => commands::check(&ctx, a),
        Cmd::Plot(a) => commands::plot(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
