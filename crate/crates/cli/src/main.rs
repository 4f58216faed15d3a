//! `flatland`: spectra, Green's functions and densities for flatland
//! radiative transport, plus a three-solver validation report.
//!
//! Exit codes: 0 ok, 1 configuration error, 2 spectral diagnostic,
//! 3 validation failure, 4 numerical accuracy failure.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod table;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Format, Overrides, RunConfig};
use crate::error::{ExitStatus, Result};

#[derive(Parser, Debug)]
#[command(name = "flatland", version, about = "Flatland radiative transport by singular eigenfunctions")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Single-scattering albedo in (0, 1).
    #[arg(long, global = true)]
    albedo: Option<f64>,
    /// Henyey–Greenstein asymmetry g (needs --order).
    #[arg(long, global = true)]
    hg: Option<f64>,
    /// Truncation order L of the Henyey–Greenstein series.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Explicit cosine coefficients β₀, β₁, …, β_L with β₀ = 1.
    #[arg(long, global = true, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Isotropic scattering (the default when no phase function is given).
    #[arg(long, global = true)]
    isotropic: bool,
    /// Seeding matrix truncation m_B.
    #[arg(long, global = true)]
    mb: Option<usize>,

    /// Distances from the source, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    x_grid: Option<Vec<f64>>,
    /// Relative tolerance between the deterministic solvers in `validate`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    q_tol: Option<f64>,
    #[arg(long, global = true)]
    nu_tol: Option<f64>,
    #[arg(long, global = true)]
    k_tol: Option<f64>,
    /// Monte Carlo acceptance band in standard errors.
    #[arg(long, global = true)]
    sigma_band: Option<f64>,
    /// Monte Carlo histories.
    #[arg(long, global = true)]
    paths: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Half width of the tally shells around each grid point.
    #[arg(long, global = true)]
    shell_width: Option<f64>,
    /// Grid size for `dispersion-scan` and `eigenfunction`.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Separation constant for `eigenfunction`.
    #[arg(long, global = true)]
    nu: Option<f64>,
    /// Upper end of the real-axis branch in `dispersion-scan`.
    #[arg(long, global = true)]
    nu_max: Option<f64>,
    /// Transverse offset of the observation point in `green2d-point`.
    #[arg(long, global = true)]
    y: Option<f64>,
    /// Observation direction in `green2d-point`.
    #[arg(long, global = true)]
    phi: Option<f64>,
    /// Source direction in `green2d-point`.
    #[arg(long, global = true)]
    phi0: Option<f64>,

    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

// The global flags are parsed in the subcommand's context, so each one
// needs to accept negative values itself.
#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Discrete eigenvalues with residuals, derivatives and normalizations.
    #[command(allow_negative_numbers = true)]
    Eigen,
    /// Boundary value Λ⁺ on (0, 1) and Λ on (1, ν_max].
    #[command(allow_negative_numbers = true)]
    DispersionScan,
    /// Tabulated eigenfunctions.
    #[command(allow_negative_numbers = true)]
    Eigenfunction,
    /// Angularly integrated plane-source response.
    #[command(allow_negative_numbers = true)]
    Green1dDensity,
    /// Point-source angular Green's function at (x, y).
    #[command(allow_negative_numbers = true)]
    Green2dPoint,
    /// Energy density from the eigen expansion.
    #[command(allow_negative_numbers = true)]
    Density2d,
    /// Energy density from the Fourier solver.
    #[command(allow_negative_numbers = true)]
    FourierDensity,
    /// Energy density from the Monte Carlo walk.
    #[command(allow_negative_numbers = true)]
    McDensity,
    /// Eigen vs Fourier vs Monte Carlo report.
    #[command(allow_negative_numbers = true)]
    Validate,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            albedo: self.albedo,
            hg: self.hg,
            order: self.order,
            beta: self.beta.clone(),
            isotropic: self.isotropic,
            mb: self.mb,
            x_grid: self.x_grid.clone(),
            tol: self.tol,
            q_tol: self.q_tol,
            nu_tol: self.nu_tol,
            k_tol: self.k_tol,
            sigma_band: self.sigma_band,
            paths: self.paths,
            seed: self.seed,
            shell_width: self.shell_width,
            points: self.points,
            nu: self.nu,
            nu_max: self.nu_max,
            y: self.y,
            phi: self.phi,
            phi0: self.phi0,
            out: self.out.clone(),
            format: self.format,
        }
    }

    fn effective_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(self.overrides())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<ExitStatus> {
    let cfg = cli.effective_config()?;
    if cli.dump_config {
        table::emit(cfg.to_toml()?.as_bytes(), None)?;
        return Ok(ExitStatus::Ok);
    }
    let report = match cli.command {
        Command::Eigen => commands::eigen(&cfg),
        Command::DispersionScan => commands::dispersion_scan(&cfg),
        Command::Eigenfunction => commands::eigenfunction(&cfg),
        Command::Green1dDensity => commands::green1d_density(&cfg),
        Command::Green2dPoint => commands::green2d_point(&cfg),
        Command::Density2d => commands::density2d(&cfg),
        Command::FourierDensity => commands::fourier_density(&cfg),
        Command::McDensity => commands::mc_density(&cfg),
        Command::Validate => validate::validate(&cfg),
    }?;
    table::emit(&report.table.render(cfg.format)?, cfg.out.as_deref())?;
    for n in &report.notes {
        eprintln!("{n}");
    }
    Ok(report.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Config as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
