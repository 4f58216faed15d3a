use std::f64::consts::PI;

use flatland::dispersion::{big_lambda, count_roots, find_discrete_eigenvalues, lambda_boundary};
use flatland::eigenfunctions::{discrete_mode_value, eigenfunction_continuum, normalization};
use flatland::fourier_oracle::density_fourier_with_tolerance;
use flatland::greens::{self, density_profile_eigen, green1d_density_with_error, PointOptions};
use flatland::montecarlo::{run_density, McConfig, McEstimate};
use flatland::quadrature::Tolerance;
use flatland::{DispersionAnalysis, Medium};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{ExitStatus, Result};
use crate::table::Table;

/// Command result: the table, diagnostics for stderr, and the exit status.
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
    pub status: ExitStatus,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self { table, notes: Vec::new(), status: ExitStatus::Ok }
    }
}

fn spectrum(cfg: &RunConfig, medium: &Medium) -> Result<DispersionAnalysis> {
    Ok(find_discrete_eigenvalues(medium, cfg.truncation(medium))?)
}

pub fn eigen(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let a = spectrum(cfg, &medium)?;
    let mut t = Table::new(&["j", "nu", "lambda_residual", "dlambda_dnu", "normalization"]);
    for (j, &nu) in a.eigenvalues().iter().enumerate() {
        t.push(vec![
            j.into(),
            nu.into(),
            a.residuals()[j].into(),
            a.derivatives()[j].into(),
            normalization(&a, nu)?.into(),
        ]);
    }
    let l = medium.order();
    let mut report = Report::ok(t);
    report.notes.push(format!("M = {} (L = {l})", a.count()));
    report.notes.extend(a.warnings().iter().cloned());
    let winding = count_roots(&medium)?;
    if a.count() > l + 1 || winding != a.count() {
        report.notes.push(format!(
            "root count diagnostic: found {}, argument principle {winding}, bound L + 1 = {}",
            a.count(),
            l + 1
        ));
        report.status = ExitStatus::Spectral;
    }
    Ok(report)
}

/// `Λ⁺` on `(0, 1)` and `Λ` on `(1, ν_max]`.
pub fn dispersion_scan(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let n = cfg.points;
    let nu_max = match cfg.nu_max {
        Some(v) => v,
        None => spectrum(cfg, &medium)?.largest().map_or(2.0, |v| (1.25 * v).max(2.0)),
    };
    let mut t = Table::new(&["branch", "nu", "re", "im"]);
    for i in 0..n {
        let nu = (i as f64 + 0.5) / n as f64;
        let (plus, _) = lambda_boundary(&medium, nu)?;
        t.push(vec!["boundary".into(), nu.into(), plus.re.into(), plus.im.into()]);
    }
    for i in 1..=n {
        let nu = 1.0 + (nu_max - 1.0) * i as f64 / n as f64;
        let v = big_lambda(&medium, Complex64::from(nu))?;
        t.push(vec!["real".into(), nu.into(), v.re.into(), v.im.into()]);
    }
    Ok(Report::ok(t))
}

/// Discrete modes `φ(±ν_j, φ)` on a grid over `[−π, π]`, or the
/// decomposition of one continuum mode when `nu` is in `(−1, 1)`.
pub fn eigenfunction(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let n = cfg.points;
    let grid: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    let mut t = Table::new(&["nu", "phi", "value", "part"]);
    if let Some(nu) = cfg.nu.filter(|v| v.abs() < 1.0) {
        let e = eigenfunction_continuum(&medium, nu)?;
        for &phi in &grid {
            t.push(vec![nu.into(), phi.into(), e.regular_coefficient(phi).into(), "pv_numerator".into()]);
        }
        for phi in e.singular_directions().into_iter().flatten() {
            t.push(vec![nu.into(), phi.into(), e.delta_weight().into(), "delta_weight".into()]);
        }
        return Ok(Report::ok(t));
    }
    let a = spectrum(cfg, &medium)?;
    let roots: Vec<f64> = match cfg.nu {
        Some(nu) => {
            a.index_of(nu).ok_or(flatland::Error::NotInSpectrum(nu))?;
            vec![nu]
        }
        None => a.eigenvalues().iter().flat_map(|&v| [v, -v]).collect(),
    };
    for nu in roots {
        for &phi in &grid {
            t.push(vec![nu.into(), phi.into(), discrete_mode_value(&a, nu, phi)?.into(), "discrete".into()]);
        }
    }
    Ok(Report::ok(t))
}

pub fn green1d_density(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let a = spectrum(cfg, &medium)?;
    let vals: Vec<(f64, f64)> = cfg
        .x_grid
        .par_iter()
        .map(|&x| green1d_density_with_error(&a, x))
        .collect::<flatland::Result<_>>()?;
    let mut t = Table::new(&["x", "value", "method", "err"]);
    for (&x, (v, e)) in cfg.x_grid.iter().zip(vals) {
        t.push(vec![x.into(), v.into(), "eigen".into(), e.into()]);
    }
    Ok(Report::ok(t))
}

pub fn green2d_point(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let a = spectrum(cfg, &medium)?;
    let opts = PointOptions {
        tolerance: Tolerance::new(1e-14, cfg.q_tol),
        inner: Tolerance::new(1e-15, cfg.nu_tol),
        ..PointOptions::default()
    };
    let vals = cfg
        .x_grid
        .par_iter()
        .map(|&x| greens::green2d_point(&a, [x, cfg.y], cfg.phi, cfg.phi0, opts))
        .collect::<flatland::Result<Vec<_>>>()?;
    let mut t = Table::new(&["x", "y", "phi", "phi0", "uncollided", "smooth", "method", "err"]);
    for (&x, g) in cfg.x_grid.iter().zip(vals) {
        t.push(vec![
            x.into(),
            cfg.y.into(),
            cfg.phi.into(),
            cfg.phi0.into(),
            g.uncollided.into(),
            g.smooth.into(),
            "eigen".into(),
            g.error.into(),
        ]);
    }
    Ok(Report::ok(t))
}

fn density_table(x: &[f64], u: &[f64], method: &str, err: &[f64]) -> Table {
    let mut t = Table::new(&["x", "u", "method", "err"]);
    for i in 0..x.len() {
        t.push(vec![x[i].into(), u[i].into(), method.into(), err[i].into()]);
    }
    t
}

pub fn density2d(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let a = spectrum(cfg, &medium)?;
    let p = density_profile_eigen(&a, &cfg.x_grid)?;
    Ok(Report::ok(density_table(&p.x, &p.u, "eigen", &p.err)))
}

pub(crate) fn fourier_values(cfg: &RunConfig, medium: &Medium) -> Vec<flatland::Result<(f64, f64)>> {
    let tol = Tolerance::new(1e-13, cfg.k_tol);
    cfg.x_grid
        .par_iter()
        .map(|&x| density_fourier_with_tolerance(medium, x, tol))
        .collect()
}

pub fn fourier_density(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let vals = fourier_values(cfg, &medium).into_iter().collect::<flatland::Result<Vec<_>>>()?;
    let u: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let err: Vec<f64> = vals.iter().map(|v| v.1).collect();
    Ok(Report::ok(density_table(&cfg.x_grid, &u, "fourier", &err)))
}

/// Runs the walk on shells of width `2·shell_width` centered on the grid
/// points; returns the estimate and, per grid point, its shell index.
pub(crate) fn mc_run(cfg: &RunConfig, medium: &Medium) -> Result<(McEstimate, Vec<usize>)> {
    let mut centers = cfg.x_grid.clone();
    centers.sort_by(f64::total_cmp);
    centers.dedup();
    let edges = McConfig::shells_around(&centers, cfg.shell_width)?;
    let est = run_density(&McConfig::new(medium.clone(), cfg.paths, cfg.seed, edges)?)?;
    let index = cfg
        .x_grid
        .iter()
        .map(|&x| {
            est.shell_centers
                .iter()
                .position(|&c| (c - x).abs() <= 1e-12 * x.max(1.0))
                .expect("every grid point has a shell")
        })
        .collect();
    Ok((est, index))
}

pub fn mc_density(cfg: &RunConfig) -> Result<Report> {
    let medium = cfg.medium()?;
    let (est, index) = mc_run(cfg, &medium)?;
    let mut t = Table::new(&["shell_center", "u", "sigma", "n_paths", "seed"]);
    for (&x, &j) in cfg.x_grid.iter().zip(&index) {
        t.push(vec![x.into(), est.u[j].into(), est.sigma[j].into(), est.n_paths.into(), cfg.seed.into()]);
    }
    Ok(Report::ok(t))
}
