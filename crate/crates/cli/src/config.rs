//! Run configuration: defaults, then an optional TOML file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use flatland::tolerances::default_mb;
use flatland::Medium;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything a command needs. With neither `hg` nor `beta` set the
/// medium scatters isotropically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub albedo: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Cosine coefficients starting with `β₀ = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    /// Seeding truncation; `4L + 40` when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mb: Option<usize>,
    pub x_grid: Vec<f64>,
    /// Relative tolerance between the two deterministic solvers.
    pub tol: f64,
    /// Relative tolerances of the 2D point response: the outer integral over
    /// the transverse wavenumber `q` and the continuum integral over `ν`.
    pub q_tol: f64,
    pub nu_tol: f64,
    /// Relative tolerance of the radial integral in the Fourier solver.
    pub k_tol: f64,
    /// Monte Carlo acceptance band in standard errors.
    pub sigma_band: f64,
    pub paths: u64,
    pub seed: u64,
    pub shell_width: f64,
    /// Grid size for tabulating commands.
    pub points: usize,
    /// Continuum separation constant for `eigenfunction`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_max: Option<f64>,
    pub y: f64,
    pub phi: f64,
    pub phi0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            albedo: 0.8,
            hg: None,
            order: None,
            beta: None,
            mb: None,
            x_grid: vec![0.75, 1.5, 3.0],
            tol: 1e-4,
            q_tol: 1e-8,
            nu_tol: 1e-10,
            k_tol: 1e-10,
            sigma_band: 3.0,
            paths: 1_000_000,
            seed: 1,
            shell_width: 0.05,
            points: 181,
            nu: None,
            nu_max: None,
            y: 0.0,
            phi: 0.3,
            phi0: 1.2,
            out: None,
            format: Format::Csv,
        }
    }
}

/// Flag values; `None` leaves the file or default value in place.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub albedo: Option<f64>,
    pub hg: Option<f64>,
    pub order: Option<usize>,
    pub beta: Option<Vec<f64>>,
    pub isotropic: bool,
    pub mb: Option<usize>,
    pub x_grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub q_tol: Option<f64>,
    pub nu_tol: Option<f64>,
    pub k_tol: Option<f64>,
    pub sigma_band: Option<f64>,
    pub paths: Option<u64>,
    pub seed: Option<u64>,
    pub shell_width: Option<f64>,
    pub points: Option<usize>,
    pub nu: Option<f64>,
    pub nu_max: Option<f64>,
    pub y: Option<f64>,
    pub phi: Option<f64>,
    pub phi0: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|source| CliError::Parse {
            path: path.to_owned(),
            source,
        })?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                c.schema_version
            )));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Serialize(e.to_string()))
    }

    pub fn apply(&mut self, o: Overrides) -> Result<()> {
        let phase_flags = usize::from(o.isotropic) + usize::from(o.hg.is_some()) + usize::from(o.beta.is_some());
        if phase_flags > 1 {
            return Err(CliError::Usage(
                "--isotropic, --hg and --beta are mutually exclusive".into(),
            ));
        }
        if o.isotropic {
            (self.hg, self.order, self.beta) = (None, None, None);
        }
        if let Some(g) = o.hg {
            (self.hg, self.beta) = (Some(g), None);
        }
        if let Some(b) = o.beta {
            (self.hg, self.order, self.beta) = (None, None, Some(b));
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = o.$f { self.$f = v; })* };
        }
        macro_rules! set_opt {
            ($($f:ident),*) => { $(if o.$f.is_some() { self.$f = o.$f; })* };
        }
        set!(albedo, x_grid, tol, q_tol, nu_tol, k_tol, sigma_band, paths, seed, shell_width, points, y, phi, phi0, format);
        set_opt!(order, mb, nu, nu_max, out);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.hg.is_some() && self.beta.is_some() {
            return bad("give either hg (with order) or beta, not both".into());
        }
        if self.hg.is_some() != self.order.is_some() {
            return bad("hg and order go together".into());
        }
        if self.x_grid.is_empty() || self.x_grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return bad("x_grid must be a nonempty list of positive distances".into());
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad(format!("tol = {} must be finite and nonnegative", self.tol));
        }
        for (name, v) in [
            ("q_tol", self.q_tol),
            ("nu_tol", self.nu_tol),
            ("k_tol", self.k_tol),
            ("sigma_band", self.sigma_band),
            ("shell_width", self.shell_width),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        if self.paths == 0 || self.points < 2 {
            return bad("paths must be positive and points at least 2".into());
        }
        if self.nu_max.is_some_and(|v| !(v > 1.0 && v.is_finite())) {
            return bad("nu_max must exceed 1".into());
        }
        // TOML integers are signed 64-bit.
        if i64::try_from(self.seed).is_err() {
            return bad(format!("seed = {} exceeds the signed 64-bit range", self.seed));
        }
        self.medium().map(|_| ())
    }

    pub fn medium(&self) -> Result<Medium> {
        let m = match (&self.hg, self.order, &self.beta) {
            (Some(g), Some(l), None) => Medium::henyey_greenstein(self.albedo, *g, l),
            (None, None, Some(b)) => Medium::new(self.albedo, b.clone()),
            _ => Medium::isotropic(self.albedo),
        };
        m.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn truncation(&self, medium: &Medium) -> usize {
        self.mb.unwrap_or_else(|| default_mb(medium.order()))
    }
}
