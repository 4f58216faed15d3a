//! Energy density around an isotropic point source.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::dispersion::DispersionAnalysis;
use crate::eigenfunctions::{continuum_normalization_open, normalization};
use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::special::bessel_k0_scaled;

use super::continuum_integral;

/// Solver that produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityMethod {
    Eigen,
    Fourier,
    Mc,
}

impl fmt::Display for DensityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Eigen => "eigen",
            Self::Fourier => "fourier",
            Self::Mc => "mc",
        })
    }
}

/// Tabulated density `u(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub method: Vec<DensityMethod>,
    pub err: Vec<f64>,
}

impl DensityProfile {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// True when `u > 0` everywhere and `u` decreases with `|x|`.
    pub fn is_positive_decreasing(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.x[a].abs().total_cmp(&self.x[b].abs()));
        self.u.iter().all(|&u| u > 0.0)
            && idx.windows(2).all(|w| self.u[w[1]] <= self.u[w[0]])
    }
}

const TOL: Tolerance = Tolerance::new(1e-15, 1e-11);

// K₀(x/ν)/ν with the exponential applied after scaling, so that tiny ν
// gives a clean zero instead of an overflow in the scaled function.
fn k0_over_nu(x: f64, nu: f64) -> f64 {
    let t = x / nu;
    if t > 700.0 {
        return 0.0;
    }
    bessel_k0_scaled(t).map_or(0.0, |k| k * (-t).exp() / nu)
}

/// `u(x) = (1/π)[Σ_j K₀(x/ν_j)/(ν_j N(ν_j)) + ∫₀¹ K₀(x/ν)/(ν N(ν)) dν]`.
pub fn energy_density_2d(analysis: &DispersionAnalysis, x: f64) -> Result<f64> {
    Ok(energy_density_with_error(analysis, x)?.0)
}

pub(crate) fn energy_density_with_error(
    analysis: &DispersionAnalysis,
    x: f64,
) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "x > 0",
        });
    }
    let medium = analysis.medium();
    let mut discrete = 0.0;
    for &nu in analysis.eigenvalues() {
        discrete += k0_over_nu(x, nu) / normalization(analysis, nu)?;
    }
    let (cont, err) = continuum_integral(
        |nu| k0_over_nu(x, nu) / continuum_normalization_open(medium, nu),
        &[],
        TOL,
        "point-source continuum integral",
    )?;
    Ok(((discrete + cont) / PI, err / PI))
}

/// [`energy_density_2d`] on a grid, evaluated in parallel.
pub fn density_profile_eigen(analysis: &DispersionAnalysis, xs: &[f64]) -> Result<DensityProfile> {
    let vals: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| energy_density_with_error(analysis, x))
        .collect::<Result<_>>()?;
    Ok(DensityProfile {
        x: xs.to_vec(),
        u: vals.iter().map(|v| v.0).collect(),
        method: vec![DensityMethod::Eigen; xs.len()],
        err: vals.iter().map(|v| v.1).collect(),
    })
}
