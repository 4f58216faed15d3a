//! Singular eigenfunctions `φ(ν, φ)`, complex angles, and the
//! normalization factors `N(ν)` of the full-range orthogonality relation.
//!
//! For `ν` in the continuum `(−1, 1)` an eigenfunction is a distribution:
//! a principal-value part `(ϖν/2π) g(ν, φ) / (ν − cos φ)` plus
//! `w(ν) δ(ν − cos φ)` with weight `w = √(1−ν²) λ(ν) / 2`. Discrete modes
//! (`|ν| > 1`) are smooth functions of the angle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dispersion::{boundary_product, boundary_product_open, little_lambda, DispersionAnalysis};
use crate::error::{Error, Result};
use crate::polynomials::{chebyshev_table, g_function, Medium, Scalar};

/// Angle `φ_z` with `cos φ_z = z` and `Re φ_z ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAngle(pub Complex64);

impl ComplexAngle {
    /// Real arguments use `arccos ν` on `[−1, 1]`, `i·arccosh ν` for
    /// `ν > 1` and `π + i·arccosh|ν|` for `ν < −1`; other points use the
    /// principal inverse cosine.
    pub fn of(z: Complex64) -> Self {
        if z.im == 0.0 {
            return Self::of_real(z.re);
        }
        Self(z.acos())
    }

    pub fn of_real(nu: f64) -> Self {
        let v = if nu.abs() <= 1.0 {
            Complex64::new(nu.acos(), 0.0)
        } else if nu > 1.0 {
            Complex64::new(0.0, nu.acosh())
        } else {
            Complex64::new(PI, (-nu).acosh())
        };
        Self(v)
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Discrete or continuum member of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Discrete,
    Continuum,
}

/// `(ϖν/2π) g(ν, φ) / (ν − cos φ)`: the full discrete mode, or the
/// principal-value part of a continuum mode away from its singularity.
pub fn mode_value<T: Scalar + std::ops::Div<Output = T>>(medium: &Medium, nu: f64, phi: T) -> T {
    let num = g_function(medium, T::from(nu), phi) * (medium.albedo() * nu / TAU);
    num / (T::from(nu) - phi.cos())
}

/// `g(±ν_j, φ)` from the stored minimal `γ_m`, with `γ_m(−ν) = (−1)^m γ_m(ν)`.
fn discrete_g<T: Scalar>(analysis: &DispersionAnalysis, j: usize, negative: bool, phi: T) -> T {
    let medium = analysis.medium();
    let gam = analysis.gammas(j);
    let mut s = T::from(1.0);
    for m in 1..=medium.order() {
        let sign = if negative && m % 2 == 1 { -1.0 } else { 1.0 };
        s = s + (phi * m as f64).cos() * (2.0 * sign * medium.beta(m) * gam[m]);
    }
    s
}

/// [`mode_value`] for a discrete `ν = ±ν_j`, accurate at large `L` where the
/// forward `γ` recurrence loses the decaying solution.
pub fn discrete_mode_value<T: Scalar + std::ops::Div<Output = T>>(
    analysis: &DispersionAnalysis,
    nu: f64,
    phi: T,
) -> Result<T> {
    let j = analysis.index_of(nu).ok_or(Error::NotInSpectrum(nu))?;
    let v = if nu < 0.0 { -analysis.eigenvalues()[j] } else { analysis.eigenvalues()[j] };
    let num = discrete_g(analysis, j, nu < 0.0, phi) * (analysis.medium().albedo() * v / TAU);
    Ok(num / (T::from(v) - phi.cos()))
}

/// `g(±ν_j, φ)` at a complex angle, from the stored minimal `γ_m`.
pub fn discrete_g_function<T: Scalar>(analysis: &DispersionAnalysis, nu: f64, phi: T) -> Result<T> {
    let j = analysis.index_of(nu).ok_or(Error::NotInSpectrum(nu))?;
    Ok(discrete_g(analysis, j, nu < 0.0, phi))
}

/// Value of the `j`-th discrete eigenfunction (positive root `ν_j`) at a
/// possibly complex angle.
pub fn eigenfunction_discrete(
    analysis: &DispersionAnalysis,
    j: usize,
    phi: Complex64,
) -> Result<Complex64> {
    let nu = discrete_root(analysis, j)?;
    discrete_mode_value(analysis, nu, phi)
}

fn discrete_root(analysis: &DispersionAnalysis, j: usize) -> Result<f64> {
    analysis
        .eigenvalues()
        .get(j)
        .copied()
        .ok_or(Error::Domain {
            what: "discrete index j",
            value: j as f64,
            expected: "j < M",
        })
}

/// Continuum eigenfunction as a principal-value coefficient plus a delta weight.
#[derive(Debug, Clone)]
pub struct SingularEigenfunction {
    medium: Medium,
    nu: f64,
    kind: ModeKind,
    delta_weight: f64,
    // Minimal γ_m for discrete modes.
    gammas: Option<Vec<f64>>,
}

impl SingularEigenfunction {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    /// Coefficient of `δ(ν − cos φ)`; zero for discrete modes.
    pub fn delta_weight(&self) -> f64 {
        self.delta_weight
    }

    /// Numerator `(ϖν/2π) g(ν, φ)` of the principal-value part.
    pub fn regular_coefficient(&self, phi: f64) -> f64 {
        let g = match &self.gammas {
            Some(gam) => {
                1.0 + (1..=self.medium.order())
                    .map(|m| 2.0 * self.medium.beta(m) * gam[m] * (m as f64 * phi).cos())
                    .sum::<f64>()
            }
            None => g_function(&self.medium, self.nu, phi),
        };
        self.medium.albedo() * self.nu / TAU * g
    }

    /// Principal-value part at an angle away from `cos φ = ν`.
    pub fn regular_part(&self, phi: f64) -> f64 {
        self.regular_coefficient(phi) / (self.nu - phi.cos())
    }

    /// The two directions `±arccos ν` carrying the delta part.
    pub fn singular_directions(&self) -> Option<[f64; 2]> {
        match self.kind {
            ModeKind::Continuum => {
                let t = self.nu.acos();
                Some([t, -t])
            }
            ModeKind::Discrete => None,
        }
    }
}

/// The continuum eigenfunction for `ν ∈ (−1, 1)`.
pub fn eigenfunction_continuum(medium: &Medium, nu: f64) -> Result<SingularEigenfunction> {
    let lam = little_lambda(medium, nu)?;
    Ok(SingularEigenfunction {
        medium: medium.clone(),
        nu,
        kind: ModeKind::Continuum,
        delta_weight: 0.5 * ((1.0 - nu) * (1.0 + nu)).sqrt() * lam,
        gammas: None,
    })
}

/// The `j`-th discrete eigenfunction in decomposed form.
pub fn eigenfunction_discrete_mode(
    analysis: &DispersionAnalysis,
    j: usize,
) -> Result<SingularEigenfunction> {
    Ok(SingularEigenfunction {
        medium: analysis.medium().clone(),
        nu: discrete_root(analysis, j)?,
        kind: ModeKind::Discrete,
        delta_weight: 0.0,
        gammas: Some(analysis.gammas(j).to_vec()),
    })
}

/// Normalization `N(ν)` in `∫ cos φ · φ(ν,φ) φ(ν′,φ) dφ = N(ν) δ(ν − ν′)`.
///
/// Continuum: `N = ν/(2√(1−ν²)) · [(1−ν²)λ² + (ϖνg)²]`, i.e.
/// `(ν√(1−ν²)/2) Λ⁺Λ⁻`. Discrete: `N = (ϖν²/2π) g(ν, φ_ν) dΛ/dν`. Both are
/// odd in `ν`.
pub fn normalization(analysis: &DispersionAnalysis, nu: f64) -> Result<f64> {
    let medium = analysis.medium();
    if nu.abs() < 1.0 {
        return continuum_normalization(medium, nu);
    }
    let j = analysis.index_of(nu).ok_or(Error::NotInSpectrum(nu))?;
    let v = analysis.eigenvalues()[j];
    let cheb = chebyshev_table(v, medium.order().max(1));
    let gam = analysis.gammas(j);
    let g = 1.0
        + (1..=medium.order())
            .map(|m| 2.0 * medium.beta(m) * gam[m] * cheb.get(m))
            .sum::<f64>();
    let n = medium.albedo() * v * v / TAU * g * analysis.derivatives()[j];
    Ok(if nu < 0.0 { -n } else { n })
}

/// Continuum branch of [`normalization`], which needs no spectrum.
pub fn continuum_normalization(medium: &Medium, nu: f64) -> Result<f64> {
    boundary_product(medium, nu)?;
    Ok(continuum_normalization_open(medium, nu))
}

pub(crate) fn continuum_normalization_open(medium: &Medium, nu: f64) -> f64 {
    let s = ((1.0 - nu) * (1.0 + nu)).sqrt();
    0.5 * nu * s * boundary_product_open(medium, nu)
}
