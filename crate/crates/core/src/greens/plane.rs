//! Plane-source Green's function `G(x, φ; φ₀)`.

use std::f64::consts::{PI, TAU};

use crate::dispersion::{boundary_product_open, little_lambda_open, DispersionAnalysis};
use crate::eigenfunctions::{continuum_normalization_open, discrete_mode_value, normalization};
use crate::error::{Error, Result};
use crate::polynomials::g_function;
use crate::quadrature::Tolerance;
use crate::tolerances::{DIRECTION_SEPARATION, GRAZING};

use super::{continuum_integral, GreensDecomposition};

const TOL: Tolerance = Tolerance::new(1e-15, 1e-11);

/// Angularly integrated plane-source response
/// `Σ_j e^{−|x|/ν_j}/N(ν_j) + ∫₀¹ e^{−|x|/ν}/N(ν) dν`.
pub fn green1d_density(analysis: &DispersionAnalysis, x: f64) -> Result<f64> {
    Ok(green1d_density_with_error(analysis, x)?.0)
}

/// [`green1d_density`] with the continuum quadrature error estimate.
pub fn green1d_density_with_error(
    analysis: &DispersionAnalysis,
    x: f64,
) -> Result<(f64, f64)> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::SingularPoint);
    }
    let ax = x.abs();
    let medium = analysis.medium();
    let mut discrete = 0.0;
    for &nu in analysis.eigenvalues() {
        discrete += (-ax / nu).exp() / normalization(analysis, nu)?;
    }
    let (cont, err) = continuum_integral(
        |nu| (-ax / nu).exp() / continuum_normalization_open(medium, nu),
        &[],
        TOL,
        "plane-source continuum integral",
    )?;
    Ok((discrete + cont, err))
}

/// Angularly resolved plane-source response at `x ≠ 0`.
///
/// The expansion in singular eigenfunctions carries the part of the
/// response that is even under `φ → −φ`; for isotropic scattering this is
/// all of it. The ballistic term `e^{−x/μ₀}/μ₀` appears split evenly between
/// the `δ(φ − φ₀)` slot and its mirror direction `−φ₀`. The smooth part
/// collects the discrete modes, the principal-value product of continuum
/// modes, and the two cross terms where one delta of a continuum mode meets
/// the principal-value part of the other.
pub fn green1d_point(
    analysis: &DispersionAnalysis,
    x: f64,
    phi: f64,
    phi0: f64,
) -> Result<GreensDecomposition> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::SingularPoint);
    }
    // Mirror x < 0 onto x > 0: the reflection maps φ to π − φ.
    let (x, phi, phi0) = if x > 0.0 {
        (x, phi, phi0)
    } else {
        (-x, PI - phi, PI - phi0)
    };
    let (mu, mu0) = (phi.cos(), phi0.cos());
    for (angle, c) in [(phi, mu), (phi0, mu0)] {
        if c.abs() < GRAZING {
            return Err(Error::UnsupportedDirection { angle });
        }
    }
    if (mu - mu0).abs() < DIRECTION_SEPARATION {
        return Err(Error::UnsupportedDirection { angle: phi });
    }
    let medium = analysis.medium();
    let w = medium.albedo();

    let mut smooth = 0.0;
    for &nu in analysis.eigenvalues() {
        smooth += discrete_mode_value(analysis, nu, phi)? * discrete_mode_value(analysis, nu, phi0)?
            * (-x / nu).exp()
            / normalization(analysis, nu)?;
    }

    let f = |nu: f64| {
        let c = w * nu / TAU;
        c * c * g_function(medium, nu, phi) * g_function(medium, nu, phi0) * (-x / nu).exp()
            / continuum_normalization_open(medium, nu)
    };
    let pv = |a: f64| -> Result<(f64, f64)> {
        if a > 0.0 && a < 1.0 {
            let fa = f(a);
            let (v, e) = continuum_integral(
                |nu| {
                    let d = nu - a;
                    if d == 0.0 {
                        0.0
                    } else {
                        (f(nu) - fa) / d
                    }
                },
                &[a],
                TOL,
                "plane-source principal value",
            )?;
            Ok((v + fa * ((1.0 - a) / a).ln(), e))
        } else {
            continuum_integral(|nu| f(nu) / (nu - a), &[], TOL, "plane-source continuum")
        }
    };
    let (pv_mu, e1) = pv(mu)?;
    let (pv_mu0, e2) = pv(mu0)?;
    smooth += (pv_mu - pv_mu0) / (mu - mu0);
    let error = (e1 + e2) / (mu - mu0).abs();

    let cross = |a: f64, other: f64, b: f64| {
        let lam = little_lambda_open(medium, a);
        w / TAU * lam * g_function(medium, a, other) * (-x / a).exp()
            / (boundary_product_open(medium, a) * (a - b))
    };
    if mu > 0.0 && mu < 1.0 {
        smooth += cross(mu, phi0, mu0);
    }
    if mu0 > 0.0 && mu0 < 1.0 {
        smooth += cross(mu0, phi, mu);
    }

    let (uncollided, singular) = if mu0 > 0.0 {
        let half = 0.5 * (-x / mu0).exp() / mu0;
        (half, vec![(-phi0, half)])
    } else {
        (0.0, Vec::new())
    };
    Ok(GreensDecomposition {
        uncollided,
        singular,
        smooth,
        error,
    })
}
