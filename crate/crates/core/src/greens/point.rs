//! Point-source Green's function `G(ρ, φ; φ₀)`.
//!
//! The field is expanded in plane waves `e^{iqy}` along `y`. Each transverse
//! component `Ĝ(x, q)` is a sum over rotated-frame modes that decay in `x`,
//! plus two flight terms that carry the single-scattering discontinuities
//! across the rays through the source and through the observation point in
//! directions `φ₀` and `φ`. Then `G = (1/π) Re ∫₀^∞ e^{iqy} Ĝ(x, q) dq`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dispersion::{big_lambda, DispersionAnalysis};
use crate::eigenfunctions::{
    continuum_normalization_open, discrete_mode_value, mode_value, normalization,
};
use crate::error::{Error, Result};
use crate::polynomials::{g_function, Medium};
use crate::quadrature::{integrate, oscillatory_tail, Tolerance};
use crate::tolerances::{DIRECTION_SEPARATION, GRAZING};

use super::plane::green1d_point;
use super::rotated::RotatedFrame;
use super::{continuum_integral, GreensDecomposition};

/// Accuracy controls for [`green2d_point`].
#[derive(Debug, Clone, Copy)]
pub struct PointOptions {
    /// Tolerance of the outer `q` integral.
    pub tolerance: Tolerance,
    /// Tolerance of the inner `ν` integral at each `q`.
    pub inner: Tolerance,
    /// Half-period cap for the extrapolated flight tails.
    pub max_tail_pieces: usize,
}

impl Default for PointOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::new(1e-12, 1e-8),
            inner: Tolerance::new(1e-14, 1e-10),
            max_tail_pieces: 2000,
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn i_mode(medium: &Medium, nu: f64, frame: &RotatedFrame, phi: f64) -> Complex64 {
    mode_value(medium, nu, frame.rotate(Complex64::from(phi)))
}

// Mode sum (discrete plus continuum) of Ĝ for x > 0.
fn mode_part(
    analysis: &DispersionAnalysis,
    x: f64,
    q: f64,
    phi: f64,
    phi0: f64,
    tol: Tolerance,
) -> Result<(Complex64, f64)> {
    let medium = analysis.medium();
    let term = |a: Complex64, b: Complex64, nu: f64, n: f64| {
        let f = RotatedFrame::new(nu, q);
        a * b * (-f.khat_x * x / nu).exp() / (f.khat_x * n)
    };
    let mut sum = Complex64::default();
    for &nu in analysis.eigenvalues() {
        let f = RotatedFrame::new(nu, q);
        let a = discrete_mode_value(analysis, nu, f.rotate(Complex64::from(phi)))?;
        let b = discrete_mode_value(analysis, nu, f.rotate(Complex64::from(phi0)))?;
        sum += term(a, b, nu, normalization(analysis, nu)?);
    }
    let (cont, err) = continuum_integral(
        |nu| {
            if nu == 0.0 || x / nu > 700.0 {
                Complex64::default()
            } else {
                let f = RotatedFrame::new(nu, q);
                let (a, b) = (i_mode(medium, nu, &f, phi), i_mode(medium, nu, &f, phi0));
                term(a, b, nu, continuum_normalization_open(medium, nu))
            }
        },
        &[phi.cos(), phi0.cos()],
        tol,
        "point-source continuum integral",
    )?;
    Ok((sum + cont, err))
}

// Flight term of Ĝ for x > 0 attached to direction `a` (cos a > 0), with
// `b` the other angle. It oscillates in q as e^{−iqx tan a}.
fn flight_term(medium: &Medium, x: f64, q: f64, a: f64, b: f64) -> Result<Complex64> {
    let (s, c) = a.sin_cos();
    let kx = (I - q * s) / c;
    let mut kk = (kx * kx + q * q).sqrt();
    // Branch continuous from kk = i/cos a at q = 0.
    if kk.im < 0.0 {
        kk = -kk;
    }
    let nu = I / kk;
    let khat_x = -I * nu * kx;
    let khat_y = -I * nu * q;
    let w = Complex64::from_polar(1.0, b) * (khat_x - I * khat_y);
    let theta = -I * w.ln();
    let num = g_function(medium, nu, theta) * (nu * medium.albedo() / TAU);
    Ok((I * kx * x).exp() / c * num / ((nu - theta.cos()) * big_lambda(medium, nu)?))
}

fn check_directions(phi: f64, phi0: f64) -> Result<()> {
    for angle in [phi, phi0] {
        if angle.cos().abs() < GRAZING {
            return Err(Error::UnsupportedDirection { angle });
        }
    }
    if (phi - phi0).rem_euclid(TAU).min((phi0 - phi).rem_euclid(TAU)) < DIRECTION_SEPARATION {
        return Err(Error::UnsupportedDirection { angle: phi });
    }
    Ok(())
}

// Maps x < 0 to x > 0 by the reflection φ → π − φ.
fn reflect(x: f64, phi: f64, phi0: f64) -> (f64, f64, f64) {
    if x > 0.0 {
        (x, phi, phi0)
    } else {
        (-x, PI - phi, PI - phi0)
    }
}

/// Transverse component `Ĝ_s(x, q; φ, φ₀)` of the scattered field, with
/// `G_s(x, y) = (1/2π)∫ e^{iqy} Ĝ_s(x, q) dq`.
pub fn green2d_mode(
    analysis: &DispersionAnalysis,
    x: f64,
    q: f64,
    phi: f64,
    phi0: f64,
) -> Result<Complex64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::SingularPoint);
    }
    check_directions(phi, phi0)?;
    if q == 0.0 {
        return Ok(Complex64::from(green1d_point(analysis, x, phi, phi0)?.smooth));
    }
    if q < 0.0 {
        return Ok(green2d_mode(analysis, x, -q, phi, phi0)?.conj());
    }
    let (x, phi, phi0) = reflect(x, phi, phi0);
    let tol = PointOptions::default().inner;
    Ok(mode_part(analysis, x, q, phi, phi0, tol)?.0 + flights(analysis.medium(), x, q, phi, phi0)?)
}

fn flights(medium: &Medium, x: f64, q: f64, phi: f64, phi0: f64) -> Result<Complex64> {
    let mut s = Complex64::default();
    for (a, b) in [(phi, phi0), (phi0, phi)] {
        if a.cos() > 0.0 {
            s += flight_term(medium, x, q, a, b)?;
        }
    }
    Ok(s)
}

/// Angularly resolved point-source response at `ρ = (x, y)`, `x ≠ 0`.
///
/// Away from the ray `ρ ∥ Ω₀` the ballistic part vanishes, so only the
/// smooth part is nonzero. The outer `q` integral runs adaptively until the
/// mode sum has decayed; beyond that each flight term is integrated on its
/// own with an extrapolated oscillatory tail.
pub fn green2d_point(
    analysis: &DispersionAnalysis,
    rho: [f64; 2],
    phi: f64,
    phi0: f64,
    opts: PointOptions,
) -> Result<GreensDecomposition> {
    let [x0, y] = rho;
    if x0 == 0.0 || !x0.is_finite() || !y.is_finite() {
        return Err(Error::SingularPoint);
    }
    check_directions(phi, phi0)?;
    let (x, phi, phi0) = reflect(x0, phi, phi0);
    let medium = analysis.medium();
    let flying: Vec<(f64, f64, f64)> = [(phi, phi0), (phi0, phi)]
        .into_iter()
        .filter(|(a, _)| a.cos() > 0.0)
        .map(|(a, b)| (a, b, y - x * a.tan()))
        .collect();
    for &(a, _, omega) in &flying {
        if omega.abs() < 1e-6 {
            // On the ray the flight term is a jump, not a value.
            return Err(Error::UnsupportedDirection { angle: a });
        }
    }

    let mut failure = None;
    let mut full = |q: f64| {
        let v = mode_part(analysis, x, q, phi, phi0, opts.inner)
            .map(|m| m.0)
            .and_then(|m| Ok(m + flights(medium, x, q, phi, phi0)?));
        match v {
            Ok(v) => (Complex64::from_polar(1.0, q * y) * v).re,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    // The slowest continuum decay in q is e^{−qx}.
    let q1 = (36.0 / x).max(8.0);
    let mut breaks: Vec<f64> = Vec::new();
    for &(_, _, omega) in &flying {
        let h = PI / omega.abs();
        breaks.extend((1..).map(|n| n as f64 * h).take_while(|&b| b < q1).take(400));
    }
    let head = integrate(&mut full, 0.0, q1, &breaks, opts.tolerance);
    if let Some(e) = failure {
        return Err(e);
    }
    let mut value = head.value;
    let mut error = head.error;
    let residual = mode_part(analysis, x, q1, phi, phi0, opts.inner)?.0.norm();
    error += residual / x;
    for &(a, b, omega) in &flying {
        let mut failure = None;
        let f = |q: f64| match flight_term(medium, x, q, a, b) {
            Ok(v) => (Complex64::from_polar(1.0, q * y) * v).re,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        };
        let tail = oscillatory_tail(
            f,
            q1,
            PI / omega.abs(),
            opts.tolerance,
            opts.max_tail_pieces,
            "flight-term tail",
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let tail = tail?;
        value += tail.value;
        error += tail.error;
    }
    let target = opts.tolerance.abs.max(opts.tolerance.rel * value.abs());
    if !(error <= 10.0 * target) {
        return Err(Error::Accuracy {
            what: "transverse integral",
            estimate: error / PI,
            tolerance: target / PI,
        });
    }
    Ok(GreensDecomposition {
        uncollided: 0.0,
        singular: Vec::new(),
        smooth: value / PI,
        error: error / PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::find_discrete_eigenvalues;

    #[test]
    fn mode_at_zero_q_is_plane_response() {
        let a = find_discrete_eigenvalues(&Medium::isotropic(0.8).unwrap(), 40).unwrap();
        let g = green2d_mode(&a, 1.2, 0.0, 0.4, 2.0).unwrap();
        assert_eq!(g.re, green1d_point(&a, 1.2, 0.4, 2.0).unwrap().smooth);
        let p = green2d_mode(&a, 1.2, 0.7, 0.4, 2.0).unwrap();
        let m = green2d_mode(&a, 1.2, -0.7, 0.4, 2.0).unwrap();
        assert_eq!(p, m.conj());
    }

    #[test]
    fn rejects_singular_inputs() {
        let a = find_discrete_eigenvalues(&Medium::isotropic(0.8).unwrap(), 40).unwrap();
        let o = PointOptions::default();
        assert!(matches!(green2d_point(&a, [0.0, 1.0], 0.3, 1.0, o), Err(Error::SingularPoint)));
        assert!(green2d_point(&a, [1.0, 0.0], PI / 2.0, 1.0, o).is_err());
        assert!(green2d_point(&a, [1.0, 0.0], 0.4, 0.4, o).is_err());
        // Observation point on the flight ray of φ.
        assert!(green2d_point(&a, [1.0, 0.5f64.tan()], 0.5, 2.0, o).is_err());
    }
}
