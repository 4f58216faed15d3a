//! Two-dimensional separated modes in a complex-rotated reference frame.
//!
//! A plane wave `e^{iqy}` along the source plane turns the decay vector of
//! a mode with separation constant `ν` into `k̂ = (√(1+(νq)²), −iνq)`,
//! a complex unit vector. Angular functions are then evaluated relative to
//! the complex angle `φ_k̂ = −i·asinh(νq)` of that vector.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dispersion::DispersionAnalysis;
use crate::eigenfunctions::{discrete_g_function, discrete_mode_value};
use crate::error::{Error, Result};

/// Rotated frame for separation constant `ν` and transverse wavenumber `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedFrame {
    /// `k̂_x = √(1 + (νq)²)`.
    pub khat_x: f64,
    /// `k̂_y = −iνq`.
    pub khat_y: Complex64,
    /// `φ_k̂`, with `cos φ_k̂ = k̂_x` and `sin φ_k̂ = k̂_y`.
    pub phi_k: Complex64,
}

impl RotatedFrame {
    pub fn new(nu: f64, q: f64) -> Self {
        let s = nu * q;
        Self {
            khat_x: s.hypot(1.0),
            khat_y: Complex64::new(0.0, -s),
            phi_k: Complex64::new(0.0, -s.asinh()),
        }
    }

    /// Applies the rotation: `φ ↦ φ − φ_k̂`.
    pub fn rotate(&self, phi: Complex64) -> Complex64 {
        phi - self.phi_k
    }
}

fn discrete_nu(analysis: &DispersionAnalysis, nu: f64) -> Result<f64> {
    analysis
        .index_of(nu)
        .map(|_| nu)
        .ok_or(Error::NotInSpectrum(nu))
}

/// `ψ(ρ, φ) = φ(ν, φ − φ_k̂) e^{−k̂·ρ/ν}` for a discrete `ν = ±ν_j`.
pub fn rotated_eigenmode(
    analysis: &DispersionAnalysis,
    nu: f64,
    q: f64,
    rho: [f64; 2],
    phi: f64,
) -> Result<Complex64> {
    let nu = discrete_nu(analysis, nu)?;
    let frame = RotatedFrame::new(nu, q);
    let ang = discrete_mode_value(analysis, nu, frame.rotate(Complex64::from(phi)))?;
    let expo = -(frame.khat_x * rho[0] + frame.khat_y * rho[1]) / nu;
    Ok(ang * expo.exp())
}

// Callers have already checked that `nu` is in the spectrum.
fn rotated_value(analysis: &DispersionAnalysis, nu: f64, frame: &RotatedFrame, phi: Complex64) -> Complex64 {
    discrete_mode_value(analysis, nu, frame.rotate(phi)).unwrap_or_default()
}

/// `∫₀^{2π} cos φ · ℛφ(ν₁) · ℛφ(ν₂) dφ` taken along the real axis.
///
/// Poles of the rotated modes sit at `Im φ = −asinh(νq) ± arccosh|ν|`;
/// once `|q| > √(1 − 1/ν²)` one of them has crossed the real axis and this
/// integral no longer equals the analytic continuation from `q = 0` (see
/// [`rotated_inner_product`]).
pub fn inner_product_real_axis(
    analysis: &DispersionAnalysis,
    nu1: f64,
    nu2: f64,
    q: f64,
) -> Result<Complex64> {
    let (nu1, nu2) = (discrete_nu(analysis, nu1)?, discrete_nu(analysis, nu2)?);
    let (f1, f2) = (RotatedFrame::new(nu1, q), RotatedFrame::new(nu2, q));
    let f = |phi: f64| {
        let p = Complex64::from(phi);
        p.cos() * rotated_value(analysis, nu1, &f1, p) * rotated_value(analysis, nu2, &f2, p)
    };
    periodic_converged(f)
}

/// Periodic trapezoid sum, doubled until it settles. Convergence is judged
/// against `∫|f|`, since off-diagonal products cancel to roundoff.
fn periodic_converged(f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let mut n = 64;
    let (mut prev, _) = trapezoid(&f, n);
    let mut change = f64::INFINITY;
    while n < 1 << 18 {
        n *= 2;
        let (cur, scale) = trapezoid(&f, n);
        change = (cur - prev).norm();
        if change <= 1e-14 * scale.max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy {
        what: "rotated inner product",
        estimate: change,
        tolerance: 1e-14,
    })
}

fn trapezoid(f: &impl Fn(f64) -> Complex64, n: usize) -> (Complex64, f64) {
    let h = TAU / n as f64;
    let (mut sum, mut abs) = (Complex64::default(), 0.0);
    for j in 0..n {
        let v = f(j as f64 * h);
        sum += v;
        abs += v.norm();
    }
    (sum * h, abs * h)
}

/// Inner product `∫ cos φ · ℛ_{k̂(ν₁q)}φ(ν₁) · ℛ_{k̂(ν₂q)}φ(ν₂) dφ` of two
/// discrete modes on the contour continued from `q = 0`.
///
/// At `q = 0` the real axis separates the upper pole of each factor from
/// its lower pole; the contour is deformed so that this stays true as the
/// poles move with `q`. For equal modes this is the straight line
/// `Im φ = −asinh(νq)`; otherwise the real-axis integral is corrected by
/// the residues of poles that crossed it.
pub fn rotated_inner_product(
    analysis: &DispersionAnalysis,
    nu1: f64,
    nu2: f64,
    q: f64,
) -> Result<Complex64> {
    let (nu1, nu2) = (discrete_nu(analysis, nu1)?, discrete_nu(analysis, nu2)?);
    let medium = analysis.medium();
    let (f1, f2) = (RotatedFrame::new(nu1, q), RotatedFrame::new(nu2, q));
    if nu1 == nu2 {
        // On Im φ = Im φ_k̂ the rotated argument is real.
        let a = f1.phi_k.im;
        let f = |t: f64| {
            let p = Complex64::new(t, a);
            p.cos() * rotated_value(analysis, nu1, &f1, p).powi(2)
        };
        return periodic_converged(f);
    }
    let mut total = inner_product_real_axis(analysis, nu1, nu2, q)?;
    for (nu, frame, other_nu, other) in [(nu1, f1, nu2, f2), (nu2, f2, nu1, f1)] {
        let b = nu.abs().acosh();
        let re = if nu > 0.0 { 0.0 } else { PI };
        for (sign, should_be_above) in [(1.0, true), (-1.0, false)] {
            let pole = Complex64::new(re, frame.phi_k.im + sign * b);
            if pole.im.abs() < 1e-12 {
                return Err(Error::Accuracy {
                    what: "rotated inner product (pole on the contour)",
                    estimate: pole.im.abs(),
                    tolerance: 1e-12,
                });
            }
            if (pole.im > 0.0) == should_be_above {
                continue;
            }
            // Residue of cos φ · ℛφ(ν) · ℛφ(ν′) at a simple pole of ℛφ(ν).
            let rot = frame.rotate(pole);
            let num = discrete_g_function(analysis, nu, rot)? * (medium.albedo() * nu / TAU);
            let res = pole.cos() * num / rot.sin()
                * rotated_value(analysis, other_nu, &other, pole);
            let i2pi = Complex64::new(0.0, TAU);
            total += if should_be_above { i2pi * res } else { -i2pi * res };
        }
    }
    Ok(total)
}
