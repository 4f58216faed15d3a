//! Bessel functions needed by the density formulas.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function of the second kind, order zero.
///
/// Power series for `x ≤ 2`; above that the integral
/// `K₀(x) = ∫₀^∞ exp(−x cosh t) dt` is summed with the trapezoid rule,
/// which converges geometrically for this entire, rapidly decaying integrand.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "x > 0",
        });
    }
    Ok(if x <= 2.0 {
        k0_series(x)
    } else {
        k0_scaled_integral(x) * (-x).exp()
    })
}

/// `exp(x)·K₀(x)`, finite for large arguments.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "x > 0",
        });
    }
    Ok(if x <= 2.0 {
        k0_series(x) * x.exp()
    } else {
        k0_scaled_integral(x)
    })
}

fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

// ∫₀^∞ exp(−x(cosh t − 1)) dt, with cosh t − 1 = 2 sinh²(t/2).
fn k0_scaled_integral(x: f64) -> f64 {
    let h = 0.05;
    let mut s = 0.5;
    let mut k = 1;
    loop {
        let sh = (0.5 * k as f64 * h).sinh();
        let v = (-2.0 * x * sh * sh).exp();
        s += v;
        if v < 1e-18 * s {
            break;
        }
        k += 1;
    }
    s * h
}

/// Bessel function of the first kind, order zero, from the angular
/// integral `J₀(t) = (1/2π)∫ cos(t cos θ) dθ` summed with the periodic
/// trapezoid rule; the node count grows with `|t|` so the aliasing error
/// stays below double precision.
pub fn bessel_j0(t: f64) -> f64 {
    let t = t.abs();
    // Aliasing error ~ J_n(t); the margin covers the Airy transition zone.
    let margin = 12.0 * t.cbrt() + 40.0;
    let n = 4 * (((t + margin) as usize) / 4 + 1);
    // Quarter-period symmetry: only θ ∈ [0, π/2] is needed.
    let q = n / 4;
    let h = TAU / n as f64;
    let mut s = 0.5 * (t.cos() + 1.0);
    for j in 1..q {
        s += (t * (j as f64 * h).cos()).cos();
    }
    s / q as f64
}

/// First zero of `J₀`, used to align oscillatory quadrature.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;
