//! Independent solver in Fourier space.
//!
//! With `G̃(k) = ∫ e^{−ik·ρ} G(ρ) d²ρ` the transport equation becomes an
//! angular integral equation at each wavevector. Expanding the scattered
//! field in `e^{im(φ−φ_k)}`, `|m| ≤ L`, turns it into the linear system
//! `[I − ϖz L(z) W] h = v` with `z = i/|k|`, the Toeplitz matrix
//! `L_{jm} = P_{|j−m|}(z)` and `W = diag(β_|m|)`. Spatial quantities follow
//! by numerical inverse transform.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::{big_p_table, Medium};
use crate::quadrature::{integrate, oscillatory_tail, Tolerance};
use crate::special::bessel_k0;
use crate::tolerances::MAX_CONDITION;

const RESIDUAL_LIMIT: f64 = 1e-12;

/// The angular system at one wavevector.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    z: Complex64,
    phi_k: f64,
    albedo: f64,
    order: usize,
    p: Vec<Complex64>,
    lmat: DMatrix<Complex64>,
    weights: Vec<f64>,
    system: DMatrix<Complex64>,
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

impl SpectralSystem {
    /// Assembles and factors the system for wavevector `k ≠ 0`.
    pub fn new(medium: &Medium, kvec: [f64; 2]) -> Result<Self> {
        let k = kvec[0].hypot(kvec[1]);
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain {
                what: "|k|",
                value: k,
                expected: "0 < |k| < inf",
            });
        }
        let l = medium.order();
        let n = 2 * l + 1;
        let z = Complex64::new(0.0, 1.0 / k);
        let table = big_p_table(z, 2 * l)?;
        let p: Vec<Complex64> = (0..=2 * l).map(|m| table.get(m)).collect();
        let lmat = DMatrix::from_fn(n, n, |j, m| p[j.abs_diff(m)]);
        let weights: Vec<f64> = (0..n).map(|i| medium.beta(i.abs_diff(l))).collect();
        let scale = z * medium.albedo();
        let system = DMatrix::from_fn(n, n, |j, m| {
            let id = if j == m { 1.0 } else { 0.0 };
            id - scale * lmat[(j, m)] * weights[m]
        });
        let sv = system.clone().singular_values();
        let condition = sv.max() / sv.min();
        if !(condition <= MAX_CONDITION) {
            return Err(Error::Conditioning(condition));
        }
        let lu = system.clone().lu();
        Ok(Self {
            z,
            phi_k: kvec[1].atan2(kvec[0]),
            albedo: medium.albedo(),
            order: l,
            p,
            lmat,
            weights,
            system,
            lu,
            condition,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// Polar angle of the wavevector.
    pub fn phi_k(&self) -> f64 {
        self.phi_k
    }

    pub fn lmat(&self) -> &DMatrix<Complex64> {
        &self.lmat
    }

    /// Diagonal of `W`, indexed `m = −L..L`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `e^{−im(φ − φ_k)}` for `m = −L..L`.
    pub fn pvec(&self, phi: f64) -> DVector<Complex64> {
        let l = self.order as i64;
        DVector::from_fn(2 * self.order + 1, |i, _| {
            Complex64::from_polar(1.0, -((i as i64 - l) as f64) * (phi - self.phi_k))
        })
    }

    /// Solves the system and checks the residual.
    pub fn solve(&self, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let h = self.lu.solve(rhs).ok_or(Error::Conditioning(f64::INFINITY))?;
        let res = (&self.system * &h - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
        if !(res < RESIDUAL_LIMIT) {
            return Err(Error::Accuracy {
                what: "spectral solve residual",
                estimate: res,
                tolerance: RESIDUAL_LIMIT,
            });
        }
        Ok(h)
    }

    /// Attenuation factor `z/(z − cos(φ − φ_k)) = 1/(1 + ik·Ω)`.
    pub fn attenuation(&self, phi: f64) -> Complex64 {
        self.z / (self.z - (phi - self.phi_k).cos())
    }

    /// Scattered part of `G̃(k, φ; φ₀)`.
    pub fn scattered(&self, phi: f64, phi0: f64) -> Result<Complex64> {
        let h = self.solve(&self.pvec(phi0))?;
        let out = self.pvec(phi);
        let s: Complex64 = (0..h.len())
            .map(|i| out[i].conj() * h[i] * self.weights[i])
            .sum();
        Ok(self.albedo / TAU * self.attenuation(phi) * self.attenuation(phi0) * s)
    }

    /// `∫∫ G̃_s dφ dφ₀ / 2π = ϖz² pᵀWA⁻¹p` with `p_m = P_|m|(z)`.
    pub fn integrated_scattered(&self) -> Result<Complex64> {
        let l = self.order;
        let p = DVector::from_fn(2 * l + 1, |i, _| self.p[i.abs_diff(l)]);
        let h = self.solve(&p)?;
        let s: Complex64 = (0..h.len()).map(|i| p[i] * h[i] * self.weights[i]).sum();
        Ok(self.albedo * self.z * self.z * s)
    }
}

/// Scattered (smooth) part of `G̃(k, φ; φ₀)`; the ballistic term
/// `δ(φ − φ₀)/(1 + ik·Ω₀)` is left out.
pub fn gtilde(medium: &Medium, kvec: [f64; 2], phi: f64, phi0: f64) -> Result<Complex64> {
    SpectralSystem::new(medium, kvec)?.scattered(phi, phi0)
}

// Large-k limit of `integrated_scattered`·k².
fn tail_coefficient(medium: &Medium) -> f64 {
    let l = medium.order() as i64;
    let s: f64 = (-l..=l)
        .map(|m| medium.beta(m.unsigned_abs() as usize) * if m % 2 == 0 { 1.0 } else { -1.0 })
        .sum();
    medium.albedo() * s
}

fn radial_kernel(medium: &Medium, k: f64, c2: f64) -> Result<f64> {
    if k == 0.0 {
        let a = medium.albedo();
        return Ok(a / (1.0 - a) - c2);
    }
    let f = SpectralSystem::new(medium, [k, 0.0])?.integrated_scattered()?;
    Ok(f.re - c2 / (1.0 + k * k))
}

const DENSITY_TOL: Tolerance = Tolerance::new(1e-13, 1e-10);

/// Energy density around an isotropic point source:
/// `u(x) = e^{−x}/x + ∫₀^∞ J₀(kx) k [F(k) − c₂/(1+k²)] dk + c₂ K₀(x)`.
pub fn density_fourier(medium: &Medium, x: f64) -> Result<f64> {
    Ok(density_fourier_with_error(medium, x)?.0)
}

/// [`density_fourier`] with the quadrature error estimate.
pub fn density_fourier_with_error(medium: &Medium, x: f64) -> Result<(f64, f64)> {
    density_fourier_with_tolerance(medium, x, DENSITY_TOL)
}

/// [`density_fourier_with_error`] under a caller-chosen radial tolerance.
pub fn density_fourier_with_tolerance(medium: &Medium, x: f64, tol: Tolerance) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "x > 0",
        });
    }
    let c2 = tail_coefficient(medium);
    let integrand = |k: f64| -> Result<f64> {
        Ok(crate::special::bessel_j0(k * x) * k * radial_kernel(medium, k, c2)?)
    };
    let hankel = hankel_integral(integrand, x, tol, "Fourier density radial integral")?;
    let u = (-x).exp() / x + hankel.0 + c2 * bessel_k0(x)?;
    Ok((u, hankel.1))
}

/// `∫₀^∞ f(k) dk` for `f` carrying a `J₀(kx)` factor: adaptive quadrature
/// up to a zero of `J₀` past the kernel's transition region, then an
/// extrapolated sum over half periods.
fn hankel_integral(
    f: impl Fn(f64) -> Result<f64>,
    x: f64,
    tol: Tolerance,
    what: &'static str,
) -> Result<(f64, f64)> {
    let half = PI / x;
    // Asymptotic zeros of J₀ sit at (n − 1/4)π/x.
    let n0 = ((40.0 * x / PI).ceil() + 8.0).max(8.0);
    let k1 = (n0 - 0.25) * half;
    let mut failure = None;
    let mut g = |k: f64| match f(k) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let breaks: Vec<f64> = (1..n0 as usize).map(|n| (n as f64 - 0.25) * half).collect();
    let head = integrate(&mut g, 0.0, k1, &breaks, tol);
    let tail = oscillatory_tail(&mut g, k1, half, tol, 4000, what);
    if let Some(e) = failure {
        return Err(e);
    }
    let tail = tail?;
    let err = head.error + tail.error;
    let value = head.value + tail.value;
    if !(err <= 10.0 * tol.abs.max(tol.rel * value.abs())) {
        return Err(Error::Accuracy {
            what,
            estimate: err,
            tolerance: tol.abs.max(tol.rel * value.abs()),
        });
    }
    Ok((value, err))
}

/// Plane-source density `∫∫ G dφ dφ₀` from the one-dimensional transform:
/// `2K₀(|x|) + πc₂e^{−|x|} + 2∫₀^∞ cos(kx)[F(k) − c₂/(1+k²)] dk`.
pub fn plane_density_fourier(medium: &Medium, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::SingularPoint);
    }
    let ax = x.abs();
    let c2 = tail_coefficient(medium);
    let half = PI / ax;
    let n0 = (40.0 * ax / PI).ceil() + 8.0;
    let k1 = (n0 - 0.5) * half;
    let mut failure = None;
    let mut g = |k: f64| match radial_kernel(medium, k, c2) {
        Ok(v) => 2.0 * (k * ax).cos() * v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let breaks: Vec<f64> = (1..n0 as usize).map(|n| (n as f64 - 0.5) * half).collect();
    let head = integrate(&mut g, 0.0, k1, &breaks, DENSITY_TOL);
    let tail = oscillatory_tail(&mut g, k1, half, DENSITY_TOL, 4000, "plane density tail");
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * bessel_k0(ax)? + PI * c2 * (-ax).exp() + head.value + tail?.value)
}

const MIXED_TOL: Tolerance = Tolerance::new(1e-12, 1e-9);

/// `Ĝ_s(x, q) = (1/2π)∫ e^{ik_x x} G̃_s(k_x, q) dk_x`: the scattered part
/// transformed back in `x` only, so that `G_s = (1/2π)∫ e^{iqy} Ĝ_s dq`.
pub fn green_mixed(medium: &Medium, x: f64, q: f64, phi: f64, phi0: f64) -> Result<Complex64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::SingularPoint);
    }
    let mut failure = None;
    let mut g = |kx: f64| {
        let v = if kx == 0.0 && q == 0.0 {
            // k → 0 limit: the wavevector direction drops out.
            Ok(zero_k_limit(medium, phi, phi0))
        } else {
            gtilde(medium, [kx, q], phi, phi0)
        };
        match v {
            Ok(v) => v * Complex64::from_polar(1.0, kx * x),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::default()
            }
        }
    };
    let half = PI / x.abs();
    let scale = 1.0 + q.abs();
    let k1 = (40.0 * scale / half).ceil() * half;
    let breaks: Vec<f64> = (-(k1 / half) as i64..=(k1 / half) as i64)
        .map(|n| n as f64 * half)
        .collect();
    let head = integrate(&mut g, -k1, k1, &breaks, MIXED_TOL);
    let right = oscillatory_tail(&mut g, k1, half, MIXED_TOL, 4000, "mixed transform tail");
    let left = oscillatory_tail(|t: f64| g(-t), k1, half, MIXED_TOL, 4000, "mixed transform tail");
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((head.value + right?.value + left?.value) / TAU)
}

fn zero_k_limit(medium: &Medium, phi: f64, phi0: f64) -> Complex64 {
    let w = medium.albedo();
    let l = medium.order() as i64;
    let s: f64 = (-l..=l)
        .map(|m| {
            let b = medium.beta(m.unsigned_abs() as usize);
            (m as f64 * (phi - phi0)).cos() * b / (1.0 - w * b)
        })
        .sum();
    Complex64::from(w / TAU * s)
}

/// Scattered part of `G(ρ, φ; φ₀)` by inverse transform in `y` of
/// [`green_mixed`].
///
/// For `x > 0` the transverse integrand decays like `1/q` with an
/// oscillation `e^{iq(y − x tan a)}` for each of `a ∈ {φ, φ₀}` that points
/// away from the source plane. The tail is extrapolated for one such
/// frequency; configurations with two distinct frequencies are rejected.
pub fn green_point_fourier(medium: &Medium, rho: [f64; 2], phi: f64, phi0: f64) -> Result<f64> {
    let [x, y] = rho;
    if x == 0.0 || !x.is_finite() || !y.is_finite() {
        return Err(Error::SingularPoint);
    }
    let mut freqs: Vec<f64> = [phi, phi0]
        .iter()
        .filter(|a| a.cos() * x > 0.0)
        .map(|a| y - x * a.tan())
        .collect();
    freqs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if freqs.len() > 1 {
        return Err(Error::UnsupportedDirection { angle: phi });
    }
    let omega = freqs.first().copied().unwrap_or(1.0).abs();
    if omega < 1e-6 {
        return Err(Error::UnsupportedDirection { angle: phi });
    }
    let mut failure = None;
    let mut g = |q: f64| match green_mixed(medium, x, q, phi, phi0) {
        Ok(v) => (Complex64::from_polar(1.0, q * y) * v).re,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let half = PI / omega;
    let q1 = (20.0 / half).ceil().max(4.0) * half;
    let breaks: Vec<f64> = (1..(q1 / half) as usize).map(|n| n as f64 * half).collect();
    let tol = Tolerance::new(1e-10, 1e-7);
    let head = integrate(&mut g, 0.0, q1, &breaks, tol);
    let tail = oscillatory_tail(&mut g, q1, half, tol, 2000, "transverse transform tail");
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((head.value + tail?.value) / PI)
}
