//! Scattering medium and the three polynomial families built on it:
//! the medium recurrence `γ_m`, Chebyshev polynomials `p_m`, and the
//! second-kind functions `P_m(z) = (1/2π)∫cos(mφ)/(z − cos φ) dφ`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{CUT_IM_TOL, CUT_RE_TOL, PHASE_GRID_POINTS};

/// Arithmetic shared by real and complex evaluation points.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + From<f64>
{
    fn cos(self) -> Self;
}

impl Scalar for f64 {
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

impl Scalar for Complex64 {
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
}

/// Albedo plus cosine-series phase function coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    albedo: f64,
    beta: Vec<f64>,
}

impl Medium {
    /// Builds a medium from the albedo and `β_0..β_L` (with `β_0 = 1`).
    pub fn new(albedo: f64, beta: Vec<f64>) -> Result<Self> {
        if !(albedo > 0.0 && albedo < 1.0) {
            return Err(Error::InvalidMedium(format!(
                "albedo {albedo} must lie in (0, 1)"
            )));
        }
        match beta.first() {
            Some(1.0) => {}
            _ => {
                return Err(Error::InvalidMedium(
                    "coefficient list must start with beta_0 = 1".into(),
                ))
            }
        }
        for (m, &b) in beta.iter().enumerate().skip(1) {
            if !(b.abs() < 1.0) {
                return Err(Error::InvalidMedium(format!(
                    "beta_{m} = {b} must satisfy |beta| < 1"
                )));
            }
        }
        let medium = Self { albedo, beta };
        let (min, at) = medium.min_phase_density();
        if min < 0.0 {
            return Err(Error::InvalidMedium(format!(
                "phase function is negative ({min:.3e}) at angle {at:.4}"
            )));
        }
        Ok(medium)
    }

    pub fn isotropic(albedo: f64) -> Result<Self> {
        Self::new(albedo, vec![1.0])
    }

    /// Henyey–Greenstein medium truncated at `order`.
    pub fn henyey_greenstein(albedo: f64, g: f64, order: usize) -> Result<Self> {
        Self::new(albedo, hg_coefficients(g, order)?)
    }

    pub fn albedo(&self) -> f64 {
        self.albedo
    }

    /// Expansion order `L`.
    pub fn order(&self) -> usize {
        self.beta.len() - 1
    }

    /// `β_m`, zero beyond the expansion order.
    pub fn beta(&self, m: usize) -> f64 {
        self.beta.get(m).copied().unwrap_or(0.0)
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// `h_m = 1 − ϖβ_m`.
    pub fn h(&self, m: usize) -> f64 {
        1.0 - self.albedo * self.beta(m)
    }

    /// Phase density `p(θ) = 1/2π + (1/π)Σβ_m cos(mθ)`.
    pub fn phase_density(&self, theta: f64) -> f64 {
        let s: f64 = self
            .beta
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, b)| b * (m as f64 * theta).cos())
            .sum();
        1.0 / TAU + s / PI
    }

    /// Upper bound on the phase density, used as a rejection envelope.
    pub fn phase_density_bound(&self) -> f64 {
        1.0 / TAU + self.beta.iter().skip(1).map(|b| b.abs()).sum::<f64>() / PI
    }

    fn min_phase_density(&self) -> (f64, f64) {
        let n = PHASE_GRID_POINTS;
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (self.phase_density(t), t)
            })
            .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc })
    }
}

/// Henyey–Greenstein coefficients `β_m = g^m`, `m = 0..=order`.
pub fn hg_coefficients(g: f64, order: usize) -> Result<Vec<f64>> {
    if !(g.abs() < 1.0) {
        return Err(Error::Domain {
            what: "anisotropy g",
            value: g,
            expected: "|g| < 1",
        });
    }
    Ok((0..=order).map(|m| g.powi(m as i32)).collect())
}

/// Values of a polynomial family at one argument, indexed from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialTable<T> {
    pub argument: T,
    pub values: Vec<T>,
}

impl<T: Copy> PolynomialTable<T> {
    pub fn get(&self, m: usize) -> T {
        self.values[m]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `γ_0..γ_{m_max}` from `2νh_mγ_m = γ_{m+1} + γ_{m−1}`, `γ_1 = (1−ϖ)ν`.
pub fn gamma_table<T: Scalar>(medium: &Medium, nu: T, m_max: usize) -> PolynomialTable<T> {
    let mut values = Vec::with_capacity(m_max + 1);
    values.push(T::from(1.0));
    if m_max >= 1 {
        values.push(nu * medium.h(0));
    }
    for m in 1..m_max {
        let next = nu * (2.0 * medium.h(m)) * values[m] - values[m - 1];
        values.push(next);
    }
    PolynomialTable {
        argument: nu,
        values,
    }
}

/// Chebyshev polynomials `p_0..p_{m_max}`.
pub fn chebyshev_table<T: Scalar>(z: T, m_max: usize) -> PolynomialTable<T> {
    let mut values = Vec::with_capacity(m_max + 1);
    values.push(T::from(1.0));
    if m_max >= 1 {
        values.push(z);
    }
    for m in 1..m_max {
        let next = z * values[m] * 2.0 - values[m - 1];
        values.push(next);
    }
    PolynomialTable {
        argument: z,
        values,
    }
}

/// `√(z+1)√(z−1)`, the branch that behaves like `z` at infinity.
pub fn cut_root(z: Complex64) -> Complex64 {
    (z + 1.0).sqrt() * (z - 1.0).sqrt()
}

/// True when `z` is on or too close to the cut `[−1, 1]`.
pub fn near_cut(z: Complex64) -> bool {
    z.im.abs() < CUT_IM_TOL && z.re.abs() <= 1.0 + CUT_RE_TOL
}

/// `P_0..P_{m_max}` at `z` off the cut, via `P_m = (z − r)^m / r`.
pub fn big_p_table(z: Complex64, m_max: usize) -> Result<PolynomialTable<Complex64>> {
    if near_cut(z) {
        return Err(Error::Domain {
            what: "z (distance to the cut [-1, 1])",
            value: z.im.abs(),
            expected: "z off the segment [-1, 1]",
        });
    }
    let r = cut_root(z);
    let t = z - r;
    let mut values = Vec::with_capacity(m_max + 1);
    let mut v = r.inv();
    for _ in 0..=m_max {
        values.push(v);
        v *= t;
    }
    Ok(PolynomialTable {
        argument: z,
        values,
    })
}

/// `g(ν, φ) = 1 + 2Σ_{m=1}^{L} β_m γ_m(ν) cos(mφ)`.
pub fn g_function<T: Scalar>(medium: &Medium, nu: T, phi: T) -> T {
    let gam = gamma_table(medium, nu, medium.order().max(1));
    let mut s = T::from(1.0);
    for m in 1..=medium.order() {
        s = s + gam.get(m) * (phi * m as f64).cos() * (2.0 * medium.beta(m));
    }
    s
}

/// `g(ν, φ_ν)` where `cos φ_ν = ν`, using `cos(mφ_ν) = p_m(ν)`.
pub fn g_own_angle<T: Scalar>(medium: &Medium, nu: T) -> T {
    let l = medium.order();
    let gam = gamma_table(medium, nu, l.max(1));
    let cheb = chebyshev_table(nu, l.max(1));
    let mut s = T::from(1.0);
    for m in 1..=l {
        s = s + gam.get(m) * cheb.get(m) * (2.0 * medium.beta(m));
    }
    s
}
