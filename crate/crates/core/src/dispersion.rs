//! The dispersion function `Λ(z)`, its boundary values on the cut, and the
//! discrete spectrum `{±ν_j}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::{big_p_table, g_own_angle, gamma_table, Medium};
use crate::tolerances::{CONTINUUM_MERGE, DERIVATIVE_EDGE};
use crate::tridiag::eigenvalues_above;

/// `Λ(z) = 1 − ϖz[P_0 + 2Σ β_m γ_m P_m]` for `z` off the cut.
///
/// Evaluated at the representative of `±z` in the right half-plane, so
/// that `Λ(−z) = Λ(z)` holds bit for bit.
pub fn big_lambda(medium: &Medium, z: Complex64) -> Result<Complex64> {
    let z = fold_even(z);
    let l = medium.order();
    let p = big_p_table(z, l)?;
    let gam = gamma_table(medium, z, l.max(1));
    let mut s = p.get(0);
    for m in 1..=l {
        s += gam.get(m) * p.get(m) * (2.0 * medium.beta(m));
    }
    Ok(1.0 - z * s * medium.albedo())
}

fn fold_even(z: Complex64) -> Complex64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

/// `Λ(ν)` for real `ν > 1` in real arithmetic; valid arbitrarily close to 1.
pub(crate) fn lambda_real(medium: &Medium, nu: f64) -> f64 {
    let l = medium.order();
    let r = ((nu - 1.0) * (nu + 1.0)).sqrt();
    let t = nu - r;
    let gam = gamma_table(medium, nu, l.max(1));
    let mut pm = 1.0 / r;
    let mut s = pm;
    for m in 1..=l {
        pm *= t;
        s += 2.0 * medium.beta(m) * gam.get(m) * pm;
    }
    1.0 - medium.albedo() * nu * s
}

fn check_open_interval(nu: f64) -> Result<()> {
    if nu.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "nu",
            value: nu,
            expected: "|nu| < 1",
        })
    }
}

/// `λ(ν) = 1 + 2ϖν Σ β_m γ_m(ν) sin(mθ)/sin θ` with `θ = arccos ν`.
///
/// `sin(mθ)/sin θ` is the Chebyshev polynomial `U_{m−1}(ν)`, evaluated by
/// recurrence so the limit `ν → ±1` is well conditioned. Even in `ν`.
pub fn little_lambda(medium: &Medium, nu: f64) -> Result<f64> {
    check_open_interval(nu)?;
    Ok(little_lambda_open(medium, nu))
}

/// [`little_lambda`] without the domain check, for `|ν| < 1`.
pub(crate) fn little_lambda_open(medium: &Medium, nu: f64) -> f64 {
    let nu = nu.abs();
    let l = medium.order();
    if l == 0 {
        return 1.0;
    }
    let gam = gamma_table(medium, nu, l);
    let (mut u_prev, mut u) = (0.0, 1.0);
    let mut s = 0.0;
    for m in 1..=l {
        s += medium.beta(m) * gam.get(m) * u;
        let next = 2.0 * nu * u - u_prev;
        u_prev = u;
        u = next;
    }
    1.0 + 2.0 * medium.albedo() * nu * s
}

/// Boundary values `Λ±(ν) = λ(ν) ± iϖν g(ν, φ_ν)/√(1−ν²)` on the cut.
pub fn lambda_boundary(medium: &Medium, nu: f64) -> Result<(Complex64, Complex64)> {
    let re = little_lambda(medium, nu)?;
    let im = boundary_imag(medium, nu);
    Ok((Complex64::new(re, im), Complex64::new(re, -im)))
}

fn boundary_imag(medium: &Medium, nu: f64) -> f64 {
    medium.albedo() * nu * g_own_angle(medium, nu) / ((1.0 - nu) * (1.0 + nu)).sqrt()
}

/// `Λ⁺Λ⁻ = λ² + (ϖνg)²/(1−ν²)`.
pub fn boundary_product(medium: &Medium, nu: f64) -> Result<f64> {
    check_open_interval(nu)?;
    Ok(boundary_product_open(medium, nu))
}

pub(crate) fn boundary_product_open(medium: &Medium, nu: f64) -> f64 {
    let re = little_lambda_open(medium, nu);
    let im = boundary_imag(medium, nu);
    re * re + im * im
}

/// Number `M` of discrete eigenvalue pairs by the argument principle.
///
/// The phase of `Λ⁺(ν)` is tracked on an adaptive grid over `[0, 1)`
/// (parametrized as `ν = sin θ`); with the branch-point contributions at
/// `ν = ±1`, the total winding gives `M = Δarg/π + 1/2`.
pub fn count_roots(medium: &Medium) -> Result<usize> {
    let g1 = g_own_angle(medium, 1.0);
    if g1.abs() < 1e-12 {
        return Err(Error::BoundaryZero { nu: 1.0 });
    }
    let theta_end = FRAC_PI_2 - 1e-6;
    let eval = |theta: f64| -> Result<Complex64> {
        let nu = theta.sin();
        let (plus, _) = lambda_boundary(medium, nu)?;
        if plus.norm() < 1e-9 {
            return Err(Error::BoundaryZero { nu });
        }
        Ok(plus)
    };
    let n0 = 256;
    let mut total = 0.0;
    let mut prev_t = 0.0;
    let mut prev_v = eval(0.0)?;
    for i in 1..=n0 {
        let t = theta_end * i as f64 / n0 as f64;
        let v = eval(t)?;
        total += phase_increment(&eval, prev_t, prev_v, t, v, 0)?;
        prev_t = t;
        prev_v = v;
    }
    // At ν → 1 the phase approaches ±π/2; close the last gap analytically.
    let final_phase = g1.signum() * FRAC_PI_2;
    let last = prev_v.arg();
    total += wrap(final_phase - last);
    let m = total / PI + 0.5;
    let rounded = m.round();
    if (m - rounded).abs() > 0.05 || rounded < 0.0 {
        return Err(Error::Accuracy {
            what: "argument-principle winding",
            estimate: (m - rounded).abs(),
            tolerance: 0.05,
        });
    }
    Ok(rounded as usize)
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

fn phase_increment(
    eval: &impl Fn(f64) -> Result<Complex64>,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    depth: usize,
) -> Result<f64> {
    let d = (v1 / v0).arg();
    if d.abs() <= PI / 8.0 || depth > 40 {
        return Ok(d);
    }
    let tm = 0.5 * (t0 + t1);
    let vm = eval(tm)?;
    Ok(phase_increment(eval, t0, v0, tm, vm, depth + 1)?
        + phase_increment(eval, tm, vm, t1, v1, depth + 1)?)
}

/// Discrete spectrum of a medium: positive roots `ν_j > 1` of `Λ`.
#[derive(Debug, Clone)]
pub struct DispersionAnalysis {
    medium: Medium,
    nu: Vec<f64>,
    d_lambda: Vec<f64>,
    residuals: Vec<f64>,
    gammas: Vec<Vec<f64>>,
    m_b: usize,
    warnings: Vec<String>,
}

impl DispersionAnalysis {
    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    /// Number `M` of root pairs.
    pub fn count(&self) -> usize {
        self.nu.len()
    }

    /// Positive roots in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.nu
    }

    /// `dΛ/dν` at each root.
    pub fn derivatives(&self) -> &[f64] {
        &self.d_lambda
    }

    /// `|Λ(ν_j)|` at each refined root.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// `γ_0..γ_L` at the `j`-th root, from [`minimal_gammas`].
    pub fn gammas(&self, j: usize) -> &[f64] {
        &self.gammas[j]
    }

    pub fn truncation(&self) -> usize {
        self.m_b
    }

    /// Roots rejected as merged with the continuum, and similar notes.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Largest eigenvalue, which dominates far-field decay.
    pub fn largest(&self) -> Option<f64> {
        self.nu.last().copied()
    }

    /// Index of the root matching `|nu|`, if any.
    pub fn index_of(&self, nu: f64) -> Option<usize> {
        let a = nu.abs();
        self.nu
            .iter()
            .position(|&v| (v - a).abs() <= 1e-12 * v.max(1.0))
    }
}

/// Off-diagonal of the even-parity seeding matrix, rows `m = 0..=m_b`.
fn seeding_offdiagonal(medium: &Medium, m_b: usize) -> Vec<f64> {
    let b = |m: usize| 0.5 / (medium.h(m - 1) * medium.h(m)).sqrt();
    (1..=m_b)
        .map(|m| if m == 1 { 2f64.sqrt() * b(1) } else { b(m) })
        .collect()
}

/// Eigenvalues above 1 of the even-parity seeding matrix truncated at `m_B`,
/// ascending. For large enough `m_B` these approximate the discrete roots.
pub fn tridiagonal_seeds(medium: &Medium, m_b: usize) -> Vec<f64> {
    eigenvalues_above(&seeding_offdiagonal(medium, m_b), 1.0)
}

/// Locates the discrete eigenvalues.
///
/// Candidates are the eigenvalues above 1 of the symmetric tridiagonal
/// matrix whose characteristic polynomial is `γ_{m_B+1}`. The even-parity
/// block is used: the full `(2m_B+1)`-square matrix additionally carries
/// antisymmetric eigenvectors that are not roots of `Λ`. Each candidate
/// and a logarithmic scan of `(1, ν_max]` provide brackets, in which `Λ`
/// is refined by safeguarded Newton iteration. The number of roots is
/// checked against [`count_roots`].
pub fn find_discrete_eigenvalues(medium: &Medium, m_b: usize) -> Result<DispersionAnalysis> {
    let l = medium.order();
    if m_b < l {
        return Err(Error::Domain {
            what: "m_B",
            value: m_b as f64,
            expected: "m_B >= L",
        });
    }
    let candidates = tridiagonal_seeds(medium, m_b);

    // Every root lies below the Gershgorin bound of the untruncated matrix.
    let sqrt2 = 2f64.sqrt();
    let b = |m: usize| 0.5 / (medium.h(m - 1) * medium.h(m)).sqrt();
    let mut bound: f64 = sqrt2 * b(1) + b(2);
    for m in 1..=(l + 2) {
        let left = if m == 1 { sqrt2 * b(1) } else { b(m) };
        bound = bound.max(left + b(m + 1));
    }
    let nu_max = bound * 1.01 + 1.0;

    let nu_lo = 1.0 + 1e-14;
    let mut samples = vec![nu_lo, nu_max];
    for w in candidates.windows(2) {
        samples.push(0.5 * (w[0] + w[1]));
    }
    let n_scan = 400;
    let (a, bb) = ((nu_lo - 1.0).ln(), (nu_max - 1.0).ln());
    for i in 1..n_scan {
        samples.push(1.0 + (a + (bb - a) * i as f64 / n_scan as f64).exp());
    }
    for &c in &candidates {
        // Keep each candidate strictly inside a bracket of its own.
        let eps = 1e-7 * c;
        samples.push(c - eps);
        samples.push(c + eps);
    }
    samples.retain(|&v| v >= nu_lo && v <= nu_max);
    samples.sort_by(f64::total_cmp);
    samples.dedup();

    let values: Vec<f64> = samples.iter().map(|&v| lambda_real(medium, v)).collect();
    let mut roots = Vec::new();
    for i in 0..samples.len() - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            roots.push(samples[i]);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(refine_root(medium, samples[i], samples[i + 1], fa));
        }
    }

    let argument = count_roots(medium)?;
    if roots.len() != argument {
        return Err(Error::CountMismatch {
            seeded: roots.len(),
            argument: argument as i64,
        });
    }

    let mut warnings = Vec::new();
    let mut nu = Vec::new();
    let mut d_lambda = Vec::new();
    let mut residuals = Vec::new();
    let mut gammas = Vec::new();
    for r in roots {
        if r - 1.0 <= CONTINUUM_MERGE {
            warnings.push(format!(
                "root at nu = 1 + {:.3e} is numerically merged with the continuum and was dropped",
                r - 1.0
            ));
            continue;
        }
        nu.push(r);
        residuals.push(lambda_real(medium, r).abs());
        d_lambda.push(lambda_derivative(medium, r)?);
        gammas.push(minimal_gammas(medium, r));
    }
    Ok(DispersionAnalysis {
        medium: medium.clone(),
        nu,
        d_lambda,
        residuals,
        gammas,
        m_b,
        warnings,
    })
}

/// `γ_0..γ_L` at a root `ν > 1` by backward recurrence.
///
/// At a root, `γ_m` is the solution of the recurrence that decays beyond
/// `m = L`, where it continues as `γ_L t^{m−L}` with `t = ν − √(ν²−1)`.
/// Forward recurrence from `γ_0, γ_1` reaches the same values only up to
/// roundoff amplified by the growing solution, which is visible in
/// `g(ν, φ_ν)` already at `L ≈ 9`.
pub fn minimal_gammas(medium: &Medium, nu: f64) -> Vec<f64> {
    let l = medium.order();
    let t = nu - ((nu - 1.0) * (nu + 1.0)).sqrt();
    let mut g = vec![0.0; l + 2];
    g[l] = 1.0;
    g[l + 1] = t;
    for m in (1..=l).rev() {
        g[m - 1] = 2.0 * nu * medium.h(m) * g[m] - g[m + 1];
    }
    let g0 = g[0];
    g.truncate(l + 1);
    g.iter_mut().for_each(|v| *v /= g0);
    g
}

/// Safeguarded Newton iteration inside a sign-change bracket.
fn refine_root(medium: &Medium, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = lambda_real(medium, x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let h = 1e-7 * (x - 1.0).min(1.0);
        let df = (lambda_real(medium, x + h) - lambda_real(medium, x - h)) / (2.0 * h);
        let newton = x - fx / df;
        let next = if df.is_finite() && df != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    // Final polish: pick the better of x and its neighbors.
    let cands = [x, x * (1.0 + f64::EPSILON), x * (1.0 - f64::EPSILON)];
    cands
        .into_iter()
        .min_by(|a, b| {
            lambda_real(medium, *a)
                .abs()
                .total_cmp(&lambda_real(medium, *b).abs())
        })
        .unwrap_or(x)
}

/// `dΛ/dν` for real `ν > 1` by central differences, extrapolated to zero
/// step over a geometric sequence of steps (Ridders' scheme). The first
/// step is a fixed fraction of the distance to the branch point at 1, so
/// roots close to the continuum are handled like distant ones.
pub fn lambda_derivative(medium: &Medium, nu: f64) -> Result<f64> {
    if !(nu > 1.0 + DERIVATIVE_EDGE) {
        return Err(Error::Domain {
            what: "nu",
            value: nu,
            expected: "nu > 1 (away from the branch point)",
        });
    }
    const SHRINK: f64 = 1.4;
    const LEVELS: usize = 12;
    let central = |h: f64| (lambda_real(medium, nu + h) - lambda_real(medium, nu - h)) / (2.0 * h);
    let mut h = (0.25 * (nu - 1.0)).min(0.5);
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    table[0][0] = central(h);
    let (mut best, mut err) = (table[0][0], f64::INFINITY);
    for i in 1..LEVELS {
        h /= SHRINK;
        table[0][i] = central(h);
        let mut fac = SHRINK * SHRINK;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let e = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::default_mb;

    fn iso(w: f64) -> Medium {
        Medium::isotropic(w).unwrap()
    }

    #[test]
    fn big_lambda_closed_form() {
        let m = iso(0.8);
        let v = big_lambda(&m, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - (1.0 - 1.6 / 3f64.sqrt())).abs() < 1e-15 && v.im == 0.0);
        let far = big_lambda(&m, Complex64::new(1e6, 0.0)).unwrap();
        assert!((far.re - 0.2).abs() < 1e-6);
        assert!(big_lambda(&m, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn big_lambda_even_exactly() {
        let m = Medium::henyey_greenstein(0.9, 0.5, 4).unwrap();
        for z in [Complex64::new(1.7, 0.3), Complex64::new(-0.2, 2.0), Complex64::new(0.0, 0.5)] {
            assert_eq!(big_lambda(&m, z).unwrap(), big_lambda(&m, -z).unwrap());
        }
    }

    #[test]
    fn little_lambda_examples() {
        assert_eq!(little_lambda(&iso(0.8), 0.77).unwrap(), 1.0);
        let m = Medium::new(0.9, vec![1.0, 0.5]).unwrap();
        assert_eq!(little_lambda(&m, 0.0).unwrap(), 1.0);
        assert!((little_lambda(&m, 0.6).unwrap() - 1.0324).abs() < 1e-14);
        assert_eq!(little_lambda(&m, -0.6).unwrap(), little_lambda(&m, 0.6).unwrap());
        assert!(little_lambda(&m, 1.0).is_err());
    }

    #[test]
    fn boundary_examples() {
        let m = iso(0.8);
        let (p, q) = lambda_boundary(&m, 0.5).unwrap();
        assert!((p.im - 0.4 / 0.75f64.sqrt()).abs() < 1e-15 && p.re == 1.0);
        assert_eq!(q, p.conj());
        let (p0, _) = lambda_boundary(&m, 0.0).unwrap();
        assert_eq!(p0, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn boundary_is_limit_from_above() {
        let m = Medium::henyey_greenstein(0.9, 0.5, 3).unwrap();
        for nu in [-0.7, -0.2, 0.1, 0.45, 0.9] {
            let (plus, minus) = lambda_boundary(&m, nu).unwrap();
            for eps in [1e-4, 1e-5, 1e-6] {
                let up = big_lambda(&m, Complex64::new(nu, eps)).unwrap();
                let down = big_lambda(&m, Complex64::new(nu, -eps)).unwrap();
                let scale = 10.0 * eps * 10.0 / (1.0 - nu * nu).powf(1.5);
                assert!((up - plus).norm() < scale, "nu={nu} eps={eps}");
                assert!((down - minus).norm() < scale);
            }
        }
    }

    #[test]
    fn isotropic_eigenvalue() {
        for w in [0.8, 0.5] {
            let a = find_discrete_eigenvalues(&iso(w), default_mb(0)).unwrap();
            assert_eq!(a.count(), 1);
            let exact = 1.0 / (1.0 - w * w).sqrt();
            assert!((a.eigenvalues()[0] - exact).abs() < 1e-13 * exact);
        }
    }

    #[test]
    fn derivative_isotropic_closed_form() {
        let m = iso(0.8);
        let nu = 5.0 / 3.0;
        let exact = 0.8 / (nu * nu - 1.0f64).powf(1.5);
        let d = lambda_derivative(&m, nu).unwrap();
        assert!((d - exact).abs() < 1e-8 * exact);
        assert!((exact - 0.3375).abs() < 1e-12);
        assert!(lambda_derivative(&m, 1.0).is_err());
    }

    #[test]
    fn anisotropic_refinement() {
        let m = Medium::henyey_greenstein(0.9, 0.5, 9).unwrap();
        let a = find_discrete_eigenvalues(&m, 60).unwrap();
        let b = find_discrete_eigenvalues(&m, 120).unwrap();
        assert!(a.count() >= 1 && a.count() <= 10);
        assert_eq!(a.count(), count_roots(&m).unwrap());
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-10);
            assert!(lambda_real(&m, *x).abs() < 1e-12);
            assert!(lambda_real(&m, x - 1e-6).signum() != lambda_real(&m, x + 1e-6).signum());
        }
    }
}
