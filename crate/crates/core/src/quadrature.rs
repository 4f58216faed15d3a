//! Quadrature building blocks: adaptive Gauss–Kronrod, Gauss–Legendre
//! rules, periodic trapezoid sums, Wynn's epsilon algorithm and an
//! accelerated integrator for slowly decaying oscillatory tails.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

// Published 21-point Kronrod tables, kept digit for digit.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_169_335,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// One 21-point Kronrod panel: (estimate, error estimate).
pub fn gk21<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = T::default();
    let mut fv = [(T::default(), T::default()); 10];
    for i in 0..10 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[i] = (f1, f2);
        kron = kron + (f1 + f2) * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[i / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for i in 0..10 {
        asc += WGK[i] * ((fv[i].0 - mean).magnitude() + (fv[i].1 - mean).magnitude());
    }
    let result = kron * h;
    let asc = asc * h.abs();
    let mut err = (kron - gauss).magnitude() * h.abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (result, err)
}

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_panels: 4000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-14, 1e-12)
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Globally adaptive Gauss–Kronrod integration over `[a, b]` with interior
/// breakpoints. Returns the best estimate even when the tolerance is not
/// met; callers inspect `error`.
pub fn integrate<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Estimate<T> {
    let mut pts = vec![a];
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&p| p > lo && p < hi).collect();
    inner.sort_by(|x, y| x.total_cmp(y));
    if a > b {
        inner.reverse();
    }
    pts.extend(inner);
    pts.push(b);
    pts.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = T::default();
    let mut total_err = 0.0;
    for w in pts.windows(2) {
        let (value, err) = gk21(&mut f, w[0], w[1]);
        total = total + value;
        total_err += err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }
    while heap.len() < tol.max_panels {
        if total_err <= tol.abs.max(tol.rel * total.magnitude()) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
    // Re-sum in a fixed order so the result does not depend on heap layout.
    let mut panels: Vec<Panel<T>> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(T::default(), |acc, p| acc + p.value);
    let error = panels.iter().map(|p| p.err).sum();
    Estimate { value, error }
}

/// Like [`integrate`], but fails when the tolerance is not reached.
pub fn integrate_checked<T: QuadValue>(
    f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
    what: &'static str,
) -> Result<Estimate<T>> {
    let est = integrate(f, a, b, breaks, tol);
    let target = tol.abs.max(tol.rel * est.value.magnitude());
    // Allow a small margin: the Kronrod error estimate is pessimistic.
    if !(est.error <= 10.0 * target) {
        return Err(Error::Accuracy {
            what,
            estimate: est.error,
            tolerance: target,
        });
    }
    Ok(est)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|t| c + h * t).collect(),
        w.iter().map(|t| h * t).collect(),
    )
}

/// Trapezoid sum of a `2π`-periodic function with `n` equispaced nodes.
pub fn periodic_trapezoid<T: QuadValue>(mut f: impl FnMut(f64) -> T, n: usize) -> T {
    let h = std::f64::consts::TAU / n as f64;
    let mut s = T::default();
    for j in 0..n {
        s = s + f(j as f64 * h);
    }
    s * h
}

/// Multiplicative identity for quadrature values.
pub trait One {
    fn one() -> Self;
}

impl One for f64 {
    fn one() -> Self {
        1.0
    }
}

impl One for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate taken from the
/// spread of the two most recent entries of the best even column.
pub fn wynn_epsilon<T>(sums: &[T]) -> (T, f64)
where
    T: QuadValue + One + std::ops::Div<Output = T>,
{
    let n = sums.len();
    let last = *sums.last().expect("empty sequence");
    if n < 3 {
        let err = if n == 2 {
            (sums[1] - sums[0]).magnitude()
        } else {
            f64::INFINITY
        };
        return (last, err);
    }
    let mut best = last;
    let mut best_err = (sums[n - 1] - sums[n - 2]).magnitude();
    let mut prev: Vec<T> = vec![T::default(); n + 1];
    let mut cur: Vec<T> = sums.to_vec();
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let dm = d.magnitude();
            if dm == 0.0 || !dm.is_finite() {
                return (best, best_err);
            }
            next.push(prev[i + 1] + T::one() / d);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 && cur.len() >= 2 {
            let m = cur.len();
            let e = (cur[m - 1] - cur[m - 2]).magnitude();
            if e < best_err {
                best = cur[m - 1];
                best_err = e;
            }
        }
    }
    (best, best_err)
}

/// Integral over `[a, ∞)` of an oscillatory integrand whose oscillation has
/// period `2·half_period` (asymptotically). Consecutive half-period pieces
/// alternate in sign; their partial sums are extrapolated with Wynn's
/// epsilon algorithm.
pub fn oscillatory_tail<T>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    half_period: f64,
    tol: Tolerance,
    max_pieces: usize,
    what: &'static str,
) -> Result<Estimate<T>>
where
    T: QuadValue + One + std::ops::Div<Output = T>,
{
    let piece_tol = Tolerance {
        abs: tol.abs * 0.1,
        rel: tol.rel * 0.1,
        max_panels: 200,
    };
    let mut sums: Vec<T> = Vec::new();
    let mut acc = T::default();
    let mut quad_err = 0.0;
    let mut last = (T::default(), f64::INFINITY);
    let mut stable = 0;
    for n in 0..max_pieces {
        let lo = a + n as f64 * half_period;
        let hi = lo + half_period;
        let piece = integrate(&mut f, lo, hi, &[], piece_tol);
        acc = acc + piece.value;
        quad_err += piece.error;
        sums.push(acc);
        if sums.len() >= 8 {
            let window = &sums[sums.len().saturating_sub(40)..];
            let (lim, err) = wynn_epsilon(window);
            let shift = (lim - last.0).magnitude();
            let target = tol.abs.max(tol.rel * lim.magnitude());
            if shift <= target && err <= target {
                stable += 1;
                if stable >= 2 {
                    return Ok(Estimate {
                        value: lim,
                        error: shift.max(err) + quad_err,
                    });
                }
            } else {
                stable = 0;
            }
            last = (lim, err);
        }
    }
    let target = tol.abs.max(tol.rel * last.0.magnitude());
    Err(Error::Accuracy {
        what,
        estimate: last.1,
        tolerance: target,
    })
}

/// Principal value of `∫₀^{2π} f(φ)/(ν − cos φ) dφ` for `|ν| < 1` and smooth
/// periodic `f`, by subtracting the pole behavior at `±arccos ν`.
///
/// Intended as an independent check of closed forms.
pub fn pv_cos_periodic(f: impl Fn(f64) -> f64, nu: f64, tol: Tolerance) -> f64 {
    let t = nu.acos();
    let (fp, fm) = (f(t), f(-t));
    let a = 0.5 * (fp + fm);
    let b = 0.5 * (fp - fm) / t.sin();
    // PV ∫ 1/(ν−cos) = 0 and PV ∫ sin/(ν−cos) = 0 over a full period.
    let g = |p: f64| {
        let d = nu - p.cos();
        if d.abs() < 1e-300 {
            0.0
        } else {
            (f(p) - a - b * p.sin()) / d
        }
    };
    let tp = std::f64::consts::TAU;
    integrate(g, 0.0, tp, &[t, tp - t, std::f64::consts::PI], tol).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gk_polynomial_exact() {
        let est = integrate(|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0, &[], Tolerance::default());
        assert!((est.value - (32.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn gk_endpoint_singularity() {
        let est = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &[], Tolerance::new(1e-13, 1e-12));
        assert!((est.value - 2.0).abs() < 1e-10, "{}", est.value);
    }

    #[test]
    fn complex_integrand() {
        let est = integrate(|x: f64| Complex64::new(0.0, x).exp(), 0.0, PI, &[], Tolerance::default());
        assert!((est.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn gauss_legendre_moments() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (lim, _) = wynn_epsilon(&sums);
        assert!((lim - 2f64.ln()).abs() < 1e-12, "{lim}");
    }

    #[test]
    fn oscillatory_sine_integral() {
        // ∫₁^∞ sin x / x dx = π/2 − Si(1)
        let si1 = 0.946_083_070_367_183_1;
        let est = oscillatory_tail(|x: f64| x.sin() / x, 1.0, PI, Tolerance::new(1e-13, 1e-12), 400, "t")
            .unwrap();
        assert!((est.value - (PI / 2.0 - si1)).abs() < 1e-11, "{}", est.value);
    }

    #[test]
    fn pv_cos_matches_glauert() {
        // PV ∫ cos(3φ)/(ν − cos φ) dφ = −2π sin(3θ)/sin θ
        let nu: f64 = 0.37;
        let t = nu.acos();
        let exact = -2.0 * PI * (3.0 * t).sin() / t.sin();
        let got = pv_cos_periodic(|p| (3.0 * p).cos(), nu, Tolerance::new(1e-14, 1e-13));
        assert!((got - exact).abs() < 1e-10, "{got} vs {exact}");
    }
}
