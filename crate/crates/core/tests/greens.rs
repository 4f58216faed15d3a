use std::f64::consts::{FRAC_PI_2, PI, TAU};

use flatland::dispersion::{find_discrete_eigenvalues, DispersionAnalysis};
use flatland::fourier_oracle::{density_fourier, green_mixed, green_point_fourier, plane_density_fourier};
use flatland::greens::{
    density_profile_eigen, energy_density_2d, green1d_density, green1d_point, green2d_mode,
    green2d_point, PointOptions,
};
use flatland::quadrature::gauss_legendre_on;
use flatland::tolerances::default_mb;
use flatland::{Error, Medium};
use rayon::prelude::*;

fn analysis(m: Medium) -> DispersionAnalysis {
    let mb = default_mb(m.order());
    find_discrete_eigenvalues(&m, mb).unwrap()
}

fn iso08() -> DispersionAnalysis {
    analysis(Medium::isotropic(0.8).unwrap())
}

fn l2() -> DispersionAnalysis {
    analysis(Medium::new(0.9, vec![1.0, 0.5, 0.25]).unwrap())
}

// Gauss–Legendre nodes on [a, b] split at the interior breakpoints.
fn panels(a: f64, b: f64, breaks: &[f64], n: usize) -> Vec<(f64, f64)> {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&p| p > a && p < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.windows(2)
        .flat_map(|w| {
            let (x, wt) = gauss_legendre_on(n, w[0], w[1]);
            x.into_iter().zip(wt)
        })
        .collect()
}

// ∫ G(x, φ; φ₀) dφ with the ballistic part included. The expansion is even
// in φ, and its smooth part is smooth across φ = ±φ₀; panels are graded
// toward grazing, where e^{−x/μ} turns on.
fn angular_integral(a: &DispersionAnalysis, x: f64, phi0: f64) -> f64 {
    let breaks: Vec<f64> = [0.3, 0.05, 0.005]
        .iter()
        .flat_map(|d| [FRAC_PI_2 - d, FRAC_PI_2 + d])
        .chain([FRAC_PI_2])
        .collect();
    let grid = panels(0.0, PI, &breaks, 32);
    let smooth: f64 = grid
        .iter()
        .map(|&(p, w)| 2.0 * w * green1d_point(a, x, p, phi0).unwrap().smooth)
        .sum();
    let mu0 = phi0.cos();
    let ballistic = if mu0 * x > 0.0 { (-x / mu0).exp() / mu0.abs() } else { 0.0 };
    smooth + ballistic
}

#[test]
fn plane_density_is_double_angular_integral() {
    for a in [iso08(), l2()] {
        for x in [0.6, 2.0] {
            // The φ-integral is a smooth, even, periodic function of φ₀:
            // offset trapezoid, which also keeps φ₀ away from 0 and π where
            // φ₀ and its mirror −φ₀ merge.
            let n = 128;
            let h = PI / n as f64;
            let total: f64 = (0..n)
                .into_par_iter()
                .map(|j| 2.0 * h * angular_integral(&a, x, (j as f64 + 0.5) * h))
                .sum();
            let d = green1d_density(&a, x).unwrap();
            assert!((total / d - 1.0).abs() < 1e-6, "x={x}: {total} vs {d}");
        }
    }
}

#[test]
fn plane_density_matches_fourier() {
    for a in [iso08(), l2()] {
        for x in [0.3, 1.0, 4.0] {
            let e = green1d_density(&a, x).unwrap();
            let f = plane_density_fourier(a.medium(), x).unwrap();
            assert!((e / f - 1.0).abs() < 1e-8, "x={x}: {e} vs {f}");
            assert_eq!(green1d_density(&a, -x).unwrap(), e);
        }
    }
}

#[test]
fn plane_response_matches_fourier_even_part() {
    // The expansion carries the part even under φ → −φ.
    for a in [iso08(), l2()] {
        for (x, phi, phi0) in [(0.8, 0.4, 1.2), (-1.5, 2.5, 0.3), (2.0, -2.0, 2.7)] {
            let e = green1d_point(&a, x, phi, phi0).unwrap().smooth;
            let f = 0.5
                * (green_mixed(a.medium(), x, 0.0, phi, phi0).unwrap()
                    + green_mixed(a.medium(), x, 0.0, -phi, phi0).unwrap());
            assert!((e - f.re).abs() < 1e-7 * e.abs().max(1e-3), "x={x}: {e} vs {f}");
        }
    }
}

#[test]
fn jump_across_source_plane() {
    // Weak form with even test functions: the jump at x = 0 is the
    // ballistic δ(φ − φ₀)/μ₀, split over ±φ₀.
    let test_fns: [fn(f64) -> f64; 2] = [|p| 1.0 + 0.3 * p.cos(), |p| (2.0 * p).cos().powi(2)];
    for a in [iso08(), l2()] {
        let phi0: f64 = 0.9;
        let mu0 = phi0.cos();
        let eps = 1e-6;
        for w in test_fns {
            let grid = panels(-PI, PI, &[-FRAC_PI_2, FRAC_PI_2, phi0, -phi0, 0.0], 24);
            let jump: f64 = grid
                .iter()
                .map(|&(p, wt)| {
                    let hi = green1d_point(&a, eps, p, phi0).unwrap().smooth;
                    let lo = green1d_point(&a, -eps, p, phi0).unwrap().smooth;
                    wt * w(p) * (hi - lo)
                })
                .sum();
            let ballistic = 0.5 * (w(phi0) + w(-phi0)) * (-eps / mu0).exp() / mu0;
            let expected = w(phi0) / mu0;
            assert!((jump + ballistic - expected).abs() < 1e-4, "{jump} {ballistic} {expected}");
        }
    }
}

#[test]
fn plane_response_rejects_bad_input() {
    let a = iso08();
    assert!(matches!(green1d_point(&a, 0.0, 0.3, 1.0), Err(Error::SingularPoint)));
    assert!(green1d_point(&a, 1.0, FRAC_PI_2, 1.0).is_err());
    assert!(green1d_point(&a, 1.0, 0.5, 0.5).is_err());
    assert!(green1d_density(&a, 0.0).is_err());
}

#[test]
fn transverse_modes_match_fourier_isotropic() {
    let a = iso08();
    for (x, q, phi, phi0) in [(1.0, 0.5, 0.4, 2.0), (1.5, 1.0, -0.7, 0.3), (-0.8, 2.5, 2.2, 1.0), (1.0, 0.0, 0.2, 2.9)] {
        let e = green2d_mode(&a, x, q, phi, phi0).unwrap();
        let f = green_mixed(a.medium(), x, q, phi, phi0).unwrap();
        assert!((e - f).norm() < 1e-7 * f.norm().max(1e-3), "x={x} q={q}: {e} vs {f}");
    }
}

#[test]
fn point_response_matches_fourier_isotropic() {
    let a = iso08();
    // One flight direction only, so the oracle can extrapolate its tail.
    for (rho, phi, phi0) in [([1.0, 0.3], 2.0, 0.5), ([1.5, -1.0], -0.4, 2.5), ([0.7, 2.0], 2.8, 1.9)] {
        let e = green2d_point(&a, rho, phi, phi0, PointOptions::default()).unwrap();
        let f = green_point_fourier(a.medium(), rho, phi, phi0).unwrap();
        assert!((e.smooth / f - 1.0).abs() < 1e-5, "rho={rho:?}: {} vs {f}", e.smooth);
        assert_eq!(e.uncollided, 0.0);
    }
}

#[test]
#[ignore = "odd-parity modes are not in the expansion; L = 2 differs from the Fourier oracle by ~30%"]
fn transverse_modes_match_fourier_anisotropic() {
    let a = l2();
    let e = green2d_mode(&a, 1.5, 0.5, 0.9, 2.3).unwrap();
    let f = green_mixed(a.medium(), 1.5, 0.5, 0.9, 2.3).unwrap();
    assert!((e - f).norm() < 1e-6 * f.norm());
}

#[test]
fn point_response_mirror_symmetry() {
    let a = iso08();
    let o = PointOptions::default();
    let (rho, phi, phi0) = ([1.2, 0.7], 2.1, 0.4);
    let g = green2d_point(&a, rho, phi, phi0, o).unwrap().smooth;
    let m = green2d_point(&a, [rho[0], -rho[1]], -phi, -phi0, o).unwrap().smooth;
    assert!((g / m - 1.0).abs() < 1e-8, "{g} vs {m}");
    let x = green2d_point(&a, [-rho[0], rho[1]], PI - phi, PI - phi0, o).unwrap().smooth;
    assert!((g / x - 1.0).abs() < 1e-8, "{g} vs {x}");
}

#[test]
fn density_matches_fourier() {
    for a in [iso08(), l2()] {
        for x in [0.5, 2.0, 7.0] {
            let e = energy_density_2d(&a, x).unwrap();
            let f = density_fourier(a.medium(), x).unwrap();
            assert!((e / f - 1.0).abs() < 1e-8, "x={x}: {e} vs {f}");
        }
    }
}

#[test]
fn density_profile_positive_and_decreasing() {
    for a in [iso08(), l2(), analysis(Medium::henyey_greenstein(0.95, -0.7, 9).unwrap())] {
        let xs: Vec<f64> = (0..40).map(|i| 0.1 + 0.5 * i as f64).collect();
        let p = density_profile_eigen(&a, &xs).unwrap();
        assert!(p.is_positive_decreasing());
        assert!(p.err.iter().zip(&p.u).all(|(e, u)| *e < 1e-8 * u));
    }
}

#[test]
fn density_far_field_is_leading_mode() {
    let a = iso08();
    let nu0 = a.eigenvalues()[0];
    let n0 = flatland::eigenfunctions::normalization(&a, nu0).unwrap();
    let k = flatland::special::bessel_k0(20.0 / nu0).unwrap();
    let r = energy_density_2d(&a, 20.0).unwrap() * PI * nu0 * n0 / k;
    assert!((0.99..=1.01).contains(&r), "{r}");
}

#[test]
fn density_integrates_to_mean_collisions() {
    // The source emits 2π (unit intensity per direction) and each photon
    // travels 1/(1 − ϖ) mean free paths on average.
    let a = iso08();
    let grid = panels(0.0, 60.0, &[0.05, 0.5, 2.0, 8.0, 20.0], 32);
    let total: f64 = grid
        .par_iter()
        .map(|&(x, w)| w * TAU * x * energy_density_2d(&a, x).unwrap())
        .sum();
    assert!((total / (TAU / 0.2) - 1.0).abs() < 1e-6, "{total}");
}
