use std::f64::consts::{PI, TAU};

use flatland::dispersion::{find_discrete_eigenvalues, DispersionAnalysis};
use flatland::eigenfunctions::{
    continuum_normalization, discrete_mode_value, eigenfunction_continuum,
    eigenfunction_discrete, eigenfunction_discrete_mode, normalization, ModeKind,
};
use flatland::greens::{inner_product_real_axis, rotated_eigenmode, rotated_inner_product, RotatedFrame};
use flatland::polynomials::{g_function, gamma_table};
use flatland::quadrature::{integrate, periodic_trapezoid, pv_cos_periodic, Tolerance};
use flatland::tolerances::default_mb;
use flatland::{Error, Medium};
use num_complex::Complex64;

// Discrete modes are analytic in φ with poles at distance arccosh ν from
// the real axis, so the periodic trapezoid converges geometrically.
const NODES: usize = 8192;

fn analyses() -> Vec<DispersionAnalysis> {
    [
        Medium::isotropic(0.8).unwrap(),
        Medium::new(0.9, vec![1.0, 0.5, 0.25]).unwrap(),
        Medium::henyey_greenstein(0.9, 0.5, 9).unwrap(),
        Medium::henyey_greenstein(0.95, -0.7, 9).unwrap(),
    ]
    .into_iter()
    .map(|m| {
        let mb = default_mb(m.order());
        find_discrete_eigenvalues(&m, mb).unwrap()
    })
    .collect()
}

// ±ν_j for every root.
fn signed_roots(a: &DispersionAnalysis) -> Vec<f64> {
    a.eigenvalues().iter().flat_map(|&v| [v, -v]).collect()
}

fn mode(a: &DispersionAnalysis, nu: f64) -> impl Fn(f64) -> f64 + '_ {
    move |phi| discrete_mode_value(a, nu, phi).unwrap()
}

#[test]
fn discrete_orthogonality_and_normalization() {
    for a in analyses() {
        let roots = signed_roots(&a);
        for (i, &n1) in roots.iter().enumerate() {
            for &n2 in &roots[i..] {
                let (f1, f2) = (mode(&a, n1), mode(&a, n2));
                let ip = periodic_trapezoid(|p| p.cos() * f1(p) * f2(p), NODES);
                if n1 == n2 {
                    let n = normalization(&a, n1).unwrap();
                    assert!((ip / n - 1.0).abs() < 1e-8, "nu={n1}: quad {ip} vs {n}");
                } else {
                    assert!(ip.abs() < 1e-10, "nu={n1}, nu'={n2}: {ip}");
                }
            }
        }
    }
}

#[test]
fn normalization_is_odd() {
    for a in analyses() {
        for &nu in a.eigenvalues() {
            assert_eq!(normalization(&a, -nu).unwrap(), -normalization(&a, nu).unwrap());
        }
    }
    let m = Medium::henyey_greenstein(0.9, 0.5, 4).unwrap();
    for nu in [0.2, 0.6, 0.95] {
        assert_eq!(continuum_normalization(&m, -nu).unwrap(), -continuum_normalization(&m, nu).unwrap());
    }
}

#[test]
fn normalization_rejects_points_off_spectrum() {
    let a = &analyses()[0];
    assert!(matches!(normalization(a, 2.5), Err(Error::NotInSpectrum(_))));
    assert!(eigenfunction_discrete(a, 5, Complex64::from(0.3)).is_err());
}

#[test]
fn discrete_moments() {
    for a in analyses() {
        let l = a.medium().order();
        for nu in signed_roots(&a) {
            let f = mode(&a, nu);
            let total = periodic_trapezoid(&f, NODES);
            assert!((total - 1.0).abs() < 1e-10, "nu={nu}: {total}");
            let gam = gamma_table(a.medium(), nu, l.max(1));
            for m in 1..=l {
                let c = periodic_trapezoid(|p| (m as f64 * p).cos() * f(p), NODES);
                let s = periodic_trapezoid(|p| (m as f64 * p).sin() * f(p), NODES);
                // Compare against the stored minimal solution; the forward
                // table drifts from it at large m.
                let stored = a.gammas(a.index_of(nu).unwrap())[m] * if nu < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
                assert!((c - stored).abs() < 1e-9, "nu={nu} m={m}: {c} vs {stored}");
                assert!((c - gam.get(m)).abs() < 1e-6);
                assert!(s.abs() < 1e-10);
            }
        }
    }
}

// ∫ f(φ) φ(ν, φ) dφ for a continuum mode, with its delta part placed at ±arccos ν.
fn continuum_pairing(medium: &Medium, nu: f64, f: impl Fn(f64) -> f64) -> f64 {
    let e = eigenfunction_continuum(medium, nu).unwrap();
    let tol = Tolerance::new(1e-14, 1e-12);
    let pv = pv_cos_periodic(|p| f(p) * e.regular_coefficient(p), nu, tol);
    let [t1, t2] = e.singular_directions().unwrap();
    let jac = (1.0 - nu * nu).sqrt();
    pv + e.delta_weight() * (f(t1) + f(t2)) / jac
}

#[test]
fn continuum_moments() {
    let m = Medium::henyey_greenstein(0.9, 0.5, 4).unwrap();
    for nu in [-0.6, 0.05, 0.37, 0.88] {
        let gam = gamma_table(&m, nu, 4);
        assert!((continuum_pairing(&m, nu, |_| 1.0) - 1.0).abs() < 1e-10);
        for k in 1..=4 {
            let c = continuum_pairing(&m, nu, |p| (k as f64 * p).cos());
            assert!((c - gam.get(k)).abs() < 1e-9, "nu={nu} m={k}");
            let s = continuum_pairing(&m, nu, |p| (k as f64 * p).sin());
            assert!(s.abs() < 1e-10);
        }
    }
}

#[test]
fn discrete_continuum_weak_orthogonality() {
    for a in analyses() {
        let medium = a.medium();
        for nu_j in signed_roots(&a) {
            let fj = mode(&a, nu_j);
            let inner = |nu: f64| continuum_pairing(medium, nu, |p| p.cos() * fj(p));
            let weight = |nu: f64| (1.0 - nu * nu).powi(2) * (1.0 + 0.3 * nu);
            let tol = Tolerance::new(1e-12, 1e-10);
            let w = integrate(|nu| weight(nu) * inner(nu), -0.999, 0.999, &[0.0], tol).value;
            assert!(w.abs() < 1e-6, "nu_j={nu_j}: {w}");
        }
    }
}

#[test]
fn decomposed_modes() {
    let a = &analyses()[2];
    let d = eigenfunction_discrete_mode(a, 1).unwrap();
    assert_eq!(d.kind(), ModeKind::Discrete);
    assert_eq!(d.delta_weight(), 0.0);
    assert!(d.singular_directions().is_none());
    for phi in [0.0, 0.7, 2.9] {
        let v = eigenfunction_discrete(a, 1, Complex64::from(phi)).unwrap();
        assert!((d.regular_part(phi) - v.re).abs() < 1e-13 * v.norm().max(1.0));
    }
    let c = eigenfunction_continuum(a.medium(), 0.5).unwrap();
    assert_eq!(c.kind(), ModeKind::Continuum);
    assert!(c.delta_weight() != 0.0);
    assert!((c.regular_coefficient(0.4) - 0.9 * 0.5 / TAU * g_function(a.medium(), 0.5, 0.4)).abs() < 1e-15);
    assert!(eigenfunction_continuum(a.medium(), 1.2).is_err());
}

// ∫|cos φ ψ₁ ψ₂| along Im φ = Im φ_k̂(ν₁q). At large q and L the modes
// reach |cos mθ| ~ e^{m·Im θ} there, and the zero off-diagonal value is a
// cancellation between terms of this size.
fn contour_magnitude(a: &DispersionAnalysis, n1: f64, n2: f64, q: f64) -> f64 {
    let (f1, f2) = (RotatedFrame::new(n1, q), RotatedFrame::new(n2, q));
    let c = f1.phi_k.im;
    periodic_trapezoid(
        |t| {
            let p = Complex64::new(t, c);
            let v1 = discrete_mode_value(a, n1, f1.rotate(p)).unwrap();
            let v2 = discrete_mode_value(a, n2, f2.rotate(p)).unwrap();
            (p.cos() * v1 * v2).norm()
        },
        NODES,
    )
}

#[test]
fn rotated_orthogonality() {
    for a in analyses() {
        let roots = signed_roots(&a);
        for q in [0.0, 0.5, 2.0] {
            for (i, &n1) in roots.iter().enumerate() {
                for &n2 in &roots[i..] {
                    let ip = rotated_inner_product(&a, n1, n2, q).unwrap();
                    if n1 == n2 {
                        let expect = RotatedFrame::new(n1, q).khat_x * normalization(&a, n1).unwrap();
                        assert!((ip / expect - 1.0).norm() < 1e-7, "q={q} nu={n1}: {ip} vs {expect}");
                    } else {
                        let scale = contour_magnitude(&a, n1, n2, q);
                        assert!(ip.norm() < 1e-9 * scale.max(1.0), "q={q} nu={n1} nu'={n2}: {ip} (scale {scale})");
                    }
                }
            }
        }
    }
}

#[test]
fn real_axis_product_below_crossing() {
    // For q < √(1 − 1/ν²) no pole has crossed and both contours agree.
    let a = &analyses()[0];
    let nu = a.eigenvalues()[0];
    let q = 0.5 * (1.0 - 1.0 / (nu * nu)).sqrt();
    let r = inner_product_real_axis(a, nu, nu, q).unwrap();
    let c = rotated_inner_product(a, nu, nu, q).unwrap();
    assert!((r - c).norm() < 1e-10 * c.norm());
}

fn phase_density_complex(m: &Medium, theta: Complex64) -> Complex64 {
    let s: Complex64 = (1..=m.order()).map(|k| (theta * k as f64).cos() * m.beta(k)).sum();
    s / PI + 1.0 / TAU
}

#[test]
fn rotated_mode_solves_transport_equation() {
    for a in analyses() {
        let medium = a.medium().clone();
        let (q, rho, phi) = (0.7, [0.3, -0.2], 1.1f64);
        for nu in signed_roots(&a) {
            let f = RotatedFrame::new(nu, q);
            let expo = (-(f.khat_x * rho[0] + f.khat_y * rho[1]) / nu).exp();
            let psi = |p: Complex64| discrete_mode_value(&a, nu, f.rotate(p)).unwrap() * expo;
            let direct = rotated_eigenmode(&a, nu, q, rho, phi).unwrap();
            assert!((direct - psi(Complex64::from(phi))).norm() < 1e-14 * direct.norm());
            // The scattering integral is taken on the contour continued from
            // q = 0, the line Im φ′ = Im φ_k̂; it is the real axis below the
            // crossing q* = √(1 − 1/ν²).
            let c = f.phi_k.im;
            let scatter = periodic_trapezoid(
                |t| {
                    let p = Complex64::new(t, c);
                    psi(p) * phase_density_complex(&medium, Complex64::from(phi) - p)
                },
                NODES,
            );
            let streaming = -(phi.cos() * f.khat_x + phi.sin() * f.khat_y) / nu;
            let res = direct * (streaming + 1.0) - scatter * medium.albedo();
            assert!(res.norm() < 1e-9 * direct.norm().max(1.0), "nu={nu}: {res}");
            if q < (1.0 - 1.0 / (nu * nu)).sqrt() {
                let real = periodic_trapezoid(
                    |t| psi(Complex64::from(t)) * medium.phase_density(phi - t),
                    NODES,
                );
                assert!((real - scatter).norm() < 1e-10 * scatter.norm().max(1.0));
            }
        }
    }
}
