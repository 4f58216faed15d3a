use std::f64::consts::{PI, TAU};

use flatland::dispersion::big_lambda;
use flatland::polynomials::{
    big_p_table, chebyshev_table, g_function, g_own_angle, gamma_table, Medium,
};
use flatland::quadrature::{integrate, Tolerance};
use flatland::ComplexAngle;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn media() -> Vec<Medium> {
    vec![
        Medium::isotropic(0.7).unwrap(),
        Medium::new(0.9, vec![1.0, 0.5, 0.25]).unwrap(),
        Medium::henyey_greenstein(0.95, 0.6, 9).unwrap(),
    ]
}

// Random points at distance > 0.05 from the cut [−1, 1], |Re|, |Im| ≤ 3.
fn off_cut_points(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let dist = if z.re.abs() <= 1.0 {
            z.im.abs()
        } else {
            Complex64::new(z.re.abs() - 1.0, z.im).norm()
        };
        if dist > 0.05 {
            out.push(z);
        }
    }
    out
}

// Each identity is a difference of two products that individually grow
// like |z − √(z²−1)|^{−2m_B}; the residual is measured against that scale.
fn scale(a: Complex64, b: Complex64) -> f64 {
    a.norm().max(b.norm()).max(1.0)
}

#[test]
fn christoffel_darboux_identities() {
    for medium in media() {
        let mb = medium.order() + 30;
        for z in off_cut_points(50, 11 + medium.order() as u64) {
            let gam = gamma_table(&medium, z, mb + 1);
            let p = chebyshev_table(z, mb + 1);
            let big = big_p_table(z, mb + 1).unwrap();

            let a = big.get(mb) * gam.get(mb + 1);
            let b = big.get(mb + 1) * gam.get(mb);
            let lam = big_lambda(&medium, z).unwrap();
            assert!((a - b - lam).norm() < 1e-10 * scale(a, b), "CD1 z={z}");

            let a = big.get(mb) * p.get(mb + 1);
            let b = big.get(mb + 1) * p.get(mb);
            assert!((a - b - 1.0).norm() < 1e-10 * scale(a, b), "CD2 z={z}");

            let a = gam.get(mb) * p.get(mb + 1);
            let b = gam.get(mb + 1) * p.get(mb);
            let lhs = z * g_own_angle(&medium, z) * medium.albedo();
            assert!((a - b - lhs).norm() < 1e-10 * scale(a, b), "CD3 z={z}");
        }
    }
}

#[test]
fn own_angle_matches_complex_angle() {
    let medium = Medium::henyey_greenstein(0.9, 0.5, 4).unwrap();
    for z in off_cut_points(20, 5) {
        let phi = ComplexAngle::of(z).value();
        let direct = g_function(&medium, z, phi);
        assert!((direct - g_own_angle(&medium, z)).norm() < 1e-10 * direct.norm().max(1.0));
    }
}

#[test]
fn big_p_against_defining_integral() {
    let tol = Tolerance::new(1e-14, 1e-13);
    for z in [
        Complex64::new(1.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 3.0),
        Complex64::new(-2.5, 0.0),
    ] {
        let table = big_p_table(z, 12).unwrap();
        for m in 0..=12 {
            let f = |phi: f64| (m as f64 * phi).cos() / (z - phi.cos()) / TAU;
            let q = integrate(f, 0.0, TAU, &[PI], tol).value;
            assert!((q - table.get(m)).norm() < 1e-10, "m={m} z={z}");
        }
    }
}

#[test]
fn big_p_decays_in_order() {
    let t = big_p_table(Complex64::from(3.0), 30).unwrap();
    for m in 0..30 {
        assert!(t.get(m + 1).re < t.get(m).re && t.get(m + 1).re > 0.0);
    }
}

#[test]
fn near_cut_rejected() {
    assert!(big_p_table(Complex64::new(0.3, 1e-9), 3).is_err());
    assert!(big_p_table(Complex64::new(1.0 + 1e-9, 0.0), 3).is_err());
    assert!(big_p_table(Complex64::new(0.3, 1e-6), 3).is_ok());
}

fn medium_strategy() -> impl Strategy<Value = Medium> {
    (0.05f64..0.99, -0.9f64..0.9, 0usize..10).prop_filter_map("negative phase function", |(w, g, l)| {
        Medium::henyey_greenstein(w, g, l).ok()
    })
}

proptest! {
    #[test]
    fn gamma_parity_is_exact(medium in medium_strategy(), nu in -5.0f64..5.0) {
        let plus = gamma_table(&medium, nu, 15);
        let minus = gamma_table(&medium, -nu, 15);
        for m in 0..=15 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(minus.get(m), sign * plus.get(m));
        }
    }

    #[test]
    fn g_symmetries(medium in medium_strategy(), nu in -5.0f64..5.0, phi in -4.0f64..4.0) {
        let g = g_function(&medium, nu, phi);
        let tol = 1e-12 * g.abs().max(1.0) * (1.0 + nu.abs()).powi(medium.order() as i32);
        prop_assert!((g_function(&medium, nu, -phi) - g).abs() <= tol);
        prop_assert!((g_function(&medium, nu, phi + TAU) - g).abs() <= tol);
        prop_assert!((g_function(&medium, -nu, phi) - g_function(&medium, nu, phi + PI)).abs() <= tol);
    }

    #[test]
    fn chebyshev_is_cosine(theta in 0.0f64..PI, m in 0usize..20) {
        let p = chebyshev_table(theta.cos(), 20);
        prop_assert!((p.get(m) - (m as f64 * theta).cos()).abs() < 1e-12);
    }
}
