//! Green's functions of the infinite medium and the energy density around
//! an isotropic point source.
//!
//! * [`green1d_density`], [`green1d_point`]: plane source.
//! * [`RotatedFrame`], [`rotated_eigenmode`], [`rotated_inner_product`]:
//!   separated two-dimensional modes with a complex-rotated angular origin.
//! * [`green2d_point`]: point source, angularly resolved.
//! * [`energy_density_2d`]: point-source energy density.

mod density;
mod plane;
mod point;
mod rotated;

pub use density::{density_profile_eigen, energy_density_2d, DensityMethod, DensityProfile};
pub use plane::{green1d_density, green1d_density_with_error, green1d_point};
pub use point::{green2d_mode, green2d_point, PointOptions};
pub use rotated::{
    inner_product_real_axis, rotated_eigenmode, rotated_inner_product, RotatedFrame,
};

pub use crate::special::bessel_k0;

use crate::error::Result;
use crate::quadrature::{integrate_checked, QuadValue, Tolerance};

/// Green's function value split into its distributional pieces.
///
/// The full value is
/// `uncollided·δ(φ − φ₀) + Σ coefficient·δ(φ − direction) + smooth`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensDecomposition {
    /// Coefficient of `δ(φ − φ₀)`.
    pub uncollided: f64,
    /// Further delta directions and their coefficients.
    pub singular: Vec<(f64, f64)>,
    /// Regular part at the requested `(φ, φ₀)`.
    pub smooth: f64,
    /// Error estimate of the smooth part.
    pub error: f64,
}

// tanh(17) is still distinguishable from 1 in double precision.
const T_MAX: f64 = 17.0;

/// `∫₀¹ f(ν) dν` after the substitution `ν = tanh t`, which compresses the
/// square-root behavior at `ν → 1` and stretches the neighborhood of 0.
pub(crate) fn continuum_integral<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    breaks_nu: &[f64],
    tol: Tolerance,
    what: &'static str,
) -> Result<(T, f64)> {
    let breaks: Vec<f64> = breaks_nu
        .iter()
        .filter(|&&v| v > 0.0 && v < 1.0)
        .map(|&v| v.atanh())
        .filter(|&t| t < T_MAX)
        .collect();
    let est = integrate_checked(
        |t: f64| {
            let c = t.cosh();
            f(t.tanh()) * (1.0 / (c * c))
        },
        0.0,
        T_MAX,
        &breaks,
        tol,
        what,
    )?;
    Ok((est.value, est.error))
}
