//! Flatland (two-dimensional) radiative transport in infinite homogeneous
//! media by singular-eigenfunction expansion.
//!
//! The crate computes the discrete spectrum of the dispersion function,
//! the singular eigenfunctions and their normalization, plane and point
//! source Green's functions, and the energy density around an isotropic
//! point source. Two independent solvers are included for validation: a
//! Fourier-space spectral solve with numerical inverse transform, and an
//! analog Monte Carlo random walk.
//!
//! Lengths are in mean free paths; angles are in radians.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the recurrences they implement.
#![allow(clippy::needless_range_loop)]

pub mod dispersion;
pub mod eigenfunctions;
pub mod error;
pub mod fourier_oracle;
pub mod greens;
pub mod montecarlo;
pub mod polynomials;
pub mod quadrature;
pub mod special;
pub mod tolerances;
mod tridiag;

pub use dispersion::DispersionAnalysis;
pub use eigenfunctions::{ComplexAngle, SingularEigenfunction};
pub use error::{Error, Result};
pub use greens::{DensityMethod, DensityProfile, GreensDecomposition};
pub use polynomials::Medium;
