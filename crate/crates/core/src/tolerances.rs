//! Numerical thresholds shared across modules.

/// `z` is treated as on the cut `[−1, 1]` when `|Im z|` is below this ...
pub const CUT_IM_TOL: f64 = 1e-8;
/// ... and `|Re z| ≤ 1 + CUT_RE_TOL`.
pub const CUT_RE_TOL: f64 = 1e-8;

/// Grid size for the phase-function positivity check.
pub const PHASE_GRID_POINTS: usize = 4096;

/// Discrete eigenvalues closer than this to 1 are considered merged with
/// the continuum.
pub const CONTINUUM_MERGE: f64 = 1e-10;

/// Smallest `ν − 1` at which `dΛ/dν` is attempted.
pub const DERIVATIVE_EDGE: f64 = 1e-7;

/// Directions with `|cos φ|` below this are treated as grazing.
pub const GRAZING: f64 = 1e-6;

/// Minimum separation `|cos φ − cos φ₀|` for pointwise Green's functions.
pub const DIRECTION_SEPARATION: f64 = 1e-6;

/// Matrix condition numbers above this reject a spectral solve.
pub const MAX_CONDITION: f64 = 1e12;

/// Default truncation of the tridiagonal seeding matrix, `4L + 40`.
pub fn default_mb(order: usize) -> usize {
    4 * order + 40
}
