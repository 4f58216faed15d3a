//! Eigenvalues of a symmetric tridiagonal matrix with zero diagonal, by
//! Sturm-sequence bisection.

/// Number of eigenvalues strictly below `x`.
fn count_below(off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for e in off {
        if d == 0.0 {
            d = -f64::EPSILON * (e.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        d = -x - e * e / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues greater than `floor`, ascending. `off` holds the
/// `n − 1` off-diagonal entries of an `n × n` matrix.
pub(crate) fn eigenvalues_above(off: &[f64], floor: f64) -> Vec<f64> {
    let n = off.len() + 1;
    let bound = (0..n)
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i < off.len() { off[i].abs() } else { 0.0 };
            left + right
        })
        .fold(0.0, f64::max)
        * (1.0 + 1e-12)
        + 1e-300;
    if floor >= bound {
        return Vec::new();
    }
    let first = count_below(off, floor);
    (first..n)
        .map(|k| {
            // k-th eigenvalue (0-based): the smallest x with count_below(x) > k.
            let (mut lo, mut hi) = (floor, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}
