//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection. Re-entrant: all state is local to the call.

/// Number of eigenvalues strictly below `x`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues, ascending.
///
/// `off.len()` must be `diag.len() - 1`.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
    let count = count.min(diag.len());
    let (lo0, hi0) = gershgorin(diag, off);
    let pad = f64::EPSILON * (lo0.abs().max(hi0.abs()) + 1.0);
    let (lo0, hi0) = (lo0 - pad, hi0 + pad);

    let mut out = Vec::with_capacity(count);
    let mut floor = lo0;
    for k in 0..count {
        // Smallest x with count_below(x) > k.
        let mut lo = floor;
        let mut hi = hi0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let value = 0.5 * (lo + hi);
        out.push(value);
        floor = lo;
    }
    out
}
