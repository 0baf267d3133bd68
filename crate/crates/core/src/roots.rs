//! Sign-change scanning and bisection.

/// Closed interval with `0 < lo < hi`, scanned on a logarithmic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Option<Self> {
        (lo > 0.0 && hi > lo && hi.is_finite()).then_some(Self { lo, hi })
    }

    /// `count + 1` log-spaced points from `lo` to `hi` inclusive.
    pub fn log_points(&self, count: usize) -> Vec<f64> {
        let count = count.max(1);
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (0..=count)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i == count {
                    self.hi
                } else {
                    (a + (b - a) * i as f64 / count as f64).exp()
                }
            })
            .collect()
    }
}

/// Bisects `f` on `[lo, hi]` (opposite signs at the ends) until the interval
/// is below `rel_tol` relative to its upper end.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All sign changes of `f` over `points`, each refined by bisection.
/// NaN samples are skipped.
pub fn scan_roots<F>(f: F, points: &[f64], rel_tol: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in points {
        let fx = f(x);
        if fx.is_nan() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            roots.push(x);
            prev = None;
            continue;
        }
        if let Some((px, pf)) = prev {
            if (pf < 0.0) != (fx < 0.0) {
                roots.push(bisect(&f, px, x, rel_tol));
            }
        }
        prev = Some((x, fx));
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 4e-15);
    }

    #[test]
    fn scan_collects_every_sign_change() {
        let b = Bracket::new(0.1, 10.0).unwrap();
        let roots = scan_roots(
            |x| (x - 0.5) * (x - 2.0) * (x - 7.0),
            &b.log_points(500),
            1e-13,
        );
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([0.5, 2.0, 7.0]) {
            assert!((r - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(0.0, 1.0).is_none());
        assert!(Bracket::new(2.0, 1.0).is_none());
        let pts = Bracket::new(1.0, 100.0).unwrap().log_points(2);
        assert_eq!(pts, vec![1.0, 10.000000000000002, 100.0]);
    }
}
