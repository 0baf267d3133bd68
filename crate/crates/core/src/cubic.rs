//! Real roots of cubic polynomials.
//!
//! Closed form (trigonometric for three real roots, Cardano otherwise) followed
//! by Newton polishing on the original coefficients.

use std::f64::consts::PI;

/// Real roots of `c[0]·x³ + c[1]·x² + c[2]·x + c[3]`, ascending, with
/// multiplicity collapsed. Degenerate leading coefficients fall back to
/// quadratic or linear solutions.
pub fn real_roots(c: [f64; 4]) -> Vec<f64> {
    let [a3, a2, a1, a0] = c;
    if a3 == 0.0 {
        return quadratic_roots(a2, a1, a0);
    }
    if a0 == 0.0 {
        let mut roots = quadratic_roots(a3, a2, a1);
        roots.push(0.0);
        return finish(roots);
    }
    let a = a2 / a3;
    let b = a1 / a3;
    let d = a0 / a3;

    // x = t − a/3 gives t³ + p t + q = 0
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    let disc = q * q / 4.0 + p * p * p / 27.0;

    let mut roots = Vec::with_capacity(3);
    if disc > 0.0 {
        let sq = disc.sqrt();
        // Pick the larger-magnitude cube root to avoid cancellation.
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        roots.push(t - shift);
    } else if p == 0.0 {
        roots.push(-shift);
    } else {
        let r = (-p / 3.0).sqrt();
        let arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        for k in 0..3 {
            let t = 2.0 * r * ((phi - 2.0 * PI * f64::from(k)) / 3.0).cos();
            roots.push(t - shift);
        }
    }
    for x in roots.iter_mut() {
        *x = polish(c, *x);
    }
    finish(roots)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    if c == 0.0 {
        return finish(vec![0.0, -b / a]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    finish(vec![q / a, c / q])
}

fn finish(mut roots: Vec<f64>) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * x.abs().max(y.abs()));
    roots
}

pub fn evaluate(c: [f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

fn derivative(c: [f64; 4], x: f64) -> f64 {
    (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2]
}

/// Newton iterations, keeping the best iterate by residual.
fn polish(c: [f64; 4], mut x: f64) -> f64 {
    let mut best = x;
    let mut best_res = evaluate(c, x).abs();
    for _ in 0..16 {
        let d = derivative(c, x);
        if d == 0.0 || best_res == 0.0 {
            break;
        }
        x -= evaluate(c, x) / d;
        let res = evaluate(c, x).abs();
        if res < best_res {
            best = x;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn three_distinct_roots() {
        // (x − 1)(x − 2)(x − 3)
        close(&real_roots([1.0, -6.0, 11.0, -6.0]), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn single_real_root() {
        // (x − 2)(x² + 1)
        close(&real_roots([1.0, -2.0, 1.0, -2.0]), &[2.0]);
    }

    #[test]
    fn zero_constant_term_factors_exactly() {
        // x²(x − 5)
        let r = real_roots([1.0, -5.0, 0.0, 0.0]);
        assert_eq!(r, vec![0.0, 5.0]);
    }

    #[test]
    fn triple_root() {
        close(&real_roots([1.0, -3.0, 3.0, -1.0]), &[1.0]);
    }

    #[test]
    fn lower_degree_fallbacks() {
        close(&real_roots([0.0, 1.0, -3.0, 2.0]), &[1.0, 2.0]);
        close(&real_roots([0.0, 0.0, 2.0, -1.0]), &[0.5]);
        assert!(real_roots([0.0, 1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn widely_scaled_roots() {
        // (x − 1e-4)(x − 1)(x − 1e4)
        let (r1, r2, r3) = (1e-4, 1.0, 1e4);
        let c = [
            1.0,
            -(r1 + r2 + r3),
            r1 * r2 + r1 * r3 + r2 * r3,
            -r1 * r2 * r3,
        ];
        close(&real_roots(c), &[r1, r2, r3]);
    }
}
