//! Biconfluent Heun power series about the origin.
//!
//! The radial function is written as
//!
//! ```text
//! F(y) = exp(-y²/2 - θy/2) · y^|τ| · H(y),    H(y) = Σ bᵢ yⁱ
//! ```
//!
//! and `H` solves
//!
//! ```text
//! y H'' + (2|τ| + 1 - θy - 2y²) H' + [(χ + θ²/4 - 2|τ| - 2) y + μ - θ(2|τ| + 1)/2] H = 0.
//! ```
//!
//! Matching powers of y gives `b₁ = [θ/2 - μ/(2|τ|+1)] b₀` and
//!
//! ```text
//! (i+2)(i+2+2|τ|) b_{i+2} = [θ(2i+3+2|τ|) - 2μ]/2 · b_{i+1} + (2i + 2 + 2|τ| - χ - θ²/4) · bᵢ
//! ```
//!
//! The series is a polynomial of degree n exactly when
//! `χ + θ²/4 - 2|τ| - 2 = 2n` and `b_{n+1} = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{check_frequency, heun_scales_at, DerivedScales, Frame, SystemParams};

/// Term cap for free (non-truncating) evaluation.
pub const FREE_TERM_CAP: usize = 10_000;
/// Relative tail tolerance for free evaluation.
pub const FREE_TAIL_TOLERANCE: f64 = 1e-14;

/// Canonical parameters of `H_B(α, β, γ, δ; y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    /// 2|τ|
    pub alpha: f64,
    /// θ
    pub beta: f64,
    /// χ + θ²/4
    pub gamma: f64,
    /// −2μ
    pub delta: f64,
}

impl HeunParams {
    pub fn new(tau: f64, mu: f64, theta: f64, chi: f64) -> Self {
        Self {
            alpha: 2.0 * tau.abs(),
            beta: theta,
            gamma: chi + theta * theta / 4.0,
            delta: -2.0 * mu,
        }
    }

    /// Parameters that satisfy the first truncation condition for degree `n`,
    /// with γ = 2n + 2|τ| + 2 set directly rather than through χ.
    pub fn truncating(tau: f64, mu: f64, theta: f64, n: u32) -> Self {
        let alpha = 2.0 * tau.abs();
        Self {
            alpha,
            beta: theta,
            gamma: 2.0 * f64::from(n) + alpha + 2.0,
            delta: -2.0 * mu,
        }
    }

    pub fn from_scales(scales: &DerivedScales, chi: f64) -> Self {
        Self::new(scales.tau, scales.mu, scales.theta, chi)
    }

    pub fn abs_tau(&self) -> f64 {
        self.alpha / 2.0
    }

    pub fn mu(&self) -> f64 {
        -self.delta / 2.0
    }

    pub fn theta(&self) -> f64 {
        self.beta
    }

    pub fn chi(&self) -> f64 {
        self.gamma - self.beta * self.beta / 4.0
    }

    /// Degree forced by the first truncation condition, if γ − 2|τ| − 2 is a
    /// nonnegative even integer.
    pub fn truncation_degree(&self) -> Option<u32> {
        let twice = self.gamma - self.alpha - 2.0;
        let n = (twice / 2.0).round();
        if n >= 0.0 && (twice - 2.0 * n).abs() <= 1e-12 * twice.abs().max(1.0) {
            Some(n as u32)
        } else {
            None
        }
    }

    fn first_ratio(&self) -> f64 {
        self.beta / 2.0 - self.mu() / (self.alpha + 1.0)
    }

    /// Coefficients multiplying b_{i+1} and b_i in the expression for b_{i+2}.
    fn step(&self, i: usize) -> (f64, f64) {
        let i = i as f64;
        let denom = (i + 2.0) * (i + 2.0 + self.alpha);
        let next = (self.beta * (2.0 * i + 3.0 + self.alpha) + self.delta) / (2.0 * denom);
        let prev = (2.0 * i + 2.0 + self.alpha - self.gamma) / denom;
        (next, prev)
    }
}

/// Returns b₀..b_{count−1} with b₀ = 1.
pub fn series_coefficients(hp: &HeunParams, count: usize) -> Vec<f64> {
    let mut b = Vec::with_capacity(count.max(2));
    b.push(1.0);
    if count < 2 {
        return b;
    }
    b.push(hp.first_ratio());
    for i in 0..count.saturating_sub(2) {
        let (next, prev) = hp.step(i);
        b.push(next * b[i + 1] + prev * b[i]);
    }
    b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeunSeries {
    pub params: HeunParams,
    pub coefficients: Vec<f64>,
}

impl HeunSeries {
    pub fn new(params: HeunParams, count: usize) -> Self {
        Self {
            params,
            coefficients: series_coefficients(&params, count),
        }
    }

    /// Polynomial b₀..b_n.
    pub fn polynomial(params: HeunParams, degree: u32) -> Self {
        Self::new(params, degree as usize + 1)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// H(y) by compensated Horner evaluation of the stored coefficients.
    pub fn evaluate(&self, y: f64) -> f64 {
        horner_compensated(&self.coefficients, y)
    }

    /// (H, H', H'') at y.
    pub fn evaluate_with_derivatives(&self, y: f64) -> (f64, f64, f64) {
        let mut h = 0.0;
        let mut dh = 0.0;
        let mut ddh = 0.0;
        for &c in self.coefficients.iter().rev() {
            ddh = ddh * y + 2.0 * dh;
            dh = dh * y + h;
            h = h * y + c;
        }
        (h, dh, ddh)
    }
}

/// Horner's rule with error-free transformations (Graillat, Langlois and Louvet).
fn horner_compensated(coefficients: &[f64], y: f64) -> f64 {
    let mut sum = 0.0;
    let mut err = 0.0;
    for &c in coefficients.iter().rev() {
        let (p, ep) = two_product(sum, y);
        let (s, es) = two_sum(p, c);
        sum = s;
        err = err * y + (ep + es);
    }
    sum + err
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// H(y) for a series that need not terminate, summed until the tail falls
/// below [`FREE_TAIL_TOLERANCE`] relative to the partial sum.
pub fn evaluate_free(hp: &HeunParams, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(1.0);
    }
    // Terms of the entire series peak near i ≈ 2y²; do not stop before that.
    let min_terms = (2.0 * y * y + hp.alpha + 8.0).ceil() as usize;
    let mut prev = 1.0;
    let mut curr = hp.first_ratio();
    let mut sum = 1.0 + curr * y;
    let mut power = y;
    let mut small_run = 0;
    for i in 0..FREE_TERM_CAP {
        let (next, before) = hp.step(i);
        let b = next * curr + before * prev;
        power *= y;
        let term = b * power;
        sum += term;
        if !sum.is_finite() {
            return Err(Error::SeriesNotConverged { terms: i + 3 });
        }
        if term.abs() <= FREE_TAIL_TOLERANCE * sum.abs() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 2 && i + 2 >= min_terms {
            return Ok(sum);
        }
        prev = curr;
        curr = b;
    }
    Err(Error::SeriesNotConverged {
        terms: FREE_TERM_CAP,
    })
}

/// Series of the closed-form radial solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degree {
    Polynomial(u32),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub scales: DerivedScales,
    pub series: HeunSeries,
    pub degree: Degree,
}

impl RadialSolution {
    /// Degree-n solution at trial frequency `omega`, with χ fixed by the
    /// first truncation condition. `omega` is not checked against the second.
    pub fn quantized(p: &SystemParams, l: i32, frame: Frame, n: u32, omega: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedLevel(n));
        }
        let scales = heun_scales_at(p, l, frame, omega)?;
        let hp = HeunParams::truncating(scales.tau, scales.mu, scales.theta, n);
        Ok(Self {
            scales: scales.with_chi(hp.chi()),
            series: HeunSeries::polynomial(hp, n),
            degree: Degree::Polynomial(n),
        })
    }

    fn exponent(&self, y: f64) -> f64 {
        -0.5 * y * y - 0.5 * self.scales.theta * y
    }

    /// (F, F', F'') at y > 0 from the product rule on Gaussian × power × H.
    /// Only meaningful for polynomial solutions.
    pub fn value_and_derivatives(&self, y: f64) -> (f64, f64, f64) {
        let tau = self.scales.tau.abs();
        let (h, dh, ddh) = self.series.evaluate_with_derivatives(y);
        let envelope = self.exponent(y).exp() * y.powf(tau);
        let g1 = -y - 0.5 * self.scales.theta + tau / y;
        let g2 = -1.0 - tau / (y * y);
        let f = envelope * h;
        let df = envelope * (dh + g1 * h);
        let ddf = envelope * (ddh + 2.0 * g1 * dh + (g2 + g1 * g1) * h);
        (f, df, ddf)
    }
}

/// F(y) = exp(−y²/2 − θy/2) · y^|τ| · H(y).
pub fn radial_wavefunction(rs: &RadialSolution, y: f64) -> Result<f64> {
    let tau = rs.scales.tau.abs();
    let h = match rs.degree {
        Degree::Polynomial(_) => rs.series.evaluate(y),
        Degree::Unbounded => evaluate_free(&rs.series.params, y)?,
    };
    let power = if tau == 0.0 { 1.0 } else { y.powf(tau) };
    Ok(rs.exponent(y).exp() * power * h)
}

/// Samples normalized so that Σ |F|² r dr = 1 by the trapezoidal rule on the
/// sample positions (used for plotting only).
pub fn normalize_samples(r: &[f64], f: &[f64]) -> Vec<f64> {
    let mut integral = 0.0;
    for i in 1..r.len().min(f.len()) {
        let left = f[i - 1] * f[i - 1] * r[i - 1];
        let right = f[i] * f[i] * r[i];
        integral += 0.5 * (r[i] - r[i - 1]) * (left + right);
    }
    if integral > 0.0 {
        let scale = integral.sqrt().recip();
        f.iter().map(|v| v * scale).collect()
    } else {
        f.to_vec()
    }
}

/// b_{n+1} at trial frequency ω with χ fixed by the first truncation condition.
/// Zero exactly when ω is an allowed cyclotron frequency for level n.
pub fn truncation_residual(
    p: &SystemParams,
    l: i32,
    frame: Frame,
    n: u32,
    omega: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::UnsupportedLevel(n));
    }
    check_frequency(omega)?;
    let scales = heun_scales_at(p, l, frame, omega)?;
    let hp = HeunParams::truncating(scales.tau, scales.mu, scales.theta, n);
    let b = series_coefficients(&hp, n as usize + 2);
    Ok(b[n as usize + 1])
}
