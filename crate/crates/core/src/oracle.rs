//! Independent checks of the closed-form results: a finite-difference spectrum
//! of the radial Hamiltonian and pointwise residuals of the radial ODE.
//!
//! The radial operator `−(1/2m)(F'' + F'/r) + V(r) F` is discretized in flux
//! form on a uniform grid and symmetrized by `u = √r·F`. The default grid is
//! cell centred (first node at h/2), which makes the face at r = 0 carry zero
//! flux and selects the regular solution for every τ, including τ = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{truncation_residual, RadialSolution};
use crate::params::{
    check_frequency, effective_angular, effective_frequency_at, Frame, SystemParams,
};
use crate::tridiag::lowest_eigenvalues;

/// Largest truncation residual accepted as quantized.
pub const QUANTIZED_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {points}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            points,
            values: None,
        })
    }

    /// Cell-centred grid on (0, extent): nodes at (i + ½)h with h = extent/points.
    pub fn cell_centered(extent: f64, points: usize) -> Result<Self> {
        let h = extent / points as f64;
        Self::new(0.5 * h, extent - 0.5 * h, points)
    }

    /// Vertex grid on (0, extent): nodes at i·h, i = 1..points, h = extent/(points + 1).
    pub fn vertex(extent: f64, points: usize) -> Result<Self> {
        let h = extent / (points as f64 + 1.0);
        Self::new(h, extent - h, points)
    }

    /// Grid covering the low-lying states at cyclotron frequency ω. The extent
    /// in y = √(mϖ/2)·r is `√(2|τ| + 4·states + 4) + 8`, several Gaussian
    /// widths past the outermost classical turning point.
    pub fn auto(
        p: &SystemParams,
        l: i32,
        omega: f64,
        frame: Frame,
        states: usize,
        points: usize,
    ) -> Result<Self> {
        check_frequency(omega)?;
        let varpi = effective_frequency_at(omega, frame.angular_velocity(p));
        let s = (p.mass * varpi / 2.0).sqrt();
        let tau = effective_angular(p, l);
        let y_max = (2.0 * tau + 4.0 * states as f64 + 4.0).sqrt() + 8.0;
        Self::cell_centered(y_max / s, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points as f64 - 1.0)
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|i| self.r_min + h * i as f64)
            .collect()
    }

    /// Same extent, twice the resolution; keeps the cell-centred or vertex
    /// layout of `self`.
    pub fn refined(&self) -> Self {
        let h = self.spacing();
        let points = 2 * self.points;
        if (self.r_min - 0.5 * h).abs() <= 1e-12 * h {
            let extent = self.r_max + 0.5 * h;
            Self::cell_centered(extent, points).expect("refining a valid grid")
        } else if (self.r_min - h).abs() <= 1e-12 * h {
            let extent = self.r_max + h;
            Self::vertex(extent, points + 1).expect("refining a valid grid")
        } else {
            Self::new(self.r_min, self.r_max, 2 * self.points - 1).expect("refining a valid grid")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Flux form `(1/r)(r F')'` symmetrized by √r.
    FluxForm,
    /// `−u''/2m + [(τ² − ¼)/(2mr²) + …] u` with u = 0 one step beyond each end.
    Substituted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FdOptions {
    pub scheme: Scheme,
    /// Relative tolerance on the refinement error estimate.
    pub tolerance: f64,
    /// Fail with [`Error::GridTooCoarse`] instead of flagging.
    pub require_convergence: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            scheme: Scheme::FluxForm,
            tolerance: 1e-4,
            require_convergence: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub grid: RadialGrid,
    /// Estimated error of the finer of the two grids, per eigenvalue.
    pub error_estimates: Vec<f64>,
    pub converged: Vec<bool>,
}

/// V(r) including the additive constants, so that eigenvalues compare
/// directly with the closed-form energies.
pub fn effective_potential(p: &SystemParams, l: i32, omega: f64, frame: Frame, r: f64) -> f64 {
    let tau = effective_angular(p, l);
    centrifugal(p, tau * tau, r) + smooth_potential(p, l, omega, frame, r)
}

fn centrifugal(p: &SystemParams, numerator: f64, r: f64) -> f64 {
    numerator / (2.0 * p.mass * r * r)
}

/// Everything in V(r) except the inverse-square term.
fn smooth_potential(p: &SystemParams, l: i32, omega: f64, frame: Frame, r: f64) -> f64 {
    let m = p.mass;
    let big_omega = frame.angular_velocity(p);
    let varpi_sq = omega * omega + 4.0 * big_omega * omega;
    let lf = f64::from(l);
    let k = p.axial_wavenumber;
    -2.0 * p.kratzer_strength() / r + p.linear * r + m * varpi_sq / 8.0 * r * r - 0.5 * omega * lf
        + k * k / (2.0 * m)
        - big_omega * lf
}

fn assemble(
    p: &SystemParams,
    l: i32,
    omega: f64,
    frame: Frame,
    grid: &RadialGrid,
    scheme: Scheme,
) -> (Vec<f64>, Vec<f64>) {
    let m = p.mass;
    let h = grid.spacing();
    let nodes = grid.nodes();
    let tau = effective_angular(p, l);
    let kinetic = 1.0 / (m * h * h);
    let diag: Vec<f64> = nodes
        .iter()
        .map(|&r| {
            let inverse_square = match scheme {
                Scheme::FluxForm => tau * tau,
                Scheme::Substituted => tau * tau - 0.25,
            };
            kinetic + centrifugal(p, inverse_square, r) + smooth_potential(p, l, omega, frame, r)
        })
        .collect();
    let off: Vec<f64> = nodes
        .windows(2)
        .map(|w| match scheme {
            Scheme::FluxForm => {
                let face = 0.5 * (w[0] + w[1]);
                -face / (2.0 * m * h * h * (w[0] * w[1]).sqrt())
            }
            Scheme::Substituted => -0.5 / (m * h * h),
        })
        .collect();
    (diag, off)
}

/// Lowest eigenvalues on a single grid, no refinement.
pub fn fd_eigenvalues(
    p: &SystemParams,
    l: i32,
    omega: f64,
    frame: Frame,
    grid: &RadialGrid,
    count: usize,
    scheme: Scheme,
) -> Result<Vec<f64>> {
    check_frequency(omega)?;
    p.validate()?;
    if count == 0 || count > grid.points / 4 {
        return Err(Error::InvalidGrid(format!(
            "requested {count} eigenvalues from {} nodes (at most N/4)",
            grid.points
        )));
    }
    let (diag, off) = assemble(p, l, omega, frame, grid, scheme);
    Ok(lowest_eigenvalues(&diag, &off, count))
}

/// Lowest `count` eigenvalues from `grid` and its refinement, combined by
/// Richardson extrapolation (second-order scheme).
pub fn fd_eigensolve(
    p: &SystemParams,
    l: i32,
    omega: f64,
    frame: Frame,
    grid: &RadialGrid,
    count: usize,
) -> Result<EigenReport> {
    fd_eigensolve_with(p, l, omega, frame, grid, count, &FdOptions::default())
}

pub fn fd_eigensolve_with(
    p: &SystemParams,
    l: i32,
    omega: f64,
    frame: Frame,
    grid: &RadialGrid,
    count: usize,
    opts: &FdOptions,
) -> Result<EigenReport> {
    let coarse = fd_eigenvalues(p, l, omega, frame, grid, count, opts.scheme)?;
    let fine_grid = grid.refined();
    let fine = fd_eigenvalues(p, l, omega, frame, &fine_grid, count, opts.scheme)?;
    let varpi = effective_frequency_at(omega, frame.angular_velocity(p));

    let mut eigenvalues = Vec::with_capacity(count);
    let mut error_estimates = Vec::with_capacity(count);
    let mut converged = Vec::with_capacity(count);
    for (index, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        let estimate = (f - c).abs() / 3.0;
        let scale = f.abs().max(varpi);
        let ok = estimate <= opts.tolerance * scale;
        if !ok && opts.require_convergence {
            return Err(Error::GridTooCoarse {
                index,
                change: (f - c).abs(),
                tolerance: opts.tolerance * scale,
            });
        }
        eigenvalues.push((4.0 * f - c) / 3.0);
        error_estimates.push(estimate);
        converged.push(ok);
    }
    Ok(EigenReport {
        eigenvalues,
        grid: grid.clone(),
        error_estimates,
        converged,
    })
}

/// Max over `samples` of |left side of the radial ODE| / max |F| for the
/// degree-n closed-form solution at ω.
pub fn ode_residual(
    p: &SystemParams,
    l: i32,
    frame: Frame,
    n: u32,
    omega: f64,
    samples: &[f64],
) -> Result<f64> {
    let residual = truncation_residual(p, l, frame, n, omega)?;
    if !(residual.abs() <= QUANTIZED_TOLERANCE) {
        return Err(Error::NotQuantized { residual });
    }
    ode_residual_unchecked(p, l, frame, n, omega, samples)
}

/// As [`ode_residual`], without requiring ω to satisfy `b_{n+1} = 0`. The
/// degree-n polynomial is still used, so off-root frequencies show up as a
/// nonzero residual.
pub fn ode_residual_unchecked(
    p: &SystemParams,
    l: i32,
    frame: Frame,
    n: u32,
    omega: f64,
    samples: &[f64],
) -> Result<f64> {
    let solution = RadialSolution::quantized(p, l, frame, n, omega)?;
    let scales = solution.scales;
    let chi = scales.chi.expect("quantized solution carries χ");
    let tau_sq = scales.tau * scales.tau;
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for &y in samples {
        if !(y > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "residual samples must be positive, got {y}"
            )));
        }
        let (f, df, ddf) = solution.value_and_derivatives(y);
        let lhs = ddf + df / y - tau_sq / (y * y) * f - y * y * f + scales.mu / y * f
            - scales.theta * y * f
            + chi * f;
        worst = worst.max(lhs.abs());
        peak = peak.max(f.abs());
    }
    if peak == 0.0 {
        return Ok(if worst == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(worst / peak)
}

/// Evenly spaced samples on [start, end].
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (end - start) * i as f64 / (count as f64 - 1.0))
            .collect(),
    }
}
