//! Energy levels and the cyclotron frequencies that make the Heun series a
//! polynomial.
//!
//! The first truncation condition fixes χ and hence the energy for any ω. The
//! second, `b_{n+1}(ω) = 0`, only admits discrete ω. For n = 1 it reduces to a
//! cubic in ω (static) or in ϖ (rotating):
//!
//! ```text
//! u³ − 16mD²a²/(2|τ|+1) u² + 32Dab(|τ|+1)/(2|τ|+1) u − 4b²(2|τ|+3)/m = 0
//! ```
//!
//! For n ≥ 2 the roots are found by scanning `b_{n+1}` and bisecting.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::heun::truncation_residual;
use crate::params::{
    check_frequency, cyclotron_from_effective, effective_angular, effective_frequency_at, Frame,
    SystemParams,
};
use crate::roots::{scan_roots, Bracket};

pub const DEFAULT_SCAN_POINTS: usize = 4000;
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cubic,
    Bisection,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cubic => "cubic",
            Method::Bisection => "bisection",
        }
    }
}

/// One bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: u32,
    pub l: i32,
    pub frame: Frame,
    pub omega: f64,
    pub varpi: f64,
    pub tau: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    Degenerate,
    NoRoot,
    Invalid,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::Degenerate => "degenerate",
            CellStatus::NoRoot => "no_root",
            CellStatus::Invalid => "invalid",
        }
    }

    pub fn from_error(err: &Error) -> Self {
        match err {
            Error::DegenerateConstraint => CellStatus::Degenerate,
            Error::NoPositiveRoot | Error::EmptyBracket { .. } | Error::InvalidBracket { .. } => {
                CellStatus::NoRoot
            }
            _ => CellStatus::Invalid,
        }
    }
}

/// A row of a spectrum sweep: either an entry or the reason a cell has none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub l: i32,
    pub frame: Frame,
    pub status: CellStatus,
    pub entry: Option<SpectrumEntry>,
}

/// Knobs of the root search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchOptions {
    pub scan_points: usize,
    pub root_tolerance: f64,
    /// Upper limit on admissible cyclotron frequencies.
    pub omega_cap: Option<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            scan_points: DEFAULT_SCAN_POINTS,
            root_tolerance: DEFAULT_ROOT_TOLERANCE,
            omega_cap: None,
        }
    }
}

fn check_level(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::UnsupportedLevel(n))
    } else {
        Ok(())
    }
}

/// E_{n,ℓ} at cyclotron frequency ω.
///
/// Static: `(ω/2)(n + |τ| − ℓ + 1) − 2b²/(mω²) + k²/2m`.
/// Rotating: `(ϖ/2)(n + |τ| + 1) − (ω/2)ℓ − 2b²/(mϖ²) + k²/2m − Ωℓ`.
pub fn energy_level(p: &SystemParams, n: u32, l: i32, omega: f64, frame: Frame) -> Result<f64> {
    check_level(n)?;
    check_frequency(omega)?;
    let m = p.mass;
    let k = p.axial_wavenumber;
    let b = p.linear;
    let tau = effective_angular(p, l);
    let nf = f64::from(n);
    let lf = f64::from(l);
    // At Ω = 0 both frames share the static expression so the limit is exact.
    match frame {
        Frame::Rotating if p.angular_velocity != 0.0 => {
            let varpi = effective_frequency_at(omega, p.angular_velocity);
            Ok(rotating_energy(p, n, l, omega, varpi))
        }
        _ => Ok(
            0.5 * omega * (nf + tau - lf + 1.0) - 2.0 * b * b / (m * omega * omega)
                + k * k / (2.0 * m),
        ),
    }
}

/// Rotating-frame energy with ϖ supplied separately from ω, so the
/// rotation-coupling term `−Ωℓ` can be isolated from the ϖ dependence.
pub fn rotating_energy(p: &SystemParams, n: u32, l: i32, omega: f64, varpi: f64) -> f64 {
    let m = p.mass;
    let k = p.axial_wavenumber;
    let b = p.linear;
    let tau = effective_angular(p, l);
    let lf = f64::from(l);
    0.5 * varpi * (f64::from(n) + tau + 1.0) - 0.5 * omega * lf - 2.0 * b * b / (m * varpi * varpi)
        + k * k / (2.0 * m)
        - p.angular_velocity * lf
}

/// Monic coefficients of the n = 1 cubic in u = ω (static) or u = ϖ (rotating).
pub fn n1_cubic(p: &SystemParams, l: i32) -> [f64; 4] {
    let m = p.mass;
    let (d, a, b) = (p.kratzer_depth, p.kratzer_length, p.linear);
    let tau = effective_angular(p, l);
    let denom = 2.0 * tau + 1.0;
    [
        1.0,
        -16.0 * m * d * d * a * a / denom,
        32.0 * d * a * b * (tau + 1.0) / denom,
        -4.0 * b * b * (2.0 * tau + 3.0) / m,
    ]
}

/// The condition on ω making level n polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyConstraint {
    pub n: u32,
    pub l: i32,
    pub frame: Frame,
    pub form: ConstraintForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintForm {
    /// Closed form for n = 1, in u = ω or ϖ.
    Cubic([f64; 4]),
    /// `b_{n+1}(ω)` from the recurrence.
    Recurrence,
}

impl FrequencyConstraint {
    pub fn new(p: &SystemParams, n: u32, l: i32, frame: Frame) -> Result<Self> {
        check_level(n)?;
        p.validate()?;
        if p.is_landau_limit() {
            return Err(Error::DegenerateConstraint);
        }
        let form = if n == 1 {
            ConstraintForm::Cubic(n1_cubic(p, l))
        } else {
            ConstraintForm::Recurrence
        };
        Ok(Self { n, l, frame, form })
    }

    /// Value of the constraint at ω; zero on allowed frequencies.
    pub fn evaluate(&self, p: &SystemParams, omega: f64) -> Result<f64> {
        match self.form {
            ConstraintForm::Cubic(c) => {
                check_frequency(omega)?;
                let u = effective_frequency_at(omega, self.frame.angular_velocity(p));
                Ok(cubic::evaluate(c, u))
            }
            ConstraintForm::Recurrence => truncation_residual(p, self.l, self.frame, self.n, omega),
        }
    }
}

/// Allowed ω for n = 1 from the closed-form cubic, ascending.
pub fn allowed_frequencies_n1(p: &SystemParams, l: i32, frame: Frame) -> Result<Vec<f64>> {
    let constraint = FrequencyConstraint::new(p, 1, l, frame)?;
    let ConstraintForm::Cubic(c) = constraint.form else {
        unreachable!("n = 1 always has a cubic form");
    };
    let big_omega = frame.angular_velocity(p);
    let mut omegas: Vec<f64> = cubic::real_roots(c)
        .into_iter()
        .filter(|&u| u > 0.0 && u.is_finite())
        .map(|u| cyclotron_from_effective(u, big_omega))
        .filter(|&w| w > 0.0)
        .collect();
    omegas.sort_by(f64::total_cmp);
    if omegas.is_empty() {
        return Err(Error::NoPositiveRoot);
    }
    Ok(omegas)
}

/// `b_{n+1}` as a polynomial in t = 1/√(mϖ/2), ascending powers, with χ fixed
/// by the first truncation condition. μ = 4mDa·t and θ = 2mb·t³.
pub fn truncation_polynomial(p: &SystemParams, l: i32, n: u32) -> Vec<f64> {
    let mu1 = 4.0 * p.mass * p.kratzer_strength();
    let theta1 = 2.0 * p.mass * p.linear;
    let alpha = 2.0 * effective_angular(p, l);
    let nf = f64::from(n);

    let mut prev = vec![1.0];
    let mut curr = vec![0.0, -mu1 / (alpha + 1.0), 0.0, theta1 / 2.0];
    for i in 0..n as usize {
        let fi = i as f64;
        let denom = (fi + 2.0) * (fi + 2.0 + alpha);
        // [θ₁(2i+3+α) t³ − 2μ₁ t] / (2·denom) · curr + (2i − 2n)/denom · prev
        let mut next = vec![0.0; curr.len() + 3];
        for (k, &c) in curr.iter().enumerate() {
            next[k + 3] += theta1 * (2.0 * fi + 3.0 + alpha) / (2.0 * denom) * c;
            next[k + 1] += -2.0 * mu1 / (2.0 * denom) * c;
        }
        let w = (2.0 * fi - 2.0 * nf) / denom;
        for (k, &c) in prev.iter().enumerate() {
            next[k] += w * c;
        }
        prev = curr;
        curr = next;
    }
    curr
}

/// Fujiwara bound on the magnitude of the roots of Σ cₖ tᵏ (ascending).
fn root_magnitude_bound(c: &[f64]) -> f64 {
    let deg = c.len() - 1;
    let lead = c[deg];
    (1..=deg)
        .map(|k| {
            let ratio = (c[deg - k] / lead).abs();
            if k == deg {
                (ratio / 2.0).powf(1.0 / k as f64)
            } else {
                ratio.powf(1.0 / k as f64)
            }
        })
        .fold(0.0, f64::max)
        * 2.0
}

/// Bracket guaranteed to contain every positive allowed ω for level n,
/// derived from root bounds of [`truncation_polynomial`].
pub fn default_bracket(p: &SystemParams, n: u32, l: i32, frame: Frame) -> Result<Bracket> {
    check_level(n)?;
    p.validate()?;
    if p.is_landau_limit() {
        return Err(Error::DegenerateConstraint);
    }
    let poly = truncation_polynomial(p, l, n);
    let first = poly.iter().position(|&c| c != 0.0);
    let last = poly.iter().rposition(|&c| c != 0.0);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::NoPositiveRoot);
    };
    if first == last {
        return Err(Error::NoPositiveRoot);
    }
    let trimmed = &poly[first..=last];
    let t_hi = root_magnitude_bound(trimmed);
    let reversed: Vec<f64> = trimmed.iter().rev().copied().collect();
    let t_lo = 1.0 / root_magnitude_bound(&reversed);

    let to_varpi = |t: f64| 2.0 / (p.mass * t * t);
    let big_omega = frame.angular_velocity(p);
    let lo = cyclotron_from_effective(0.5 * to_varpi(t_hi), big_omega);
    let hi = cyclotron_from_effective(2.0 * to_varpi(t_lo), big_omega);
    Bracket::new(lo, hi).ok_or(Error::InvalidBracket { lo, hi })
}

/// All sign-change roots of `b_{n+1}(ω)` in the bracket, ascending.
pub fn allowed_frequencies(
    p: &SystemParams,
    n: u32,
    l: i32,
    frame: Frame,
    bracket: Bracket,
) -> Result<Vec<f64>> {
    allowed_frequencies_with(p, n, l, frame, bracket, &SearchOptions::default())
}

pub fn allowed_frequencies_with(
    p: &SystemParams,
    n: u32,
    l: i32,
    frame: Frame,
    bracket: Bracket,
    opts: &SearchOptions,
) -> Result<Vec<f64>> {
    let constraint = FrequencyConstraint::new(p, n, l, frame)?;
    let hi = opts.omega_cap.map_or(bracket.hi, |cap| bracket.hi.min(cap));
    let bracket =
        Bracket::new(bracket.lo, hi).ok_or(Error::InvalidBracket { lo: bracket.lo, hi })?;
    let residual = |w: f64| truncation_residual(p, l, frame, constraint.n, w).unwrap_or(f64::NAN);
    let roots = scan_roots(
        residual,
        &bracket.log_points(opts.scan_points),
        opts.root_tolerance,
    );
    if roots.is_empty() {
        return Err(Error::EmptyBracket {
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    Ok(roots)
}

/// Allowed ω for level n by the preferred method: the cubic for n = 1,
/// scan-and-bisect over [`default_bracket`] otherwise.
pub fn solve_level(
    p: &SystemParams,
    n: u32,
    l: i32,
    frame: Frame,
    opts: &SearchOptions,
) -> Result<(Method, Vec<f64>)> {
    if n == 1 {
        let mut roots = allowed_frequencies_n1(p, l, frame)?;
        if let Some(cap) = opts.omega_cap {
            roots.retain(|&w| w <= cap);
            if roots.is_empty() {
                return Err(Error::NoPositiveRoot);
            }
        }
        Ok((Method::Cubic, roots))
    } else {
        let bracket = default_bracket(p, n, l, frame)?;
        let roots = allowed_frequencies_with(p, n, l, frame, bracket, opts)?;
        Ok((Method::Bisection, roots))
    }
}

/// Sweep over (n, ℓ). Cells that fail are reported with a status instead of
/// aborting the sweep. Rows are ordered by (n, ℓ, ω).
pub fn spectrum(
    p: &SystemParams,
    n_range: RangeInclusive<u32>,
    l_range: RangeInclusive<i32>,
    frame: Frame,
    opts: &SearchOptions,
) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    for n in n_range {
        for l in l_range.clone() {
            rows.extend(spectrum_cell(p, n, l, frame, opts));
        }
    }
    rows
}

fn spectrum_cell(
    p: &SystemParams,
    n: u32,
    l: i32,
    frame: Frame,
    opts: &SearchOptions,
) -> Vec<SpectrumRow> {
    let failed = |err: &Error| {
        vec![SpectrumRow {
            n,
            l,
            frame,
            status: CellStatus::from_error(err),
            entry: None,
        }]
    };
    let omegas = match solve_level(p, n, l, frame, opts) {
        Ok((_, omegas)) => omegas,
        Err(err) => return failed(&err),
    };
    let mut rows = Vec::with_capacity(omegas.len());
    for omega in omegas {
        match energy_level(p, n, l, omega, frame) {
            Ok(energy) => rows.push(SpectrumRow {
                n,
                l,
                frame,
                status: CellStatus::Ok,
                entry: Some(SpectrumEntry {
                    n,
                    l,
                    frame,
                    omega,
                    varpi: effective_frequency_at(omega, frame.angular_velocity(p)),
                    tau: effective_angular(p, l),
                    energy,
                }),
            }),
            Err(err) => return failed(&err),
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::chi_at;

    fn generic() -> SystemParams {
        SystemParams {
            linear: 1.0,
            kratzer_depth: 1.0,
            kratzer_length: 1.0,
            ..SystemParams::default()
        }
    }

    #[test]
    fn landau_limit_energy() {
        let p = SystemParams::default();
        assert_eq!(energy_level(&p, 1, 0, 2.0, Frame::Static).unwrap(), 2.0);
        assert_eq!(energy_level(&p, 1, 0, 2.0, Frame::Rotating).unwrap(), 2.0);
    }

    #[test]
    fn energy_rejects_bad_inputs() {
        let p = SystemParams::default();
        assert!(matches!(
            energy_level(&p, 1, 0, -1.0, Frame::Static),
            Err(Error::NonPositiveFrequency(_))
        ));
        assert_eq!(
            energy_level(&p, 0, 0, 1.0, Frame::Static),
            Err(Error::UnsupportedLevel(0))
        );
    }

    #[test]
    fn generic_ground_level_energy() {
        // τ = √2; root of ω³ − 16/(2√2+1) ω² + 32(√2+1)/(2√2+1) ω − 4(2√2+3)
        // found with a 50-digit mpmath root finder.
        let omega = 1.435_523_615_978_119_7;
        let p = generic();
        let roots = allowed_frequencies_n1(&p, 0, Frame::Static).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - omega).abs() < 1e-14 * omega, "{roots:?}");
        let e = energy_level(&p, 1, 0, roots[0], Frame::Static).unwrap();
        let want = roots[0] / 2.0 * (2.0 + 2f64.sqrt()) - 2.0 / (roots[0] * roots[0]);
        assert!((e - want).abs() < 1e-14);
        let scales = crate::params::heun_scales_at(&p, 0, Frame::Static, roots[0]).unwrap();
        let c = chi_at(&p, 0, Frame::Static, roots[0], e).unwrap();
        let identity = c + scales.theta * scales.theta / 4.0 - 2.0 * scales.tau - 2.0;
        assert!((identity - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_without_scalar_potentials() {
        let p = SystemParams::default();
        assert_eq!(
            allowed_frequencies_n1(&p, 0, Frame::Static),
            Err(Error::DegenerateConstraint)
        );
        let b = Bracket::new(0.1, 10.0).unwrap();
        assert_eq!(
            allowed_frequencies(&p, 2, 0, Frame::Static, b),
            Err(Error::DegenerateConstraint)
        );
        let rows = spectrum(&p, 1..=2, -1..=1, Frame::Static, &SearchOptions::default());
        assert_eq!(rows.len(), 6);
        assert!(rows
            .iter()
            .all(|r| r.status == CellStatus::Degenerate && r.entry.is_none()));
    }

    #[test]
    fn pure_kratzer_single_root() {
        let p = SystemParams {
            kratzer_depth: 2.0,
            kratzer_length: 0.5,
            mass: 1.5,
            ..SystemParams::default()
        };
        for l in [-2, 0, 3] {
            let tau = effective_angular(&p, l);
            let want = 16.0 * p.mass * 1.0 / (2.0 * tau + 1.0);
            let got = allowed_frequencies_n1(&p, l, Frame::Static).unwrap();
            assert_eq!(got.len(), 1);
            assert!((got[0] - want).abs() < 1e-14 * want);
            let bracket = default_bracket(&p, 1, l, Frame::Static).unwrap();
            let scanned = allowed_frequencies(&p, 1, l, Frame::Static, bracket).unwrap();
            assert!(
                (scanned[0] - want).abs() < 1e-11 * want,
                "{scanned:?} vs {want}"
            );
        }
    }

    #[test]
    fn rotating_roots_map_from_static_cubic() {
        let p = SystemParams {
            angular_velocity: 1.0,
            ..generic()
        };
        let u = allowed_frequencies_n1(&p, 0, Frame::Static).unwrap();
        let w = allowed_frequencies_n1(&p, 0, Frame::Rotating).unwrap();
        assert_eq!(u.len(), w.len());
        for (u, w) in u.iter().zip(&w) {
            assert!((w - (-2.0 + (4.0 + u * u).sqrt())).abs() < 1e-13);
            assert!((effective_frequency_at(*w, 1.0) - u).abs() < 1e-12 * u);
        }
    }

    #[test]
    fn recurrence_matches_cubic_for_n1() {
        let p = SystemParams {
            mass: 0.7,
            linear: 2.3,
            kratzer_depth: 0.4,
            kratzer_length: 1.9,
            angular_velocity: 0.6,
            ..SystemParams::default()
        };
        for frame in [Frame::Static, Frame::Rotating] {
            for l in -2..=2 {
                let cubic = allowed_frequencies_n1(&p, l, frame).unwrap();
                let bracket = default_bracket(&p, 1, l, frame).unwrap();
                let scan = allowed_frequencies(&p, 1, l, frame, bracket).unwrap();
                assert_eq!(cubic.len(), scan.len(), "{frame} {l}: {cubic:?} {scan:?}");
                for (a, b) in cubic.iter().zip(&scan) {
                    assert!((a - b).abs() <= 1e-10 * a);
                }
            }
        }
    }

    #[test]
    fn truncation_polynomial_matches_recurrence() {
        let p = SystemParams {
            mass: 1.3,
            linear: 0.8,
            kratzer_depth: 0.6,
            kratzer_length: 1.1,
            ..SystemParams::default()
        };
        for n in 1..=3 {
            let poly = truncation_polynomial(&p, 1, n);
            for &omega in &[0.3, 1.0, 4.0] {
                let t = 1.0 / (p.mass * omega / 2.0).sqrt();
                let via_poly = poly.iter().rev().fold(0.0, |acc, c| acc * t + c);
                let direct = truncation_residual(&p, 1, Frame::Static, n, omega).unwrap();
                assert!(
                    (via_poly - direct).abs() <= 1e-11 * direct.abs().max(1.0),
                    "{n} {omega}: {via_poly} {direct}"
                );
            }
        }
    }

    #[test]
    fn higher_levels_have_zero_residual() {
        let p = generic();
        for n in 2..=3 {
            let (method, roots) =
                solve_level(&p, n, 0, Frame::Static, &SearchOptions::default()).unwrap();
            assert_eq!(method, Method::Bisection);
            assert!(!roots.is_empty());
            for w in roots {
                let lo = truncation_residual(&p, 0, Frame::Static, n, w * (1.0 - 1e-9)).unwrap();
                let hi = truncation_residual(&p, 0, Frame::Static, n, w * (1.0 + 1e-9)).unwrap();
                assert!(lo * hi <= 0.0, "n={n} ω={w}");
            }
        }
    }

    #[test]
    fn empty_bracket_reported() {
        let p = generic();
        let b = Bracket::new(1e3, 2e3).unwrap();
        assert!(matches!(
            allowed_frequencies(&p, 1, 0, Frame::Static, b),
            Err(Error::EmptyBracket { .. })
        ));
    }

    #[test]
    fn omega_cap_filters_roots() {
        let p = generic();
        let opts = SearchOptions {
            omega_cap: Some(1.0),
            ..SearchOptions::default()
        };
        assert_eq!(
            solve_level(&p, 1, 0, Frame::Static, &opts),
            Err(Error::NoPositiveRoot)
        );
    }

    #[test]
    fn spectrum_rows_ordered_and_consistent() {
        let p = generic();
        let rows = spectrum(&p, 1..=2, -1..=1, Frame::Static, &SearchOptions::default());
        assert!(rows.len() >= 6);
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!((a.n, a.l) <= (b.n, b.l));
        }
        for row in &rows {
            let e = row.entry.unwrap();
            let residual = truncation_residual(&p, e.l, e.frame, e.n, e.omega).unwrap();
            assert!(residual.abs() < 1e-9, "{e:?}: {residual}");
        }
    }
}
