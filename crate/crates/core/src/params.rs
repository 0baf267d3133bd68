//! Physical inputs and the derived scales that enter the radial equations.
//!
//! Natural units (ħ = c = 1) throughout. The linear coefficient `b` also plays
//! the role of the rotating-frame linear strength; both frames share a single
//! field so that the Ω → 0 limit is exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of the problem: particle, fields, scalar potentials and rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Particle mass `m`.
    pub mass: f64,
    /// Dielectric polarizability `α`.
    pub polarizability: f64,
    /// Charge-density parameter `λ` of the radial electric field `λr/2`.
    pub charge_density: f64,
    /// Uniform magnetic field `B₀` along z.
    pub magnetic_field: f64,
    /// Coefficient `b` of the potential proportional to r.
    pub linear: f64,
    /// Kratzer depth `D`.
    pub kratzer_depth: f64,
    /// Kratzer length `a`.
    pub kratzer_length: f64,
    /// Axial wavenumber `k`.
    pub axial_wavenumber: f64,
    /// Angular velocity `Ω` of the rotating frame.
    pub angular_velocity: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            polarizability: 1.0,
            charge_density: 1.0,
            magnetic_field: 1.0,
            linear: 0.0,
            kratzer_depth: 0.0,
            kratzer_length: 0.0,
            axial_wavenumber: 0.0,
            angular_velocity: 0.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("polarizability", self.polarizability),
            ("charge_density", self.charge_density),
            ("magnetic_field", self.magnetic_field),
            ("linear", self.linear),
            ("kratzer_depth", self.kratzer_depth),
            ("kratzer_length", self.kratzer_length),
            ("axial_wavenumber", self.axial_wavenumber),
            ("angular_velocity", self.angular_velocity),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParams("mass must be positive".into()));
        }
        for (name, value) in [
            ("linear", self.linear),
            ("kratzer_depth", self.kratzer_depth),
            ("kratzer_length", self.kratzer_length),
            ("angular_velocity", self.angular_velocity),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be nonnegative")));
            }
        }
        Ok(())
    }

    /// Returns a copy whose magnetic field realizes the cyclotron frequency
    /// `omega` at the current α, λ and m.
    pub fn with_cyclotron_frequency(mut self, omega: f64) -> Result<Self> {
        let coupling = self.polarizability * self.charge_density;
        if coupling == 0.0 {
            return Err(Error::InvalidParams(
                "cannot tune the cyclotron frequency with α·λ = 0".into(),
            ));
        }
        self.magnetic_field = omega * self.mass / coupling;
        Ok(self)
    }

    /// `D·a`, the Coulomb-like strength of the Kratzer term.
    pub fn kratzer_strength(&self) -> f64 {
        self.kratzer_depth * self.kratzer_length
    }

    /// True when neither scalar potential can constrain the frequency.
    pub fn is_landau_limit(&self) -> bool {
        self.linear == 0.0 && self.kratzer_strength() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Static,
    Rotating,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::Static => "static",
            Frame::Rotating => "rotating",
        }
    }

    /// Angular velocity seen by this frame.
    pub fn angular_velocity(self, p: &SystemParams) -> f64 {
        match self {
            Frame::Static => 0.0,
            Frame::Rotating => p.angular_velocity,
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frame {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "static" => Ok(Frame::Static),
            "rotating" => Ok(Frame::Rotating),
            other => Err(format!(
                "unknown frame `{other}` (expected static|rotating)"
            )),
        }
    }
}

/// Frame-dependent quantities feeding the biconfluent Heun equation.
///
/// In the rotating frame `mu`, `theta` and `chi` are the barred quantities,
/// i.e. evaluated with ϖ in place of ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    pub omega: f64,
    pub varpi: f64,
    pub tau: f64,
    pub mu: f64,
    pub theta: f64,
    /// Energy dependent; unset until a trial energy is supplied.
    pub chi: Option<f64>,
    /// `√(mϖ/2)`, mapping physical r to the dimensionless coordinate.
    pub coordinate_scale: f64,
}

impl DerivedScales {
    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = Some(chi);
        self
    }

    pub fn to_dimensionless(&self, r: f64) -> f64 {
        self.coordinate_scale * r
    }

    pub fn to_physical(&self, y: f64) -> f64 {
        y / self.coordinate_scale
    }
}

/// ω = αλB₀/m.
pub fn cyclotron_frequency(p: &SystemParams) -> Result<f64> {
    if !(p.mass > 0.0) {
        return Err(Error::InvalidParams("mass must be positive".into()));
    }
    let omega = p.polarizability * p.charge_density * p.magnetic_field / p.mass;
    check_frequency(omega)?;
    Ok(omega)
}

pub(crate) fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveFrequency(omega))
    }
}

/// ϖ for the frame at the params' own cyclotron frequency.
pub fn effective_frequency(p: &SystemParams, frame: Frame) -> Result<f64> {
    let omega = cyclotron_frequency(p)?;
    Ok(effective_frequency_at(omega, frame.angular_velocity(p)))
}

/// ϖ = √(ω² + 4Ωω); reduces to ω for Ω = 0.
pub fn effective_frequency_at(omega: f64, angular_velocity: f64) -> f64 {
    if angular_velocity == 0.0 {
        omega
    } else {
        (omega * omega + 4.0 * angular_velocity * omega).sqrt()
    }
}

/// Positive ω with ω² + 4Ωω = ϖ², written without cancellation.
pub fn cyclotron_from_effective(varpi: f64, angular_velocity: f64) -> f64 {
    if angular_velocity == 0.0 {
        varpi
    } else {
        let two_omega = 2.0 * angular_velocity;
        varpi * varpi / (two_omega + (two_omega * two_omega + varpi * varpi).sqrt())
    }
}

/// τ = √(ℓ² + 2mDa²).
pub fn effective_angular(p: &SystemParams, l: i32) -> f64 {
    let l = f64::from(l);
    (l * l + 2.0 * p.mass * p.kratzer_depth * p.kratzer_length * p.kratzer_length).sqrt()
}

/// Derived scales at the params' own cyclotron frequency.
pub fn heun_scales(p: &SystemParams, l: i32, frame: Frame) -> Result<DerivedScales> {
    let omega = cyclotron_frequency(p)?;
    heun_scales_at(p, l, frame, omega)
}

/// Derived scales at an explicitly supplied cyclotron frequency.
pub fn heun_scales_at(p: &SystemParams, l: i32, frame: Frame, omega: f64) -> Result<DerivedScales> {
    p.validate()?;
    check_frequency(omega)?;
    let varpi = effective_frequency_at(omega, frame.angular_velocity(p));
    let s = (p.mass * varpi / 2.0).sqrt();
    let mu = 4.0 * p.mass * p.kratzer_strength() / s;
    let theta = 2.0 * p.mass * p.linear / (s * s * s);
    Ok(DerivedScales {
        omega,
        varpi,
        tau: effective_angular(p, l),
        mu,
        theta,
        chi: None,
        coordinate_scale: s,
    })
}

/// χ (static) or χ̄ (rotating) at the params' own cyclotron frequency.
pub fn chi(p: &SystemParams, l: i32, frame: Frame, energy: f64) -> Result<f64> {
    let omega = cyclotron_frequency(p)?;
    chi_at(p, l, frame, omega, energy)
}

/// χ = (2/(mϖ))·[2mE − k² + mωℓ + 2mℓΩ].
pub fn chi_at(p: &SystemParams, l: i32, frame: Frame, omega: f64, energy: f64) -> Result<f64> {
    check_frequency(omega)?;
    let m = p.mass;
    let big_omega = frame.angular_velocity(p);
    let varpi = effective_frequency_at(omega, big_omega);
    let l = f64::from(l);
    let k = p.axial_wavenumber;
    let bracket = 2.0 * m * energy - k * k + m * omega * l + 2.0 * m * l * big_omega;
    Ok(2.0 / (m * varpi) * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: f64, alpha: f64, lambda: f64, b0: f64) -> SystemParams {
        SystemParams {
            mass: m,
            polarizability: alpha,
            charge_density: lambda,
            magnetic_field: b0,
            ..SystemParams::default()
        }
    }

    #[test]
    fn cyclotron_examples() {
        assert_eq!(
            cyclotron_frequency(&params(1.0, 1.0, 2.0, 3.0)).unwrap(),
            6.0
        );
        assert_eq!(
            cyclotron_frequency(&params(2.0, 1.0, 1.0, 1.0)).unwrap(),
            0.5
        );
        assert!(matches!(
            cyclotron_frequency(&params(1.0, 1.0, -1.0, 1.0)),
            Err(Error::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn effective_frequency_examples() {
        assert_eq!(effective_frequency_at(1.0, 0.0), 1.0);
        assert_eq!(effective_frequency_at(1.0, 2.0), 3.0);
        let p = SystemParams {
            angular_velocity: 2.0,
            ..params(1.0, 1.0, 2.0, 3.0)
        };
        assert_eq!(effective_frequency(&p, Frame::Static).unwrap(), 6.0);
        assert!(effective_frequency(&params(1.0, 1.0, 0.0, 1.0), Frame::Rotating).is_err());
    }

    #[test]
    fn inverse_effective_frequency() {
        for &(omega, big) in &[(1.0, 2.0), (0.3, 7.0), (5.0, 1e-3), (2.0, 0.0)] {
            let varpi = effective_frequency_at(omega, big);
            let back = cyclotron_from_effective(varpi, big);
            assert!(
                (back - omega).abs() <= 1e-14 * omega,
                "{omega} {big} {back}"
            );
        }
    }

    #[test]
    fn effective_angular_examples() {
        let mut p = SystemParams::default();
        assert_eq!(effective_angular(&p, -3), 3.0);
        p.kratzer_depth = 1.0;
        p.kratzer_length = 1.0;
        assert!((effective_angular(&p, 0) - 2f64.sqrt()).abs() < 1e-15);
        p.mass = 2.0;
        p.kratzer_depth = 3.0;
        assert_eq!(effective_angular(&p, 2), 4.0);
    }

    #[test]
    fn heun_scales_examples() {
        let p = SystemParams::default()
            .with_cyclotron_frequency(2.0)
            .unwrap();
        let s = heun_scales(&p, 0, Frame::Static).unwrap();
        assert_eq!((s.mu, s.theta), (0.0, 0.0));

        let p = SystemParams {
            kratzer_depth: 1.0,
            kratzer_length: 1.0,
            ..SystemParams::default()
        };
        let s = heun_scales_at(&p, 0, Frame::Static, 2.0).unwrap();
        assert_eq!(s.mu, 4.0);
        assert_eq!(s.theta, 0.0);

        // ϖ = √10, mϖ/2 = √10/2; reference values from 30-digit arithmetic.
        let p = SystemParams {
            linear: 1.0,
            angular_velocity: 0.75,
            ..p
        };
        let s = heun_scales_at(&p, 0, Frame::Rotating, 2.0).unwrap();
        assert!((s.varpi - 10f64.sqrt()).abs() < 1e-15);
        assert!((s.mu - 3.181_082_915_068_202_7).abs() < 1e-14, "{}", s.mu);
        assert!(
            (s.theta - 1.005_946_743_746_348_3).abs() < 1e-14,
            "{}",
            s.theta
        );
    }

    #[test]
    fn chi_examples() {
        let p = SystemParams::default();
        assert_eq!(chi_at(&p, 0, Frame::Static, 2.0, 1.0).unwrap(), 2.0);
        // 2mE = k² − mωℓ
        let p = SystemParams {
            axial_wavenumber: 1.5,
            ..p
        };
        let energy = (1.5f64 * 1.5 - 2.0 * 1.0) / 2.0;
        assert!(chi_at(&p, 1, Frame::Static, 2.0, energy).unwrap().abs() < 1e-15);
        let p = SystemParams {
            angular_velocity: 1.0,
            ..SystemParams::default()
        };
        let c = chi_at(&p, 1, Frame::Rotating, 1.0, 0.0).unwrap();
        assert!((c - 6.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let p = SystemParams {
            mass: 0.0,
            ..SystemParams::default()
        };
        assert!(p.validate().is_err());
        let p = SystemParams {
            linear: -1.0,
            ..SystemParams::default()
        };
        assert!(heun_scales_at(&p, 0, Frame::Static, 1.0).is_err());
        let p = SystemParams {
            angular_velocity: f64::NAN,
            ..SystemParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn frame_parse_and_display() {
        assert_eq!("rotating".parse::<Frame>().unwrap(), Frame::Rotating);
        assert_eq!(Frame::Static.to_string(), "static");
        assert!("lab".parse::<Frame>().is_err());
    }
}
