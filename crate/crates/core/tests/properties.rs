use dipole_core::params::{chi_at, effective_frequency_at, heun_scales_at};
use dipole_core::quantize::{allowed_frequencies_n1, rotating_energy, solve_level, SearchOptions};
use dipole_core::{
    effective_angular, energy_level, series_coefficients, truncation_residual, Frame, HeunParams,
    SystemParams,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SystemParams> {
    (
        0.1..10.0f64,
        0.1..10.0f64,
        0.1..10.0f64,
        0.1..10.0f64,
        0.0..5.0f64,
        -2.0..2.0f64,
    )
        .prop_map(
            |(mass, kratzer_depth, kratzer_length, linear, angular_velocity, axial_wavenumber)| {
                SystemParams {
                    mass,
                    kratzer_depth,
                    kratzer_length,
                    linear,
                    angular_velocity,
                    axial_wavenumber,
                    ..SystemParams::default()
                }
            },
        )
}

fn frame() -> impl Strategy<Value = Frame> {
    prop_oneof![Just(Frame::Static), Just(Frame::Rotating)]
}

/// y·H'' + (1 + α − βy − 2y²)·H' + ((γ − α − 2)y − (δ + (1 + α)β)/2)·H, as
/// polynomial coefficients, together with the magnitude of the largest term
/// feeding each coefficient.
fn heun_operator(hp: &HeunParams, b: &[f64]) -> Vec<(f64, f64)> {
    let (alpha, beta, gamma, delta) = (hp.alpha, hp.beta, hp.gamma, hp.delta);
    let deg = b.len() - 1;
    let mut out = vec![(0.0, 0.0); deg + 2];
    let mut add = |j: usize, v: f64| {
        out[j].0 += v;
        out[j].1 = f64::max(out[j].1, v.abs());
    };
    for (i, &c) in b.iter().enumerate() {
        let fi = i as f64;
        if i >= 1 {
            add(i - 1, fi * (fi - 1.0) * c);
            add(i - 1, (1.0 + alpha) * fi * c);
            add(i, -beta * fi * c);
            add(i + 1, -2.0 * fi * c);
        }
        add(i + 1, (gamma - alpha - 2.0) * c);
        add(i, -0.5 * (delta + (1.0 + alpha) * beta) * c);
    }
    out
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frames_agree_without_rotation(p in params(), l in -5..=5i32, omega in 0.05..20.0f64, n in 1..4u32) {
        let p = SystemParams { angular_velocity: 0.0, ..p };
        let s = heun_scales_at(&p, l, Frame::Static, omega).unwrap();
        let r = heun_scales_at(&p, l, Frame::Rotating, omega).unwrap();
        prop_assert_eq!(s, r);
        let es = energy_level(&p, n, l, omega, Frame::Static).unwrap();
        let er = energy_level(&p, n, l, omega, Frame::Rotating).unwrap();
        prop_assert_eq!(es, er);
        let general = rotating_energy(&p, n, l, omega, omega);
        prop_assert!(relative(es, general) < 1e-13, "{} vs {}", es, general);
    }

    #[test]
    fn chi_is_linear_in_energy(p in params(), f in frame(), l in -5..=5i32, omega in 0.05..20.0f64, e in -50.0..50.0f64, de in 0.1..10.0f64) {
        let varpi = effective_frequency_at(omega, f.angular_velocity(&p));
        let slope = (chi_at(&p, l, f, omega, e + de).unwrap() - chi_at(&p, l, f, omega, e).unwrap()) / de;
        prop_assert!(relative(slope, 4.0 / varpi) < 1e-8, "{} vs {}", slope, 4.0 / varpi);
    }

    #[test]
    fn tau_ignores_frame_and_sign_of_l(p in params(), l in -5..=5i32, omega in 0.05..20.0f64) {
        let s = heun_scales_at(&p, l, Frame::Static, omega).unwrap();
        let r = heun_scales_at(&p, l, Frame::Rotating, omega).unwrap();
        prop_assert_eq!(s.tau, r.tau);
        prop_assert_eq!(effective_angular(&p, l), effective_angular(&p, -l));
        let direct = (f64::from(l * l) + 2.0 * p.mass * p.kratzer_depth * p.kratzer_length.powi(2)).sqrt();
        prop_assert!(relative(s.tau, direct) < 1e-15);
    }

    #[test]
    fn coefficients_solve_the_heun_equation(
        tau in 0.0..6.0f64, mu in -5.0..5.0f64, theta in -5.0..5.0f64, chi in -20.0..20.0f64, count in 4..40usize,
    ) {
        let hp = HeunParams::new(tau, mu, theta, chi);
        let b = series_coefficients(&hp, count);
        let ops = heun_operator(&hp, &b);
        // Coefficients above count − 2 involve the missing b_count.
        for (j, &(value, scale)) in ops.iter().enumerate().take(count - 1) {
            prop_assert!(value.abs() <= 1e-12 * scale.max(1e-300), "y^{}: {} (scale {})", j, value, scale);
        }
    }

    #[test]
    fn truncated_series_is_a_polynomial(tau in 0.0..6.0f64, mu in -5.0..5.0f64, theta in -5.0..5.0f64, n in 1..6u32) {
        let hp = HeunParams::truncating(tau, mu, theta, n);
        let ops = heun_operator(&hp, &series_coefficients(&hp, n as usize + 1));
        // With γ = 2n + α + 2 the top-degree term cancels exactly; the only
        // leftover is at y^n, proportional to b_{n+1}.
        let top = ops[n as usize + 1];
        prop_assert!(top.0.abs() <= 1e-12 * top.1.max(1e-300));
    }

    #[test]
    fn cubic_roots_zero_the_recurrence(p in params(), f in frame(), l in -5..=5i32) {
        let tau = effective_angular(&p, l);
        for omega in allowed_frequencies_n1(&p, l, f).unwrap() {
            let s = heun_scales_at(&p, l, f, omega).unwrap();
            // b₂ = A·b₁ + B·b₀ with χ fixed by the first truncation condition.
            let b1 = s.theta / 2.0 - s.mu / (2.0 * tau + 1.0);
            let a = (s.theta * (3.0 + 2.0 * tau) - 2.0 * s.mu) / (4.0 * (2.0 + 2.0 * tau));
            let scale = (a * b1).abs() + 1.0 / (2.0 + 2.0 * tau);
            let b2 = truncation_residual(&p, l, f, 1, omega).unwrap();
            prop_assert!(b2.abs() <= 1e-9 * scale, "b2 = {} at ω = {} (scale {})", b2, omega, scale);
        }
    }

    #[test]
    fn quantized_pairs_satisfy_the_identity(p in params(), f in frame(), l in -5..=5i32, n in 1..4u32) {
        let (_, omegas) = solve_level(&p, n, l, f, &SearchOptions::default()).unwrap();
        for omega in omegas {
            let e = energy_level(&p, n, l, omega, f).unwrap();
            let s = heun_scales_at(&p, l, f, omega).unwrap();
            let chi = chi_at(&p, l, f, omega, e).unwrap();
            let gap = chi + s.theta * s.theta / 4.0 - 2.0 * s.tau - 2.0 - 2.0 * f64::from(n);
            prop_assert!(gap.abs() < 1e-10, "gap {} at ω = {}", gap, omega);
        }
    }

    #[test]
    fn varpi_roots_do_not_depend_on_rotation(p in params(), l in -5..=5i32, spin in 0.01..5.0f64) {
        let slow = SystemParams { angular_velocity: 0.0, ..p };
        let fast = SystemParams { angular_velocity: spin, ..p };
        let at_rest = allowed_frequencies_n1(&slow, l, Frame::Rotating).unwrap();
        let spinning = allowed_frequencies_n1(&fast, l, Frame::Rotating).unwrap();
        prop_assert_eq!(at_rest.len(), spinning.len());
        for (w0, w) in at_rest.iter().zip(&spinning) {
            prop_assert!(w < w0);
            let varpi = effective_frequency_at(*w, spin);
            prop_assert!(relative(varpi, *w0) < 1e-12, "{} vs {}", varpi, w0);
        }
    }

    #[test]
    fn opposite_l_shares_frequency_and_splits_energy(p in params(), f in frame(), l in 1..=5i32) {
        let plus = allowed_frequencies_n1(&p, l, f).unwrap();
        let minus = allowed_frequencies_n1(&p, -l, f).unwrap();
        prop_assert_eq!(&plus, &minus);
        let lf = f64::from(l);
        for &omega in &plus {
            let split = energy_level(&p, 1, -l, omega, f).unwrap() - energy_level(&p, 1, l, omega, f).unwrap();
            let want = omega * lf + 2.0 * f.angular_velocity(&p) * lf;
            prop_assert!((split - want).abs() < 1e-12 * want.abs().max(1.0), "{} vs {}", split, want);
        }
    }

    #[test]
    fn rotation_shifts_energy_by_page_werner_term(p in params(), l in -5..=5i32, n in 1..4u32, omega in 0.05..20.0f64) {
        let fixed = energy_level(&p, n, l, omega, Frame::Static).unwrap();
        let frozen = rotating_energy(&p, n, l, omega, omega);
        let shift = frozen - fixed + p.angular_velocity * f64::from(l);
        prop_assert!(shift.abs() < 1e-13 * fixed.abs().max(frozen.abs()).max(1.0), "{}", shift);
    }

    #[test]
    fn potentials_lift_landau_degeneracy(p in params(), f in frame()) {
        // ℓ = 0 and ℓ = 1 share (ω/2)(2n_r + 1) in the Landau limit.
        let e0 = allowed_frequencies_n1(&p, 0, f).unwrap().iter().map(|&w| energy_level(&p, 1, 0, w, f).unwrap()).collect::<Vec<_>>();
        let e1 = allowed_frequencies_n1(&p, 1, f).unwrap().iter().map(|&w| energy_level(&p, 1, 1, w, f).unwrap()).collect::<Vec<_>>();
        for a in &e0 {
            for b in &e1 {
                prop_assert!((a - b).abs() > 1e-6, "{} vs {}", a, b);
            }
        }
    }
}

#[test]
fn landau_levels_are_degenerate_in_l() {
    let p = SystemParams::default();
    for l in 0..4 {
        assert_eq!(
            energy_level(&p, 1, l, 2.0, Frame::Static).unwrap(),
            energy_level(&p, 1, 0, 2.0, Frame::Static).unwrap()
        );
    }
}
