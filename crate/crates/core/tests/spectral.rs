mod common;

use common::{grid, max_abs, max_diff, random_field};
use ksbesov_core::spectral::{self, cumulative_integral};
use ksbesov_core::{Error, Field64};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn real_field_spectrum_is_exactly_hermitian() {
    for n in [8, 16, 48] {
        let g = grid(7.0, n);
        let s = random_field(&g, n / 3, 0.4, 9).spectrum();
        assert_eq!(s.mode(0).im, 0.0);
        for m in 1..n as i64 / 2 {
            assert_eq!(s.mode(-m), s.mode(m).conj());
        }
    }
}

#[test]
fn constant_field_has_only_the_mean_mode() {
    let g = grid(3.0, 16);
    let s = Field64::constant(&g, 1.0).spectrum();
    assert!((s.mode(0).re - 1.0).abs() < 1e-15);
    for m in 1..8 {
        assert!(s.mode(m).norm() < 1e-15);
        assert!(s.mode(-m).norm() < 1e-15);
    }
}

#[test]
fn cosine_splits_into_two_halves() {
    let g = grid(5.0, 32);
    let u = Field64::from_fn(&g, |x| (2.0 * PI * x / 5.0).cos());
    let s = spectral::fft_forward(&u);
    assert!((s.mode(1).re - 0.5).abs() < 1e-14);
    assert!((s.mode(-1).re - 0.5).abs() < 1e-14);
    let others: f64 = (2..16).map(|m| s.mode(m).norm() + s.mode(-m).norm()).sum();
    assert!(others < 1e-13 && s.mode(0).norm() < 1e-15);
}

#[test]
fn round_trip_is_identity() {
    let g = grid(7.0, 128);
    let u = random_field(&g, 40, 0.3, 1);
    let back = spectral::fft_inverse(&spectral::fft_forward(&u));
    assert!(max_diff(u.samples(), back.samples()) <= 1e-12 * max_abs(u.samples()));
}

#[test]
fn real_fields_are_hermitian() {
    let g = grid(2.0, 64);
    let s = random_field(&g, 20, 0.0, 2).spectrum();
    for m in 1..32 {
        assert!((s.mode(-m) - s.mode(m).conj()).norm() < 1e-14);
    }
}

#[test]
fn derivative_eigenfunctions() {
    let l = 3.0;
    let k = 2.0 * PI / l;
    let g = grid(l, 64);
    let d1 = Field64::from_fn(&g, |x| (k * x).sin()).derivative(1);
    let want = Field64::from_fn(&g, |x| k * (k * x).cos());
    assert!(max_diff(d1.samples(), want.samples()) < 1e-12);

    let d4 = Field64::from_fn(&g, |x| (2.0 * k * x).sin()).derivative(4);
    let want = Field64::from_fn(&g, |x| (2.0 * k).powi(4) * (2.0 * k * x).sin());
    assert!(max_diff(d4.samples(), want.samples()) < 1e-9 * (2.0 * k).powi(4));

    for m in 1..=8 {
        assert!(max_abs(Field64::constant(&g, 2.5).derivative(m).samples()) < 1e-12);
    }
}

#[test]
fn halfwave_eigenfunctions() {
    let l = 4.0;
    let k = 2.0 * PI / l;
    let g = grid(l, 64);
    let h1 = Field64::from_fn(&g, |x| (k * x).cos()).halfwave(1.0).unwrap();
    let want = Field64::from_fn(&g, |x| k * (k * x).cos());
    assert!(max_diff(h1.samples(), want.samples()) < 1e-13);

    let h2 = Field64::from_fn(&g, |x| (2.0 * k * x).sin()).halfwave(2.0).unwrap();
    let want = Field64::from_fn(&g, |x| (2.0 * k).powi(2) * (2.0 * k * x).sin());
    assert!(max_diff(h2.samples(), want.samples()) < 1e-12);
}

#[test]
fn inverse_halfwave_of_second_derivative() {
    // |∂x|^{-1} ∂x² sin(kx) = -k sin(kx): the symbol is -ξ²/|ξ| = -|ξ|.
    let l = 6.0;
    let k = 2.0 * PI / l;
    let g = grid(l, 32);
    let u = Field64::from_fn(&g, |x| (k * x).sin());
    let got = u.derivative(2).halfwave(-1.0).unwrap();
    let want = Field64::from_fn(&g, |x| -k * (k * x).sin());
    assert!(max_diff(got.samples(), want.samples()) < 1e-13);
}

#[test]
fn negative_halfwave_rejects_the_mean() {
    let g = grid(1.0, 16);
    let err = Field64::constant(&g, 1.0).halfwave(-0.5).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("undefined on the mean")));
    assert!(Field64::constant(&g, 1.0).halfwave(-1.5).is_err());
}

#[test]
fn finite_difference_closed_forms() {
    let l = 5.0;
    let k = 2.0 * PI / l;
    let g = grid(l, 64);
    let u = random_field(&g, 20, 0.7, 3);
    assert_eq!(max_abs(u.finite_diff(l).samples()), 0.0);

    let s = Field64::from_fn(&g, |x| (k * x).sin());
    for h in [0.1, 0.37, 2.2, -1.3] {
        let got = s.finite_diff(h);
        let want = Field64::from_fn(&g, |x| 2.0 * (k * h / 2.0).sin() * (k * (x + h / 2.0)).cos());
        assert!(max_diff(got.samples(), want.samples()) < 1e-13);
    }
}

#[test]
fn fractional_shift_matches_dense_resampling() {
    // Shifting by 0.3 dx lands on a point of a 10x finer grid offset by 3 cells.
    let g = grid(2.0, 64);
    let u = random_field(&g, 25, 0.1, 4);
    let h = 0.3 * g.dx();
    let shifted = u.shift(h);
    let fine = u.resample(640).unwrap();
    let want: Vec<f64> = (0..64).map(|j| fine.samples()[(10 * j + 3) % 640]).collect();
    assert!(max_diff(shifted.samples(), &want) < 1e-12);
}

#[test]
fn quadrature_closed_forms() {
    let l = 3.5;
    let k = 2.0 * PI / l;
    let g = grid(l, 32);
    let c = Field64::constant(&g, 1.5);
    assert!((spectral::integrate_x(&c) - 1.5 * l).abs() < 1e-13);
    assert!((spectral::mean(&c) - 1.5).abs() < 1e-15);
    assert!(spectral::integrate_x(&Field64::from_fn(&g, |x| (k * x).sin())).abs() < 1e-14);
    let cos2 = Field64::from_fn(&g, |x| (k * x).cos().powi(2));
    assert!((spectral::integrate_x(&cos2) - l / 2.0).abs() < 1e-14);
    let z = spectral::project_zero_mean(&random_field(&g, 10, 2.0, 5));
    assert!(z.mean().abs() < 1e-15);
}

#[test]
fn cumulative_integral_of_trig_polynomial() {
    let l = 4.0;
    let k = 2.0 * PI / l;
    let g = grid(l, 64);
    let u = Field64::from_fn(&g, |x| 0.5 + (k * x).cos() + 3.0 * (2.0 * k * x).sin());
    let got = cumulative_integral(&u);
    let want = Field64::from_fn(&g, |x| {
        0.5 * x + (k * x).sin() / k + 3.0 * (1.0 - (2.0 * k * x).cos()) / (2.0 * k)
    });
    assert!(max_diff(got.samples(), want.samples()) < 1e-13);
}

#[test]
fn resample_keeps_collocation_values() {
    let g = grid(1.0, 16);
    // Includes an explicit Nyquist component.
    let u = Field64::from_fn(&g, |x| (2.0 * PI * 8.0 * x).cos() + (2.0 * PI * 3.0 * x).sin());
    let fine = u.resample(64).unwrap();
    let picked: Vec<f64> = (0..16).map(|j| fine.samples()[4 * j]).collect();
    assert!(max_diff(u.samples(), &picked) < 1e-13);
}

#[test]
fn grid_mismatch_is_structural() {
    let a = random_field(&grid(1.0, 16), 3, 0.0, 6);
    let b = random_field(&grid(1.0, 32), 3, 0.0, 6);
    assert!(matches!(a.add(&b), Err(Error::Structure(_))));
    assert!(Field64::new(grid(1.0, 16), vec![0.0; 15]).is_err());
    assert!(matches!(
        Field64::new(grid(1.0, 8), vec![0.0, 1.0, f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0]),
        Err(Error::Domain(_))
    ));
}

#[test]
fn single_precision_round_trip() {
    let g = ksbesov_core::Grid32::new(2.0, 64).unwrap();
    let u = ksbesov_core::Field32::from_fn(&g, |x| (std::f32::consts::PI * x).sin() + 0.25);
    let back = u.spectrum().to_real();
    let err = u
        .samples()
        .iter()
        .zip(back.samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f32, f32::max);
    assert!(err < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval(seed in any::<u64>(), kmax in 1usize..30) {
        let g = grid(3.0, 64);
        let u = random_field(&g, kmax, 0.4, seed);
        let lhs = u.energy() / g.length();
        let rhs = u.spectrum().power();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn shifts_compose(seed in any::<u64>(), a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let g = grid(3.0, 64);
        let u = random_field(&g, 25, 0.0, seed);
        let two = u.shift(a).shift(b);
        let one = u.shift(a + b);
        prop_assert!(max_diff(two.samples(), one.samples()) < 1e-12 * max_abs(u.samples()).max(1.0));
    }

    #[test]
    fn finite_difference_commutes_with_derivative(seed in any::<u64>(), h in -5.0f64..5.0) {
        let g = grid(3.0, 64);
        let u = random_field(&g, 25, 0.2, seed);
        let a = u.derivative(1).finite_diff(h);
        let b = u.finite_diff(h).derivative(1);
        prop_assert!(max_diff(a.samples(), b.samples()) < 1e-12 * max_abs(a.samples()).max(1.0) * 10.0);
    }

    #[test]
    fn finite_difference_integrates_to_zero(seed in any::<u64>(), h in -5.0f64..5.0) {
        let g = grid(3.0, 64);
        let u = random_field(&g, 25, 1.0, seed);
        prop_assert!(u.finite_diff(h).integrate().abs() < 1e-12);
    }

    #[test]
    fn halfwave_powers_add(seed in any::<u64>(), a in -1.0f64..1.5, b in 0.0f64..1.5) {
        let g = grid(3.0, 64);
        let u = random_field(&g, 20, 0.0, seed);
        let two = u.halfwave(b).unwrap().halfwave(a).unwrap();
        let one = u.halfwave(a + b).unwrap();
        let scale = max_abs(one.samples()).max(1.0);
        prop_assert!(max_diff(two.samples(), one.samples()) < 1e-12 * scale);
    }

    #[test]
    fn period_shift_is_invisible(seed in any::<u64>(), h in 0.0f64..3.0) {
        let g = grid(3.0, 64);
        let u = random_field(&g, 20, 0.0, seed);
        let a = u.finite_diff(h);
        let b = u.finite_diff(h + 3.0);
        prop_assert!(max_diff(a.samples(), b.samples()) < 1e-12);
    }
}
