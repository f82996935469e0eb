use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wcss_core::link::{draw_fading, normalize, path_amplitude, snr, uniform, weights};
use wcss_core::radiation::{db_to_linear, dbm_to_watts};
use wcss_core::{FadingConfig, FadingModel, LinkState, RadioParams};

#[test]
fn friis_amplitude_oracle() {
    let radio = RadioParams { p: 0.49887, gain: db_to_linear(5.0), ..RadioParams::default() };
    let a = path_amplitude(&radio, 64.0, 1.0, 84.8528, Complex64::new(1.0, 0.0)).unwrap();
    // mpmath, 40 digits
    assert!((a.norm() - 0.004_346_252_819_147_571).abs() < 1e-17);
    assert_eq!(path_amplitude(&radio, 0.0, 1.0, 10.0, Complex64::new(1.0, 0.0)).unwrap().norm(), 0.0);
    assert!(path_amplitude(&radio, 1.0, 1.0, 0.0, Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn default_radio_values() {
    let r = RadioParams::default();
    assert!((r.p - 0.498_884_487_460_012_2).abs() < 1e-15);
    assert!((r.sigma_n2 - dbm_to_watts(-60.0)).abs() < 1e-24);
    assert_eq!(r.k, 100);
    assert_eq!(r.fc, 5.2e9);
}

#[test]
fn inverse_square_law() {
    let r = RadioParams::default();
    let h = Complex64::new(1.0, 0.0);
    for range in [10.0, 84.85, 1234.5] {
        let g1 = snr(path_amplitude(&r, 7.0, 1.0, range, h).unwrap(), r.sigma_s2, r.sigma_n2);
        let g2 = snr(path_amplitude(&r, 7.0, 1.0, 2.0 * range, h).unwrap(), r.sigma_s2, r.sigma_n2);
        let drop = 10.0 * (g1 / g2).log10();
        assert!((drop - 20.0 * 2f64.log10()).abs() < 1e-9);
    }
}

#[test]
fn rician_power_is_unit() {
    let cfg = FadingConfig { model: FadingModel::Rician, rician_k: 3.0, ..FadingConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 200_000;
    let (mut p, mut mean) = (0.0, Complex64::new(0.0, 0.0));
    for _ in 0..n {
        let h = draw_fading(&cfg, &mut rng).unwrap();
        p += h.norm_sqr();
        mean += h;
    }
    assert!((p / n as f64 - 1.0).abs() < 0.01);
    assert!(((mean / n as f64).re - (0.75f64).sqrt()).abs() < 0.01);
    let det = FadingConfig { model: FadingModel::Deterministic, ..FadingConfig::default() };
    assert_eq!(draw_fading(&det, &mut rng).unwrap(), Complex64::new(1.0, 0.0));
}

#[test]
fn degenerate_weights_are_rejected() {
    assert!(weights(&[Complex64::new(0.0, 0.0); 3]).is_err());
    assert!(normalize(&[1.0, f64::NAN]).is_err());
    assert!(normalize(&[1.0, -1.0]).is_err());
}

fn amps() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((1e-8..1e3f64, -3.2..3.2f64), 1..12)
        .prop_map(|v| v.into_iter().map(|(r, p)| Complex64::from_polar(r, p)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weights_live_on_the_simplex(a in amps()) {
        let w = weights(&a).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn weights_are_scale_and_phase_invariant(a in amps(), s in 1e-6..1e6f64, ph in -3.0..3.0f64) {
        let w = weights(&a).unwrap();
        let scaled: Vec<Complex64> = a.iter().map(|x| x * Complex64::from_polar(s, ph)).collect();
        let v = weights(&scaled).unwrap();
        for (x, y) in w.iter().zip(&v) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn link_state_snr_is_exact(a in amps(), s2 in 0.1..10.0f64, n2 in 1e-12..1e-3f64) {
        let st = LinkState::from_alphas(a.clone(), s2, n2).unwrap();
        for (g, x) in st.gamma.iter().zip(&a) {
            prop_assert_eq!(*g, x.norm_sqr() * s2 / n2);
        }
        prop_assert_eq!(uniform(st.len()).len(), a.len());
    }
}
