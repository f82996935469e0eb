use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wcss_core::detect::{decide, statistic, synth_block, wed_statistic, weighted_gram, wevd_statistic};
use wcss_core::linalg::determinant;
use wcss_core::{DetectorKind, Hypothesis, SampleBlock};

fn block() -> impl Strategy<Value = (SampleBlock, Vec<f64>)> {
    (1usize..6, 1usize..12).prop_flat_map(|(m, k)| {
        (
            prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), m * k),
            prop::collection::vec(0.01..1.0f64, m),
        )
            .prop_map(move |(d, w)| {
                let data = d.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                let s: f64 = w.iter().sum();
                (SampleBlock::new(m, k, data, Hypothesis::H0).unwrap(), w.iter().map(|x| x / s).collect())
            })
    })
}

/// `[[Re, -Im], [Im, Re]] - λI` for a Hermitian matrix, row-major.
fn realified_shift(g: &wcss_core::linalg::CMatrix, lambda: f64) -> Vec<f64> {
    let m = g.dim();
    let n = 2 * m;
    let mut r = vec![0.0; n * n];
    for i in 0..m {
        for j in 0..m {
            let z = g[(i, j)];
            r[i * n + j] = z.re;
            r[i * n + j + m] = -z.im;
            r[(i + m) * n + j] = z.im;
            r[(i + m) * n + j + m] = z.re;
        }
    }
    for i in 0..n {
        r[i * n + i] -= lambda;
    }
    r
}

#[test]
fn single_user_statistics_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [1, 4, 100] {
        for h in [Hypothesis::H0, Hypothesis::H1] {
            let b = synth_block(h, &[Complex64::new(0.7, -0.2)], 1.0, 0.5, k, &mut rng).unwrap();
            assert_eq!(wevd_statistic(&b, &[1.0]).unwrap(), wed_statistic(&b, &[1.0]).unwrap());
        }
    }
}

#[test]
fn two_by_two_closed_form() {
    let data = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3), Complex64::new(0.2, -1.0), Complex64::new(2.0, 0.1)];
    let b = SampleBlock::new(2, 2, data, Hypothesis::H0).unwrap();
    let w = [0.3, 0.7];
    let g = weighted_gram(&b, &w).unwrap();
    let (a, d, off) = (g[(0, 0)].re, g[(1, 1)].re, g[(0, 1)].norm());
    let exact = 0.5 * (a + d) + (0.25 * (a - d) * (a - d) + off * off).sqrt();
    assert!((wevd_statistic(&b, &w).unwrap() - exact).abs() < 1e-13 * exact);
}

#[test]
fn strict_decision_rule() {
    assert!(!decide(1.0, 1.0));
    assert!(decide(1.0 + f64::EPSILON, 1.0));
}

#[test]
fn h1_rows_share_the_signal() {
    // with unit amplitudes and vanishing noise the rows are identical
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = synth_block(Hypothesis::H1, &[Complex64::new(1.0, 0.0); 3], 1.0, 1e-30, 50, &mut rng).unwrap();
    for q in 0..50 {
        assert!((b.row(0)[q] - b.row(2)[q]).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn row_phases_do_not_matter((b, w) in block(), phases in prop::collection::vec(-3.2..3.2f64, 6)) {
        let (m, k) = (b.m(), b.k());
        let mut data = b.data().to_vec();
        for i in 0..m {
            let r = Complex64::from_polar(1.0, phases[i]);
            data[i * k..(i + 1) * k].iter_mut().for_each(|v| *v *= r);
        }
        let rotated = SampleBlock::new(m, k, data, Hypothesis::H0).unwrap();
        for kind in [DetectorKind::Wed, DetectorKind::Wevd] {
            let a = statistic(kind, &b, &w).unwrap();
            let c = statistic(kind, &rotated, &w).unwrap();
            prop_assert!((a - c).abs() < 1e-10 * (1.0 + a), "{} {} {}", kind, a, c);
        }
    }

    #[test]
    fn user_order_does_not_matter((b, w) in block(), shift in 0usize..6) {
        let (m, k) = (b.m(), b.k());
        let perm: Vec<usize> = (0..m).map(|i| (i + shift) % m).collect();
        let data: Vec<Complex64> = perm.iter().flat_map(|&p| b.row(p).to_vec()).collect();
        let wp: Vec<f64> = perm.iter().map(|&p| w[p]).collect();
        let permuted = SampleBlock::new(m, k, data, Hypothesis::H0).unwrap();
        for kind in [DetectorKind::Wed, DetectorKind::Wevd] {
            let a = statistic(kind, &b, &w).unwrap();
            let c = statistic(kind, &permuted, &wp).unwrap();
            prop_assert!((a - c).abs() < 1e-10 * (1.0 + a));
        }
    }

    #[test]
    fn largest_eigenvalue_is_a_root((b, w) in block()) {
        let g = weighted_gram(&b, &w).unwrap();
        let lam = wevd_statistic(&b, &w).unwrap();
        let m = g.dim();
        let diag_max = (0..m).map(|i| g[(i, i)].re).fold(0.0, f64::max);
        let trace: f64 = (0..m).map(|i| g[(i, i)].re).sum();
        prop_assert!(lam >= diag_max * (1.0 - 1e-12));
        prop_assert!(lam <= trace * (1.0 + 1e-12));
        // det(G - λI) vanishes relative to the scale of the matrix
        let scale = trace.max(1e-300);
        let d = determinant(2 * m, &realified_shift(&g, lam)).unwrap();
        prop_assert!(d.abs() <= 1e-8 * scale.powi(2 * m as i32), "{} at scale {}", d, scale);
        // nothing above λ: the realified shift is negative semidefinite
        let above = determinant(2 * m, &realified_shift(&g, lam * (1.0 + 1e-6) + 1e-12)).unwrap();
        prop_assert!(above >= 0.0);
    }

    #[test]
    fn energy_is_weighted_mean((b, w) in block()) {
        let k = b.k() as f64;
        let direct: f64 = (0..b.m()).map(|i| w[i] * b.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>()).sum::<f64>() / k;
        prop_assert!((wed_statistic(&b, &w).unwrap() - direct).abs() < 1e-12 * (1.0 + direct));
    }
}
