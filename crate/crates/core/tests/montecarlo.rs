use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wcss_core::detect::{row_energies, synth_block};
use wcss_core::montecarlo::{
    ci_radius, empirical_threshold, fixed_samples, mobility_roc, rates, roc, scenario_samples, static_rocs, target_grid,
};
use wcss_core::scenario::DEFAULT_SUS;
use wcss_core::{DetectorKind, FadingModel, Hypothesis, MobilityPlan, Point3, Scenario, Trajectory, Variant, WeightScheme};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn rician_scenario() -> Scenario {
    let mut s = Scenario::default().with_first_sus(4).unwrap();
    s.fading.model = FadingModel::Rician;
    s.fading.rician_k = 5.0;
    s
}

#[test]
fn samples_do_not_depend_on_worker_count() {
    let s = rician_scenario();
    let a = in_pool(1, || scenario_samples(&s, &Variant::ALL, 600, 9).unwrap());
    let b = in_pool(4, || scenario_samples(&s, &Variant::ALL, 600, 9).unwrap());
    assert_eq!(a, b);
    let c = scenario_samples(&s, &Variant::ALL, 600, 10).unwrap();
    assert_ne!(a, c);
}

#[test]
fn mobility_does_not_depend_on_worker_count() {
    let s = rician_scenario();
    let plan = MobilityPlan { mu: 10.0, ..MobilityPlan::default() };
    let a = in_pool(1, || mobility_roc(&s, &plan, DetectorKind::Wevd, WeightScheme::Paper, 11, 400, 3).unwrap());
    let b = in_pool(3, || mobility_roc(&s, &plan, DetectorKind::Wevd, WeightScheme::Paper, 11, 400, 3).unwrap());
    assert_eq!(a, b);
}

#[test]
fn static_mobility_is_plain_roc() {
    let mut s = Scenario::default().with_first_sus(3).unwrap();
    s.sus = s.sus.iter().map(|t| Trajectory::fixed(t.start())).collect();
    let plan = MobilityPlan { mu: 30.0, ..MobilityPlan::default() };
    let a = mobility_roc(&s, &plan, DetectorKind::Wed, WeightScheme::Paper, 5, 300, 4).unwrap();
    let b = roc(&s, DetectorKind::Wed, WeightScheme::Paper, 5, 300, 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn confidence_radius_shrinks() {
    let mut prev = f64::INFINITY;
    for n in [10, 100, 1000, 10_000, 100_000] {
        let r = ci_radius(0.3, n);
        assert!(r < prev);
        prev = r;
    }
    assert!((ci_radius(0.5, 10_000) - 0.0098).abs() < 1e-12);
    assert_eq!(ci_radius(0.0, 50), 0.0);
}

#[test]
fn h0_energy_moments() {
    let w = [0.5, 0.3, 0.2];
    let (n2, k, n) = (2.0, 8, 200_000);
    let s = fixed_samples(DetectorKind::Wed, &w, &[Complex64::new(0.0, 0.0); 3], 1.0, n2, k, n, 17).unwrap();
    let mean = s.h0.iter().sum::<f64>() / n as f64;
    let var = s.h0.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let exact_var = n2 * n2 * w.iter().map(|x| x * x).sum::<f64>() / k as f64;
    assert!((mean - n2).abs() < 4.0 * (exact_var / n as f64).sqrt(), "{mean}");
    assert!((var / exact_var - 1.0).abs() < 0.02, "{var} vs {exact_var}");
}

#[test]
fn h1_energy_correlation_at_unit_snr() {
    // γ_i = γ_j = 1 gives a correlation of 1/4 between per-sample energies
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 200_000;
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let blk = synth_block(Hypothesis::H1, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], 0.5, 0.5, 1, &mut rng).unwrap();
        let e = row_energies(&blk);
        a.push(e[0]);
        b.push(e[1]);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(&a), mean(&b));
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n as f64;
    let sa = (a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n as f64).sqrt();
    let sb = (b.iter().map(|x| (x - mb).powi(2)).sum::<f64>() / n as f64).sqrt();
    assert!((cov / (sa * sb) - 0.25).abs() < 0.01, "{}", cov / (sa * sb));
}

#[test]
fn empirical_thresholds_hit_targets() {
    let s = fixed_samples(DetectorKind::Wevd, &[0.6, 0.4], &[Complex64::new(0.3, 0.0); 2], 1.0, 1.0, 10, 5000, 2).unwrap();
    for t in target_grid(9).unwrap() {
        let r = rates(&s, &[empirical_threshold(&s.h0, t)]);
        assert!((r[0].pf - t).abs() <= 1.0 / 5000.0 + 1e-12, "{t} {}", r[0].pf);
    }
}

#[test]
fn overlay_shares_the_threshold_grid() {
    let s = Scenario::default().with_first_sus(2).unwrap();
    let out = static_rocs(&s, &[Variant::new(DetectorKind::Wed, WeightScheme::Paper)], 7, 2000, 5).unwrap();
    let (mc, an) = &out[0];
    let an = an.as_ref().expect("overlay");
    assert_eq!(mc.points.len(), 7);
    for (p, q) in mc.points.iter().zip(&an.points) {
        assert_eq!(p.tau, q.tau);
        assert!(p.pf_ci >= 0.0 && q.pf_ci == 0.0);
    }
    assert!(mc.points.windows(2).all(|w| w[0].tau >= w[1].tau));
    assert_eq!(DEFAULT_SUS.len(), 10);
    assert_eq!(s.positions_at(0.0).unwrap()[0], Point3::new(DEFAULT_SUS[0].0, DEFAULT_SUS[0].1, 0.0));
}
