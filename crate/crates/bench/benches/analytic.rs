use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wcss_bench::{link, scenario};
use wcss_core::analytic::{lambda_max_cdf, wed_pd, wed_pf, SeriesControl};
use wcss_core::montecarlo::analytic_model;
use wcss_core::{DetectorKind, WeightScheme};

fn series(c: &mut Criterion) {
    let ctrl = SeriesControl::default();
    let mut g = c.benchmark_group("wed");
    for m in [5, 10] {
        let (w, a) = link(m, WeightScheme::Paper);
        let r = scenario(m).radio;
        g.bench_with_input(BenchmarkId::new("pf", m), &w, |b, w| b.iter(|| wed_pf(black_box(1.2e-9), w, r.sigma_n2, r.k, &ctrl)));
        g.bench_with_input(BenchmarkId::new("pd", m), &w, |b, w| {
            b.iter(|| wed_pd(black_box(1.2e-9), w, &a, r.sigma_s2, r.sigma_n2, r.k, &ctrl))
        });
    }
    g.finish();
}

fn wishart(c: &mut Criterion) {
    let mut g = c.benchmark_group("wishart_cdf");
    let spread = [0.3, 0.25, 0.2, 0.1, 0.08, 0.05];
    g.bench_function("spread_m6_k50", |b| b.iter(|| lambda_max_cdf(black_box(14.0), &spread, 50)));
    let equal = [1.0; 10];
    g.bench_function("equal_m10_k100", |b| b.iter(|| lambda_max_cdf(black_box(170.0), &equal, 100)));
    let mut spike = [1.0; 10];
    spike[0] = 3.0;
    g.bench_function("spike_m10_k100", |b| b.iter(|| lambda_max_cdf(black_box(340.0), &spike, 100)));
    g.finish();
}

fn threshold(c: &mut Criterion) {
    let mut g = c.benchmark_group("threshold_pf_0.1");
    g.sample_size(10);
    let s = scenario(10);
    for kind in [DetectorKind::Wed, DetectorKind::Wevd] {
        let model = analytic_model(&s, kind, WeightScheme::Paper, s.seed).unwrap();
        g.bench_function(kind.name(), |b| b.iter(|| model.threshold_for(black_box(0.1))));
    }
    g.finish();
}

criterion_group!(benches, series, wishart, threshold);
criterion_main!(benches);
