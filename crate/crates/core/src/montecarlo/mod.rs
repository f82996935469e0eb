//! Seeded Monte Carlo estimation of detector operating points.
//!
//! Every trial draws its fading and noise from substreams addressed by the
//! trial index, and trials are collected in index order, so results are
//! bit-identical for any number of worker threads.

mod mobility;
mod roc;
pub mod rng;

use num_complex::Complex64;
use rayon::prelude::*;

pub use mobility::{mobility_roc, mobility_samples, MobilityPlan};
pub use roc::{
    analytic_model, analytic_roc, roc, static_rocs, target_grid, tau_grid, RocCurve, RocMeta, RocPoint, RocSource, TauGrid,
    ANALYTIC_FADING_DRAWS,
};

use crate::detect::{statistic, synth_block, DetectorKind, Hypothesis, WeightScheme};
use crate::error::{domain, Result};
use crate::link::{draw_fading, uniform, weights, FadingModel, WeightSource};
use crate::scenario::Scenario;
use rng::{substream, Purpose};

/// A detector and the weighting it uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub kind: DetectorKind,
    pub scheme: WeightScheme,
}

impl Variant {
    pub const fn new(kind: DetectorKind, scheme: WeightScheme) -> Self {
        Self { kind, scheme }
    }

    /// The four combinations, weighted first.
    pub const ALL: [Variant; 4] = [
        Variant::new(DetectorKind::Wed, WeightScheme::Paper),
        Variant::new(DetectorKind::Wevd, WeightScheme::Paper),
        Variant::new(DetectorKind::Wed, WeightScheme::Uniform),
        Variant::new(DetectorKind::Wevd, WeightScheme::Uniform),
    ];
}

/// Per-trial statistics under each hypothesis, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub h0: Vec<f64>,
    pub h1: Vec<f64>,
}

impl Samples {
    pub fn trials(&self) -> usize {
        self.h0.len()
    }
}

/// What the fusion centre sees in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLink {
    /// Amplitudes generating the H1 samples.
    pub alphas: Vec<Complex64>,
    /// Weights applied under [`WeightScheme::Paper`].
    pub weights: Vec<f64>,
}

/// Sample-generation constants shared by all trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    pub sigma_s2: f64,
    pub sigma_n2: f64,
    pub k: usize,
}

/// Run `trials` trials, each drawing one H0 and one H1 block and evaluating
/// every variant on both.
pub fn simulate<F>(noise: Noise, variants: &[Variant], trials: usize, seed: u64, link: F) -> Result<Vec<Samples>>
where
    F: Fn(u64) -> Result<TrialLink> + Sync,
{
    if trials == 0 {
        return domain("Monte Carlo needs at least one trial");
    }
    if variants.is_empty() {
        return domain("no detector variants requested");
    }
    let per_trial: Vec<Vec<(f64, f64)>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let l = link(t)?;
            let m = l.alphas.len();
            let flat = uniform(m);
            let mut r0 = substream(seed, t, Purpose::Noise0, 0);
            let mut r1 = substream(seed, t, Purpose::Noise1, 0);
            let b0 = synth_block(Hypothesis::H0, &l.alphas, noise.sigma_s2, noise.sigma_n2, noise.k, &mut r0)?;
            let b1 = synth_block(Hypothesis::H1, &l.alphas, noise.sigma_s2, noise.sigma_n2, noise.k, &mut r1)?;
            variants
                .iter()
                .map(|v| {
                    let w = match v.scheme {
                        WeightScheme::Paper => &l.weights,
                        WeightScheme::Uniform => &flat,
                    };
                    Ok((statistic(v.kind, &b0, w)?, statistic(v.kind, &b1, w)?))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..variants.len())
        .map(|i| Samples { h0: per_trial.iter().map(|p| p[i].0).collect(), h1: per_trial.iter().map(|p| p[i].1).collect() })
        .collect())
}

/// Fading coefficients of every user for `trial` at time key `t_us`.
pub(crate) fn fading_draws(scenario: &Scenario, seed: u64, trial: u64, purpose: Purpose, t_us: u64) -> Result<Vec<Complex64>> {
    if scenario.fading.model == FadingModel::Deterministic {
        return Ok(vec![Complex64::new(1.0, 0.0); scenario.m()]);
    }
    let mut r = substream(seed, trial, purpose, t_us);
    (0..scenario.m()).map(|_| draw_fading(&scenario.fading, &mut r)).collect()
}

/// Link seen at one instant: true amplitudes from `alpha_now` with fading
/// keyed at `t_us`, and paper weights from `alpha_then` keyed at `then_us`.
/// Equal time keys must come with equal amplitudes.
pub(crate) fn realize(
    scenario: &Scenario,
    seed: u64,
    trial: u64,
    purpose: Purpose,
    (alpha_now, t_us): (&[Complex64], u64),
    (alpha_then, then_us): (&[Complex64], u64),
) -> Result<TrialLink> {
    let h_now = fading_draws(scenario, seed, trial, purpose, t_us)?;
    let alphas: Vec<Complex64> = alpha_now.iter().zip(&h_now).map(|(a, h)| a * h).collect();
    let w = match scenario.fading.weight_source {
        WeightSource::Deterministic => weights(alpha_then)?,
        WeightSource::Realized if then_us == t_us => weights(&alphas)?,
        WeightSource::Realized => {
            let h_then = fading_draws(scenario, seed, trial, purpose, then_us)?;
            let stale: Vec<Complex64> = alpha_then.iter().zip(&h_then).map(|(a, h)| a * h).collect();
            weights(&stale)?
        }
    };
    Ok(TrialLink { alphas, weights: w })
}

/// Samples for the scenario frozen at `t = 0`.
pub fn scenario_samples(scenario: &Scenario, variants: &[Variant], trials: usize, seed: u64) -> Result<Vec<Samples>> {
    scenario.validate()?;
    let alpha = scenario.alphas_at(0.0)?;
    let noise = Noise { sigma_s2: scenario.radio.sigma_s2, sigma_n2: scenario.radio.sigma_n2, k: scenario.k() };
    simulate(noise, variants, trials, seed, |t| realize(scenario, seed, t, Purpose::Fading, (&alpha, 0), (&alpha, 0)))
}

/// Samples for fixed amplitudes and weights, with no fading.
#[allow(clippy::too_many_arguments)]
pub fn fixed_samples(
    kind: DetectorKind,
    w: &[f64],
    alphas: &[Complex64],
    sigma_s2: f64,
    sigma_n2: f64,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Samples> {
    let link = TrialLink { alphas: alphas.to_vec(), weights: w.to_vec() };
    let noise = Noise { sigma_s2, sigma_n2, k };
    let v = [Variant::new(kind, WeightScheme::Paper)];
    Ok(simulate(noise, &v, trials, seed, |_| Ok(link.clone()))?.remove(0))
}

/// Empirical exceedance rates with 95% normal-approximation radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub tau: f64,
    pub pf: f64,
    pub pf_ci: f64,
    pub pd: f64,
    pub pd_ci: f64,
}

/// `1.96·sqrt(p(1-p)/n)`.
pub fn ci_radius(p: f64, n: usize) -> f64 {
    1.96 * (p * (1.0 - p) / n as f64).sqrt()
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Fraction of `sorted` strictly above `tau`.
fn exceed(sorted: &[f64], tau: f64) -> f64 {
    let at_or_below = sorted.partition_point(|x| *x <= tau);
    (sorted.len() - at_or_below) as f64 / sorted.len() as f64
}

/// Threshold every τ against the same samples.
pub fn rates(samples: &Samples, taus: &[f64]) -> Vec<Rates> {
    let n = samples.trials();
    let s0 = sorted(&samples.h0);
    let s1 = sorted(&samples.h1);
    taus.iter()
        .map(|&tau| {
            let pf = exceed(&s0, tau);
            let pd = exceed(&s1, tau);
            Rates { tau, pf, pf_ci: ci_radius(pf, n), pd, pd_ci: ci_radius(pd, n) }
        })
        .collect()
}

/// Threshold at which the exceedance fraction of `h0` is as close as the
/// sample allows to `target`.
pub fn empirical_threshold(h0: &[f64], target: f64) -> f64 {
    let s = sorted(h0);
    let n = s.len();
    let above = ((target * n as f64).round() as usize).clamp(1, n);
    if above == n {
        return 0.0;
    }
    s[n - above - 1]
}

/// Monte Carlo Pf/Pd of the scenario at `t = 0` for each threshold.
pub fn estimate_rates(
    scenario: &Scenario,
    kind: DetectorKind,
    scheme: WeightScheme,
    taus: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<Rates>> {
    if taus.iter().any(|t| !(*t >= 0.0)) {
        return domain("thresholds must be nonnegative");
    }
    let s = scenario_samples(scenario, &[Variant::new(kind, scheme)], trials, seed)?;
    Ok(rates(&s[0], taus))
}
