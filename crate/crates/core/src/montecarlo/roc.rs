//! ROC assembly: threshold grids, Monte Carlo curves and analytic overlays.

use std::fmt;

use super::rng::Purpose;
use super::{empirical_threshold, fading_draws, rates, scenario_samples, Rates, Samples, Variant};
use crate::analytic::{AnalyticDetector, LinkCase, SeriesControl, WevdMode};
use crate::detect::{DetectorKind, WeightScheme};
use crate::error::{domain, Result};
use crate::link::{uniform, weights, FadingModel, WeightSource};
use crate::scenario::Scenario;

/// Fading realizations averaged by analytic curves under Rician fading.
pub const ANALYTIC_FADING_DRAWS: usize = 32;
const PF_LO: f64 = 0.01;
const PF_HI: f64 = 0.99;

pub type RocPoint = Rates;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RocSource {
    Analytic,
    MonteCarlo,
}

impl fmt::Display for RocSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RocSource::Analytic => "analytic",
            RocSource::MonteCarlo => "montecarlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocMeta {
    pub digest: String,
    pub detector: DetectorKind,
    pub weights: WeightScheme,
    pub trials: usize,
    pub seed: u64,
    pub source: RocSource,
    /// Further `key = value` facts, e.g. how the threshold grid was chosen.
    pub notes: Vec<(String, String)>,
}

/// Operating points ordered by descending threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub meta: RocMeta,
}

impl RocCurve {
    /// Pd linearly interpolated at false-alarm rate `pf`.
    pub fn pd_at_pf(&self, pf: f64) -> f64 {
        let p = &self.points;
        if let Some(i) = p.iter().position(|q| q.pf >= pf) {
            if i == 0 || p[i].pf == pf {
                return p[i].pd;
            }
            let (a, b) = (&p[i - 1], &p[i]);
            if b.pf == a.pf {
                return b.pd;
            }
            a.pd + (b.pd - a.pd) * (pf - a.pf) / (b.pf - a.pf)
        } else {
            p.last().map_or(f64::NAN, |q| q.pd)
        }
    }

    /// Point whose threshold was set for target index `i` of the grid.
    pub fn point(&self, i: usize) -> &RocPoint {
        &self.points[i]
    }
}

/// `n` false-alarm targets equispaced on `[0.01, 0.99]`, ascending.
pub fn target_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return domain(format!("an ROC needs at least two points, got {n}"));
    }
    Ok((0..n).map(|i| PF_LO + (PF_HI - PF_LO) * i as f64 / (n - 1) as f64).collect())
}

/// Analytic Pf/Pd model for the scenario at `t = 0`.
///
/// Deterministic channels give a single case. Under Rician fading the curves
/// are averaged over a fixed set of fading draws addressed by `seed`.
pub fn analytic_model(scenario: &Scenario, kind: DetectorKind, scheme: WeightScheme, seed: u64) -> Result<AnalyticDetector> {
    let alpha = scenario.alphas_at(0.0)?;
    let m = scenario.m();
    let mut cases = Vec::new();
    let draws = if scenario.fading.model == FadingModel::Deterministic { 1 } else { ANALYTIC_FADING_DRAWS };
    for d in 0..draws as u64 {
        let h = fading_draws(scenario, seed, d, Purpose::AnalyticFading, 0)?;
        let alphas: Vec<_> = alpha.iter().zip(&h).map(|(a, h)| a * h).collect();
        let w = match (scheme, scenario.fading.weight_source) {
            (WeightScheme::Uniform, _) => uniform(m),
            (WeightScheme::Paper, WeightSource::Realized) => weights(&alphas)?,
            (WeightScheme::Paper, WeightSource::Deterministic) => weights(&alpha)?,
        };
        cases.push(LinkCase { weights: w, alphas });
    }
    let r = &scenario.radio;
    AnalyticDetector::new(kind, &cases, r.sigma_s2, r.sigma_n2, r.k, &SeriesControl::default(), WevdMode::Eigen)
}

/// Thresholds for an ROC and how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGrid {
    /// Descending.
    pub taus: Vec<f64>,
    pub targets: Vec<f64>,
    pub analytic: Option<AnalyticDetector>,
    /// Why analytics were not used, when they were not.
    pub fallback: Option<String>,
}

/// Invert the analytic Pf at each target, or fall back to empirical H0
/// quantiles when the analytic model is unavailable.
pub fn tau_grid(scenario: &Scenario, kind: DetectorKind, scheme: WeightScheme, n_points: usize, seed: u64, h0: &[f64]) -> Result<TauGrid> {
    let targets = target_grid(n_points)?;
    let model = analytic_model(scenario, kind, scheme, seed)
        .and_then(|m| targets.iter().map(|t| m.threshold_for(*t)).collect::<Result<Vec<f64>>>().map(|taus| (m, taus)));
    match model {
        Ok((m, taus)) => Ok(TauGrid { taus, targets, analytic: Some(m), fallback: None }),
        Err(e) => {
            let taus = targets.iter().map(|t| empirical_threshold(h0, *t)).collect();
            Ok(TauGrid { taus, targets, analytic: None, fallback: Some(e.to_string()) })
        }
    }
}

fn meta(scenario: &Scenario, v: Variant, trials: usize, seed: u64, source: RocSource) -> RocMeta {
    RocMeta { digest: scenario.digest(), detector: v.kind, weights: v.scheme, trials, seed, source, notes: Vec::new() }
}

/// Analytic Pf/Pd at given thresholds.
pub fn analytic_roc(scenario: &Scenario, model: &AnalyticDetector, scheme: WeightScheme, taus: &[f64], seed: u64) -> Result<RocCurve> {
    let points = taus
        .iter()
        .map(|&tau| Ok(RocPoint { tau, pf: model.pf(tau)?, pf_ci: 0.0, pd: model.pd(tau)?, pd_ci: 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    let mut m = meta(scenario, Variant::new(model.kind(), scheme), 0, seed, RocSource::Analytic);
    if scenario.fading.model == FadingModel::Rician {
        m.notes.push(("fading_average".into(), ANALYTIC_FADING_DRAWS.to_string()));
    }
    if model.kind() == DetectorKind::Wevd {
        m.notes.push(("wevd_mode".into(), WevdMode::Eigen.name().into()));
    }
    Ok(RocCurve { points, meta: m })
}

fn mc_curve(scenario: &Scenario, v: Variant, samples: &Samples, grid: &TauGrid, seed: u64) -> RocCurve {
    let mut m = meta(scenario, v, samples.trials(), seed, RocSource::MonteCarlo);
    m.notes.push(("tau_grid".into(), if grid.analytic.is_some() { "analytic" } else { "empirical" }.into()));
    if let Some(why) = &grid.fallback {
        m.notes.push(("analytic_unavailable".into(), why.clone()));
    }
    RocCurve { points: rates(samples, &grid.taus), meta: m }
}

/// Monte Carlo ROCs for several variants from shared samples, each with its
/// analytic overlay when one could be computed.
pub fn static_rocs(
    scenario: &Scenario,
    variants: &[Variant],
    n_points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<(RocCurve, Option<RocCurve>)>> {
    target_grid(n_points)?;
    let all = scenario_samples(scenario, variants, trials, seed)?;
    variants
        .iter()
        .zip(&all)
        .map(|(v, s)| {
            let grid = tau_grid(scenario, v.kind, v.scheme, n_points, seed, &s.h0)?;
            let mut mc = mc_curve(scenario, *v, s, &grid, seed);
            let overlay = match &grid.analytic {
                Some(model) => match analytic_roc(scenario, model, v.scheme, &grid.taus, seed) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        mc.meta.notes.push(("overlay_unavailable".into(), e.to_string()));
                        None
                    }
                },
                None => None,
            };
            Ok((mc, overlay))
        })
        .collect()
}

/// Monte Carlo ROC of one detector variant.
pub fn roc(scenario: &Scenario, kind: DetectorKind, scheme: WeightScheme, n_points: usize, trials: usize, seed: u64) -> Result<RocCurve> {
    Ok(static_rocs(scenario, &[Variant::new(kind, scheme)], n_points, trials, seed)?.remove(0).0)
}
