//! Moving users with weights refreshed only every `μ` seconds.

use num_complex::Complex64;

use super::rng::Purpose;
use super::roc::{roc, target_grid, RocCurve, RocMeta, RocSource};
use super::{empirical_threshold, rates, realize, simulate, Noise, Samples, Variant};
use crate::detect::{DetectorKind, WeightScheme};
use crate::error::{domain, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityPlan {
    /// Weight refresh interval, s.
    pub mu: f64,
    /// Length of the simulated drive, s.
    pub horizon: f64,
    /// Spacing of sensing windows, s.
    pub detect_every: f64,
}

impl Default for MobilityPlan {
    fn default() -> Self {
        Self { mu: 1.0, horizon: 60.0, detect_every: 1.0 }
    }
}

fn micros(t: f64) -> u64 {
    (t * 1e6).round() as u64
}

impl MobilityPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return domain(format!("weight update interval μ must be positive, got {}", self.mu));
        }
        if !(self.detect_every > 0.0 && self.horizon >= self.detect_every && self.horizon.is_finite()) {
            return domain(format!(
                "need horizon ≥ detect_every > 0, got horizon {} and detect_every {}",
                self.horizon, self.detect_every
            ));
        }
        Ok(())
    }

    /// Sensing instants `n·detect_every` in `[0, horizon)`.
    pub fn instants(&self) -> Vec<f64> {
        let n = (self.horizon / self.detect_every - 1e-9).ceil().max(1.0) as usize;
        (0..n).map(|i| i as f64 * self.detect_every).collect()
    }

    /// Most recent weight update at or before `t`.
    pub fn last_update(&self, t: f64) -> f64 {
        let k = (t / self.mu + 1e-9).floor();
        (k * self.mu).min(t)
    }
}

/// Samples where trial `i` senses at instant `i mod N` with weights from the
/// last update before it.
pub fn mobility_samples(scenario: &Scenario, plan: &MobilityPlan, variants: &[Variant], trials: usize, seed: u64) -> Result<Vec<Samples>> {
    scenario.validate()?;
    plan.validate()?;
    let instants = plan.instants();
    let table: Vec<((Vec<Complex64>, u64), (Vec<Complex64>, u64))> = instants
        .iter()
        .map(|&t| {
            let ts = plan.last_update(t);
            Ok(((scenario.alphas_at(t)?, micros(t)), (scenario.alphas_at(ts)?, micros(ts))))
        })
        .collect::<Result<_>>()?;
    let noise = Noise { sigma_s2: scenario.radio.sigma_s2, sigma_n2: scenario.radio.sigma_n2, k: scenario.k() };
    simulate(noise, variants, trials, seed, |trial| {
        let ((now, t_us), (then, ts_us)) = &table[trial as usize % table.len()];
        realize(scenario, seed, trial, Purpose::Fading, (now, *t_us), (then, *ts_us))
    })
}

/// ROC under mobility, thresholds at empirical H0 quantiles of the target
/// false-alarm grid. A scenario with no moving user reduces to [`roc`].
pub fn mobility_roc(
    scenario: &Scenario,
    plan: &MobilityPlan,
    kind: DetectorKind,
    scheme: WeightScheme,
    n_points: usize,
    trials: usize,
    seed: u64,
) -> Result<RocCurve> {
    plan.validate()?;
    if scenario.is_static() {
        return roc(scenario, kind, scheme, n_points, trials, seed);
    }
    let targets = target_grid(n_points)?;
    let v = Variant::new(kind, scheme);
    let s = mobility_samples(scenario, plan, &[v], trials, seed)?.remove(0);
    let taus: Vec<f64> = targets.iter().map(|t| empirical_threshold(&s.h0, *t)).collect();
    let notes = vec![
        ("tau_grid".to_string(), "empirical".to_string()),
        ("mu".to_string(), plan.mu.to_string()),
        ("horizon".to_string(), plan.horizon.to_string()),
        ("detect_every".to_string(), plan.detect_every.to_string()),
    ];
    Ok(RocCurve {
        points: rates(&s, &taus),
        meta: RocMeta {
            digest: scenario.digest(),
            detector: kind,
            weights: scheme,
            trials,
            seed,
            source: RocSource::MonteCarlo,
            notes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_timing() {
        let p = MobilityPlan { mu: 10.0, horizon: 60.0, detect_every: 1.0 };
        let t = p.instants();
        assert_eq!(t.len(), 60);
        assert_eq!(t[59], 59.0);
        assert_eq!(p.last_update(29.0), 20.0);
        assert_eq!(p.last_update(30.0), 30.0);
        let fresh = MobilityPlan { mu: 1.0, ..p };
        assert!(t.iter().all(|x| fresh.last_update(*x) == *x));
        assert!(MobilityPlan { mu: 0.0, ..p }.validate().is_err());
        assert!(MobilityPlan { horizon: 0.5, ..p }.validate().is_err());
    }
}
