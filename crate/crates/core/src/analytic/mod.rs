//! Closed-form false-alarm and detection probabilities.

mod gamma_series;
mod threshold;
mod wed;
mod wevd;
mod wishart;

use num_complex::Complex64;

pub use gamma_series::{mosch_deltas, GammaMixture, SeriesControl};
pub use threshold::{invert_threshold, MAX_DOUBLINGS, PF_TOL};
pub use wed::{rho, rho_from_snr, wed_corr, wed_h0_mixture, wed_h1_scales, wed_pd, wed_pf};
pub use wevd::{wevd_h0_scales, wevd_h1_scales, wevd_pd, wevd_pf, WevdMode};
pub use wishart::{lambda_max_cdf, WishartSpec};

use crate::detect::DetectorKind;
use crate::error::{domain, Result};

/// Distribution of `K·Λ` under one hypothesis.
#[derive(Debug, Clone, PartialEq)]
enum Law {
    Gamma(GammaMixture),
    Wishart(WishartSpec),
}

impl Law {
    fn sf(&self, x: f64) -> Result<f64> {
        match self {
            Law::Gamma(g) => g.sf(x),
            Law::Wishart(w) => Ok(1.0 - w.cdf(x)?),
        }
    }
}

/// One link realization: the weights the detector applies and the amplitudes
/// that actually generate the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkCase {
    pub weights: Vec<f64>,
    pub alphas: Vec<Complex64>,
}

/// Analytic Pf/Pd of one detector, averaged over a set of link realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticDetector {
    kind: DetectorKind,
    k: usize,
    sigma_n2: f64,
    laws: Vec<(Law, Law)>,
}

impl AnalyticDetector {
    /// Precompute both hypotheses for every case. `mode` only affects WEVD.
    pub fn new(
        kind: DetectorKind,
        cases: &[LinkCase],
        sigma_s2: f64,
        sigma_n2: f64,
        k: usize,
        ctrl: &SeriesControl,
        mode: WevdMode,
    ) -> Result<Self> {
        if cases.is_empty() {
            return domain("at least one link case is required");
        }
        let mut laws = Vec::with_capacity(cases.len());
        for c in cases {
            let pair = match kind {
                DetectorKind::Wed => (
                    Law::Gamma(wed_h0_mixture(&c.weights, sigma_n2, k, ctrl)?),
                    Law::Gamma(GammaMixture::new(&wed_h1_scales(&c.weights, &c.alphas, sigma_s2, sigma_n2)?, k, ctrl)?),
                ),
                DetectorKind::Wevd => (
                    Law::Wishart(WishartSpec::new(&wevd_h0_scales(&c.weights, sigma_n2)?, k)?),
                    Law::Wishart(WishartSpec::new(&wevd_h1_scales(&c.weights, &c.alphas, sigma_s2, sigma_n2, mode)?, k)?),
                ),
            };
            laws.push(pair);
        }
        Ok(Self { kind, k, sigma_n2, laws })
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    fn average(&self, tau: f64, pick: impl Fn(&(Law, Law)) -> &Law) -> Result<f64> {
        if !(tau >= 0.0) {
            return domain(format!("threshold must be nonnegative, got {tau}"));
        }
        let x = self.k as f64 * tau;
        let mut s = 0.0;
        for l in &self.laws {
            s += pick(l).sf(x)?;
        }
        Ok((s / self.laws.len() as f64).clamp(0.0, 1.0))
    }

    pub fn pf(&self, tau: f64) -> Result<f64> {
        self.average(tau, |l| &l.0)
    }

    pub fn pd(&self, tau: f64) -> Result<f64> {
        self.average(tau, |l| &l.1)
    }

    /// Threshold giving false-alarm probability `target`.
    pub fn threshold_for(&self, target: f64) -> Result<f64> {
        // Σw = 1, so σn² is the H0 mean of either statistic's scale
        invert_threshold(target, self.sigma_n2, |t| self.pf(t))
    }
}
