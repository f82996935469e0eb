//! Link budget: per-user amplitude, SNR, fading and fusion weights.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::radiation::{RadioParams, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingModel {
    #[default]
    Deterministic,
    Rician,
}

/// Which amplitudes the fusion centre uses to form weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightSource {
    /// The realized amplitude including the fading draw.
    #[default]
    Realized,
    /// Only the deterministic (`h = 1`) part of the amplitude.
    Deterministic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub model: FadingModel,
    /// Linear Rician K-factor.
    pub rician_k: f64,
    pub weight_source: WeightSource,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self { model: FadingModel::Deterministic, rician_k: 10.0, weight_source: WeightSource::Realized }
    }
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rician_k >= 0.0) || self.rician_k.is_nan() {
            return domain(format!("Rician K-factor must be nonnegative, got {}", self.rician_k));
        }
        Ok(())
    }
}

/// Per-user link quantities at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkState {
    pub alpha: Vec<Complex64>,
    pub gamma: Vec<f64>,
    pub weight: Vec<f64>,
}

impl LinkState {
    /// Derive SNRs and weights from amplitudes.
    pub fn from_alphas(alpha: Vec<Complex64>, sigma_s2: f64, sigma_n2: f64) -> Result<Self> {
        let weight = weights(&alpha)?;
        let gamma = alpha.iter().map(|a| snr(*a, sigma_s2, sigma_n2)).collect();
        Ok(Self { alpha, gamma, weight })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// `sqrt(p·G·c²·|af·ef|² / (4π·fc·r)²)·h`.
pub fn path_amplitude(radio: &RadioParams, af: f64, ef: f64, r: f64, h: Complex64) -> Result<Complex64> {
    if r == 0.0 {
        return Err(Error::SingularRange);
    }
    if !(r > 0.0) {
        return domain(format!("range must be positive, got {r}"));
    }
    let mag = (radio.p * radio.gain).sqrt() * C * (af * ef).abs() / (4.0 * PI * radio.fc * r);
    Ok(h * mag)
}

/// `|α|²·σs²/σn²`.
pub fn snr(alpha: Complex64, sigma_s2: f64, sigma_n2: f64) -> f64 {
    alpha.norm_sqr() * sigma_s2 / sigma_n2
}

/// One quasi-static channel coefficient with `E|h|² = 1`.
pub fn draw_fading<R: Rng + ?Sized>(cfg: &FadingConfig, rng: &mut R) -> Result<Complex64> {
    cfg.validate()?;
    match cfg.model {
        FadingModel::Deterministic => Ok(Complex64::new(1.0, 0.0)),
        FadingModel::Rician => {
            let k = cfg.rician_k;
            if k.is_infinite() {
                return Ok(Complex64::new(1.0, 0.0));
            }
            let los = (k / (k + 1.0)).sqrt();
            let scat = (1.0 / (k + 1.0)).sqrt();
            Ok(Complex64::new(los, 0.0) + complex_normal(rng) * scat)
        }
    }
}

/// Circularly symmetric complex Gaussian with unit variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `w_m = |α_m|² / Σ|α_i|²`.
pub fn weights(alphas: &[Complex64]) -> Result<Vec<f64>> {
    let p: Vec<f64> = alphas.iter().map(|a| a.norm_sqr()).collect();
    normalize(&p)
}

/// Normalize nonnegative powers onto the simplex.
pub fn normalize(powers: &[f64]) -> Result<Vec<f64>> {
    if powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return domain("powers must be finite and nonnegative");
    }
    // scale by the max first so tiny amplitudes do not underflow in the sum
    let top = powers.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Err(Error::DegenerateScenario("no secondary user receives any signal".into()));
    }
    let scaled: Vec<f64> = powers.iter().map(|p| p / top).collect();
    let total: f64 = scaled.iter().sum();
    Ok(scaled.iter().map(|p| p / total).collect())
}

/// Equal weights `1/M`.
pub fn uniform(m: usize) -> Vec<f64> {
    vec![1.0 / m as f64; m]
}
