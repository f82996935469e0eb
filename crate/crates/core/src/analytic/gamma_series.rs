//! Sums of independent gamma variables with a common integer shape and
//! unequal scales, expanded as a single-gamma mixture.

use crate::error::{domain, Error, Result};
use crate::special::{ln_poisson_term, reg_gamma_pair};

/// Truncation policy for every infinite series in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Bound on the mixture mass left out of the truncated series.
    pub tail_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { tail_tol: 1e-10, max_terms: 20_000 }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return domain(format!("tail tolerance must lie in (0, 1), got {}", self.tail_tol));
        }
        if self.max_terms == 0 {
            return domain("series term cap must be at least 1");
        }
        Ok(())
    }
}

/// The raw recursion `δ_0 = 1`, `δ_{j+1} = K/(j+1)·Σ_i S_i·δ_{j+1-i}` with
/// power sums `S_i = Σ_q ratio_q^i`. Returns `δ_0..=δ_J`.
///
/// Unscaled, so for widely spread scales the values overflow; [`GammaMixture`]
/// runs the same recursion in rescaled form.
pub fn mosch_deltas(shape_k: usize, ratios: &[f64], j: usize) -> Result<Vec<f64>> {
    for &r in ratios {
        if !(0.0..1.0).contains(&r) {
            return domain(format!("scale ratio {r} outside [0, 1): the base scale is not the minimum"));
        }
    }
    let kf = shape_k as f64;
    let mut powers: Vec<f64> = ratios.to_vec();
    let mut sums = Vec::with_capacity(j);
    let mut delta = Vec::with_capacity(j + 1);
    delta.push(1.0);
    for n in 0..j {
        sums.push(powers.iter().sum::<f64>());
        powers.iter_mut().zip(ratios).for_each(|(p, r)| *p *= r);
        let acc: f64 = (1..=n + 1).map(|i| sums[i - 1] * delta[n + 1 - i]).sum();
        delta.push(kf / (n + 1) as f64 * acc);
    }
    Ok(delta)
}

const RESCALE_AT: f64 = 1e250;
const INNER_CUTOFF: f64 = 1e-25;
const REANCHOR_EVERY: usize = 256;

/// `Σ_m Gamma(K, β_m)` as `Σ_j p_j·Gamma(K·M + j, β_min)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMixture {
    base_scale: f64,
    shape_base: f64,
    /// `ln Π_m (β_min/β_m)^K`.
    ln_prefactor: f64,
    /// Mixture probabilities `p_j = prefactor·δ_j`.
    probs: Vec<f64>,
    residual: f64,
}

impl GammaMixture {
    /// Expand `Σ_m Gamma(shape_k, scale_m)`. Zero scales are dropped (they
    /// contribute a point mass at zero); at least one must be positive.
    pub fn new(scales: &[f64], shape_k: usize, ctrl: &SeriesControl) -> Result<Self> {
        ctrl.validate()?;
        if shape_k == 0 {
            return domain("gamma shape K must be at least 1");
        }
        if scales.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return domain("gamma scales must be finite and nonnegative");
        }
        let live: Vec<f64> = scales.iter().copied().filter(|s| *s > 0.0).collect();
        if live.is_empty() {
            return Err(Error::DegenerateScenario("all gamma scales are zero".into()));
        }
        let base = live.iter().copied().fold(f64::INFINITY, f64::min);
        let kf = shape_k as f64;
        let ratios: Vec<f64> = live.iter().map(|s| 1.0 - base / s).filter(|r| *r > 0.0).collect();
        let ln_prefactor = kf * live.iter().map(|s| (base / s).ln()).sum::<f64>();
        let shape_base = kf * live.len() as f64;
        let mut mix = Self { base_scale: base, shape_base, ln_prefactor, probs: vec![ln_prefactor.exp()], residual: 0.0 };
        if ratios.is_empty() {
            mix.probs[0] = 1.0;
            return Ok(mix);
        }
        mix.expand(&ratios, kf, ctrl)?;
        Ok(mix)
    }

    fn expand(&mut self, ratios: &[f64], kf: f64, ctrl: &SeriesControl) -> Result<()> {
        let r_max = ratios.iter().copied().fold(0.0, f64::max);
        let q = ratios.len() as f64;
        // beyond this power every S_i is negligible
        let i_cap = if r_max > 0.0 {
            ((INNER_CUTOFF / q).ln() / r_max.ln()).ceil().max(1.0) as usize
        } else {
            1
        };
        let mut powers = ratios.to_vec();
        let mut sums: Vec<f64> = Vec::new();
        // v_j = δ_j·e^{-ln_scale}
        let mut v = vec![1.0];
        let mut ln_scale = 0.0;
        let mut total = self.probs[0];
        let mut comp = 0.0;
        let mut residual = 1.0 - total;
        for n in 0..ctrl.max_terms {
            if residual <= ctrl.tail_tol {
                break;
            }
            if sums.len() < i_cap.min(n + 1) {
                sums.push(powers.iter().sum::<f64>());
                powers.iter_mut().zip(ratios).for_each(|(p, r)| *p *= r);
            }
            let top = (n + 1).min(sums.len());
            let acc: f64 = (1..=top).map(|i| sums[i - 1] * v[n + 1 - i]).sum();
            let mut next = kf / (n + 1) as f64 * acc;
            if next > RESCALE_AT {
                v.iter_mut().for_each(|x| *x /= RESCALE_AT);
                next /= RESCALE_AT;
                ln_scale += RESCALE_AT.ln();
            }
            v.push(next);
            let p = (self.ln_prefactor + ln_scale).exp() * next;
            self.probs.push(p);
            // compensated running sum keeps the certificate honest near 1
            let y = p - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
            residual = 1.0 - total;
        }
        self.residual = residual.max(0.0);
        if residual > ctrl.tail_tol {
            return Err(Error::Convergence { terms: self.probs.len(), residual });
        }
        Ok(())
    }

    pub fn base_scale(&self) -> f64 {
        self.base_scale
    }

    pub fn shape_base(&self) -> f64 {
        self.shape_base
    }

    pub fn ln_prefactor(&self) -> f64 {
        self.ln_prefactor
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn terms(&self) -> usize {
        self.probs.len()
    }

    /// Mixture mass not represented by the retained terms.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `Pr(X > x)`. The omitted tail mass is counted as exceeding `x`, so the
    /// result is an upper bound tight to within [`Self::residual`].
    pub fn sf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return domain("threshold is NaN");
        }
        if x <= 0.0 {
            return Ok(1.0);
        }
        let y = x / self.base_scale;
        let a0 = self.shape_base;
        let (_, mut qa) = reg_gamma_pair(a0, y)?;
        let mut d = 0.0;
        let mut acc = self.residual;
        for (j, p) in self.probs.iter().enumerate() {
            if j > 0 {
                // Q(a+1, y) = Q(a, y) + y^a e^{-y}/Γ(a+1)
                let a = a0 + (j - 1) as f64;
                if (j - 1) % REANCHOR_EVERY == 0 {
                    d = ln_poisson_term(a, y).exp();
                } else {
                    d *= y / a;
                }
                qa = (qa + d).min(1.0);
            }
            acc += p * qa;
        }
        Ok(acc.clamp(0.0, 1.0))
    }

    /// `Pr(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.sf(x)?)
    }
}
