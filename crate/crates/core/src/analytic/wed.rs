//! False-alarm and detection probabilities of the weighted energy detector.

use num_complex::Complex64;

use super::gamma_series::{GammaMixture, SeriesControl};
use crate::error::{domain, Error, Result};
use crate::linalg::symmetric_eigenvalues;

/// Eigenvalues below this fraction of the largest are numerically zero.
const EIG_FLOOR: f64 = 1e-13;

pub(crate) fn check_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return domain("weight vector is empty");
    }
    if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return domain("weights must be finite and nonnegative");
    }
    if w.iter().all(|x| *x == 0.0) {
        return Err(Error::DegenerateScenario("all weights are zero".into()));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return domain(format!("threshold must be nonnegative, got {tau}"));
    }
    Ok(())
}

/// Mixture for the statistic times `K` under H0: `Σ_m Gamma(K, w_m·σn²)`.
pub fn wed_h0_mixture(w: &[f64], sigma_n2: f64, k: usize, ctrl: &SeriesControl) -> Result<GammaMixture> {
    check_weights(w)?;
    let scales: Vec<f64> = w.iter().map(|wi| wi * sigma_n2).collect();
    GammaMixture::new(&scales, k, ctrl)
}

/// `Pr(Λ_WED > τ | H0)`.
pub fn wed_pf(tau: f64, w: &[f64], sigma_n2: f64, k: usize, ctrl: &SeriesControl) -> Result<f64> {
    check_tau(tau)?;
    wed_h0_mixture(w, sigma_n2, k, ctrl)?.sf(k as f64 * tau)
}

/// Correlation between weighted energies of users `i` and `j` under H1, in the
/// printed form.
pub fn rho(ai2: f64, aj2: f64, sigma_s2: f64, sigma_n2: f64) -> f64 {
    let s4 = sigma_s2 * sigma_s2;
    let num = s4 * ai2 * aj2;
    num / (ai2 * aj2 * s4 + sigma_s2 * sigma_n2 * (ai2 + aj2) + sigma_n2 * sigma_n2)
}

/// The same correlation written in SNRs: `γ_iγ_j / ((γ_i+1)(γ_j+1))`.
pub fn rho_from_snr(gi: f64, gj: f64) -> f64 {
    gi * gj / ((gi + 1.0) * (gj + 1.0))
}

/// Matrix `C` with unit diagonal and `C_ij = sqrt(ρ_ij)`, row-major.
pub fn wed_corr(alphas: &[Complex64], sigma_s2: f64, sigma_n2: f64) -> Vec<f64> {
    let m = alphas.len();
    let a2: Vec<f64> = alphas.iter().map(|a| a.norm_sqr()).collect();
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            c[i * m + j] = if i == j { 1.0 } else { rho(a2[i], a2[j], sigma_s2, sigma_n2).sqrt() };
        }
    }
    c
}

/// Gamma scales of the statistic times `K` under H1: the eigenvalues of
/// `D^{1/2} C D^{1/2}` with `D = diag(σn² w_m (γ_m + 1))`.
///
/// Entry `(i, j)` of that matrix is `σs² sqrt(w_i w_j) |α_i||α_j|` off the
/// diagonal and `w_i(σs²|α_i|² + σn²)` on it, i.e. the moduli of the weighted
/// H1 covariance, which is unitarily similar to it. The spectrum is therefore
/// that of the covariance itself.
pub fn wed_h1_scales(w: &[f64], alphas: &[Complex64], sigma_s2: f64, sigma_n2: f64) -> Result<Vec<f64>> {
    check_weights(w)?;
    if w.len() != alphas.len() {
        return Err(Error::Dimension(format!("{} weights for {} amplitudes", w.len(), alphas.len())));
    }
    let m = w.len();
    let c = wed_corr(alphas, sigma_s2, sigma_n2);
    let d: Vec<f64> = alphas
        .iter()
        .zip(w)
        .map(|(a, wi)| sigma_n2 * wi * (a.norm_sqr() * sigma_s2 / sigma_n2 + 1.0))
        .collect();
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            a[i * m + j] = (d[i] * d[j]).sqrt() * c[i * m + j];
        }
    }
    let eig = symmetric_eigenvalues(m, &a)?;
    let top = eig[0];
    if eig.iter().any(|e| *e < -EIG_FLOOR * top * m as f64) {
        return Err(Error::Numerical(format!("H1 energy covariance is not positive semidefinite: eigenvalues {eig:?}")));
    }
    Ok(eig.into_iter().filter(|e| *e > EIG_FLOOR * top).collect())
}

/// `Pr(Λ_WED > τ | H1)`.
pub fn wed_pd(
    tau: f64,
    w: &[f64],
    alphas: &[Complex64],
    sigma_s2: f64,
    sigma_n2: f64,
    k: usize,
    ctrl: &SeriesControl,
) -> Result<f64> {
    check_tau(tau)?;
    let scales = wed_h1_scales(w, alphas, sigma_s2, sigma_n2)?;
    GammaMixture::new(&scales, k, ctrl)?.sf(k as f64 * tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn closed_forms() {
        let ctrl = SeriesControl::default();
        assert_eq!(wed_pf(0.0, &[0.3, 0.7], 1.0, 4, &ctrl).unwrap(), 1.0);
        assert!((wed_pf(LN2, &[1.0], 1.0, 1, &ctrl).unwrap() - 0.5).abs() < 1e-15);
        let v = wed_pf(0.5, &[0.5, 0.5], 1.0, 1, &ctrl).unwrap();
        assert!((v - 2.0 * (-1f64).exp()).abs() < 1e-15);
        let pd = wed_pd(2.0 * LN2, &[1.0], &[c(1.0)], 1.0, 1.0, 1, &ctrl).unwrap();
        assert!((pd - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(0.0, 3.0, 1.0, 1.0), 0.0);
        assert!((rho(1.0, 1.0, 1.0, 1.0) - 0.25).abs() < 1e-16);
        assert!(rho(1e12, 1e12, 1.0, 1.0) > 1.0 - 1e-11);
    }

    #[test]
    fn silent_users_reduce_to_h0() {
        let ctrl = SeriesControl::default();
        let w = [0.2, 0.3, 0.5];
        for tau in [0.3, 1.0, 2.0] {
            let a = wed_pf(tau, &w, 2.0, 4, &ctrl).unwrap();
            let b = wed_pd(tau, &w, &[c(0.0); 3], 1.0, 2.0, 4, &ctrl).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
