//! False-alarm and detection probabilities of the weighted eigenvalue
//! detector via the largest-eigenvalue Wishart CDF.

use num_complex::Complex64;

use super::wed::check_weights;
use super::wishart::WishartSpec;
use crate::error::{domain, Error, Result};
use crate::linalg::symmetric_eigenvalues;

/// Which scale parameters describe the H1 Wishart law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WevdMode {
    /// `ψ_m = w_m(σs²|α_m|² + σn²)`, the diagonal of the H1 covariance.
    Paper,
    /// Eigenvalues of the full H1 covariance.
    Eigen,
}

impl WevdMode {
    pub fn name(self) -> &'static str {
        match self {
            WevdMode::Paper => "paper",
            WevdMode::Eigen => "eigen",
        }
    }
}

const EIG_FLOOR: f64 = 1e-13;

/// H0 scale parameters `w_m·σn²`.
pub fn wevd_h0_scales(w: &[f64], sigma_n2: f64) -> Result<Vec<f64>> {
    check_weights(w)?;
    Ok(w.iter().map(|wi| wi * sigma_n2).collect())
}

/// H1 scale parameters under `mode`.
pub fn wevd_h1_scales(w: &[f64], alphas: &[Complex64], sigma_s2: f64, sigma_n2: f64, mode: WevdMode) -> Result<Vec<f64>> {
    check_weights(w)?;
    if w.len() != alphas.len() {
        return Err(Error::Dimension(format!("{} weights for {} amplitudes", w.len(), alphas.len())));
    }
    match mode {
        WevdMode::Paper => Ok(w.iter().zip(alphas).map(|(wi, a)| wi * (sigma_s2 * a.norm_sqr() + sigma_n2)).collect()),
        WevdMode::Eigen => {
            // phases only conjugate the covariance by a diagonal unitary, so
            // the real matrix of moduli has the same spectrum
            let m = w.len();
            let mut cov = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    let mut v = sigma_s2 * (w[i] * w[j]).sqrt() * alphas[i].norm() * alphas[j].norm();
                    if i == j {
                        v = w[i] * (sigma_s2 * alphas[i].norm_sqr() + sigma_n2);
                    }
                    cov[i * m + j] = v;
                }
            }
            let eig = symmetric_eigenvalues(m, &cov)?;
            let top = eig[0];
            Ok(eig.into_iter().filter(|e| *e > EIG_FLOOR * top).collect())
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return domain(format!("threshold must be nonnegative, got {tau}"));
    }
    Ok(())
}

/// `Pr(Λ_WEVD > τ | H0)`.
pub fn wevd_pf(tau: f64, w: &[f64], sigma_n2: f64, k: usize) -> Result<f64> {
    check_tau(tau)?;
    let spec = WishartSpec::new(&wevd_h0_scales(w, sigma_n2)?, k)?;
    Ok(1.0 - spec.cdf(k as f64 * tau)?)
}

/// `Pr(Λ_WEVD > τ | H1)`.
#[allow(clippy::too_many_arguments)]
pub fn wevd_pd(
    tau: f64,
    w: &[f64],
    alphas: &[Complex64],
    sigma_s2: f64,
    sigma_n2: f64,
    k: usize,
    mode: WevdMode,
) -> Result<f64> {
    check_tau(tau)?;
    let spec = WishartSpec::new(&wevd_h1_scales(w, alphas, sigma_s2, sigma_n2, mode)?, k)?;
    Ok(1.0 - spec.cdf(k as f64 * tau)?)
}
