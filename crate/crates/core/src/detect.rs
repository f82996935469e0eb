//! Sample synthesis at the fusion centre and the two weighted test statistics.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::link::complex_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H0,
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Wed,
    Wevd,
}

impl DetectorKind {
    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Wed => "wed",
            DetectorKind::Wevd => "wevd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "wed" => Some(DetectorKind::Wed),
            "wevd" => Some(DetectorKind::Wevd),
            _ => None,
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Weighting applied at the fusion centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// `w ∝ |α|²`.
    Paper,
    /// `w = 1/M`.
    Uniform,
}

impl WeightScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::Paper => "paper",
            WeightScheme::Uniform => "uniform",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "paper" | "weighted" => Some(WeightScheme::Paper),
            "uniform" => Some(WeightScheme::Uniform),
            _ => None,
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `M × K` received samples, row-major by user.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    m: usize,
    k: usize,
    data: Vec<Complex64>,
    pub hypothesis: Hypothesis,
}

impl SampleBlock {
    pub fn new(m: usize, k: usize, data: Vec<Complex64>, hypothesis: Hypothesis) -> Result<Self> {
        if m == 0 || k == 0 || data.len() != m * k {
            return Err(Error::Dimension(format!("{m}×{k} block needs {} samples, got {}", m * k, data.len())));
        }
        Ok(Self { m, k, data, hypothesis })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
}

/// Draw one sensing window. Under H1 every row sees the same signal sequence.
pub fn synth_block<R: Rng + ?Sized>(
    hypothesis: Hypothesis,
    alphas: &[Complex64],
    sigma_s2: f64,
    sigma_n2: f64,
    k: usize,
    rng: &mut R,
) -> Result<SampleBlock> {
    let m = alphas.len();
    if m == 0 || k == 0 {
        return Err(Error::Dimension(format!("block shape {m}×{k} is empty")));
    }
    if !(sigma_s2 > 0.0 && sigma_n2 > 0.0) {
        return domain(format!("variances must be positive, got σs²={sigma_s2}, σn²={sigma_n2}"));
    }
    let ss = sigma_s2.sqrt();
    let sn = sigma_n2.sqrt();
    let mut data = Vec::with_capacity(m * k);
    match hypothesis {
        Hypothesis::H0 => {
            for _ in 0..m * k {
                data.push(complex_normal(rng) * sn);
            }
        }
        Hypothesis::H1 => {
            let s: Vec<Complex64> = (0..k).map(|_| complex_normal(rng) * ss).collect();
            for a in alphas {
                for sk in &s {
                    data.push(a * sk + complex_normal(rng) * sn);
                }
            }
        }
    }
    SampleBlock::new(m, k, data, hypothesis)
}

fn check_weights(block: &SampleBlock, w: &[f64]) -> Result<()> {
    if w.len() != block.m {
        return Err(Error::Dimension(format!("{} weights for {} users", w.len(), block.m)));
    }
    Ok(())
}

/// Per-row energies `‖y_m‖²`.
pub fn row_energies(block: &SampleBlock) -> Vec<f64> {
    (0..block.m).map(|i| block.row(i).iter().map(|v| v.norm_sqr()).sum()).collect()
}

/// `(1/K)·Σ w_m·‖y_m‖²`.
pub fn wed_statistic(block: &SampleBlock, w: &[f64]) -> Result<f64> {
    check_weights(block, w)?;
    let e = row_energies(block);
    Ok(w.iter().zip(&e).map(|(wi, ei)| wi * ei).sum::<f64>() / block.k as f64)
}

/// Weighted sample covariance `W^{1/2} Y Yᴴ W^{1/2} / K`.
pub fn weighted_gram(block: &SampleBlock, w: &[f64]) -> Result<CMatrix> {
    check_weights(block, w)?;
    let m = block.m;
    let kf = block.k as f64;
    let mut g = CMatrix::zeros(m);
    for i in 0..m {
        let ri = block.row(i);
        let ei: f64 = ri.iter().map(|v| v.norm_sqr()).sum();
        g[(i, i)] = Complex64::new(w[i] * ei / kf, 0.0);
        for j in 0..i {
            let rj = block.row(j);
            let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
            let v = s * ((w[i] * w[j]).sqrt() / kf);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Largest eigenvalue of the weighted sample covariance.
pub fn wevd_statistic(block: &SampleBlock, w: &[f64]) -> Result<f64> {
    let g = weighted_gram(block, w)?;
    Ok(hermitian_eigenvalues(&g)?[0].max(0.0))
}

/// Evaluate either statistic.
pub fn statistic(kind: DetectorKind, block: &SampleBlock, w: &[f64]) -> Result<f64> {
    match kind {
        DetectorKind::Wed => wed_statistic(block, w),
        DetectorKind::Wevd => wevd_statistic(block, w),
    }
}

/// Declare H1 when the statistic strictly exceeds the threshold.
pub fn decide(lambda: f64, tau: f64) -> bool {
    lambda > tau
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn wed_hand_example() {
        let b = SampleBlock::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)], Hypothesis::H0).unwrap();
        assert_eq!(wed_statistic(&b, &[0.5, 0.5]).unwrap(), 1.5);
        let z = SampleBlock::new(2, 3, vec![c(0.0, 0.0); 6], Hypothesis::H0).unwrap();
        assert_eq!(wed_statistic(&z, &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(wevd_statistic(&z, &[0.3, 0.7]).unwrap(), 0.0);
    }

    #[test]
    fn single_user_statistics_coincide() {
        let b = SampleBlock::new(1, 3, vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)], Hypothesis::H1).unwrap();
        assert_eq!(wevd_statistic(&b, &[1.0]).unwrap(), wed_statistic(&b, &[1.0]).unwrap());
    }

    #[test]
    fn orthogonal_rows() {
        let b = SampleBlock::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], Hypothesis::H0).unwrap();
        assert_eq!(wevd_statistic(&b, &[0.5, 0.5]).unwrap(), 0.25);
    }

    #[test]
    fn decisions() {
        assert!(decide(1.0, 0.5));
        assert!(!decide(0.5, 0.5));
        assert!(!decide(0.0, 1.0));
    }

    #[test]
    fn shape_errors() {
        let b = SampleBlock::new(2, 1, vec![c(1.0, 0.0); 2], Hypothesis::H0).unwrap();
        assert!(wed_statistic(&b, &[1.0]).is_err());
        assert!(SampleBlock::new(2, 2, vec![c(1.0, 0.0); 3], Hypothesis::H0).is_err());
    }
}
