//! CDF of the largest eigenvalue of a central correlated complex Wishart
//! matrix `CW_M(K, Σ)` with `K ≥ M`.
//!
//! With `ψ_1 ≥ … ≥ ψ_M` the eigenvalues of `Σ`,
//!
//! ```text
//! F(x) = det[ψ_j^{M-i} P(K-i+1, x/ψ_j)] / Π_{i<j} (ψ_i - ψ_j).
//! ```
//!
//! The quotient is rewritten with Newton divided differences: if
//! `g_i(z) = z^{M-i} P(K-i+1, x/z)` then `F = ± det[g_i[ψ_1, …, ψ_j]]`. Nodes
//! that sit close together are grouped, and divided differences within a
//! group are taken as contour integrals around it. This handles coincident
//! eigenvalues exactly instead of perturbing them apart.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::determinant;
use crate::special::{reg_lower_gamma, reg_lower_gamma_int_c_ladder};

const CONTOUR_POINTS: usize = 128;
const MAX_HALF_WIDTH: f64 = 0.3;
/// Minimum contour radius relative to the cluster centre. Smaller circles
/// amplify rounding by `R^{-order}`; larger ones approach the singularity of
/// `P(a, x/z)` at `z = 0`.
const RADIUS: f64 = 0.35;

/// A run of neighbouring nodes `first..=last` sharing one contour.
#[derive(Debug, Clone, PartialEq)]
struct Cluster {
    first: usize,
    last: usize,
    center: f64,
    radius: f64,
}

/// Normalized eigenvalue set ready for CDF evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct WishartSpec {
    k: usize,
    /// Largest eigenvalue; `psi` below is divided by it.
    scale: f64,
    psi: Vec<f64>,
    clusters: Vec<Cluster>,
}

impl WishartSpec {
    /// `eigs` in any order; zeros are dropped.
    pub fn new(eigs: &[f64], k: usize) -> Result<Self> {
        if eigs.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return domain("Wishart scale parameters must be finite and nonnegative");
        }
        let mut psi: Vec<f64> = eigs.iter().copied().filter(|e| *e > 0.0).collect();
        if psi.is_empty() {
            return Err(Error::DegenerateScenario("all Wishart scale parameters are zero".into()));
        }
        if k < psi.len() {
            return domain(format!("Wishart degrees of freedom K = {k} below dimension M = {}", psi.len()));
        }
        psi.sort_by(|a, b| b.total_cmp(a));
        let scale = psi[0];
        psi.iter_mut().for_each(|p| *p /= scale);
        let clusters = cluster(&psi, k);
        Ok(Self { k, scale, psi, clusters })
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Eigenvalues, descending, in original units.
    pub fn eigs(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p * self.scale).collect()
    }

    /// `Pr(λ_max ≤ x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return domain("Wishart CDF argument is NaN");
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let x = x / self.scale;
        let m = self.psi.len();
        let contours: Vec<Option<Contour>> =
            self.clusters.iter().map(|c| (c.last > c.first).then(|| self.contour(c, x))).collect();
        let mut d = vec![0.0; m * m];
        for i in 0..m {
            let row = self.newton_row(i, x, &contours)?;
            d[i * m..(i + 1) * m].copy_from_slice(&row);
        }
        let mut f = determinant(m, &d)?;
        if (m * (m - 1) / 2) % 2 == 1 {
            f = -f;
        }
        if !f.is_finite() {
            return Err(Error::Numerical(format!("Wishart determinant is {f} at x = {x} (M = {m}, K = {})", self.k)));
        }
        Ok(f.clamp(0.0, 1.0))
    }

    /// Integrand samples `g_i(z)·(z - c)` on the circle around `c`, all rows.
    fn contour(&self, c: &Cluster, x: f64) -> Contour {
        let n = CONTOUR_POINTS;
        let m = self.psi.len();
        let mut z = Vec::with_capacity(n);
        let mut gz = vec![Vec::with_capacity(n); m];
        for q in 0..n {
            let ang = 2.0 * PI * (q as f64 + 0.5) / n as f64;
            let off = Complex64::from_polar(c.radius, ang);
            let zq = Complex64::new(c.center, 0.0) + off;
            z.push(zq);
            let ladder = reg_lower_gamma_int_c_ladder(self.k as u32, m, Complex64::new(x, 0.0) / zq);
            // the (z - c) factor is dz/(i dθ)
            for (i, p) in ladder.into_iter().enumerate() {
                gz[i].push(zq.powi((m - 1 - i) as i32) * p * off);
            }
        }
        Contour { z, gz }
    }

    /// `g_i[ψ_1..ψ_j]` for `j = 1..M`, where row index `i` is zero-based.
    fn newton_row(&self, i: usize, x: f64, contours: &[Option<Contour>]) -> Result<Vec<f64>> {
        let m = self.psi.len();
        let power = (m - 1 - i) as i32;
        let shape = (self.k - i) as f64;
        // t[a][b] = g[ψ_a..ψ_b]; only the top row is returned
        let mut t = vec![vec![0.0; m]; m];
        for a in 0..m {
            t[a][a] = self.psi[a].powi(power) * reg_lower_gamma(shape, x / self.psi[a])?;
        }
        let mut owner = vec![0; m];
        for (ci, c) in self.clusters.iter().enumerate() {
            owner[c.first..=c.last].iter_mut().for_each(|o| *o = ci);
            if let Some(ct) = &contours[ci] {
                self.contour_block(c, &ct.z, &ct.gz[i], &mut t);
            }
        }
        for span in 1..m {
            for a in 0..m - span {
                let b = a + span;
                if owner[a] == owner[b] {
                    continue;
                }
                t[a][b] = (t[a + 1][b] - t[a][b - 1]) / (self.psi[b] - self.psi[a]);
            }
        }
        Ok(t.swap_remove(0))
    }

    /// Fill every divided difference whose nodes all lie in `c`.
    fn contour_block(&self, c: &Cluster, z: &[Complex64], gz: &[Complex64], t: &mut [Vec<f64>]) {
        let n = z.len() as f64;
        for a in c.first..=c.last {
            // running 1/Π_{k=a..b}(z - ψ_k) per contour point
            let mut inv: Vec<Complex64> = z.iter().map(|zq| (zq - self.psi[a]).inv()).collect();
            for b in a + 1..=c.last {
                for (w, zq) in inv.iter_mut().zip(z) {
                    *w /= zq - self.psi[b];
                }
                let s: Complex64 = gz.iter().zip(&inv).map(|(g, w)| g * w).sum();
                t[a][b] = s.re / n;
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Contour {
    z: Vec<Complex64>,
    /// Per row `i`, `g_i(z_q)·(z_q - c)`.
    gz: Vec<Vec<Complex64>>,
}

/// Group consecutive nodes whose relative spacing is small compared to the
/// width of the integrand's features, about `1/√K` in relative terms.
fn cluster(psi: &[f64], k: usize) -> Vec<Cluster> {
    let gap = (0.5 / (k as f64).sqrt()).clamp(0.01, 0.1);
    let mut out = Vec::new();
    let mut first = 0;
    for i in 1..=psi.len() {
        let split = i == psi.len() || {
            let close = (psi[i - 1] - psi[i]) / psi[i - 1] < gap;
            let (hi, lo) = (psi[first], psi[i]);
            let half = 0.5 * (hi - lo);
            !close || half > MAX_HALF_WIDTH * 0.5 * (hi + lo)
        };
        if split {
            let (hi, lo) = (psi[first], psi[i - 1]);
            let center = 0.5 * (hi + lo);
            let half = 0.5 * (hi - lo);
            let radius = (1.5 * half).max(RADIUS * center);
            out.push(Cluster { first, last: i - 1, center, radius });
            first = i;
        }
    }
    out
}

/// `Pr(λ_max(CW_M(K, Σ)) ≤ x)` for `Σ` with eigenvalues `eigs`.
pub fn lambda_max_cdf(x: f64, eigs: &[f64], k: usize) -> Result<f64> {
    WishartSpec::new(eigs, k)?.cdf(x)
}
