//! Multi-beam uniform planar array: array factor, element pattern and radio
//! constants.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;

/// Wavelength for carrier `fc` (Hz).
pub fn wavelength(fc: f64) -> f64 {
    C / fc
}

/// Rectangular array with quadrant-symmetric real excitations.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    lx: usize,
    ly: usize,
    dx: f64,
    dy: f64,
    /// `(lx/2) × (ly/2)`, row-major over `i`.
    excitation: Vec<f64>,
}

impl ArrayGeometry {
    /// Uniformly excited array with half-wavelength spacing at `fc`.
    pub fn uniform(lx: usize, ly: usize, fc: f64) -> Result<Self> {
        let d = wavelength(fc) / 2.0;
        Self::new(lx, ly, d, d, vec![1.0; (lx / 2) * (ly / 2)])
    }

    pub fn new(lx: usize, ly: usize, dx: f64, dy: f64, excitation: Vec<f64>) -> Result<Self> {
        if lx == 0 || ly == 0 || lx % 2 != 0 || ly % 2 != 0 {
            return domain(format!("element counts must be even and positive, got {lx}×{ly}"));
        }
        if !(dx > 0.0 && dy > 0.0) || !dx.is_finite() || !dy.is_finite() {
            return domain(format!("element spacing must be positive, got dx={dx}, dy={dy}"));
        }
        if excitation.len() != (lx / 2) * (ly / 2) {
            return domain(format!(
                "expected {} quadrant excitations for a {lx}×{ly} array, got {}",
                (lx / 2) * (ly / 2),
                excitation.len()
            ));
        }
        if excitation.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return domain("excitations must be finite and nonnegative");
        }
        Ok(Self { lx, ly, dx, dy, excitation })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn elements(&self) -> usize {
        self.lx * self.ly
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn excitation(&self) -> &[f64] {
        &self.excitation
    }

    /// `e[i][j]` with 1-based quadrant indices.
    pub fn e(&self, i: usize, j: usize) -> f64 {
        self.excitation[(i - 1) * (self.ly / 2) + (j - 1)]
    }

    /// `4·Σ e`, the gain toward any steering direction of a unit-amplitude beam.
    pub fn peak_gain(&self) -> f64 {
        4.0 * self.excitation.iter().sum::<f64>()
    }
}

/// Factor `L` into `Lx × Ly`, both even, as close to square as possible with
/// `Lx ≥ Ly` (64 → 8×8, 128 → 16×8).
pub fn square_factorization(l: usize) -> Result<(usize, usize)> {
    if l == 0 || l % 4 != 0 {
        return domain(format!("element count {l} has no even×even factorization"));
    }
    let mut ly = (l as f64).sqrt() as usize;
    while ly > 0 {
        if ly % 2 == 0 && l % ly == 0 && (l / ly) % 2 == 0 {
            return Ok((l / ly, ly));
        }
        ly -= 1;
    }
    unreachable!("2 divides any multiple of 4 evenly")
}

/// One steered beam: direction and peak amplitude ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub theta: f64,
    pub phi: f64,
    pub amplitude: f64,
}

/// Beams the array forms simultaneously, one per primary user.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet(Vec<Beam>);

impl BeamSet {
    pub fn new(beams: Vec<Beam>) -> Result<Self> {
        if beams.is_empty() {
            return domain("at least one beam is required");
        }
        for b in &beams {
            if !(b.theta.is_finite() && b.phi.is_finite() && b.amplitude.is_finite() && b.amplitude > 0.0) {
                return domain(format!("invalid beam {b:?}: angles finite, amplitude positive"));
            }
        }
        Ok(Self(beams))
    }

    pub fn beams(&self) -> &[Beam] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn amplitude_sum(&self) -> f64 {
        self.0.iter().map(|b| b.amplitude).sum()
    }
}

/// Single-element radiation pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElementPattern {
    #[default]
    Isotropic,
    /// `cos θ` in the front hemisphere, zero behind.
    Cosine,
}

impl ElementPattern {
    pub fn factor(self, theta: f64, _phi: f64) -> f64 {
        match self {
            ElementPattern::Isotropic => 1.0,
            ElementPattern::Cosine => theta.cos().max(0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementPattern::Isotropic => "isotropic",
            ElementPattern::Cosine => "cosine",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "isotropic" => Some(ElementPattern::Isotropic),
            "cosine" => Some(ElementPattern::Cosine),
            _ => None,
        }
    }
}

/// Transmit side and sensing-window constants, linear SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioParams {
    /// Transmit power, W.
    pub p: f64,
    /// Combined antenna gain, linear.
    pub gain: f64,
    /// Carrier frequency, Hz.
    pub fc: f64,
    pub sigma_s2: f64,
    /// Noise power, W.
    pub sigma_n2: f64,
    /// Samples per sensing window.
    pub k: usize,
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("G", self.gain), ("fc", self.fc), ("sigma_s2", self.sigma_s2), ("noise", self.sigma_n2)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("radio parameter {name} must be positive and finite, got {v}"));
            }
        }
        if self.k == 0 {
            return domain("samples per window K must be at least 1");
        }
        Ok(())
    }
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            p: dbm_to_watts(26.98),
            gain: db_to_linear(5.0),
            fc: 5.2e9,
            sigma_s2: 1.0,
            sigma_n2: dbm_to_watts(-60.0),
            k: 100,
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

/// Array factor toward `(theta, phi)` summed over all beams. Real and signed.
pub fn array_factor(geom: &ArrayGeometry, beams: &BeamSet, theta: f64, phi: f64, fc: f64) -> f64 {
    let hx = geom.lx / 2;
    let hy = geom.ly / 2;
    let (st, (sp, cp)) = (theta.sin(), phi.sin_cos());
    let kx = PI * geom.dx * fc / C;
    let ky = PI * geom.dy * fc / C;
    let mut cx = vec![0.0; hx];
    let mut cy = vec![0.0; hy];
    let mut total = 0.0;
    for b in beams.beams() {
        let (sl, (spl, cpl)) = (b.theta.sin(), b.phi.sin_cos());
        let b1 = (st * cp - sl * cpl) * kx;
        let b2 = (st * sp - sl * spl) * ky;
        for (i, c) in cx.iter_mut().enumerate() {
            *c = ((2 * i + 1) as f64 * b1).cos();
        }
        for (j, c) in cy.iter_mut().enumerate() {
            *c = ((2 * j + 1) as f64 * b2).cos();
        }
        let mut s = 0.0;
        for (i, ci) in cx.iter().enumerate() {
            let row = &geom.excitation[i * hy..(i + 1) * hy];
            let inner: f64 = row.iter().zip(&cy).map(|(e, cj)| e * cj).sum();
            s += ci * inner;
        }
        total += 4.0 * b.amplitude * s;
    }
    total
}
