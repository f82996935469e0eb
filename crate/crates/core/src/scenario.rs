//! The full world description and the quantities derived from it.

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::geometry::{ArrayPose, Point3, Trajectory};
use crate::link::{path_amplitude, FadingConfig};
use crate::radiation::{array_factor, square_factorization, ArrayGeometry, Beam, BeamSet, ElementPattern, RadioParams};

/// How a beam's direction is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamSpec {
    /// Steer toward a primary user at this ground position.
    Toward { target: Point3, amplitude: f64 },
    /// Explicit direction in the array frame.
    Direction(Beam),
}

impl BeamSpec {
    pub fn amplitude(&self) -> f64 {
        match self {
            BeamSpec::Toward { amplitude, .. } => *amplitude,
            BeamSpec::Direction(b) => b.amplitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub pose: ArrayPose,
    pub geometry: ArrayGeometry,
    pub element: ElementPattern,
    pub beams: Vec<BeamSpec>,
    pub radio: RadioParams,
    pub sus: Vec<Trajectory>,
    pub fading: FadingConfig,
    pub seed: u64,
}

/// Array height of the reference setup, m.
pub const ARRAY_HEIGHT: f64 = 60.0;
/// Secondary-user speed along the roads, m/s.
pub const ROAD_SPEED: f64 = 10.0;

/// Primary users of the reference layout, all within a few hundred metres of
/// the array foot.
pub const DEFAULT_PUS: [(f64, f64); 5] = [(400.0, 300.0), (300.0, 450.0), (600.0, 150.0), (200.0, 600.0), (550.0, 500.0)];

/// Road A runs west to east along y = -2000, road B south to north along
/// x = -2000. Each user drives toward the far end of its road.
pub const ROAD_A_END: Point3 = Point3::new(2000.0, -2000.0, 0.0);
pub const ROAD_B_END: Point3 = Point3::new(-2000.0, 2000.0, 0.0);

/// Starting points of the ten reference secondary users, in fusion order.
/// They sit in sidelobes at 2-3 km so SNRs fall between about -26 and -10 dB.
pub const DEFAULT_SUS: [(f64, f64, char); 10] = [
    (-730.0, -2000.0, 'A'),
    (-2000.0, -2120.0, 'B'),
    (-2340.0, -2000.0, 'A'),
    (-2000.0, -1710.0, 'B'),
    (-1030.0, -2000.0, 'A'),
    (-2000.0, -1410.0, 'B'),
    (-1900.0, -2000.0, 'A'),
    (-2000.0, -40.0, 'B'),
    (-340.0, -2000.0, 'A'),
    (-2000.0, -1060.0, 'B'),
];

impl Default for Scenario {
    fn default() -> Self {
        let radio = RadioParams::default();
        let (lx, ly) = square_factorization(64).expect("64 factors");
        let beams = DEFAULT_PUS
            .iter()
            .map(|&(x, y)| BeamSpec::Toward { target: Point3::new(x, y, 0.0), amplitude: 1.0 })
            .collect();
        let sus = DEFAULT_SUS
            .iter()
            .map(|&(x, y, road)| {
                let end = if road == 'A' { ROAD_A_END } else { ROAD_B_END };
                Trajectory::new(vec![Point3::new(x, y, 0.0), end], ROAD_SPEED).expect("valid road")
            })
            .collect();
        Self {
            pose: ArrayPose::downward(Point3::new(0.0, 0.0, ARRAY_HEIGHT)),
            geometry: ArrayGeometry::uniform(lx, ly, radio.fc).expect("valid array"),
            element: ElementPattern::Isotropic,
            beams,
            radio,
            sus,
            fading: FadingConfig::default(),
            seed: 1,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.sus.is_empty() {
            return domain("at least one secondary user is required");
        }
        if self.beams.is_empty() {
            return domain("at least one beam is required");
        }
        self.radio.validate()?;
        self.fading.validate()?;
        self.beam_set().map(|_| ())
    }

    pub fn m(&self) -> usize {
        self.sus.len()
    }

    pub fn k(&self) -> usize {
        self.radio.k
    }

    /// Beams resolved to array-frame directions.
    pub fn beam_set(&self) -> Result<BeamSet> {
        let beams = self
            .beams
            .iter()
            .map(|b| match *b {
                BeamSpec::Direction(beam) => Ok(beam),
                BeamSpec::Toward { target, amplitude } => {
                    let look = self.pose.angles_to(target)?;
                    Ok(Beam { theta: look.theta, phi: look.phi, amplitude })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        BeamSet::new(beams)
    }

    /// Deterministic-channel (`h = 1`) amplitude at a point.
    pub fn amplitude_at(&self, beams: &BeamSet, p: Point3) -> Result<Complex64> {
        let look = self.pose.angles_to(p)?;
        let af = array_factor(&self.geometry, beams, look.theta, look.phi, self.radio.fc);
        let ef = self.element.factor(look.theta, look.phi);
        path_amplitude(&self.radio, af, ef, look.r, Complex64::new(1.0, 0.0))
    }

    pub fn positions_at(&self, t: f64) -> Result<Vec<Point3>> {
        self.sus.iter().map(|s| s.position_at(t)).collect()
    }

    /// Deterministic-channel amplitudes of every user at time `t`.
    pub fn alphas_at(&self, t: f64) -> Result<Vec<Complex64>> {
        let beams = self.beam_set()?;
        self.positions_at(t)?.into_iter().map(|p| self.amplitude_at(&beams, p)).collect()
    }

    /// True when no user ever moves.
    pub fn is_static(&self) -> bool {
        self.sus.iter().all(Trajectory::is_static)
    }

    /// Copy keeping only the first `m` users.
    pub fn with_first_sus(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.sus.len() {
            return domain(format!("cannot keep {m} of {} secondary users", self.sus.len()));
        }
        let mut s = self.clone();
        s.sus.truncate(m);
        Ok(s)
    }

    /// Copy with a uniformly excited `L`-element array at half-wave spacing.
    pub fn with_elements(&self, l: usize) -> Result<Self> {
        let (lx, ly) = square_factorization(l)?;
        let mut s = self.clone();
        s.geometry = ArrayGeometry::uniform(lx, ly, self.radio.fc)?;
        Ok(s)
    }

    /// SHA-256 over the exact field values, hex encoded.
    pub fn digest(&self) -> String {
        // Debug output of f64 round-trips exactly, so this is injective on values.
        hex::encode(Sha256::digest(format!("{self:?}").as_bytes()))
    }
}

/// SNR map over a ground grid, dB. Rows follow `ys`, columns follow `xs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `ys.len() × xs.len()`; NaN marks a cell at the array itself.
    pub db: Vec<f64>,
}

impl Heatmap {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.db[row * self.xs.len() + col]
    }

    pub fn peak(&self) -> f64 {
        self.db.iter().copied().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of cells within `drop_db` of the peak.
    pub fn cells_above(&self, drop_db: f64) -> usize {
        let cut = self.peak() - drop_db;
        self.db.iter().filter(|v| **v >= cut).count()
    }

    /// Ground area within `drop_db` of the peak, m².
    pub fn footprint_above(&self, drop_db: f64) -> f64 {
        let step = |v: &[f64]| if v.len() > 1 { (v[v.len() - 1] - v[0]).abs() / (v.len() - 1) as f64 } else { 1.0 };
        self.cells_above(drop_db) as f64 * step(&self.xs) * step(&self.ys)
    }
}

fn grid(range: (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (range.0 + range.1)];
    }
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

/// Deterministic-channel SNR in dB over an `nx × ny` grid at height `z`.
pub fn snr_heatmap(scenario: &Scenario, x_range: (f64, f64), y_range: (f64, f64), z: f64, nx: usize, ny: usize) -> Result<Heatmap> {
    if nx == 0 || ny == 0 {
        return domain("heatmap grid needs at least one cell per axis");
    }
    let beams = scenario.beam_set()?;
    let xs = grid(x_range, nx);
    let ys = grid(y_range, ny);
    let s2n = scenario.radio.sigma_s2 / scenario.radio.sigma_n2;
    let rows: Vec<Vec<f64>> = ys
        .par_iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| match scenario.amplitude_at(&beams, Point3::new(x, y, z)) {
                    Ok(a) => Ok(10.0 * (a.norm_sqr() * s2n).log10()),
                    Err(Error::SingularRange) => Ok(f64::NAN),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(Heatmap { xs, ys, db: rows.into_iter().flatten().collect() })
}
