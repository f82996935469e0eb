//! Experiment presets, each writing a fixed set of CSV files.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use wcss_core::montecarlo::{mobility_roc, static_rocs};
use wcss_core::scenario::snr_heatmap;
use wcss_core::{DetectorKind, MobilityPlan, RocCurve, Scenario, Variant, WeightScheme};

use crate::output::{heatmap_csv, roc_csv, roc_meta, write_with_meta};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    StaticCompare,
    UserCount,
    Mobility,
    Aperture,
    Heatmap,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::StaticCompare, Preset::UserCount, Preset::Mobility, Preset::Aperture, Preset::Heatmap];

    pub fn name(self) -> &'static str {
        match self {
            Preset::StaticCompare => "static-compare",
            Preset::UserCount => "user-count",
            Preset::Mobility => "mobility",
            Preset::Aperture => "aperture",
            Preset::Heatmap => "heatmap",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const USER_COUNTS: [usize; 2] = [5, 10];
pub const MU_SWEEP: [f64; 3] = [1.0, 10.0, 30.0];
pub const APERTURES: [usize; 2] = [64, 128];

/// Square ground grid centred under the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// Half-width, m.
    pub extent: f64,
    /// Cells per axis.
    pub cells: usize,
    /// Height of the evaluation plane, m.
    pub z: f64,
}

impl Default for Grid {
    // 10 m cells: coarser grids blur the -3 dB lobe to one or two cells
    fn default() -> Self {
        Self { extent: 1000.0, cells: 201, z: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub trials: usize,
    pub points: usize,
    pub grid: Grid,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { trials: 20_000, points: 99, grid: Grid::default() }
    }
}

fn tag(kind: DetectorKind, scheme: WeightScheme) -> String {
    format!("{kind}_{scheme}")
}

fn put_roc(dir: &Path, name: String, c: &RocCurve, extra: &[(String, String)]) -> Result<PathBuf> {
    write_with_meta(dir, &name, &roc_csv(c), &roc_meta(c, extra)).with_context(|| format!("writing {name}"))
}

/// Monte Carlo ROCs with their analytic overlays, named `{prefix}{det}_{w}_{mc|analytic}.csv`.
pub fn write_rocs(
    dir: &Path,
    prefix: &str,
    scenario: &Scenario,
    variants: &[Variant],
    opts: &RunOptions,
    extra: &[(String, String)],
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for (v, (mc, overlay)) in variants.iter().zip(static_rocs(scenario, variants, opts.points, opts.trials, scenario.seed)?) {
        let t = tag(v.kind, v.scheme);
        files.push(put_roc(dir, format!("{prefix}{t}_mc.csv"), &mc, extra)?);
        if let Some(a) = overlay {
            files.push(put_roc(dir, format!("{prefix}{t}_analytic.csv"), &a, extra)?);
        }
    }
    Ok(files)
}

pub fn write_heatmap(dir: &Path, name: &str, scenario: &Scenario, grid: &Grid, extra: &[(String, String)]) -> Result<PathBuf> {
    let e = grid.extent;
    let h = snr_heatmap(scenario, (-e, e), (-e, e), grid.z, grid.cells, grid.cells)?;
    let mut meta = vec![
        format!("scenario_digest = {}", scenario.digest()),
        format!("extent_m = {e:?}"),
        format!("cells = {}", grid.cells),
        format!("z_m = {:?}", grid.z),
        format!("elements = {}", scenario.geometry.elements()),
        format!("peak_db = {:?}", h.peak()),
        format!("footprint_3db_m2 = {:?}", h.footprint_above(3.0)),
    ];
    meta.extend(extra.iter().map(|(k, v)| format!("{k} = {v}")));
    write_with_meta(dir, name, &heatmap_csv(&h), &(meta.join("\n") + "\n")).with_context(|| format!("writing {name}"))
}

const PAPER: [Variant; 2] =
    [Variant::new(DetectorKind::Wed, WeightScheme::Paper), Variant::new(DetectorKind::Wevd, WeightScheme::Paper)];

/// Run `preset` on `base` and return the CSV files written, in order.
pub fn run_preset(preset: Preset, base: &Scenario, opts: &RunOptions, dir: &Path) -> Result<Vec<PathBuf>> {
    base.validate()?;
    let extra = vec![("preset".to_string(), preset.name().to_string())];
    let mut files = Vec::new();
    match preset {
        Preset::StaticCompare => files.extend(write_rocs(dir, "roc_", base, &Variant::ALL, opts, &extra)?),
        Preset::UserCount => {
            let need = USER_COUNTS[USER_COUNTS.len() - 1];
            if base.m() < need {
                bail!("user-count needs at least {need} secondary users, the scenario has {}", base.m());
            }
            for m in USER_COUNTS {
                let s = base.with_first_sus(m)?;
                let mut ex = extra.clone();
                ex.push(("users".into(), m.to_string()));
                files.extend(write_rocs(dir, &format!("roc_m{m}_"), &s, &PAPER, opts, &ex)?);
            }
        }
        Preset::Mobility => {
            for mu in MU_SWEEP {
                let plan = MobilityPlan { mu, ..MobilityPlan::default() };
                for v in PAPER {
                    let c = mobility_roc(base, &plan, v.kind, v.scheme, opts.points, opts.trials, base.seed)?;
                    files.push(put_roc(dir, format!("roc_mu{mu}_{}_mc.csv", tag(v.kind, v.scheme)), &c, &extra)?);
                }
            }
        }
        Preset::Aperture => {
            for l in APERTURES {
                let s = base.with_elements(l)?;
                let mut ex = extra.clone();
                ex.push(("elements".into(), l.to_string()));
                files.extend(write_rocs(dir, &format!("roc_l{l}_"), &s, &PAPER, opts, &ex)?);
                files.push(write_heatmap(dir, &format!("heatmap_l{l}.csv"), &s, &opts.grid, &ex)?);
            }
        }
        Preset::Heatmap => files.push(write_heatmap(dir, "heatmap.csv", base, &opts.grid, &extra)?),
    }
    Ok(files)
}
