use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use wcss_cli::config::{emit_config, parse_with_overrides, ConfigError};
use wcss_cli::output::{roc_csv, roc_meta, write_with_meta};
use wcss_cli::preset::{run_preset, write_heatmap, write_rocs, Grid, Preset, RunOptions};
use wcss_core::montecarlo::{analytic_model, analytic_roc};
use wcss_core::{DetectorKind, Scenario, Variant, WeightScheme};

/// Weighted cooperative spectrum sensing workbench.
#[derive(Parser)]
#[command(name = "sense", version)]
struct Cli {
    /// Worker threads for Monte Carlo (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file; reference defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value [unit]` entry, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let text = match &self.config {
            Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            None => String::new(),
        };
        let mut s = parse_with_overrides(&text, &self.set)?;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        Ok(s)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo ROC of one detector, with its analytic overlay.
    Roc {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_parser = parse_detector)]
        detector: DetectorKind,
        #[arg(long, value_parser = parse_weights, default_value = "paper")]
        weights: WeightScheme,
        #[arg(long, default_value_t = 20_000)]
        trials: usize,
        #[arg(long, default_value_t = 99)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// SNR map over a square ground grid.
    Heatmap {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = Grid::default().extent)]
        extent: f64,
        #[arg(long, default_value_t = Grid::default().cells)]
        cells: usize,
        #[arg(long, default_value_t = 0.0)]
        z: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named experiment preset.
    Preset {
        #[arg(long, value_parser = parse_preset)]
        name: Preset,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = RunOptions::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = RunOptions::default().points)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analytic Pf/Pd at given thresholds, as ROC CSV.
    Analytic {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_parser = parse_detector)]
        detector: DetectorKind,
        #[arg(long, value_parser = parse_weights, default_value = "paper")]
        weights: WeightScheme,
        /// `start:stop:n` or a comma-separated list of thresholds.
        #[arg(long = "tau-grid")]
        tau_grid: String,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the fully resolved scenario file.
    Config {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

fn parse_detector(s: &str) -> Result<DetectorKind, String> {
    DetectorKind::from_name(s).ok_or_else(|| format!("unknown detector {s:?} (wed, wevd)"))
}

fn parse_weights(s: &str) -> Result<WeightScheme, String> {
    WeightScheme::from_name(s).ok_or_else(|| format!("unknown weighting {s:?} (paper, uniform)"))
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
    Preset::from_name(s).ok_or_else(|| format!("unknown preset {s:?} ({})", names.join(", ")))
}

fn tau_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || anyhow::anyhow!("bad --tau-grid {spec:?}: expected start:stop:n or a comma list");
    let mut taus: Vec<f64> = if let [a, b, n] = spec.split(':').collect::<Vec<_>>()[..] {
        let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n < 2 {
            bail!("--tau-grid needs at least two points");
        }
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    } else {
        spec.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if taus.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        bail!("thresholds must be finite and nonnegative");
    }
    taus.sort_by(|a, b| b.total_cmp(a));
    Ok(taus)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.cmd {
        Cmd::Roc { scenario, detector, weights, trials, points, out } => {
            let s = scenario.load()?;
            let opts = RunOptions { trials, points, ..RunOptions::default() };
            for f in write_rocs(&out, "roc_", &s, &[Variant::new(detector, weights)], &opts, &[])? {
                println!("{}", f.display());
            }
        }
        Cmd::Heatmap { scenario, extent, cells, z, out } => {
            let s = scenario.load()?;
            println!("{}", write_heatmap(&out, "heatmap.csv", &s, &Grid { extent, cells, z }, &[])?.display());
        }
        Cmd::Preset { name, scenario, trials, points, out } => {
            let s = scenario.load()?;
            let opts = RunOptions { trials, points, ..RunOptions::default() };
            for f in run_preset(name, &s, &opts, &out)? {
                println!("{}", f.display());
            }
        }
        Cmd::Analytic { scenario, detector, weights, tau_grid: spec, out } => {
            let s = scenario.load()?;
            let taus = tau_grid(&spec)?;
            let model = analytic_model(&s, detector, weights, s.seed)?;
            let c = analytic_roc(&s, &model, weights, &taus, s.seed)?;
            match out {
                Some(dir) => println!("{}", write_with_meta(&dir, &format!("analytic_{detector}_{weights}.csv"), &roc_csv(&c), &roc_meta(&c, &[]))?.display()),
                None => std::io::stdout().write_all(roc_csv(&c).as_bytes())?,
            }
        }
        Cmd::Config { scenario } => print!("{}", emit_config(&scenario.load()?)),
    }
    Ok(())
}

/// One line, `sense: error kind=<kind> [key=<key> at=<where>] msg=<quoted>`.
fn error_line(e: &anyhow::Error) -> String {
    if let Some(c) = e.downcast_ref::<ConfigError>() {
        return format!("sense: error kind=config key={} at={:?} msg={:?}", c.key, c.origin.to_string(), c.message);
    }
    let kind = match e.downcast_ref::<wcss_core::Error>() {
        Some(w) => w.kind(),
        None if e.chain().any(|c| c.is::<std::io::Error>()) => "io",
        None => "usage",
    };
    format!("sense: error kind={kind} msg={:?}", format!("{e:#}"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}
