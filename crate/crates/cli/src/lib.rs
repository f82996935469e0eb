//! Scenario files, experiment presets and CSV output for the `sense` tool.

pub mod config;
pub mod output;
pub mod preset;

pub use config::{emit_config, parse_config, parse_with_overrides, ConfigError};
pub use output::{lint_heatmap, lint_roc, LintError};
pub use preset::{run_preset, Preset, RunOptions};
