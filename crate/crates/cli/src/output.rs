//! CSV bodies, metadata sidecars and a schema linter for both.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use wcss_core::scenario::Heatmap;
use wcss_core::RocCurve;

pub const ROC_HEADER: &str = "tau,pf,pf_ci,pd,pd_ci";
pub const HEATMAP_CORNER: &str = "y\\x";

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:?}")
    }
}

pub fn roc_csv(c: &RocCurve) -> String {
    let mut s = String::from(ROC_HEADER);
    s.push('\n');
    for p in &c.points {
        s.push_str(&[p.tau, p.pf, p.pf_ci, p.pd, p.pd_ci].map(num).join(","));
        s.push('\n');
    }
    s
}

/// `y\x` corner, x coordinates across, y coordinates down, dB body.
/// A cell at the array itself is written as `nan`.
pub fn heatmap_csv(h: &Heatmap) -> String {
    let mut s = String::from(HEATMAP_CORNER);
    for x in &h.xs {
        s.push(',');
        s.push_str(&num(*x));
    }
    s.push('\n');
    for (r, y) in h.ys.iter().enumerate() {
        s.push_str(&num(*y));
        for c in 0..h.xs.len() {
            s.push(',');
            s.push_str(&num(h.at(r, c)));
        }
        s.push('\n');
    }
    s
}

pub fn roc_meta(c: &RocCurve, extra: &[(String, String)]) -> String {
    let m = &c.meta;
    let mut lines = vec![
        format!("source = {}", m.source),
        format!("detector = {}", m.detector),
        format!("weights = {}", m.weights),
        format!("trials = {}", m.trials),
        format!("seed = {}", m.seed),
        format!("scenario_digest = {}", m.digest),
    ];
    lines.extend(m.notes.iter().chain(extra).map(|(k, v)| format!("{k} = {v}")));
    lines.join("\n") + "\n"
}

/// Write `body` to `dir/name` and `meta` to `dir/name.meta`.
pub fn write_with_meta(dir: &Path, name: &str, body: &str, meta: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, body)?;
    fs::write(dir.join(format!("{name}.meta")), meta)?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("row {row}: {message}")]
pub struct LintError {
    /// 1-based, the header is row 1.
    pub row: usize,
    pub message: String,
}

fn lint_err<T>(row: usize, message: impl Into<String>) -> Result<T, LintError> {
    Err(LintError { row, message: message.into() })
}

fn rows(text: &str) -> Result<Vec<&str>, LintError> {
    if !text.ends_with('\n') {
        return lint_err(text.lines().count(), "file must end with a newline");
    }
    let rows: Vec<&str> = text.split('\n').collect();
    let rows = &rows[..rows.len() - 1];
    if rows.iter().any(|r| r.ends_with('\r')) {
        return lint_err(1, "rows must end in a bare newline");
    }
    Ok(rows.to_vec())
}

fn field(row: usize, s: &str) -> Result<f64, LintError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => lint_err(row, format!("{s:?} is not a finite number")),
    }
}

/// Check column names, numeric ranges and the descending threshold order.
pub fn lint_roc(text: &str) -> Result<usize, LintError> {
    let rows = rows(text)?;
    if rows.first() != Some(&ROC_HEADER) {
        return lint_err(1, format!("header must be {ROC_HEADER:?}"));
    }
    if rows.len() < 2 {
        return lint_err(1, "no data rows");
    }
    let mut prev_tau = f64::INFINITY;
    for (i, r) in rows.iter().enumerate().skip(1) {
        let row = i + 1;
        let v = r.split(',').map(|s| field(row, s)).collect::<Result<Vec<_>, _>>()?;
        let [tau, pf, pf_ci, pd, pd_ci] = v[..] else {
            return lint_err(row, format!("expected 5 columns, got {}", v.len()));
        };
        if tau < 0.0 {
            return lint_err(row, "tau is negative");
        }
        if tau > prev_tau {
            return lint_err(row, "tau must not increase down the file");
        }
        prev_tau = tau;
        for (name, p) in [("pf", pf), ("pd", pd)] {
            if !(0.0..=1.0).contains(&p) {
                return lint_err(row, format!("{name} = {p} outside [0, 1]"));
            }
        }
        for (name, c) in [("pf_ci", pf_ci), ("pd_ci", pd_ci)] {
            if !(0.0..=0.5).contains(&c) {
                return lint_err(row, format!("{name} = {c} outside [0, 0.5]"));
            }
        }
    }
    Ok(rows.len() - 1)
}

/// Check the heatmap layout; `nan` is allowed only in the body.
pub fn lint_heatmap(text: &str) -> Result<(usize, usize), LintError> {
    let rows = rows(text)?;
    let Some(head) = rows.first() else {
        return lint_err(1, "empty file");
    };
    let mut cols = head.split(',');
    if cols.next() != Some(HEATMAP_CORNER) {
        return lint_err(1, format!("first header cell must be {HEATMAP_CORNER:?}"));
    }
    let xs = cols.map(|s| field(1, s)).collect::<Result<Vec<_>, _>>()?;
    if xs.is_empty() || rows.len() < 2 {
        return lint_err(1, "grid must have at least one cell");
    }
    for (i, r) in rows.iter().enumerate().skip(1) {
        let row = i + 1;
        let cells: Vec<&str> = r.split(',').collect();
        if cells.len() != xs.len() + 1 {
            return lint_err(row, format!("expected {} columns, got {}", xs.len() + 1, cells.len()));
        }
        field(row, cells[0])?;
        for c in &cells[1..] {
            if *c != "nan" {
                field(row, c)?;
            }
        }
    }
    Ok((rows.len() - 1, xs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roc_lint_catches_ranges() {
        assert_eq!(lint_roc("tau,pf,pf_ci,pd,pd_ci\n1.0,0.5,0.01,0.7,0.01\n"), Ok(1));
        assert_eq!(lint_roc("tau,pf,pf_ci,pd,pd_ci\n1.0,1.5,0.01,0.7,0.01\n").unwrap_err().row, 2);
        assert!(lint_roc("tau,pf,pf_ci,pd,pd_ci\n1.0,0.5,0.01,0.7,0.01").is_err());
        assert!(lint_roc("tau,pf,pd\n1.0,0.5,0.7\n").is_err());
        assert!(lint_roc("tau,pf,pf_ci,pd,pd_ci\n1.0,0.5,0.01,0.7,0.01\n2.0,0.4,0.01,0.6,0.01\n").is_err());
    }

    #[test]
    fn heatmap_lint() {
        assert_eq!(lint_heatmap("y\\x,0.0,1.0\n5.0,-3.0,nan\n"), Ok((1, 2)));
        assert!(lint_heatmap("y\\x,0.0,1.0\n5.0,-3.0\n").is_err());
        assert!(lint_heatmap("x,0.0\n1.0,2.0\n").is_err());
    }
}
