//! Projections of reports into small plot-ready CSV tables, with the
//! column meanings documented in a header comment line.

use crate::artifacts::fmt_f64;
use anyhow::{bail, Context, Result};
use plancklab_core::report::ReportBody;
use plancklab_core::ExperimentReport;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    RhoVsDelta,
    RhoHistogram,
    RatioVsK,
}

impl PlotKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "rho_vs_delta" => PlotKind::RhoVsDelta,
            "rho_histogram" => PlotKind::RhoHistogram,
            "ratio_vs_k" => PlotKind::RatioVsK,
            _ => bail!("unknown plot kind `{s}` (rho_vs_delta|rho_histogram|ratio_vs_k)"),
        })
    }
}

/// Reads the report back out of an artifact envelope.
pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let report = value
        .get("report")
        .cloned()
        .unwrap_or(value);
    serde_json::from_value(report).context("decoding report")
}

pub fn render(report: &ExperimentReport, kind: PlotKind) -> Result<String> {
    let mut out = String::new();
    match (kind, &report.body) {
        (PlotKind::RhoVsDelta, ReportBody::Sweep(b)) => {
            let _ = writeln!(out, "# columns: delta, rho_max (sorted by delta ascending)");
            let mut points = b.points.clone();
            points.sort_by(|a, b| a.delta.partial_cmp(&b.delta).expect("finite"));
            for p in points {
                let _ = writeln!(out, "{},{}", fmt_f64(p.delta), fmt_f64(p.rho_max));
            }
        }
        (PlotKind::RhoHistogram, _) => {
            let rhos: Vec<f64> = report.balls.iter().filter_map(|b| b.rho).collect();
            if rhos.is_empty() {
                bail!("report carries no per-ball mass ratios to histogram");
            }
            let max = rhos.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let hi = if max > 0.0 { max * (1.0 + 1e-9) } else { 1.0 };
            let bins = 20usize;
            let mut counts = vec![0usize; bins];
            for r in &rhos {
                let idx = ((r / hi) * bins as f64) as usize;
                counts[idx.min(bins - 1)] += 1;
            }
            let _ = writeln!(out, "# columns: bin_lo, bin_hi, count (rho over {} balls)", rhos.len());
            for (i, c) in counts.iter().enumerate() {
                let lo = hi * i as f64 / bins as f64;
                let up = hi * (i + 1) as f64 / bins as f64;
                let _ = writeln!(out, "{},{},{}", fmt_f64(lo), fmt_f64(up), c);
            }
        }
        (PlotKind::RatioVsK, ReportBody::HwExample(b)) => {
            let _ = writeln!(out, "# columns: k, ratio_normalized (equator: ratio/sqrt k)");
            for r in &b.rows {
                let _ = writeln!(out, "{},{}", r.k, fmt_f64(r.normalized));
            }
        }
        (kind, _) => bail!(
            "plot kind {kind:?} is incompatible with a {} report",
            report.kind.name()
        ),
    }
    Ok(out)
}
