//! Artifact emission. JSON carries the full schema-versioned report inside
//! an envelope with the resolved config and tool version; CSV flattens the
//! per-ball table (or the kind-specific rows) with shortest round-trip
//! decimals, fixed column order, and LF line endings, so identical configs
//! produce byte-identical files.

use crate::config::ExperimentConfig;
use crate::{TOOL_NAME, TOOL_VERSION};
use anyhow::{Context, Result};
use plancklab_core::report::{ExperimentKind, ReportBody};
use plancklab_core::{ExperimentReport, Point};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub config: &'a ExperimentConfig,
    pub report: &'a ExperimentReport,
}

/// Shortest decimal that round-trips to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn coords(p: &Point) -> (String, String) {
    let (c1, c2) = p.coords();
    (fmt_f64(c1), c2.map(fmt_f64).unwrap_or_default())
}

fn point_opt(p: Option<&Point>) -> (String, String) {
    match p {
        Some(p) => coords(p),
        None => (String::new(), String::new()),
    }
}

pub fn family_slug(family: &str) -> String {
    let mut out = String::new();
    for ch in family.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

pub fn artifact_basename(kind: ExperimentKind, family: &str) -> String {
    format!("{}_{}", kind.name(), family_slug(family))
}

pub fn write_json(
    dir: &Path,
    config: &ExperimentConfig,
    report: &ExperimentReport,
) -> Result<PathBuf> {
    let path = dir.join(format!(
        "{}.json",
        artifact_basename(report.kind, &report.family)
    ));
    let envelope = Envelope {
        tool: TOOL_NAME,
        tool_version: TOOL_VERSION,
        config,
        report,
    };
    let mut text = serde_json::to_string_pretty(&envelope).context("serializing report")?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Pinned per-ball columns, followed by the extra columns this tool
/// carries; kinds without ball tables get their own fixed layouts.
pub fn render_csv(config: &ExperimentConfig, report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {TOOL_NAME} v{TOOL_VERSION}");
    let _ = writeln!(
        out,
        "# experiment={} manifold={} family={} seed={}",
        report.kind.name(),
        report.manifold.name(),
        report.family,
        config.seed
    );
    match &report.body {
        ReportBody::Green(b) => {
            let _ = writeln!(
                out,
                "family,lambda_sq,residual,grad_energy,avg_gradient,cauchy_schwarz_bound,average_bound_holds"
            );
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                report.family,
                fmt_f64(report.eigenvalue_sq),
                fmt_f64(b.residual),
                fmt_f64(b.grad_energy),
                fmt_f64(b.avg_gradient),
                fmt_f64(b.cauchy_schwarz_bound),
                u8::from(b.average_bound_holds)
            );
        }
        ReportBody::LargeValue(b) => {
            let _ = writeln!(
                out,
                "gamma,r_planck,unnorm_planck,rho_planck,gamma_m_sq_ok,mean_value_constant,r_scaled,unnorm_scaled,rho_scaled,concentration_ok,skipped_planck,skipped_scaled"
            );
            for r in &b.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_f64(r.gamma),
                    fmt_opt(r.r_planck),
                    fmt_opt(r.unnorm_planck),
                    fmt_opt(r.rho_planck),
                    r.gamma_m_sq_ok.map(|b| u8::from(b).to_string()).unwrap_or_default(),
                    fmt_opt(r.mean_value_constant),
                    fmt_opt(r.r_scaled),
                    fmt_opt(r.unnorm_scaled),
                    fmt_opt(r.rho_scaled),
                    r.concentration_ok.map(|b| u8::from(b).to_string()).unwrap_or_default(),
                    u8::from(r.skipped_planck),
                    u8::from(r.skipped_scaled)
                );
            }
        }
        ReportBody::HwExample(b) => {
            let _ = writeln!(out, "k,r,ratio,normalized");
            for r in &b.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.k,
                    fmt_f64(r.r),
                    fmt_f64(r.ratio),
                    fmt_f64(r.normalized)
                );
            }
        }
        ReportBody::Mvi(b) => {
            let _ = writeln!(out, "ball_index,c0,skipped");
            for r in &b.rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    r.ball_index,
                    fmt_opt(r.c0),
                    u8::from(r.skipped)
                );
            }
        }
        ReportBody::Weyl(b) => {
            let _ = writeln!(
                out,
                "family,lambda,sup_u,sup_grad,linf_ratio,grad_ratio,zonal_saturating"
            );
            for r in &b.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.family,
                    fmt_f64(r.lambda),
                    fmt_f64(r.sup_u),
                    fmt_f64(r.sup_grad),
                    fmt_f64(r.linf_ratio),
                    fmt_f64(r.grad_ratio),
                    u8::from(r.zonal_saturating)
                );
            }
        }
        // packing-based kinds share the pinned per-ball table
        _ => {
            let _ = writeln!(
                out,
                "ball_index,c1,c2,R,r,g_j,selected,nodal_found,q1,q2,local_mass,rho,classification,unnorm_ratio,nodal_residual,delta"
            );
            for b in &report.balls {
                let (c1, c2) = coords(&b.center);
                let (q1, q2) = point_opt(b.nodal_point.as_ref());
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    b.ball_index,
                    c1,
                    c2,
                    fmt_f64(b.big_r),
                    fmt_opt(b.r),
                    fmt_opt(b.grad_sup_sq),
                    u8::from(b.selected),
                    u8::from(b.nodal_found),
                    q1,
                    q2,
                    fmt_opt(b.local_mass),
                    fmt_opt(b.rho),
                    b.classification.map(|c| c.name()).unwrap_or(""),
                    fmt_opt(b.unnorm_ratio),
                    fmt_opt(b.nodal_residual),
                    fmt_opt(b.delta)
                );
            }
        }
    }
    out
}

pub fn write_csv(
    dir: &Path,
    config: &ExperimentConfig,
    report: &ExperimentReport,
) -> Result<PathBuf> {
    let path = dir.join(format!(
        "{}.csv",
        artifact_basename(report.kind, &report.family)
    ));
    std::fs::write(&path, render_csv(config, report))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_roundtrip_formatting() {
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(1.0), "1.0");
        assert_eq!(fmt_f64(3e-41), "3e-41");
        let x = 0.1f64 + 0.2;
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn slugs_are_filesystem_safe() {
        assert_eq!(family_slug("torus:N=25,preset=random,seed=7"), "torus-N-25-preset-random-seed-7");
        assert_eq!(family_slug("cos:k=20"), "cos-k-20");
    }
}
