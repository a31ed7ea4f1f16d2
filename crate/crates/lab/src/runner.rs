//! Pipeline dispatch: executes the configured experiment for every family,
//! evaluates the per-experiment assertions, writes artifacts, and prints a
//! one-screen summary. Families may run in parallel; reports are collected
//! in family order so artifacts are byte-stable regardless of thread count.

use crate::artifacts;
use crate::config::{EmitFormat, ExperimentConfig};
use anyhow::{Context, Result};
use plancklab_core::analysis::{self, HwConfig, LargeValueConfig, MviConfig, PackedConfig};
use plancklab_core::report::{ExperimentKind, ReportBody};
use plancklab_core::{EigenfunctionSpec, ExperimentReport, Manifold, Point, SupQuantity};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<ExperimentReport>,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

fn packed_config(cfg: &ExperimentConfig) -> PackedConfig {
    PackedConfig {
        a: cfg.params.a,
        eps_frac: cfg.params.eps_frac,
        eps_mass: cfg.params.eps_mass,
        seed: cfg.seed,
        nodal_tol_factor: cfg.params.nodal_tol_factor,
        threshold: cfg.params.threshold,
        orders: cfg.params.orders(),
    }
}

fn largevalue_center(cfg: &ExperimentConfig, u: &EigenfunctionSpec) -> Point {
    match (&cfg.params.center, cfg.manifold) {
        (Some(c), Manifold::Circle) => Point::circle(c[0]),
        (Some(c), Manifold::Torus2) => Point::torus(c[0], c[1]),
        (Some(c), Manifold::Sphere2) => Point::sphere(c[0], c[1]),
        (None, _) => u.sup_global_point(SupQuantity::Value),
    }
}

fn run_family(cfg: &ExperimentConfig, u: &EigenfunctionSpec) -> Result<ExperimentReport> {
    let report = match cfg.experiment {
        ExperimentKind::Green => {
            let body = analysis::green_identity_residual(u, &cfg.params.orders())?;
            ExperimentReport {
                schema_version: plancklab_core::report::SCHEMA_VERSION,
                kind: ExperimentKind::Green,
                family: u.id(),
                manifold: u.manifold(),
                eigenvalue_sq: u.eigenvalue_sq(),
                l2_norm: u.l2_norm_exact(),
                seed: cfg.seed,
                packing: None,
                balls: Vec::new(),
                body: ReportBody::Green(body),
            }
        }
        ExperimentKind::Pack => analysis::pack_experiment(u, &packed_config(cfg))?,
        ExperimentKind::SmallMass => {
            analysis::smallmass_experiment(u, &packed_config(cfg), cfg.params.delta)?
        }
        ExperimentKind::Sweep => {
            analysis::scale_sweep(u, &packed_config(cfg), &cfg.params.delta_list)?
        }
        ExperimentKind::LargeValue => {
            let center = largevalue_center(cfg, u);
            let lv = LargeValueConfig {
                gamma_list: cfg.params.gamma_list.clone(),
                eps: cfg.params.eps,
                orders: cfg.params.orders(),
            };
            analysis::largevalue_experiment(u, &center, &lv)?
        }
        ExperimentKind::Mvi => {
            let mv = MviConfig {
                a: cfg.params.a,
                seed: cfg.seed,
                orders: cfg.params.orders(),
            };
            analysis::mean_value_diagnostic(u, &mv)?
        }
        ExperimentKind::HwExample | ExperimentKind::Weyl => {
            unreachable!("aggregated experiments are dispatched separately")
        }
    };
    Ok(report)
}

/// Executes the configured experiment and writes artifacts. Errors out of
/// the pipelines are precondition violations (status 1 territory);
/// assertion failures are reported in the outcome (status 2 territory).
pub fn run(cfg: &ExperimentConfig, specs: &[EigenfunctionSpec]) -> Result<RunOutcome> {
    let reports: Vec<ExperimentReport> = match cfg.experiment {
        ExperimentKind::HwExample => {
            let hw = HwConfig {
                k_list: cfg.params.k_list.clone(),
                delta: cfg.params.hw_delta,
                mode: cfg.params.hw_mode,
                r_pole: cfg.params.r_pole,
                orders: cfg.params.orders(),
            };
            vec![analysis::highest_weight_example(&hw)?]
        }
        ExperimentKind::Weyl => vec![analysis::weyl_monitor(specs)?],
        _ => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .context("building thread pool")?;
            pool.install(|| {
                specs
                    .par_iter()
                    .map(|u| run_family(cfg, u))
                    .collect::<Result<Vec<_>>>()
            })?
        }
    };

    let mut assertions = Vec::new();
    for report in &reports {
        assertions.extend(assertions_for(report));
    }

    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let mut artifacts_out = Vec::new();
    for report in &reports {
        for fmt in &cfg.emit {
            let path = match fmt {
                EmitFormat::Json => artifacts::write_json(&cfg.out_dir, cfg, report)?,
                EmitFormat::Csv => artifacts::write_csv(&cfg.out_dir, cfg, report)?,
            };
            artifacts_out.push(path);
        }
    }
    Ok(RunOutcome {
        reports,
        assertions,
        artifacts: artifacts_out,
    })
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Assertion {
    Assertion {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// The built-in assertions each experiment promises (quantile contract,
/// chain inequalities, bound shapes); failures flip the exit status to 2.
fn assertions_for(report: &ExperimentReport) -> Vec<Assertion> {
    let fam = &report.family;
    let mut out = Vec::new();
    match &report.body {
        ReportBody::Green(b) => {
            let tol = if report.manifold == Manifold::Circle {
                1e-12
            } else {
                1e-6
            };
            out.push(check(
                format!("green residual [{fam}]"),
                b.residual <= tol,
                format!("residual {:.3e} ≤ {tol:.0e}", b.residual),
            ));
            out.push(check(
                format!("average gradient bound [{fam}]"),
                b.average_bound_holds,
                format!("∫|∇u| = {:.6} ≤ {:.6}", b.avg_gradient, b.cauchy_schwarz_bound),
            ));
        }
        ReportBody::Pack(b) => {
            out.push(check(
                format!("pairwise separation [{fam}]"),
                b.min_pairwise_distance >= 2.0 * report.packing.as_ref().map_or(0.0, |p| p.radius),
                format!("min pairwise {:.6}", b.min_pairwise_distance),
            ));
            out.push(check(
                format!("2R covering [{fam}]"),
                b.covering_ok,
                format!("max audit covering distance {:.6}", b.max_audit_covering_distance),
            ));
            out.push(check(
                format!("volume bound [{fam}]"),
                b.volume_bound_ok,
                format!("J = {}", b.j),
            ));
            out.push(check(
                format!("nodal coverage [{fam}]"),
                b.nodal_fraction == 1.0,
                format!("{}/{} balls", b.nodal_found, b.j),
            ));
        }
        ReportBody::SmallMass(b) => {
            out.push(check(
                format!("selection fraction [{fam}]"),
                b.k as f64 >= ((1.0 - b.eps_frac) * b.j as f64).ceil(),
                format!("K/J = {}/{}", b.k, b.j),
            ));
            out.push(check(
                format!("gradient chain bound [{fam}]"),
                b.all_chains_ok,
                "mass ≤ g_j·r²·Vol(B) per selected ball",
            ));
        }
        ReportBody::Sweep(b) => {
            out.push(check(
                format!("selection fraction [{fam}]"),
                b.k as f64 >= ((1.0 - b.eps_frac) * b.j as f64).ceil(),
                format!("K/J = {}/{}", b.k, b.j),
            ));
            out.push(check(
                format!("rho_max monotone in delta [{fam}]"),
                b.rho_max_monotone,
                "",
            ));
            // quadratic bound shape from the gradient chain:
            // ρ_max ≤ Vol(M)·C₂_emp·δ²/ε on every point
            let vol = report.manifold.total_volume();
            let bound_ok = b.points.iter().all(|p| {
                p.rho_max <= vol * b.c2_emp * p.delta * p.delta / b.eps_frac * 1.01
            });
            out.push(check(
                format!("quadratic bound shape [{fam}]"),
                bound_ok,
                format!("slope {:.3}", b.slope),
            ));
        }
        ReportBody::LargeValue(b) => {
            out.push(check(
                format!("admissible gamma exists [{fam}]"),
                b.admissible_gamma.is_some(),
                format!("admissible γ = {:?}, M = {:.4}", b.admissible_gamma, b.m_value),
            ));
            // mass monotonicity between the two radii of each γ row
            let mono = b.rows.iter().all(|r| {
                match (r.r_planck, r.r_scaled, r.unnorm_planck, r.unnorm_scaled) {
                    (Some(r1), Some(r2), Some(u1), Some(u2)) if r2 >= r1 => {
                        let m = report.manifold;
                        let m1 = u1 * m.ball_volume(r1).unwrap_or(f64::NAN);
                        let m2 = u2 * m.ball_volume(r2).unwrap_or(f64::NAN);
                        m2 >= m1 * (1.0 - 1e-9)
                    }
                    _ => true,
                }
            });
            out.push(check(
                format!("mass monotone in radius [{fam}]"),
                mono,
                "∫_B(γλ⁻¹M^{2/n}) ≥ ∫_B(γλ⁻¹)",
            ));
        }
        ReportBody::HwExample(b) => match b.band_factor {
            Some(f) => out.push(check(
                format!("equator band factor [{fam}]"),
                f <= 2.0,
                format!("ratio/√k varies by ×{f:.3}"),
            )),
            None => {
                let decay = b.rows.len() < 2
                    || b.rows.last().unwrap().ratio < 0.1 * b.rows[0].ratio;
                let bounded = b
                    .rows
                    .iter()
                    .skip(1)
                    .all(|r| r.ratio <= r.normalized);
                out.push(check(
                    format!("pole ceiling [{fam}]"),
                    bounded && decay,
                    "ratio ≤ C·k^{-1/2}(cos r)^{k+2}/r² and decays",
                ));
            }
        },
        ReportBody::Mvi(b) => {
            out.push(check(
                format!("mean-value constants ≥ 1 [{fam}]"),
                b.rows.iter().all(|r| r.skipped || r.c0.unwrap_or(0.0) >= 1.0),
                format!("max {:.3}, median {:.3}", b.c0_max, b.c0_median),
            ));
        }
        ReportBody::Weyl(b) => {
            out.push(check(
                "weyl columns bounded",
                b.rows.iter().all(|r| r.linf_ratio <= 2.0 && r.grad_ratio <= 2.0),
                format!("{} rows", b.rows.len()),
            ));
            let zonal_rows: Vec<_> = b.rows.iter().filter(|r| r.family.starts_with("zonal")).collect();
            if !zonal_rows.is_empty() {
                out.push(check(
                    "zonal saturates sup-norm column",
                    zonal_rows.iter().all(|r| r.zonal_saturating),
                    format!("{} zonal rows", zonal_rows.len()),
                ));
            }
        }
    }
    out
}

/// One-screen summary.
pub fn print_summary(cfg: &ExperimentConfig, outcome: &RunOutcome) {
    println!(
        "{} v{} | experiment {} on the {} | seed {}",
        crate::TOOL_NAME,
        crate::TOOL_VERSION,
        cfg.experiment.name(),
        cfg.manifold.name(),
        cfg.seed
    );
    for report in &outcome.reports {
        match &report.body {
            ReportBody::Green(b) => println!(
                "  {}: residual {:.3e}, ∫|∇u| {:.4} ≤ {:.4}",
                report.family, b.residual, b.avg_gradient, b.cauchy_schwarz_bound
            ),
            ReportBody::Pack(b) => println!(
                "  {}: J = {}, nodal {}/{}, min sep {:.5}, max cover {:.5}",
                report.family, b.j, b.nodal_found, b.j, b.min_pairwise_distance, b.max_audit_covering_distance
            ),
            ReportBody::SmallMass(b) => println!(
                "  {}: J = {}, K = {}, K/J = {:.3}, rho_max {:.4e}, frac(rho ≤ ε) {:.3}, C2_emp {:.4}",
                report.family,
                b.j,
                b.k,
                b.fraction,
                b.rho_max.unwrap_or(f64::NAN),
                b.frac_rho_small,
                b.c2_emp
            ),
            ReportBody::Sweep(b) => {
                let pts: Vec<String> = b
                    .points
                    .iter()
                    .map(|p| format!("δ={} ρmax={:.3e}", p.delta, p.rho_max))
                    .collect();
                println!(
                    "  {}: J = {}, K = {}, slope {:.3} | {}",
                    report.family,
                    b.j,
                    b.k,
                    b.slope,
                    pts.join(", ")
                );
            }
            ReportBody::LargeValue(b) => println!(
                "  {}: M = {:.4} at {:?}, admissible γ = {:?}, Hörmander ratio {:.4}",
                report.family, b.m_value, b.center, b.admissible_gamma, b.hormander_ratio
            ),
            ReportBody::HwExample(b) => {
                for r in &b.rows {
                    println!(
                        "  k = {}: r = {:.5}, ratio = {:.6e}, normalized = {:.6e}",
                        r.k, r.r, r.ratio, r.normalized
                    );
                }
            }
            ReportBody::Mvi(b) => println!(
                "  {}: C0 max {:.3}, median {:.3}, skipped {}",
                report.family, b.c0_max, b.c0_median, b.skipped
            ),
            ReportBody::Weyl(b) => {
                for r in &b.rows {
                    println!(
                        "  {}: sup|u|/λ^((n-1)/2) = {:.4}, sup|∇u|/λ^((n+1)/2) = {:.4}{}",
                        r.family,
                        r.linf_ratio,
                        r.grad_ratio,
                        if r.zonal_saturating { "  [saturating]" } else { "" }
                    );
                }
            }
        }
    }
    for a in &outcome.assertions {
        println!(
            "  assert {}: {} {}",
            a.name,
            if a.passed { "PASS" } else { "FAIL" },
            a.detail
        );
    }
    for p in &outcome.artifacts {
        println!("  wrote {}", p.display());
    }
}
