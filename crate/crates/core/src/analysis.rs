//! Verification pipelines: local mass ratios, the Green-identity and
//! average-gradient checks, the small-mass statistics over packed nodal
//! balls, the scale sweep, large-value concentration, the highest-weight
//! example computations, the mean-value diagnostic, and the sup-norm
//! growth monitor.

use crate::eigenfunction::{EigenfunctionSpec, Family, SupQuantity};
use crate::manifold::{Manifold, Point};
use crate::packing::{find_nodal_point_with, NodalSearch, Packing};
use crate::report::*;
use crate::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Quadrature sizing. Ball rules use `radial` Gauss nodes and at least
/// `angular` uniform angular nodes (scaled up with the family band limit so
/// the densities are integrated exactly); global rules integrate band limit
/// ≤ `global_factor`·(max frequency) exactly.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadOrders {
    pub radial: u32,
    pub angular: u32,
    pub global_factor: u32,
}

impl Default for QuadOrders {
    fn default() -> Self {
        QuadOrders {
            radial: 32,
            angular: 64,
            global_factor: 4,
        }
    }
}

/// How the gradient-sup threshold is chosen in the small-mass pipeline.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ThresholdRule {
    /// Empirical (1−ε)-quantile of {g_j}: guarantees K ≥ (1−ε)J and reports
    /// the implied constant ε·T/λ².
    Quantile,
    /// Fixed threshold T = c2·λ²/ε with a supplied constant.
    Fixed { c2: f64 },
}

/// Calibrated default for the packing-radius constant a in R = aλ⁻¹:
/// the smallest round value for which every R/3 search ball contains a
/// nodal point across the implemented families.
///
/// Circle: consecutive zeros sit π/λ apart, so a ≥ 3π/2 ≈ 4.71. On a
/// 2-dimensional manifold the domain-monotonicity bound caps the inradius
/// of any nodal domain at j₀/λ with j₀ ≈ 2.4048 the first Bessel zero, so
/// a ≥ 3·j₀ ≈ 7.2 is needed and sufficient; torus modes built from
/// constructive plane-wave interference (the `full` preset near the
/// origin, and random presets near their deepest extrema) do reach
/// nodal-free balls of radius ≈ 2.1–2.4/λ, ruling out smaller constants.
/// The torus uses 7.5 rather than the sphere's 8 so that R = aλ⁻¹ stays
/// within the packing precondition R ≤ π/2 down to λ = 5.
pub fn default_packing_constant(m: Manifold) -> f64 {
    match m {
        Manifold::Circle => 5.0,
        Manifold::Torus2 => 7.5,
        Manifold::Sphere2 => 8.0,
    }
}

fn require(cond: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::BadParameter { name, reason })
    }
}

/// Ball rule sized so |u|² and |∇u|² of this family integrate exactly.
fn mass_rule(
    u: &EigenfunctionSpec,
    center: &Point,
    r: f64,
    orders: &QuadOrders,
) -> Result<crate::QuadratureRule> {
    let angular = orders.angular.max(4 * u.max_frequency() + 2);
    u.manifold().ball_rule(center, r, orders.radial, angular)
}

fn ball_mass(u: &EigenfunctionSpec, center: &Point, r: f64, orders: &QuadOrders) -> Result<f64> {
    let rule = mass_rule(u, center, r, orders)?;
    Ok(rule.integrate(|p| {
        let v = u.evaluate(p);
        v * v
    }))
}

/// ∫_B |u|² with the normalized ratio ρ = Vol(M)·mass/Vol(B) and the Case
/// I/II classification at thresholds (ε, 1/ε).
pub fn local_mass_ratio(
    u: &EigenfunctionSpec,
    p: &Point,
    r: f64,
    class_eps: f64,
    orders: &QuadOrders,
) -> Result<MassRecord> {
    require(
        class_eps > 0.0 && class_eps < 1.0,
        "class_eps",
        "classification threshold must lie in (0,1)",
    )?;
    let m = u.manifold();
    let vol_ball = m.ball_volume(r)?;
    let local_mass = ball_mass(u, p, r, orders)?;
    let unnorm_ratio = local_mass / vol_ball;
    // recomputation identity pinned to this exact expression
    let rho = local_mass * m.total_volume() / vol_ball;
    Ok(MassRecord {
        center: *p,
        radius: r,
        local_mass,
        rho,
        unnorm_ratio,
        classification: Classification::from_rho(rho, class_eps),
    })
}

/// Green-identity residual |∫|∇u|² − λ²∫|u|²|/(λ²∫|u|²) plus the
/// Cauchy–Schwarz average-gradient bound ∫|∇u| ≤ Vol(M)^{1/2}·λ·‖u‖₂.
pub fn green_identity_residual(u: &EigenfunctionSpec, orders: &QuadOrders) -> Result<GreenBody> {
    require(
        u.eigenvalue_sq() > 0.0,
        "eigenvalue",
        "Green residual requires λ² > 0",
    )?;
    let degree = (orders.global_factor * u.max_frequency()).max(8);
    let rule = u.manifold().global_rule(degree)?;
    let grad_energy = rule.integrate(|p| {
        let g = u.gradient(p).norm;
        g * g
    });
    let value_energy = rule.integrate(|p| {
        let v = u.evaluate(p);
        v * v
    });
    let avg_gradient = rule.integrate(|p| u.gradient(p).norm);
    let eigenvalue_energy = u.eigenvalue_sq() * value_energy;
    let cauchy_schwarz_bound =
        u.manifold().total_volume().sqrt() * u.lambda() * value_energy.max(0.0).sqrt();
    Ok(GreenBody {
        residual: (grad_energy - eigenvalue_energy).abs() / eigenvalue_energy,
        grad_energy,
        eigenvalue_energy,
        avg_gradient,
        cauchy_schwarz_bound,
        average_bound_holds: avg_gradient <= cauchy_schwarz_bound * (1.0 + 1e-12),
    })
}

/// Parameters shared by the packed pipelines.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PackedConfig {
    /// Packing radius constant: R = a·λ⁻¹.
    pub a: f64,
    /// Quantile fraction for ball selection.
    pub eps_frac: f64,
    /// Mass threshold for the small-mass conclusion and classification.
    pub eps_mass: f64,
    pub seed: u64,
    pub nodal_tol_factor: f64,
    pub threshold: ThresholdRule,
    pub orders: QuadOrders,
}

impl PackedConfig {
    pub fn for_manifold(m: Manifold) -> Self {
        PackedConfig {
            a: default_packing_constant(m),
            eps_frac: 0.1,
            eps_mass: 0.1,
            seed: 0,
            nodal_tol_factor: 1e-10,
            threshold: ThresholdRule::Quantile,
            orders: QuadOrders::default(),
        }
    }
}

struct PackedWorkup {
    packing: Packing,
    grad_sup_sq: Vec<f64>,
    threshold: f64,
    c2_emp: f64,
    selected: Vec<bool>,
    k: usize,
}

fn packed_workup(u: &EigenfunctionSpec, cfg: &PackedConfig) -> Result<PackedWorkup> {
    require(u.eigenvalue_sq() > 0.0, "eigenvalue", "λ² must be positive")?;
    require(
        cfg.eps_frac > 0.0 && cfg.eps_frac < 1.0,
        "eps_frac",
        "must lie in (0,1)",
    )?;
    require(
        cfg.eps_mass > 0.0 && cfg.eps_mass < 1.0,
        "eps_mass",
        "must lie in (0,1)",
    )?;
    require(cfg.a > 0.0, "a", "packing constant must be positive")?;
    let lambda = u.lambda();
    let big_r = cfg.a / lambda;
    let packing = Packing::build(u.manifold(), big_r, cfg.seed)?;
    let j = packing.len();
    let grad_sup_sq: Vec<f64> = packing
        .centers
        .iter()
        .map(|c| {
            let s = u.sup_on_ball(SupQuantity::GradientNorm, c, 2.0 * big_r / 3.0);
            s * s
        })
        .collect();
    let threshold = match cfg.threshold {
        ThresholdRule::Quantile => {
            let mut sorted = grad_sup_sq.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("gradient sups are finite"));
            let keep = (((1.0 - cfg.eps_frac) * j as f64).ceil() as usize).clamp(1, j);
            sorted[keep - 1]
        }
        ThresholdRule::Fixed { c2 } => c2 * u.eigenvalue_sq() / cfg.eps_frac,
    };
    let selected: Vec<bool> = grad_sup_sq.iter().map(|g| *g <= threshold).collect();
    let k = selected.iter().filter(|s| **s).count();
    let c2_emp = cfg.eps_frac * threshold / u.eigenvalue_sq();
    Ok(PackedWorkup {
        packing,
        grad_sup_sq,
        threshold,
        c2_emp,
        selected,
        k,
    })
}

fn packing_summary(u: &EigenfunctionSpec, p: &Packing) -> PackingSummary {
    let n = u.manifold().dimension() as i32;
    PackingSummary {
        count: p.len(),
        radius: p.radius,
        min_pairwise_distance: p.min_pairwise_distance(),
        packing_constant: p.len() as f64 / u.lambda().powi(n),
    }
}

fn mass_row(
    u: &EigenfunctionSpec,
    w: &PackedWorkup,
    idx: usize,
    nodal: Option<&NodalSearch>,
    r: f64,
    eps_mass: f64,
    orders: &QuadOrders,
    delta: Option<f64>,
) -> Result<BallRow> {
    let center = w.packing.centers[idx];
    let mut row = BallRow {
        ball_index: idx,
        center,
        big_r: w.packing.radius,
        r: None,
        grad_sup_sq: Some(w.grad_sup_sq[idx]),
        selected: w.selected[idx],
        nodal_attempted: nodal.is_some(),
        nodal_found: false,
        nodal_point: None,
        nodal_residual: None,
        local_mass: None,
        rho: None,
        unnorm_ratio: None,
        classification: None,
        chain_ok: None,
        delta,
    };
    if let Some(search) = nodal {
        if let Some(q) = search.point {
            row.nodal_found = true;
            row.nodal_point = Some(q);
            row.nodal_residual = Some(search.residual);
            let rec = local_mass_ratio(u, &q, r, eps_mass, orders)?;
            row.r = Some(r);
            row.local_mass = Some(rec.local_mass);
            row.rho = Some(rec.rho);
            row.unnorm_ratio = Some(rec.unnorm_ratio);
            row.classification = Some(rec.classification);
            // |u| ≤ sup|∇u|·d from the nodal point gives
            // mass ≤ g_j r² Vol(B); allow 1% slack for the sampled sup.
            let vol = u.manifold().ball_volume(r)?;
            row.chain_ok =
                Some(rec.local_mass <= w.grad_sup_sq[idx] * r * r * vol * 1.01 + 1e-300);
        } else {
            row.nodal_residual = Some(search.min_abs_sampled);
        }
    }
    Ok(row)
}

/// Builds the packing at R = aλ⁻¹, selects the (1−ε)-quantile subcollection
/// by inner-ball gradient sups, locates a nodal point in B(p, R/3) for each
/// selected ball, and records the local mass on B(q, δλ⁻¹).
pub fn smallmass_experiment(
    u: &EigenfunctionSpec,
    cfg: &PackedConfig,
    delta: f64,
) -> Result<ExperimentReport> {
    require(
        delta > 0.0 && delta <= cfg.a / 3.0,
        "delta",
        "requires 0 < δ ≤ a/3 so that B(q, δλ⁻¹) ⊂ B(p, 2R/3)",
    )?;
    let w = packed_workup(u, cfg)?;
    let r = delta / u.lambda();
    let mut balls = Vec::with_capacity(w.packing.len());
    let mut nodal_failures = 0;
    for idx in 0..w.packing.len() {
        let nodal = if w.selected[idx] {
            let search = find_nodal_point_with(
                u,
                &w.packing.centers[idx],
                w.packing.radius / 3.0,
                cfg.nodal_tol_factor,
            );
            if search.point.is_none() {
                nodal_failures += 1;
            }
            Some(search)
        } else {
            None
        };
        balls.push(mass_row(
            u,
            &w,
            idx,
            nodal.as_ref(),
            r,
            cfg.eps_mass,
            &cfg.orders,
            None,
        )?);
    }
    let body = smallmass_body(cfg, delta, &w, &balls, nodal_failures);
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::SmallMass,
        family: u.id(),
        manifold: u.manifold(),
        eigenvalue_sq: u.eigenvalue_sq(),
        l2_norm: u.l2_norm_exact(),
        seed: cfg.seed,
        packing: Some(packing_summary(u, &w.packing)),
        balls,
        body: ReportBody::SmallMass(body),
    })
}

fn smallmass_body(
    cfg: &PackedConfig,
    delta: f64,
    w: &PackedWorkup,
    balls: &[BallRow],
    nodal_failures: usize,
) -> SmallMassBody {
    let with_mass: Vec<&BallRow> = balls.iter().filter(|b| b.rho.is_some()).collect();
    let rho_max = with_mass
        .iter()
        .map(|b| b.rho.expect("filtered"))
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        });
    let count = with_mass.len().max(1);
    let frac_rho_small = with_mass
        .iter()
        .filter(|b| b.rho.expect("filtered") <= cfg.eps_mass)
        .count() as f64
        / count as f64;
    let frac_unnorm_small = with_mass
        .iter()
        .filter(|b| b.unnorm_ratio.expect("filtered") <= cfg.eps_mass)
        .count() as f64
        / count as f64;
    SmallMassBody {
        a: cfg.a,
        eps_frac: cfg.eps_frac,
        eps_mass: cfg.eps_mass,
        delta,
        j: w.packing.len(),
        k: w.k,
        fraction: w.k as f64 / w.packing.len() as f64,
        threshold: w.threshold,
        c2_emp: w.c2_emp,
        nodal_failures,
        rho_max,
        frac_rho_small,
        frac_unnorm_small,
        all_chains_ok: balls.iter().all(|b| b.chain_ok.unwrap_or(true)),
    }
}

/// Runs the small-mass pipeline across a decreasing list of δ values with a
/// single packing/selection/nodal workup, and fits the slope of
/// log ρ_max against log δ (the gradient-bound chain predicts slope 2).
pub fn scale_sweep(
    u: &EigenfunctionSpec,
    cfg: &PackedConfig,
    delta_list: &[f64],
) -> Result<ExperimentReport> {
    require(!delta_list.is_empty(), "delta_list", "must be non-empty")?;
    for pair in delta_list.windows(2) {
        require(
            pair[1] < pair[0],
            "delta_list",
            "must be strictly decreasing",
        )?;
    }
    require(
        delta_list.iter().all(|d| *d > 0.0 && *d <= cfg.a / 3.0),
        "delta_list",
        "every δ must satisfy 0 < δ ≤ a/3",
    )?;
    let w = packed_workup(u, cfg)?;
    let nodal: Vec<Option<NodalSearch>> = (0..w.packing.len())
        .map(|idx| {
            w.selected[idx].then(|| {
                find_nodal_point_with(
                    u,
                    &w.packing.centers[idx],
                    w.packing.radius / 3.0,
                    cfg.nodal_tol_factor,
                )
            })
        })
        .collect();
    let mut balls = Vec::new();
    let mut points = Vec::new();
    for &delta in delta_list {
        let r = delta / u.lambda();
        let mut rho_max: f64 = f64::NEG_INFINITY;
        let mut counted = 0;
        for idx in 0..w.packing.len() {
            let row = mass_row(
                u,
                &w,
                idx,
                nodal[idx].as_ref(),
                r,
                cfg.eps_mass,
                &cfg.orders,
                Some(delta),
            )?;
            if let Some(rho) = row.rho {
                rho_max = rho_max.max(rho);
                counted += 1;
            }
            balls.push(row);
        }
        require(counted > 0, "delta_list", "no ball produced a mass record")?;
        points.push(SweepPoint {
            delta,
            r,
            rho_max,
            balls_counted: counted,
        });
    }
    let slope = fit_log_slope(&points);
    let mut monotone = true;
    for pair in points.windows(2) {
        // δ decreases along the list, so ρ_max must not increase
        if pair[1].rho_max > pair[0].rho_max * (1.0 + 1e-9) {
            monotone = false;
        }
    }
    let body = SweepBody {
        a: cfg.a,
        eps_frac: cfg.eps_frac,
        eps_mass: cfg.eps_mass,
        j: w.packing.len(),
        k: w.k,
        threshold: w.threshold,
        c2_emp: w.c2_emp,
        points,
        slope,
        rho_max_monotone: monotone,
    };
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::Sweep,
        family: u.id(),
        manifold: u.manifold(),
        eigenvalue_sq: u.eigenvalue_sq(),
        l2_norm: u.l2_norm_exact(),
        seed: cfg.seed,
        packing: Some(packing_summary(u, &w.packing)),
        balls,
        body: ReportBody::Sweep(body),
    })
}

fn fit_log_slope(points: &[SweepPoint]) -> f64 {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.rho_max > 0.0)
        .map(|p| (p.delta.ln(), p.rho_max.ln()))
        .collect();
    if data.len() < 2 {
        return f64::NAN;
    }
    let n = data.len() as f64;
    let mx = data.iter().map(|d| d.0).sum::<f64>() / n;
    let my = data.iter().map(|d| d.1).sum::<f64>() / n;
    let sxy: f64 = data.iter().map(|d| (d.0 - mx) * (d.1 - my)).sum();
    let sxx: f64 = data.iter().map(|d| (d.0 - mx) * (d.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LargeValueConfig {
    pub gamma_list: Vec<f64>,
    pub eps: f64,
    pub orders: QuadOrders,
}

impl Default for LargeValueConfig {
    fn default() -> Self {
        LargeValueConfig {
            gamma_list: (1..=20).map(|i| 0.05 * i as f64).collect(),
            eps: 0.1,
            orders: QuadOrders::default(),
        }
    }
}

/// Concentration around a large-amplitude point: for each γ checks the
/// ratio at the Planck radius γλ⁻¹ against γM², and the normalized ratio
/// at the amplitude-scaled radius γλ⁻¹M^{2/n} against 1/ε. Radii beyond
/// the injectivity radius are skipped and flagged.
pub fn largevalue_experiment(
    u: &EigenfunctionSpec,
    p: &Point,
    cfg: &LargeValueConfig,
) -> Result<ExperimentReport> {
    require(u.eigenvalue_sq() > 0.0, "eigenvalue", "λ² must be positive")?;
    require(
        cfg.eps > 0.0 && cfg.eps < 1.0,
        "eps",
        "must lie in (0,1)",
    )?;
    require(!cfg.gamma_list.is_empty(), "gamma_list", "must be non-empty")?;
    let m_value = u.evaluate(p).abs();
    require(m_value > 0.0, "center", "|u(p)| must be positive")?;
    let lambda = u.lambda();
    let n = u.manifold().dimension();
    let inj = u.manifold().injectivity_radius();
    let scale = m_value.powf(2.0 / n as f64);
    let mut rows = Vec::new();
    let mut admissible: Option<f64> = None;
    for &gamma in &cfg.gamma_list {
        require(gamma > 0.0, "gamma_list", "γ must be positive")?;
        let mut row = LargeValueRow {
            gamma,
            r_planck: None,
            unnorm_planck: None,
            rho_planck: None,
            gamma_m_sq_ok: None,
            mean_value_constant: None,
            r_scaled: None,
            unnorm_scaled: None,
            rho_scaled: None,
            concentration_ok: None,
            skipped_planck: false,
            skipped_scaled: false,
        };
        let r1 = gamma / lambda;
        if r1 > inj {
            row.skipped_planck = true;
        } else {
            let rec = local_mass_ratio(u, p, r1, cfg.eps, &cfg.orders)?;
            let sup_inner = u.sup_on_ball(SupQuantity::Value, p, r1 / 2.0);
            row.r_planck = Some(r1);
            row.unnorm_planck = Some(rec.unnorm_ratio);
            row.rho_planck = Some(rec.rho);
            row.gamma_m_sq_ok = Some(rec.unnorm_ratio >= gamma * m_value * m_value);
            row.mean_value_constant = Some(rec.unnorm_ratio / (sup_inner * sup_inner));
            if rec.unnorm_ratio >= gamma * m_value * m_value {
                admissible = Some(admissible.map_or(gamma, |g: f64| g.max(gamma)));
            }
        }
        let r2 = gamma * scale / lambda;
        if r2 > inj {
            row.skipped_scaled = true;
        } else {
            let rec = local_mass_ratio(u, p, r2, cfg.eps, &cfg.orders)?;
            row.r_scaled = Some(r2);
            row.unnorm_scaled = Some(rec.unnorm_ratio);
            row.rho_scaled = Some(rec.rho);
            row.concentration_ok = Some(rec.rho >= 1.0 / cfg.eps);
        }
        rows.push(row);
    }
    let exponent = (n as f64 - 1.0) / 2.0;
    let body = LargeValueBody {
        center: *p,
        m_value,
        eps: cfg.eps,
        hormander_ratio: m_value / lambda.powf(exponent),
        rows,
        admissible_gamma: admissible,
    };
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::LargeValue,
        family: u.id(),
        manifold: u.manifold(),
        eigenvalue_sq: u.eigenvalue_sq(),
        l2_norm: u.l2_norm_exact(),
        seed: 0,
        packing: None,
        balls: Vec::new(),
        body: ReportBody::LargeValue(body),
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HwConfig {
    pub k_list: Vec<u32>,
    /// Equator mode radius factor: r = δ/k, δ ≤ 1.
    pub delta: f64,
    pub mode: HwMode,
    /// Pole mode ball radius, < π/2.
    pub r_pole: f64,
    pub orders: QuadOrders,
}

impl Default for HwConfig {
    fn default() -> Self {
        HwConfig {
            k_list: alloc::vec![16, 36, 64],
            delta: 1.0,
            mode: HwMode::Equator,
            r_pole: 0.5,
            orders: QuadOrders::default(),
        }
    }
}

/// Highest-weight example rows. Equator mode: ratio/√k over balls of radius
/// δ/k centered on the equatorial amplitude maximum, expected to sit in a
/// k-independent band. Pole mode: the measured ratio against the fitted
/// exponential ceiling C·k^{−1/2}(cos r)^{k+2}/r².
pub fn highest_weight_example(cfg: &HwConfig) -> Result<ExperimentReport> {
    require(!cfg.k_list.is_empty(), "k_list", "must be non-empty")?;
    let mut rows = Vec::new();
    let mut fitted_constant = None;
    match cfg.mode {
        HwMode::Equator => {
            require(
                cfg.delta > 0.0 && cfg.delta <= 1.0,
                "delta",
                "equator mode requires 0 < δ ≤ 1",
            )?;
            for &k in &cfg.k_list {
                let u = EigenfunctionSpec::highest_weight(k)?;
                let center = Point::sphere(
                    core::f64::consts::FRAC_PI_2,
                    core::f64::consts::PI / (2.0 * k as f64),
                );
                let r = cfg.delta / k as f64;
                let rec = local_mass_ratio(&u, &center, r, 0.1, &cfg.orders)?;
                rows.push(HwRow {
                    k,
                    r,
                    ratio: rec.unnorm_ratio,
                    normalized: rec.unnorm_ratio / (k as f64).sqrt(),
                });
            }
        }
        HwMode::Pole => {
            require(
                cfg.r_pole > 0.0 && cfg.r_pole < core::f64::consts::FRAC_PI_2,
                "r_pole",
                "pole mode requires 0 < r < π/2",
            )?;
            let r = cfg.r_pole;
            for (i, &k) in cfg.k_list.iter().enumerate() {
                let u = EigenfunctionSpec::highest_weight(k)?;
                let center = Point::sphere(0.0, 0.0);
                let rec = local_mass_ratio(&u, &center, r, 0.1, &cfg.orders)?;
                let kf = k as f64;
                if i == 0 {
                    fitted_constant =
                        Some(rec.unnorm_ratio * r * r * kf.sqrt() / r.cos().powi(k as i32 + 2));
                }
                let c = fitted_constant.expect("set on first row");
                let bound = c / kf.sqrt() * r.cos().powi(k as i32 + 2) / (r * r);
                rows.push(HwRow {
                    k,
                    r,
                    ratio: rec.unnorm_ratio,
                    normalized: bound,
                });
            }
        }
    }
    let band_factor = match cfg.mode {
        HwMode::Equator => {
            let lo = rows.iter().map(|r| r.normalized).fold(f64::INFINITY, f64::min);
            let hi = rows
                .iter()
                .map(|r| r.normalized)
                .fold(f64::NEG_INFINITY, f64::max);
            Some(hi / lo)
        }
        HwMode::Pole => None,
    };
    let first = EigenfunctionSpec::highest_weight(cfg.k_list[0])?;
    let ids: Vec<alloc::string::String> =
        cfg.k_list.iter().map(|k| k.to_string()).collect();
    let body = HwBody {
        mode: cfg.mode,
        delta: cfg.delta,
        r_pole: cfg.r_pole,
        fitted_constant,
        rows,
        band_factor,
    };
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::HwExample,
        family: alloc::format!("hw:k={}", ids.join("+")),
        manifold: Manifold::Sphere2,
        eigenvalue_sq: first.eigenvalue_sq(),
        l2_norm: first.l2_norm_exact(),
        seed: 0,
        packing: None,
        balls: Vec::new(),
        body: ReportBody::HwExample(body),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MviConfig {
    pub a: f64,
    pub seed: u64,
    pub orders: QuadOrders,
}

/// Empirical mean-value constants for |∇u|² over the packed balls:
/// C₀ⱼ = sup_{B(p_j, 2R/3)}|∇u|² · Vol(B(p_j, R)) / ∫_{B(p_j, R)}|∇u|².
/// Balls whose gradient energy is below 1e−14·λ² are skipped and flagged.
pub fn mean_value_diagnostic(
    u: &EigenfunctionSpec,
    cfg: &MviConfig,
) -> Result<ExperimentReport> {
    require(u.eigenvalue_sq() > 0.0, "eigenvalue", "λ² must be positive")?;
    let big_r = cfg.a / u.lambda();
    let packing = Packing::build(u.manifold(), big_r, cfg.seed)?;
    let vol = u.manifold().ball_volume(big_r)?;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, c) in packing.centers.iter().enumerate() {
        let sup = u.sup_on_ball(SupQuantity::GradientNorm, c, 2.0 * big_r / 3.0);
        let rule = mass_rule(u, c, big_r, &cfg.orders)?;
        let energy = rule.integrate(|p| {
            let g = u.gradient(p).norm;
            g * g
        });
        if energy < 1e-14 * u.eigenvalue_sq() {
            rows.push(MviRow {
                ball_index: i,
                c0: None,
                skipped: true,
            });
            continue;
        }
        let c0 = sup * sup * vol / energy;
        values.push(c0);
        rows.push(MviRow {
            ball_index: i,
            c0: Some(c0),
            skipped: false,
        });
    }
    require(!values.is_empty(), "a", "every ball was flat; nothing to report")?;
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let c0_median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let skipped = rows.iter().filter(|r| r.skipped).count();
    let body = MviBody {
        a: cfg.a,
        rows,
        c0_max: *sorted.last().expect("non-empty"),
        c0_median,
        skipped,
    };
    let summary = packing_summary(u, &packing);
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::Mvi,
        family: u.id(),
        manifold: u.manifold(),
        eigenvalue_sq: u.eigenvalue_sq(),
        l2_norm: u.l2_norm_exact(),
        seed: cfg.seed,
        packing: Some(summary),
        balls: Vec::new(),
        body: ReportBody::Mvi(body),
    })
}

/// Sup-norm growth monitor: global sups of |u| and |∇u| against the
/// Weyl-type ceilings λ^{(n−1)/2} and λ^{(n+1)/2}. Zonal members are
/// flagged when they saturate the sup-norm column at the constant
/// (2π)^{−1/2}.
pub fn weyl_monitor(suite: &[EigenfunctionSpec]) -> Result<ExperimentReport> {
    require(!suite.is_empty(), "suite", "must be non-empty")?;
    let mut rows = Vec::new();
    for u in suite {
        require(u.eigenvalue_sq() > 0.0, "suite", "λ² must be positive")?;
        let lambda = u.lambda();
        let n = u.manifold().dimension() as f64;
        let sup_u = u.sup_global(SupQuantity::Value);
        let sup_grad = u.sup_global(SupQuantity::GradientNorm);
        let linf_ratio = sup_u / lambda.powf((n - 1.0) / 2.0);
        let grad_ratio = sup_grad / lambda.powf((n + 1.0) / 2.0);
        let zonal_saturating = matches!(u.family(), Family::ZonalHarmonic { .. })
            && (linf_ratio * core::f64::consts::TAU.sqrt() - 1.0).abs() < 0.02;
        rows.push(WeylRow {
            family: u.id(),
            lambda,
            sup_u,
            sup_grad,
            linf_ratio,
            grad_ratio,
            zonal_saturating,
        });
    }
    let first = &suite[0];
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::Weyl,
        family: alloc::string::String::from("suite"),
        manifold: first.manifold(),
        eigenvalue_sq: first.eigenvalue_sq(),
        l2_norm: first.l2_norm_exact(),
        seed: 0,
        packing: None,
        balls: Vec::new(),
        body: ReportBody::Weyl(WeylBody { rows }),
    })
}

/// Packing-only experiment: builds the packing at R = aλ⁻¹, runs the nodal
/// search on every ball at radius R/3, verifies separation, audit-probe
/// covering and the disjoint-volume bound, and records the local mass at
/// each found nodal point with r = R/3.
pub fn pack_experiment(u: &EigenfunctionSpec, cfg: &PackedConfig) -> Result<ExperimentReport> {
    let w = packed_workup(u, cfg)?;
    let r = w.packing.radius / 3.0;
    let mut balls = Vec::with_capacity(w.packing.len());
    let mut found = 0;
    for idx in 0..w.packing.len() {
        let search = find_nodal_point_with(
            u,
            &w.packing.centers[idx],
            w.packing.radius / 3.0,
            cfg.nodal_tol_factor,
        );
        if search.point.is_some() {
            found += 1;
        }
        balls.push(mass_row(
            u,
            &w,
            idx,
            Some(&search),
            r,
            cfg.eps_mass,
            &cfg.orders,
            None,
        )?);
    }
    let probes = crate::packing::audit_probes(&w.packing);
    let max_cover = w.packing.max_covering_distance(&probes);
    let min_pair = w.packing.min_pairwise_distance();
    let total_ball_volume =
        w.packing.len() as f64 * u.manifold().ball_volume(w.packing.radius)?;
    let body = PackBody {
        j: w.packing.len(),
        nodal_found: found,
        nodal_fraction: found as f64 / w.packing.len() as f64,
        min_pairwise_distance: min_pair,
        max_audit_covering_distance: max_cover,
        covering_ok: max_cover <= 2.0 * w.packing.radius,
        volume_bound_ok: total_ball_volume
            <= u.manifold().total_volume() * (1.0 + 1e-12),
    };
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: ExperimentKind::Pack,
        family: u.id(),
        manifold: u.manifold(),
        eigenvalue_sq: u.eigenvalue_sq(),
        l2_norm: u.l2_norm_exact(),
        seed: cfg.seed,
        packing: Some(packing_summary(u, &w.packing)),
        balls,
        body: ReportBody::Pack(body),
    })
}
