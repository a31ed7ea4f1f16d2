//! Structured experiment results, serializable to JSON (schema-versioned)
//! and flattenable to per-ball CSV tables.

use crate::manifold::{Manifold, Point};
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Green,
    Pack,
    #[serde(rename = "smallmass")]
    SmallMass,
    Sweep,
    #[serde(rename = "largevalue")]
    LargeValue,
    #[serde(rename = "hwexample")]
    HwExample,
    Mvi,
    Weyl,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Green => "green",
            ExperimentKind::Pack => "pack",
            ExperimentKind::SmallMass => "smallmass",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::LargeValue => "largevalue",
            ExperimentKind::HwExample => "hwexample",
            ExperimentKind::Mvi => "mvi",
            ExperimentKind::Weyl => "weyl",
        }
    }
}

/// Local-mass classification against the equidistribution benchmark ρ = 1,
/// with thresholds (ε, 1/ε).
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    CaseI_small,
    CaseII_large,
    Neutral,
}

impl Classification {
    pub fn from_rho(rho: f64, eps: f64) -> Self {
        if rho <= eps {
            Classification::CaseI_small
        } else if rho >= 1.0 / eps {
            Classification::CaseII_large
        } else {
            Classification::Neutral
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::CaseI_small => "CaseI_small",
            Classification::CaseII_large => "CaseII_large",
            Classification::Neutral => "Neutral",
        }
    }
}

/// Local mass of |u|² over one geodesic ball.
///
/// `rho` is normalized so perfect equidistribution of a unit-norm function
/// gives ρ = 1: ρ = Vol(M)·local_mass/Vol(B). `unnorm_ratio` is the plain
/// local_mass/Vol(B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRecord {
    pub center: Point,
    pub radius: f64,
    pub local_mass: f64,
    pub rho: f64,
    pub unnorm_ratio: f64,
    pub classification: Classification,
}

/// One row of a packing-based experiment; fields that a given experiment
/// does not compute stay `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    pub ball_index: usize,
    pub center: Point,
    /// Packing radius R.
    pub big_r: f64,
    /// Small-ball radius r (when a mass was computed).
    pub r: Option<f64>,
    /// g_j = sup over B(p_j, 2R/3) of |∇u|².
    pub grad_sup_sq: Option<f64>,
    pub selected: bool,
    pub nodal_attempted: bool,
    pub nodal_found: bool,
    pub nodal_point: Option<Point>,
    pub nodal_residual: Option<f64>,
    pub local_mass: Option<f64>,
    pub rho: Option<f64>,
    pub unnorm_ratio: Option<f64>,
    pub classification: Option<Classification>,
    /// Per-ball restatement of the gradient-bound chain:
    /// local_mass ≤ g_j · r² · Vol(B) (with 1% sampling slack).
    pub chain_ok: Option<bool>,
    /// Sweep runs tag each row with its δ.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingSummary {
    pub count: usize,
    pub radius: f64,
    pub min_pairwise_distance: f64,
    /// Empirical packing-count constant J/λⁿ.
    pub packing_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenBody {
    /// |∫|∇u|² − λ²∫|u|²| / (λ²∫|u|²)
    pub residual: f64,
    pub grad_energy: f64,
    pub eigenvalue_energy: f64,
    /// ∫_M |∇u| dVol
    pub avg_gradient: f64,
    /// Vol(M)^{1/2} · λ · ‖u‖₂
    pub cauchy_schwarz_bound: f64,
    pub average_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackBody {
    pub j: usize,
    pub nodal_found: usize,
    pub nodal_fraction: f64,
    pub min_pairwise_distance: f64,
    pub max_audit_covering_distance: f64,
    pub covering_ok: bool,
    pub volume_bound_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallMassBody {
    pub a: f64,
    pub eps_frac: f64,
    pub eps_mass: f64,
    pub delta: f64,
    pub j: usize,
    pub k: usize,
    pub fraction: f64,
    /// Gradient-sup threshold T (quantile or fixed).
    pub threshold: f64,
    /// Implied constant ε·T/λ².
    pub c2_emp: f64,
    pub nodal_failures: usize,
    pub rho_max: Option<f64>,
    /// Fraction of selected balls with found nodal point whose ρ ≤ ε_mass.
    pub frac_rho_small: f64,
    /// Fraction with the unnormalized paper ratio ≤ ε_mass.
    pub frac_unnorm_small: f64,
    pub all_chains_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub delta: f64,
    pub r: f64,
    pub rho_max: f64,
    pub balls_counted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBody {
    pub a: f64,
    pub eps_frac: f64,
    pub eps_mass: f64,
    pub j: usize,
    pub k: usize,
    pub threshold: f64,
    pub c2_emp: f64,
    pub points: Vec<SweepPoint>,
    /// Least-squares slope of log ρ_max against log δ.
    pub slope: f64,
    pub rho_max_monotone: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargeValueRow {
    pub gamma: f64,
    pub r_planck: Option<f64>,
    pub unnorm_planck: Option<f64>,
    pub rho_planck: Option<f64>,
    /// Unnormalized ratio at r = γλ⁻¹ is ≥ γM².
    pub gamma_m_sq_ok: Option<bool>,
    /// Measured mean-value constant: unnorm / sup_{B(r/2)}|u|².
    pub mean_value_constant: Option<f64>,
    pub r_scaled: Option<f64>,
    pub unnorm_scaled: Option<f64>,
    pub rho_scaled: Option<f64>,
    /// ρ at the M-scaled radius is ≥ 1/ε.
    pub concentration_ok: Option<bool>,
    pub skipped_planck: bool,
    pub skipped_scaled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeValueBody {
    pub center: Point,
    pub m_value: f64,
    pub eps: f64,
    /// sup|u| ceiling monitor: M / λ^{(n−1)/2}.
    pub hormander_ratio: f64,
    pub rows: Vec<LargeValueRow>,
    /// Largest γ in the list with unnorm(γλ⁻¹) ≥ γM².
    pub admissible_gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HwMode {
    Equator,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HwRow {
    pub k: u32,
    pub r: f64,
    pub ratio: f64,
    /// Equator mode: ratio/√k; pole mode: the fitted exponential bound.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HwBody {
    pub mode: HwMode,
    pub delta: f64,
    pub r_pole: f64,
    /// Pole mode: constant fitted on the first k.
    pub fitted_constant: Option<f64>,
    pub rows: Vec<HwRow>,
    pub band_factor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MviRow {
    pub ball_index: usize,
    pub c0: Option<f64>,
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MviBody {
    pub a: f64,
    pub rows: Vec<MviRow>,
    pub c0_max: f64,
    pub c0_median: f64,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub family: String,
    pub lambda: f64,
    pub sup_u: f64,
    pub sup_grad: f64,
    /// sup|u| / λ^{(n−1)/2}
    pub linf_ratio: f64,
    /// sup|∇u| / λ^{(n+1)/2}
    pub grad_ratio: f64,
    pub zonal_saturating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylBody {
    pub rows: Vec<WeylRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum ReportBody {
    Green(GreenBody),
    Pack(PackBody),
    #[serde(rename = "smallmass")]
    SmallMass(SmallMassBody),
    Sweep(SweepBody),
    #[serde(rename = "largevalue")]
    LargeValue(LargeValueBody),
    #[serde(rename = "hwexample")]
    HwExample(HwBody),
    Mvi(MviBody),
    Weyl(WeylBody),
}

/// Structured result of one verification pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub family: String,
    pub manifold: Manifold,
    pub eigenvalue_sq: f64,
    pub l2_norm: f64,
    pub seed: u64,
    pub packing: Option<PackingSummary>,
    pub balls: Vec<BallRow>,
    pub body: ReportBody,
}

impl ExperimentReport {
    /// Cross-checks that every ball row refers to a packing entry and that
    /// selections are consistent (K ≤ J).
    pub fn consistent(&self) -> bool {
        if let Some(p) = &self.packing {
            let distinct: alloc::collections::BTreeSet<usize> =
                self.balls.iter().map(|b| b.ball_index).collect();
            if let Some(max) = distinct.iter().max() {
                if *max >= p.count {
                    return false;
                }
            }
            let selected = distinct
                .iter()
                .filter(|i| {
                    self.balls
                        .iter()
                        .any(|b| b.ball_index == **i && b.selected)
                })
                .count();
            selected <= p.count
        } else {
            self.balls.is_empty()
        }
    }
}
