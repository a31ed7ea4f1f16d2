//! Maximal disjoint geodesic ball packings and nodal-point localization.
//!
//! A packing of radius R is a 2R-separated, 2R-covering set of centers:
//! the balls are disjoint and any further R-ball would intersect one of
//! them. Construction is greedy over a deterministic candidate set at
//! spacing R/2, followed by a saturation audit on finer candidate sets that
//! inserts any point still 2R away from every accepted center, so the
//! covering half of the invariant holds at probe resolution.

use crate::eigenfunction::{EigenfunctionSpec, SupQuantity};
use crate::manifold::{Manifold, Point};
use crate::rng::derive_seed;
use crate::sample::{ball_polar_grid, geodesic_midpoint, geodesic_point};
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::TAU;
use serde::{Deserialize, Serialize};

#[allow(unused_imports)]
use num_traits::Float;

/// A maximal disjoint collection of geodesic R-balls, serializable for
/// replay. Center order is the deterministic insertion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Packing {
    pub manifold: Manifold,
    pub radius: f64,
    pub seed: u64,
    pub centers: Vec<Point>,
}

impl Packing {
    /// Greedy maximal packing: accept a candidate iff it is ≥ 2R from every
    /// accepted center, sweeping candidate sets at spacing R/2, R/4, R/8.
    /// The finer sweeps close most of the gap between "no candidate can be
    /// added" and "no ball can be added"; a final ascent pass hunts down
    /// residual covering holes by maximizing the distance-to-centers from
    /// every near-boundary probe and inserting any point still beyond 2R.
    pub fn build(manifold: Manifold, radius: f64, seed: u64) -> Result<Self> {
        let max = manifold.injectivity_radius() / 2.0;
        if !(radius > 0.0 && radius <= max) {
            return Err(Error::RadiusOutOfRange {
                given: radius,
                max,
            });
        }
        let mut centers: Vec<Point> = Vec::new();
        for (pass, denom) in [2.0, 4.0, 8.0].into_iter().enumerate() {
            let candidates =
                manifold.candidate_centers(radius / denom, derive_seed(seed, pass as u64))?;
            for c in candidates {
                let ok = centers
                    .iter()
                    .all(|p| manifold.distance(p, &c) >= 2.0 * radius);
                if ok {
                    centers.push(c);
                }
            }
        }
        let probes = manifold.candidate_centers(radius / 8.0, derive_seed(seed, 2))?;
        loop {
            let mut inserted = false;
            for q in &probes {
                let here = min_center_distance(manifold, &centers, q);
                if here <= 1.75 * radius {
                    continue;
                }
                let peak = ascend_min_distance(manifold, &centers, q, radius / 4.0);
                if min_center_distance(manifold, &centers, &peak) >= 2.0 * radius {
                    centers.push(peak);
                    inserted = true;
                }
            }
            if !inserted {
                break;
            }
        }
        Ok(Packing {
            manifold,
            radius,
            seed,
            centers,
        })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Smallest pairwise center distance (≥ 2R by construction).
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.centers.len() {
            for j in (i + 1)..self.centers.len() {
                min = min.min(self.manifold.distance(&self.centers[i], &self.centers[j]));
            }
        }
        min
    }

    /// Largest distance from any probe to its nearest center; maximality
    /// means this is ≤ 2R.
    pub fn max_covering_distance(&self, probes: &[Point]) -> f64 {
        let mut worst: f64 = 0.0;
        for q in probes {
            let mut nearest = f64::INFINITY;
            for p in &self.centers {
                let d = self.manifold.distance(p, q);
                if d < nearest {
                    nearest = d;
                }
            }
            worst = worst.max(nearest);
        }
        worst
    }

    /// Number of probes strictly farther than 2R from every center.
    pub fn covering_violations(&self, probes: &[Point]) -> usize {
        let lim = 2.0 * self.radius;
        probes
            .iter()
            .filter(|q| {
                self.centers
                    .iter()
                    .all(|p| self.manifold.distance(p, q) > lim)
            })
            .count()
    }
}

fn min_center_distance(m: Manifold, centers: &[Point], q: &Point) -> f64 {
    centers
        .iter()
        .map(|c| m.distance(c, q))
        .fold(f64::INFINITY, f64::min)
}

/// Pattern-search ascent of the distance-to-nearest-center function: the
/// local maximum is the deepest point of the covering hole around `start`.
fn ascend_min_distance(m: Manifold, centers: &[Point], start: &Point, step0: f64) -> Point {
    let mut best = *start;
    let mut best_val = min_center_distance(m, centers, &best);
    let mut step = step0;
    let dirs: usize = if m == Manifold::Circle { 2 } else { 8 };
    for _ in 0..45 {
        let mut improved = true;
        while improved {
            improved = false;
            for j in 0..dirs {
                let alpha = TAU * j as f64 / dirs as f64;
                let s = if m == Manifold::Circle && j == 1 {
                    -step
                } else {
                    step
                };
                let cand = geodesic_point(m, &best, alpha, s);
                let v = min_center_distance(m, centers, &cand);
                if v > best_val {
                    best = cand;
                    best_val = v;
                    improved = true;
                }
            }
        }
        step *= 0.5;
    }
    best
}

/// Outcome of a nodal-point search inside one ball. `point` is absent when
/// no sign change was found; `min_abs_sampled` is then a positivity
/// certificate (smallest |u| over the scanned samples).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalSearch {
    pub point: Option<Point>,
    /// |u(q)| at the returned point (when present).
    pub residual: f64,
    pub search_radius: f64,
    pub tolerance: f64,
    pub min_abs_sampled: f64,
}

const RADIAL_STEPS: usize = 32;
const SUBGRID_RAYS: usize = 16;

/// Searches B(center, search_radius) for a zero of `u`: scans radial
/// transects at spacing search_radius/32 for a sign change (full polar
/// sweep as fallback), then bisects the bracketing geodesic segment until
/// |u(q)| ≤ tol_factor · sup_{B}|u|. Absence is a legitimate outcome.
pub fn find_nodal_point(
    u: &EigenfunctionSpec,
    center: &Point,
    search_radius: f64,
) -> NodalSearch {
    find_nodal_point_with(u, center, search_radius, 1e-10)
}

pub fn find_nodal_point_with(
    u: &EigenfunctionSpec,
    center: &Point,
    search_radius: f64,
    tol_factor: f64,
) -> NodalSearch {
    assert!(
        search_radius > 0.0 && search_radius <= u.manifold().injectivity_radius(),
        "search radius out of range"
    );
    let m = u.manifold();
    let sup = u.sup_on_ball(SupQuantity::Value, center, search_radius);
    let tol = tol_factor * sup;
    let mut min_abs = f64::INFINITY;

    let result = |point, residual, min_abs| NodalSearch {
        point,
        residual,
        search_radius,
        tolerance: tol,
        min_abs_sampled: min_abs,
    };

    if sup == 0.0 {
        return result(None, f64::INFINITY, 0.0);
    }

    let step = search_radius / RADIAL_STEPS as f64;
    let rays: usize = match m {
        Manifold::Circle => 2,
        _ => SUBGRID_RAYS,
    };

    // Pass 1: radial transects.
    for ray in 0..rays {
        let alpha = match m {
            Manifold::Circle => 0.0,
            _ => TAU * ray as f64 / rays as f64,
        };
        let sign = if m == Manifold::Circle && ray == 1 {
            -1.0
        } else {
            1.0
        };
        let mut prev = *center;
        let mut f_prev = u.evaluate(&prev);
        min_abs = min_abs.min(f_prev.abs());
        for i in 1..=RADIAL_STEPS {
            let p = geodesic_point(m, center, alpha, sign * step * i as f64);
            let f = u.evaluate(&p);
            min_abs = min_abs.min(f.abs());
            if f == 0.0 {
                return result(Some(p), 0.0, min_abs);
            }
            if f_prev * f < 0.0 {
                let (q, res) = bisect(u, &prev, &p, tol);
                return result(Some(q), res, min_abs);
            }
            prev = p;
            f_prev = f;
        }
    }

    // Pass 2: full polar sweep with radial and angular neighbor checks.
    if m != Manifold::Circle {
        let n_ang = ((TAU * RADIAL_STEPS as f64).ceil() as usize).max(8);
        let mut grid = Vec::with_capacity((RADIAL_STEPS + 1) * n_ang);
        let mut vals = Vec::with_capacity((RADIAL_STEPS + 1) * n_ang);
        for i in 0..=RADIAL_STEPS {
            for j in 0..n_ang {
                let p = geodesic_point(
                    m,
                    center,
                    TAU * j as f64 / n_ang as f64,
                    step * i as f64,
                );
                let f = u.evaluate(&p);
                min_abs = min_abs.min(f.abs());
                grid.push(p);
                vals.push(f);
            }
        }
        let idx = |i: usize, j: usize| i * n_ang + j;
        for i in 0..=RADIAL_STEPS {
            for j in 0..n_ang {
                let f = vals[idx(i, j)];
                if f == 0.0 {
                    return result(Some(grid[idx(i, j)]), 0.0, min_abs);
                }
                if i + 1 <= RADIAL_STEPS && f * vals[idx(i + 1, j)] < 0.0 {
                    let (q, res) = bisect(u, &grid[idx(i, j)], &grid[idx(i + 1, j)], tol);
                    return result(Some(q), res, min_abs);
                }
                let j_next = (j + 1) % n_ang;
                if i > 0 && f * vals[idx(i, j_next)] < 0.0 {
                    let (q, res) = bisect(u, &grid[idx(i, j)], &grid[idx(i, j_next)], tol);
                    return result(Some(q), res, min_abs);
                }
            }
        }
    }

    result(None, min_abs, min_abs)
}

/// Bisection along the geodesic between a sign-change bracket. Returns the
/// best point seen (smallest |u|), so the reported residual is the running
/// minimum over the trace and decreases monotonically.
fn bisect(u: &EigenfunctionSpec, a: &Point, b: &Point, tol: f64) -> (Point, f64) {
    let trace = bisect_trace(u, a, b, tol);
    *trace.last().expect("trace is never empty")
}

/// Bisection with the full best-so-far trace, for convergence diagnostics.
pub fn bisect_trace(
    u: &EigenfunctionSpec,
    a: &Point,
    b: &Point,
    tol: f64,
) -> Vec<(Point, f64)> {
    let m = u.manifold();
    let mut lo = *a;
    let mut hi = *b;
    let mut f_lo = u.evaluate(&lo);
    let f_hi = u.evaluate(&hi);
    let (mut best, mut best_val) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo.abs())
    } else {
        (hi, f_hi.abs())
    };
    let mut trace = alloc::vec![(best, best_val)];
    for _ in 0..200 {
        if best_val <= tol {
            break;
        }
        let mid = geodesic_midpoint(m, &lo, &hi);
        let f_mid = u.evaluate(&mid);
        if f_mid.abs() < best_val {
            best = mid;
            best_val = f_mid.abs();
        }
        trace.push((best, best_val));
        if m.distance(&lo, &hi) < 1e-17 {
            break;
        }
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    trace
}

/// Per-ball nodal annotation within a packing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalRecord {
    pub ball_index: usize,
    #[serde(flatten)]
    pub search: NodalSearch,
}

/// Runs the nodal search on every packed ball with search radius R/3.
pub fn nodal_records(
    u: &EigenfunctionSpec,
    packing: &Packing,
    tol_factor: f64,
) -> Vec<NodalRecord> {
    packing
        .centers
        .iter()
        .enumerate()
        .map(|(i, c)| NodalRecord {
            ball_index: i,
            search: find_nodal_point_with(u, c, packing.radius / 3.0, tol_factor),
        })
        .collect()
}

/// Fine deterministic probe set for maximality verification, at spacing R/4.
pub fn audit_probes(packing: &Packing) -> Vec<Point> {
    let mut probes = packing
        .manifold
        .candidate_centers(packing.radius / 4.0, derive_seed(packing.seed, 0xa0d1))
        .expect("radius already validated");
    // include a ball-boundary shell around each center
    for c in &packing.centers {
        probes.extend(ball_polar_grid(
            packing.manifold,
            c,
            1.9 * packing.radius,
            packing.radius / 2.0,
        ));
    }
    probes
}
