//! The three model manifolds and their exact geodesic geometry.
//!
//! Charts use radians throughout: the circle is `R/2πZ` with `x ∈ [0,2π)`,
//! the flat torus `(R/2πZ)²` with `(x1,x2)`, and the unit sphere polar
//! coordinates `(θ, φ)` with `θ ∈ [0,π]`, `φ ∈ [0,2π)`. Constructors reduce
//! coordinates to the fundamental domain, with boundary ties resolved
//! downward, so two points representing the same location compare equal.

use crate::rng::SplitMix64;
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use serde::{Deserialize, Serialize};

#[allow(unused_imports)]
use num_traits::Float;

/// Reduce to [0, 2π); the boundary itself maps down to 0.
pub(crate) fn wrap_2pi(x: f64) -> f64 {
    let mut y = x - (x / TAU).floor() * TAU;
    if y >= TAU || y < 0.0 {
        y = 0.0;
    }
    if y == 0.0 {
        y = 0.0; // normalize -0.0 for stable serialization
    }
    y
}

/// Distance on R/2πZ between reduced representatives.
pub(crate) fn circle_dist(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(a - b);
    d.min(TAU - d)
}

/// Signed minimal displacement from `a` to `b` on R/2πZ, in (-π, π].
pub(crate) fn circle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(b - a);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

pub(crate) fn sph_unit(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

pub(crate) fn unit_sph(v: [f64; 3]) -> (f64, f64) {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]);
    (theta, wrap_2pi(phi))
}

pub(crate) fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Rotation taking the north pole to `(theta, phi)`: Rz(φ)·Ry(θ).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub(crate) fn pole_to(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        // Rz(phi) * Ry(theta)
        Self {
            m: [
                [cp * ct, -sp, cp * st],
                [sp * ct, cp, sp * st],
                [-st, 0.0, ct],
            ],
        }
    }

    pub(crate) fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }
}

/// A point in the chart of one of the model manifolds.
///
/// On the sphere, `phi` is immaterial at the poles; any value is accepted
/// there and preserved as given (after reduction to [0,2π)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "chart", rename_all = "snake_case")]
pub enum Point {
    Circle { x: f64 },
    Torus { x1: f64, x2: f64 },
    Sphere { theta: f64, phi: f64 },
}

impl Point {
    pub fn circle(x: f64) -> Self {
        Point::Circle { x: wrap_2pi(x) }
    }

    pub fn torus(x1: f64, x2: f64) -> Self {
        Point::Torus {
            x1: wrap_2pi(x1),
            x2: wrap_2pi(x2),
        }
    }

    pub fn sphere(theta: f64, phi: f64) -> Self {
        Point::Sphere {
            theta: theta.clamp(0.0, PI),
            phi: wrap_2pi(phi),
        }
    }

    /// Chart coordinates as (first, optional second).
    pub fn coords(&self) -> (f64, Option<f64>) {
        match *self {
            Point::Circle { x } => (x, None),
            Point::Torus { x1, x2 } => (x1, Some(x2)),
            Point::Sphere { theta, phi } => (theta, Some(phi)),
        }
    }
}

/// One of the three model manifolds, with its closed-form metric constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    Circle,
    Torus2,
    Sphere2,
}

impl Manifold {
    pub fn dimension(&self) -> u32 {
        match self {
            Manifold::Circle => 1,
            Manifold::Torus2 | Manifold::Sphere2 => 2,
        }
    }

    pub fn total_volume(&self) -> f64 {
        match self {
            Manifold::Circle => TAU,
            Manifold::Torus2 => TAU * TAU,
            Manifold::Sphere2 => 4.0 * PI,
        }
    }

    pub fn injectivity_radius(&self) -> f64 {
        PI
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Manifold::Circle | Manifold::Sphere2 => PI,
            Manifold::Torus2 => PI * core::f64::consts::SQRT_2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Manifold::Circle => "circle",
            Manifold::Torus2 => "torus",
            Manifold::Sphere2 => "sphere",
        }
    }

    /// Geodesic distance between two points. Total function: symmetric,
    /// satisfies the triangle inequality, bounded by the diameter.
    ///
    /// Panics if a point does not belong to this manifold's chart.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        match (self, p, q) {
            (Manifold::Circle, Point::Circle { x: a }, Point::Circle { x: b }) => {
                circle_dist(*a, *b)
            }
            (
                Manifold::Torus2,
                Point::Torus { x1: a1, x2: a2 },
                Point::Torus { x1: b1, x2: b2 },
            ) => {
                let d1 = circle_dist(*a1, *b1);
                let d2 = circle_dist(*a2, *b2);
                d1.hypot(d2)
            }
            (
                Manifold::Sphere2,
                Point::Sphere { theta: t1, phi: p1 },
                Point::Sphere { theta: t2, phi: p2 },
            ) => {
                // atan2 of |v×w| and v·w is accurate at both ends of [0, π],
                // unlike acos of the dot product.
                let v = sph_unit(*t1, *p1);
                let w = sph_unit(*t2, *p2);
                let dot = v[0] * w[0] + v[1] * w[1] + v[2] * w[2];
                let cx = v[1] * w[2] - v[2] * w[1];
                let cy = v[2] * w[0] - v[0] * w[2];
                let cz = v[0] * w[1] - v[1] * w[0];
                let cross = (cx * cx + cy * cy + cz * cz).sqrt();
                cross.atan2(dot)
            }
            _ => panic!("point chart does not match manifold"),
        }
    }

    /// Exact volume of a geodesic ball of radius `r`.
    ///
    /// Circle: `2r`. Torus (flat below the injectivity radius): `πr²`.
    /// Sphere cap: `2π(1−cos r)`, computed as `4π sin²(r/2)` which is exact
    /// for small radii. Homogeneous: independent of the center.
    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        let max = self.injectivity_radius();
        if !(r > 0.0 && r <= max) {
            return Err(Error::RadiusOutOfRange { given: r, max });
        }
        Ok(match self {
            Manifold::Circle => 2.0 * r,
            Manifold::Torus2 => PI * r * r,
            Manifold::Sphere2 => {
                let s = (0.5 * r).sin();
                4.0 * PI * s * s
            }
        })
    }

    /// Deterministic candidate set covering the manifold: every point lies
    /// within `spacing` of some candidate. Circle and torus use uniform
    /// grids; the sphere uses a Fibonacci lattice sized to the spacing, with
    /// a seed-derived azimuthal offset.
    pub fn candidate_centers(&self, spacing: f64, seed: u64) -> Result<Vec<Point>> {
        if !(spacing > 0.0 && spacing <= self.injectivity_radius()) {
            return Err(Error::SpacingOutOfRange {
                given: spacing,
                max: self.injectivity_radius(),
            });
        }
        let mut out = Vec::new();
        match self {
            Manifold::Circle => {
                // Gap 2π/n ≤ spacing, so the covering radius is ≤ spacing/2.
                let n = ((TAU / spacing).ceil() as usize).max(4);
                for i in 0..n {
                    out.push(Point::circle(TAU * i as f64 / n as f64));
                }
            }
            Manifold::Torus2 => {
                // Covering radius (gap/2)·√2 ≤ spacing/√2.
                let n = ((TAU / spacing).ceil() as usize).max(2);
                for i in 0..n {
                    for j in 0..n {
                        out.push(Point::torus(
                            TAU * i as f64 / n as f64,
                            TAU * j as f64 / n as f64,
                        ));
                    }
                }
            }
            Manifold::Sphere2 => {
                // Area per node = spacing²/4; the lattice covering radius is
                // then well below `spacing` (verified by the Monte Carlo
                // covering tests).
                let n = ((16.0 * PI / (spacing * spacing)).ceil() as usize).max(8);
                let offset = TAU * SplitMix64::new(seed).next_f64();
                let golden = PI * (3.0 - 5.0f64.sqrt());
                for i in 0..n {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                    let theta = z.clamp(-1.0, 1.0).acos();
                    let phi = wrap_2pi(golden * i as f64 + offset);
                    out.push(Point::sphere(theta, phi));
                }
            }
        }
        Ok(out)
    }
}
