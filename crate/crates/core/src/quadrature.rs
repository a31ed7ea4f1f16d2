//! Quadrature rules for geodesic balls and whole manifolds.
//!
//! The eigenfunction families are band-limited, so rules are sized to
//! integrate the relevant trigonometric/spherical polynomials exactly and
//! quadrature error never contaminates the statistics:
//!
//! * global rules are uniform grids (circle, torus) or Gauss–Legendre in
//!   cos θ times a uniform azimuthal grid (sphere), exact for band limit
//!   ≤ the requested degree;
//! * ball rules are polar products: Gauss–Legendre radially, uniform
//!   angularly. Sphere balls are polar-cap rules in `t = cos θ` (so the
//!   weights sum to the cap volume machine-exactly) rotated from the north
//!   pole to the requested center.

use crate::manifold::{unit_sph, Manifold, Point, Rotation};
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::TAU;
use serde::{Deserialize, Serialize};

#[allow(unused_imports)]
use num_traits::Float;

/// Integration region: a geodesic ball or the whole manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "region", rename_all = "snake_case")]
pub enum Region {
    Ball { center: Point, radius: f64 },
    Global,
}

/// Nodes and positive weights for one region; immutable after construction.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub manifold: Manifold,
    pub region: Region,
    pub order: u32,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(&Point) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Exact volume of the region this rule integrates over.
    pub fn region_volume(&self) -> f64 {
        match self.region {
            Region::Global => self.manifold.total_volume(),
            Region::Ball { radius, .. } => self
                .manifold
                .ball_volume(radius)
                .expect("rule was constructed with a valid radius"),
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence from Chebyshev initial guesses. Accurate to a few ulp
/// for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P'_n(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x.abs(); // symmetrize so n odd gets an exact 0 node
        nodes[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre mapped to [a, b].
pub(crate) fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

impl Manifold {
    /// Rule per the module conventions. For `Region::Ball` the order is the
    /// radial Gauss node count (angular nodes = 2·order); for
    /// `Region::Global` it is the trigonometric/spherical degree integrated
    /// exactly. Minimum order 2.
    pub fn quadrature(&self, region: Region, order: u32) -> Result<QuadratureRule> {
        if order < 2 {
            return Err(Error::OrderTooSmall {
                given: order,
                min: 2,
            });
        }
        match region {
            Region::Ball { center, radius } => self.ball_rule(&center, radius, order, 2 * order),
            Region::Global => self.global_rule(order),
        }
    }

    /// Polar product rule over a geodesic ball.
    pub fn ball_rule(
        &self,
        center: &Point,
        radius: f64,
        radial_order: u32,
        angular_order: u32,
    ) -> Result<QuadratureRule> {
        if !(radius > 0.0 && radius <= self.injectivity_radius()) {
            return Err(Error::RadiusOutOfRange {
                given: radius,
                max: self.injectivity_radius(),
            });
        }
        if radial_order < 2 {
            return Err(Error::OrderTooSmall {
                given: radial_order,
                min: 2,
            });
        }
        let n_rad = radial_order as usize;
        let n_ang = (angular_order as usize).max(4);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match (self, center) {
            (Manifold::Circle, Point::Circle { x }) => {
                let (ts, ws) = gauss_legendre_on(n_rad, -radius, radius);
                for (t, w) in ts.iter().zip(ws) {
                    nodes.push(Point::circle(x + t));
                    weights.push(w);
                }
            }
            (Manifold::Torus2, Point::Torus { x1, x2 }) => {
                let (ss, ws) = gauss_legendre_on(n_rad, 0.0, radius);
                let wa = TAU / n_ang as f64;
                for (s, w) in ss.iter().zip(&ws) {
                    for j in 0..n_ang {
                        let alpha = TAU * j as f64 / n_ang as f64;
                        nodes.push(Point::torus(x1 + s * alpha.cos(), x2 + s * alpha.sin()));
                        // area element s ds dα on the flat disk
                        weights.push(w * s * wa);
                    }
                }
            }
            (Manifold::Sphere2, Point::Sphere { theta, phi }) => {
                // Cap rule in t = cos θ: weights sum to 1 − cos(radius)
                // exactly, then rotate the cap onto the center.
                let (ts, ws) = gauss_legendre_on(n_rad, radius.cos(), 1.0);
                let rot = Rotation::pole_to(*theta, *phi);
                let wa = TAU / n_ang as f64;
                for (t, w) in ts.iter().zip(&ws) {
                    let st = (1.0 - t * t).max(0.0).sqrt();
                    for j in 0..n_ang {
                        let alpha = TAU * j as f64 / n_ang as f64;
                        let v = [st * alpha.cos(), st * alpha.sin(), *t];
                        let (th, ph) = unit_sph(rot.apply(v));
                        nodes.push(Point::sphere(th, ph));
                        weights.push(w * wa);
                    }
                }
            }
            _ => panic!("center chart does not match manifold"),
        }
        Ok(QuadratureRule {
            manifold: *self,
            region: Region::Ball {
                center: *center,
                radius,
            },
            order: radial_order,
            nodes,
            weights,
        })
    }

    /// Global rule exact for band limit ≤ `degree`: trigonometric degree on
    /// the circle/torus, spherical-polynomial degree on the sphere.
    pub fn global_rule(&self, degree: u32) -> Result<QuadratureRule> {
        if degree < 2 {
            return Err(Error::OrderTooSmall {
                given: degree,
                min: 2,
            });
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match self {
            Manifold::Circle => {
                let n = degree as usize + 1;
                let w = TAU / n as f64;
                for i in 0..n {
                    nodes.push(Point::circle(TAU * i as f64 / n as f64));
                    weights.push(w);
                }
            }
            Manifold::Torus2 => {
                let n = degree as usize + 1;
                let w = (TAU / n as f64) * (TAU / n as f64);
                for i in 0..n {
                    for j in 0..n {
                        nodes.push(Point::torus(
                            TAU * i as f64 / n as f64,
                            TAU * j as f64 / n as f64,
                        ));
                        weights.push(w);
                    }
                }
            }
            Manifold::Sphere2 => {
                // GL in t integrates polynomials in cos θ up to 2·n_t − 1;
                // the uniform φ rule kills every azimuthal order below n_phi.
                let n_t = (degree as usize / 2) + 1;
                let n_phi = degree as usize + 1;
                let (ts, ws) = gauss_legendre(n_t);
                let wa = TAU / n_phi as f64;
                for (t, w) in ts.iter().zip(&ws) {
                    let theta = t.clamp(-1.0, 1.0).acos();
                    for j in 0..n_phi {
                        nodes.push(Point::sphere(theta, TAU * j as f64 / n_phi as f64));
                        weights.push(w * wa);
                    }
                }
            }
        }
        Ok(QuadratureRule {
            manifold: *self,
            region: Region::Global,
            order: degree,
            nodes,
            weights,
        })
    }
}
