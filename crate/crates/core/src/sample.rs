//! Deterministic sampling support: polar grids over balls, global grids,
//! geodesic stepping/midpoints for transects and bisection, local max
//! refinement, and seeded uniform probe points.

use crate::manifold::{circle_diff, normalize3, sph_unit, unit_sph, Manifold, Point, Rotation};
use crate::rng::SplitMix64;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

/// Point at geodesic distance `s` from `center` in direction `alpha`
/// (ignored on the circle, where the sign of `s` is the direction).
pub(crate) fn geodesic_point(m: Manifold, center: &Point, alpha: f64, s: f64) -> Point {
    match (m, center) {
        (Manifold::Circle, Point::Circle { x }) => Point::circle(x + s),
        (Manifold::Torus2, Point::Torus { x1, x2 }) => {
            Point::torus(x1 + s * alpha.cos(), x2 + s * alpha.sin())
        }
        (Manifold::Sphere2, Point::Sphere { theta, phi }) => {
            let rot = Rotation::pole_to(*theta, *phi);
            let (ss, cs) = s.sin_cos();
            let v = [ss * alpha.cos(), ss * alpha.sin(), cs];
            let (th, ph) = unit_sph(rot.apply(v));
            Point::sphere(th, ph)
        }
        _ => panic!("center chart does not match manifold"),
    }
}

/// Midpoint of the minimizing geodesic between two nearby points.
pub(crate) fn geodesic_midpoint(m: Manifold, a: &Point, b: &Point) -> Point {
    match (m, a, b) {
        (Manifold::Circle, Point::Circle { x: xa }, Point::Circle { x: xb }) => {
            Point::circle(xa + 0.5 * circle_diff(*xa, *xb))
        }
        (
            Manifold::Torus2,
            Point::Torus { x1: a1, x2: a2 },
            Point::Torus { x1: b1, x2: b2 },
        ) => Point::torus(
            a1 + 0.5 * circle_diff(*a1, *b1),
            a2 + 0.5 * circle_diff(*a2, *b2),
        ),
        (
            Manifold::Sphere2,
            Point::Sphere { theta: t1, phi: p1 },
            Point::Sphere { theta: t2, phi: p2 },
        ) => {
            let va = sph_unit(*t1, *p1);
            let vb = sph_unit(*t2, *p2);
            let mid = normalize3([va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]]);
            let (th, ph) = unit_sph(mid);
            Point::sphere(th, ph)
        }
        _ => panic!("point charts do not match manifold"),
    }
}

/// Dense polar grid over the ball B(center, r) with sample spacing ≤ h in
/// every direction: rings at radial step ≤ h, each ring holding enough
/// angular samples that consecutive ones are ≤ h apart.
pub(crate) fn ball_polar_grid(m: Manifold, center: &Point, r: f64, h: f64) -> Vec<Point> {
    let mut pts = Vec::new();
    pts.push(*center);
    let n_r = ((r / h).ceil() as usize).max(1);
    match m {
        Manifold::Circle => {
            for i in 1..=n_r {
                let s = r * i as f64 / n_r as f64;
                pts.push(geodesic_point(m, center, 0.0, s));
                pts.push(geodesic_point(m, center, 0.0, -s));
            }
        }
        _ => {
            for i in 1..=n_r {
                let s = r * i as f64 / n_r as f64;
                let n_a = ((TAU * s / h).ceil() as usize).max(6);
                for j in 0..n_a {
                    pts.push(geodesic_point(m, center, TAU * j as f64 / n_a as f64, s));
                }
            }
        }
    }
    pts
}

/// Global sample grid with spacing ≤ h; sphere grids include both poles.
pub(crate) fn global_grid(m: Manifold, h: f64) -> Vec<Point> {
    let mut pts = Vec::new();
    match m {
        Manifold::Circle => {
            let n = ((TAU / h).ceil() as usize).max(8);
            for i in 0..n {
                pts.push(Point::circle(TAU * i as f64 / n as f64));
            }
        }
        Manifold::Torus2 => {
            let n = ((TAU / h).ceil() as usize).max(8);
            for i in 0..n {
                for j in 0..n {
                    pts.push(Point::torus(
                        TAU * i as f64 / n as f64,
                        TAU * j as f64 / n as f64,
                    ));
                }
            }
        }
        Manifold::Sphere2 => {
            pts.push(Point::sphere(0.0, 0.0));
            pts.push(Point::sphere(PI, 0.0));
            let n_rows = ((PI / h).ceil() as usize).max(4);
            for i in 0..n_rows {
                let theta = PI * (i as f64 + 0.5) / n_rows as f64;
                let n_a = ((TAU * theta.sin() / h).ceil() as usize).max(6);
                for j in 0..n_a {
                    pts.push(Point::sphere(theta, TAU * j as f64 / n_a as f64));
                }
            }
        }
    }
    pts
}

/// Shrinking-grid ascent from `start`: at each pass probe the compass
/// directions at the current step, recenter on any improvement, then halve
/// the step. Returns the best point and value seen (a certified lower bound
/// on the true maximum of `f`).
pub(crate) fn refine_max<F: FnMut(&Point) -> f64>(
    m: Manifold,
    mut f: F,
    start: &Point,
    step0: f64,
    passes: u32,
) -> (Point, f64) {
    let mut best = *start;
    let mut best_val = f(&best);
    let mut step = step0;
    let dirs_2d = 8;
    for _ in 0..passes {
        let mut improved = true;
        while improved {
            improved = false;
            match m {
                Manifold::Circle => {
                    for sgn in [-1.0, 1.0] {
                        let cand = geodesic_point(m, &best, 0.0, sgn * step);
                        let v = f(&cand);
                        if v > best_val {
                            best = cand;
                            best_val = v;
                            improved = true;
                        }
                    }
                }
                _ => {
                    for j in 0..dirs_2d {
                        let alpha = TAU * j as f64 / dirs_2d as f64;
                        let cand = geodesic_point(m, &best, alpha, step);
                        let v = f(&cand);
                        if v > best_val {
                            best = cand;
                            best_val = v;
                            improved = true;
                        }
                    }
                }
            }
        }
        step *= 0.5;
    }
    (best, best_val)
}

/// Seeded uniform random points w.r.t. the Riemannian volume measure.
pub fn uniform_points(m: Manifold, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = SplitMix64::new(seed);
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        pts.push(match m {
            Manifold::Circle => Point::circle(TAU * rng.next_f64()),
            Manifold::Torus2 => Point::torus(TAU * rng.next_f64(), TAU * rng.next_f64()),
            Manifold::Sphere2 => {
                let z = 2.0 * rng.next_f64() - 1.0;
                Point::sphere(z.clamp(-1.0, 1.0).acos(), TAU * rng.next_f64())
            }
        });
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_point_distance_is_exact() {
        for m in [Manifold::Circle, Manifold::Torus2, Manifold::Sphere2] {
            let c = match m {
                Manifold::Circle => Point::circle(0.3),
                Manifold::Torus2 => Point::torus(0.3, 5.9),
                Manifold::Sphere2 => Point::sphere(1.2, 0.4),
            };
            for s in [1e-4, 0.2, 1.0] {
                let p = geodesic_point(m, &c, 1.1, s);
                assert!((m.distance(&c, &p) - s).abs() < 1e-12, "{m:?} s={s}");
            }
        }
    }

    #[test]
    fn midpoint_halves_distance() {
        let m = Manifold::Sphere2;
        let a = Point::sphere(1.0, 0.1);
        let b = Point::sphere(1.05, 0.2);
        let mid = geodesic_midpoint(m, &a, &b);
        let d = m.distance(&a, &b);
        assert!((m.distance(&a, &mid) - d / 2.0).abs() < 1e-12);
        assert!((m.distance(&b, &mid) - d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn torus_midpoint_respects_wraparound() {
        let m = Manifold::Torus2;
        let a = Point::torus(0.05, 0.0);
        let b = Point::torus(TAU - 0.05, 0.0);
        let mid = geodesic_midpoint(m, &a, &b);
        assert!(m.distance(&a, &mid) < 0.06);
    }

    #[test]
    fn refine_climbs_to_local_max() {
        let m = Manifold::Circle;
        let f = |p: &Point| match p {
            Point::Circle { x } => (3.0 * x).sin(),
            _ => unreachable!(),
        };
        let (best, val) = refine_max(m, f, &Point::circle(0.4), 0.1, 40);
        assert!((val - 1.0).abs() < 1e-10);
        let x = best.coords().0;
        assert!((x - PI / 6.0).abs() < 1e-6);
    }
}
