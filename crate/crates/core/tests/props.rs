//! Property-based invariants over randomized inputs.

use core::f64::consts::{PI, TAU};
use plancklab_core::analysis::{local_mass_ratio, QuadOrders};
use plancklab_core::{EigenfunctionSpec, Manifold, Packing, Point, Region, SupQuantity};
use proptest::prelude::*;

fn arb_manifold() -> impl Strategy<Value = Manifold> {
    prop_oneof![
        Just(Manifold::Circle),
        Just(Manifold::Torus2),
        Just(Manifold::Sphere2),
    ]
}

fn point_on(m: Manifold, a: f64, b: f64) -> Point {
    match m {
        Manifold::Circle => Point::circle(a * TAU),
        Manifold::Torus2 => Point::torus(a * TAU, b * TAU),
        Manifold::Sphere2 => Point::sphere(a * PI, b * TAU),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinate_reduction_is_idempotent(a in -30.0..30.0f64, b in -30.0..30.0f64) {
        for p in [Point::circle(a), Point::torus(a, b), Point::sphere(a.abs() % PI, b)] {
            let again = match p {
                Point::Circle { x } => Point::circle(x),
                Point::Torus { x1, x2 } => Point::torus(x1, x2),
                Point::Sphere { theta, phi } => Point::sphere(theta, phi),
            };
            prop_assert_eq!(p, again);
        }
    }

    #[test]
    fn distance_metric_axioms(m in arb_manifold(),
                              a1 in 0.0..1.0f64, a2 in 0.0..1.0f64,
                              b1 in 0.0..1.0f64, b2 in 0.0..1.0f64,
                              c1 in 0.0..1.0f64, c2 in 0.0..1.0f64) {
        let p = point_on(m, a1, a2);
        let q = point_on(m, b1, b2);
        let s = point_on(m, c1, c2);
        let dpq = m.distance(&p, &q);
        prop_assert!(dpq >= 0.0);
        prop_assert!((dpq - m.distance(&q, &p)).abs() < 1e-13);
        prop_assert!(dpq <= m.diameter() + 1e-12);
        prop_assert!(dpq <= m.distance(&p, &s) + m.distance(&s, &q) + 1e-12);
    }

    #[test]
    fn quadrature_weight_sum_matches_volume(m in arb_manifold(),
                                            a in 0.0..1.0f64, b in 0.0..1.0f64,
                                            r in 0.01..1.4f64) {
        let center = point_on(m, a, b);
        let rule = m.quadrature(Region::Ball { center, radius: r }, 16).unwrap();
        let vol = m.ball_volume(r).unwrap();
        prop_assert!((rule.weight_sum() - vol).abs() / vol < 1e-10);
        prop_assert!(rule.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn mass_record_recomputation_identity(a in 0.0..1.0f64, b in 0.0..1.0f64,
                                          r in 0.01..0.5f64, seed in 0u64..50) {
        let u = EigenfunctionSpec::random_sphere(8, seed).unwrap();
        let p = point_on(Manifold::Sphere2, a, b);
        let rec = local_mass_ratio(&u, &p, r, 0.1, &QuadOrders::default()).unwrap();
        let vol = Manifold::Sphere2.ball_volume(r).unwrap();
        prop_assert_eq!(rec.rho, rec.local_mass * Manifold::Sphere2.total_volume() / vol);
        prop_assert!(rec.local_mass >= -1e-15);
        prop_assert!(rec.local_mass <= 1.0 + 1e-9);
    }

    #[test]
    fn sup_monotone_under_ball_inclusion(a in 0.05..0.95f64, b in 0.0..1.0f64,
                                         r1 in 0.02..0.2f64, grow in 1.0..3.0f64) {
        let u = EigenfunctionSpec::zonal(9).unwrap();
        let c = point_on(Manifold::Sphere2, a, b);
        let s1 = u.sup_on_ball(SupQuantity::Value, &c, r1);
        let s2 = u.sup_on_ball(SupQuantity::Value, &c, r1 * grow);
        prop_assert!(s1 <= s2 * (1.0 + 1e-9));
    }

    #[test]
    fn packing_invariants_hold(m in arb_manifold(), r in 0.15..0.8f64, seed in 0u64..8) {
        let p = Packing::build(m, r, seed).unwrap();
        prop_assert!(p.len() >= 1);
        prop_assert!(p.min_pairwise_distance() >= 2.0 * r);
        let total = p.len() as f64 * m.ball_volume(r).unwrap();
        prop_assert!(total <= m.total_volume() * (1.0 + 1e-12));
        let probes = plancklab_core::uniform_points(m, 500, seed + 999);
        prop_assert_eq!(p.covering_violations(&probes), 0);
    }
}
