//! Eigenfunction family contracts: closed-form values, finite-difference
//! gradient oracles, L² norms against the Wallis recurrence, sup scans
//! against denser brute-force grids, and the eigenvalue relation.

use core::f64::consts::PI;
use plancklab_core::{
    lattice_points, uniform_points, EigenfunctionSpec, Manifold, Point, SupQuantity, TorusPreset,
};

fn families_for_gradient_checks() -> Vec<EigenfunctionSpec> {
    vec![
        EigenfunctionSpec::circle_mode(20, 0.0).unwrap(),
        EigenfunctionSpec::circle_mode(7, 1.1).unwrap(),
        EigenfunctionSpec::torus_mode(25, TorusPreset::Full, 0).unwrap(),
        EigenfunctionSpec::torus_mode(25, TorusPreset::Pair, 0).unwrap(),
        EigenfunctionSpec::torus_mode(100, TorusPreset::Random, 7).unwrap(),
        EigenfunctionSpec::zonal(20).unwrap(),
        EigenfunctionSpec::highest_weight(16).unwrap(),
        EigenfunctionSpec::random_sphere(15, 3).unwrap(),
    ]
}

#[test]
fn lattice_points_match_brute_force() {
    for n in 1..=400u64 {
        let fast = lattice_points(n);
        let mut brute = Vec::new();
        let root = (n as f64).sqrt() as i64 + 1;
        for a in -root..=root {
            for b in -root..=root {
                if a * a + b * b == n as i64 {
                    brute.push([a, b]);
                }
            }
        }
        brute.sort_unstable();
        assert_eq!(fast, brute, "N = {n}");
    }
    assert_eq!(lattice_points(25).len(), 12);
    assert!(lattice_points(3).is_empty());
    assert_eq!(
        lattice_points(1),
        vec![[-1, 0], [0, -1], [0, 1], [1, 0]]
    );
}

#[test]
fn evaluate_closed_form_examples() {
    let u = EigenfunctionSpec::circle_mode(5, 0.0).unwrap();
    assert!((u.evaluate(&Point::circle(0.0)) - 0.5641895835477563).abs() < 1e-15);

    let hw = EigenfunctionSpec::highest_weight(16).unwrap();
    assert!((hw.evaluate(&Point::sphere(PI / 2.0, PI / 32.0)) - 2.0).abs() < 1e-14);

    let z = EigenfunctionSpec::zonal(10).unwrap();
    let pole = z.evaluate(&Point::sphere(0.0, 0.0));
    assert!((pole - (21.0 / (4.0 * PI)).sqrt()).abs() < 1e-13);
    // oracle: numerical L² normalization of P_l(cos θ) on the sphere
    let raw_norm_sq = {
        let rule = Manifold::Sphere2.global_rule(40).unwrap();
        rule.integrate(|p| {
            let t = p.coords().0.cos();
            let pl = plancklab_core::legendre::legendre(10, t);
            pl * pl
        })
    };
    let expected_pole = plancklab_core::legendre::legendre(10, 1.0) / raw_norm_sq.sqrt();
    assert!((pole - expected_pole).abs() < 1e-12);
}

#[test]
fn gradients_match_central_finite_differences() {
    let h = 1e-6;
    for u in families_for_gradient_checks() {
        let m = u.manifold();
        let mut checked = 0;
        let mut seed = 500;
        while checked < 100 {
            seed += 1;
            let p = uniform_points(m, 1, seed)[0];
            let (fd0, fd1) = match (m, &p) {
                (Manifold::Circle, Point::Circle { x }) => {
                    let d = (u.evaluate(&Point::circle(x + h)) - u.evaluate(&Point::circle(x - h)))
                        / (2.0 * h);
                    (d, 0.0)
                }
                (Manifold::Torus2, Point::Torus { x1, x2 }) => (
                    (u.evaluate(&Point::torus(x1 + h, *x2))
                        - u.evaluate(&Point::torus(x1 - h, *x2)))
                        / (2.0 * h),
                    (u.evaluate(&Point::torus(*x1, x2 + h))
                        - u.evaluate(&Point::torus(*x1, x2 - h)))
                        / (2.0 * h),
                ),
                (Manifold::Sphere2, Point::Sphere { theta, phi }) => {
                    if *theta < 0.05 || *theta > PI - 0.05 {
                        continue; // FD frame degenerates at the poles
                    }
                    (
                        (u.evaluate(&Point::sphere(theta + h, *phi))
                            - u.evaluate(&Point::sphere(theta - h, *phi)))
                            / (2.0 * h),
                        (u.evaluate(&Point::sphere(*theta, phi + h))
                            - u.evaluate(&Point::sphere(*theta, phi - h)))
                            / (2.0 * h * theta.sin()),
                    )
                }
                _ => unreachable!(),
            };
            let g = u.gradient(&p);
            let err = (g.components[0] - fd0).hypot(g.components[1] - fd1);
            let scale = g.norm.max(u.lambda() * 1e-3);
            assert!(
                err / scale < 1e-6,
                "{}: fd=({fd0},{fd1}) analytic={:?}",
                u.id(),
                g.components
            );
            checked += 1;
        }
    }
}

#[test]
fn circle_gradient_examples() {
    let u = EigenfunctionSpec::circle_mode(9, 0.0).unwrap();
    assert!(u.gradient(&Point::circle(0.0)).norm < 1e-15);
    let at_cross = u.gradient(&Point::circle(PI / 18.0)).norm;
    assert!((at_cross - 9.0 / PI.sqrt()).abs() < 1e-12);
}

#[test]
fn l2_norms() {
    // constant on the sphere
    let c = EigenfunctionSpec::constant(Manifold::Sphere2);
    assert!((c.l2_norm() - 1.0).abs() < 1e-12);

    // normalized families
    for u in [
        EigenfunctionSpec::circle_mode(13, 0.4).unwrap(),
        EigenfunctionSpec::zonal(20).unwrap(),
        EigenfunctionSpec::random_sphere(20, 11).unwrap(),
    ] {
        assert!((u.l2_norm() - 1.0).abs() < 1e-8, "{}", u.id());
    }
    for preset in [TorusPreset::Full, TorusPreset::Pair, TorusPreset::Random] {
        let u = EigenfunctionSpec::torus_mode(25, preset, 5).unwrap();
        assert!((u.l2_norm() - 1.0).abs() < 1e-10, "{}", u.id());
    }

    // highest weight: quadrature vs the Wallis-recurrence oracle
    for k in [4u32, 16, 36] {
        let u = EigenfunctionSpec::highest_weight(k).unwrap();
        let mut w = 2.0; // ∫ sin^1
        let mut m = 3;
        while m <= 2 * k as u64 + 1 {
            w *= (m - 1) as f64 / m as f64;
            m += 2;
        }
        let oracle = ((k as f64).sqrt() * PI * w).sqrt();
        assert!(
            (u.l2_norm() - oracle).abs() / oracle < 1e-10,
            "k={k}: {} vs {oracle}",
            u.l2_norm()
        );
        assert!((u.l2_norm_exact() - oracle).abs() / oracle < 1e-12);
    }
}

#[test]
fn eigenvalue_relation_from_second_derivatives() {
    for u in [
        EigenfunctionSpec::circle_mode(11, 0.7).unwrap(),
        EigenfunctionSpec::torus_mode(25, TorusPreset::Full, 0).unwrap(),
        EigenfunctionSpec::torus_mode(625, TorusPreset::Random, 9).unwrap(),
    ] {
        let pts = uniform_points(u.manifold(), 100, 77);
        for p in &pts {
            let lap = u.laplacian_closed_form(p).unwrap();
            let want = u.eigenvalue_sq() * u.evaluate(p);
            let scale = u.eigenvalue_sq() * 1.0;
            assert!((lap - want).abs() / scale < 1e-8, "{}", u.id());
        }
    }
    // sphere families have no chart second derivatives here
    assert!(EigenfunctionSpec::zonal(5)
        .unwrap()
        .laplacian_closed_form(&Point::sphere(1.0, 1.0))
        .is_none());
}

#[test]
fn sup_on_ball_examples() {
    let u = EigenfunctionSpec::circle_mode(6, 0.0).unwrap();
    // ball containing the global max at x = 0
    let sup = u.sup_on_ball(SupQuantity::Value, &Point::circle(0.05), 0.2);
    assert!((sup - 1.0 / PI.sqrt()).abs() < 1e-10);

    // monotonicity under ball inclusion
    for u in [
        EigenfunctionSpec::zonal(12).unwrap(),
        EigenfunctionSpec::random_sphere(10, 4).unwrap(),
    ] {
        let c = Point::sphere(1.1, 0.3);
        let s1 = u.sup_on_ball(SupQuantity::Value, &c, 0.05);
        let s2 = u.sup_on_ball(SupQuantity::Value, &c, 0.1);
        assert!(s1 <= s2 * (1.0 + 1e-9), "{}", u.id());
    }
}

#[test]
fn gradient_sup_matches_denser_grid_oracle() {
    let u = EigenfunctionSpec::zonal(20).unwrap();
    let center = Point::sphere(0.0, 0.0);
    let r = 0.1;
    let sup = u.sup_on_ball(SupQuantity::GradientNorm, &center, r);
    // 10× denser brute-force polar grid around the pole
    let lam = u.lambda();
    let h = r.min(1.0 / lam) / 160.0;
    let n_r = (r / h).ceil() as usize;
    let mut brute: f64 = u.gradient(&center).norm;
    for i in 1..=n_r {
        let s = r * i as f64 / n_r as f64;
        let n_a = ((core::f64::consts::TAU * s / h).ceil() as usize).max(6);
        for j in 0..n_a {
            let phi = core::f64::consts::TAU * j as f64 / n_a as f64;
            brute = brute.max(u.gradient(&Point::sphere(s, phi)).norm);
        }
    }
    assert!(
        (sup - brute).abs() / brute < 0.01,
        "refined {sup} vs brute {brute}"
    );
}

#[test]
fn highest_weight_antiperiod_symmetry() {
    for k in [5u32, 16] {
        let u = EigenfunctionSpec::highest_weight(k).unwrap();
        for p in uniform_points(Manifold::Sphere2, 50, 21) {
            let (theta, phi) = match p {
                Point::Sphere { theta, phi } => (theta, phi),
                _ => unreachable!(),
            };
            let shifted = Point::sphere(theta, phi + PI / k as f64);
            assert!((u.evaluate(&shifted) + u.evaluate(&p)).abs() < 1e-12);
        }
    }
}

#[test]
fn random_mode_reproducible_across_processes() {
    // frozen fingerprint: same seed must give the same coefficients forever
    let u = EigenfunctionSpec::random_sphere(6, 42).unwrap();
    let v1 = u.evaluate(&Point::sphere(1.0, 1.0));
    let u2 = EigenfunctionSpec::random_sphere(6, 42).unwrap();
    assert_eq!(v1.to_bits(), u2.evaluate(&Point::sphere(1.0, 1.0)).to_bits());
    let w = EigenfunctionSpec::random_sphere(6, 43).unwrap();
    assert_ne!(v1.to_bits(), w.evaluate(&Point::sphere(1.0, 1.0)).to_bits());
}

#[test]
fn family_ids_are_canonical() {
    assert_eq!(EigenfunctionSpec::circle_mode(20, 0.0).unwrap().id(), "cos:k=20");
    assert_eq!(EigenfunctionSpec::zonal(20).unwrap().id(), "zonal:l=20");
    assert_eq!(
        EigenfunctionSpec::torus_mode(25, TorusPreset::Random, 7).unwrap().id(),
        "torus:N=25,preset=random,seed=7"
    );
    assert_eq!(EigenfunctionSpec::highest_weight(16).unwrap().id(), "hw:k=16");
    assert_eq!(
        EigenfunctionSpec::random_sphere(20, 7).unwrap().id(),
        "random:l=20,seed=7"
    );
}
