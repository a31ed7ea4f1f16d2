//! Legendre polynomials and fully normalized associated Legendre functions.
//!
//! `norm_assoc(l, m, θ)` returns Q_lm(θ) normalized so that the real
//! spherical harmonic basis
//!
//! ```text
//! Y_l0 = Q_l0,   Y_lm^c = √2 Q_lm cos(mφ),   Y_lm^s = √2 Q_lm sin(mφ)
//! ```
//!
//! is orthonormal in L²(S²). Values are produced by the standard stable
//! upward recurrence in degree,
//!
//! ```text
//! Q_lm = a_lm cosθ Q_{l-1,m} − b_lm Q_{l-2,m},
//! a_lm = √((4l²−1)/(l²−m²)),
//! b_lm = √((2l+1)(l−1−m)(l−1+m) / ((2l−3)(l²−m²))),
//! ```
//!
//! seeded by the sectoral values Q_mm ∝ sinᵐθ. The sectoral seed underflows
//! long before the normalized values do, so the recurrence runs on an
//! extended-range (mantissa, power-of-two exponent) representation and the
//! exponent is applied only at the end; degrees up to 512 are handled with
//! headroom.

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::PI;

const RESCALE_LO: f64 = 1e-270;
const RESCALE_HI: f64 = 1e270;
const RESCALE_EXP: i32 = 960;

#[inline]
fn pow2(e: i32) -> f64 {
    // Exact for the exponent range reachable after final clamping.
    2.0f64.powi(e)
}

/// Legendre polynomial P_l(x) by the three-term recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=l {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// Q_lm(θ) and its θ-derivative for a run of the degree recurrence at fixed
/// order m, in scaled form. Returns (q_lm, q_lm_prev, exp2) where the true
/// values are q·2^exp2.
fn q_scaled(l: u32, m: u32, theta: f64) -> (f64, f64, i32) {
    debug_assert!(m <= l);
    let (st, ct) = theta.sin_cos();
    // Sectoral seed Q_mm = √(1/4π) Π_{i=1..m} sinθ √((2i+1)/(2i)).
    let mut q = (1.0 / (4.0 * PI)).sqrt();
    let mut exp2: i32 = 0;
    for i in 1..=m {
        q *= st * ((2.0 * i as f64 + 1.0) / (2.0 * i as f64)).sqrt();
        if q.abs() < RESCALE_LO {
            if q == 0.0 {
                return (0.0, 0.0, 0);
            }
            q *= pow2(RESCALE_EXP);
            exp2 -= RESCALE_EXP;
        }
    }
    if l == m {
        return (q, 0.0, exp2);
    }
    // First step of the recurrence: Q_{m+1,m} = √(2m+3) cosθ Q_mm.
    let mut q_prev = q;
    q = (2.0 * m as f64 + 3.0).sqrt() * ct * q_prev;
    for d in (m + 2)..=l {
        let df = d as f64;
        let mf = m as f64;
        let a = ((4.0 * df * df - 1.0) / (df * df - mf * mf)).sqrt();
        let b = (((2.0 * df + 1.0) * (df - 1.0 - mf) * (df - 1.0 + mf))
            / ((2.0 * df - 3.0) * (df * df - mf * mf)))
            .sqrt();
        let next = a * ct * q - b * q_prev;
        q_prev = q;
        q = next;
        let mag = q.abs().max(q_prev.abs());
        if mag < RESCALE_LO && mag > 0.0 {
            q *= pow2(RESCALE_EXP);
            q_prev *= pow2(RESCALE_EXP);
            exp2 -= RESCALE_EXP;
        } else if mag > RESCALE_HI {
            q *= pow2(-RESCALE_EXP);
            q_prev *= pow2(-RESCALE_EXP);
            exp2 += RESCALE_EXP;
        }
    }
    (q, q_prev, exp2)
}

#[inline]
fn apply_exp(v: f64, exp2: i32) -> f64 {
    if exp2 == 0 || v == 0.0 {
        v
    } else if exp2 < -2200 {
        0.0
    } else {
        // split to keep each factor representable
        let half = exp2 / 2;
        v * pow2(half) * pow2(exp2 - half)
    }
}

/// Fully normalized associated Legendre value Q_lm(θ).
pub fn norm_assoc(l: u32, m: u32, theta: f64) -> f64 {
    assert!(m <= l, "order m={m} exceeds degree l={l}");
    let (q, _, e) = q_scaled(l, m, theta);
    apply_exp(q, e)
}

/// (Q_lm(θ), dQ_lm/dθ). The derivative uses
/// `sinθ · Q'_lm = l cosθ Q_lm − c_lm Q_{l-1,m}` with
/// `c_lm = √((2l+1)(l²−m²)/(2l−1))`; near the poles it falls back to the
/// analytic limits (zero except for m = 1).
pub fn norm_assoc_with_dtheta(l: u32, m: u32, theta: f64) -> (f64, f64) {
    assert!(m <= l, "order m={m} exceeds degree l={l}");
    let st = theta.sin();
    if st < 1e-11 {
        let north = theta < 1.0;
        let q = if m == 0 {
            let sign = if north { 1.0 } else { (-1.0f64).powi(l as i32) };
            sign * ((2.0 * l as f64 + 1.0) / (4.0 * PI)).sqrt()
        } else {
            0.0
        };
        let dq = if m == 1 {
            let sign = if north {
                1.0
            } else {
                (-1.0f64).powi(l as i32 + 1)
            };
            sign * pole_slope(l)
        } else {
            0.0
        };
        return (q, dq);
    }
    let (q, q_prev, e) = q_scaled(l, m, theta);
    let ct = theta.cos();
    let lf = l as f64;
    let mf = m as f64;
    let dq_scaled = if l == m {
        // Q_mm ∝ sinᵐθ, so Q'_mm = m cotθ Q_mm.
        mf * ct / st * q
    } else {
        let c = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt();
        (lf * ct * q - c * q_prev) / st
    };
    (apply_exp(q, e), apply_exp(dq_scaled, e))
}

/// lim_{θ→0} Q_l1(θ)/sinθ = dQ_l1/dθ at the north pole:
/// ½ √((2l+1) l (l+1) / 4π).
pub fn pole_slope(l: u32) -> f64 {
    let lf = l as f64;
    0.5 * ((2.0 * lf + 1.0) * lf * (lf + 1.0) / (4.0 * PI)).sqrt()
}
