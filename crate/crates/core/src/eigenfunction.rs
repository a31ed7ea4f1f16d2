//! Closed-form Laplacian eigenfunction families with exact evaluation,
//! analytic gradients, and L² normalization.
//!
//! Families (Δ is the non-negative Laplacian, Δu = λ²u):
//!
//! * `CircleMode(k, phase)` — `cos(kx − phase)/√π` on the circle, λ² = k².
//! * `TorusMode` — `c Σ a_k sin(k·x) + b_k cos(k·x)` over the lattice points
//!   with |k|² = N, λ² = N; `c` normalizes to unit L² norm.
//! * `ZonalHarmonic(l)` — the rotationally symmetric harmonic
//!   `√((2l+1)/4π) P_l(cosθ)`, λ² = l(l+1).
//! * `HighestWeight(k)` — `k^{1/4} (sinθ)^k sin(kφ)`, λ² = k(k+1). Kept in
//!   this amplitude-normalized form (its L² norm is bounded but not 1); the
//!   exact norm, from the Wallis recurrence, is stored alongside.
//! * `RandomSphereMode(l, seed)` — a seeded Gaussian combination over the
//!   (2l+1)-dimensional degree-l eigenspace, normalized to unit L² norm
//!   exactly via the orthonormal real harmonic basis.
//! * `Constant` — `1/√Vol(M)` with λ² = 0, accepted only by the operations
//!   that do not require a positive eigenvalue; useful as a degenerate
//!   sanity row.

use crate::legendre::{norm_assoc, norm_assoc_with_dtheta, pole_slope};
use crate::manifold::{Manifold, Point};
use crate::rng::SplitMix64;
use crate::sample;
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use serde::{Deserialize, Serialize};

#[allow(unused_imports)]
use num_traits::Float;

/// All (m1, m2) ∈ Z² with m1² + m2² = N, in lexicographic order. Empty when
/// N is not a sum of two squares.
pub fn lattice_points(n: u64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let root = (n as f64).sqrt() as i64 + 1;
    for m1 in -root..=root {
        let sq = (m1 * m1) as u64;
        if sq > n {
            continue;
        }
        let rem = n - sq;
        let m2 = (rem as f64).sqrt().round() as i64;
        if m2 * m2 == rem as i64 {
            if m2 == 0 {
                out.push([m1, 0]);
            } else {
                out.push([m1, -m2]);
                out.push([m1, m2]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One plane-wave term of a torus mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusTerm {
    pub k: [i64; 2],
    pub a: f64,
    pub b: f64,
}

/// Coefficient presets for torus modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusPreset {
    /// Every lattice point with unit sine and cosine coefficients.
    Full,
    /// A single ±k pair: a pure plane wave.
    Pair,
    /// Seeded i.i.d. standard Gaussian coefficients on every lattice point.
    Random,
}

impl TorusPreset {
    pub fn name(&self) -> &'static str {
        match self {
            TorusPreset::Full => "full",
            TorusPreset::Pair => "pair",
            TorusPreset::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    CircleMode {
        k: u32,
        phase: f64,
    },
    TorusMode {
        n: u64,
        preset: TorusPreset,
        seed: u64,
        terms: Vec<TorusTerm>,
    },
    ZonalHarmonic {
        l: u32,
    },
    HighestWeight {
        k: u32,
    },
    RandomSphereMode {
        l: u32,
        seed: u64,
        coeffs: Vec<f64>,
    },
    Constant,
}

/// Which pointwise quantity a sup scan maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupQuantity {
    /// |u|
    Value,
    /// |∇u|
    GradientNorm,
}

/// Analytic gradient in an orthonormal tangent frame.
///
/// Frames: circle `d/dx` (second component zero); torus `(∂₁, ∂₂)`; sphere
/// `(∂_θ, (1/sinθ)∂_φ)`, replaced at the poles by the coordinate-free limit
/// expressed in the local chart aligned with φ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub components: [f64; 2],
    pub norm: f64,
}

impl Gradient {
    fn new(c0: f64, c1: f64) -> Self {
        Gradient {
            components: [c0, c1],
            norm: c0.hypot(c1),
        }
    }
}

/// Symbolic description of one eigenfunction; immutable after construction,
/// evaluation and differentiation are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionSpec {
    manifold: Manifold,
    family: Family,
    eigenvalue_sq: f64,
    /// Multiplies the family's raw closed form; chosen so the L² norm is 1
    /// except for `HighestWeight` (kept as printed) and `Constant`.
    normalization: f64,
    /// Exact L²(M) norm of the normalized function.
    l2_norm_exact: f64,
}

/// ∫₀^π sinᵐθ dθ by the Wallis recurrence W_m = (m−1)/m · W_{m−2}.
pub fn wallis_sin_integral(m: u64) -> f64 {
    let mut w = if m % 2 == 0 { PI } else { 2.0 };
    let mut i = if m % 2 == 0 { 2 } else { 3 };
    while i <= m {
        w *= (i - 1) as f64 / i as f64;
        i += 2;
    }
    w
}

impl EigenfunctionSpec {
    pub fn circle_mode(k: u32, phase: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadParameter {
                name: "k",
                reason: "circle mode frequency must be ≥ 1",
            });
        }
        Ok(Self {
            manifold: Manifold::Circle,
            family: Family::CircleMode { k, phase },
            eigenvalue_sq: (k as f64) * (k as f64),
            normalization: 1.0 / PI.sqrt(),
            l2_norm_exact: 1.0,
        })
    }

    pub fn torus_mode(n: u64, preset: TorusPreset, seed: u64) -> Result<Self> {
        let points = lattice_points(n);
        if points.is_empty() {
            return Err(Error::EmptyTorusFamily { n });
        }
        let terms = match preset {
            TorusPreset::Full => points
                .iter()
                .map(|k| TorusTerm {
                    k: *k,
                    a: 1.0,
                    b: 1.0,
                })
                .collect(),
            TorusPreset::Pair => alloc::vec![TorusTerm {
                k: points[0],
                a: 0.0,
                b: 1.0,
            }],
            TorusPreset::Random => {
                let mut rng = SplitMix64::new(seed);
                points
                    .iter()
                    .map(|k| TorusTerm {
                        k: *k,
                        a: rng.next_gaussian(),
                        b: rng.next_gaussian(),
                    })
                    .collect()
            }
        };
        Self::torus_mode_with_terms(n, preset, seed, terms)
    }

    /// Torus mode from an explicit term list; every |k|² must equal `n`.
    pub fn torus_mode_with_terms(
        n: u64,
        preset: TorusPreset,
        seed: u64,
        terms: Vec<TorusTerm>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::ZeroFunction);
        }
        for t in &terms {
            let sq = (t.k[0] * t.k[0] + t.k[1] * t.k[1]) as u64;
            if sq != n {
                return Err(Error::BadParameter {
                    name: "terms",
                    reason: "lattice vector norm does not match the eigenvalue",
                });
            }
        }
        // Gram analysis over ±k pairs: sin(−k·x) = −sin(k·x) and
        // cos(−k·x) = cos(k·x), so with s = a_k − a_{−k}, c = b_k + b_{−k}
        // per unordered pair, ‖u‖² = 2π² Σ (s² + c²).
        let mut reps: Vec<[i64; 2]> = Vec::new();
        let mut sum = 0.0;
        for t in &terms {
            let rep = if t.k > [-t.k[0], -t.k[1]] {
                t.k
            } else {
                [-t.k[0], -t.k[1]]
            };
            if reps.contains(&rep) {
                continue;
            }
            reps.push(rep);
            let mut s = 0.0;
            let mut c = 0.0;
            for t2 in &terms {
                if t2.k == rep {
                    s += t2.a;
                    c += t2.b;
                } else if t2.k == [-rep[0], -rep[1]] {
                    s -= t2.a;
                    c += t2.b;
                }
            }
            sum += s * s + c * c;
        }
        let norm_sq = 2.0 * PI * PI * sum;
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::ZeroFunction);
        }
        Ok(Self {
            manifold: Manifold::Torus2,
            family: Family::TorusMode {
                n,
                preset,
                seed,
                terms,
            },
            eigenvalue_sq: n as f64,
            normalization: 1.0 / norm_sq.sqrt(),
            l2_norm_exact: 1.0,
        })
    }

    pub fn zonal(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::BadParameter {
                name: "l",
                reason: "zonal degree must be ≥ 1 (degree 0 is the constant)",
            });
        }
        Ok(Self {
            manifold: Manifold::Sphere2,
            family: Family::ZonalHarmonic { l },
            eigenvalue_sq: l as f64 * (l as f64 + 1.0),
            normalization: 1.0,
            l2_norm_exact: 1.0,
        })
    }

    pub fn highest_weight(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadParameter {
                name: "k",
                reason: "highest-weight degree must be ≥ 1",
            });
        }
        // ‖u‖² = √k · π · ∫₀^π sin^{2k+1}θ dθ
        let norm_sq = (k as f64).sqrt() * PI * wallis_sin_integral(2 * k as u64 + 1);
        Ok(Self {
            manifold: Manifold::Sphere2,
            family: Family::HighestWeight { k },
            eigenvalue_sq: k as f64 * (k as f64 + 1.0),
            normalization: 1.0,
            l2_norm_exact: norm_sq.sqrt(),
        })
    }

    pub fn random_sphere(l: u32, seed: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::BadParameter {
                name: "l",
                reason: "degree must be ≥ 1 (degree 0 is the constant)",
            });
        }
        let mut rng = SplitMix64::new(seed);
        let mut coeffs: Vec<f64> = (0..2 * l as usize + 1)
            .map(|_| rng.next_gaussian())
            .collect();
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroFunction);
        }
        for c in &mut coeffs {
            *c /= norm;
        }
        Ok(Self {
            manifold: Manifold::Sphere2,
            family: Family::RandomSphereMode { l, seed, coeffs },
            eigenvalue_sq: l as f64 * (l as f64 + 1.0),
            normalization: 1.0,
            l2_norm_exact: 1.0,
        })
    }

    /// Degenerate diagnostic member u ≡ 1/√Vol(M), λ² = 0.
    pub fn constant(manifold: Manifold) -> Self {
        Self {
            manifold,
            family: Family::Constant,
            eigenvalue_sq: 0.0,
            normalization: 1.0 / manifold.total_volume().sqrt(),
            l2_norm_exact: 1.0,
        }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn eigenvalue_sq(&self) -> f64 {
        self.eigenvalue_sq
    }

    pub fn lambda(&self) -> f64 {
        self.eigenvalue_sq.sqrt()
    }

    /// Exact L²(M) norm (1 for every family except `HighestWeight`).
    pub fn l2_norm_exact(&self) -> f64 {
        self.l2_norm_exact
    }

    /// Largest chart frequency, used to size exact quadrature rules.
    pub fn max_frequency(&self) -> u32 {
        match &self.family {
            Family::CircleMode { k, .. } => *k,
            Family::TorusMode { n, .. } => (*n as f64).sqrt().ceil() as u32,
            Family::ZonalHarmonic { l } => *l,
            Family::HighestWeight { k } => *k,
            Family::RandomSphereMode { l, .. } => *l,
            Family::Constant => 0,
        }
    }

    /// One-line reproducible identifier in the config mini-grammar.
    pub fn id(&self) -> String {
        match &self.family {
            Family::CircleMode { k, phase } => {
                if *phase == 0.0 {
                    format!("cos:k={k}")
                } else {
                    format!("cos:k={k},phase={phase:?}")
                }
            }
            Family::TorusMode {
                n, preset, seed, ..
            } => match preset {
                TorusPreset::Random => format!("torus:N={n},preset=random,seed={seed}"),
                _ => format!("torus:N={n},preset={}", preset.name()),
            },
            Family::ZonalHarmonic { l } => format!("zonal:l={l}"),
            Family::HighestWeight { k } => format!("hw:k={k}"),
            Family::RandomSphereMode { l, seed, .. } => format!("random:l={l},seed={seed}"),
            Family::Constant => format!("const:{}", self.manifold.name()),
        }
    }

    /// Exact closed-form value at a chart point.
    pub fn evaluate(&self, p: &Point) -> f64 {
        match (&self.family, p) {
            (Family::CircleMode { k, phase }, Point::Circle { x }) => {
                self.normalization * (*k as f64 * x - phase).cos()
            }
            (Family::TorusMode { terms, .. }, Point::Torus { x1, x2 }) => {
                let mut v = 0.0;
                for t in terms {
                    let arg = t.k[0] as f64 * x1 + t.k[1] as f64 * x2;
                    let (s, c) = arg.sin_cos();
                    v += t.a * s + t.b * c;
                }
                self.normalization * v
            }
            (Family::ZonalHarmonic { l }, Point::Sphere { theta, .. }) => {
                norm_assoc(*l, 0, *theta)
            }
            (Family::HighestWeight { k }, Point::Sphere { theta, phi }) => {
                (*k as f64).powf(0.25)
                    * theta.sin().powi(*k as i32)
                    * (*k as f64 * phi).sin()
            }
            (Family::RandomSphereMode { l, coeffs, .. }, Point::Sphere { theta, phi }) => {
                let mut v = coeffs[0] * norm_assoc(*l, 0, *theta);
                let sqrt2 = core::f64::consts::SQRT_2;
                for m in 1..=*l {
                    let q = norm_assoc(*l, m, *theta);
                    if q == 0.0 {
                        continue;
                    }
                    let (s, c) = (m as f64 * phi).sin_cos();
                    v += sqrt2
                        * q
                        * (coeffs[2 * m as usize - 1] * c + coeffs[2 * m as usize] * s);
                }
                v
            }
            (Family::Constant, _) => self.normalization,
            _ => panic!("point chart does not match eigenfunction manifold"),
        }
    }

    /// Analytic gradient; see [`Gradient`] for the frame conventions.
    pub fn gradient(&self, p: &Point) -> Gradient {
        match (&self.family, p) {
            (Family::CircleMode { k, phase }, Point::Circle { x }) => {
                let kf = *k as f64;
                Gradient::new(-self.normalization * kf * (kf * x - phase).sin(), 0.0)
            }
            (Family::TorusMode { terms, .. }, Point::Torus { x1, x2 }) => {
                let mut g = [0.0, 0.0];
                for t in terms {
                    let arg = t.k[0] as f64 * x1 + t.k[1] as f64 * x2;
                    let (s, c) = arg.sin_cos();
                    let d = t.a * c - t.b * s;
                    g[0] += d * t.k[0] as f64;
                    g[1] += d * t.k[1] as f64;
                }
                Gradient::new(self.normalization * g[0], self.normalization * g[1])
            }
            (Family::ZonalHarmonic { l }, Point::Sphere { theta, .. }) => {
                let (_, dq) = norm_assoc_with_dtheta(*l, 0, *theta);
                Gradient::new(dq, 0.0)
            }
            (Family::HighestWeight { k }, Point::Sphere { theta, phi }) => {
                let kf = *k as f64;
                let amp = kf.powf(0.25);
                let (st, ct) = theta.sin_cos();
                if st < 1e-11 {
                    // sinᵏθ kills all derivatives at the poles for k ≥ 2;
                    // k = 1 is the m = 1 mode u = sinθ sinφ ≈ y.
                    return if *k == 1 {
                        Gradient::new(0.0, amp * ct.signum())
                    } else {
                        Gradient::new(0.0, 0.0)
                    };
                }
                let (skp, ckp) = (kf * phi).sin_cos();
                let pow = st.powi(*k as i32 - 1);
                Gradient::new(amp * kf * pow * ct * skp, amp * kf * pow * ckp)
            }
            (Family::RandomSphereMode { l, coeffs, .. }, Point::Sphere { theta, phi }) => {
                let st = theta.sin();
                let sqrt2 = core::f64::consts::SQRT_2;
                if st < 1e-11 {
                    // Coordinate-free limit: only the m = 1 pair survives.
                    let north = *theta < 1.0;
                    let sign = if north {
                        1.0
                    } else {
                        (-1.0f64).powi(*l as i32 + 1)
                    };
                    let kappa = sqrt2 * pole_slope(*l) * sign;
                    return Gradient::new(kappa * coeffs[1], kappa * coeffs[2]);
                }
                let (_, dq0) = norm_assoc_with_dtheta(*l, 0, *theta);
                let mut g_theta = coeffs[0] * dq0;
                let mut g_phi = 0.0;
                for m in 1..=*l {
                    let (q, dq) = norm_assoc_with_dtheta(*l, m, *theta);
                    let (s, c) = (m as f64 * phi).sin_cos();
                    let ca = coeffs[2 * m as usize - 1];
                    let cb = coeffs[2 * m as usize];
                    g_theta += sqrt2 * dq * (ca * c + cb * s);
                    g_phi += sqrt2 * (q / st) * m as f64 * (-ca * s + cb * c);
                }
                Gradient::new(g_theta, g_phi)
            }
            (Family::Constant, _) => Gradient::new(0.0, 0.0),
            _ => panic!("point chart does not match eigenfunction manifold"),
        }
    }

    /// Δu at `p` from the analytic second derivatives of the closed form;
    /// available on the circle and torus (the sphere families are verified
    /// through the Green identity instead).
    pub fn laplacian_closed_form(&self, p: &Point) -> Option<f64> {
        match (&self.family, p) {
            (Family::CircleMode { k, phase }, Point::Circle { x }) => {
                let kf = *k as f64;
                Some(self.normalization * kf * kf * (kf * x - phase).cos())
            }
            (Family::TorusMode { terms, .. }, Point::Torus { x1, x2 }) => {
                let mut v = 0.0;
                for t in terms {
                    let arg = t.k[0] as f64 * x1 + t.k[1] as f64 * x2;
                    let (s, c) = arg.sin_cos();
                    let ksq = (t.k[0] * t.k[0] + t.k[1] * t.k[1]) as f64;
                    v += ksq * (t.a * s + t.b * c);
                }
                Some(self.normalization * v)
            }
            _ => None,
        }
    }

    /// L²(M) norm by global quadrature sized to integrate |u|² exactly.
    pub fn l2_norm(&self) -> f64 {
        let degree = (4 * self.max_frequency()).max(8);
        let rule = self
            .manifold
            .global_rule(degree)
            .expect("degree is always ≥ 8");
        rule.integrate(|p| {
            let v = self.evaluate(p);
            v * v
        })
        .max(0.0)
        .sqrt()
    }

    /// Certified lower bound on sup over B(center, r) of |u| or |∇u|,
    /// from a dense deterministic sample at spacing ≤ min(r, λ⁻¹)/16
    /// followed by a shrinking-grid refinement around the best sample. For
    /// these band-limited families the result is within a fraction of a
    /// percent of the true sup.
    pub fn sup_on_ball(&self, quantity: SupQuantity, center: &Point, r: f64) -> f64 {
        assert!(
            r > 0.0 && r <= self.manifold.injectivity_radius(),
            "ball radius out of range"
        );
        let lam = self.lambda().max(1.0);
        let h = r.min(1.0 / lam) / 16.0;
        let eval = |p: &Point| self.quantity(quantity, p);
        let mut best = *center;
        let mut best_val = eval(center);
        for p in sample::ball_polar_grid(self.manifold, center, r, h) {
            let v = eval(&p);
            if v > best_val {
                best = p;
                best_val = v;
            }
        }
        // The refinement may step outside the ball; that only makes the
        // reported sup safer as an upper envelope for the interior max, but
        // for the monotonicity contract we keep it clamped to the ball.
        let m = self.manifold;
        let c = *center;
        let clamped = |p: &Point| {
            if m.distance(&c, p) <= r {
                eval(p)
            } else {
                f64::NEG_INFINITY
            }
        };
        let (_, refined) = sample::refine_max(m, clamped, &best, h * 0.5, 30);
        refined.max(best_val)
    }

    /// Global sup of |u| or |∇u| by dense sampling plus refinement.
    pub fn sup_global(&self, quantity: SupQuantity) -> f64 {
        self.sup_global_point_value(quantity).1
    }

    /// Argmax point of the global sup scan.
    pub fn sup_global_point(&self, quantity: SupQuantity) -> Point {
        self.sup_global_point_value(quantity).0
    }

    fn sup_global_point_value(&self, quantity: SupQuantity) -> (Point, f64) {
        let lam = self.lambda().max(1.0);
        let h = (1.0 / lam).min(PI / 8.0) / 8.0;
        let eval = |p: &Point| self.quantity(quantity, p);
        let mut best = match self.manifold {
            Manifold::Circle => Point::circle(0.0),
            Manifold::Torus2 => Point::torus(0.0, 0.0),
            Manifold::Sphere2 => Point::sphere(0.0, 0.0),
        };
        let mut best_val = eval(&best);
        for p in sample::global_grid(self.manifold, h) {
            let v = eval(&p);
            if v > best_val {
                best = p;
                best_val = v;
            }
        }
        let (refined_point, refined) =
            sample::refine_max(self.manifold, eval, &best, h * 0.5, 30);
        if refined > best_val {
            (refined_point, refined)
        } else {
            (best, best_val)
        }
    }

    fn quantity(&self, quantity: SupQuantity, p: &Point) -> f64 {
        match quantity {
            SupQuantity::Value => self.evaluate(p).abs(),
            SupQuantity::GradientNorm => self.gradient(p).norm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_points_small_cases() {
        assert_eq!(lattice_points(1), alloc::vec![[-1, 0], [0, -1], [0, 1], [1, 0]]);
        assert!(lattice_points(3).is_empty());
        let p25 = lattice_points(25);
        assert_eq!(p25.len(), 12);
        assert!(p25.contains(&[3, 4]) && p25.contains(&[-4, 3]) && p25.contains(&[5, 0]));
        let mut sorted = p25.clone();
        sorted.sort_unstable();
        assert_eq!(p25, sorted);
    }

    #[test]
    fn circle_mode_values() {
        let u = EigenfunctionSpec::circle_mode(3, 0.0).unwrap();
        assert!((u.evaluate(&Point::circle(0.0)) - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!(u.gradient(&Point::circle(0.0)).norm < 1e-15);
        let at_zero_crossing = u.gradient(&Point::circle(PI / 6.0)).norm;
        assert!((at_zero_crossing - 3.0 / PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn highest_weight_matches_printed_form() {
        let u = EigenfunctionSpec::highest_weight(16).unwrap();
        let p = Point::sphere(PI / 2.0, PI / 32.0);
        assert!((u.evaluate(&p) - 2.0).abs() < 1e-14);
        // u(θ, φ + π/k) = −u(θ, φ)
        let q = Point::sphere(1.2, 0.7);
        let q_shift = Point::sphere(1.2, 0.7 + PI / 16.0);
        assert!((u.evaluate(&q_shift) + u.evaluate(&q)).abs() < 1e-13);
    }

    #[test]
    fn zonal_is_phi_invariant_and_peaks_at_pole() {
        let u = EigenfunctionSpec::zonal(10).unwrap();
        let a = u.evaluate(&Point::sphere(0.9, 0.1));
        let b = u.evaluate(&Point::sphere(0.9, 5.0));
        assert!((a - b).abs() < 1e-14);
        let pole = u.evaluate(&Point::sphere(0.0, 0.0));
        assert!((pole - (21.0 / (4.0 * PI)).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn random_sphere_mode_is_bit_reproducible() {
        let a = EigenfunctionSpec::random_sphere(12, 99).unwrap();
        let b = EigenfunctionSpec::random_sphere(12, 99).unwrap();
        assert_eq!(a, b);
        let p = Point::sphere(1.0, 2.0);
        assert_eq!(a.evaluate(&p).to_bits(), b.evaluate(&p).to_bits());
    }

    #[test]
    fn torus_pair_is_pure_plane_wave() {
        let u = EigenfunctionSpec::torus_mode(25, TorusPreset::Pair, 0).unwrap();
        // ‖u‖² = 2π² c², so c = 1/(π√2)
        let p = Point::torus(0.0, 0.0);
        assert!((u.evaluate(&p) - 1.0 / (PI * 2.0f64.sqrt())).abs() < 1e-15);
        assert!((u.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_full_cancellation_analysis() {
        let u = EigenfunctionSpec::torus_mode(25, TorusPreset::Full, 0).unwrap();
        assert!((u.l2_norm() - 1.0).abs() < 1e-12);
        assert!((u.eigenvalue_sq() - 25.0).abs() == 0.0);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(EigenfunctionSpec::circle_mode(0, 0.0).is_err());
        assert!(EigenfunctionSpec::zonal(0).is_err());
        assert!(matches!(
            EigenfunctionSpec::torus_mode(3, TorusPreset::Full, 0),
            Err(Error::EmptyTorusFamily { n: 3 })
        ));
    }

    #[test]
    fn wallis_recurrence_base_cases() {
        assert!((wallis_sin_integral(0) - PI).abs() < 1e-15);
        assert!((wallis_sin_integral(1) - 2.0).abs() < 1e-15);
        assert!((wallis_sin_integral(2) - PI / 2.0).abs() < 1e-15);
        assert!((wallis_sin_integral(3) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_pole_limit_matches_off_pole_values() {
        let u = EigenfunctionSpec::random_sphere(9, 5).unwrap();
        let at_pole = u.gradient(&Point::sphere(0.0, 0.0)).norm;
        let near_pole = u.gradient(&Point::sphere(1e-7, 0.3)).norm;
        assert!(
            (at_pole - near_pole).abs() / at_pole.max(1e-30) < 1e-5,
            "{at_pole} vs {near_pole}"
        );
    }
}
