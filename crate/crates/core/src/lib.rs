//! Numerical laboratory core: exact geodesic geometry and quadrature on the
//! circle, the flat 2-torus, and the round 2-sphere; closed-form Laplacian
//! eigenfunction families with analytic gradients; maximal disjoint geodesic
//! ball packings with nodal-point localization; and the local-mass analysis
//! pipelines built on top of them.
//!
//! Everything in this crate is a pure function of its inputs (given the seeds
//! embedded in the arguments), so results are bit-reproducible across runs.
//! The crate is `no_std`-compatible (`alloc` required); disable default
//! features and enable `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod analysis;
pub mod eigenfunction;
pub mod legendre;
pub mod manifold;
pub mod packing;
pub mod quadrature;
pub mod report;
pub mod rng;
mod sample;

pub use eigenfunction::{lattice_points, EigenfunctionSpec, Family, SupQuantity, TorusPreset};
pub use manifold::{Manifold, Point};
pub use packing::{find_nodal_point, NodalSearch, Packing};
pub use quadrature::{QuadratureRule, Region};
pub use report::ExperimentReport;
pub use sample::uniform_points;

use core::fmt;

/// Errors for contract violations that callers can hit with bad parameters.
/// Chart/manifold mismatches are programming errors and panic instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Ball radius outside (0, max].
    RadiusOutOfRange { given: f64, max: f64 },
    /// Candidate spacing outside (0, injectivity radius).
    SpacingOutOfRange { given: f64, max: f64 },
    /// Quadrature order below the supported minimum.
    OrderTooSmall { given: u32, min: u32 },
    /// A named numeric parameter violated its precondition.
    BadParameter { name: &'static str, reason: &'static str },
    /// No lattice points with the requested squared norm: the torus family is
    /// empty for this eigenvalue.
    EmptyTorusFamily { n: u64 },
    /// All coefficients cancelled; the eigenfunction would be identically zero.
    ZeroFunction,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RadiusOutOfRange { given, max } => {
                write!(f, "radius {given} outside (0, {max}]")
            }
            Error::SpacingOutOfRange { given, max } => {
                write!(f, "spacing {given} outside (0, {max})")
            }
            Error::OrderTooSmall { given, min } => {
                write!(f, "quadrature order {given} below minimum {min}")
            }
            Error::BadParameter { name, reason } => write!(f, "parameter `{name}`: {reason}"),
            Error::EmptyTorusFamily { n } => {
                write!(f, "{n} is not a sum of two squares; no torus modes exist")
            }
            Error::ZeroFunction => write!(f, "coefficients describe the zero function"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
