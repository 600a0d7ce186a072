//! Dirac sections over action Lie groupoids `M ⋊ H` and their Hopf
//! algebroid structure.
//!
//! The crate is organised bottom-up:
//!
//! - [`smoothfn`]: symbolic smooth functions on `ℝ^d` with exact derivatives,
//!   compactly supported bumps and plateaus, seminorms and quadrature.
//! - [`groupoid`]: Lie group descriptors, right actions and the structure maps
//!   of the action groupoid, with a small catalog.
//! - [`dirac`]: finite sums `Σ f_i·δ_{h_i}` with convolution, antipode,
//!   comultiplication, counit and the tensor pairing used to compare them.
//! - [`approx`]: Riemann combs, finite-difference stencils and mollifiers
//!   approximating densities and derivatives by Dirac sections.
//! - [`spectral`]: germs of grouplike elements and the reconstruction of the
//!   groupoid from them.

// `!(a <= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod dirac;
pub mod error;
pub mod groupoid;
pub mod rng;
pub mod smoothfn;
pub mod spectral;

pub use error::{Error, Result};

/// `max` that propagates NaN, so that a NaN deviation never passes a check.
pub(crate) fn fold_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
