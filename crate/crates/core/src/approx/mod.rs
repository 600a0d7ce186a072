//! Approximation of densities and derivatives by Dirac sections.
//!
//! - Riemann combs `Δ_n = (L/n)^k Σ_{t∈I} δ_t` with the bound
//!   `|∫_D F − Δ_n(F)| ≤ kL^{k+1}/n · p_{D,1}(F)`.
//! - Families `Δ_{φ,n}` approximating a density `T_φ` fiberwise.
//! - Finite-difference stencils converging to derivative evaluations.
//! - Mollification of a Dirac section into a smooth density.
//!
//! ```
//! use dirac_algebroid::approx::riemann_comb;
//! use dirac_algebroid::smoothfn::ScalarExpr;
//!
//! let comb = riemann_comb(1.0, 4, 1).unwrap();
//! let y = ScalarExpr::coord(1, 0);
//! let sum = comb.evaluate(&y.powi(2), &[]).unwrap().re;
//! assert!((sum - 0.09375).abs() < 1e-15);
//! ```

mod comb;
mod functions;
mod mollify;
mod stencil;
pub mod sweep;

pub use comb::{
    comb_bound, comb_error, family_comb, family_comb_error, riemann_comb, riemann_nodes, DensityFamily,
    FamilyCombCheck, FamilyCombRow,
};
pub use functions::standard_functions;
pub use mollify::{mollified_evaluate, mollifier_mass, mollify, normalized_mollifier, Mollifier};
pub use stencil::{fd_stencil, fd_stencil_multi};
pub use sweep::{
    comb_sweep, family_comb_sweep, fit_rate, mollify_sweep, stencil_sweep, ConvergenceReport, ConvergenceRow,
    ParameterKind,
};

/// Safety factor applied to grid-sampled seminorms in bound checks.
pub const SEMINORM_SAFETY: f64 = 1.05;

/// Quadrature cells per axis used by the density oracles.
pub const ORACLE_CELLS: usize = 32;
