//! Closed-form smooth functions on `ℝ^d`.
//!
//! A [`ScalarExpr`] is an immutable expression tree over the coordinates
//! `x0 … x{d−1}` with complex constants, the elementary functions `exp`,
//! `sin`, `cos`, integer powers, and two compactly supported primitives:
//! the bump `exp(1/(u²−1))` and a smooth plateau that is exactly one on an
//! inner interval. Derivatives are exact and symbolic.
//!
//! ```
//! use dirac_algebroid::smoothfn::ScalarExpr;
//!
//! let x = ScalarExpr::coord(1, 0);
//! let f = x.powi(2) * x.sin();
//! let df = f.derive(0).unwrap();
//! let p = 0.7_f64;
//! let expected = 2.0 * p * p.sin() + p * p * p.cos();
//! assert!((df.eval(&[p]).unwrap().re - expected).abs() < 1e-12);
//! ```

mod build;
mod calculus;
mod cuboid;
mod node;
mod quadrature;
mod rational;
mod seminorm;
mod step;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use node::{Expr, Node};

pub use cuboid::Cuboid;
pub use quadrature::{gauss_legendre, integrate_with, GAUSS_ORDER};
pub use rational::Rational;
pub use seminorm::default_grid;
pub use step::step_derivative;

/// Smooth complex-valued function on `ℝ^dim`.
#[derive(Clone, PartialEq)]
pub struct ScalarExpr {
    dim: usize,
    root: Expr,
}

impl ScalarExpr {
    fn wrap(dim: usize, root: Expr) -> Self {
        Self { dim, root }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::wrap(dim, build::constant(c))
    }

    pub fn real(dim: usize, v: f64) -> Self {
        Self::wrap(dim, build::real(v))
    }

    pub fn zero(dim: usize) -> Self {
        Self::real(dim, 0.0)
    }

    pub fn one(dim: usize) -> Self {
        Self::real(dim, 1.0)
    }

    /// The coordinate function `x_i`.
    ///
    /// # Panics
    ///
    /// If `i >= dim`. Use [`ScalarExpr::try_coord`] for a checked version.
    pub fn coord(dim: usize, i: usize) -> Self {
        Self::try_coord(dim, i).expect("coordinate index out of range")
    }

    pub fn try_coord(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::CoordinateOutOfRange { index: i, dim });
        }
        Ok(Self::wrap(dim, build::coord(i)))
    }

    /// All coordinate functions `(x0, …, x{dim−1})`.
    pub fn coords(dim: usize) -> Vec<Self> {
        (0..dim).map(|i| Self::coord(dim, i)).collect()
    }

    /// `exp(1/(u²−1))` with `u = (x_i − center)/radius`, zero for `|u| ≥ 1`.
    pub fn bump1d(dim: usize, i: usize, center: f64, radius: f64) -> Result<Self> {
        let x = Self::try_coord(dim, i)?;
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidRadius(format!("bump radius {radius}")));
        }
        Ok(Self::wrap(
            dim,
            Arc::new(Node::Bump {
                arg: x.root,
                center,
                radius,
            }),
        ))
    }

    /// Smooth function of `x_i` equal to 1 for `|x_i − center| ≤ inner` and
    /// 0 for `|x_i − center| ≥ outer`.
    pub fn plateau1d(dim: usize, i: usize, center: f64, inner: f64, outer: f64) -> Result<Self> {
        let x = Self::try_coord(dim, i)?;
        if !(inner > 0.0 && inner < outer && outer.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidRadius(format!(
                "plateau radii must satisfy 0 < {inner} < {outer}"
            )));
        }
        Ok(Self::wrap(
            dim,
            Arc::new(Node::Plateau {
                arg: x.root,
                center,
                inner,
                outer,
            }),
        ))
    }

    /// Product of one-dimensional bumps, supported in the closed cube of
    /// half-width `radius` around `center`.
    pub fn bump(center: &[f64], radius: f64) -> Result<Self> {
        let d = center.len();
        let mut out = Self::one(d);
        for (i, &c) in center.iter().enumerate() {
            out = out * Self::bump1d(d, i, c, radius)?;
        }
        if d == 0 && !(radius > 0.0) {
            return Err(Error::InvalidRadius(format!("bump radius {radius}")));
        }
        Ok(out)
    }

    /// Product of one-dimensional plateaus: 1 on the cube of half-width
    /// `inner`, 0 outside the cube of half-width `outer`.
    pub fn plateau(center: &[f64], inner: f64, outer: f64) -> Result<Self> {
        let d = center.len();
        let mut out = Self::one(d);
        for (i, &c) in center.iter().enumerate() {
            out = out * Self::plateau1d(d, i, c, inner, outer)?;
        }
        if d == 0 && !(inner > 0.0 && inner < outer) {
            return Err(Error::InvalidRadius(format!(
                "plateau radii must satisfy 0 < {inner} < {outer}"
            )));
        }
        Ok(out)
    }

    /// Plateau that is 1 on `domain` and vanishes outside `domain` grown by
    /// `margin` on every side.
    pub fn plateau_around(domain: &Cuboid, margin: f64) -> Result<Self> {
        if !(margin > 0.0) {
            return Err(Error::InvalidRadius(format!("plateau margin {margin}")));
        }
        let d = domain.dim();
        let mut out = Self::one(d);
        for (i, &(a, b)) in domain.bounds().iter().enumerate() {
            let half = 0.5 * (b - a);
            let inner = half.max(margin * 1e-6);
            out = out * Self::plateau1d(d, i, 0.5 * (a + b), inner, half + margin)?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn powi(&self, n: i32) -> Self {
        Self::wrap(self.dim, build::pow(self.root.clone(), n))
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.dim, build::exp(self.root.clone()))
    }

    pub fn sin(&self) -> Self {
        Self::wrap(self.dim, build::sin(self.root.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::wrap(self.dim, build::cos(self.root.clone()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::wrap(self.dim, build::product(vec![build::constant(c), self.root.clone()]))
    }

    /// Sum of many expressions of dimension `dim`.
    pub fn sum_of(dim: usize, terms: impl IntoIterator<Item = ScalarExpr>) -> Self {
        let roots = terms
            .into_iter()
            .map(|t| {
                assert_eq!(t.dim, dim, "dimension mismatch in sum");
                t.root
            })
            .collect();
        Self::wrap(dim, build::sum(roots))
    }

    /// Product of many expressions of dimension `dim`.
    pub fn product_of(dim: usize, factors: impl IntoIterator<Item = ScalarExpr>) -> Self {
        let roots = factors
            .into_iter()
            .map(|t| {
                assert_eq!(t.dim, dim, "dimension mismatch in product");
                t.root
            })
            .collect();
        Self::wrap(dim, build::product(roots))
    }

    pub fn eval(&self, p: &[f64]) -> Result<Complex64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: p.len(),
            });
        }
        Ok(self.root.eval(p))
    }

    /// Evaluation without the dimension check.
    ///
    /// # Panics
    ///
    /// May panic if `p` is shorter than the ambient dimension.
    pub fn value(&self, p: &[f64]) -> Complex64 {
        debug_assert_eq!(p.len(), self.dim);
        self.root.eval(p)
    }

    /// `∂/∂x_i`.
    pub fn derive(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        Ok(Self::wrap(self.dim, calculus::derive(&self.root, i)))
    }

    /// `D^α`, differentiating coordinate `i` exactly `alpha[i]` times.
    pub fn multi_derive(&self, alpha: &[usize]) -> Result<Self> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: alpha.len(),
            });
        }
        let mut out = self.clone();
        for (i, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                out = out.derive(i)?;
            }
        }
        Ok(out)
    }

    /// `e ∘ (map_0, …, map_{d−1})` as a function on `ℝ^target_dim`.
    pub fn substitute(&self, target_dim: usize, map: &[ScalarExpr]) -> Result<Self> {
        if map.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: map.len(),
            });
        }
        if let Some(bad) = map.iter().find(|m| m.dim != target_dim) {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                actual: bad.dim,
            });
        }
        let roots: Vec<Expr> = map.iter().map(|m| m.root.clone()).collect();
        Ok(Self::wrap(target_dim, calculus::substitute(&self.root, &roots)))
    }

    /// The same function viewed on `ℝ^target_dim`, with coordinate `i`
    /// renamed to `i + offset`.
    pub fn embed(&self, target_dim: usize, offset: usize) -> Result<Self> {
        if offset + self.dim > target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                actual: offset + self.dim,
            });
        }
        let map: Vec<ScalarExpr> = (0..self.dim).map(|i| Self::coord(target_dim, i + offset)).collect();
        self.substitute(target_dim, &map)
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::wrap(self.dim, calculus::conj(&self.root))
    }

    /// Whether the expression is the literal constant zero.
    pub fn is_zero(&self) -> bool {
        self.root.is_zero()
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        self.root.as_const()
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// `p_{L,m}(e) = sup_{x∈L, |α|≤m} |D^α e(x)|`, approximated by the maximum
    /// over a tensor grid with `grid` points per axis.
    pub fn seminorm(&self, domain: &Cuboid, m: usize, grid: usize) -> Result<f64> {
        seminorm::seminorm(self, domain, m, grid)
    }

    /// Composite Gauss–Legendre quadrature over `domain`.
    pub fn integrate_box(&self, domain: &Cuboid, cells: usize) -> Result<Complex64> {
        if domain.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: domain.dim(),
            });
        }
        if cells == 0 {
            return Err(Error::InvalidParameter("cells must be at least 1".into()));
        }
        Ok(quadrature::integrate_with(domain, cells, |p| self.root.eval(p)))
    }

    /// A box outside of which the expression vanishes, read off from the
    /// bump and plateau factors of the coordinates. `None` when some axis is
    /// not constrained.
    pub fn support(&self) -> Option<Cuboid> {
        let axes = axis_support(&self.root, self.dim);
        let bounds: Option<Vec<(f64, f64)>> = axes.into_iter().collect();
        Cuboid::new(bounds?).ok()
    }

    /// Parses the prefix text form produced by `Display`.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        text::parse(dim, text).map(|root| Self::wrap(dim, root))
    }
}

type AxisBounds = Vec<Option<(f64, f64)>>;

fn axis_support(e: &Node, dim: usize) -> AxisBounds {
    let coord_interval = |arg: &Expr, lo: f64, hi: f64| {
        let mut out = vec![None; dim];
        if let Node::Coord(i) = **arg {
            out[i] = Some((lo, hi));
        }
        out
    };
    match e {
        Node::Bump { arg, center, radius }
        | Node::Guarded {
            arg, center, radius, ..
        } => coord_interval(arg, center - radius, center + radius),
        Node::Plateau { arg, center, outer, .. } => coord_interval(arg, center - outer, center + outer),
        Node::Product(factors) => {
            let mut out = vec![None; dim];
            for f in factors {
                for (o, s) in out.iter_mut().zip(axis_support(f, dim)) {
                    *o = match (*o, s) {
                        (None, s) => s,
                        (o, None) => o,
                        (Some((a, b)), Some((c, d))) => {
                            let lo = a.max(c);
                            Some((lo, b.min(d).max(lo)))
                        }
                    };
                }
            }
            out
        }
        Node::Sum(terms) => {
            let mut iter = terms.iter().map(|t| axis_support(t, dim));
            let mut out = iter.next().unwrap_or_else(|| vec![None; dim]);
            for s in iter {
                for (o, s) in out.iter_mut().zip(s) {
                    *o = match (*o, s) {
                        (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
                        _ => None,
                    };
                }
            }
            out
        }
        Node::Neg(a) => axis_support(a, dim),
        Node::Pow(a, n) if *n > 0 => axis_support(a, dim),
        _ => vec![None; dim],
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write(f, &self.root)
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr[{}]({})", self.dim, self)
    }
}

#[derive(Serialize, Deserialize)]
struct SerializedExpr {
    dim: usize,
    expr: String,
}

impl Serialize for ScalarExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SerializedExpr {
            dim: self.dim,
            expr: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SerializedExpr::deserialize(d)?;
        ScalarExpr::parse(raw.dim, &raw.expr).map_err(serde::de::Error::custom)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $combine:expr) => {
        impl $trait<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                assert_eq!(self.dim, rhs.dim, "dimension mismatch");
                let combine: fn(Expr, Expr) -> Expr = $combine;
                ScalarExpr::wrap(self.dim, combine(self.root.clone(), rhs.root.clone()))
            }
        }
        impl $trait<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                (&self).$method(rhs)
            }
        }
        impl $trait<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                self.$method(&rhs)
            }
        }
    };
}

binary_op!(Add, add, |a, b| build::sum(vec![a, b]));
binary_op!(Sub, sub, |a, b| build::sum(vec![a, build::neg(b)]));
binary_op!(Mul, mul, |a, b| build::product(vec![a, b]));

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::wrap(self.dim, build::neg(self.root.clone()))
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl Mul<f64> for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: f64) -> ScalarExpr {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<f64> for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: f64) -> ScalarExpr {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Add<f64> for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: f64) -> ScalarExpr {
        let c = ScalarExpr::real(self.dim, rhs);
        self + c
    }
}
