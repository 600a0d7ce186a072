//! Lie groups acting on `ℝ^l` from the right and the action groupoid
//! `M ⋊ H` with arrows `(x, h)`, target `x` and source `x·h`.
//!
//! ```
//! use dirac_algebroid::groupoid::{catalog, Arrow};
//!
//! let g = catalog::affine_line();
//! let a = Arrow::new(vec![1.0], vec![2.0, 0.0]);
//! let b = Arrow::new(vec![2.0], vec![1.0, 1.0]);
//! let ab = g.compose(&a, &b, 1e-9).unwrap();
//! assert_eq!(ab.h, vec![2.0, 1.0]);
//! assert_eq!(g.source(&ab), vec![3.0]);
//! ```

pub mod catalog;

use std::f64::consts::TAU;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smoothfn::ScalarExpr;

/// Tolerance for identifying group elements and base points.
pub const EPS_GRP: f64 = 1e-9;

/// How a single group coordinate is sampled and compared.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Coordinate {
    /// Unconstrained real parameter, sampled uniformly from `[lo, hi]`.
    Real { lo: f64, hi: f64 },
    /// Strictly positive parameter, sampled log-uniformly from `[lo, hi]`.
    Positive { lo: f64, hi: f64 },
    /// Angle, identified modulo `2π`.
    Angle,
}

/// A Lie group given in a global chart `ℝ^k` (or an open subset of it).
#[derive(Clone, Debug)]
pub struct LieGroup {
    name: String,
    identity: Vec<f64>,
    /// Components of `h·h'` as functions of `(h, h') ∈ ℝ^{2k}`.
    multiply: Vec<ScalarExpr>,
    /// Components of `h⁻¹` as functions of `h ∈ ℝ^k`.
    invert: Vec<ScalarExpr>,
    coordinates: Vec<Coordinate>,
}

impl LieGroup {
    pub fn new(
        name: impl Into<String>,
        identity: Vec<f64>,
        multiply: Vec<ScalarExpr>,
        invert: Vec<ScalarExpr>,
        coordinates: Vec<Coordinate>,
    ) -> Result<Self> {
        let k = identity.len();
        let dims_ok = multiply.len() == k
            && invert.len() == k
            && coordinates.len() == k
            && multiply.iter().all(|m| m.dim() == 2 * k)
            && invert.iter().all(|m| m.dim() == k);
        if !dims_ok {
            return Err(Error::InvalidParameter(format!(
                "inconsistent dimensions in group descriptor of dimension {k}"
            )));
        }
        Ok(Self {
            name: name.into(),
            identity,
            multiply,
            invert,
            coordinates,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.identity.len()
    }

    pub fn identity(&self) -> &[f64] {
        &self.identity
    }

    pub fn multiply_exprs(&self) -> &[ScalarExpr] {
        &self.multiply
    }

    pub fn invert_exprs(&self) -> &[ScalarExpr] {
        &self.invert
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    pub fn multiply(&self, h: &[f64], g: &[f64]) -> Vec<f64> {
        let mut p = Vec::with_capacity(2 * self.dim());
        p.extend_from_slice(h);
        p.extend_from_slice(g);
        let out: Vec<f64> = self.multiply.iter().map(|m| m.value(&p).re).collect();
        self.canonicalize(&out)
    }

    pub fn invert(&self, h: &[f64]) -> Vec<f64> {
        let out: Vec<f64> = self.invert.iter().map(|m| m.value(h).re).collect();
        self.canonicalize(&out)
    }

    /// Reduces angle coordinates into `[0, 2π)`.
    pub fn canonicalize(&self, h: &[f64]) -> Vec<f64> {
        h.iter()
            .zip(&self.coordinates)
            .map(|(&v, c)| match c {
                Coordinate::Angle => {
                    let r = v.rem_euclid(TAU);
                    if r >= TAU {
                        0.0
                    } else {
                        r
                    }
                }
                _ => v,
            })
            .collect()
    }

    /// Euclidean distance after canonicalization; angles use the wrapped
    /// difference.
    pub fn distance(&self, h: &[f64], g: &[f64]) -> f64 {
        h.iter()
            .zip(g)
            .zip(&self.coordinates)
            .map(|((&a, &b), c)| {
                let d = match c {
                    Coordinate::Angle => {
                        let r = (a - b).rem_euclid(TAU);
                        r.min(TAU - r)
                    }
                    _ => a - b,
                };
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn same_element(&self, h: &[f64], g: &[f64], eps: f64) -> bool {
        h.len() == g.len() && self.distance(h, g) <= eps
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.coordinates
            .iter()
            .map(|c| match *c {
                Coordinate::Real { lo, hi } => rng.gen_range(lo..=hi),
                Coordinate::Positive { lo, hi } => rng.gen_range(lo.ln()..=hi.ln()).exp(),
                Coordinate::Angle => rng.gen_range(0.0..TAU),
            })
            .collect()
    }

    /// Largest deviation in the group axioms over `samples` random triples:
    /// associativity, both identity laws and `h·h⁻¹ = e`.
    pub fn axiom_deviation<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let e = &self.identity;
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let (a, b, c) = (self.sample(rng), self.sample(rng), self.sample(rng));
            let left = self.multiply(&self.multiply(&a, &b), &c);
            let right = self.multiply(&a, &self.multiply(&b, &c));
            for d in [
                self.distance(&left, &right),
                self.distance(&self.multiply(&a, e), &a),
                self.distance(&self.multiply(e, &a), &a),
                self.distance(&self.multiply(&a, &self.invert(&a)), e),
                self.distance(&self.multiply(&self.invert(&a), &a), e),
            ] {
                worst = crate::fold_max(worst, d);
            }
        }
        worst
    }
}

/// An arrow `(x, h)` of `M ⋊ H`, pointing from `x·h` to `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrow {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
}

impl Arrow {
    pub fn new(x: Vec<f64>, h: Vec<f64>) -> Self {
        Self { x, h }
    }
}

/// The action groupoid of a right action of a Lie group on `ℝ^l`.
#[derive(Clone, Debug)]
pub struct ActionGroupoid {
    id: String,
    base_dim: usize,
    group: LieGroup,
    /// Components of `x·h` as functions of `(x, h) ∈ ℝ^{l+k}`.
    action: Vec<ScalarExpr>,
    base_range: (f64, f64),
}

impl ActionGroupoid {
    pub fn new(
        id: impl Into<String>,
        base_dim: usize,
        group: LieGroup,
        action: Vec<ScalarExpr>,
        base_range: (f64, f64),
    ) -> Result<Self> {
        let n = base_dim + group.dim();
        if action.len() != base_dim || action.iter().any(|a| a.dim() != n) {
            return Err(Error::InvalidParameter(format!(
                "action must have {base_dim} components over ℝ^{n}"
            )));
        }
        Ok(Self {
            id: id.into(),
            base_dim,
            group,
            action,
            base_range,
        })
    }

    /// Catalog identifier such as `translation(2)`.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn group_dim(&self) -> usize {
        self.group.dim()
    }

    /// Dimension of the arrow space `ℝ^{l+k}`.
    pub fn total_dim(&self) -> usize {
        self.base_dim + self.group.dim()
    }

    pub fn group(&self) -> &LieGroup {
        &self.group
    }

    pub fn action_exprs(&self) -> &[ScalarExpr] {
        &self.action
    }

    /// `x·h`.
    pub fn act(&self, x: &[f64], h: &[f64]) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.total_dim());
        p.extend_from_slice(x);
        p.extend_from_slice(h);
        self.action.iter().map(|a| a.value(&p).re).collect()
    }

    pub fn target(&self, g: &Arrow) -> Vec<f64> {
        g.x.clone()
    }

    pub fn source(&self, g: &Arrow) -> Vec<f64> {
        self.act(&g.x, &g.h)
    }

    pub fn unit(&self, x: &[f64]) -> Arrow {
        Arrow::new(x.to_vec(), self.group.identity.clone())
    }

    /// `(x,h)(xh,h') = (x,hh')`, rejected when `s(g1)` and `t(g2)` are more
    /// than `tol` apart.
    pub fn compose(&self, g1: &Arrow, g2: &Arrow, tol: f64) -> Result<Arrow> {
        let gap = max_abs_diff(&self.source(g1), &g2.x);
        if !(gap <= tol) {
            return Err(Error::NotComposable { gap });
        }
        Ok(Arrow::new(g1.x.clone(), self.group.multiply(&g1.h, &g2.h)))
    }

    /// `(x,h)⁻¹ = (xh, h⁻¹)`.
    pub fn inverse(&self, g: &Arrow) -> Arrow {
        Arrow::new(self.source(g), self.group.invert(&g.h))
    }

    /// Whether two arrows agree to within `eps` in base point and group
    /// element.
    pub fn same_arrow(&self, a: &Arrow, b: &Arrow, eps: f64) -> bool {
        max_abs_diff(&a.x, &b.x) <= eps && self.group.same_element(&a.h, &b.h, eps)
    }

    /// The action components with `h` frozen, as functions of `x ∈ ℝ^l`.
    pub fn action_at(&self, h: &[f64]) -> Result<Vec<ScalarExpr>> {
        let l = self.base_dim;
        let mut map = ScalarExpr::coords(l);
        map.extend(h.iter().map(|&v| ScalarExpr::real(l, v)));
        self.action.iter().map(|a| a.substitute(l, &map)).collect()
    }

    /// `(hf)(x) = f(x·h)`.
    pub fn pullback_by_group(&self, f: &ScalarExpr, h: &[f64]) -> Result<ScalarExpr> {
        if f.dim() != self.base_dim {
            return Err(Error::DimensionMismatch {
                expected: self.base_dim,
                actual: f.dim(),
            });
        }
        if h.len() != self.group.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.group.dim(),
                actual: h.len(),
            });
        }
        f.substitute(self.base_dim, &self.action_at(h)?)
    }

    pub fn sample_base<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let (lo, hi) = self.base_range;
        (0..self.base_dim).map(|_| rng.gen_range(lo..=hi)).collect()
    }

    pub fn sample_arrow<R: Rng + ?Sized>(&self, rng: &mut R) -> Arrow {
        Arrow::new(self.sample_base(rng), self.group.sample(rng))
    }

    /// Range from which random base coordinates are drawn.
    pub fn base_range(&self) -> (f64, f64) {
        self.base_range
    }

    /// Largest deviation in `x·e = x` and `(x·h)·h' = x·(hh')` over `samples`
    /// random inputs.
    pub fn action_deviation<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let e = self.group.identity();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x = self.sample_base(rng);
            let (h, g) = (self.group.sample(rng), self.group.sample(rng));
            let lhs = self.act(&self.act(&x, &h), &g);
            let rhs = self.act(&x, &self.group.multiply(&h, &g));
            worst = crate::fold_max(worst, max_abs_diff(&self.act(&x, e), &x));
            worst = crate::fold_max(worst, max_abs_diff(&lhs, &rhs));
        }
        worst
    }
}

impl fmt::Display for ActionGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, crate::fold_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_structure_maps() {
        let g = catalog::translation(1).unwrap();
        let a = Arrow::new(vec![2.0], vec![3.0]);
        assert_eq!(g.source(&a), vec![5.0]);
        assert_eq!(g.target(&a), vec![2.0]);
        assert_eq!(g.source(&g.unit(&[4.0])), vec![4.0]);
        let c = g
            .compose(
                &Arrow::new(vec![0.0], vec![1.0]),
                &Arrow::new(vec![1.0], vec![2.0]),
                1e-9,
            )
            .unwrap();
        assert_eq!(c, Arrow::new(vec![0.0], vec![3.0]));
        assert_eq!(g.inverse(&a), Arrow::new(vec![5.0], vec![-3.0]));
        let u = g.unit(&[1.5]);
        assert_eq!(g.inverse(&u), u);
    }

    #[test]
    fn composability_gap_is_reported() {
        let g = catalog::translation(1).unwrap();
        let err = g
            .compose(
                &Arrow::new(vec![0.0], vec![1.0]),
                &Arrow::new(vec![1.5], vec![2.0]),
                1e-9,
            )
            .unwrap_err();
        assert_eq!(err, Error::NotComposable { gap: 0.5 });
    }

    #[test]
    fn affine_inverse() {
        let g = catalog::affine_line();
        let inv = g.inverse(&Arrow::new(vec![1.0], vec![2.0, 4.0]));
        assert_eq!(inv, Arrow::new(vec![6.0], vec![0.5, -2.0]));
    }

    #[test]
    fn translation_pullback() {
        let g = catalog::translation(1).unwrap();
        let x = ScalarExpr::coord(1, 0);
        let f = x.powi(2);
        let pulled = g.pullback_by_group(&f, &[1.0]).unwrap();
        assert_eq!(pulled.eval(&[2.0]).unwrap().re, 9.0);
        let same = g.pullback_by_group(&f, &[0.0]).unwrap();
        assert_eq!(same.eval(&[1.3]).unwrap(), f.eval(&[1.3]).unwrap());
    }

    #[test]
    fn angles_are_compared_modulo_two_pi() {
        let g = catalog::so2_plane();
        let grp = g.group();
        assert!(grp.same_element(&[0.0], &[TAU - 1e-12], EPS_GRP));
        assert!(grp.same_element(&grp.canonicalize(&[-1.0]), &[TAU - 1.0], 1e-12));
        assert!(!grp.same_element(&[0.0], &[0.1], EPS_GRP));
    }
}
