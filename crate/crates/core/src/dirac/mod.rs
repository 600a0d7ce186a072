//! Dirac sections `Σ f_i·δ_{h_i}` over an action groupoid.
//!
//! A section acts on smooth functions `F` on the arrow space by
//! `u(F)(x) = Σ_i f_i(x)·F(x, h_i)`. Convolution, antipode, comultiplication
//! and counit are implemented on generators `f·δ_h` and extended linearly.
//!
//! ```
//! use std::sync::Arc;
//! use dirac_algebroid::dirac::DiracSection;
//! use dirac_algebroid::groupoid::catalog;
//! use dirac_algebroid::smoothfn::ScalarExpr;
//!
//! let g = Arc::new(catalog::translation(1).unwrap());
//! let f = ScalarExpr::bump(&[0.0], 2.0).unwrap();
//! let a = DiracSection::generator(&g, f.clone(), vec![1.0]).unwrap();
//! let b = DiracSection::generator(&g, f, vec![2.0]).unwrap();
//! let h = ScalarExpr::coord(2, 1);
//! let v = a.convolve(&b).unwrap().evaluate(&h, &[0.0]).unwrap();
//! assert!((v.re - 3.0 * (-7.0f64 / 3.0).exp()).abs() < 1e-12);
//! ```

pub mod battery;
pub mod laws;
mod tensor;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{ActionGroupoid, EPS_GRP};
use crate::smoothfn::{Cuboid, ScalarExpr};

pub use battery::Battery;
pub use tensor::TensorElement;

/// Relative padding applied to transported support boxes.
const SUPPORT_PADDING: f64 = 0.1;

/// Default margin between a support box and the edge of its local unit.
pub const LOCAL_UNIT_MARGIN: f64 = 0.25;

/// One generator `coef·δ_atom`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: ScalarExpr,
    /// Box outside of which `coef` vanishes, when known.
    pub support: Option<Cuboid>,
    pub atom: Vec<f64>,
}

/// A finite sum `Σ f_i·δ_{h_i}` in normal form: atoms are pairwise distinct
/// up to [`EPS_GRP`] and no coefficient is the literal zero.
#[derive(Clone, Debug)]
pub struct DiracSection {
    groupoid: Arc<ActionGroupoid>,
    terms: Vec<Term>,
}

/// `|a − b| / (1 + max(|a|, |b|))`.
pub fn relative_deviation(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

impl DiracSection {
    pub fn zero(groupoid: &Arc<ActionGroupoid>) -> Self {
        Self {
            groupoid: groupoid.clone(),
            terms: Vec::new(),
        }
    }

    /// Builds a section from terms, merging equal atoms and dropping zero
    /// coefficients.
    pub fn new(groupoid: &Arc<ActionGroupoid>, terms: Vec<Term>) -> Result<Self> {
        let (l, k) = (groupoid.base_dim(), groupoid.group_dim());
        for t in &terms {
            if t.coef.dim() != l {
                return Err(Error::DimensionMismatch {
                    expected: l,
                    actual: t.coef.dim(),
                });
            }
            if t.atom.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    actual: t.atom.len(),
                });
            }
            if let Some(s) = &t.support {
                if s.dim() != l {
                    return Err(Error::DimensionMismatch {
                        expected: l,
                        actual: s.dim(),
                    });
                }
            }
        }
        Ok(Self::normalized(groupoid, terms))
    }

    pub(crate) fn normalized(groupoid: &Arc<ActionGroupoid>, terms: Vec<Term>) -> Self {
        let group = groupoid.group();
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for mut t in terms {
            t.atom = group.canonicalize(&t.atom);
            if let Some(s) = &t.support {
                if s.dim() == 0 {
                    t.support = Some(Cuboid::point());
                }
            }
            match out.iter_mut().find(|o| group.same_element(&o.atom, &t.atom, EPS_GRP)) {
                Some(o) => {
                    o.coef = &o.coef + &t.coef;
                    o.support = match (&o.support, &t.support) {
                        (Some(a), Some(b)) => Some(a.hull(b)),
                        _ => None,
                    };
                }
                None => out.push(t),
            }
        }
        out.retain(|t| !t.coef.is_zero());
        Self {
            groupoid: groupoid.clone(),
            terms: out,
        }
    }

    /// `coef·δ_atom`, with the support read off from the coefficient.
    pub fn generator(groupoid: &Arc<ActionGroupoid>, coef: ScalarExpr, atom: Vec<f64>) -> Result<Self> {
        let support = if groupoid.base_dim() == 0 {
            Some(Cuboid::point())
        } else {
            coef.support()
        };
        Self::new(groupoid, vec![Term { coef, support, atom }])
    }

    /// `f·δ_e`, the image of the base ring.
    pub fn from_base(groupoid: &Arc<ActionGroupoid>, f: ScalarExpr) -> Result<Self> {
        Self::generator(groupoid, f, groupoid.group().identity().to_vec())
    }

    /// The section `δ_h` over a point base.
    pub fn delta(groupoid: &Arc<ActionGroupoid>, atom: Vec<f64>) -> Result<Self> {
        if groupoid.base_dim() != 0 {
            return Err(Error::NotPointBase(groupoid.base_dim()));
        }
        Self::generator(groupoid, ScalarExpr::one(0), atom)
    }

    pub fn groupoid(&self) -> &Arc<ActionGroupoid> {
        &self.groupoid
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn same_groupoid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.groupoid, &other.groupoid) || self.groupoid.id() == other.groupoid.id() {
            Ok(())
        } else {
            Err(Error::GroupoidMismatch {
                left: self.groupoid.id().to_string(),
                right: other.groupoid.id().to_string(),
            })
        }
    }

    fn check_function(&self, f: &ScalarExpr) -> Result<()> {
        let n = self.groupoid.total_dim();
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: f.dim(),
            });
        }
        Ok(())
    }

    /// `u(F)(x) = Σ_i f_i(x)·F(x, h_i)`.
    pub fn evaluate(&self, f: &ScalarExpr, x: &[f64]) -> Result<Complex64> {
        self.check_function(f)?;
        if x.len() != self.groupoid.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.groupoid.base_dim(),
                actual: x.len(),
            });
        }
        let mut p = Vec::with_capacity(self.groupoid.total_dim());
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let c = t.coef.value(x);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            p.clear();
            p.extend_from_slice(x);
            p.extend_from_slice(&t.atom);
            acc += c * f.value(&p);
        }
        Ok(acc)
    }

    /// `u(F)` as a function on the base.
    pub fn apply(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        self.check_function(f)?;
        let l = self.groupoid.base_dim();
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut map = ScalarExpr::coords(l);
            map.extend(t.atom.iter().map(|&v| ScalarExpr::real(l, v)));
            parts.push(&t.coef * f.substitute(l, &map)?);
        }
        Ok(ScalarExpr::sum_of(l, parts))
    }

    /// `(f·u)(F) = u(f·F)`: every coefficient multiplied by `f`.
    pub fn module_act(&self, f: &ScalarExpr) -> Result<Self> {
        if f.dim() != self.groupoid.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.groupoid.base_dim(),
                actual: f.dim(),
            });
        }
        let fs = f.support();
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: f * &t.coef,
                support: intersect_supports(t.support.clone(), fs.clone()),
                atom: t.atom.clone(),
            })
            .collect();
        Ok(Self::normalized(&self.groupoid, terms))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.scale(c),
                ..t.clone()
            })
            .collect();
        Self::normalized(&self.groupoid, terms)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_groupoid(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::normalized(&self.groupoid, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Box containing `{x·h : x ∈ b}`. Every catalog action is affine in `x`
    /// for fixed `h`, so the corners determine the image; a relative padding
    /// guards against rounding.
    pub(crate) fn transport(&self, b: &Cuboid, h: &[f64]) -> Cuboid {
        if b.dim() == 0 {
            return Cuboid::point();
        }
        let images: Vec<Vec<f64>> = b.corners().iter().map(|c| self.groupoid.act(c, h)).collect();
        Cuboid::bounding(&images)
            .map(|c| c.padded(SUPPORT_PADDING, 1e-9))
            .unwrap_or_else(|| b.clone())
    }

    /// `(hf)(x) = f(x·h)` together with a support box for it.
    fn pull(&self, t: &Term, h: &[f64]) -> Result<(ScalarExpr, Option<Cuboid>)> {
        let coef = self.groupoid.pullback_by_group(&t.coef, h)?;
        let h_inv = self.groupoid.group().invert(h);
        let support = t.support.as_ref().map(|s| self.transport(s, &h_inv));
        Ok((coef, support))
    }

    /// `(f₁·δ_{g₁}) * (f₂·δ_{g₂}) = (f₁·(g₁f₂))·δ_{g₁g₂}`, extended bilinearly.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_groupoid(other)?;
        let group = self.groupoid.group();
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let (pulled, pulled_support) = self.pull(b, &a.atom)?;
                terms.push(Term {
                    coef: &a.coef * &pulled,
                    support: intersect_supports(a.support.clone(), pulled_support),
                    atom: group.multiply(&a.atom, &b.atom),
                });
            }
        }
        Ok(Self::normalized(&self.groupoid, terms))
    }

    /// The function `(x, h) ↦ v_{x·h}(F∘L_{(x,h)}) = Σ_j f_j(x·h)·F(x, h·h_j)`
    /// that `u` is paired with in the definition of `u * v`. Built by
    /// substitution only.
    pub fn convolution_kernel(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        self.check_function(f)?;
        let g = &self.groupoid;
        let (l, k) = (g.base_dim(), g.group_dim());
        let n = l + k;
        let coords = ScalarExpr::coords(n);
        let action = g.action_exprs();
        let mut inner = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let at_source = t.coef.substitute(n, action)?;
            let mut mult_args: Vec<ScalarExpr> = coords[l..].to_vec();
            mult_args.extend(t.atom.iter().map(|&v| ScalarExpr::real(n, v)));
            let mut shifted: Vec<ScalarExpr> = coords[..l].to_vec();
            for m in g.group().multiply_exprs() {
                shifted.push(m.substitute(n, &mult_args)?);
            }
            inner.push(at_source * f.substitute(n, &shifted)?);
        }
        Ok(ScalarExpr::sum_of(n, inner))
    }

    /// The definitional convolution `(u*v)(F)(x) = u(g ↦ v_{s(g)}(F∘L_g))(x)`,
    /// evaluated without the generator formula.
    pub fn convolve_oracle(&self, other: &Self, f: &ScalarExpr, x: &[f64]) -> Result<Complex64> {
        self.same_groupoid(other)?;
        self.evaluate(&other.convolution_kernel(f)?, x)
    }

    /// `S(f·δ_h) = (h⁻¹f)·δ_{h⁻¹}`.
    pub fn antipode(&self) -> Result<Self> {
        let group = self.groupoid.group();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let h_inv = group.invert(&t.atom);
            let (coef, support) = self.pull(t, &h_inv)?;
            terms.push(Term {
                coef,
                support,
                atom: h_inv,
            });
        }
        Ok(Self::normalized(&self.groupoid, terms))
    }

    /// `ε(Σ f_i·δ_{h_i}) = Σ f_i`.
    pub fn counit(&self) -> ScalarExpr {
        ScalarExpr::sum_of(self.groupoid.base_dim(), self.terms.iter().map(|t| t.coef.clone()))
    }

    /// Local unit `1_f` for a term: a plateau equal to 1 on the support box
    /// of `f`, vanishing `margin` outside it.
    pub fn local_unit(&self, term: usize, margin: f64) -> Result<ScalarExpr> {
        let t = &self.terms[term];
        if self.groupoid.base_dim() == 0 {
            return Ok(ScalarExpr::one(0));
        }
        let support = t.support.as_ref().ok_or(Error::MissingSupport { term })?;
        ScalarExpr::plateau_around(support, margin)
    }

    /// `Δ(f·δ_h) = (f·δ_h) ⊗ (1_f·δ_h)` with the default local-unit margin.
    pub fn comultiply(&self) -> Result<TensorElement> {
        self.comultiply_with(LOCAL_UNIT_MARGIN)
    }

    pub fn comultiply_with(&self, margin: f64) -> Result<TensorElement> {
        let mut pure = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let unit = self.local_unit(i, margin)?;
            let left = Self::normalized(&self.groupoid, vec![t.clone()]);
            let right = Self::normalized(
                &self.groupoid,
                vec![Term {
                    support: unit.support().or_else(|| t.support.clone()),
                    coef: unit,
                    atom: t.atom.clone(),
                }],
            );
            pure.push(vec![left, right]);
        }
        Ok(TensorElement::from_terms(&self.groupoid, 2, pure))
    }

    /// `ū = Σ f̄_i·δ_{h_i}`.
    pub fn conjugate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.conj(),
                ..t.clone()
            })
            .collect();
        Self::normalized(&self.groupoid, terms)
    }

    /// Largest relative deviation between `u(F)(x)` and `v(F)(x)` over the
    /// battery.
    pub fn max_deviation(&self, other: &Self, battery: &Battery) -> Result<f64> {
        self.same_groupoid(other)?;
        let mut worst: f64 = 0.0;
        for f in battery.functions() {
            for x in battery.points() {
                let d = relative_deviation(self.evaluate(f, x)?, other.evaluate(f, x)?);
                worst = crate::fold_max(worst, d);
            }
        }
        Ok(worst)
    }

    pub fn approx_equal(&self, other: &Self, battery: &Battery, tol: f64) -> Result<bool> {
        Ok(self.max_deviation(other, battery)? <= tol)
    }

    /// `p_B(u) = sup_{F∈B} |u(F)|` for a section over a point base.
    pub fn seminorm_pb(&self, battery: &[ScalarExpr]) -> Result<f64> {
        if self.groupoid.base_dim() != 0 {
            return Err(Error::NotPointBase(self.groupoid.base_dim()));
        }
        let mut sup: f64 = 0.0;
        for f in battery {
            sup = crate::fold_max(sup, self.evaluate(f, &[])?.norm());
        }
        Ok(sup)
    }

    pub fn to_serialized(&self) -> SerializedSection {
        SerializedSection {
            terms: self
                .terms
                .iter()
                .map(|t| SerializedTerm {
                    coef: t.coef.to_string(),
                    atom: t.atom.clone(),
                    support: t.support.clone(),
                })
                .collect(),
        }
    }

    pub fn from_serialized(groupoid: &Arc<ActionGroupoid>, s: &SerializedSection) -> Result<Self> {
        let l = groupoid.base_dim();
        let mut terms = Vec::with_capacity(s.terms.len());
        for t in &s.terms {
            let coef = ScalarExpr::parse(l, &t.coef)?;
            let support = match (&t.support, l) {
                (_, 0) => Some(Cuboid::point()),
                (Some(b), _) => Some(b.clone()),
                (None, _) => coef.support(),
            };
            terms.push(Term {
                coef,
                support,
                atom: t.atom.clone(),
            });
        }
        Self::new(groupoid, terms)
    }
}

fn intersect_supports(a: Option<Cuboid>, b: Option<Cuboid>) -> Option<Cuboid> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.intersect(&b).unwrap_or_else(|| {
            // Disjoint supports: the product vanishes; keep a degenerate box.
            let c = a.center();
            Cuboid::new(c.iter().map(|&v| (v, v)).collect()).expect("finite center")
        })),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Text form of a section: coefficient expressions and atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerializedSection {
    pub terms: Vec<SerializedTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerializedTerm {
    pub coef: String,
    pub atom: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Cuboid>,
}
