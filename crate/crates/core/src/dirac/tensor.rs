use std::sync::Arc;

use num_complex::Complex64;

use super::{DiracSection, Term};
use crate::error::{Error, Result};
use crate::groupoid::ActionGroupoid;
use crate::smoothfn::ScalarExpr;

/// A finite sum of pure tensors `u₁ ⊗ … ⊗ u_n` of Dirac sections over the
/// same groupoid. There is no normal form; elements are compared through
/// [`TensorElement::pair`].
#[derive(Clone, Debug)]
pub struct TensorElement {
    groupoid: Arc<ActionGroupoid>,
    arity: usize,
    terms: Vec<Vec<DiracSection>>,
}

impl TensorElement {
    pub(crate) fn from_terms(groupoid: &Arc<ActionGroupoid>, arity: usize, terms: Vec<Vec<DiracSection>>) -> Self {
        debug_assert!(terms.iter().all(|t| t.len() == arity));
        Self {
            groupoid: groupoid.clone(),
            arity,
            terms,
        }
    }

    pub fn empty(groupoid: &Arc<ActionGroupoid>, arity: usize) -> Self {
        Self::from_terms(groupoid, arity, Vec::new())
    }

    /// The pure tensor `legs[0] ⊗ … ⊗ legs[n−1]`.
    pub fn pure(legs: Vec<DiracSection>) -> Result<Self> {
        let first = legs
            .first()
            .ok_or_else(|| Error::InvalidParameter("a tensor needs at least one leg".into()))?;
        let groupoid = first.groupoid().clone();
        for leg in &legs[1..] {
            first.same_groupoid(leg)?;
        }
        Ok(Self::from_terms(&groupoid, legs.len(), vec![legs]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Vec<DiracSection>] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                actual: other.arity,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(&self.groupoid, self.arity, terms))
    }

    /// `(F₁ ⊗ … ⊗ F_n)(Σ u₁ ⊗ … ⊗ u_n)(x) = Σ Π_i u_i(F_i)(x)`.
    pub fn pair(&self, functions: &[ScalarExpr], x: &[f64]) -> Result<Complex64> {
        if functions.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                actual: functions.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for legs in &self.terms {
            let mut prod = Complex64::new(1.0, 0.0);
            for (leg, f) in legs.iter().zip(functions) {
                prod *= leg.evaluate(f, x)?;
                if prod == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            acc += prod;
        }
        Ok(acc)
    }

    /// Reverses the order of the legs; for two legs this is the flip `σ`.
    pub fn flip(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|legs| legs.iter().rev().cloned().collect())
            .collect();
        Self::from_terms(&self.groupoid, self.arity, terms)
    }

    /// Replaces leg `i` of every pure tensor by the tensor `map(leg)`, applied
    /// generator by generator, e.g. `(Δ ⊗ id)` with `i = 0`.
    pub fn expand_leg<F>(&self, i: usize, map: F) -> Result<Self>
    where
        F: Fn(&DiracSection) -> Result<TensorElement>,
    {
        if i >= self.arity {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                dim: self.arity,
            });
        }
        let mut terms = Vec::new();
        let mut arity = None;
        for legs in &self.terms {
            for t in legs[i].terms() {
                let single = DiracSection::normalized(&self.groupoid, vec![t.clone()]);
                let image = map(&single)?;
                arity.get_or_insert(self.arity - 1 + image.arity);
                for inner in image.terms {
                    let mut row = Vec::with_capacity(legs.len() + inner.len());
                    row.extend_from_slice(&legs[..i]);
                    row.extend(inner);
                    row.extend_from_slice(&legs[i + 1..]);
                    terms.push(row);
                }
            }
        }
        Ok(Self::from_terms(&self.groupoid, arity.unwrap_or(self.arity + 1), terms))
    }

    /// Leg-wise convolution `(Σ a'⊗a'')(Σ b'⊗b'') = Σ a'b' ⊗ a''b''`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                actual: other.arity,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let row: Result<Vec<DiracSection>> = a.iter().zip(b).map(|(x, y)| x.convolve(y)).collect();
                terms.push(row?);
            }
        }
        Ok(Self::from_terms(&self.groupoid, self.arity, terms))
    }

    /// Sends every pure tensor to a section and sums, e.g. `μ ∘ (S ⊗ id)`.
    pub fn contract<F>(&self, map: F) -> Result<DiracSection>
    where
        F: Fn(&[DiracSection]) -> Result<DiracSection>,
    {
        let mut acc = DiracSection::zero(&self.groupoid);
        for legs in &self.terms {
            acc = acc.add(&map(legs)?)?;
        }
        Ok(acc)
    }

    /// Multiplies leg `i` of every pure tensor by the base function `f`.
    pub fn module_act_leg(&self, i: usize, f: &ScalarExpr) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for legs in &self.terms {
            let mut row = legs.clone();
            row[i] = row[i].module_act(f)?;
            terms.push(row);
        }
        Ok(Self::from_terms(&self.groupoid, self.arity, terms))
    }
}

impl DiracSection {
    /// Splits a section into its generators.
    pub fn generators(&self) -> Vec<DiracSection> {
        self.terms()
            .iter()
            .map(|t: &Term| DiracSection::normalized(self.groupoid(), vec![t.clone()]))
            .collect()
    }
}
