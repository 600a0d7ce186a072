//! Random test functions, sections and evaluation batteries.
//!
//! Test functions on the arrow space are sparse polynomials of degree at most
//! 4 in the base and noncompact group coordinates, with trigonometric factors
//! in angle coordinates so that they are well defined on the group, sometimes
//! multiplied by a wide bump in a base coordinate.

use std::sync::Arc;

use rand::Rng;

use super::{DiracSection, Term};
use crate::error::Result;
use crate::groupoid::{ActionGroupoid, Coordinate};
use crate::smoothfn::ScalarExpr;

/// Default number of `(F, G)` pairs in a battery.
pub const DEFAULT_PAIRS: usize = 32;
/// Default number of base points in a battery.
pub const DEFAULT_POINTS: usize = 16;

/// Test functions `F_j`, partners `G_j` and base points `x_m`.
#[derive(Clone, Debug)]
pub struct Battery {
    functions: Vec<ScalarExpr>,
    partners: Vec<ScalarExpr>,
    points: Vec<Vec<f64>>,
}

impl Battery {
    /// `partners` may be empty when only single pairings are needed.
    pub fn new(functions: Vec<ScalarExpr>, partners: Vec<ScalarExpr>, points: Vec<Vec<f64>>) -> Self {
        Self {
            functions,
            partners,
            points,
        }
    }

    /// `pairs` random `(F, G)` and `points` random base points.
    pub fn random<R: Rng + ?Sized>(g: &ActionGroupoid, pairs: usize, points: usize, rng: &mut R) -> Self {
        let functions = (0..pairs).map(|_| random_function(g, rng)).collect();
        let partners = (0..pairs).map(|_| random_function(g, rng)).collect();
        let points = if g.base_dim() == 0 {
            vec![Vec::new()]
        } else {
            (0..points).map(|_| random_point(g, rng)).collect()
        };
        Self::new(functions, partners, points)
    }

    pub fn default_for<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> Self {
        Self::random(g, DEFAULT_PAIRS, DEFAULT_POINTS, rng)
    }

    pub fn functions(&self) -> &[ScalarExpr] {
        &self.functions
    }

    pub fn partners(&self) -> &[ScalarExpr] {
        &self.partners
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// `(F_j, G_j)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (&ScalarExpr, &ScalarExpr)> {
        self.functions.iter().zip(&self.partners)
    }

    /// `(F_j, G_j, F_{j+1})` triples.
    pub fn triples(&self) -> impl Iterator<Item = [&ScalarExpr; 3]> {
        let n = self.functions.len();
        (0..n.min(self.partners.len()))
            .map(move |j| [&self.functions[j], &self.partners[j], &self.functions[(j + 1) % n]])
    }
}

/// A base point drawn from the groupoid's base range widened by one half.
pub fn random_point<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = g.base_range();
    (0..g.base_dim()).map(|_| rng.gen_range(lo - 0.5..=hi + 0.5)).collect()
}

/// A random smooth function on the arrow space `ℝ^{l+k}`.
pub fn random_function<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> ScalarExpr {
    let (l, n) = (g.base_dim(), g.total_dim());
    let kinds: Vec<Option<Coordinate>> = (0..l)
        .map(|_| None)
        .chain(g.group().coordinates().iter().copied().map(Some))
        .collect();
    let polynomial: Vec<usize> = (0..n)
        .filter(|&i| !matches!(kinds[i], Some(Coordinate::Angle)))
        .collect();
    let angles: Vec<usize> = (0..n)
        .filter(|&i| matches!(kinds[i], Some(Coordinate::Angle)))
        .collect();

    let monomials = rng.gen_range(2..=5);
    let mut terms = Vec::with_capacity(monomials);
    for _ in 0..monomials {
        let mut factors = vec![ScalarExpr::real(n, rng.gen_range(-1.0..=1.0))];
        if !polynomial.is_empty() {
            let degree = rng.gen_range(0..=4);
            let mut powers = vec![0i32; n];
            for _ in 0..degree {
                powers[polynomial[rng.gen_range(0..polynomial.len())]] += 1;
            }
            for (i, &p) in powers.iter().enumerate() {
                if p > 0 {
                    factors.push(ScalarExpr::coord(n, i).powi(p));
                }
            }
        }
        for &i in &angles {
            let m = f64::from(rng.gen_range(1..=2));
            let theta = ScalarExpr::coord(n, i) * m;
            match rng.gen_range(0..3) {
                0 => {}
                1 => factors.push(theta.cos()),
                _ => factors.push(theta.sin()),
            }
        }
        terms.push(ScalarExpr::product_of(n, factors));
    }
    let mut f = ScalarExpr::sum_of(n, terms);
    if l > 0 && rng.gen_bool(1.0 / 3.0) {
        let i = rng.gen_range(0..l);
        let center = rng.gen_range(-1.0..=1.0);
        let radius = rng.gen_range(1.5..=3.0);
        f = f * ScalarExpr::bump1d(n, i, center, radius).expect("positive radius");
    }
    f
}

/// A random compactly supported coefficient on the base: a bump times an
/// affine factor. Over a point base, a nonzero constant.
pub fn random_coefficient<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> ScalarExpr {
    let l = g.base_dim();
    if l == 0 {
        let v: f64 = rng.gen_range(0.5..=2.0);
        return ScalarExpr::real(0, if rng.gen_bool(0.5) { v } else { -v });
    }
    let (lo, hi) = g.base_range();
    let center: Vec<f64> = (0..l).map(|_| rng.gen_range(lo..=hi)).collect();
    let radius = rng.gen_range(0.4..=1.2);
    let mut affine = ScalarExpr::real(l, rng.gen_range(0.5..=1.5));
    for i in 0..l {
        affine = affine + ScalarExpr::coord(l, i) * rng.gen_range(-0.5..=0.5);
    }
    ScalarExpr::bump(&center, radius).expect("positive radius") * affine
}

/// A random generator `f·δ_h`.
pub fn random_generator<R: Rng + ?Sized>(g: &Arc<ActionGroupoid>, rng: &mut R) -> Result<DiracSection> {
    let coef = random_coefficient(g, rng);
    let atom = g.group().sample(rng);
    DiracSection::generator(g, coef, atom)
}

/// A random section with between 1 and `max_terms` generators.
pub fn random_section<R: Rng + ?Sized>(g: &Arc<ActionGroupoid>, max_terms: usize, rng: &mut R) -> Result<DiracSection> {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut terms: Vec<Term> = Vec::with_capacity(count);
    for _ in 0..count {
        let u = random_generator(g, rng)?;
        terms.extend(u.terms().iter().cloned());
    }
    DiracSection::new(g, terms)
}
