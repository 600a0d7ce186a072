//! Germs of normalized grouplike sections and the groupoid they form.
//!
//! An arrow `(x, h)` is represented by the germ at `x` of a witness `f·δ_h`
//! whose coefficient is identically 1 on the cube of half-width `r_norm`
//! around `x`. Germ equality is tested by localizing the difference of two
//! witnesses near `x` and evaluating it on a battery.
//!
//! ```
//! use std::sync::Arc;
//! use dirac_algebroid::groupoid::catalog;
//! use dirac_algebroid::spectral::{germ_source, make_arrow};
//!
//! let g = Arc::new(catalog::affine_line());
//! let a = make_arrow(&g, &[1.0], &[2.0, 4.0], 0.2).unwrap();
//! assert!((germ_source(&a).unwrap()[0] - 6.0).abs() < 1e-12);
//! ```

pub mod dual;
mod roundtrip;

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::dirac::{relative_deviation, Battery, DiracSection, TensorElement};
use crate::error::{Error, Result};
use crate::fold_max;
use crate::groupoid::{max_abs_diff, ActionGroupoid, EPS_GRP};
use crate::smoothfn::ScalarExpr;

pub use roundtrip::{reconstruct_round_trip, RoundTripCheck, RoundTripConfig, RoundTripReport, ROUND_TRIP_CHECKS};

/// Default tolerance for germ-level comparisons.
pub const GERM_TOL: f64 = 1e-9;

/// Number of test functions in a germ battery.
pub const GERM_BATTERY_SIZE: usize = 16;

/// Bisection steps used when shrinking a normalization radius.
const RENORMALIZE_STEPS: usize = 50;

/// The germ at `x` of a witness `f·δ_h`.
#[derive(Clone, Debug)]
pub struct ArrowGerm {
    x: Vec<f64>,
    witness: DiracSection,
    r_norm: f64,
}

impl ArrowGerm {
    /// Wraps a witness without checking normalization.
    pub fn from_parts(x: Vec<f64>, witness: DiracSection, r_norm: f64) -> Result<Self> {
        let l = witness.groupoid().base_dim();
        if x.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                actual: x.len(),
            });
        }
        if !(r_norm > 0.0 && r_norm.is_finite()) {
            return Err(Error::InvalidRadius(format!("normalization radius {r_norm}")));
        }
        Ok(Self { x, witness, r_norm })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn witness(&self) -> &DiracSection {
        &self.witness
    }

    pub fn r_norm(&self) -> f64 {
        self.r_norm
    }

    pub fn groupoid(&self) -> &Arc<ActionGroupoid> {
        self.witness.groupoid()
    }

    /// The atom `h` of a single-term witness.
    pub fn atom(&self) -> Option<&[f64]> {
        match self.witness.terms() {
            [t] => Some(&t.atom),
            _ => None,
        }
    }

    /// Same germ with the witness multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            witness: self.witness.scale(c),
            ..self.clone()
        }
    }
}

fn localizer(x: &[f64], r: f64) -> Result<ScalarExpr> {
    if x.is_empty() {
        return Ok(ScalarExpr::one(0));
    }
    ScalarExpr::plateau(x, r, 2.0 * r)
}

/// The `3^l` points of the grid `x + r·{−1, 0, 1}^l`.
pub fn box_points(x: &[f64], r: f64) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::with_capacity(x.len())];
    for &c in x {
        points = points
            .into_iter()
            .flat_map(|p| {
                [-1.0, 0.0, 1.0].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(c + s * r);
                    q
                })
            })
            .collect();
    }
    points
}

/// `plateau(x, r_norm, 2·r_norm)·δ_h`, a witness for the arrow `(x, h)`.
pub fn make_arrow(g: &Arc<ActionGroupoid>, x: &[f64], h: &[f64], r_norm: f64) -> Result<ArrowGerm> {
    if x.len() != g.base_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.base_dim(),
            actual: x.len(),
        });
    }
    if !(r_norm > 0.0 && r_norm.is_finite()) {
        return Err(Error::InvalidRadius(format!("normalization radius {r_norm}")));
    }
    let f = localizer(x, r_norm)?;
    let witness = DiracSection::generator(g, f, h.to_vec())?;
    ArrowGerm::from_parts(x.to_vec(), witness, r_norm)
}

/// The unit germ at `x`.
pub fn unit_germ(g: &Arc<ActionGroupoid>, x: &[f64], r_norm: f64) -> Result<ArrowGerm> {
    make_arrow(g, x, g.group().identity(), r_norm)
}

/// `GERM_BATTERY_SIZE` random functions on the arrow space.
pub fn germ_battery<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> Battery {
    Battery::random(g, GERM_BATTERY_SIZE, 0, rng)
}

/// `[r, r/2, r/4]` with `r` the smaller normalization radius.
pub fn default_radii(g1: &ArrowGerm, g2: &ArrowGerm) -> Vec<f64> {
    let r = g1.r_norm.min(g2.r_norm);
    vec![r, r / 2.0, r / 4.0]
}

/// Largest relative deviation between the two witnesses localized by
/// `plateau(x, r, 2r)`, over the battery functions and the grid
/// `x + r·{−1,0,1}^l`, for every `r` in `radii`.
pub fn germ_deviation(g1: &ArrowGerm, g2: &ArrowGerm, radii: &[f64], battery: &Battery) -> Result<f64> {
    g1.witness.same_groupoid(&g2.witness)?;
    let distance = max_abs_diff(&g1.x, &g2.x);
    if !(distance <= EPS_GRP * (1.0 + g1.x.iter().fold(0.0f64, |m, v| m.max(v.abs())))) {
        return Err(Error::BasePointMismatch { distance });
    }
    let mut worst = 0.0f64;
    for &r in radii {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(format!("germ radius {r}")));
        }
        let loc = localizer(&g1.x, r)?;
        let a = g1.witness.module_act(&loc)?;
        let b = g2.witness.module_act(&loc)?;
        for p in box_points(&g1.x, r) {
            for f in battery.functions() {
                worst = fold_max(worst, relative_deviation(a.evaluate(f, &p)?, b.evaluate(f, &p)?));
            }
        }
    }
    Ok(worst)
}

pub fn germ_equal(g1: &ArrowGerm, g2: &ArrowGerm, radii: &[f64], battery: &Battery, tol: f64) -> Result<bool> {
    Ok(germ_deviation(g1, g2, radii, battery)? <= tol)
}

/// Deviation from `Δ_x(ξ) = ξ ⊗ ξ` and `ε_x(ξ) = 1`. The comultiplication
/// is compared with `ξ ⊗ ξ` after localizing the first leg near `x`, on
/// battery pairs and grid points of the half normalization cube.
pub fn grouplike_deviation(g: &ArrowGerm, battery: &Battery) -> Result<f64> {
    let w = &g.witness;
    let counit = w.counit().eval(&g.x)?;
    let mut worst = relative_deviation(counit, Complex64::new(1.0, 0.0));
    let r = 0.5 * g.r_norm;
    let loc = localizer(&g.x, r)?;
    let lhs = w.comultiply()?.module_act_leg(0, &loc)?;
    let rhs = TensorElement::pure(vec![w.module_act(&loc)?, w.clone()])?;
    let fs = battery.functions();
    for p in box_points(&g.x, r) {
        for (i, f) in fs.iter().enumerate() {
            let pair = [f.clone(), fs[(i + 1) % fs.len()].clone()];
            worst = fold_max(worst, relative_deviation(lhs.pair(&pair, &p)?, rhs.pair(&pair, &p)?));
        }
    }
    Ok(worst)
}

pub fn is_grouplike(g: &ArrowGerm, battery: &Battery, tol: f64) -> Result<bool> {
    Ok(grouplike_deviation(g, battery)? <= tol)
}

pub fn germ_target(g: &ArrowGerm) -> Vec<f64> {
    g.x.clone()
}

/// `T_a(f) = ε(S(f·a))`, a function on the base.
pub fn source_transform(a: &DiracSection, f: &ScalarExpr) -> Result<ScalarExpr> {
    Ok(a.module_act(f)?.antipode()?.counit())
}

/// Source of the arrow represented by `g`. For a witness `f₀·δ_h`,
/// `T_a(f)(x') = f(x'h⁻¹)·f₀(x'h⁻¹)`, so `T_a(f) = f∘τ` near `x·h` with
/// `τ(x') = x'h⁻¹` and the source is `τ⁻¹(x) = x·h`. The candidate is
/// accepted only if `T_a(p)(c) = 1` and `T_a(x_i·p)(c) = x_i` for a plateau
/// `p` inside the normalization cube.
pub fn germ_source(g: &ArrowGerm) -> Result<Vec<f64>> {
    let grp = g.groupoid();
    let h = g
        .atom()
        .ok_or_else(|| Error::ProbeFailed(format!("witness has {} terms, expected one", g.witness.len())))?;
    let c = grp.act(&g.x, h);
    let l = grp.base_dim();
    let p = if l == 0 {
        ScalarExpr::one(0)
    } else {
        ScalarExpr::plateau(&g.x, 0.25 * g.r_norm, 0.5 * g.r_norm)?
    };
    let mut probes = vec![(p.clone(), Complex64::new(1.0, 0.0))];
    for (i, xi) in ScalarExpr::coords(l).into_iter().enumerate() {
        probes.push((xi * &p, Complex64::new(g.x[i], 0.0)));
    }
    for (probe, expected) in probes {
        let got = source_transform(&g.witness, &probe)?.eval(&c)?;
        let dev = relative_deviation(got, expected);
        if !(dev <= GERM_TOL) {
            return Err(Error::ProbeFailed(format!(
                "T_a probe at {c:?} returned {got} instead of {expected}"
            )));
        }
    }
    Ok(c)
}

/// Largest `r ≤ r_max` such that the single coefficient of `w` equals 1 on
/// the grid `x + r·{−1,0,1}^l`. The set where a product of transported
/// plateaus equals 1 is convex, so checking corners suffices.
fn renormalize(x: &[f64], w: &DiracSection, r_max: f64) -> Result<f64> {
    let coef = match w.terms() {
        [t] => &t.coef,
        terms => {
            return Err(Error::ProbeFailed(format!(
                "witness has {} terms, expected one",
                terms.len()
            )))
        }
    };
    let normalized_on = |r: f64| -> bool {
        box_points(x, r)
            .iter()
            .all(|p| (coef.value(p) - Complex64::new(1.0, 0.0)).norm() <= 1e-12)
    };
    if !normalized_on(0.0) {
        return Err(Error::ProbeFailed(format!("coefficient is not 1 at {x:?}")));
    }
    if normalized_on(r_max) {
        return Ok(r_max);
    }
    let (mut lo, mut hi) = (0.0, r_max);
    for _ in 0..RENORMALIZE_STEPS {
        let mid = 0.5 * (lo + hi);
        if normalized_on(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::ProbeFailed(format!("coefficient is not 1 near {x:?}")));
    }
    Ok(lo)
}

/// `a|_y b|_x = (ab)|_y`, defined when the source of `g1` is the target of
/// `g2`.
pub fn germ_compose(g1: &ArrowGerm, g2: &ArrowGerm) -> Result<ArrowGerm> {
    let s = germ_source(g1)?;
    let gap = max_abs_diff(&s, &g2.x);
    if !(gap <= EPS_GRP * (1.0 + s.iter().fold(0.0f64, |m, v| m.max(v.abs())))) {
        return Err(Error::NotComposable { gap });
    }
    let w = g1.witness.convolve(&g2.witness)?;
    let r = renormalize(&g1.x, &w, g1.r_norm)?;
    ArrowGerm::from_parts(g1.x.clone(), w, r)
}

/// `a|_y⁻¹ = S(a)|_x` with `x` the source of `a|_y`.
pub fn germ_inverse(g: &ArrowGerm) -> Result<ArrowGerm> {
    let c = germ_source(g)?;
    let w = g.witness.antipode()?;
    let r_max = match w.terms().first().and_then(|t| t.support.as_ref()) {
        Some(b) if !c.is_empty() => b
            .bounds()
            .iter()
            .zip(&c)
            .map(|(&(lo, hi), &ci)| (ci - lo).min(hi - ci))
            .fold(f64::INFINITY, f64::min),
        _ => 4.0 * g.r_norm,
    };
    let r = renormalize(&c, &w, r_max.max(0.0))?;
    ArrowGerm::from_parts(c, w, r)
}

/// `Θ(ξ)(F) = ξ(F)(x)`; equals `F(x, h)` for a normalized witness.
pub fn theta_character(g: &ArrowGerm, f: &ScalarExpr) -> Result<Complex64> {
    g.witness.evaluate(f, &g.x)
}
