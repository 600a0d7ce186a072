use num_complex::Complex64;

use super::ORACLE_CELLS;
use crate::dirac::DiracSection;
use crate::error::{Error, Result};
use crate::smoothfn::{integrate_with, Cuboid, ScalarExpr};

/// A compactly supported profile `ρ` on `ℝ^k` with its support box and
/// total mass `Z`.
#[derive(Clone, Debug)]
pub struct Mollifier {
    rho: ScalarExpr,
    support: Cuboid,
    mass: f64,
}

impl Mollifier {
    pub fn new(rho: ScalarExpr) -> Result<Self> {
        let support = rho.support().ok_or(Error::MissingSupport { term: 0 })?;
        let mass = rho.integrate_box(&support, 4 * ORACLE_CELLS)?.re;
        if !(mass.is_finite() && mass.abs() > 0.0) {
            return Err(Error::InvalidParameter(format!("mollifier mass {mass}")));
        }
        Ok(Self { rho, support, mass })
    }

    pub fn rho(&self) -> &ScalarExpr {
        &self.rho
    }

    pub fn support(&self) -> &Cuboid {
        &self.support
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Support of `ρ_t(· − y)`.
    pub fn scaled_support(&self, t: f64, y: &[f64]) -> Cuboid {
        let bounds = self
            .support
            .bounds()
            .iter()
            .zip(y)
            .map(|(&(a, b), &c)| (c + t * a, c + t * b))
            .collect();
        Cuboid::new(bounds).expect("scaled support of a valid box")
    }

    /// `ρ_t(y − shift) = t^{−k} ρ((y − shift)/t) / Z` as a function of the
    /// coordinates `offset … offset+k−1` of `ℝ^dim`.
    fn scaled(&self, t: f64, shift: &[f64], dim: usize, offset: usize) -> Result<ScalarExpr> {
        let k = self.dim();
        let map: Vec<ScalarExpr> = (0..k)
            .map(|j| (ScalarExpr::coord(dim, offset + j) + (-shift[j])) * (1.0 / t))
            .collect();
        let factor = t.powi(-(k as i32)) / self.mass;
        Ok(self.rho.substitute(dim, &map)? * factor)
    }
}

/// The standard mollifier: the bump of radius 1 on `ℝ^k`.
pub fn normalized_mollifier(k: usize) -> Result<Mollifier> {
    Mollifier::new(ScalarExpr::bump(&vec![0.0; k], 1.0)?)
}

fn check_scale(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("mollifier scale {t}")));
    }
    Ok(())
}

/// `φ(x, y) = Σ_i f_i(x)·ρ_t(y − y_i)`, the density of `u * ρ_t`.
pub fn mollify(u: &DiracSection, rho: &Mollifier, t: f64) -> Result<ScalarExpr> {
    check_scale(t)?;
    let g = u.groupoid();
    let (l, k) = (g.base_dim(), g.group_dim());
    if rho.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: rho.dim(),
        });
    }
    let n = l + k;
    let mut parts = Vec::with_capacity(u.len());
    for term in u.terms() {
        let coef = term.coef.embed(n, 0)?;
        parts.push(coef * rho.scaled(t, &term.atom, n, l)?);
    }
    Ok(ScalarExpr::sum_of(n, parts))
}

/// `∫ ρ_t(y) dy` computed from the closed form of `mollify(δ_0, ρ, t)`.
pub fn mollifier_mass(rho: &Mollifier, t: f64) -> Result<f64> {
    check_scale(t)?;
    let k = rho.dim();
    let origin = vec![0.0; k];
    let density = rho.scaled(t, &origin, k, 0)?;
    Ok(density.integrate_box(&rho.scaled_support(t, &origin), ORACLE_CELLS)?.re)
}

/// `T_φ(F)(x)` for `φ = mollify(u, ρ, t)`, integrating each term over the
/// support of its translated profile.
pub fn mollified_evaluate(u: &DiracSection, rho: &Mollifier, t: f64, f: &ScalarExpr, x: &[f64]) -> Result<Complex64> {
    check_scale(t)?;
    let g = u.groupoid();
    let (l, k) = (g.base_dim(), g.group_dim());
    if f.dim() != l + k || x.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l + k,
            actual: f.dim(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for term in u.terms() {
        let c = term.coef.value(x);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let profile = rho.scaled(t, &term.atom, k, 0)?;
        let domain = rho.scaled_support(t, &term.atom);
        let integral = integrate_with(&domain, ORACLE_CELLS, |y| {
            let mut p = x.to_vec();
            p.extend_from_slice(y);
            profile.value(y) * f.value(&p)
        });
        acc += c * integral;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::catalog;

    #[test]
    fn bump_mass_matches_reference() {
        let rho = normalized_mollifier(1).unwrap();
        assert!((rho.mass() - 0.443_993_816_168_078_65).abs() < 1e-9);
        for t in [1.0, 0.1, 0.01] {
            assert!((mollifier_mass(&rho, t).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn mollified_delta_is_the_rescaled_profile() {
        let g = Arc::new(catalog::trivial_bundle(0, 1));
        let rho = normalized_mollifier(1).unwrap();
        let u = DiracSection::delta(&g, vec![0.0]).unwrap();
        let phi = mollify(&u, &rho, 0.5).unwrap();
        for y in [-0.4, 0.0, 0.3] {
            let expected = rho.rho().eval(&[y / 0.5]).unwrap().re / 0.5 / rho.mass();
            assert!((phi.eval(&[y]).unwrap().re - expected).abs() < 1e-14);
        }
    }
}
