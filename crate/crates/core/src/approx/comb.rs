use std::sync::Arc;

use num_complex::Complex64;

use super::{ORACLE_CELLS, SEMINORM_SAFETY};
use crate::dirac::{DiracSection, Term};
use crate::error::{Error, Result};
use crate::groupoid::catalog;
use crate::smoothfn::{default_grid, integrate_with, Cuboid, ScalarExpr};

/// Grid `t_j = −L/2 + jL/n`, `j = 0 … n−1`, in every coordinate.
pub fn riemann_nodes(l: f64, n: usize, k: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..n).map(|j| -l / 2.0 + j as f64 * l / n as f64).collect();
    let mut points = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    points
}

fn check_comb(l: f64, n: usize) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("comb side {l}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("comb needs n ≥ 1".into()));
    }
    Ok(())
}

/// `Δ_n = (L/n)^k Σ_{t∈I} δ_t` over a point base with fiber `ℝ^k`.
pub fn riemann_comb(l: f64, n: usize, k: usize) -> Result<DiracSection> {
    check_comb(l, n)?;
    let g = Arc::new(catalog::trivial_bundle(0, k));
    let w = (l / n as f64).powi(k as i32);
    let terms = riemann_nodes(l, n, k)
        .into_iter()
        .map(|t| Term {
            coef: ScalarExpr::real(0, w),
            support: Some(Cuboid::point()),
            atom: t,
        })
        .collect();
    DiracSection::new(&g, terms)
}

/// `kL^{k+1}/n · p_{D,1}(F)` with `D = [−L/2, L/2]^k` and the grid-sampled
/// seminorm.
pub fn comb_bound(f: &ScalarExpr, l: f64, n: usize, k: usize) -> Result<f64> {
    check_comb(l, n)?;
    let d = Cuboid::centered_cube(k, l)?;
    let p = f.seminorm(&d, 1, default_grid(k))?;
    Ok(k as f64 * l.powi(k as i32 + 1) / n as f64 * p)
}

/// `|∫_D F − Δ_n(F)|`.
pub fn comb_error(f: &ScalarExpr, l: f64, n: usize, k: usize) -> Result<f64> {
    let d = Cuboid::centered_cube(k, l)?;
    let exact = f.integrate_box(&d, ORACLE_CELLS)?;
    let approx = riemann_comb(l, n, k)?.evaluate(f, &[])?;
    Ok((exact - approx).norm())
}

/// A smooth family of densities `φ(x, y)` on `ℝ^l × ℝ^k` with compact
/// support, defining `T_φ(F)(x) = ∫ φ(x,y)F(x,y) dy`.
#[derive(Clone, Debug)]
pub struct DensityFamily {
    phi: ScalarExpr,
    base_dim: usize,
    support: Cuboid,
}

impl DensityFamily {
    pub fn new(phi: ScalarExpr, base_dim: usize, support: Cuboid) -> Result<Self> {
        if base_dim > phi.dim() || support.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim(),
                actual: support.dim(),
            });
        }
        Ok(Self { phi, base_dim, support })
    }

    /// Uses the support box read off from the expression.
    pub fn from_expr(phi: ScalarExpr, base_dim: usize) -> Result<Self> {
        let support = phi.support().ok_or(Error::MissingSupport { term: 0 })?;
        Self::new(phi, base_dim, support)
    }

    pub fn phi(&self) -> &ScalarExpr {
        &self.phi
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.phi.dim() - self.base_dim
    }

    pub fn support(&self) -> &Cuboid {
        &self.support
    }

    pub fn base_support(&self) -> Cuboid {
        Cuboid::new(self.support.bounds()[..self.base_dim].to_vec()).expect("sub-box of a valid box")
    }

    pub fn fiber_support(&self) -> Cuboid {
        Cuboid::new(self.support.bounds()[self.base_dim..].to_vec()).expect("sub-box of a valid box")
    }

    /// `T_φ(F)(x)` by quadrature over the fiber support.
    pub fn apply(&self, f: &ScalarExpr, x: &[f64]) -> Result<Complex64> {
        self.integrate_fiber(&(&self.phi * f), x)
    }

    /// `∫ G(x, y) dy` over the fiber support of `φ`.
    pub fn integrate_fiber(&self, g: &ScalarExpr, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.base_dim || g.dim() != self.phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base_dim,
                actual: x.len(),
            });
        }
        let fiber = self.fiber_support();
        Ok(integrate_with(&fiber, ORACLE_CELLS, |y| {
            let mut p = x.to_vec();
            p.extend_from_slice(y);
            g.value(&p)
        }))
    }

    fn check_fits(&self, l: f64) -> Result<()> {
        let cube = Cuboid::centered_cube(self.fiber_dim(), l)?;
        if !cube.includes(&self.fiber_support()) {
            return Err(Error::SupportExceedsBox {
                support: self.fiber_support().bounds().to_vec(),
                side: l,
            });
        }
        Ok(())
    }
}

/// `Δ_{φ,n}(F)(x) = (L/n)^k Σ_{t∈I} φ(x,t)F(x,t)`, a section over `ℝ^l` with
/// fiber `ℝ^k` acted on trivially.
pub fn family_comb(phi: &DensityFamily, l: f64, n: usize) -> Result<DiracSection> {
    check_comb(l, n)?;
    phi.check_fits(l)?;
    let (b, k) = (phi.base_dim(), phi.fiber_dim());
    let g = Arc::new(catalog::trivial_bundle(b, k));
    let w = (l / n as f64).powi(k as i32);
    let base_support = phi.base_support();
    let mut terms = Vec::new();
    for t in riemann_nodes(l, n, k) {
        let mut map = ScalarExpr::coords(b);
        map.extend(t.iter().map(|&v| ScalarExpr::real(b, v)));
        let coef = phi.phi().substitute(b, &map)? * w;
        terms.push(Term {
            coef,
            support: Some(base_support.clone()),
            atom: t,
        });
    }
    DiracSection::new(&g, terms)
}

/// One row of a derivative-level family-comb comparison.
#[derive(Clone, Debug)]
pub struct FamilyCombRow {
    pub x: Vec<f64>,
    pub alpha: Vec<usize>,
    pub error: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// `|D^α_x(T_φ(F) − Δ_{φ,n}(F))(x)|` at each `x` and each `α` in `alphas`,
/// with the bound `kL^{k+1}/n · p_{K×D,|α|+1}(φF)` where `K` is the base
/// support of `φ` and `D = [−L/2, L/2]^k`.
pub fn family_comb_error(
    phi: &DensityFamily,
    f: &ScalarExpr,
    l: f64,
    n: usize,
    points: &[Vec<f64>],
    alphas: &[Vec<usize>],
) -> Result<Vec<FamilyCombRow>> {
    FamilyCombCheck::new(phi, f, l, points, alphas)?.rows(n)
}

/// Derivatives and seminorms of `φF` prepared once for comparisons at
/// several resolutions `n`.
#[derive(Clone, Debug)]
pub struct FamilyCombCheck {
    phi: DensityFamily,
    l: f64,
    points: Vec<Vec<f64>>,
    alphas: Vec<Vec<usize>>,
    derivatives: Vec<ScalarExpr>,
    seminorms: Vec<f64>,
}

impl FamilyCombCheck {
    pub fn new(
        phi: &DensityFamily,
        f: &ScalarExpr,
        l: f64,
        points: &[Vec<f64>],
        alphas: &[Vec<usize>],
    ) -> Result<Self> {
        check_comb(l, 1)?;
        phi.check_fits(l)?;
        let (b, k) = (phi.base_dim(), phi.fiber_dim());
        let product = phi.phi() * f;
        let domain = phi.base_support().product(&Cuboid::centered_cube(k, l)?);
        let mut derivatives = Vec::with_capacity(alphas.len());
        let mut seminorms = Vec::with_capacity(alphas.len());
        for alpha in alphas {
            if alpha.len() != b {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    actual: alpha.len(),
                });
            }
            let mut full = alpha.clone();
            full.extend(std::iter::repeat_n(0, k));
            derivatives.push(product.multi_derive(&full)?);
            let order: usize = alpha.iter().sum();
            seminorms.push(product.seminorm(&domain, order + 1, default_grid(b + k))?);
        }
        Ok(Self {
            phi: phi.clone(),
            l,
            points: points.to_vec(),
            alphas: alphas.to_vec(),
            derivatives,
            seminorms,
        })
    }

    pub fn rows(&self, n: usize) -> Result<Vec<FamilyCombRow>> {
        check_comb(self.l, n)?;
        let (b, k) = (self.phi.base_dim(), self.phi.fiber_dim());
        let nodes = riemann_nodes(self.l, n, k);
        let w = (self.l / n as f64).powi(k as i32);
        let mut rows = Vec::new();
        for ((alpha, d), p) in self.alphas.iter().zip(&self.derivatives).zip(&self.seminorms) {
            let bound = k as f64 * self.l.powi(k as i32 + 1) / n as f64 * p;
            for x in &self.points {
                let exact = self.phi.integrate_fiber(d, x)?;
                let mut sum = Complex64::new(0.0, 0.0);
                let mut q = x.clone();
                for t in &nodes {
                    q.truncate(b);
                    q.extend_from_slice(t);
                    sum += d.value(&q);
                }
                let error = (exact - sum * w).norm();
                rows.push(FamilyCombRow {
                    x: x.clone(),
                    alpha: alpha.clone(),
                    error,
                    bound,
                    satisfied: error <= SEMINORM_SAFETY * bound,
                });
            }
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_spot_values() {
        let y = ScalarExpr::coord(1, 0);
        let sum = riemann_comb(1.0, 4, 1).unwrap().evaluate(&y.powi(2), &[]).unwrap();
        assert!((sum.re - 0.09375).abs() < 1e-15);
        let err = comb_error(&y.powi(2), 1.0, 4, 1).unwrap();
        assert!((err - 0.010_416_666_666_666_666).abs() < 1e-12);
        assert!((comb_bound(&y.powi(2), 1.0, 4, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((comb_error(&y, 1.0, 10, 1).unwrap() - 0.05).abs() < 1e-15);
        assert!((comb_bound(&y, 1.0, 10, 1).unwrap() - 0.1).abs() < 1e-15);
        let one2 = ScalarExpr::one(2);
        let v = riemann_comb(1.0, 2, 2).unwrap().evaluate(&one2, &[]).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
        assert_eq!(riemann_comb(1.0, 3, 2).unwrap().len(), 9);
    }

    #[test]
    fn family_comb_of_separable_density() {
        let f = ScalarExpr::bump(&[0.0], 1.0).unwrap();
        let y = ScalarExpr::coord(2, 1);
        let phi = f.embed(2, 0).unwrap() * ScalarExpr::bump1d(2, 1, 0.0, 0.5).unwrap() * (y.clone() + 2.0);
        let fam = DensityFamily::from_expr(phi, 1).unwrap();
        let comb = family_comb(&fam, 1.0, 4).unwrap();
        // the node −0.5 sits on the edge of the bump and its term vanishes
        assert_eq!(comb.len(), 3);
        let t = comb.terms()[0].atom[0];
        assert_eq!(t, -0.25);
        let g_t = ScalarExpr::bump(&[0.0], 0.5).unwrap().eval(&[t]).unwrap().re * (t + 2.0);
        let c = comb.terms()[0].coef.eval(&[0.3]).unwrap().re;
        assert!((c - 0.25 * f.eval(&[0.3]).unwrap().re * g_t).abs() < 1e-15);
        assert!(family_comb(&fam, 0.5, 4).is_err());
    }
}
