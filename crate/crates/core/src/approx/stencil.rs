use std::sync::Arc;

use crate::dirac::{DiracSection, Term};
use crate::error::{Error, Result};
use crate::groupoid::catalog;
use crate::smoothfn::{Cuboid, ScalarExpr};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `(weight, offset)` pairs of `Δ_t^n`: `(2t)^{−n}(−1)^j C(n,j)` at
/// `(n − 2j)t`.
fn stencil_1d(n: usize, t: f64) -> Vec<(f64, f64)> {
    let scale = (2.0 * t).powi(-(n as i32));
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (sign * binomial(n, j) * scale, (n as f64 - 2.0 * j as f64) * t)
        })
        .collect()
}

fn check_step(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("stencil step {t}")));
    }
    Ok(())
}

/// `Δ_t^n(y) = (2t)^{−n} Σ_j (−1)^j C(n,j) δ_{y+(n−2j)t}`, converging to the
/// evaluation of the `n`-th derivative at `y`.
pub fn fd_stencil(n: usize, t: f64, y: f64) -> Result<DiracSection> {
    fd_stencil_multi(&[n], t, &[y])
}

/// `Δ_t^β(y) = Δ_t^{β_1}(y_1) ⊗ … ⊗ Δ_t^{β_k}(y_k)`.
pub fn fd_stencil_multi(beta: &[usize], t: f64, y: &[f64]) -> Result<DiracSection> {
    check_step(t)?;
    if beta.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: beta.len(),
            actual: y.len(),
        });
    }
    let k = y.len();
    let g = Arc::new(catalog::trivial_bundle(0, k));
    let mut terms = vec![(1.0, Vec::with_capacity(k))];
    for (&n, &yi) in beta.iter().zip(y) {
        let axis = stencil_1d(n, t);
        terms = terms
            .into_iter()
            .flat_map(|(w, atom): (f64, Vec<f64>)| {
                axis.iter().map(move |&(c, off)| {
                    let mut a = atom.clone();
                    a.push(yi + off);
                    (w * c, a)
                })
            })
            .collect();
    }
    let terms = terms
        .into_iter()
        .map(|(w, atom)| Term {
            coef: ScalarExpr::real(0, w),
            support: Some(Cuboid::point()),
            atom,
        })
        .collect();
    DiracSection::new(&g, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(u: &DiracSection, f: &ScalarExpr) -> f64 {
        u.evaluate(f, &[]).unwrap().re
    }

    #[test]
    fn spot_values() {
        let y = ScalarExpr::coord(1, 0);
        let sq = y.powi(2);
        assert!((apply(&fd_stencil(1, 0.1, 1.0).unwrap(), &sq) - 2.0).abs() < 1e-14);
        for t in [0.3, 0.1, 0.01] {
            assert!((apply(&fd_stencil(2, t, 0.0).unwrap(), &sq) - 2.0).abs() < 1e-10);
        }
        let d0 = fd_stencil(0, 0.1, 0.7).unwrap();
        assert_eq!(d0.len(), 1);
        assert_eq!(d0.terms()[0].atom, vec![0.7]);
        let y2 = ScalarExpr::coords(2);
        let bil = &y2[0] * &y2[1];
        let mixed = fd_stencil_multi(&[1, 1], 0.1, &[0.0, 0.0]).unwrap();
        assert!((apply(&mixed, &bil) - 1.0).abs() < 1e-14);
        let zero = fd_stencil_multi(&[0, 0], 0.1, &[0.2, 0.3]).unwrap();
        assert_eq!(zero.terms()[0].atom, vec![0.2, 0.3]);
    }
}
