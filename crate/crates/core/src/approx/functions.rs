use crate::error::{Error, Result};
use crate::smoothfn::ScalarExpr;

/// Ten fixed smooth functions on `ℝ^k`, built from `y₀`, `s = Σ y_i` and
/// `q = Σ y_i²`. Odd and even profiles are mixed so that the battery
/// contains both first- and second-order Riemann-sum errors.
pub fn standard_functions(k: usize) -> Result<Vec<ScalarExpr>> {
    if k == 0 {
        return Err(Error::InvalidParameter("standard functions need k ≥ 1".into()));
    }
    let y = ScalarExpr::coords(k);
    let s = ScalarExpr::sum_of(k, y.iter().cloned());
    let q = ScalarExpr::sum_of(k, y.iter().map(|c| c.powi(2)));
    let y0 = y[0].clone();
    Ok(vec![
        y0.clone(),
        s.powi(2),
        s.powi(3) + s.clone(),
        s.exp(),
        (y0.clone() * 3.0).sin() + s.cos(),
        (-q.clone()).exp(),
        y0 * s.exp(),
        (s.clone() * 0.25 + 1.0).powi(4),
        (s * 2.0).cos(),
        (q + 1.0).powi(-1),
    ])
}
