use rayon::prelude::*;

use super::{Cuboid, ScalarExpr};
use crate::error::{Error, Result};

/// Default grid resolution per axis for a box of dimension `dim`.
pub fn default_grid(dim: usize) -> usize {
    match dim {
        0..=2 => 257,
        3 | 4 => 33,
        _ => 9,
    }
}

/// A multi-index and, except for zero, `(parent, axis)`: the index of the
/// multi-index one order lower and the coordinate that was raised.
type Indexed = (Vec<usize>, Option<(usize, usize)>);

/// All multi-indices of length `dim` and order at most `m`, lowest order
/// first.
fn multi_indices(dim: usize, m: usize) -> Vec<Indexed> {
    let mut out = vec![(vec![0; dim], None)];
    let mut level = vec![0usize];
    for _ in 0..m {
        let mut next = Vec::new();
        for &parent in &level {
            let alpha = out[parent].0.clone();
            // Only raise coordinates at or after the last raised one, so each
            // index is produced once.
            let start = alpha.iter().rposition(|&a| a > 0).unwrap_or(0);
            for i in start..dim {
                let mut beta = alpha.clone();
                beta[i] += 1;
                out.push((beta, Some((parent, i))));
                next.push(out.len() - 1);
            }
        }
        level = next;
    }
    out
}

pub(crate) fn seminorm(e: &ScalarExpr, domain: &Cuboid, m: usize, grid: usize) -> Result<f64> {
    if domain.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            actual: domain.dim(),
        });
    }
    if grid < 2 && e.dim() > 0 {
        return Err(Error::InvalidParameter(
            "seminorm grid needs at least 2 points per axis".into(),
        ));
    }
    let indices = multi_indices(e.dim(), m);
    let mut derivatives: Vec<ScalarExpr> = Vec::with_capacity(indices.len());
    for (_, parent) in &indices {
        let d = match parent {
            None => e.clone(),
            Some((p, i)) => derivatives[*p].derive(*i)?,
        };
        derivatives.push(d);
    }
    let points = domain.grid(grid);
    let sup = points
        .par_iter()
        .map(|p| derivatives.iter().map(|d| d.value(p).norm()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}
