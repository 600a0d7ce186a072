//! Convergence sweeps over a parameter grid with least-squares rate fits.

use serde::{Deserialize, Serialize};

use super::comb::{comb_bound, comb_error, DensityFamily, FamilyCombCheck};
use super::mollify::{mollified_evaluate, Mollifier};
use super::stencil::fd_stencil_multi;
use super::SEMINORM_SAFETY;
use crate::dirac::DiracSection;
use crate::error::{Error, Result};
use crate::smoothfn::ScalarExpr;

/// Errors below this floor are ignored by the rate fit.
pub const ERROR_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterKind {
    /// A resolution `n`; errors decrease as `n` grows.
    N,
    /// A step or scale `t`; errors decrease as `t` shrinks.
    T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub parameter: f64,
    pub error: f64,
    pub bound: Option<f64>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub kind: ParameterKind,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted exponent `r` in `error ≈ C·n^{−r}` or `error ≈ C·t^r`.
    pub rate: Option<f64>,
}

impl ConvergenceReport {
    fn new(experiment: impl Into<String>, kind: ParameterKind, mut rows: Vec<ConvergenceRow>) -> Self {
        rows.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
        let rate = fit_rate(&rows, kind);
        Self {
            experiment: experiment.into(),
            kind,
            rows,
            rate,
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }
}

/// Least-squares slope of `log(error)` against `log(parameter)`, signed so
/// that a positive rate means convergence. `None` with fewer than two rows
/// above [`ERROR_FLOOR`].
pub fn fit_rate(rows: &[ConvergenceRow], kind: ParameterKind) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error >= ERROR_FLOOR && r.parameter > 0.0)
        .map(|r| (r.parameter.ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(match kind {
        ParameterKind::N => -slope,
        ParameterKind::T => slope,
    })
}

fn nonempty<T>(grid: &[T], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("empty {what} grid")));
    }
    Ok(())
}

/// Riemann comb on a battery of functions on `ℝ^k`. Each row records the
/// largest error over the battery, the bound of the function attaining it,
/// and whether every function met its own bound (up to the seminorm safety
/// factor).
pub fn comb_sweep(functions: &[ScalarExpr], l: f64, k: usize, ns: &[usize]) -> Result<ConvergenceReport> {
    nonempty(ns, "n")?;
    nonempty(functions, "function")?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut worst = (f64::NEG_INFINITY, 0.0);
        let mut satisfied = true;
        for f in functions {
            let e = comb_error(f, l, n, k)?;
            let b = comb_bound(f, l, n, k)?;
            satisfied &= e <= SEMINORM_SAFETY * b;
            if e > worst.0 {
                worst = (e, b);
            }
        }
        rows.push(ConvergenceRow {
            parameter: n as f64,
            error: worst.0,
            bound: Some(worst.1),
            satisfied,
        });
    }
    Ok(ConvergenceReport::new(
        format!("comb(k={k}, L={l})"),
        ParameterKind::N,
        rows,
    ))
}

/// Derivative-level family comb over a battery of functions, base points and
/// multi-indices.
pub fn family_comb_sweep(
    phi: &DensityFamily,
    functions: &[ScalarExpr],
    l: f64,
    ns: &[usize],
    points: &[Vec<f64>],
    alphas: &[Vec<usize>],
) -> Result<ConvergenceReport> {
    nonempty(ns, "n")?;
    nonempty(functions, "function")?;
    let checks = functions
        .iter()
        .map(|f| FamilyCombCheck::new(phi, f, l, points, alphas))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut worst = (f64::NEG_INFINITY, 0.0);
        let mut satisfied = true;
        for check in &checks {
            for r in check.rows(n)? {
                satisfied &= r.satisfied;
                if r.error > worst.0 {
                    worst = (r.error, r.bound);
                }
            }
        }
        rows.push(ConvergenceRow {
            parameter: n as f64,
            error: worst.0,
            bound: Some(worst.1),
            satisfied,
        });
    }
    Ok(ConvergenceReport::new(
        format!("family-comb(L={l})"),
        ParameterKind::N,
        rows,
    ))
}

/// `|Δ_t^β(y)(F) − D^β F(y)|` over a grid of steps.
pub fn stencil_sweep(f: &ScalarExpr, beta: &[usize], y: &[f64], ts: &[f64]) -> Result<ConvergenceReport> {
    nonempty(ts, "t")?;
    let exact = f.multi_derive(beta)?.eval(y)?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let approx = fd_stencil_multi(beta, t, y)?.evaluate(f, &[])?;
        rows.push(ConvergenceRow {
            parameter: t,
            error: (approx - exact).norm(),
            bound: None,
            satisfied: true,
        });
    }
    Ok(ConvergenceReport::new(
        format!("stencil(beta={beta:?})"),
        ParameterKind::T,
        rows,
    ))
}

/// `sup |T_{u*ρ_t}(F)(x) − u(F)(x)|` over sections, functions and points.
pub fn mollify_sweep(
    sections: &[DiracSection],
    rho: &Mollifier,
    functions: &[ScalarExpr],
    points: &[Vec<f64>],
    ts: &[f64],
) -> Result<ConvergenceReport> {
    nonempty(ts, "t")?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut worst: f64 = 0.0;
        for u in sections {
            for f in functions {
                for x in points {
                    let smooth = mollified_evaluate(u, rho, t, f, x)?;
                    worst = crate::fold_max(worst, (smooth - u.evaluate(f, x)?).norm());
                }
            }
        }
        rows.push(ConvergenceRow {
            parameter: t,
            error: worst,
            bound: None,
            satisfied: true,
        });
    }
    Ok(ConvergenceReport::new("mollify", ParameterKind::T, rows))
}
