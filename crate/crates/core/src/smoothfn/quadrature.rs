//! Composite tensor-product Gauss–Legendre quadrature.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::Cuboid;

/// Gauss–Legendre points per cell and axis.
pub const GAUSS_ORDER: usize = 10;

/// Nodes and weights of the `GAUSS_ORDER`-point rule on `[−1, 1]`.
pub fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GAUSS_ORDER))
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Per-axis `(node, weight)` lists of the composite rule on `[a, b]`.
fn axis_rule(a: f64, b: f64, cells: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / cells as f64;
    let mut out = Vec::with_capacity(cells * GAUSS_ORDER);
    for c in 0..cells {
        let lo = a + h * c as f64;
        for &(x, w) in gauss_legendre() {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// Integrates `f` over `domain` with `cells` cells per axis. Partial sums are
/// combined in a fixed order, so the result does not depend on scheduling.
pub fn integrate_with<F>(domain: &Cuboid, cells: usize, f: F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let cells = cells.max(1);
    let d = domain.dim();
    if d == 0 {
        return f(&[]);
    }
    let axes: Vec<Vec<(f64, f64)>> = domain.bounds().iter().map(|&(a, b)| axis_rule(a, b, cells)).collect();
    let partial: Vec<Complex64> = axes[0]
        .par_iter()
        .map(|&(x0, w0)| {
            let mut point = vec![0.0; d];
            point[0] = x0;
            w0 * inner_sum(&axes, 1, &mut point, &f)
        })
        .collect();
    partial.into_iter().sum()
}

fn inner_sum<F>(axes: &[Vec<(f64, f64)>], axis: usize, point: &mut [f64], f: &F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64,
{
    if axis == axes.len() {
        return f(point);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in &axes[axis] {
        point[axis] = x;
        acc += w * inner_sum(axes, axis + 1, point, f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_high_degree_monomials() {
        let rule = gauss_legendre();
        assert_eq!(rule.len(), GAUSS_ORDER);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        for deg in 0..2 * GAUSS_ORDER {
            let q: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn two_dimensional_product() {
        let d = Cuboid::new(vec![(0.0, 1.0), (0.0, 2.0)]).unwrap();
        let v = integrate_with(&d, 2, |p| Complex64::new(p[0] * p[1] * p[1], 0.0));
        // ∫₀¹ x dx · ∫₀² y² dy = 1/2 · 8/3
        assert!((v.re - 4.0 / 3.0).abs() < 1e-14);
    }
}
