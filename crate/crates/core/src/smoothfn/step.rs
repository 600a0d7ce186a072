//! The smooth step `σ(s) = b(s) / (b(s) + b(1 − s))`, `b(s) = exp(−1/s)` for
//! `s > 0` and `0` otherwise, together with all of its derivatives.
//!
//! Derivatives are computed with truncated Taylor arithmetic, so the value of
//! `σ⁽ⁿ⁾(s)` is exact up to rounding for any order `n`.

/// Exponent arguments below this threshold are treated as exact zeros.
pub(crate) const EXP_FLOOR: f64 = -700.0;

/// `n`-th derivative of `σ` at `s`.
pub fn step_derivative(s: f64, order: u32) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let len = order as usize + 1;
    let q = 1.0 - s;

    // −1/(s + ε) and −1/(q − ε) as truncated series in ε.
    let mut a = vec![0.0; len];
    let mut b = vec![0.0; len];
    let (mut ps, mut pq) = (1.0 / s, 1.0 / q);
    for k in 0..len {
        a[k] = if k % 2 == 0 { -ps } else { ps };
        b[k] = -pq;
        ps /= s;
        pq /= q;
    }
    let g = if a[0] < EXP_FLOOR {
        vec![0.0; len]
    } else {
        exp_series(&a)
    };
    let h = if b[0] < EXP_FLOOR {
        vec![0.0; len]
    } else {
        exp_series(&b)
    };
    let den: Vec<f64> = g.iter().zip(&h).map(|(x, y)| x + y).collect();
    let sigma = div_series(&g, &den);
    let factorial: f64 = (1..=order).map(f64::from).product();
    sigma[order as usize] * factorial
}

fn exp_series(a: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; a.len()];
    e[0] = a[0].exp();
    for k in 1..a.len() {
        let acc: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
        e[k] = acc / k as f64;
    }
    e
}

fn div_series(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; num.len()];
    for k in 0..num.len() {
        let acc: f64 = (1..=k).map(|j| den[j] * q[k - j]).sum();
        q[k] = (num[k] - acc) / den[0];
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(s: f64) -> f64 {
        let b = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
        b(s) / (b(s) + b(1.0 - s))
    }

    #[test]
    fn endpoints_are_exact() {
        assert_eq!(step_derivative(-0.5, 0), 0.0);
        assert_eq!(step_derivative(0.0, 0), 0.0);
        assert_eq!(step_derivative(1.0, 0), 1.0);
        assert_eq!(step_derivative(3.0, 2), 0.0);
        assert!((step_derivative(0.5, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &s in &[0.05, 0.2, 0.5, 0.71, 0.93] {
            let fd1 = (sigma(s + h) - sigma(s - h)) / (2.0 * h);
            let d1 = step_derivative(s, 1);
            assert!((d1 - fd1).abs() < 1e-6 * (1.0 + fd1.abs()), "s={s}");
            let fd2 = (step_derivative(s + h, 1) - step_derivative(s - h, 1)) / (2.0 * h);
            let d2 = step_derivative(s, 2);
            assert!((d2 - fd2).abs() < 1e-5 * (1.0 + fd2.abs()), "s={s}");
            let fd4 = (step_derivative(s + h, 3) - step_derivative(s - h, 3)) / (2.0 * h);
            let d4 = step_derivative(s, 4);
            assert!((d4 - fd4).abs() < 1e-4 * (1.0 + fd4.abs()), "s={s}");
        }
    }

    #[test]
    fn finite_near_the_edges() {
        for &s in &[1e-300, 1e-6, 1e-3, 1.0 - 1e-3, 1.0 - 1e-12] {
            for n in 0..6 {
                assert!(step_derivative(s, n).is_finite());
            }
        }
    }
}
