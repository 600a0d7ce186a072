use std::sync::Arc;

use num_complex::Complex64;

use super::rational::Rational;
use super::step::{step_derivative, EXP_FLOOR};

pub(crate) type Expr = Arc<Node>;

/// Expression tree node. Nodes are immutable and shared through [`Arc`].
#[derive(Debug, PartialEq)]
pub(crate) enum Node {
    Const(Complex64),
    Coord(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Expr),
    Pow(Expr, i32),
    Exp(Expr),
    Sin(Expr),
    Cos(Expr),
    /// `exp(1/(u²−1))` for `|u| < 1`, else 0, with `u = (arg − center)/radius`.
    Bump {
        arg: Expr,
        center: f64,
        radius: f64,
    },
    /// Smooth indicator: 1 for `|arg − center| ≤ inner`, 0 for `≥ outer`.
    Plateau {
        arg: Expr,
        center: f64,
        inner: f64,
        outer: f64,
    },
    /// `P(u)/(u²−1)^m` strictly inside `|u| < 1`, else 0. Only produced as a
    /// factor next to the [`Node::Bump`] with the same parameters.
    Guarded {
        arg: Expr,
        center: f64,
        radius: f64,
        ratio: Rational,
    },
    /// `σ⁽ᵒʳᵈᵉʳ⁾((arg − edge)/width)` where σ is the one-sided smooth step
    /// used by plateaus; `width` may be negative for a falling edge.
    Step {
        arg: Expr,
        edge: f64,
        width: f64,
        order: u32,
    },
}

impl Node {
    pub(crate) fn eval(&self, p: &[f64]) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::Coord(i) => Complex64::new(p[*i], 0.0),
            Node::Sum(terms) => terms.iter().map(|t| t.eval(p)).sum(),
            Node::Product(factors) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in factors {
                    let v = f.eval(p);
                    if v == Complex64::new(0.0, 0.0) {
                        return v;
                    }
                    acc *= v;
                }
                acc
            }
            Node::Neg(a) => -a.eval(p),
            Node::Pow(a, n) => a.eval(p).powi(*n),
            Node::Exp(a) => a.eval(p).exp(),
            Node::Sin(a) => a.eval(p).sin(),
            Node::Cos(a) => a.eval(p).cos(),
            Node::Bump { arg, center, radius } => {
                let u = (arg.eval(p).re - center) / radius;
                real(bump_exponent(u).map_or(0.0, f64::exp))
            }
            Node::Guarded {
                arg,
                center,
                radius,
                ratio,
            } => {
                let u = (arg.eval(p).re - center) / radius;
                real(bump_exponent(u).map_or(0.0, |_| ratio.eval(u)))
            }
            Node::Plateau {
                arg,
                center,
                inner,
                outer,
            } => {
                let a = arg.eval(p).re;
                let (rise, fall, w) = plateau_edges(*center, *inner, *outer);
                let v = step_derivative((a - rise) / w, 0) * step_derivative((a - fall) / -w, 0);
                real(v)
            }
            Node::Step {
                arg,
                edge,
                width,
                order,
            } => {
                let a = arg.eval(p).re;
                real(step_derivative((a - edge) / width, *order))
            }
        }
    }

    pub(crate) fn as_const(&self) -> Option<Complex64> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    pub(crate) fn count(&self) -> usize {
        1 + match self {
            Node::Const(_) | Node::Coord(_) => 0,
            Node::Sum(v) | Node::Product(v) => v.iter().map(|c| c.count()).sum(),
            Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => a.count(),
            Node::Bump { arg, .. } | Node::Plateau { arg, .. } | Node::Guarded { arg, .. } | Node::Step { arg, .. } => {
                arg.count()
            }
        }
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `1/(u²−1)` when it is above the underflow floor, `None` otherwise
/// (including `|u| ≥ 1`).
fn bump_exponent(u: f64) -> Option<f64> {
    if u.abs() >= 1.0 {
        return None;
    }
    let e = 1.0 / (u * u - 1.0);
    (e >= EXP_FLOOR).then_some(e)
}

/// Rising edge, falling edge and transition width of a plateau.
pub(crate) fn plateau_edges(center: f64, inner: f64, outer: f64) -> (f64, f64, f64) {
    (center - outer, center + outer, outer - inner)
}
