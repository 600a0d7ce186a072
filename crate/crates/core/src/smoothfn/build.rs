//! Smart constructors: flattening, constant folding and merging of guarded
//! factors. This is the only simplification performed on expressions.

use std::sync::Arc;

use num_complex::Complex64;

use super::node::{Expr, Node};

pub(crate) fn constant(c: Complex64) -> Expr {
    Arc::new(Node::Const(c))
}

pub(crate) fn real(v: f64) -> Expr {
    constant(Complex64::new(v, 0.0))
}

pub(crate) fn zero() -> Expr {
    real(0.0)
}

pub(crate) fn one() -> Expr {
    real(1.0)
}

pub(crate) fn coord(i: usize) -> Expr {
    Arc::new(Node::Coord(i))
}

pub(crate) fn sum(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    let mut c = Complex64::new(0.0, 0.0);
    for t in terms {
        match &*t {
            Node::Const(v) => c += v,
            Node::Sum(inner) => {
                for s in inner {
                    match &**s {
                        Node::Const(v) => c += v,
                        _ => flat.push(s.clone()),
                    }
                }
            }
            _ => flat.push(t),
        }
    }
    if c != Complex64::new(0.0, 0.0) {
        flat.push(constant(c));
    }
    match flat.len() {
        0 => zero(),
        1 => flat.pop().unwrap(),
        _ => Arc::new(Node::Sum(flat)),
    }
}

pub(crate) fn product(factors: Vec<Expr>) -> Expr {
    let mut flat: Vec<Expr> = Vec::with_capacity(factors.len());
    let mut c = Complex64::new(1.0, 0.0);
    let push = |f: &Expr, flat: &mut Vec<Expr>, c: &mut Complex64| match &**f {
        Node::Const(v) => *c *= v,
        Node::Guarded {
            arg,
            center,
            radius,
            ratio,
        } => {
            // Merge with an existing guarded factor over the same interval.
            let existing = flat.iter().position(|g| {
                matches!(&**g, Node::Guarded { arg: a2, center: c2, radius: r2, .. }
                    if a2 == arg && c2 == center && r2 == radius)
            });
            match existing {
                Some(k) => {
                    if let Node::Guarded { ratio: r0, .. } = &*flat[k] {
                        let merged = r0.mul(ratio);
                        flat[k] = Arc::new(Node::Guarded {
                            arg: arg.clone(),
                            center: *center,
                            radius: *radius,
                            ratio: merged,
                        });
                    }
                }
                None => flat.push(f.clone()),
            }
        }
        _ => flat.push(f.clone()),
    };
    for f in &factors {
        match &**f {
            Node::Product(inner) => {
                for g in inner {
                    push(g, &mut flat, &mut c);
                }
            }
            _ => push(f, &mut flat, &mut c),
        }
    }
    if c == Complex64::new(0.0, 0.0) {
        return zero();
    }
    flat.retain(|f| !matches!(&**f, Node::Guarded { ratio, .. } if ratio.is_one()));
    if c != Complex64::new(1.0, 0.0) {
        flat.insert(0, constant(c));
    }
    match flat.len() {
        0 => one(),
        1 => flat.pop().unwrap(),
        _ => Arc::new(Node::Product(flat)),
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    match &*a {
        Node::Const(v) => constant(-v),
        Node::Neg(inner) => inner.clone(),
        _ => Arc::new(Node::Neg(a)),
    }
}

pub(crate) fn pow(a: Expr, n: i32) -> Expr {
    match (n, &*a) {
        (0, _) => one(),
        (1, _) => a,
        (_, Node::Const(v)) => constant(v.powi(n)),
        _ => Arc::new(Node::Pow(a, n)),
    }
}

pub(crate) fn exp(a: Expr) -> Expr {
    match &*a {
        Node::Const(v) => constant(v.exp()),
        _ => Arc::new(Node::Exp(a)),
    }
}

pub(crate) fn sin(a: Expr) -> Expr {
    match &*a {
        Node::Const(v) => constant(v.sin()),
        _ => Arc::new(Node::Sin(a)),
    }
}

pub(crate) fn cos(a: Expr) -> Expr {
    match &*a {
        Node::Const(v) => constant(v.cos()),
        _ => Arc::new(Node::Cos(a)),
    }
}
