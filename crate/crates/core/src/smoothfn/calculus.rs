//! Symbolic differentiation, substitution and conjugation.
//!
//! All three walk the expression DAG with a per-call memo keyed by node
//! address, so shared subtrees are transformed once and stay shared.

use std::collections::HashMap;
use std::sync::Arc;

use super::build::{self, product, sum};
use super::node::{plateau_edges, Expr, Node};
use super::rational::Rational;

type Memo = HashMap<*const Node, Expr>;

pub(crate) fn derive(e: &Expr, i: usize) -> Expr {
    derive_memo(e, i, &mut HashMap::new())
}

fn derive_memo(e: &Expr, i: usize, memo: &mut Memo) -> Expr {
    let key = Arc::as_ptr(e);
    if let Some(d) = memo.get(&key) {
        return d.clone();
    }
    let d = derive_node(e, i, memo);
    memo.insert(key, d.clone());
    d
}

fn derive_node(e: &Expr, i: usize, memo: &mut Memo) -> Expr {
    match &**e {
        Node::Const(_) => build::zero(),
        Node::Coord(j) => {
            if *j == i {
                build::one()
            } else {
                build::zero()
            }
        }
        Node::Sum(terms) => sum(terms.iter().map(|t| derive_memo(t, i, memo)).collect()),
        Node::Product(factors) => {
            let mut terms = Vec::new();
            for (k, f) in factors.iter().enumerate() {
                let df = derive_memo(f, i, memo);
                if df.is_zero() {
                    continue;
                }
                let mut fs = factors.clone();
                fs[k] = df;
                terms.push(product(fs));
            }
            sum(terms)
        }
        Node::Neg(a) => build::neg(derive_memo(a, i, memo)),
        Node::Pow(a, n) => {
            let da = derive_memo(a, i, memo);
            if da.is_zero() {
                return build::zero();
            }
            product(vec![build::real(f64::from(*n)), build::pow(a.clone(), n - 1), da])
        }
        Node::Exp(a) => chain(e.clone(), derive_memo(a, i, memo)),
        Node::Sin(a) => chain(build::cos(a.clone()), derive_memo(a, i, memo)),
        Node::Cos(a) => chain(build::neg(build::sin(a.clone())), derive_memo(a, i, memo)),
        Node::Bump { arg, center, radius } => {
            let da = derive_memo(arg, i, memo);
            if da.is_zero() {
                return build::zero();
            }
            let guard = Arc::new(Node::Guarded {
                arg: arg.clone(),
                center: *center,
                radius: *radius,
                ratio: Rational::bump_log_derivative(),
            });
            product(vec![build::real(1.0 / radius), guard, e.clone(), da])
        }
        Node::Guarded {
            arg,
            center,
            radius,
            ratio,
        } => {
            let da = derive_memo(arg, i, memo);
            if da.is_zero() {
                return build::zero();
            }
            let guard = Arc::new(Node::Guarded {
                arg: arg.clone(),
                center: *center,
                radius: *radius,
                ratio: ratio.derivative(),
            });
            product(vec![build::real(1.0 / radius), guard, da])
        }
        Node::Plateau {
            arg,
            center,
            inner,
            outer,
        } => {
            let da = derive_memo(arg, i, memo);
            if da.is_zero() {
                return build::zero();
            }
            let (rise, fall, w) = plateau_edges(*center, *inner, *outer);
            let step = |edge: f64, width: f64, order: u32| {
                Arc::new(Node::Step {
                    arg: arg.clone(),
                    edge,
                    width,
                    order,
                })
            };
            let left = product(vec![build::real(1.0 / w), step(rise, w, 1), step(fall, -w, 0)]);
            let right = product(vec![build::real(-1.0 / w), step(rise, w, 0), step(fall, -w, 1)]);
            product(vec![sum(vec![left, right]), da])
        }
        Node::Step {
            arg,
            edge,
            width,
            order,
        } => {
            let da = derive_memo(arg, i, memo);
            if da.is_zero() {
                return build::zero();
            }
            let next = Arc::new(Node::Step {
                arg: arg.clone(),
                edge: *edge,
                width: *width,
                order: order + 1,
            });
            product(vec![build::real(1.0 / width), next, da])
        }
    }
}

fn chain(outer: Expr, inner_derivative: Expr) -> Expr {
    if inner_derivative.is_zero() {
        build::zero()
    } else {
        product(vec![outer, inner_derivative])
    }
}

/// Replaces every `Coord(j)` with `map[j]`.
pub(crate) fn substitute(e: &Expr, map: &[Expr]) -> Expr {
    transform(e, &mut HashMap::new(), &mut |node| match node {
        Node::Coord(j) => Some(map[*j].clone()),
        _ => None,
    })
}

/// Complex conjugation. Coordinates are real and every primitive has real
/// Taylor coefficients, so conjugating the constants is enough.
pub(crate) fn conj(e: &Expr) -> Expr {
    transform(e, &mut HashMap::new(), &mut |node| match node {
        Node::Const(c) => Some(build::constant(c.conj())),
        _ => None,
    })
}

/// Bottom-up rebuild. `leaf` may replace a node outright; otherwise children
/// are rebuilt through the smart constructors.
fn transform(e: &Expr, memo: &mut Memo, leaf: &mut dyn FnMut(&Node) -> Option<Expr>) -> Expr {
    let key = Arc::as_ptr(e);
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let out = if let Some(r) = leaf(e) {
        r
    } else {
        let mut go = |a: &Expr| transform(a, memo, leaf);
        match &**e {
            Node::Const(_) | Node::Coord(_) => e.clone(),
            Node::Sum(v) => sum(v.iter().map(&mut go).collect()),
            Node::Product(v) => product(v.iter().map(&mut go).collect()),
            Node::Neg(a) => build::neg(go(a)),
            Node::Pow(a, n) => build::pow(go(a), *n),
            Node::Exp(a) => build::exp(go(a)),
            Node::Sin(a) => build::sin(go(a)),
            Node::Cos(a) => build::cos(go(a)),
            Node::Bump { arg, center, radius } => fold(Node::Bump {
                arg: go(arg),
                center: *center,
                radius: *radius,
            }),
            Node::Plateau {
                arg,
                center,
                inner,
                outer,
            } => fold(Node::Plateau {
                arg: go(arg),
                center: *center,
                inner: *inner,
                outer: *outer,
            }),
            Node::Guarded {
                arg,
                center,
                radius,
                ratio,
            } => fold(Node::Guarded {
                arg: go(arg),
                center: *center,
                radius: *radius,
                ratio: ratio.clone(),
            }),
            Node::Step {
                arg,
                edge,
                width,
                order,
            } => fold(Node::Step {
                arg: go(arg),
                edge: *edge,
                width: *width,
                order: *order,
            }),
        }
    };
    memo.insert(key, out.clone());
    out
}

/// Collapses a compact-support primitive whose argument became constant.
fn fold(node: Node) -> Expr {
    let constant_arg = match &node {
        Node::Bump { arg, .. } | Node::Plateau { arg, .. } | Node::Guarded { arg, .. } | Node::Step { arg, .. } => {
            arg.as_const().is_some()
        }
        _ => false,
    };
    if constant_arg {
        build::constant(node.eval(&[]))
    } else {
        Arc::new(node)
    }
}
