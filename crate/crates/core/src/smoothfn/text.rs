//! Prefix text form, e.g. `(* 2.0 (bump x0 0.0 1.0) (pow x1 3))`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::node::{Expr, Node};
use super::rational::Rational;
use crate::error::{Error, Result};

pub(crate) fn write(f: &mut fmt::Formatter<'_>, e: &Node) -> fmt::Result {
    let list = |f: &mut fmt::Formatter<'_>, head: &str, items: &[Expr]| {
        write!(f, "({head}")?;
        for it in items {
            write!(f, " ")?;
            write(f, it)?;
        }
        write!(f, ")")
    };
    match e {
        Node::Const(c) if c.im == 0.0 => write!(f, "{:?}", c.re),
        Node::Const(c) => write!(f, "(c {:?} {:?})", c.re, c.im),
        Node::Coord(i) => write!(f, "x{i}"),
        Node::Sum(v) => list(f, "+", v),
        Node::Product(v) => list(f, "*", v),
        Node::Neg(a) => list(f, "neg", std::slice::from_ref(a)),
        Node::Exp(a) => list(f, "exp", std::slice::from_ref(a)),
        Node::Sin(a) => list(f, "sin", std::slice::from_ref(a)),
        Node::Cos(a) => list(f, "cos", std::slice::from_ref(a)),
        Node::Pow(a, n) => {
            write!(f, "(pow ")?;
            write(f, a)?;
            write!(f, " {n})")
        }
        Node::Bump { arg, center, radius } => {
            write!(f, "(bump ")?;
            write(f, arg)?;
            write!(f, " {center:?} {radius:?})")
        }
        Node::Plateau {
            arg,
            center,
            inner,
            outer,
        } => {
            write!(f, "(plateau ")?;
            write(f, arg)?;
            write!(f, " {center:?} {inner:?} {outer:?})")
        }
        Node::Guarded {
            arg,
            center,
            radius,
            ratio,
        } => {
            write!(f, "(guard ")?;
            write(f, arg)?;
            write!(f, " {center:?} {radius:?} {}", ratio.den_pow)?;
            for c in &ratio.num {
                write!(f, " {c:?}")?;
            }
            write!(f, ")")
        }
        Node::Step {
            arg,
            edge,
            width,
            order,
        } => {
            write!(f, "(step ")?;
            write(f, arg)?;
            write!(f, " {edge:?} {width:?} {order})")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        let delimiter = ch == '(' || ch == ')' || ch.is_whitespace();
        if delimiter {
            if let Some(s) = start.take() {
                out.push((s, Token::Atom(&text[s..i])));
            }
            match ch {
                '(' => out.push((i, Token::Open)),
                ')' => out.push((i, Token::Close)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, Token::Atom(&text[s..])));
    }
    out
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    dim: usize,
    len: usize,
}

pub(crate) fn parse(dim: usize, text: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: tokenize(text),
        pos: 0,
        dim,
        len: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn next(&mut self) -> Result<Token<'a>> {
        let t = self
            .tokens
            .get(self.pos)
            .map(|t| t.1.clone())
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn atom(&mut self) -> Result<&'a str> {
        match self.next()? {
            Token::Atom(a) => Ok(a),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a number"))
            }
        }
    }

    fn number(&mut self) -> Result<f64> {
        let a = self.atom()?;
        a.parse::<f64>().map_err(|_| {
            self.pos -= 1;
            self.error(&format!("invalid number {a:?}"))
        })
    }

    fn integer<T: std::str::FromStr>(&mut self) -> Result<T> {
        let a = self.atom()?;
        a.parse::<T>().map_err(|_| {
            self.pos -= 1;
            self.error(&format!("invalid integer {a:?}"))
        })
    }

    fn close(&mut self) -> Result<()> {
        match self.next()? {
            Token::Close => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.error("expected ')'"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.next()? {
            Token::Close => {
                self.pos -= 1;
                Err(self.error("unexpected ')'"))
            }
            Token::Atom(a) => {
                if let Some(idx) = a.strip_prefix('x') {
                    let i: usize = idx.parse().map_err(|_| {
                        self.pos -= 1;
                        self.error(&format!("invalid coordinate {a:?}"))
                    })?;
                    if i >= self.dim {
                        self.pos -= 1;
                        return Err(self.error(&format!("coordinate x{i} out of range for dimension {}", self.dim)));
                    }
                    return Ok(Arc::new(Node::Coord(i)));
                }
                self.pos -= 1;
                let v = self.number()?;
                Ok(Arc::new(Node::Const(Complex64::new(v, 0.0))))
            }
            Token::Open => {
                let head = self.atom()?;
                let node = match head {
                    "c" => {
                        let re = self.number()?;
                        let im = self.number()?;
                        Node::Const(Complex64::new(re, im))
                    }
                    "+" | "*" => {
                        let mut items = Vec::new();
                        while self.tokens.get(self.pos).map(|t| &t.1) != Some(&Token::Close) {
                            items.push(self.expr()?);
                        }
                        if items.is_empty() {
                            return Err(self.error("empty sum or product"));
                        }
                        if head == "+" {
                            Node::Sum(items)
                        } else {
                            Node::Product(items)
                        }
                    }
                    "neg" => Node::Neg(self.expr()?),
                    "exp" => Node::Exp(self.expr()?),
                    "sin" => Node::Sin(self.expr()?),
                    "cos" => Node::Cos(self.expr()?),
                    "pow" => {
                        let a = self.expr()?;
                        Node::Pow(a, self.integer()?)
                    }
                    "bump" => {
                        let arg = self.expr()?;
                        let center = self.number()?;
                        let radius = self.number()?;
                        if !(radius > 0.0) {
                            return Err(self.error("bump radius must be positive"));
                        }
                        Node::Bump { arg, center, radius }
                    }
                    "plateau" => {
                        let arg = self.expr()?;
                        let center = self.number()?;
                        let inner = self.number()?;
                        let outer = self.number()?;
                        if !(inner >= 0.0 && inner < outer) {
                            return Err(self.error("plateau radii must satisfy 0 <= inner < outer"));
                        }
                        Node::Plateau {
                            arg,
                            center,
                            inner,
                            outer,
                        }
                    }
                    "guard" => {
                        let arg = self.expr()?;
                        let center = self.number()?;
                        let radius = self.number()?;
                        if !(radius > 0.0) {
                            return Err(self.error("guard radius must be positive"));
                        }
                        let den_pow = self.integer()?;
                        let mut num = Vec::new();
                        while self.tokens.get(self.pos).map(|t| &t.1) != Some(&Token::Close) {
                            num.push(self.number()?);
                        }
                        if num.is_empty() {
                            return Err(self.error("guard needs numerator coefficients"));
                        }
                        Node::Guarded {
                            arg,
                            center,
                            radius,
                            ratio: Rational { num, den_pow },
                        }
                    }
                    "step" => {
                        let arg = self.expr()?;
                        let edge = self.number()?;
                        let width = self.number()?;
                        if width == 0.0 || !width.is_finite() {
                            return Err(self.error("step width must be nonzero"));
                        }
                        Node::Step {
                            arg,
                            edge,
                            width,
                            order: self.integer()?,
                        }
                    }
                    other => {
                        self.pos -= 1;
                        return Err(self.error(&format!("unknown form {other:?}")));
                    }
                };
                self.close()?;
                Ok(Arc::new(node))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::smoothfn::ScalarExpr;

    #[test]
    fn round_trip_of_derivatives() {
        let b = ScalarExpr::bump(&[0.5, -1.0], 0.75).unwrap();
        let p = ScalarExpr::plateau(&[0.0, 0.0], 0.2, 0.9).unwrap();
        let e = (b * p).derive(0).unwrap().derive(1).unwrap();
        let text = e.to_string();
        let back = ScalarExpr::parse(2, &text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn errors_carry_offsets() {
        let err = ScalarExpr::parse(1, "(+ x0 x3)").unwrap_err();
        assert!(matches!(err, crate::Error::Parse { offset: 6, .. }), "{err:?}");
        assert!(ScalarExpr::parse(1, "(+ x0").is_err());
        assert!(ScalarExpr::parse(1, "(frob x0)").is_err());
        assert!(ScalarExpr::parse(1, "x0 x0").is_err());
        assert!(ScalarExpr::parse(1, "(bump x0 0.0 -1.0)").is_err());
    }

    #[test]
    fn complex_constants() {
        let e = ScalarExpr::parse(0, "(c 1.5 -2.0)").unwrap();
        assert_eq!(e.eval(&[]).unwrap(), num_complex::Complex64::new(1.5, -2.0));
    }
}
