//! Rational expressions in one variable `z`: parser, printer and evaluator
//! with first-order error tracking.
//!
//! Grammar (whitespace allowed between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' int)?
//! atom   := 'z' | 'i' | number 'i'? | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! Division by an expression that is a constant zero is rejected at parse
//! time; division by a subexpression that merely vanishes somewhere (like
//! `1/z`) produces a pole at evaluation time instead.

use crate::error::{Error, Result};
use crate::xplane::XPoint;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Z,
    /// A literal: either purely real or purely imaginary as parsed.
    Const { re: f64, im: f64 },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    /// True when no occurrence of `z` appears below this node.
    fn is_constant(&self) -> bool {
        match self {
            Expr::Z => false,
            Expr::Const { .. } => true,
            Expr::Neg(e) | Expr::Pow(e, _) => e.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.factor()?;
                    if rhs.is_constant() {
                        let (re, im, e) = eval_expr(&rhs, 0.0, 0.0);
                        if re == 0.0 && im == 0.0 && e == 0.0 {
                            return self.err(at, "division by constant zero");
                        }
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let neg = if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return self.err(at, "expected integer exponent after '^'");
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: i32 = match digits.parse() {
                Ok(n) => n,
                Err(_) => return self.err(start, "exponent out of range"),
            };
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.pos;
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Expr::Z)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Const { re: 0.0, im: 1.0 })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.src.get(self.pos) == Some(&b'.') {
                    self.pos += 1;
                    let frac = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == frac {
                        return self.err(self.pos, "expected digits after '.'");
                    }
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: f64 = match lit.parse() {
                    Ok(v) => v,
                    Err(_) => return self.err(start, "bad number literal"),
                };
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(Expr::Const { re: 0.0, im: v })
                } else {
                    Ok(Expr::Const { re: v, im: 0.0 })
                }
            }
            Some(c) => self.err(self.pos, format!("unexpected character '{}'", c as char)),
            None => self.err(at.max(self.pos), "unexpected end of input"),
        }
    }
}

/// Parse an expression; errors carry the byte offset of the offending token.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, "trailing input");
    }
    Ok(e)
}

fn fmt_f64(v: f64) -> String {
    // shortest round-trip decimal; integers print without a fraction
    format!("{v}")
}

fn print_into(e: &Expr, out: &mut String) {
    match e {
        Expr::Z => out.push('z'),
        Expr::Const { re, im } => {
            if *im == 0.0 {
                out.push_str(&fmt_f64(*re));
            } else if *re == 0.0 {
                if *im == 1.0 {
                    out.push('i');
                } else {
                    out.push_str(&fmt_f64(*im));
                    out.push('i');
                }
            } else {
                // unreachable from the parser, but printable
                out.push('(');
                out.push_str(&fmt_f64(*re));
                out.push('+');
                out.push_str(&fmt_f64(*im));
                out.push_str("i)");
            }
        }
        Expr::Neg(a) => {
            out.push('-');
            print_into(a, out);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            out.push('(');
            print_into(a, out);
            out.push(if matches!(e, Expr::Add(..)) { '+' } else { '-' });
            print_into(b, out);
            out.push(')');
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            out.push('(');
            print_into(a, out);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            print_into(b, out);
            out.push(')');
        }
        Expr::Pow(a, n) => {
            out.push('(');
            print_into(a, out);
            out.push(')');
            out.push('^');
            out.push_str(&n.to_string());
        }
    }
}

/// Fully parenthesized canonical form; `parse_expr(print_expr(e)) == e`
/// is not guaranteed node-for-node because of the parentheses, but
/// evaluation agrees; see `reparse` for the normalizing round trip.
pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    print_into(e, &mut s);
    s
}

/// Evaluate at finite `z`, returning `(re, im, err)`. A nonfinite result
/// (pole) is reported with `err = f64::INFINITY` on the coordinates; use
/// [`eval_expr_xpoint`] for the sphere-valued version.
fn eval_expr(e: &Expr, zr: f64, zi: f64) -> (f64, f64, f64) {
    const U: f64 = f64::EPSILON;
    match e {
        Expr::Z => (zr, zi, 0.0),
        Expr::Const { re, im } => (*re, *im, 0.0),
        Expr::Neg(a) => {
            let (r, i, e1) = eval_expr(a, zr, zi);
            (-r, -i, e1)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (r1, i1, e1) = eval_expr(a, zr, zi);
            let (r2, i2, e2) = eval_expr(b, zr, zi);
            let (r, i) = if matches!(e, Expr::Add(..)) {
                (r1 + r2, i1 + i2)
            } else {
                (r1 - r2, i1 - i2)
            };
            (r, i, e1 + e2 + U * r.hypot(i))
        }
        Expr::Mul(a, b) => {
            let (r1, i1, e1) = eval_expr(a, zr, zi);
            let (r2, i2, e2) = eval_expr(b, zr, zi);
            let (m1, m2) = (r1.hypot(i1), r2.hypot(i2));
            let (r, i) = (r1 * r2 - i1 * i2, r1 * i2 + i1 * r2);
            (r, i, m1 * e2 + m2 * e1 + e1 * e2 + 4.0 * U * m1 * m2)
        }
        Expr::Div(a, b) => {
            let (r1, i1, e1) = eval_expr(a, zr, zi);
            let (r2, i2, e2) = eval_expr(b, zr, zi);
            let d = r2 * r2 + i2 * i2;
            if d == 0.0 {
                return (f64::INFINITY, 0.0, f64::INFINITY);
            }
            let (r, i) = ((r1 * r2 + i1 * i2) / d, (i1 * r2 - r1 * i2) / d);
            let q = r.hypot(i);
            let ds = d.sqrt();
            (r, i, (e1 + q * e2) / ds + 6.0 * U * q)
        }
        Expr::Pow(a, n) => {
            let (mut r, mut i, mut err) = (1.0f64, 0.0f64, 0.0f64);
            let (br, bi, be) = eval_expr(a, zr, zi);
            let k = n.unsigned_abs();
            for _ in 0..k {
                let m1 = r.hypot(i);
                let m2 = br.hypot(bi);
                let (nr, ni) = (r * br - i * bi, r * bi + i * br);
                err = m1 * be + m2 * err + 4.0 * f64::EPSILON * m1 * m2;
                r = nr;
                i = ni;
            }
            if *n < 0 {
                let d = r * r + i * i;
                if d == 0.0 {
                    return (f64::INFINITY, 0.0, f64::INFINITY);
                }
                let (qr, qi) = (r / d, -i / d);
                let q = qr.hypot(qi);
                err = err * q / d.sqrt() + 6.0 * f64::EPSILON * q;
                r = qr;
                i = qi;
            }
            (r, i, err)
        }
    }
}

/// Sphere-valued evaluation with an error radius; poles map to infinity.
pub fn eval_expr_xpoint(e: &Expr, z: XPoint) -> Result<(XPoint, f64)> {
    let (zr, zi) = z
        .finite()
        .ok_or_else(|| Error::Domain("expression maps are evaluated at finite points".into()))?;
    let (r, i, err) = eval_expr(e, zr, zi);
    if !(r.is_finite() && i.is_finite()) || !err.is_finite() {
        return Ok((XPoint::Infinity, 0.0));
    }
    Ok((XPoint::new(r, i), err))
}
