//! Text syntax for forms: `coef*X^i*Y^j*Z^k` terms joined by `+`/`-`, with
//! rationals, `zeta(n)^k`, parameter names and parentheses in coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::{ArithOp, Cyc, CycError};
use crate::forms::{is_unknown_name, FormJson, Monomial, ParamPoly, TernaryForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("terms of degrees {0} and {1} in one form")]
    NotHomogeneous(u32, u32),
    #[error("the form is zero")]
    ZeroForm,
    #[error("name {0} is reserved")]
    Reserved(String),
    #[error("expected a coefficient, found a term in X, Y, Z")]
    NotConstant,
    #[error(transparent)]
    Field(#[from] CycError),
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        pos,
        msg: msg.into(),
    })
}

/// A polynomial in `X, Y, Z` with parameter coefficients, not yet homogeneous.
#[derive(Clone, Debug, Default)]
struct Expr(BTreeMap<Monomial, ParamPoly>);

impl Expr {
    fn coeff(c: ParamPoly) -> Expr {
        Expr(BTreeMap::from([(Monomial::new(0, 0, 0), c)]))
    }

    fn var(v: usize) -> Expr {
        let mut e = [0; 3];
        e[v] = 1;
        Expr(BTreeMap::from([(Monomial::from_exps(e), ParamPoly::one())]))
    }

    fn add(mut self, o: Expr) -> Expr {
        for (m, c) in o.0 {
            let s = self.0.remove(&m).unwrap_or_default().add(&c);
            if !s.is_zero() {
                self.0.insert(m, s);
            }
        }
        self
    }

    fn neg(self) -> Expr {
        Expr(self.0.into_iter().map(|(m, c)| (m, c.neg())).collect())
    }

    fn mul(&self, o: &Expr) -> Expr {
        let mut out = Expr::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                out = out.add(Expr(BTreeMap::from([(m1.mul(m2), c1.mul(c2))])));
            }
        }
        out
    }

    fn as_constant(&self) -> Option<Cyc> {
        match self.0.len() {
            0 => Some(Cyc::from_int(0)),
            1 => {
                let (m, c) = self.0.iter().next()?;
                (m.degree() == 0).then(|| c.as_constant()).flatten()
            }
            _ => None,
        }
    }

    fn scale(&self, s: &Cyc) -> Expr {
        Expr(self.0.iter().map(|(m, c)| (*m, c.scale(s))).collect())
    }

    fn pow(&self, e: u32) -> Expr {
        (0..e).fold(Expr::coeff(ParamPoly::one()), |acc, _| acc.mul(self))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            syntax(self.pos, format!("expected '{}'", b as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return syntax(start, "expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let neg = self.eat(b'-');
        let n = self.integer()?;
        let n: i64 = i64::try_from(n).or_else(|_| syntax(start, "integer too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let pos = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                let Some(c) = d.as_constant() else {
                    return syntax(pos, "division by a non-constant");
                };
                let inv = Cyc::from_int(1)
                    .arith(&c, ArithOp::Div)
                    .or_else(|_| syntax(pos, "division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let pos = self.pos;
        let e = self.small_int()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        match base.as_constant() {
            Some(c) if !c.is_zero() => Ok(Expr::coeff(ParamPoly::constant(c.pow(e)))),
            _ => syntax(pos, "negative exponent on a non-constant"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Expr::coeff(ParamPoly::constant(Cyc::from_rational(
                    BigRational::from_integer(n),
                ))))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let name = self.ident();
                match name.as_str() {
                    "X" => Ok(Expr::var(0)),
                    "Y" => Ok(Expr::var(1)),
                    "Z" => Ok(Expr::var(2)),
                    "zeta" => {
                        self.expect(b'(')?;
                        let n = self.small_int()?;
                        if n < 1 || n > u32::MAX as i64 {
                            return syntax(pos, "zeta order must be positive");
                        }
                        self.expect(b')')?;
                        Ok(Expr::coeff(ParamPoly::constant(Cyc::try_zeta(
                            n as u32, 1,
                        )?)))
                    }
                    _ if is_unknown_name(&name) => Err(ParseError::Reserved(name)),
                    _ => Ok(Expr::coeff(ParamPoly::param(&name))),
                }
            }
            Some(c) => syntax(pos, format!("unexpected '{}'", c as char)),
            None => syntax(pos, "unexpected end of input"),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return syntax(p.pos, format!("unexpected '{}'", c as char));
    }
    Ok(e)
}

/// Parses a homogeneous form; the degree is inferred.
pub fn parse_form(text: &str) -> Result<TernaryForm, ParseError> {
    let e = parse_expr(text)?;
    let mut degree = None;
    for m in e.0.keys() {
        match degree {
            None => degree = Some(m.degree()),
            Some(d) if d != m.degree() => return Err(ParseError::NotHomogeneous(d, m.degree())),
            _ => {}
        }
    }
    let d = degree.ok_or(ParseError::ZeroForm)?;
    Ok(TernaryForm::from_terms(d, e.0).expect("degrees checked"))
}

/// Parses a coefficient expression (no `X`, `Y`, `Z`).
pub fn parse_coefficient(text: &str) -> Result<ParamPoly, ParseError> {
    let e = parse_expr(text)?;
    match e.0.len() {
        0 => Ok(ParamPoly::zero()),
        1 => {
            let (m, c) = e.0.into_iter().next().unwrap();
            if m.degree() == 0 {
                Ok(c)
            } else {
                Err(ParseError::NotConstant)
            }
        }
        _ => Err(ParseError::NotConstant),
    }
}

/// Parses a constant coefficient, e.g. a `--set name=value` right-hand side.
pub fn parse_constant(text: &str) -> Result<Cyc, ParseError> {
    let c = parse_coefficient(text)?;
    c.as_constant().ok_or(ParseError::NotConstant)
}

pub fn form_from_json(j: &FormJson) -> Result<TernaryForm, ParseError> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let m = Monomial::new(t.i, t.j, t.k);
        if m.degree() != j.degree {
            return Err(ParseError::NotHomogeneous(j.degree, m.degree()));
        }
        terms.push((m, parse_coefficient(&t.coeff)?));
    }
    Ok(TernaryForm::from_terms(j.degree, terms).expect("degrees checked"))
}
