//! Parameter polynomials, sparse ternary forms, and projective substitution.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Cyc;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("monomial {0} has degree {1}, expected {2}")]
    WrongDegree(String, u32, u32),
    #[error("specialized matrix is singular")]
    SingularMatrix,
    #[error("form is zero")]
    ZeroForm,
    #[error("parameter {0} has no assigned value")]
    Unassigned(String),
}

/// Names beginning with this prefix are reserved for matrix unknowns.
pub const UNKNOWN_PREFIX: char = '_';

pub fn is_unknown_name(name: &str) -> bool {
    name.starts_with(UNKNOWN_PREFIX)
}

/// A power product of named parameters, sorted by name with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMono(Vec<(String, u32)>);

impl ParamMono {
    pub fn one() -> Self {
        ParamMono(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        ParamMono(vec![(name.to_string(), 1)])
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &ParamMono) -> ParamMono {
        let mut out: Vec<(String, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(a.clone());
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        ParamMono(out)
    }

    fn without(&self, name: &str) -> ParamMono {
        ParamMono(self.0.iter().filter(|(n, _)| n != name).cloned().collect())
    }
}

impl fmt::Display for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (n, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in named parameters with cyclotomic coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, Cyc>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(Cyc::from_int(1))
    }

    pub fn constant(c: Cyc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMono::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(Cyc::from_int(n))
    }

    pub fn param(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ParamMono::var(name), Cyc::from_int(1));
        ParamPoly { terms }
    }

    pub fn term(c: Cyc, mono: ParamMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMono, &Cyc)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value when no parameter occurs.
    pub fn as_constant(&self) -> Option<Cyc> {
        match self.terms.len() {
            0 => Some(Cyc::from_int(0)),
            1 => self.terms.get(&ParamMono::one()).cloned(),
            _ => None,
        }
    }

    /// The single term, when there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Cyc, &ParamMono)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    fn insert_add(&mut self, mono: ParamMono, c: Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Cyc) -> ParamPoly {
        if s.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() || other.is_zero() {
            return ParamPoly::zero();
        }
        // Fast paths for constants keep substitution of numeric matrices cheap.
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces every assigned parameter by its value; unassigned ones stay symbolic.
    pub fn substitute(&self, values: &HashMap<String, Cyc>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (n, e) in &m.0 {
                match values.get(n) {
                    Some(v) => coeff = &coeff * &v.pow(*e as i64),
                    None => rest.push((n.clone(), *e)),
                }
            }
            out.insert_add(ParamMono(rest), coeff);
        }
        out
    }

    /// Sets one parameter to zero.
    pub fn set_zero(&self, name: &str) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(name) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Removes `name` from every term, i.e. divides out its powers.
    pub fn strip_param(&self, name: &str) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            out.insert_add(m.without(name), c.clone());
        }
        out
    }

    /// Evaluates fully; fails if a parameter is unassigned.
    pub fn evaluate(&self, values: &HashMap<String, Cyc>) -> Result<Cyc, FormError> {
        let r = self.substitute(values);
        r.as_constant()
            .ok_or_else(|| FormError::Unassigned(r.params().into_iter().next().unwrap_or_default()))
    }

    /// Sign and body used when the polynomial is printed as a coefficient.
    /// Single terms with rational coefficients print bare; anything else is parenthesized.
    pub(crate) fn coefficient_text(&self) -> (bool, String) {
        if let Some((c, m)) = self.as_monomial() {
            if let Some(q) = c.to_rational() {
                let neg = q.is_negative();
                let a = q.abs();
                let body = if m.is_one() {
                    a.to_string()
                } else if num_traits::One::is_one(&a) {
                    m.to_string()
                } else {
                    format!("{a}*{m}")
                };
                return (neg, body);
            }
        }
        (false, format!("({self})"))
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let single = ParamPoly::term(c.clone(), m.clone());
            let (neg, body) = match c.to_rational() {
                Some(_) => single.coefficient_text(),
                None if m.is_one() => (false, format!("({c})")),
                None => (false, format!("({c})*{m}")),
            };
            let body =
                if idx == 0 && self.terms.len() == 1 && c.to_rational().is_none() && m.is_one() {
                    c.to_string()
                } else {
                    body
                };
            match (idx, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<Cyc> for ParamPoly {
    fn from(c: Cyc) -> Self {
        ParamPoly::constant(c)
    }
}

/// Exponents of `X^i Y^j Z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub const fn new(i: u32, j: u32, k: u32) -> Self {
        Monomial { i, j, k }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    /// `max{i, j, k}`.
    pub fn exponent(&self) -> u32 {
        self.i.max(self.j).max(self.k)
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.i, self.j, self.k]
    }

    pub fn from_exps(e: [u32; 3]) -> Self {
        Monomial::new(e[0], e[1], e[2])
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }

    /// All monomials of degree `d` in display order.
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut v = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                v.push(Monomial::new(i, j, d - i - j));
            }
        }
        v
    }
}

/// Graded order with `X > Y > Z`; smaller means printed earlier
/// (higher total degree first, then higher power of X, then of Y).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then(other.i.cmp(&self.i))
            .then(other.j.cmp(&self.j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("X", self.i), ("Y", self.j), ("Z", self.k)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A homogeneous form of degree `d` in `X, Y, Z` with parameter-polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    degree: u32,
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl TernaryForm {
    pub fn zero(degree: u32) -> Self {
        TernaryForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (Monomial, ParamPoly)>,
    {
        let mut f = TernaryForm::zero(degree);
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(FormError::WrongDegree(m.to_string(), m.degree(), degree));
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Sum of the given monomials, all with coefficient one.
    pub fn from_monomials(degree: u32, monos: &[Monomial]) -> Result<Self, FormError> {
        TernaryForm::from_terms(degree, monos.iter().map(|m| (*m, ParamPoly::one())))
    }

    /// `X^d + Y^d + Z^d`
    pub fn fermat(d: u32) -> Self {
        TernaryForm::from_monomials(
            d,
            &[
                Monomial::new(d, 0, 0),
                Monomial::new(0, d, 0),
                Monomial::new(0, 0, d),
            ],
        )
        .unwrap()
    }

    /// `X^(d-1) Y + Y^(d-1) Z + Z^(d-1) X`
    pub fn klein(d: u32) -> Self {
        TernaryForm::from_monomials(
            d,
            &[
                Monomial::new(d - 1, 1, 0),
                Monomial::new(0, d - 1, 1),
                Monomial::new(1, 0, d - 1),
            ],
        )
        .unwrap()
    }

    /// Adds `c * mon` in place. The monomial must have the form's degree.
    pub fn add_term(&mut self, mon: Monomial, c: ParamPoly) {
        debug_assert_eq!(mon.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mon) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&mon);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(mon, c);
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(d-1)(d-2)/2`
    pub fn genus(&self) -> u32 {
        let d = self.degree;
        (d.saturating_sub(1)) * (d.saturating_sub(2)) / 2
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mon: &Monomial) -> ParamPoly {
        self.terms.get(mon).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(|c| c.params()).collect()
    }

    pub fn is_specialized(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    /// Coefficients as field elements, when no parameter remains.
    pub fn constant_terms(&self) -> Option<Vec<(Monomial, Cyc)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.as_constant().map(|v| (*m, v)))
            .collect()
    }

    pub fn specialize(&self, values: &HashMap<String, Cyc>) -> TernaryForm {
        let mut f = TernaryForm::zero(self.degree);
        for (m, c) in &self.terms {
            f.add_term(*m, c.substitute(values));
        }
        f
    }

    pub fn map_coeffs(&self, g: impl Fn(&ParamPoly) -> ParamPoly) -> TernaryForm {
        let mut f = TernaryForm::zero(self.degree);
        for (m, c) in &self.terms {
            f.add_term(*m, g(c));
        }
        f
    }

    pub fn scale(&self, s: &Cyc) -> TernaryForm {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn add(&self, other: &TernaryForm) -> TernaryForm {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(*m, c.clone());
        }
        f
    }

    pub fn sub(&self, other: &TernaryForm) -> TernaryForm {
        self.add(&other.map_coeffs(|c| c.neg()))
    }

    /// Product of forms; degrees add.
    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut f = TernaryForm::zero(self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                f.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        f
    }

    /// The linear form `a X + b Y + c Z`.
    pub fn linear(coeffs: [ParamPoly; 3]) -> TernaryForm {
        let [a, b, c] = coeffs;
        let mut f = TernaryForm::zero(1);
        f.add_term(Monomial::new(1, 0, 0), a);
        f.add_term(Monomial::new(0, 1, 0), b);
        f.add_term(Monomial::new(0, 0, 1), c);
        f
    }

    pub fn pow(&self, e: u32) -> TernaryForm {
        let mut acc =
            TernaryForm::from_terms(0, [(Monomial::new(0, 0, 0), ParamPoly::one())]).unwrap();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(core, exponent)`: the exponent is the largest `max{i,j,k}` over the support
    /// and the core collects the terms attaining it.
    pub fn core_and_exponent(&self) -> Result<(TernaryForm, u32), FormError> {
        let e = self
            .terms
            .keys()
            .map(|m| m.exponent())
            .max()
            .ok_or(FormError::ZeroForm)?;
        let core = TernaryForm {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent() == e)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        };
        Ok((core, e))
    }

    /// Formal partial derivatives `(F_X, F_Y, F_Z)`.
    pub fn partials(&self) -> [TernaryForm; 3] {
        let d = self.degree.saturating_sub(1);
        let mut out = [
            TernaryForm::zero(d),
            TernaryForm::zero(d),
            TernaryForm::zero(d),
        ];
        for (m, c) in &self.terms {
            let e = m.exps();
            for v in 0..3 {
                if e[v] == 0 {
                    continue;
                }
                let mut ne = e;
                ne[v] -= 1;
                out[v].add_term(
                    Monomial::from_exps(ne),
                    c.scale(&Cyc::from_int(e[v] as i64)),
                );
            }
        }
        out
    }

    /// `F(P (X, Y, Z)^T)`: row `r` of `P` is the linear form substituted for the
    /// r-th variable. Symbolic entries are allowed.
    pub fn substitute(&self, p: &ProjMatrix) -> Result<TernaryForm, FormError> {
        self.substitute_with(p, Execution::Auto)
    }

    pub fn substitute_with(
        &self,
        p: &ProjMatrix,
        exec: Execution,
    ) -> Result<TernaryForm, FormError> {
        if p.is_specialized() && p.det().is_zero() {
            return Err(FormError::SingularMatrix);
        }
        let d = self.degree;
        let rows: Vec<TernaryForm> = (0..3)
            .map(|r| TernaryForm::linear(p.entries[r].clone()))
            .collect();
        // powers[r][e] = rows[r]^e
        let powers: Vec<Vec<TernaryForm>> = rows
            .iter()
            .map(|l| {
                let mut v =
                    vec![
                        TernaryForm::from_terms(0, [(Monomial::new(0, 0, 0), ParamPoly::one())])
                            .unwrap(),
                    ];
                for e in 1..=d {
                    let next = v[e as usize - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let terms: Vec<(Monomial, ParamPoly)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let images = par::map(exec, &terms, |(m, c)| {
            powers[0][m.i as usize]
                .mul(&powers[1][m.j as usize])
                .mul(&powers[2][m.k as usize])
                .map_coeffs(|x| x.mul(c))
        });
        let mut out = TernaryForm::zero(d);
        for img in images {
            for (m, c) in img.terms {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point with field coordinates; the form must be specialized.
    pub fn eval_point(&self, pt: &[Cyc; 3]) -> Option<Cyc> {
        let mut acc = Cyc::from_int(0);
        for (m, c) in &self.terms {
            let c = c.as_constant()?;
            let v =
                &(&(&c * &pt[0].pow(m.i as i64)) * &pt[1].pow(m.j as i64)) * &pt[2].pow(m.k as i64);
            acc = &acc + &v;
        }
        Some(acc)
    }

    /// Returns `Some(lambda)` when `self = lambda * other` with `lambda` a field constant.
    pub fn proportional_to(&self, other: &TernaryForm) -> Option<Cyc> {
        if self.degree != other.degree || self.support() != other.support() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next()?;
        let a0 = self.terms.get(m0)?;
        let lambda = match (a0.as_constant(), c0.as_constant()) {
            (Some(a), Some(c)) => &a / &c,
            _ => {
                // Parametric case: only accept constant ratios visible term by term.
                let (ca, ma) = a0.as_monomial()?;
                let (cc, mc) = c0.as_monomial()?;
                if ma != mc {
                    return None;
                }
                ca / cc
            }
        };
        if *self == other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    i: m.i,
                    j: m.j,
                    k: m.k,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl Serialize for TernaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = c.coefficient_text();
            let mono = m.to_string();
            let text = if m.degree() == 0 {
                body
            } else if c.is_one() || (neg && c.neg().is_one()) {
                mono
            } else {
                format!("{body}*{mono}")
            };
            match (idx, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

/// JSON shape `{degree, terms: [{i, j, k, coeff}]}`; `coeff` uses the text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub coeff: String,
}

/// A 3x3 matrix acting on `(X, Y, Z)^T`; row `r` gives the image of the r-th variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjMatrix {
    pub entries: [[ParamPoly; 3]; 3],
}

impl ProjMatrix {
    pub fn new(entries: [[ParamPoly; 3]; 3]) -> Self {
        ProjMatrix { entries }
    }

    pub fn from_cyc(m: [[Cyc; 3]; 3]) -> Self {
        ProjMatrix {
            entries: m.map(|row| row.map(ParamPoly::constant)),
        }
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        ProjMatrix::from_cyc(m.map(|row| row.map(Cyc::from_int)))
    }

    pub fn identity() -> Self {
        ProjMatrix::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn diag(a: Cyc, b: Cyc, c: Cyc) -> Self {
        let z = || Cyc::from_int(0);
        ProjMatrix::from_cyc([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    /// The substitution `X_r -> scale[r] * X_{perm[r]}`.
    pub fn monomial(perm: [usize; 3], scale: [Cyc; 3]) -> Self {
        let mut m: [[Cyc; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Cyc::from_int(0)));
        for r in 0..3 {
            m[r][perm[r]] = scale[r].clone();
        }
        ProjMatrix::from_cyc(m)
    }

    pub fn is_specialized(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().all(|e| e.as_constant().is_some()))
    }

    pub fn to_cyc(&self) -> Option<[[Cyc; 3]; 3]> {
        let mut out: [[Cyc; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Cyc::from_int(0)));
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = self.entries[r][c].as_constant()?;
            }
        }
        Some(out)
    }

    pub fn mul(&self, other: &ProjMatrix) -> ProjMatrix {
        let entries = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                (0..3).fold(ParamPoly::zero(), |acc, t| {
                    acc.add(&self.entries[r][t].mul(&other.entries[t][c]))
                })
            })
        });
        ProjMatrix { entries }
    }

    pub fn det(&self) -> ParamPoly {
        let e = &self.entries;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            e[r1][c1].mul(&e[r2][c2]).sub(&e[r1][c2].mul(&e[r2][c1]))
        };
        e[0][0]
            .mul(&minor(1, 2, 1, 2))
            .sub(&e[0][1].mul(&minor(1, 2, 0, 2)))
            .add(&e[0][2].mul(&minor(1, 2, 0, 1)))
    }

    /// Adjugate; equals `det * inverse`, so it is the projective inverse.
    pub fn adjugate(&self) -> ProjMatrix {
        let e = &self.entries;
        let cof = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
            let m = e[rs[0]][cs[0]]
                .mul(&e[rs[1]][cs[1]])
                .sub(&e[rs[0]][cs[1]].mul(&e[rs[1]][cs[0]]));
            if (r + c) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        };
        ProjMatrix {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| cof(c, r))),
        }
    }

    pub fn scale(&self, s: &Cyc) -> ProjMatrix {
        ProjMatrix {
            entries: self.entries.clone().map(|row| row.map(|e| e.scale(s))),
        }
    }

    /// Divides by the first nonzero entry (row-major); specialized matrices only.
    pub fn projective_normalize(&self) -> Option<ProjMatrix> {
        let m = self.to_cyc()?;
        let lead = m.iter().flatten().find(|c| !c.is_zero())?.clone();
        let inv = Cyc::from_int(1)
            .arith(&lead, crate::cyclotomic::ArithOp::Div)
            .ok()?;
        Some(self.scale(&inv))
    }

    /// Scalar matrix test (specialized matrices only).
    pub fn is_scalar(&self) -> bool {
        let Some(m) = self.to_cyc() else { return false };
        let d = &m[0][0];
        !d.is_zero()
            && (0..3).all(|r| {
                (0..3).all(|c| {
                    if r == c {
                        m[r][c] == *d
                    } else {
                        m[r][c].is_zero()
                    }
                })
            })
    }

    /// Projective order, searching up to `limit`.
    pub fn projective_order(&self, limit: u32) -> Option<u32> {
        let mut acc = self.clone();
        for r in 1..=limit {
            if acc.is_scalar() {
                return Some(r);
            }
            acc = acc.mul(self);
        }
        None
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|r| (0..3).all(|c| r == c || self.entries[r][c].is_zero()))
    }
}

impl Serialize for ProjMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // [X; vY + wZ; sY + tZ] style
        let names = ["X", "Y", "Z"];
        write!(f, "[")?;
        for r in 0..3 {
            if r > 0 {
                write!(f, "; ")?;
            }
            let mut parts = Vec::new();
            for c in 0..3 {
                let e = &self.entries[r][c];
                if e.is_zero() {
                    continue;
                }
                let (neg, body) = e.coefficient_text();
                let text = if e.is_one() || (neg && e.neg().is_one()) {
                    names[c].to_string()
                } else {
                    format!("{body}*{}", names[c])
                };
                parts.push((neg, text));
            }
            if parts.is_empty() {
                write!(f, "0")?;
            }
            for (idx, (neg, text)) in parts.into_iter().enumerate() {
                match (idx, neg) {
                    (0, true) => write!(f, "-{text}")?,
                    (0, false) => write!(f, "{text}")?,
                    (_, true) => write!(f, " - {text}")?,
                    (_, false) => write!(f, " + {text}")?,
                }
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(i: u32, j: u32, k: u32) -> Monomial {
        Monomial::new(i, j, k)
    }

    fn z8_family() -> TernaryForm {
        let mut f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        f.add_term(m(3, 0, 2), ParamPoly::param("b"));
        f
    }

    #[test]
    fn monomial_order_and_enumeration() {
        let all = Monomial::all_of_degree(5);
        assert_eq!(all.len(), 21);
        assert_eq!(all[0], m(5, 0, 0));
        assert_eq!(all[1], m(4, 1, 0));
        assert_eq!(all[2], m(4, 0, 1));
        assert_eq!(*all.last().unwrap(), m(0, 0, 5));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        assert_eq!(Monomial::all_of_degree(6).len(), 28);
    }

    #[test]
    fn substitute_identity() {
        let f = TernaryForm::fermat(5);
        assert_eq!(f.substitute(&ProjMatrix::identity()).unwrap(), f);
    }

    #[test]
    fn substitute_diagonal_scales_coefficients() {
        let f = z8_family();
        let p = ProjMatrix::new([
            [ParamPoly::one(), ParamPoly::zero(), ParamPoly::zero()],
            [ParamPoly::zero(), ParamPoly::param("l2"), ParamPoly::zero()],
            [ParamPoly::zero(), ParamPoly::zero(), ParamPoly::param("l3")],
        ]);
        let g = f.substitute(&p).unwrap();
        let l2 = ParamPoly::param("l2");
        let l3 = ParamPoly::param("l3");
        assert_eq!(g.coeff(&m(5, 0, 0)), ParamPoly::one());
        assert_eq!(g.coeff(&m(0, 4, 1)), l2.pow(4).mul(&l3));
        assert_eq!(g.coeff(&m(1, 0, 4)), l3.pow(4));
        assert_eq!(g.coeff(&m(3, 0, 2)), ParamPoly::param("b").mul(&l3.pow(2)));
        assert_eq!(g.num_terms(), 4);
    }

    #[test]
    fn block_substitution_z5_coefficient() {
        // X^5 + Y^5 + Z^4 X + b X^3 Y^2 under [X; vY + wZ; sY + tZ]
        let mut f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 5, 0), m(1, 0, 4)]).unwrap();
        f.add_term(m(3, 2, 0), ParamPoly::param("b"));
        let u = |n: &str| ParamPoly::param(n);
        let p = ProjMatrix::new([
            [ParamPoly::one(), ParamPoly::zero(), ParamPoly::zero()],
            [ParamPoly::zero(), u("_v"), u("_w")],
            [ParamPoly::zero(), u("_s"), u("_t")],
        ]);
        let g = f.substitute(&p).unwrap();
        assert_eq!(g.coeff(&m(0, 0, 5)), u("_w").pow(5));
        // Oracle: expand (vY+wZ)^5 binomially; Y^4 Z coefficient is 5 v^4 w.
        assert_eq!(
            g.coeff(&m(0, 4, 1)),
            u("_v").pow(4).mul(&u("_w")).scale(&Cyc::from_int(5))
        );
    }

    #[test]
    fn singular_matrix_rejected() {
        let p = ProjMatrix::from_ints([[1, 0, 0], [0, 1, 1], [0, 2, 2]]);
        assert_eq!(
            TernaryForm::fermat(4).substitute(&p),
            Err(FormError::SingularMatrix)
        );
    }

    #[test]
    fn core_examples() {
        let (core, e) = z8_family().core_and_exponent().unwrap();
        assert_eq!(e, 5);
        assert_eq!(core.support(), vec![m(5, 0, 0)]);

        let mut k = TernaryForm::klein(6);
        k.add_term(m(2, 1, 3), ParamPoly::param("a3"));
        let (core, e) = k.core_and_exponent().unwrap();
        assert_eq!(e, 5);
        assert_eq!(core, TernaryForm::klein(6));

        let f4 = TernaryForm::fermat(4);
        assert_eq!(f4.core_and_exponent().unwrap(), (f4.clone(), 4));
        assert_eq!(
            TernaryForm::zero(4).core_and_exponent(),
            Err(FormError::ZeroForm)
        );
    }

    #[test]
    fn partial_examples() {
        let x5 = TernaryForm::from_monomials(5, &[m(5, 0, 0)]).unwrap();
        let [fx, fy, fz] = x5.partials();
        assert_eq!(fx.coeff(&m(4, 0, 0)), ParamPoly::int(5));
        assert!(fy.is_zero() && fz.is_zero());
        let [_, fy, _] = z8_family().partials();
        assert_eq!(fy.support(), vec![m(0, 3, 1)]);
        assert_eq!(fy.coeff(&m(0, 3, 1)), ParamPoly::int(4));
    }

    #[test]
    fn euler_relation_sextic() {
        let mut f = TernaryForm::klein(6);
        for (idx, mon) in [
            m(4, 0, 2),
            m(2, 4, 0),
            m(0, 2, 4),
            m(3, 2, 1),
            m(1, 3, 2),
            m(2, 1, 3),
        ]
        .into_iter()
        .enumerate()
        {
            f.add_term(mon, ParamPoly::param(&format!("p{idx}")));
        }
        let [fx, fy, fz] = f.partials();
        let x = TernaryForm::linear([ParamPoly::one(), ParamPoly::zero(), ParamPoly::zero()]);
        let y = TernaryForm::linear([ParamPoly::zero(), ParamPoly::one(), ParamPoly::zero()]);
        let z = TernaryForm::linear([ParamPoly::zero(), ParamPoly::zero(), ParamPoly::one()]);
        let euler = x.mul(&fx).add(&y.mul(&fy)).add(&z.mul(&fz));
        assert_eq!(euler, f.scale(&Cyc::from_int(6)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(z8_family().to_string(), "X^5 + b*X^3*Z^2 + X*Z^4 + Y^4*Z");
        let mut f = TernaryForm::zero(6);
        f.add_term(m(6, 0, 0), ParamPoly::constant(Cyc::zeta(3, 2)));
        f.add_term(m(0, 6, 0), ParamPoly::int(-2));
        f.add_term(m(0, 0, 6), ParamPoly::param("a").add(&ParamPoly::one()));
        assert_eq!(f.to_string(), "(-1 - zeta(3))*X^6 - 2*Y^6 + (1 + a)*Z^6");
    }

    #[test]
    fn adjugate_is_projective_inverse() {
        let p = ProjMatrix::from_ints([[1, 2, 0], [0, 1, 3], [4, 0, 1]]);
        let prod = p.mul(&p.adjugate());
        assert!(prod.is_scalar());
        assert_eq!(p.det(), ParamPoly::int(25));
    }

    #[test]
    fn matrix_display() {
        let u = |n: &str| ParamPoly::param(n);
        let p = ProjMatrix::new([
            [ParamPoly::one(), ParamPoly::zero(), ParamPoly::zero()],
            [ParamPoly::zero(), u("_v"), u("_w")],
            [ParamPoly::zero(), u("_s"), u("_t")],
        ]);
        assert_eq!(p.to_string(), "[X; _v*Y + _w*Z; _s*Y + _t*Z]");
    }
}
