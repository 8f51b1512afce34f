//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! An element of order `n` is stored in the power basis `1, z, ..., z^(phi(n)-1)`
//! reduced modulo the n-th cyclotomic polynomial, as an integer numerator vector
//! over one positive common denominator. The representation is canonical, so
//! equality within one order is a vector comparison; elements of different
//! orders are compared after embedding both into `Q(zeta_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::UniPoly;

/// Largest ambient order accepted, `lcm(1..10)`.
pub const DEFAULT_ORDER_CAP: u32 = 2520;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {0} exceeds the cap {DEFAULT_ORDER_CAP}")]
    OrderTooLarge(u64),
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct Cyc {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut rem: Vec<i64> = vec![0; n as usize + 1];
    rem[0] = -1;
    rem[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let divisor = cyclotomic_poly(d);
        rem = exact_div_monic(&rem, &divisor);
    }
    let p = Arc::new(rem);
    phi_cache().write().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (t, bt) in b.iter().enumerate() {
            r[k - db + t] -= c * bt;
        }
        q[k - db] = c;
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn lcm_u32(a: u32, b: u32) -> u64 {
    (a as u64 / a.gcd(&b) as u64) * b as u64
}

fn reduce_mod_phi(mut v: Vec<BigInt>, n: u32) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for i in (deg..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for (t, &pt) in phi.iter().enumerate().take(deg) {
                if pt != 0 {
                    v[i - deg + t] -= &c * pt;
                }
            }
        }
    }
    v.resize(deg, BigInt::zero());
    v
}

impl Cyc {
    fn normalized(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Cyc {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
        Cyc { order, num, den }
    }

    /// Validated zeta constructor: `zeta_n^k` of order exactly `n`.
    pub fn try_zeta(n: u32, k: i64) -> Result<Cyc, CycError> {
        if n == 0 {
            return Err(CycError::ZeroOrder);
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(CycError::OrderTooLarge(n as u64));
        }
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        Ok(Cyc::normalized(n, reduce_mod_phi(v, n), BigInt::one()))
    }

    /// `zeta_n^k`, stored at order `n`. Panics when `n` is zero or above the cap.
    pub fn zeta(n: u32, k: i64) -> Cyc {
        Cyc::try_zeta(n, k).expect("invalid cyclotomic order")
    }

    /// `zeta_n^k` stored at its minimal order `n / gcd(n, k)`.
    pub fn zeta_min(n: u32, k: i64) -> Cyc {
        let g = (n as i64).gcd(&k) as u32;
        let g = if g == 0 { n } else { g };
        Cyc::zeta(n / g, k / g as i64)
    }

    /// `exp(2 pi i x)` for a rational `x`, at minimal order.
    pub fn root_of_unity(x: num_rational::Rational64) -> Cyc {
        let n = *x.denom();
        Cyc::zeta_min(n as u32, x.numer().rem_euclid(n))
    }

    pub fn from_rational(q: BigRational) -> Cyc {
        let (n, d) = q.into_raw();
        Cyc::normalized(1, vec![n], d)
    }

    pub fn from_int(n: i64) -> Cyc {
        Cyc {
            order: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    /// Builds an element of order `n` from power-basis coordinates, reducing
    /// modulo the cyclotomic polynomial if more than `phi(n)` are given.
    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Cyc {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Cyc::normalized(n, reduce_mod_phi(num, n), den)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coordinates as rationals (length `phi(order)`).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number when it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(zeta_target)`; `target` must be a multiple of the order.
    pub fn embed(&self, target: u32) -> Cyc {
        assert!(
            target % self.order == 0,
            "cannot embed order {} into {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let s = (target / self.order) as usize;
        let mut v = vec![BigInt::zero(); s * (self.num.len().saturating_sub(1)) + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * s] = c.clone();
        }
        Cyc {
            order: target,
            num: reduce_mod_phi(v, target),
            den: self.den.clone(),
        }
    }

    fn common_order(a: &Cyc, b: &Cyc) -> Result<u32, CycError> {
        let l = lcm_u32(a.order, b.order);
        if l > DEFAULT_ORDER_CAP as u64 {
            return Err(CycError::OrderTooLarge(l));
        }
        Ok(l as u32)
    }

    fn lift_pair(a: &Cyc, b: &Cyc) -> Result<(Cyc, Cyc), CycError> {
        if a.order == b.order {
            return Ok((a.clone(), b.clone()));
        }
        // Rational operands embed trivially.
        if a.order == 1 || a.is_rational_repr() {
            return Ok((a.embed_rational(b.order), b.clone()));
        }
        if b.order == 1 || b.is_rational_repr() {
            return Ok((a.clone(), b.embed_rational(a.order)));
        }
        let l = Cyc::common_order(a, b)?;
        Ok((a.embed(l), b.embed(l)))
    }

    fn is_rational_repr(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    fn embed_rational(&self, order: u32) -> Cyc {
        let mut num = vec![BigInt::zero(); euler_phi(order) as usize];
        num[0] = self.num[0].clone();
        Cyc {
            order,
            num,
            den: self.den.clone(),
        }
    }

    /// Checked field arithmetic.
    pub fn arith(&self, other: &Cyc, op: ArithOp) -> Result<Cyc, CycError> {
        let (a, b) = Cyc::lift_pair(self, other)?;
        let n = a.order;
        Ok(match op {
            ArithOp::Add | ArithOp::Sub => {
                let sign = if op == ArithOp::Add { 1 } else { -1 };
                let num = a
                    .num
                    .iter()
                    .zip(&b.num)
                    .map(|(x, y)| x * &b.den + y * &a.den * sign)
                    .collect();
                Cyc::normalized(n, num, &a.den * &b.den)
            }
            ArithOp::Mul => a.mul_same(&b),
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(CycError::DivisionByZero);
                }
                a.mul_same(&b.inverse_same())
            }
        })
    }

    fn mul_same(&self, other: &Cyc) -> Cyc {
        let n = self.order;
        if self.num.len() == 1 {
            let num = vec![&self.num[0] * &other.num[0]];
            return Cyc::normalized(n, num, &self.den * &other.den);
        }
        let mut v = vec![BigInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Cyc::normalized(n, reduce_mod_phi(v, n), &self.den * &other.den)
    }

    fn inverse_same(&self) -> Cyc {
        let n = self.order;
        if self.is_rational_repr() {
            let mut num = vec![BigInt::zero(); self.num.len()];
            num[0] = self.den.clone();
            return Cyc::normalized(n, num, self.num[0].clone());
        }
        let a = UniPoly::new(self.coeffs());
        let phi = UniPoly::new(
            cyclotomic_poly(n)
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        );
        let (g, s, _) = a.ext_gcd(&phi);
        debug_assert!(g.degree() == Some(0));
        Cyc::from_coeffs(n, s.coeffs())
    }

    pub fn try_inv(&self) -> Result<Cyc, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        Ok(self.inverse_same())
    }

    pub fn pow(&self, e: i64) -> Cyc {
        let mut base = if e < 0 {
            self.try_inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::from_int(1).embed_rational(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// When the value is a root of unity, returns `(n', e')` with the value equal to
    /// `zeta_{n'}^{e'}`, `n'` minimal and `0 <= e' < n'`.
    pub fn is_root_of_unity(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let m = if self.order % 2 == 1 {
            2 * self.order
        } else {
            self.order
        };
        let target = self.embed(m);
        if !target.den.is_one() {
            return None;
        }
        // Walk x^e mod Phi_m for e = 0..m.
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        let mut cur: Vec<i64> = vec![0; deg];
        cur[0] = 1;
        for e in 0..m {
            if cur
                .iter()
                .zip(&target.num)
                .all(|(c, t)| BigInt::from(*c) == *t)
            {
                let g = m.gcd(&e);
                let g = if e == 0 { m } else { g };
                return Some((m / g, e / g));
            }
            // multiply by x
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for t in 0..deg {
                    cur[t] -= top * phi[t];
                }
            }
        }
        None
    }

    /// Multiplicative order when the value is a root of unity.
    pub fn multiplicative_order(&self) -> Option<u32> {
        self.is_root_of_unity().map(|(n, _)| n)
    }

    fn fmt_term(
        f: &mut fmt::Formatter<'_>,
        first: bool,
        c: &BigRational,
        k: usize,
        n: u32,
    ) -> fmt::Result {
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if k == 0 {
            return write!(f, "{}", a);
        }
        if !a.is_one() {
            write!(f, "{}*", a)?;
        }
        if k == 1 {
            write!(f, "zeta({})", n)
        } else {
            write!(f, "zeta({})^{}", n, k)
        }
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Cyc) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        match Cyc::lift_pair(self, other) {
            Ok((a, b)) => a.den == b.den && a.num == b.num,
            Err(_) => false,
        }
    }
}

impl Eq for Cyc {}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]({})", self.order, self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            Cyc::fmt_term(f, first, c, k, self.order)?;
            first = false;
        }
        Ok(())
    }
}

impl serde::Serialize for Cyc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<i64> for Cyc {
    fn from(n: i64) -> Cyc {
        Cyc::from_int(n)
    }
}

impl From<BigRational> for Cyc {
    fn from(q: BigRational) -> Cyc {
        Cyc::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl<'a> $tr<&'a Cyc> for &'a Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &'a Cyc) -> Cyc {
                match self.arith(rhs, $op) {
                    Ok(c) => c,
                    Err(e) => panic!("cyclotomic arithmetic failed: {e}"),
                }
            }
        }
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: Cyc) -> Cyc {
                $tr::$method(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &'a Cyc) -> Cyc {
                $tr::$method(&self, rhs)
            }
        }
        impl<'a> $tr<Cyc> for &'a Cyc {
            type Output = Cyc;
            fn $method(self, rhs: Cyc) -> Cyc {
                $tr::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl crate::scalar::Scalar for Cyc {
    fn zero() -> Self {
        Cyc::from_int(0)
    }
    fn one() -> Self {
        Cyc::from_int(1)
    }
    fn from_i64(n: i64) -> Self {
        Cyc::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Cyc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Cyc::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(21).len() as u32 - 1, euler_phi(21));
        assert_eq!(euler_phi(2520), 576);
    }

    #[test]
    fn zeta_basics() {
        assert_eq!(Cyc::zeta(1, 0), Cyc::from_int(1));
        assert_eq!(Cyc::zeta(4, 2), Cyc::from_int(-1));
        assert_eq!(Cyc::zeta(3, 1) + Cyc::zeta(3, 2), Cyc::from_int(-1));
        assert_eq!(Cyc::zeta(8, 1) * Cyc::zeta(8, 7), Cyc::from_int(1));
        for n in 1..=30u32 {
            for k in 0..n as i64 {
                assert!(Cyc::zeta(n, k).pow(n as i64).is_one(), "zeta({n},{k})^n");
            }
        }
    }

    #[test]
    fn zeta_min_normalizes_order() {
        let z = Cyc::zeta_min(12, 8);
        assert_eq!(z.order(), 3);
        assert_eq!(z, Cyc::zeta(3, 2));
        assert_eq!(Cyc::zeta(12, 8).order(), 12);
    }

    #[test]
    fn cross_order_equality() {
        assert_eq!(Cyc::zeta(6, 2), Cyc::zeta(3, 1));
        assert_eq!(Cyc::zeta(9, 3), Cyc::zeta(3, 1));
        assert_ne!(Cyc::zeta(9, 1), Cyc::zeta(3, 1));
        assert_eq!(Cyc::zeta(10, 5), Cyc::from_int(-1));
    }

    #[test]
    fn hessian_prefactor() {
        let w = Cyc::zeta(3, 1);
        let w2 = Cyc::zeta(3, 2);
        let diff = &w - &w2;
        let inv = Cyc::from_int(1).arith(&diff, ArithOp::Div).unwrap();
        assert_eq!(&inv * &diff, Cyc::from_int(1));
        // (w - w^2)^2 = -3
        assert_eq!(&diff * &diff, Cyc::from_int(-3));
        assert_eq!(inv, Cyc::from_coeffs(3, &[q(-1, 3), q(-2, 3)]));
    }

    #[test]
    fn golden_ratio_relation() {
        // zeta5 + zeta5^{-1} is a root of x^2 + x - 1
        let t = Cyc::zeta(5, 1) + Cyc::zeta(5, 4);
        let v = &(&t * &t) + &t;
        assert_eq!(v - Cyc::from_int(1), Cyc::from_int(0));
    }

    #[test]
    fn division_by_zero_reported() {
        let r = Cyc::from_int(1).arith(&Cyc::from_int(0), ArithOp::Div);
        assert_eq!(r, Err(CycError::DivisionByZero));
    }

    #[test]
    fn order_cap() {
        assert!(Cyc::try_zeta(2521, 1).is_err());
        assert!(Cyc::try_zeta(0, 1).is_err());
        let a = Cyc::zeta(2520, 1);
        let b = Cyc::zeta(11, 1);
        assert!(matches!(
            a.arith(&b, ArithOp::Mul),
            Err(CycError::OrderTooLarge(_))
        ));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyc::from_int(-1).is_root_of_unity(), Some((2, 1)));
        assert_eq!(Cyc::from_int(1).is_root_of_unity(), Some((1, 0)));
        assert_eq!(Cyc::from_int(2).is_root_of_unity(), None);
        assert_eq!(Cyc::zeta(12, 8).is_root_of_unity(), Some((3, 2)));
        assert_eq!((-Cyc::zeta(3, 1)).is_root_of_unity(), Some((6, 5)));
        let not_unit = Cyc::zeta(5, 1) + Cyc::zeta(5, 4);
        assert_eq!(not_unit.is_root_of_unity(), None);
        // 1/2 + zeta(3): absolute value 1? No: it's i*sqrt(3)/2
        let h = Cyc::from_rational(q(1, 2)) + Cyc::zeta(3, 1);
        assert_eq!(h.is_root_of_unity(), None);
    }

    #[test]
    fn root_of_unity_matches_brute_force() {
        // Oracle: compare against every zeta(12, k) directly.
        for k in 0..12 {
            let z = Cyc::zeta(12, k);
            let found = (0..12).find(|&j| Cyc::zeta(12, j) == z).unwrap();
            let (n, e) = z.is_root_of_unity().unwrap();
            assert_eq!(Cyc::zeta(n, e as i64), Cyc::zeta(12, found));
            let g = 12i64.gcd(&k);
            assert_eq!(n as i64, 12 / g);
        }
    }

    #[test]
    fn display() {
        assert_eq!(Cyc::zeta(4, 2).to_string(), "-1");
        assert_eq!(Cyc::zeta(3, 2).to_string(), "-1 - zeta(3)");
        assert_eq!(Cyc::from_rational(q(-3, 4)).to_string(), "-3/4");
        assert_eq!(
            Cyc::from_coeffs(8, &[q(0, 1), q(2, 3), q(0, 1), q(-1, 1)]).to_string(),
            "2/3*zeta(8) - zeta(8)^3"
        );
    }
}
