//! Smoothness certificates: the core test, exact elimination, and prime-field scans.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Cyc;
use crate::ff::{self, FfError, FpForm, Reducer};
use crate::forms::{ProjMatrix, TernaryForm};
use crate::par::{self, Execution};
use crate::poly::{determinant, UniPoly};

pub const DEFAULT_MAX_PRIME: u64 = 10_000;
pub const MAX_PRIME_ENV: &str = "PLANEAUT_MAX_PRIME";
pub const MAX_SHEARS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmoothError {
    #[error("parameter {0} has no value")]
    Unassigned(String),
    #[error("form is zero")]
    ZeroForm,
    #[error(transparent)]
    Field(#[from] FfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Smooth,
    Singular,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CoreCheck,
    Resultant,
    FiniteField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// Exact coordinates; `F` and all partials vanish there.
    Rational { point: [Cyc; 3] },
    /// `x` runs over the roots of `min_poly` on the given patch and `y` over the
    /// roots of a fiber polynomial of degree `fiber_degree` (zero means all `y`).
    Algebraic {
        patch: String,
        min_poly: String,
        fiber_degree: usize,
    },
    /// A singular point of the reduction mod `p`.
    FiniteField { p: u64, point: [u64; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub method: Method,
    pub shears: u32,
}

impl SmoothnessCertificate {
    fn singular(method: Method, witness: Witness, shears: u32) -> Self {
        SmoothnessCertificate {
            verdict: Verdict::Singular,
            witness: Some(witness),
            method,
            shears,
        }
    }
}

/// Each variable reaches degree `d - 1` somewhere in the support.
pub fn core_necessary(f: &TernaryForm) -> bool {
    let d = f.degree();
    (0..3).all(|v| f.terms().any(|(m, _)| m.exps()[v] + 1 >= d))
}

fn vertex(v: usize) -> [Cyc; 3] {
    std::array::from_fn(|i| Cyc::from_int(i64::from(i == v)))
}

fn specialize_all(
    f: &TernaryForm,
    values: &HashMap<String, Cyc>,
) -> Result<TernaryForm, SmoothError> {
    let g = f.specialize(values);
    if let Some(p) = g.params().into_iter().next() {
        return Err(SmoothError::Unassigned(p));
    }
    if g.is_zero() {
        return Err(SmoothError::ZeroForm);
    }
    Ok(g)
}

/// Checks that a rational witness really is a singular point.
pub fn verify_witness(f: &TernaryForm, pt: &[Cyc; 3]) -> bool {
    std::iter::once(f.clone())
        .chain(f.partials())
        .all(|g| g.eval_point(pt).is_some_and(|v| v.is_zero()))
}

type Upoly = UniPoly<Cyc>;
/// Polynomial in `y` whose coefficients are polynomials in `x`, low degree first.
type YPoly = Vec<Upoly>;

fn dehomogenize(f: &TernaryForm) -> YPoly {
    let mut out: Vec<Vec<Cyc>> = Vec::new();
    for (m, c) in f.constant_terms().expect("specialized") {
        let (i, j) = (m.i as usize, m.j as usize);
        if out.len() <= j {
            out.resize(j + 1, Vec::new());
        }
        if out[j].len() <= i {
            out[j].resize(i + 1, Cyc::from_int(0));
        }
        out[j][i] = &out[j][i] + &c;
    }
    let mut y: YPoly = out.into_iter().map(UniPoly::new).collect();
    trim(&mut y);
    y
}

fn trim(a: &mut YPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

/// `Res_y(a, b)` as a polynomial in `x`, by evaluation at integers and interpolation.
fn resultant_y(a: &YPoly, b: &YPoly, bound: usize) -> Upoly {
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        // Both free of y: the pair vanishes together exactly on the gcd.
        return a[0].gcd(&b[0]);
    }
    let xs: Vec<Cyc> = (0..=bound as i64).map(Cyc::from_int).collect();
    let ys: Vec<Cyc> = xs
        .iter()
        .map(|x0| {
            let av: Vec<Cyc> = a.iter().map(|c| c.eval(x0)).collect();
            let bv: Vec<Cyc> = b.iter().map(|c| c.eval(x0)).collect();
            sylvester_det(&av, &bv, m, n)
        })
        .collect();
    UniPoly::interpolate(&xs, &ys)
}

fn sylvester_det(a: &[Cyc], b: &[Cyc], m: usize, n: usize) -> Cyc {
    let size = m + n;
    if size == 0 {
        return Cyc::from_int(1);
    }
    let zero = Cyc::from_int(0);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![zero.clone(); size];
        for i in 0..=m {
            row[r + i] = a[m - i].clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![zero.clone(); size];
        for i in 0..=n {
            row[r + i] = b[n - i].clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

fn total_degree(a: &YPoly) -> usize {
    a.iter()
        .enumerate()
        .filter_map(|(j, c)| c.degree().map(|dx| dx + j))
        .max()
        .unwrap_or(0)
}

fn mul_mod(a: &Upoly, b: &Upoly, h: &Upoly) -> Upoly {
    a.mul(b).rem(h)
}

fn reduce_y(h: &Upoly, a: &YPoly) -> YPoly {
    let mut out: YPoly = a.iter().map(|c| c.rem(h)).collect();
    trim(&mut out);
    out
}

/// Splits `h` until the leading coefficient of `a` is zero or invertible on each
/// factor; returns the factors with `a` made monic (or zero) there.
fn make_monic(h: &Upoly, a: &YPoly) -> Vec<(Upoly, YPoly)> {
    let a = reduce_y(h, a);
    let Some(lc) = a.last() else {
        return vec![(h.clone(), a)];
    };
    let g = lc.gcd(h);
    if g.degree() == Some(0) {
        let (_, s, _) = lc.ext_gcd(h);
        let monic = a.iter().map(|c| mul_mod(c, &s, h)).collect();
        return vec![(h.clone(), monic)];
    }
    let h2 = h.divrem(&g).0;
    let mut out = make_monic(&g, &a[..a.len() - 1].to_vec());
    out.extend(make_monic(&h2, &a));
    out
}

/// Remainder of `a` by the monic `b` with coefficients reduced mod `h`.
fn y_rem(h: &Upoly, a: &YPoly, b: &YPoly) -> YPoly {
    let nb = b.len() - 1;
    let mut r = reduce_y(h, a);
    while r.len() > nb {
        let k = r.len() - 1;
        let c = r[k].clone();
        for t in 0..=nb {
            let idx = k - nb + t;
            r[idx] = r[idx].sub(&mul_mod(&c, &b[t], h));
        }
        r = reduce_y(h, &r);
    }
    r
}

/// Gcd of `a` and `b` in `y` over `K[x]/(h)` with dynamic splitting of `h`.
fn d5_gcd(h: &Upoly, a: &YPoly, b: &YPoly) -> Vec<(Upoly, YPoly)> {
    let mut out = Vec::new();
    for (hi, bi) in make_monic(h, b) {
        if bi.is_empty() {
            out.extend(make_monic(&hi, a));
        } else {
            let r = y_rem(&hi, a, &bi);
            out.extend(d5_gcd(&hi, &bi, &r));
        }
    }
    out
}

fn patch_check(f: &TernaryForm, shears: u32) -> Option<SmoothnessCertificate> {
    // None signals a degenerate elimination.
    let parts: Vec<YPoly> = f.partials().iter().map(dehomogenize).collect();
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let res = par::map(Execution::Auto, &pairs, |&(i, j)| {
        let bound = total_degree(&parts[i]) * total_degree(&parts[j]);
        resultant_y(&parts[i], &parts[j], bound)
    });
    let nonzero: Vec<&Upoly> = res.iter().filter(|r| !r.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    let g = nonzero[1..]
        .iter()
        .fold(nonzero[0].clone(), |acc, r| acc.gcd(r));
    let h = g.squarefree();
    if h.degree().unwrap_or(0) == 0 {
        return Some(SmoothnessCertificate {
            verdict: Verdict::Smooth,
            witness: None,
            method: Method::Resultant,
            shears,
        });
    }
    for (hi, g12) in d5_gcd(&h, &parts[0], &parts[1]) {
        for (hj, g) in d5_gcd(&hi, &g12, &parts[2]) {
            if g.len() == 1 {
                continue;
            }
            let fiber = g.len().saturating_sub(1);
            if let Some(pt) = rational_point_over(f, &parts, &hj) {
                return Some(SmoothnessCertificate::singular(
                    Method::Resultant,
                    Witness::Rational { point: pt },
                    shears,
                ));
            }
            return Some(SmoothnessCertificate::singular(
                Method::Resultant,
                Witness::Algebraic {
                    patch: "Z=1".into(),
                    min_poly: upoly_text(&hj, "x"),
                    fiber_degree: fiber,
                },
                shears,
            ));
        }
    }
    Some(SmoothnessCertificate {
        verdict: Verdict::Smooth,
        witness: None,
        method: Method::Resultant,
        shears,
    })
}

/// Roots of `p` in its coefficient field that are cheap to find: the root of a
/// linear factor, or rational roots of a polynomial with rational coefficients.
fn easy_roots(p: &Upoly) -> Vec<Cyc> {
    match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![-&(&p.coeff(0) / &p.coeff(1))],
        _ => {}
    }
    let Some(q) = p
        .coeffs()
        .iter()
        .map(|c| c.to_rational())
        .collect::<Option<Vec<BigRational>>>()
    else {
        return Vec::new();
    };
    let den = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = q
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let lead_k = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lead_k > 0 {
        roots.push(Cyc::from_int(0));
    }
    let (Some(a0), Some(an)) = (ints[lead_k].to_i64(), ints.last().and_then(|c| c.to_i64())) else {
        return roots;
    };
    const LIMIT: i64 = 1_000_000;
    if a0.abs() > LIMIT || an.abs() > LIMIT {
        return roots;
    }
    let divisors = |n: i64| (1..=n.abs()).filter(move |k| n % k == 0);
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1, -1] {
                let r = Cyc::from_rational(BigRational::new((sign * num).into(), den.into()));
                if p.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// Searches for a singular point `(x, y, 1)` with `x` an easy root of `h`.
fn rational_point_over(f: &TernaryForm, parts: &[YPoly], h: &Upoly) -> Option<[Cyc; 3]> {
    for x in easy_roots(h) {
        let fibers: Vec<Upoly> = parts
            .iter()
            .map(|p| UniPoly::new(p.iter().map(|c| c.eval(&x)).collect()))
            .collect();
        let g = fibers[1..]
            .iter()
            .fold(fibers[0].clone(), |acc, q| acc.gcd(q));
        for y in easy_roots(&g.squarefree()) {
            let pt = [x.clone(), y, Cyc::from_int(1)];
            if verify_witness(f, &pt) {
                return Some(pt);
            }
        }
    }
    None
}

fn upoly_text(p: &Upoly, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let coef = if c.to_rational().is_some() {
            c.to_string()
        } else {
            format!("({c})")
        };
        parts.push(match (k, c.is_one()) {
            (0, _) => coef,
            (_, true) => mono,
            _ => format!("{coef}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Singular points on `Z = 0`.
fn line_at_infinity(f: &TernaryForm, shears: u32) -> Option<SmoothnessCertificate> {
    let parts = f.partials();
    let x_axis = vertex(0);
    if parts
        .iter()
        .all(|g| g.eval_point(&x_axis).unwrap().is_zero())
    {
        return Some(SmoothnessCertificate::singular(
            Method::Resultant,
            Witness::Rational { point: x_axis },
            shears,
        ));
    }
    // Restrict to Z = 0, Y = 1: polynomials in t = X.
    let restricted: Vec<Upoly> = parts
        .iter()
        .map(|g| {
            let mut v = vec![Cyc::from_int(0); g.degree() as usize + 1];
            for (m, c) in g.constant_terms().unwrap() {
                if m.k == 0 {
                    v[m.i as usize] = &v[m.i as usize] + &c;
                }
            }
            UniPoly::new(v)
        })
        .collect();
    let gcd = restricted
        .iter()
        .filter(|r| !r.is_zero())
        .fold(None::<Upoly>, |acc, r| {
            Some(acc.map_or_else(|| r.monic(), |a| a.gcd(r)))
        });
    match gcd {
        None => Some(SmoothnessCertificate::singular(
            Method::Resultant,
            Witness::Rational { point: vertex(1) },
            shears,
        )),
        Some(g) if g.degree().unwrap_or(0) > 0 => {
            if g.degree() == Some(1) {
                let pt = [-g.coeff(0), Cyc::from_int(1), Cyc::from_int(0)];
                if verify_witness(f, &pt) {
                    return Some(SmoothnessCertificate::singular(
                        Method::Resultant,
                        Witness::Rational { point: pt },
                        shears,
                    ));
                }
            }
            Some(SmoothnessCertificate::singular(
                Method::Resultant,
                Witness::Algebraic {
                    patch: "Z=0,Y=1".into(),
                    min_poly: upoly_text(&g, "x"),
                    fiber_degree: 1,
                },
                shears,
            ))
        }
        Some(_) => None,
    }
}

fn shear(k: u32) -> ProjMatrix {
    match k {
        0 => ProjMatrix::from_ints([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        1 => ProjMatrix::from_ints([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        _ => ProjMatrix::from_ints([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
    }
}

/// Maps a rational witness of `f(total x)` back to a point of `f`.
fn unshear(mut c: SmoothnessCertificate, total: &ProjMatrix) -> SmoothnessCertificate {
    if let Some(Witness::Rational { point }) = &mut c.witness {
        let m = total.to_cyc().expect("constant shear");
        *point = std::array::from_fn(|r| {
            (0..3).fold(Cyc::from_int(0), |acc, t| acc + &m[r][t] * &point[t])
        });
    }
    c
}

/// Exact smoothness decision for a fully specialized member of a family.
pub fn is_smooth(
    f: &TernaryForm,
    values: &HashMap<String, Cyc>,
) -> Result<SmoothnessCertificate, SmoothError> {
    let f = specialize_all(f, values)?;
    if !core_necessary(&f) {
        let d = f.degree();
        let v = (0..3)
            .find(|&v| f.terms().all(|(m, _)| m.exps()[v] + 1 < d))
            .unwrap();
        return Ok(SmoothnessCertificate::singular(
            Method::CoreCheck,
            Witness::Rational { point: vertex(v) },
            0,
        ));
    }
    if let Some(v) = f.partials().iter().position(|g| g.is_zero()) {
        // F does not involve that variable: a cone with vertex there.
        return Ok(SmoothnessCertificate::singular(
            Method::Resultant,
            Witness::Rational { point: vertex(v) },
            0,
        ));
    }
    let mut g = f.clone();
    // g(x) = f(total x)
    let mut total = ProjMatrix::identity();
    for shears in 0..=MAX_SHEARS {
        if let Some(c) = line_at_infinity(&g, shears).or_else(|| patch_check(&g, shears)) {
            return Ok(unshear(c, &total));
        }
        if shears < MAX_SHEARS {
            g = g.substitute(&shear(shears)).expect("shear is invertible");
            total = total.mul(&shear(shears));
        }
    }
    Ok(SmoothnessCertificate {
        verdict: Verdict::Undetermined,
        witness: None,
        method: Method::Resultant,
        shears: MAX_SHEARS,
    })
}

/// Prime cap from the environment, falling back to the default.
pub fn max_prime_from_env() -> u64 {
    std::env::var(MAX_PRIME_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_PRIME)
}

/// `(d-1)(d-2) + 1`; primes above it are theory-valid.
pub fn prime_threshold(d: u32) -> u64 {
    let d = d as u64;
    (d - 1) * (d - 2) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FfCertificate {
    pub certificate: SmoothnessCertificate,
    pub p: u64,
    pub point_count: u64,
    /// `|#C(F_p) - (p + 1)| <= 2 g sqrt(p)` when smooth.
    pub within_weil_bound: bool,
    pub warnings: Vec<String>,
}

pub fn finite_field_check(
    f: &TernaryForm,
    values: &HashMap<String, Cyc>,
    p: u64,
) -> Result<FfCertificate, SmoothError> {
    finite_field_check_with(f, values, p, Execution::Auto)
}

pub fn finite_field_check_with(
    f: &TernaryForm,
    values: &HashMap<String, Cyc>,
    p: u64,
    exec: Execution,
) -> Result<FfCertificate, SmoothError> {
    let cap = max_prime_from_env();
    if p > cap {
        return Err(FfError::PrimeTooLarge { p, cap }.into());
    }
    let f = specialize_all(f, values)?;
    let red = Reducer::new(p)?;
    let fp = FpForm::reduce(&f, &red)?;
    let scan = ff::scan(&fp, exec);
    let mut warnings = Vec::new();
    if p <= prime_threshold(f.degree()) {
        warnings.push(format!(
            "p = {p} does not exceed (d-1)(d-2)+1 = {}",
            prime_threshold(f.degree())
        ));
    }
    let g = f.genus() as f64;
    let dev = (scan.point_count as f64 - (p as f64 + 1.0)).abs();
    let within_weil_bound = dev <= 2.0 * g * (p as f64).sqrt() + 1e-9;
    let certificate = match scan.singular {
        Some(pt) => SmoothnessCertificate::singular(
            Method::FiniteField,
            Witness::FiniteField { p, point: pt },
            0,
        ),
        None => SmoothnessCertificate {
            verdict: Verdict::Smooth,
            witness: None,
            method: Method::FiniteField,
            shears: 0,
        },
    };
    Ok(FfCertificate {
        certificate,
        p,
        point_count: scan.point_count,
        within_weil_bound,
        warnings,
    })
}

/// Smallest prime above `(d-1)(d-2)+1` that is `1 mod lcm(orders)`.
pub fn minimal_valid_prime(d: u32, orders: &[u32]) -> u64 {
    let l = orders
        .iter()
        .fold(1u64, |acc, &n| num_integer::lcm(acc, n.max(1) as u64));
    (prime_threshold(d) + 1..)
        .find(|&p| (p - 1) % l == 0 && ff::is_prime(p))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{Monomial, ParamPoly};

    fn m(i: u32, j: u32, k: u32) -> Monomial {
        Monomial::new(i, j, k)
    }

    fn z8(beta: i64) -> TernaryForm {
        let mut f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        f.add_term(m(3, 0, 2), ParamPoly::int(beta));
        f
    }

    fn none() -> HashMap<String, Cyc> {
        HashMap::new()
    }

    #[test]
    fn core_examples() {
        assert!(core_necessary(&TernaryForm::fermat(5)));
        let low = TernaryForm::from_monomials(5, &[m(3, 2, 0), m(0, 3, 2), m(2, 0, 3)]).unwrap();
        assert!(!core_necessary(&low));
        let xg = TernaryForm::from_monomials(
            5,
            &[m(5, 0, 0), m(1, 0, 4), m(1, 4, 0), m(1, 2, 2), m(3, 1, 1)],
        )
        .unwrap();
        assert!(core_necessary(&xg));
        let c = is_smooth(&low, &none()).unwrap();
        assert_eq!(c.verdict, Verdict::Singular);
        assert_eq!(c.method, Method::CoreCheck);
    }

    #[test]
    fn forced_factor_family_is_singular() {
        let xg = TernaryForm::from_monomials(
            5,
            &[m(5, 0, 0), m(1, 0, 4), m(1, 4, 0), m(1, 2, 2), m(3, 1, 1)],
        )
        .unwrap();
        assert_eq!(is_smooth(&xg, &none()).unwrap().verdict, Verdict::Singular);
    }

    #[test]
    fn z8_family_thresholds() {
        let c = is_smooth(&z8(2), &none()).unwrap();
        assert_eq!(c.verdict, Verdict::Singular);
        assert_eq!(is_smooth(&z8(1), &none()).unwrap().verdict, Verdict::Smooth);
        let c = is_smooth(&z8(-2), &none()).unwrap();
        assert_eq!(c.verdict, Verdict::Singular);
        let Some(Witness::Rational { point }) = c.witness else {
            panic!("expected a rational witness, got {c:?}")
        };
        assert!(verify_witness(&z8(-2), &point));
    }

    #[test]
    fn y_free_partials() {
        // F_X and F_Z do not involve Y on the patch Z = 1.
        let f = |beta: i64| {
            let mut f =
                TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 5, 0), m(1, 0, 4)]).unwrap();
            f.add_term(m(3, 0, 2), ParamPoly::int(beta));
            f
        };
        for beta in [2, -2] {
            assert_eq!(
                is_smooth(&f(beta), &none()).unwrap().verdict,
                Verdict::Singular
            );
        }
        let c = is_smooth(&f(-2), &none()).unwrap();
        assert!(matches!(c.witness, Some(Witness::Rational { .. })));
        assert_eq!(is_smooth(&f(3), &none()).unwrap().verdict, Verdict::Smooth);
    }

    #[test]
    fn parametric_input_needs_values() {
        let mut f = z8(0);
        f.add_term(m(3, 0, 2), ParamPoly::param("b"));
        assert_eq!(
            is_smooth(&f, &none()),
            Err(SmoothError::Unassigned("b".into()))
        );
        let vals: HashMap<String, Cyc> = [("b".to_string(), Cyc::from_int(2))].into();
        assert_eq!(is_smooth(&f, &vals).unwrap().verdict, Verdict::Singular);
    }

    #[test]
    fn fermat_smooth() {
        for d in 4..=6 {
            assert_eq!(
                is_smooth(&TernaryForm::fermat(d), &none()).unwrap().verdict,
                Verdict::Smooth
            );
        }
    }

    #[test]
    fn ff_examples() {
        let c = finite_field_check(&z8(2), &none(), 41).unwrap();
        assert_eq!(c.certificate.verdict, Verdict::Singular);
        let c = finite_field_check(&z8(1), &none(), 17).unwrap();
        assert_eq!(c.certificate.verdict, Verdict::Smooth);
        assert!(c.within_weil_bound);
        assert!(c.warnings.is_empty());
        let c = finite_field_check(&z8(1), &none(), 13).unwrap();
        assert_eq!(c.warnings.len(), 1);
        let mut w = TernaryForm::fermat(4);
        w.add_term(m(4, 0, 0), ParamPoly::constant(Cyc::zeta(3, 1)));
        assert!(matches!(
            finite_field_check(&w, &none(), 29),
            Err(SmoothError::Field(FfError::NoRootOfUnity { p: 29, n: 3 }))
        ));
        assert!(matches!(
            finite_field_check(&z8(1), &none(), 10_007),
            Err(SmoothError::Field(FfError::PrimeTooLarge { .. }))
        ));
    }

    #[test]
    fn valid_primes() {
        assert_eq!(minimal_valid_prime(5, &[4]), 17);
        assert_eq!(minimal_valid_prime(5, &[8]), 17);
        assert_eq!(minimal_valid_prime(6, &[3]), 31);
        assert_eq!(prime_threshold(6), 21);
    }
}
