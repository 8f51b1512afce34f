//! The Hessian groups, Fermat and Klein reference curves, spaces of forms
//! invariant under a matrix group, and the `Upsilon` obstruction polynomials.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{ArithOp, Cyc};
use crate::forms::{Monomial, ParamPoly, ProjMatrix, TernaryForm};
use crate::par::{self, Execution};
use crate::poly;

pub const DEFAULT_CLOSURE_CAP: usize = 1000;
const ORDER_LIMIT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeds {0} elements")]
    CapExceeded(usize),
    #[error("generator {0} is not an invertible constant matrix")]
    BadGenerator(usize),
    #[error("element {0} has no finite projective order up to {ORDER_LIMIT}")]
    InfiniteOrder(usize),
    #[error("element {0} has power a scalar that is not a root of unity; rescale it")]
    NonUnitScalar(usize),
    #[error("lambda must satisfy lambda^3 = zeta(3)")]
    BadLambda,
}

type Mat = [[Cyc; 3]; 3];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| (0..3).fold(Cyc::from_int(0), |acc, t| acc + &a[r][t] * &b[t][c]))
    })
}

fn normalize(m: &Mat) -> Mat {
    let lead = m
        .iter()
        .flatten()
        .find(|c| !c.is_zero())
        .expect("nonzero matrix");
    let inv = Cyc::from_int(1).arith(lead, ArithOp::Div).unwrap();
    m.clone().map(|row| row.map(|c| &c * &inv))
}

/// Hash key of a normalized matrix; entries are embedded into `Q(zeta_n)`.
fn key(m: &Mat, n: u32) -> Vec<BigRational> {
    m.iter()
        .flatten()
        .flat_map(|c| c.embed(n).coeffs())
        .collect()
}

fn omega() -> Cyc {
    Cyc::zeta(3, 1)
}

/// A finite subgroup of `PGL_3`, elements normalized so the first nonzero
/// entry (row-major) is 1. Element 0 is the identity.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteMatrixGroup {
    pub generators: Vec<(String, ProjMatrix)>,
    pub elements: Vec<ProjMatrix>,
    pub order: usize,
    /// Projective element order to number of elements of that order.
    pub element_orders: BTreeMap<u32, usize>,
    #[serde(skip)]
    field_order: u32,
    #[serde(skip)]
    keys: HashSet<Vec<BigRational>>,
}

impl FiniteMatrixGroup {
    pub fn contains(&self, m: &ProjMatrix) -> bool {
        let Some(c) = m.to_cyc() else { return false };
        if c.iter()
            .flatten()
            .any(|x| self.field_order % x.order() != 0)
        {
            return false;
        }
        self.keys.contains(&key(&normalize(&c), self.field_order))
    }

    pub fn is_subgroup_of(&self, g: &FiniteMatrixGroup) -> bool {
        self.elements.iter().all(|e| g.contains(e))
    }

    /// `self` is normal in `g`: conjugation by every generator of `g` preserves it.
    pub fn is_normal_in(&self, g: &FiniteMatrixGroup) -> bool {
        self.is_subgroup_of(g)
            && g.generators.iter().all(|(_, x)| {
                let inv = x.adjugate();
                self.elements
                    .iter()
                    .all(|h| self.contains(&x.mul(h).mul(&inv)))
            })
    }
}

/// Breadth-first closure of `gens` under products.
pub fn closure(gens: &[(String, ProjMatrix)], cap: usize) -> Result<FiniteMatrixGroup, GroupError> {
    let mut mats = Vec::with_capacity(gens.len());
    for (i, (_, g)) in gens.iter().enumerate() {
        let c = g.to_cyc().ok_or(GroupError::BadGenerator(i))?;
        if g.det().as_constant().is_none_or(|d| d.is_zero()) {
            return Err(GroupError::BadGenerator(i));
        }
        mats.push(normalize(&c));
    }
    let n = mats
        .iter()
        .flatten()
        .flatten()
        .fold(1u32, |acc, c| num_integer::lcm(acc, c.order()));
    let id = normalize(&ProjMatrix::identity().to_cyc().unwrap());
    let mut keys = HashSet::from([key(&id, n)]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &mats {
            let y = normalize(&mat_mul(&elements[i], g));
            if keys.insert(key(&y, n)) {
                if elements.len() == cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                elements.push(y);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    let elements: Vec<ProjMatrix> = elements.into_iter().map(ProjMatrix::from_cyc).collect();
    let mut element_orders = BTreeMap::new();
    for (i, e) in elements.iter().enumerate() {
        let r = e
            .projective_order(ORDER_LIMIT)
            .ok_or(GroupError::InfiniteOrder(i))?;
        *element_orders.entry(r).or_default() += 1;
    }
    Ok(FiniteMatrixGroup {
        generators: gens.to_vec(),
        order: elements.len(),
        elements,
        element_orders,
        field_order: n,
        keys,
    })
}

/// `(S, T, U, V)` with `omega = zeta(3)`.
pub fn hessian_generators() -> [(String, ProjMatrix); 4] {
    let one = Cyc::from_int(1);
    let w = omega();
    let w2 = w.pow(2);
    let s = ProjMatrix::diag(one.clone(), w.clone(), w2.clone());
    let t = ProjMatrix::from_ints([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
    let u = ProjMatrix::diag(one.clone(), one.clone(), w.clone());
    let pre = one.arith(&(&w - &w2), ArithOp::Div).unwrap();
    let v = ProjMatrix::from_cyc([
        [one.clone(), one.clone(), one.clone()],
        [one.clone(), w.clone(), w2.clone()],
        [one, w2, w],
    ])
    .scale(&pre);
    [
        ("S".into(), s),
        ("T".into(), t),
        ("U".into(), u),
        ("V".into(), v),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HessianSubgroup {
    H36,
    H72,
    H216,
}

impl HessianSubgroup {
    pub fn from_order(n: u32) -> Option<Self> {
        match n {
            36 => Some(HessianSubgroup::H36),
            72 => Some(HessianSubgroup::H72),
            216 => Some(HessianSubgroup::H216),
            _ => None,
        }
    }

    /// `<S,T,V>`, `<S,T,V,UVU^-1>`, `<S,T,U,V>`.
    pub fn generators(self) -> Vec<(String, ProjMatrix)> {
        let [s, t, u, v] = hessian_generators();
        match self {
            HessianSubgroup::H36 => vec![s, t, v],
            HessianSubgroup::H72 => {
                let uvu = u.1.mul(&v.1).mul(&u.1.adjugate());
                vec![s, t, v, ("UVU^-1".into(), uvu)]
            }
            HessianSubgroup::H216 => vec![s, t, u, v],
        }
    }
}

pub fn hessian(sub: HessianSubgroup) -> FiniteMatrixGroup {
    closure(&sub.generators(), DEFAULT_CLOSURE_CAP).expect("Hessian groups are finite")
}

/// The four permutations and the diagonal element of order 3 shared by every
/// Hessian group in its standard position.
pub fn hessian_common_elements() -> Vec<ProjMatrix> {
    let ones = || std::array::from_fn(|_| Cyc::from_int(1));
    let mut out: Vec<ProjMatrix> = [[2, 1, 0], [0, 2, 1], [1, 0, 2], [1, 2, 0]]
        .into_iter()
        .map(|p| ProjMatrix::monomial(p, ones()))
        .collect();
    out.push(ProjMatrix::diag(Cyc::from_int(1), omega(), omega().pow(2)));
    out
}

/// Degree-`d` forms `F` with `F(g x) = lambda_g F(x)` for every listed element,
/// grouped by the character `(lambda_g)`.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantSpace {
    pub characters: Vec<Cyc>,
    pub basis: Vec<TernaryForm>,
}

struct Eigen {
    lambda: Cyc,
    shifted: Vec<Vec<Cyc>>,
}

/// Matrix of `F -> F(g x)` on the monomial basis (column per source monomial).
fn induced(g: &ProjMatrix, monos: &[Monomial]) -> Vec<Vec<Cyc>> {
    let n = monos.len();
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut out = vec![vec![Cyc::from_int(0); n]; n];
    for (c, m) in monos.iter().enumerate() {
        let d = m.degree();
        let img = TernaryForm::from_monomials(d, &[*m])
            .unwrap()
            .substitute(g)
            .unwrap();
        for (mm, coeff) in img.constant_terms().unwrap() {
            out[index[&mm]][c] = coeff;
        }
    }
    out
}

fn eigen_candidates(
    idx: usize,
    g: &ProjMatrix,
    monos: &[Monomial],
) -> Result<Vec<Eigen>, GroupError> {
    let r = g
        .projective_order(ORDER_LIMIT)
        .ok_or(GroupError::InfiniteOrder(idx))?;
    let mut p = g.clone();
    for _ in 1..r {
        p = p.mul(g);
    }
    let scalar = p.entries[0][0].as_constant().unwrap();
    let d = monos[0].degree() as i64;
    // lambda^r = scalar^d, a root of unity of order o.
    let target = scalar.pow(d);
    let o = target
        .multiplicative_order()
        .ok_or(GroupError::NonUnitScalar(idx))?;
    let big = r * o;
    let m = induced(g, monos);
    let n = monos.len();
    let mut out = Vec::new();
    for k in 0..big {
        let lambda = Cyc::zeta_min(big, k as i64);
        if lambda.pow(r as i64) != target {
            continue;
        }
        let shifted: Vec<Vec<Cyc>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &m[i][j] - &lambda
                        } else {
                            m[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        out.push(Eigen { lambda, shifted });
    }
    Ok(out)
}

/// Vectors of span(basis) killed by `a`.
fn restrict(a: &[Vec<Cyc>], basis: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
    let n = a.len();
    let k = basis.len();
    let ab: Vec<Vec<Cyc>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| (0..n).fold(Cyc::from_int(0), |acc, t| acc + &a[i][t] * &basis[j][t]))
                .collect()
        })
        .collect();
    poly::kernel(&ab, k)
        .into_iter()
        .map(|x| {
            (0..n)
                .map(|t| (0..k).fold(Cyc::from_int(0), |acc, j| acc + &x[j] * &basis[j][t]))
                .collect()
        })
        .collect()
}

fn dfs(
    eig: &[Vec<Eigen>],
    level: usize,
    basis: Vec<Vec<Cyc>>,
    chars: Vec<Cyc>,
    out: &mut Vec<(Vec<Cyc>, Vec<Vec<Cyc>>)>,
) {
    if basis.is_empty() {
        return;
    }
    if level == eig.len() {
        out.push((chars, basis));
        return;
    }
    for e in &eig[level] {
        let sub = restrict(&e.shifted, &basis);
        let mut c = chars.clone();
        c.push(e.lambda.clone());
        dfs(eig, level + 1, sub, c, out);
    }
}

/// Simultaneous eigenspaces of the induced maps on degree-`d` forms.
///
/// Each element must have a power equal to a root-of-unity scalar, which holds
/// for any element of a finite linear group.
pub fn invariant_forms(
    elements: &[ProjMatrix],
    d: u32,
    exec: Execution,
) -> Result<Vec<InvariantSpace>, GroupError> {
    let monos = Monomial::all_of_degree(d);
    let n = monos.len();
    let eig: Vec<Vec<Eigen>> = elements
        .iter()
        .enumerate()
        .map(|(i, g)| eigen_candidates(i, g, &monos))
        .collect::<Result<_, _>>()?;
    let full: Vec<Vec<Cyc>> = (0..n)
        .map(|i| (0..n).map(|j| Cyc::from_int((i == j) as i64)).collect())
        .collect();
    if eig.is_empty() {
        return Ok(vec![space(vec![], full, &monos, d)]);
    }
    let found = par::map(exec, &eig[0], |e| {
        let mut out = Vec::new();
        dfs(
            &eig,
            1,
            restrict(&e.shifted, &full),
            vec![e.lambda.clone()],
            &mut out,
        );
        out
    });
    Ok(found
        .into_iter()
        .flatten()
        .map(|(c, b)| space(c, b, &monos, d))
        .collect())
}

fn space(characters: Vec<Cyc>, basis: Vec<Vec<Cyc>>, monos: &[Monomial], d: u32) -> InvariantSpace {
    let basis = basis
        .into_iter()
        .map(|v| {
            TernaryForm::from_terms(
                d,
                monos
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (*m, ParamPoly::constant(c))),
            )
            .unwrap()
        })
        .collect();
    InvariantSpace { characters, basis }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Fermat,
    Klein,
}

/// The reference curve and the order of its automorphism group.
pub fn reference_curve(kind: CurveKind, d: u32) -> (TernaryForm, u64) {
    let d64 = d as u64;
    match kind {
        CurveKind::Fermat => (TernaryForm::fermat(d), 6 * d64 * d64),
        CurveKind::Klein => (TernaryForm::klein(d), 3 * (d64 * d64 - 3 * d64 + 3)),
    }
}

/// `[Z; X; Y]` and `[X; zeta_n Y; zeta_n^(2-d) Z]` with `n = d^2 - 3d + 3`.
pub fn klein_generators(d: u32) -> [ProjMatrix; 2] {
    let n = d * d - 3 * d + 3;
    let one = || Cyc::from_int(1);
    [
        ProjMatrix::monomial([2, 0, 1], [one(), one(), one()]),
        ProjMatrix::diag(one(), Cyc::zeta(n, 1), Cyc::zeta(n, 2 - d as i64)),
    ]
}

/// The three cube roots `zeta(9)^(1+3t)` of `omega`.
pub fn lambda_choices() -> [Cyc; 3] {
    std::array::from_fn(|t| Cyc::zeta(9, 1 + 3 * t as i64))
}

#[derive(Clone, Debug, Serialize)]
pub struct UpsilonValues {
    pub lambda: Cyc,
    pub values: [Cyc; 4],
    pub in_gamma: bool,
}

fn check_lambda(l: &Cyc) -> Result<(), GroupError> {
    if l.pow(3) == omega() {
        Ok(())
    } else {
        Err(GroupError::BadLambda)
    }
}

/// `(Upsilon_1, ..., Upsilon_4)` at `(b1, b2, b3)` for the given `lambda'`.
pub fn upsilon(b: [&Cyc; 3], lambda: &Cyc) -> Result<[Cyc; 4], GroupError> {
    check_lambda(lambda)?;
    let [b1, b2, b3] = b;
    let l = lambda;
    let n = |k: i64| Cyc::from_int(k);
    let l3 = l.pow(3);
    let l6 = l.pow(6);
    let b2_5 = b2.pow(5);
    let b3_3 = b3.pow(3);
    let b3_5 = b3.pow(5);
    let u1 = b3 * &b2_5 + &((b1 * &b3_3 + n(1)) * b2) + b3_5.clone();
    let u2 = l.pow(2)
        * ((&l3 * n(5) + n(1)) * b3 * &b2_5
            + (&l6 * n(5) + &l3 + (&l6 * n(2) + &l3 + n(3)) * b1 * &b3_3) * b2
            + (&l6 + n(5)) * &b3_5);
    let u3 = l.pow(5)
        * ((&l6 + n(5)) * b3 * &b2_5
            + (&l3 * n(5) + (&l6 * n(3) + &l3 * n(2) + n(1)) * b1 * &b3_3 + n(1)) * b2
            + &l3 * (&l3 * n(5) + n(1)) * &b3_5);
    let u4 = l
        * (l.pow(4) * (&l3 * n(5) + n(1)) * b3 * &b2_5
            + l * (&l6 + (&l6 + &l3 * n(3) + n(2)) * b1 * &b3_3 + n(5)) * b2
            + l * (&l3 * n(5) + n(1)) * &b3_5);
    Ok([u1, u2, u3, u4])
}

/// Membership in `Gamma`: nonzero coordinates, `Upsilon_1 = 1` and
/// `Upsilon_2 = Upsilon_3 = omega^2 Upsilon_4`.
pub fn in_gamma(b: [&Cyc; 3], values: &[Cyc; 4]) -> bool {
    let w2 = omega().pow(2);
    b.iter().all(|x| !x.is_zero())
        && values[0].is_one()
        && values[1] == values[2]
        && values[2] == &w2 * &values[3]
}

/// Evaluations for every cube root of `omega`.
pub fn upsilon_all(b: [&Cyc; 3]) -> Vec<UpsilonValues> {
    lambda_choices()
        .into_iter()
        .map(|lambda| {
            let values = upsilon(b, &lambda).expect("valid lambda");
            UpsilonValues {
                in_gamma: in_gamma(b, &values),
                lambda,
                values,
            }
        })
        .collect()
}

/// First coordinates of the triples that lie in `Gamma` for some choice of `lambda'`,
/// sorted by display text and deduplicated.
pub fn gamma1_collect(triples: &[[Cyc; 3]]) -> Vec<Cyc> {
    let mut out: Vec<Cyc> = Vec::new();
    for t in triples {
        let b = [&t[0], &t[1], &t[2]];
        if upsilon_all(b).iter().any(|u| u.in_gamma) && !out.contains(&t[0]) {
            out.push(t[0].clone());
        }
    }
    out.sort_by_key(|c| c.to_string());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescendantReport {
    pub degree: u32,
    pub core: String,
    pub core_is_fermat: bool,
    pub core_is_klein: bool,
    pub fermat_order: u64,
    pub klein_order: u64,
    pub candidate_order: Option<u64>,
    pub divides_fermat: Option<bool>,
    pub divides_klein: Option<bool>,
    /// A matching core exhibits the descendant in these coordinates; the
    /// divisibility condition is necessary in any coordinates.
    pub fermat_candidate: bool,
    pub klein_candidate: bool,
}

pub fn descendant_check(f: &TernaryForm, candidate_order: Option<u64>) -> Option<DescendantReport> {
    let d = f.degree();
    let (core, _) = f.core_and_exponent().ok()?;
    let (fermat, fo) = reference_curve(CurveKind::Fermat, d);
    let (klein, ko) = reference_curve(CurveKind::Klein, d);
    let core_is_fermat = core.proportional_to(&fermat).is_some();
    let core_is_klein = core.proportional_to(&klein).is_some();
    let divides_fermat = candidate_order.map(|n| fo % n == 0);
    let divides_klein = candidate_order.map(|n| ko % n == 0);
    let cand = |core_ok: bool, div: Option<bool>| div.unwrap_or(true) && (core_ok || div.is_some());
    Some(DescendantReport {
        degree: d,
        core: core.to_string(),
        core_is_fermat,
        core_is_klein,
        fermat_order: fo,
        klein_order: ko,
        candidate_order,
        divides_fermat,
        divides_klein,
        fermat_candidate: cand(core_is_fermat, divides_fermat),
        klein_candidate: cand(core_is_klein, divides_klein),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{invariant_monomials, DiagAction};
    use crate::smoothness::core_necessary;
    use crate::stabilizer::is_automorphism;

    #[test]
    fn hessian_orders() {
        let g216 = hessian(HessianSubgroup::H216);
        let g72 = hessian(HessianSubgroup::H72);
        let g36 = hessian(HessianSubgroup::H36);
        assert_eq!((g216.order, g72.order, g36.order), (216, 72, 36));
        assert!(g216
            .element_orders
            .keys()
            .all(|o| [1, 2, 3, 4, 6].contains(o)));
        assert_eq!(g216.element_orders.values().sum::<usize>(), 216);
        assert!(g36.is_normal_in(&g72));
        assert!(g72.is_normal_in(&g216));
        assert!(g36.is_subgroup_of(&g216));
    }

    #[test]
    fn non_normal_subgroup_detected() {
        // <T> has order 3 and is not normal in Hess_36.
        let t = hessian_generators()[1].clone();
        let sub = closure(&[t], 10).unwrap();
        assert_eq!(sub.order, 3);
        assert!(!sub.is_normal_in(&hessian(HessianSubgroup::H36)));
    }

    #[test]
    fn cap_exceeded() {
        assert_eq!(
            closure(&HessianSubgroup::H216.generators(), 100).unwrap_err(),
            GroupError::CapExceeded(100)
        );
    }

    #[test]
    fn common_elements_force_singularity() {
        let common = hessian_common_elements();
        // The permutations alone keep quintics with a smooth-compatible core.
        let perms = invariant_forms(&common[..4], 5, Execution::Auto).unwrap();
        assert!(perms.iter().flat_map(|s| &s.basis).any(core_necessary));
        // With diag(1, w, w^2) the scalar w I = [S, T] acts by w^5 != 1.
        let all = invariant_forms(&common, 5, Execution::Auto).unwrap();
        assert!(all
            .iter()
            .flat_map(|s| &s.basis)
            .all(|f| !core_necessary(f)));
        assert!(all.is_empty());
    }

    #[test]
    fn single_diagonal_matches_weight_class() {
        let s = ProjMatrix::diag(Cyc::from_int(1), omega(), omega().pow(2));
        let spaces = invariant_forms(&[s], 6, Execution::Sequential).unwrap();
        let trivial = spaces.iter().find(|s| s.characters[0].is_one()).unwrap();
        assert_eq!(trivial.basis.len(), 10);
        let mut got: Vec<Monomial> = trivial
            .basis
            .iter()
            .map(|f| {
                assert_eq!(f.num_terms(), 1);
                f.support()[0]
            })
            .collect();
        got.sort();
        let act = DiagAction::new(3, 1, 2).unwrap();
        assert_eq!(got, invariant_monomials(6, &act, 0));
        assert!(got.contains(&Monomial::new(6, 0, 0)));
        assert_eq!(spaces.iter().map(|s| s.basis.len()).sum::<usize>(), 28);
    }

    #[test]
    fn identity_gives_everything() {
        let spaces = invariant_forms(&[ProjMatrix::identity()], 4, Execution::Auto).unwrap();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].basis.len(), 15);
    }

    #[test]
    fn reference_orders() {
        assert_eq!(reference_curve(CurveKind::Fermat, 5).1, 150);
        assert_eq!(reference_curve(CurveKind::Klein, 5).1, 39);
        assert_eq!(reference_curve(CurveKind::Klein, 6).1, 63);
        let (k6, _) = reference_curve(CurveKind::Klein, 6);
        for g in klein_generators(6) {
            assert!(is_automorphism(&k6, &g));
        }
        let [_, diag] = klein_generators(6);
        assert_eq!(diag.entries[2][2].as_constant().unwrap(), Cyc::zeta(21, -4));
    }

    /// `(coefficient, l, b1, b2, b3)` exponents of one expanded term.
    type Term = (i64, u32, u32, u32, u32);

    /// Expanded monomial-by-monomial, independent of the nested evaluator.
    fn upsilon_expanded(b: [&Cyc; 3], l: &Cyc) -> [Cyc; 4] {
        let terms: [&[Term]; 4] = [
            &[
                (1, 0, 0, 5, 1),
                (1, 0, 1, 1, 3),
                (1, 0, 0, 1, 0),
                (1, 0, 0, 0, 5),
            ],
            &[
                (5, 5, 0, 5, 1),
                (1, 2, 0, 5, 1),
                (5, 8, 0, 1, 0),
                (1, 5, 0, 1, 0),
                (2, 8, 1, 1, 3),
                (1, 5, 1, 1, 3),
                (3, 2, 1, 1, 3),
                (1, 8, 0, 0, 5),
                (5, 2, 0, 0, 5),
            ],
            &[
                (1, 11, 0, 5, 1),
                (5, 5, 0, 5, 1),
                (5, 8, 0, 1, 0),
                (3, 11, 1, 1, 3),
                (2, 8, 1, 1, 3),
                (1, 5, 1, 1, 3),
                (1, 5, 0, 1, 0),
                (5, 11, 0, 0, 5),
                (1, 8, 0, 0, 5),
            ],
            &[
                (5, 8, 0, 5, 1),
                (1, 5, 0, 5, 1),
                (1, 8, 0, 1, 0),
                (1, 8, 1, 1, 3),
                (3, 5, 1, 1, 3),
                (2, 2, 1, 1, 3),
                (5, 2, 0, 1, 0),
                (5, 5, 0, 0, 5),
                (1, 2, 0, 0, 5),
            ],
        ];
        terms.map(|ts| {
            ts.iter().fold(Cyc::from_int(0), |acc, &(c, e, i, j, k)| {
                acc + Cyc::from_int(c)
                    * l.pow(e as i64)
                    * b[0].pow(i as i64)
                    * b[1].pow(j as i64)
                    * b[2].pow(k as i64)
            })
        })
    }

    #[test]
    fn upsilon_values() {
        let (z, o) = (Cyc::from_int(0), Cyc::from_int(1));
        for l in lambda_choices() {
            let v = upsilon([&z, &o, &o], &l).unwrap();
            assert_eq!(v[0], Cyc::from_int(3));
            let v = upsilon([&Cyc::from_int(7), &z, &z], &l).unwrap();
            assert!(v[0].is_zero());
            assert!(!in_gamma([&Cyc::from_int(7), &z, &z], &v));
        }
        assert_eq!(upsilon([&z, &o, &o], &omega()), Err(GroupError::BadLambda));
    }

    #[test]
    fn upsilon_two_evaluators_agree() {
        let samples = [
            [Cyc::from_int(2), Cyc::from_int(-1), Cyc::from_int(3)],
            [Cyc::zeta(4, 1), Cyc::from_int(5), Cyc::zeta(3, 2)],
            [Cyc::from_int(1), Cyc::zeta(9, 2), Cyc::from_int(-2)],
        ];
        for b in &samples {
            let r = [&b[0], &b[1], &b[2]];
            for l in lambda_choices() {
                assert_eq!(upsilon(r, &l).unwrap(), upsilon_expanded(r, &l));
            }
        }
    }

    #[test]
    fn descendant_examples() {
        let m = Monomial::new;
        let mut k = TernaryForm::klein(6);
        k.add_term(m(2, 1, 3), ParamPoly::int(1));
        let r = descendant_check(&k, None).unwrap();
        assert!(r.core_is_klein && r.klein_candidate && !r.fermat_candidate);

        let mut c = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 5, 0), m(1, 0, 4)]).unwrap();
        c.add_term(m(3, 2, 0), ParamPoly::int(1));
        let r = descendant_check(&c, Some(4)).unwrap();
        assert!(!r.fermat_candidate && !r.klein_candidate);

        let mut f = TernaryForm::fermat(6);
        f.add_term(m(3, 3, 0), ParamPoly::int(2));
        assert!(descendant_check(&f, None).unwrap().fermat_candidate);
    }
}
