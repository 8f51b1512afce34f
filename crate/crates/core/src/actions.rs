//! Diagonal cyclic actions, weight classes, and normal forms.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Cyc;
use crate::forms::{Monomial, ParamPoly, ProjMatrix, TernaryForm};
use crate::snf::{self, ModOneSolutions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("type {m},({a},{b}) needs 0 <= a < b < m")]
    BadRange { m: u32, a: u32, b: u32 },
    #[error("diag(1, z^{a}, z^{b}) has projective order {order} < {m}")]
    NotExactOrder { m: u32, a: u32, b: u32, order: u32 },
    #[error("reference monomials are empty")]
    EmptyReference,
    #[error("reference monomial {0} has the wrong degree")]
    WrongDegree(String),
    #[error("reference monomials lie in different weight classes")]
    MixedClasses,
    #[error("weight class {0} misses degree d-1 in some variable")]
    DegenerateClass(u32),
    #[error("every monomial of class {class} is divisible by {var}")]
    ForcedFactor { class: u32, var: char },
    #[error("reference lattice has rank {0} < 2; normalizer is infinite")]
    InfiniteNormalizer(usize),
}

/// The type `m,(a,b)`: `diag(1, z_m^a, z_m^b)` of exact projective order `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiagAction {
    m: u32,
    a: u32,
    b: u32,
}

impl DiagAction {
    pub fn new(m: u32, a: u32, b: u32) -> Result<Self, ActionError> {
        if m < 2 || a >= b || b >= m {
            return Err(ActionError::BadRange { m, a, b });
        }
        let g = m.gcd(&a).gcd(&b);
        if g != 1 {
            return Err(ActionError::NotExactOrder {
                m,
                a,
                b,
                order: m / g,
            });
        }
        Ok(DiagAction { m, a, b })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Fixes a line pointwise. With `0 <= a < b` this happens exactly when `a = 0`.
    pub fn is_homology(&self) -> bool {
        self.a == 0
    }

    /// Exponent triple of the t-th power, each entry mod `m`.
    pub fn power_exponents(&self, t: u32) -> [u32; 3] {
        let m = self.m as u64;
        [
            0,
            ((t as u64 * self.a as u64) % m) as u32,
            ((t as u64 * self.b as u64) % m) as u32,
        ]
    }

    pub fn matrix(&self) -> ProjMatrix {
        self.power_matrix(1)
    }

    pub fn power_matrix(&self, t: u32) -> ProjMatrix {
        let e = self.power_exponents(t);
        ProjMatrix::diag(
            Cyc::from_int(1),
            Cyc::zeta_min(self.m, e[1] as i64),
            Cyc::zeta_min(self.m, e[2] as i64),
        )
    }
}

impl fmt::Display for DiagAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},({},{})", self.m, self.a, self.b)
    }
}

impl std::str::FromStr for DiagAction {
    type Err = String;

    /// Accepts `m,a,b` or `m,(a,b)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !"() ".contains(*c)).collect();
        let parts: Vec<&str> = cleaned.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected m,a,b but got {s:?}"));
        }
        let nums: Result<Vec<u32>, _> = parts.iter().map(|p| p.parse::<u32>()).collect();
        let nums = nums.map_err(|e| format!("{s:?}: {e}"))?;
        DiagAction::new(nums[0], nums[1], nums[2]).map_err(|e| e.to_string())
    }
}

/// `(a j + b k) mod m` for `X^i Y^j Z^k`.
pub fn weight(mon: &Monomial, act: &DiagAction) -> u32 {
    let m = act.m as u64;
    ((act.a as u64 * mon.j as u64 + act.b as u64 * mon.k as u64) % m) as u32
}

/// Degree-`d` monomials of weight `w`, in display order.
pub fn invariant_monomials(d: u32, act: &DiagAction, w: u32) -> Vec<Monomial> {
    Monomial::all_of_degree(d)
        .into_iter()
        .filter(|mon| weight(mon, act) == w % act.m)
        .collect()
}

/// Parameter name attached to a non-reference monomial `X^(d-j) Y^i Z^(j-i)`.
pub fn parameter_name(d: u32, mon: &Monomial) -> String {
    let j = d - mon.i;
    let i = mon.j;
    if j >= 10 || i >= 10 {
        format!("b{j}_{i}")
    } else {
        format!("b{j}{i}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub base: TernaryForm,
    pub action: DiagAction,
    pub weight_class: u32,
    pub reference: Vec<Monomial>,
    /// Parameter names with the monomial each one multiplies, in display order.
    pub params: Vec<(String, Monomial)>,
}

fn class_filters(d: u32, w: u32, class: &[Monomial]) -> Result<(), ActionError> {
    for v in 0..3 {
        if !class.iter().any(|m| m.exps()[v] + 1 >= d) {
            return Err(ActionError::DegenerateClass(w));
        }
    }
    for (v, name) in ['X', 'Y', 'Z'].into_iter().enumerate() {
        if class.iter().all(|m| m.exps()[v] > 0) {
            return Err(ActionError::ForcedFactor {
                class: w,
                var: name,
            });
        }
    }
    Ok(())
}

/// Normal form for the class of the given reference monomials: coefficient one on
/// each reference monomial, a fresh parameter on every other class member.
pub fn normal_form(
    d: u32,
    act: &DiagAction,
    reference: &[Monomial],
) -> Result<NormalForm, ActionError> {
    let first = reference.first().ok_or(ActionError::EmptyReference)?;
    if let Some(bad) = reference.iter().find(|m| m.degree() != d) {
        return Err(ActionError::WrongDegree(bad.to_string()));
    }
    let w = weight(first, act);
    if reference.iter().any(|m| weight(m, act) != w) {
        return Err(ActionError::MixedClasses);
    }
    let class = invariant_monomials(d, act, w);
    class_filters(d, w, &class)?;
    let mut base = TernaryForm::zero(d);
    let mut params = Vec::new();
    for mon in &class {
        if reference.contains(mon) {
            base.add_term(*mon, ParamPoly::one());
        } else {
            let name = parameter_name(d, mon);
            base.add_term(*mon, ParamPoly::param(&name));
            params.push((name, *mon));
        }
    }
    let mut reference = reference.to_vec();
    reference.sort();
    reference.dedup();
    Ok(NormalForm {
        base,
        action: *act,
        weight_class: w,
        reference,
        params,
    })
}

/// Normal form of class `w` using the first class monomial as the reference.
pub fn normal_form_for_class(d: u32, act: &DiagAction, w: u32) -> Result<NormalForm, ActionError> {
    let class = invariant_monomials(d, act, w);
    if class.is_empty() {
        return Err(ActionError::EmptyReference);
    }
    class_filters(d, w % act.m, &class)?;
    normal_form(d, act, &class[..1])
}

/// How two cyclic diagonal subgroups compare under conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConjugacyCertificate {
    /// Permuting the coordinates of the `power`-th power of the first generator by
    /// `perm` and shifting every exponent by `shift` gives the second generator.
    Conjugate {
        power: u32,
        perm: [usize; 3],
        shift: u32,
    },
    /// Multisets of eigenvalue-multiplicity patterns over all group elements differ.
    PatternsDiffer {
        left: BTreeMap<String, u32>,
        right: BTreeMap<String, u32>,
    },
    OrdersDiffer {
        left: u32,
        right: u32,
    },
    /// Patterns agree but an exhaustive search found no conjugating permutation.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjugacy {
    pub conjugate: bool,
    pub certificate: ConjugacyCertificate,
}

pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn multiplicity_pattern(e: [u32; 3]) -> String {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for x in e {
        *counts.entry(x).or_default() += 1;
    }
    let mut c: Vec<u32> = counts.into_values().collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    c.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn pattern_multiset(act: &DiagAction) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for t in 0..act.m {
        *out.entry(multiplicity_pattern(act.power_exponents(t)))
            .or_default() += 1;
    }
    out
}

/// Decides whether `<t1>` and `<t2>` are conjugate in `PGL_3`.
pub fn types_conjugate(t1: &DiagAction, t2: &DiagAction) -> Conjugacy {
    if t1.m != t2.m {
        return Conjugacy {
            conjugate: false,
            certificate: ConjugacyCertificate::OrdersDiffer {
                left: t1.m,
                right: t2.m,
            },
        };
    }
    let m = t1.m;
    let target = t2.power_exponents(1);
    for r in (1..m).filter(|r| r.gcd(&m) == 1) {
        let e = t1.power_exponents(r);
        for perm in PERMUTATIONS {
            let pe = [e[perm[0]], e[perm[1]], e[perm[2]]];
            let shift = (m - pe[0]) % m;
            if (0..3).all(|i| (pe[i] + shift) % m == target[i]) {
                return Conjugacy {
                    conjugate: true,
                    certificate: ConjugacyCertificate::Conjugate {
                        power: r,
                        perm,
                        shift,
                    },
                };
            }
        }
    }
    let (left, right) = (pattern_multiset(t1), pattern_multiset(t2));
    let certificate = if left != right {
        ConjugacyCertificate::PatternsDiffer { left, right }
    } else {
        ConjugacyCertificate::Exhausted
    };
    Conjugacy {
        conjugate: false,
        certificate,
    }
}

/// Parameter rescalings induced by the diagonal normalizer of a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identifications {
    /// Parameters in the order used by `actions`.
    pub params: Vec<String>,
    /// Number of `diag(1, l2, l3)` preserving the reference coefficients.
    pub diagonal_order: usize,
    /// Distinct multiplier vectors, identity first; `beta_i -> actions[g][i] * beta_i`.
    pub actions: Vec<Vec<Cyc>>,
}

impl Identifications {
    pub fn group_order(&self) -> usize {
        self.actions.len()
    }
}

pub fn family_identifications(nf: &NormalForm) -> Result<Identifications, ActionError> {
    let r0 = nf.reference[0];
    let rows: Vec<Vec<i64>> = nf.reference[1..]
        .iter()
        .map(|r| vec![r.j as i64 - r0.j as i64, r.k as i64 - r0.k as i64])
        .collect();
    let rank = if rows.is_empty() {
        0
    } else {
        snf::smith(&rows, 2).rank()
    };
    if rank < 2 {
        return Err(ActionError::InfiniteNormalizer(rank));
    }
    let zeros = vec![Rational64::zero(); rows.len()];
    let ModOneSolutions::Finite(lambdas) = snf::solve_mod_one(&rows, &zeros, 2) else {
        return Err(ActionError::InfiniteNormalizer(rank));
    };
    let mut actions: Vec<Vec<Rational64>> = Vec::new();
    for x in &lambdas {
        let v: Vec<Rational64> = nf
            .params
            .iter()
            .map(|(_, mon)| {
                snf::frac(
                    x[0] * Rational64::from_integer(mon.j as i64 - r0.j as i64)
                        + x[1] * Rational64::from_integer(mon.k as i64 - r0.k as i64),
                )
            })
            .collect();
        if !actions.contains(&v) {
            actions.push(v);
        }
    }
    actions.sort_by_key(|v| v.iter().any(|x| !x.is_zero()));
    Ok(Identifications {
        params: nf.params.iter().map(|(n, _)| n.clone()).collect(),
        diagonal_order: lambdas.len(),
        actions: actions
            .into_iter()
            .map(|v| v.into_iter().map(Cyc::root_of_unity).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(i: u32, j: u32, k: u32) -> Monomial {
        Monomial::new(i, j, k)
    }

    fn act(m: u32, a: u32, b: u32) -> DiagAction {
        DiagAction::new(m, a, b).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(DiagAction::new(8, 1, 4).is_ok());
        assert!(matches!(
            DiagAction::new(8, 4, 2),
            Err(ActionError::BadRange { .. })
        ));
        assert!(matches!(
            DiagAction::new(8, 2, 4),
            Err(ActionError::NotExactOrder { order: 4, .. })
        ));
        assert!(act(4, 0, 1).is_homology());
        assert!(!act(4, 1, 2).is_homology());
        assert_eq!("8,(1,4)".parse::<DiagAction>().unwrap(), act(8, 1, 4));
        assert_eq!("20,4,5".parse::<DiagAction>().unwrap(), act(20, 4, 5));
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&m(5, 0, 0), &act(8, 1, 4)), 0);
        assert_eq!(weight(&m(0, 4, 1), &act(8, 1, 4)), 0);
        assert_eq!(weight(&m(5, 1, 0), &act(3, 1, 2)), 1);
    }

    #[test]
    fn invariant_monomial_examples() {
        assert_eq!(
            invariant_monomials(5, &act(8, 1, 4), 0),
            vec![m(5, 0, 0), m(3, 0, 2), m(1, 0, 4), m(0, 4, 1)]
        );
        let mut got = invariant_monomials(5, &act(4, 1, 2), 0);
        let mut want = vec![
            m(5, 0, 0),
            m(1, 4, 0),
            m(1, 0, 4),
            m(3, 0, 2),
            m(2, 2, 1),
            m(0, 2, 3),
        ];
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(invariant_monomials(6, &act(3, 1, 2), 1).len(), 9);
    }

    #[test]
    fn classes_partition() {
        let a = act(12, 5, 7);
        let total: usize = (0..12).map(|w| invariant_monomials(6, &a, w).len()).sum();
        assert_eq!(total, 28);
    }

    #[test]
    fn normal_form_examples() {
        let nf = normal_form(5, &act(16, 1, 12), &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        assert!(nf.params.is_empty());
        assert_eq!(nf.base.to_string(), "X^5 + X*Z^4 + Y^4*Z");

        assert_eq!(
            normal_form(5, &act(4, 1, 3), &[m(5, 0, 0)]),
            Err(ActionError::ForcedFactor { class: 0, var: 'X' })
        );

        let nf = normal_form(6, &act(3, 0, 1), &[m(0, 0, 6)]).unwrap();
        assert_eq!(nf.base.num_terms(), 12);
        assert!(nf.base.support().iter().all(|mon| mon.k % 3 == 0));
        assert_eq!(nf.params.len(), 11);

        let nf = normal_form(5, &act(8, 1, 4), &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        assert_eq!(nf.params, vec![("b20".to_string(), m(3, 0, 2))]);
    }

    #[test]
    fn normal_form_invariant_under_action() {
        let a = act(3, 1, 2);
        let nf = normal_form(6, &a, &[m(5, 1, 0), m(0, 5, 1), m(1, 0, 5)]).unwrap();
        let image = nf.base.substitute(&a.matrix()).unwrap();
        assert_eq!(image, nf.base.scale(&Cyc::zeta(3, nf.weight_class as i64)));
    }

    #[test]
    fn conjugacy_examples() {
        let c = types_conjugate(&act(4, 0, 1), &act(4, 1, 2));
        assert!(!c.conjugate);
        assert!(matches!(
            c.certificate,
            ConjugacyCertificate::PatternsDiffer { .. }
        ));
        assert!(types_conjugate(&act(3, 1, 2), &act(3, 1, 2)).conjugate);
        assert!(!types_conjugate(&act(5, 0, 1), &act(5, 1, 2)).conjugate);
        // z^-1 (1, z, z^3) = (z^4, 1, z^2), a permutation of the square of 5,(1,2)
        assert!(types_conjugate(&act(5, 1, 3), &act(5, 1, 2)).conjugate);
    }

    #[test]
    fn z8_identifications() {
        let nf = normal_form(5, &act(8, 1, 4), &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        let id = family_identifications(&nf).unwrap();
        assert_eq!(id.diagonal_order, 16);
        assert_eq!(id.group_order(), 2);
        assert_eq!(id.actions[0], vec![Cyc::from_int(1)]);
        assert_eq!(id.actions[1], vec![Cyc::from_int(-1)]);
    }

    #[test]
    fn trivial_and_infinite_identifications() {
        let nf = normal_form(5, &act(16, 1, 12), &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        let id = family_identifications(&nf).unwrap();
        assert!(id.params.is_empty());
        assert_eq!(id.group_order(), 1);

        let nf = normal_form(5, &act(8, 1, 4), &[m(5, 0, 0)]).unwrap();
        assert_eq!(
            family_identifications(&nf),
            Err(ActionError::InfiniteNormalizer(0))
        );
    }
}
