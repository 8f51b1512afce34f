//! Strategies and property bodies shared by the proptest suite and the acceptance run.
#![allow(dead_code)]

use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use planeaut::actions::{invariant_monomials, DiagAction};
use planeaut::covers::RamificationProfile;
use planeaut::parse::{form_from_json, parse_form};
use planeaut::stabilizer::diagonal_stabilizer;
use planeaut::{Cyc, Monomial, ParamPoly, ProjMatrix, TernaryForm};

pub const ORDERS: [u32; 6] = [1, 3, 4, 5, 8, 12];

pub fn cyc() -> impl Strategy<Value = Cyc> {
    (
        prop::sample::select(ORDERS.to_vec()),
        prop::collection::vec((-4i64..=4, 0i64..12), 1..4),
    )
        .prop_map(|(n, terms)| {
            terms.into_iter().fold(Cyc::from_int(0), |acc, (c, k)| {
                &acc + &(Cyc::zeta(n, k) * Cyc::from_int(c))
            })
        })
}

pub fn small_coeff() -> impl Strategy<Value = Cyc> {
    prop_oneof![
        (1i64..=5).prop_map(Cyc::from_int),
        (-5i64..=-1).prop_map(Cyc::from_int),
        (prop::sample::select(vec![3u32, 4, 5]), 1i64..5).prop_map(|(n, k)| Cyc::zeta(n, k)),
    ]
}

/// A form of degree `3..=6` with 1 to 6 terms.
pub fn form() -> impl Strategy<Value = TernaryForm> {
    (3u32..=6)
        .prop_flat_map(|d| {
            let monos = Monomial::all_of_degree(d);
            (
                Just(d),
                prop::sample::subsequence(monos.clone(), 1..=monos.len().min(6)),
                prop::collection::vec(small_coeff(), 6),
            )
        })
        .prop_map(|(d, support, coeffs)| {
            TernaryForm::from_terms(
                d,
                support
                    .into_iter()
                    .zip(coeffs)
                    .map(|(m, c)| (m, ParamPoly::constant(c))),
            )
            .unwrap()
        })
}

/// A form supported on one weight class of a random diagonal action with `m <= 12`.
pub fn class_form() -> impl Strategy<Value = TernaryForm> {
    (2u32..=12, 3u32..=7)
        .prop_flat_map(|(m, d)| (Just(m), Just(d), 0..m, 0..m, 0..m))
        .prop_filter_map("valid action with a nonempty class", |(m, d, a, b, w)| {
            let (a, b) = (a.min(b), a.max(b));
            let act = DiagAction::new(m, a, b).ok()?;
            let class = invariant_monomials(d, &act, w);
            (class.len() >= 2).then_some((d, class))
        })
        .prop_flat_map(|(d, class)| {
            let n = class.len();
            (Just(d), prop::sample::subsequence(class, 2..=n.min(6)))
        })
        .prop_map(|(d, support)| TernaryForm::from_monomials(d, &support).unwrap())
}

pub fn int_matrix() -> impl Strategy<Value = ProjMatrix> {
    prop::array::uniform3(prop::array::uniform3(-2i64..=2))
        .prop_filter("invertible", |m| {
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            det != 0
        })
        .prop_map(ProjMatrix::from_ints)
}

/// Order of the group of `diag(1, v, s)` fixing the support, by counting
/// solutions over `Z/N` where `N` is the lattice index (gcd of 2x2 minors).
pub fn brute_force_diagonal_order(f: &TernaryForm) -> Option<u64> {
    let support = f.support();
    let base = support[0];
    let diffs: Vec<(i64, i64)> = support[1..]
        .iter()
        .map(|m| (m.j as i64 - base.j as i64, m.k as i64 - base.k as i64))
        .collect();
    let mut n = 0i64;
    for (i, x) in diffs.iter().enumerate() {
        for y in &diffs[i + 1..] {
            n = n.gcd(&(x.0 * y.1 - x.1 * y.0));
        }
    }
    if n == 0 {
        return None;
    }
    let mut count = 0;
    for v in 0..n {
        for s in 0..n {
            if diffs
                .iter()
                .all(|(dj, dk)| (v * dj + s * dk).rem_euclid(n) == 0)
            {
                count += 1;
            }
        }
    }
    Some(count)
}

pub fn field_axioms(a: &Cyc, b: &Cyc, c: &Cyc) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a - b) + b, a.clone());
    if !b.is_zero() {
        prop_assert_eq!(&(a / b) * b, a.clone());
    }
    Ok(())
}

pub fn snf_matches_brute_force(f: &TernaryForm) -> Result<(), TestCaseError> {
    prop_assert_eq!(
        diagonal_stabilizer(f).order,
        brute_force_diagonal_order(f),
        "{}",
        f
    );
    Ok(())
}

pub fn diagonal_order_invariances(
    f: &TernaryForm,
    scale: &Cyc,
    perm: [usize; 3],
) -> Result<(), TestCaseError> {
    let order = diagonal_stabilizer(f).order;
    prop_assert_eq!(diagonal_stabilizer(&f.scale(scale)).order, order);
    let p = ProjMatrix::monomial(perm, std::array::from_fn(|_| Cyc::from_int(1)));
    prop_assert_eq!(diagonal_stabilizer(&f.substitute(&p).unwrap()).order, order);
    Ok(())
}

pub fn substitute_composes(
    f: &TernaryForm,
    a: &ProjMatrix,
    b: &ProjMatrix,
) -> Result<(), TestCaseError> {
    let lhs = f.substitute(a).unwrap().substitute(b).unwrap();
    let rhs = f.substitute(&a.mul(b)).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn euler_relation(f: &TernaryForm) -> Result<(), TestCaseError> {
    let vars: [TernaryForm; 3] = std::array::from_fn(|r| {
        let mut c = [ParamPoly::zero(), ParamPoly::zero(), ParamPoly::zero()];
        c[r] = ParamPoly::one();
        TernaryForm::linear(c)
    });
    let parts = f.partials();
    let mut sum = TernaryForm::zero(f.degree());
    for (x, p) in vars.iter().zip(&parts) {
        sum = sum.add(&x.mul(p));
    }
    prop_assert_eq!(sum, f.scale(&Cyc::from_int(f.degree() as i64)));
    Ok(())
}

/// Builds data satisfying Hurwitz from `(m, g0, counts)` and checks the
/// constructor recovers `g0`; corrupting the genus by one must be rejected.
pub fn hurwitz_constructor(m: u32, g0: u32, orbits: &[(u32, u32)]) -> Result<(), TestCaseError> {
    let divisors: Vec<u32> = (2..=m).filter(|e| m % e == 0).collect();
    prop_assume!(!divisors.is_empty());
    let entries: Vec<(u32, u32)> = orbits
        .iter()
        .map(|&(pick, n)| {
            let e = divisors[pick as usize % divisors.len()];
            (e, n * (m / e))
        })
        .collect();
    let r: i64 = entries
        .iter()
        .map(|&(e, c)| (e as i64 - 1) * c as i64)
        .sum();
    let two_g_minus_2 = m as i64 * (2 * g0 as i64 - 2) + r;
    prop_assume!(two_g_minus_2 >= -2 && two_g_minus_2 % 2 == 0);
    let g = ((two_g_minus_2 + 2) / 2) as u32;
    let p =
        RamificationProfile::new(m, g, &entries).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(p.quotient_genus, g0);
    prop_assert!(p.hurwitz_holds());
    if m > 1 {
        prop_assert!(RamificationProfile::new(m, g + 1, &entries).is_err());
    }
    Ok(())
}

pub fn parse_round_trip(f: &TernaryForm) -> Result<(), TestCaseError> {
    let text = f.to_string();
    let back = parse_form(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, f);
    let json = form_from_json(&f.to_json()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&json, f);
    Ok(())
}

/// Forms with parameter coefficients for the round-trip property.
pub fn param_form() -> impl Strategy<Value = TernaryForm> {
    (
        form(),
        prop::collection::vec(prop::sample::select(vec!["b", "a1", "mu2", "b20"]), 0..3),
    )
        .prop_map(|(f, names)| {
            let mut g = f.clone();
            for (name, m) in names.iter().zip(f.support()) {
                g.add_term(m, ParamPoly::param(name));
            }
            g
        })
}
