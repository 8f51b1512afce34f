//! Fixed loci of diagonal cyclic actions and ramification of the quotient map.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::actions::DiagAction;
use crate::cyclotomic::Cyc;
use crate::forms::TernaryForm;
use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("2g - 2 - R = {lhs} is not a nonnegative-genus multiple of 2m = {two_m}")]
    NonIntegralGenus { lhs: i64, two_m: i64 },
    #[error("the action does not preserve the curve")]
    NotAnAutomorphism,
    #[error("restriction to {0} has a repeated root")]
    RepeatedRoot(String),
    #[error("the line {0} is a component of the curve")]
    LineComponent(String),
    #[error("index {e} does not divide the group order {m}")]
    IndexNotDivisor { e: u32, m: u32 },
    #[error("{count} points of index {e} do not split into orbits of size {orbit}")]
    OrbitMismatch { e: u32, count: u32, orbit: u32 },
    #[error("parameter {0} has no value")]
    Unassigned(String),
}

/// Stabilizer orders of the fixed locus in `P^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedData {
    pub group_order: u32,
    /// Each reference point is fixed by the whole group.
    pub reference_point_order: u32,
    /// Stabilizer order of a generic point of `Y=0`, `Z=0`, `X=0`.
    pub line_orders: Vec<(String, u32)>,
}

impl FixedData {
    pub fn line_order(&self, line: &str) -> Option<u32> {
        self.line_orders
            .iter()
            .find(|(l, _)| l == line)
            .map(|(_, o)| *o)
    }
}

/// `(line name, index of the coordinate set to zero)` in output order.
const LINES: [(&str, usize); 3] = [("Y=0", 1), ("Z=0", 2), ("X=0", 0)];

pub fn fixed_data(act: &DiagAction) -> FixedData {
    let (m, a, b) = (act.m(), act.a(), act.b());
    // sigma^t fixes [x:0:z] when t b = 0, [x:y:0] when t a = 0, [0:y:z] when t (b - a) = 0 (mod m).
    let orders = [m.gcd(&b), m.gcd(&a), m.gcd(&(b - a))];
    FixedData {
        group_order: m,
        reference_point_order: m,
        line_orders: LINES
            .iter()
            .zip(orders)
            .map(|((name, _), o)| (name.to_string(), o))
            .collect(),
    }
}

/// Ramification data of `C -> C/<sigma>`, with the Hurwitz identity enforced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub group_order: u32,
    /// `(index, number of points)`, indices decreasing.
    pub entries: Vec<(u32, u32)>,
    pub quotient_genus: u32,
    pub curve_genus: u32,
}

impl RamificationProfile {
    /// Solves the Hurwitz identity for the quotient genus.
    pub fn new(
        group_order: u32,
        curve_genus: u32,
        entries: &[(u32, u32)],
    ) -> Result<Self, CoverError> {
        let merged = merge(entries);
        let m = group_order;
        for &(e, count) in &merged {
            if e == 0 || m % e != 0 {
                return Err(CoverError::IndexNotDivisor { e, m });
            }
            let orbit = m / e;
            if count % orbit != 0 {
                return Err(CoverError::OrbitMismatch { e, count, orbit });
            }
        }
        let r: i64 = merged.iter().map(|&(e, c)| (e as i64 - 1) * c as i64).sum();
        let lhs = 2 * curve_genus as i64 - 2 - r;
        let two_m = 2 * m as i64;
        // lhs = m (2 g0 - 2)  <=>  lhs + 2m = 2 m g0
        let num = lhs + two_m;
        if num < 0 || num % two_m != 0 {
            return Err(CoverError::NonIntegralGenus { lhs, two_m });
        }
        Ok(RamificationProfile {
            group_order,
            entries: merged,
            quotient_genus: (num / two_m) as u32,
            curve_genus,
        })
    }

    /// `2g - 2 = m (2 g0 - 2) + sum (e - 1) count`
    pub fn hurwitz_holds(&self) -> bool {
        let r: i64 = self
            .entries
            .iter()
            .map(|&(e, c)| (e as i64 - 1) * c as i64)
            .sum();
        2 * self.curve_genus as i64 - 2
            == self.group_order as i64 * (2 * self.quotient_genus as i64 - 2) + r
    }
}

fn merge(entries: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for &(e, c) in entries {
        if e > 1 && c > 0 {
            *map.entry(e).or_default() += c;
        }
    }
    map.into_iter().rev().collect()
}

/// Distinct roots of the restriction to a coordinate line away from the two
/// reference points on it.
fn line_root_count(f: &TernaryForm, zero_var: usize, name: &str) -> Result<u32, CoverError> {
    // The restriction is a binary form; `u` indexes the variable kept as `t`.
    let u = if zero_var == 0 { 1 } else { 0 };
    let d = f.degree() as usize;
    let mut coeffs = vec![Cyc::from_int(0); d + 1];
    for (m, c) in f.constant_terms().expect("specialized") {
        let e = m.exps();
        if e[zero_var] == 0 {
            coeffs[e[u] as usize] = &coeffs[e[u] as usize] + &c;
        }
    }
    let g = UniPoly::new(coeffs);
    if g.is_zero() {
        return Err(CoverError::LineComponent(name.to_string()));
    }
    let (_, h) = g.strip_x_power();
    let deg = h.degree().unwrap_or(0);
    let sq = h.squarefree().degree().unwrap_or(0);
    if sq != deg {
        return Err(CoverError::RepeatedRoot(name.to_string()));
    }
    Ok(deg as u32)
}

pub fn ramification_profile(
    f: &TernaryForm,
    values: &HashMap<String, Cyc>,
    act: &DiagAction,
) -> Result<RamificationProfile, CoverError> {
    let f = f.specialize(values);
    if let Some(p) = f.params().into_iter().next() {
        return Err(CoverError::Unassigned(p));
    }
    let image = f
        .substitute(&act.matrix())
        .map_err(|_| CoverError::NotAnAutomorphism)?;
    if image.proportional_to(&f).is_none() {
        return Err(CoverError::NotAnAutomorphism);
    }
    let fixed = fixed_data(act);
    let d = f.degree();
    let m = act.m();
    let mut entries = Vec::new();
    for v in 0..3 {
        let mut e = [0; 3];
        e[v] = d;
        if f.coeff(&crate::forms::Monomial::from_exps(e)).is_zero() {
            entries.push((m, 1));
        }
    }
    for (name, zero_var) in LINES {
        let order = fixed.line_order(name).unwrap();
        if order > 1 {
            let n = line_root_count(&f, zero_var, name)?;
            entries.push((order, n));
        }
    }
    RamificationProfile::new(m, f.genus(), &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{Monomial, ParamPoly};

    fn m(i: u32, j: u32, k: u32) -> Monomial {
        Monomial::new(i, j, k)
    }

    fn act(m: u32, a: u32, b: u32) -> DiagAction {
        DiagAction::new(m, a, b).unwrap()
    }

    fn none() -> HashMap<String, Cyc> {
        HashMap::new()
    }

    #[test]
    fn fixed_data_examples() {
        assert_eq!(fixed_data(&act(8, 1, 4)).line_order("Y=0"), Some(4));
        assert_eq!(fixed_data(&act(4, 0, 1)).line_order("Z=0"), Some(4));
        assert_eq!(fixed_data(&act(4, 1, 2)).line_order("Y=0"), Some(2));
        assert_eq!(fixed_data(&act(4, 1, 2)).line_order("X=0"), Some(1));
    }

    #[test]
    fn z8_profile() {
        let mut f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 4, 1), m(1, 0, 4)]).unwrap();
        f.add_term(m(3, 0, 2), ParamPoly::param("b"));
        let vals: HashMap<String, Cyc> = [("b".to_string(), Cyc::from_int(1))].into();
        let p = ramification_profile(&f, &vals, &act(8, 1, 4)).unwrap();
        assert_eq!(p.entries, vec![(8, 2), (4, 4)]);
        assert_eq!(p.quotient_genus, 0);
        assert!(p.hurwitz_holds());
    }

    #[test]
    fn homology_profile() {
        let f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(0, 5, 0), m(1, 0, 4), m(3, 2, 0)])
            .unwrap();
        let p = ramification_profile(&f, &none(), &act(4, 0, 1)).unwrap();
        assert_eq!(p.entries, vec![(4, 6)]);
        assert_eq!(p.quotient_genus, 0);
    }

    #[test]
    fn non_homology_profile() {
        let f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(1, 0, 4), m(1, 4, 0), m(0, 2, 3)])
            .unwrap();
        let p = ramification_profile(&f, &none(), &act(4, 1, 2)).unwrap();
        assert_eq!(p.entries, vec![(4, 2), (2, 4)]);
        assert_eq!(p.quotient_genus, 1);
    }

    #[test]
    fn wrong_action_rejected() {
        let f = TernaryForm::from_monomials(5, &[m(5, 0, 0), m(1, 0, 4), m(1, 4, 0), m(0, 2, 3)])
            .unwrap();
        assert_eq!(
            ramification_profile(&f, &none(), &act(8, 1, 4)),
            Err(CoverError::NotAnAutomorphism)
        );
    }

    #[test]
    fn fermat_homology() {
        let p = ramification_profile(&TernaryForm::fermat(5), &none(), &act(5, 0, 1)).unwrap();
        assert_eq!(p.entries, vec![(5, 5)]);
        assert!(p.hurwitz_holds());
    }

    #[test]
    fn constructor_rejects_bad_data() {
        assert!(matches!(
            RamificationProfile::new(4, 6, &[(4, 5)]),
            Err(CoverError::NonIntegralGenus { .. })
        ));
        assert!(matches!(
            RamificationProfile::new(4, 6, &[(3, 1)]),
            Err(CoverError::IndexNotDivisor { .. })
        ));
    }
}
