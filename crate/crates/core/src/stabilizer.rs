//! Diagonal and monomial automorphisms of ternary forms, and the block-matrix
//! deduction engine.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::actions::PERMUTATIONS;
use crate::cyclotomic::Cyc;
use crate::forms::{Monomial, ParamPoly, ProjMatrix, TernaryForm};
use crate::par::{self, Execution};
use crate::snf::{self, ModOneSolutions};

pub const DEFAULT_BRANCH_LIMIT: usize = 64;
pub const BRANCH_LIMIT_ENV: &str = "PLANEAUT_BRANCH_LIMIT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizerError {
    #[error("form still has parameters: {0}")]
    NotSpecialized(String),
    #[error("form is zero")]
    ZeroForm,
    #[error("deduction exceeded {0} branches")]
    BranchLimitExceeded(usize),
    #[error("emitted matrix {0} is not an automorphism")]
    Unsound(String),
}

/// Branch limit from the environment, falling back to the default.
pub fn branch_limit_from_env() -> usize {
    std::env::var(BRANCH_LIMIT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BRANCH_LIMIT)
}

fn frac_to_cyc(x: Rational64) -> Cyc {
    Cyc::root_of_unity(x)
}

fn cyc_to_frac(c: &Cyc) -> Option<Rational64> {
    c.is_root_of_unity()
        .map(|(n, e)| Rational64::new(e as i64, n as i64))
}

/// `F(E x) = lambda F` for a nonzero field constant `lambda`.
pub fn is_automorphism(f: &TernaryForm, e: &ProjMatrix) -> bool {
    match f.substitute(e) {
        Ok(g) => g.proportional_to(f).is_some_and(|l| !l.is_zero()),
        Err(_) => false,
    }
}

/// The group of `diag(1, v, s)` preserving a form up to scalar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalGroup {
    /// `None` when infinite.
    pub order: Option<u64>,
    pub invariant_factors: Vec<i64>,
    pub generators: Vec<ProjMatrix>,
    pub generator_orders: Vec<i64>,
    /// Parameters whose coefficients were treated as nonzero.
    pub assumed_nonzero: Vec<String>,
}

impl DiagonalGroup {
    /// All elements as `(v, s)` exponent pairs in `(Q/Z)^2`.
    pub fn exponent_pairs(f: &TernaryForm) -> ModOneSolutions {
        let rows = difference_rows(&f.support());
        let zeros = vec![Rational64::from_integer(0); rows.len()];
        snf::solve_mod_one(&rows, &zeros, 2)
    }
}

fn difference_rows(support: &[Monomial]) -> Vec<Vec<i64>> {
    let Some(m0) = support.first() else {
        return Vec::new();
    };
    support[1..]
        .iter()
        .map(|m| vec![m.j as i64 - m0.j as i64, m.k as i64 - m0.k as i64])
        .collect()
}

pub fn diagonal_stabilizer(f: &TernaryForm) -> DiagonalGroup {
    let rows = difference_rows(&f.support());
    let assumed_nonzero = f.params().into_iter().collect();
    if rows.is_empty() {
        return DiagonalGroup {
            order: None,
            invariant_factors: Vec::new(),
            generators: Vec::new(),
            generator_orders: Vec::new(),
            assumed_nonzero,
        };
    }
    let smith = snf::smith(&rows, 2);
    match snf::kernel_generators(&rows, 2) {
        None => DiagonalGroup {
            order: None,
            invariant_factors: smith.invariant_factors(),
            generators: Vec::new(),
            generator_orders: Vec::new(),
            assumed_nonzero,
        },
        Some(gens) => {
            let order = gens.iter().map(|(_, o)| *o as u64).product();
            DiagonalGroup {
                order: Some(order),
                invariant_factors: smith.invariant_factors(),
                generators: gens
                    .iter()
                    .map(|(x, _)| {
                        ProjMatrix::diag(Cyc::from_int(1), frac_to_cyc(x[0]), frac_to_cyc(x[1]))
                    })
                    .collect(),
                generator_orders: gens.iter().map(|(_, o)| *o).collect(),
                assumed_nonzero,
            }
        }
    }
}

/// Outcome of one coordinate permutation in the monomial search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PermutationOutcome {
    SupportNotPreserved,
    /// A coefficient ratio needed to be a root of unity and was not.
    NonUnityRatio(Cyc),
    /// Ratios involve parameters in a way that is not a constant.
    ParametricRatio,
    Inconsistent,
    Infinite,
    Solutions(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialGroup {
    /// `None` when some permutation admits infinitely many scalings.
    pub order: Option<u64>,
    pub elements: Vec<ProjMatrix>,
    pub per_permutation: Vec<([usize; 3], PermutationOutcome)>,
}

/// All automorphisms of the form `X_r -> c_r X_{perm[r]}` of a specialized form.
pub fn monomial_stabilizer(f: &TernaryForm) -> Result<MonomialGroup, StabilizerError> {
    if !f.is_specialized() {
        let names: Vec<String> = f.params().into_iter().collect();
        return Err(StabilizerError::NotSpecialized(names.join(",")));
    }
    monomial_search(f, Execution::Auto)
}

/// Monomial search that also accepts parameters, treating them as generic:
/// only permutations whose coefficient ratios are parameter-free contribute.
pub fn monomial_stabilizer_generic(f: &TernaryForm) -> Result<MonomialGroup, StabilizerError> {
    monomial_search(f, Execution::Auto)
}

fn coefficient_ratio(num: &ParamPoly, den: &ParamPoly) -> Option<Cyc> {
    match (num.as_constant(), den.as_constant()) {
        (Some(a), Some(b)) => Some(&a / &b),
        _ => {
            let (ca, ma) = num.as_monomial()?;
            let (cb, mb) = den.as_monomial()?;
            (ma == mb).then(|| ca / cb)
        }
    }
}

fn permute_exponents(m: &Monomial, perm: [usize; 3]) -> Monomial {
    let e = m.exps();
    let mut out = [0; 3];
    for r in 0..3 {
        out[perm[r]] = e[r];
    }
    Monomial::from_exps(out)
}

fn search_permutation(
    f: &TernaryForm,
    perm: [usize; 3],
) -> Result<(PermutationOutcome, Vec<ProjMatrix>), StabilizerError> {
    let support = f.support();
    let image: BTreeSet<Monomial> = support.iter().map(|m| permute_exponents(m, perm)).collect();
    if image != support.iter().copied().collect() {
        return Ok((PermutationOutcome::SupportNotPreserved, Vec::new()));
    }
    let e0 = support[0];
    let Some(base) = coefficient_ratio(&f.coeff(&e0), &f.coeff(&permute_exponents(&e0, perm)))
    else {
        return Ok((PermutationOutcome::ParametricRatio, Vec::new()));
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in &support[1..] {
        let Some(r) = coefficient_ratio(&f.coeff(&permute_exponents(e, perm)), &f.coeff(e)) else {
            return Ok((PermutationOutcome::ParametricRatio, Vec::new()));
        };
        let rho = &r * &base;
        let Some(x) = cyc_to_frac(&rho) else {
            return Ok((PermutationOutcome::NonUnityRatio(rho), Vec::new()));
        };
        rows.push(vec![e.j as i64 - e0.j as i64, e.k as i64 - e0.k as i64]);
        rhs.push(x);
    }
    let sols = match snf::solve_mod_one(&rows, &rhs, 2) {
        ModOneSolutions::Infinite => return Ok((PermutationOutcome::Infinite, Vec::new())),
        ModOneSolutions::Finite(s) if s.is_empty() => {
            return Ok((PermutationOutcome::Inconsistent, Vec::new()))
        }
        ModOneSolutions::Finite(s) => s,
    };
    let mut elements = Vec::with_capacity(sols.len());
    for x in &sols {
        let e = ProjMatrix::monomial(
            perm,
            [Cyc::from_int(1), frac_to_cyc(x[0]), frac_to_cyc(x[1])],
        );
        if !is_automorphism(f, &e) {
            return Err(StabilizerError::Unsound(e.to_string()));
        }
        elements.push(e);
    }
    Ok((PermutationOutcome::Solutions(sols.len()), elements))
}

fn monomial_search(f: &TernaryForm, exec: Execution) -> Result<MonomialGroup, StabilizerError> {
    if f.is_zero() {
        return Err(StabilizerError::ZeroForm);
    }
    let results = par::map(exec, &PERMUTATIONS, |perm| search_permutation(f, *perm));
    let mut elements = Vec::new();
    let mut per_permutation = Vec::new();
    let mut infinite = false;
    for (perm, r) in PERMUTATIONS.iter().zip(results) {
        let (outcome, elems) = r?;
        infinite |= outcome == PermutationOutcome::Infinite;
        elements.extend(elems);
        per_permutation.push((*perm, outcome));
    }
    Ok(MonomialGroup {
        order: (!infinite).then_some(elements.len() as u64),
        elements,
        per_permutation,
    })
}

/// Which reference point a block candidate fixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockShape {
    FixX,
    FixY,
    FixZ,
}

impl BlockShape {
    pub const ALL: [BlockShape; 3] = [BlockShape::FixX, BlockShape::FixY, BlockShape::FixZ];

    /// The candidate matrix with unknowns `_v, _w, _s, _t`.
    pub fn matrix(self) -> ProjMatrix {
        let u = ParamPoly::param;
        let z = ParamPoly::zero;
        let one = ParamPoly::one;
        let entries = match self {
            BlockShape::FixX => [
                [one(), z(), z()],
                [z(), u("_v"), u("_w")],
                [z(), u("_s"), u("_t")],
            ],
            BlockShape::FixY => [
                [u("_v"), z(), u("_w")],
                [z(), one(), z()],
                [u("_s"), z(), u("_t")],
            ],
            BlockShape::FixZ => [
                [u("_v"), u("_w"), z()],
                [u("_s"), u("_t"), z()],
                [z(), z(), one()],
            ],
        };
        ProjMatrix::new(entries)
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockShape::FixX => "fixX",
            BlockShape::FixY => "fixY",
            BlockShape::FixZ => "fixZ",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for BlockShape {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixX" | "x" | "X" => Ok(BlockShape::FixX),
            "fixY" | "y" | "Y" => Ok(BlockShape::FixY),
            "fixZ" | "z" | "Z" => Ok(BlockShape::FixZ),
            _ => Err(format!("unknown shape {s:?}")),
        }
    }
}

const UNKNOWNS: [&str; 4] = ["_v", "_w", "_s", "_t"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    /// Unknowns forced to zero on this branch, sorted.
    pub zeros: Vec<String>,
    /// Equations left undecided, as text.
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BlockOutcome {
    /// Every surviving branch has `w = s = 0`.
    ReducesToDiagonal {
        surviving: Vec<Branch>,
    },
    Inconclusive {
        surviving: Vec<Branch>,
    },
}

impl BlockOutcome {
    pub fn certified(&self) -> bool {
        matches!(self, BlockOutcome::ReducesToDiagonal { .. })
    }
}

fn has_unknown(p: &ParamPoly) -> bool {
    p.params().iter().any(|n| UNKNOWNS.contains(&n.as_str()))
}

fn unknowns_in(p: &ParamPoly) -> Vec<String> {
    p.params()
        .into_iter()
        .filter(|n| UNKNOWNS.contains(&n.as_str()))
        .collect()
}

/// The equations `F(P x) = lambda F` imposes on the unknowns of `shape`.
pub fn block_equations(
    f: &TernaryForm,
    shape: BlockShape,
) -> Result<Vec<ParamPoly>, StabilizerError> {
    let g = f
        .substitute(&shape.matrix())
        .map_err(|_| StabilizerError::ZeroForm)?;
    let support = f.support();
    let r = *support.first().ok_or(StabilizerError::ZeroForm)?;
    let cr = f.coeff(&r);
    let gr = g.coeff(&r);
    let mut eqs = Vec::new();
    for (mon, c) in g.terms() {
        if f.coeff(mon).is_zero() {
            eqs.push(c.clone());
        }
    }
    for mon in &support[1..] {
        // g_mon * f_r - g_r * f_mon eliminates the scalar.
        let e = g.coeff(mon).mul(&cr).sub(&gr.mul(&f.coeff(mon)));
        if !e.is_zero() {
            eqs.push(e);
        }
    }
    Ok(eqs)
}

enum Verdict {
    Dead,
    Split(Vec<String>),
    Alive(Vec<ParamPoly>),
}

fn examine(eqs: &[ParamPoly], zeros: &BTreeSet<String>) -> Verdict {
    let reduce = |p: &ParamPoly| zeros.iter().fold(p.clone(), |acc, z| acc.set_zero(z));
    let det = reduce(
        &ParamPoly::param("_v")
            .mul(&ParamPoly::param("_t"))
            .sub(&ParamPoly::param("_w").mul(&ParamPoly::param("_s"))),
    );
    if det.is_zero() {
        return Verdict::Dead;
    }
    let mut residual = Vec::new();
    let mut split: Option<Vec<String>> = None;
    for e in eqs {
        let r = reduce(e);
        if r.is_zero() {
            continue;
        }
        if r.num_terms() == 1 {
            let unk = unknowns_in(&r);
            if unk.is_empty() {
                // A nonzero constant times curve parameters, which are assumed nonzero.
                return Verdict::Dead;
            }
            if split.as_ref().is_none_or(|s| unk.len() < s.len()) {
                split = Some(unk);
            }
            continue;
        }
        if !has_unknown(&r) && r.params().is_empty() {
            return Verdict::Dead;
        }
        residual.push(r);
    }
    match split {
        Some(s) => Verdict::Split(s),
        None => Verdict::Alive(residual),
    }
}

/// Runs the deduction loop for one candidate shape.
pub fn block_reduce(f: &TernaryForm, shape: BlockShape) -> Result<BlockOutcome, StabilizerError> {
    block_reduce_with_limit(f, shape, branch_limit_from_env())
}

pub fn block_reduce_with_limit(
    f: &TernaryForm,
    shape: BlockShape,
    limit: usize,
) -> Result<BlockOutcome, StabilizerError> {
    let eqs = block_equations(f, shape)?;
    let mut stack: Vec<BTreeSet<String>> = vec![BTreeSet::new()];
    let mut seen: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    let mut surviving = Vec::new();
    let mut created = 1usize;
    while let Some(zeros) = stack.pop() {
        if !seen.insert(zeros.clone()) {
            continue;
        }
        match examine(&eqs, &zeros) {
            Verdict::Dead => {}
            Verdict::Split(unknowns) => {
                created += unknowns.len().saturating_sub(1);
                if created > limit {
                    return Err(StabilizerError::BranchLimitExceeded(limit));
                }
                for u in unknowns.into_iter().rev() {
                    let mut z = zeros.clone();
                    z.insert(u);
                    stack.push(z);
                }
            }
            Verdict::Alive(residual) => surviving.push(Branch {
                zeros: zeros.iter().cloned().collect(),
                residual: residual.iter().map(|r| r.to_string()).collect(),
            }),
        }
    }
    surviving.sort_by(|a, b| a.zeros.cmp(&b.zeros));
    let diagonal = surviving
        .iter()
        .all(|b| b.zeros.iter().any(|z| z == "_w") && b.zeros.iter().any(|z| z == "_s"));
    Ok(if diagonal {
        BlockOutcome::ReducesToDiagonal { surviving }
    } else {
        BlockOutcome::Inconclusive { surviving }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    DiagonalOnly,
    MonomialComplete,
    ReducesToDiagonalCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub diagonal: DiagonalGroup,
    pub monomial: Option<MonomialGroup>,
    pub blocks: Vec<(BlockShape, BlockOutcome)>,
    pub total_order: Option<u64>,
    pub completeness: Completeness,
    pub notes: Vec<String>,
}

/// Combines the diagonal, monomial and block computations.
pub fn aut_lower_bound(f: &TernaryForm) -> Result<StabilizerReport, StabilizerError> {
    let diagonal = diagonal_stabilizer(f);
    let monomial = monomial_stabilizer_generic(f)?;
    let mut blocks = Vec::new();
    for shape in BlockShape::ALL {
        blocks.push((shape, block_reduce(f, shape)?));
    }
    let mut notes = Vec::new();
    if !diagonal.assumed_nonzero.is_empty() {
        notes.push(format!(
            "parameters assumed generic and nonzero: {}",
            diagonal.assumed_nonzero.join(", ")
        ));
    }
    let all_certified = blocks.iter().all(|(_, b)| b.certified());
    let (total_order, completeness) = match monomial.order {
        Some(n) if all_certified => (Some(n), Completeness::ReducesToDiagonalCertified),
        Some(n) => (Some(n), Completeness::MonomialComplete),
        None => (diagonal.order, Completeness::DiagonalOnly),
    };
    if completeness == Completeness::ReducesToDiagonalCertified {
        notes.push(
            "order is exact among automorphisms fixing a reference point or line; \
             primitive groups are excluded only by separate checks"
                .to_string(),
        );
    }
    Ok(StabilizerReport {
        diagonal,
        monomial: Some(monomial),
        blocks,
        total_order,
        completeness,
        notes,
    })
}

/// Assigns values to parameters and returns the specialized form.
pub fn specialize(f: &TernaryForm, values: &[(&str, Cyc)]) -> TernaryForm {
    let map: HashMap<String, Cyc> = values
        .iter()
        .map(|(n, v)| (n.to_string(), v.clone()))
        .collect();
    f.specialize(&map)
}
