//! Reduction of cyclotomic forms to a prime field and projective point scans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::Cyc;
use crate::forms::TernaryForm;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} is not 1 mod {n}, so zeta({n}) has no image")]
    NoRootOfUnity { p: u64, n: u32 },
    #[error("p = {0} divides a coefficient denominator")]
    BadReduction(u64),
    #[error("p = {p} exceeds the cap {cap}")]
    PrimeTooLarge { p: u64, cap: u64 },
    #[error("form has unassigned parameters")]
    NotSpecialized,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = prime_factors(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime has a primitive root")
}

/// Images of cyclotomic numbers in `F_p`, with `zeta_n -> g^((p-1)/n)`.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub p: u64,
    pub g: u64,
}

impl Reducer {
    pub fn new(p: u64) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        Ok(Reducer {
            p,
            g: primitive_root(p),
        })
    }

    fn big_mod(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn reduce(&self, c: &Cyc) -> Result<u64, FfError> {
        let n = c.order();
        if (self.p - 1) % n as u64 != 0 {
            return Err(FfError::NoRootOfUnity { p: self.p, n });
        }
        let den = self.big_mod(c.denominator());
        if den.is_zero() {
            return Err(FfError::BadReduction(self.p));
        }
        let z = pow_mod(self.g, (self.p - 1) / n as u64, self.p);
        let mut acc = 0u64;
        let mut zi = 1u64;
        for a in c.numerators() {
            acc = (acc + self.big_mod(a) * zi) % self.p;
            zi = zi * z % self.p;
        }
        Ok(acc * inv_mod(den, self.p) % self.p)
    }
}

/// A form over `F_p` as `(exponents, coefficient)` pairs.
#[derive(Clone, Debug)]
pub struct FpForm {
    pub p: u64,
    pub degree: u32,
    pub terms: Vec<([u32; 3], u64)>,
}

impl FpForm {
    pub fn reduce(f: &TernaryForm, red: &Reducer) -> Result<Self, FfError> {
        let consts = f.constant_terms().ok_or(FfError::NotSpecialized)?;
        let mut terms = Vec::new();
        for (m, c) in consts {
            let v = red.reduce(&c)?;
            if v != 0 {
                terms.push((m.exps(), v));
            }
        }
        Ok(FpForm {
            p: red.p,
            degree: f.degree(),
            terms,
        })
    }

    pub fn partials(&self) -> [FpForm; 3] {
        std::array::from_fn(|v| {
            let terms = self
                .terms
                .iter()
                .filter(|(e, _)| e[v] > 0)
                .filter_map(|(e, c)| {
                    let mut ne = *e;
                    ne[v] -= 1;
                    let nc = c * (e[v] as u64 % self.p) % self.p;
                    (nc != 0).then_some((ne, nc))
                })
                .collect();
            FpForm {
                p: self.p,
                degree: self.degree.saturating_sub(1),
                terms,
            }
        })
    }

    /// Evaluates using precomputed power tables `pw[v][e] = x_v^e`.
    fn eval_tables(&self, pw: &[Vec<u64>; 3]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let t =
                c * pw[0][e[0] as usize] % p * pw[1][e[1] as usize] % p * pw[2][e[2] as usize] % p;
            (acc + t) % p
        })
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let tables = power_tables(pt, self.degree, self.p);
        self.eval_tables(&tables)
    }
}

fn power_tables(pt: [u64; 3], d: u32, p: u64) -> [Vec<u64>; 3] {
    std::array::from_fn(|v| {
        let mut t = Vec::with_capacity(d as usize + 1);
        let mut acc = 1 % p;
        for _ in 0..=d {
            t.push(acc);
            acc = acc * pt[v] % p;
        }
        t
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub p: u64,
    /// Number of `F_p`-rational points of the curve.
    pub point_count: u64,
    /// First singular `F_p`-point found, in the scan order.
    pub singular: Option<[u64; 3]>,
}

struct Chunk {
    count: u64,
    singular: Option<[u64; 3]>,
}

fn scan_points(f: &FpForm, parts: &[FpForm; 3], pts: impl Iterator<Item = [u64; 3]>) -> Chunk {
    let mut chunk = Chunk {
        count: 0,
        singular: None,
    };
    for pt in pts {
        let tables = power_tables(pt, f.degree, f.p);
        if f.eval_tables(&tables) != 0 {
            continue;
        }
        chunk.count += 1;
        if chunk.singular.is_none() && parts.iter().all(|g| g.eval_tables(&tables) == 0) {
            chunk.singular = Some(pt);
        }
    }
    chunk
}

/// Scans all `p^2 + p + 1` points of `P^2(F_p)`.
pub fn scan(f: &FpForm, exec: Execution) -> ScanResult {
    let p = f.p;
    let parts = f.partials();
    let mut chunks = par::map_range(exec, 0..p, |y| {
        scan_points(f, &parts, (0..p).map(move |z| [1, y, z]))
    });
    chunks.push(scan_points(f, &parts, (0..p).map(|z| [0, 1, z])));
    chunks.push(scan_points(f, &parts, std::iter::once([0, 0, 1])));
    ScanResult {
        p,
        point_count: chunks.iter().map(|c| c.count).sum(),
        singular: chunks.iter().find_map(|c| c.singular),
    }
}

/// Brute-force count of `(v, s)` in `(F_p^*)^2` with `diag(1, v, s)` scaling
/// every monomial of `support` by the same factor.
pub fn diagonal_count(support: &[[u32; 3]], p: u64, exec: Execution) -> u64 {
    let Some(first) = support.first() else {
        return 0;
    };
    let counts = par::map_range(exec, 1..p, |v| {
        let mut n = 0;
        for s in 1..p {
            let w = |e: &[u32; 3]| pow_mod(v, e[1] as u64, p) * pow_mod(s, e[2] as u64, p) % p;
            let w0 = w(first);
            if support.iter().all(|e| w(e) == w0) {
                n += 1;
            }
        }
        n
    });
    counts.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert!(is_prime(17) && is_prime(41) && !is_prime(21) && !is_prime(1));
        assert_eq!(primitive_root(17), 3);
        assert_eq!(primitive_root(41), 6);
    }

    #[test]
    fn zeta_reduction_is_a_root() {
        let r = Reducer::new(41).unwrap();
        let i = r.reduce(&Cyc::zeta(4, 1)).unwrap();
        assert_eq!(i * i % 41, 40);
        let w = r.reduce(&Cyc::zeta(8, 1)).unwrap();
        assert_eq!(pow_mod(w, 2, 41), i);
        assert_eq!(
            Reducer::new(43).unwrap().reduce(&Cyc::zeta(4, 1)),
            Err(FfError::NoRootOfUnity { p: 43, n: 4 })
        );
        let half = Cyc::from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(r.reduce(&half).unwrap() * 2 % 41, 1);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let r = Reducer::new(61).unwrap();
        let a = &Cyc::zeta(5, 1) + &Cyc::zeta(3, 2);
        let b = &Cyc::zeta(4, 3) - &Cyc::from_int(7);
        let (ra, rb) = (r.reduce(&a).unwrap(), r.reduce(&b).unwrap());
        assert_eq!(r.reduce(&(&a * &b)).unwrap(), ra * rb % 61);
        assert_eq!(r.reduce(&(&a + &b)).unwrap(), (ra + rb) % 61);
    }

    #[test]
    fn fermat_counts() {
        // X^3 + Y^3 + Z^3 over F_7 has 9 points; smooth.
        let f = FpForm::reduce(&TernaryForm::fermat(3), &Reducer::new(7).unwrap()).unwrap();
        let s = scan(&f, Execution::Auto);
        assert_eq!(s.point_count, 9);
        assert_eq!(s.singular, None);
        assert_eq!(scan(&f, Execution::Sequential), s);
    }

    #[test]
    fn diagonal_count_fermat() {
        let sup = [[5, 0, 0], [0, 5, 0], [0, 0, 5]];
        assert_eq!(diagonal_count(&sup, 11, Execution::Auto), 25);
        assert_eq!(diagonal_count(&sup, 13, Execution::Sequential), 1);
    }
}
