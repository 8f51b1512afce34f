//! Dense univariate polynomials over an exact field.

use crate::scalar::Scalar;

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<F: Scalar> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (t, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k - dd + t] = rem[k - dd + t].sub(&c.mul(d));
                }
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv())
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(F::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = r0.leading().inv();
        (r0.scale(&li), s0.scale(&li), t0.scale(&li))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_i64(i as i64)))
            .collect();
        Self::new(v)
    }

    /// Square-free part in characteristic zero: `f / gcd(f, f')`, made monic.
    pub fn squarefree(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Largest `k` such that `x^k` divides `self`, and the cofactor.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (
            k,
            Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()),
        )
    }

    /// Newton interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
    pub fn interpolate(xs: &[F], ys: &[F]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<F> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i].sub(&dd[i - 1]);
                let den = xs[i].sub(&xs[i - level]);
                dd[i] = num.div(&den);
            }
        }
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            // acc = acc * (x - xs[i]) + dd[i]
            let shifted = acc.mul(&Self::new(vec![xs[i].neg(), F::one()]));
            acc = shifted.add(&Self::constant(dd[i].clone()));
        }
        acc
    }
}

/// Determinant by Gaussian elimination; the matrix is consumed.
pub fn determinant<F: Scalar>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return F::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = det.neg();
        }
        let p = m[col][col].clone();
        det = det.mul(&p);
        let pinv = p.inv();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&pinv);
            for c in col..n {
                let v = m[col][c].mul(&f);
                m[r][c] = m[r][c].sub(&v);
            }
        }
    }
    det
}

/// Basis of the right kernel of `m` (rows of length `ncols`).
pub fn kernel<F: Scalar>(m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, row);
        let inv = a[row][col].inv();
        for c in 0..ncols {
            a[row][c] = a[row][c].mul(&inv);
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let v = a[row][c].mul(&f);
                    a[r][c] = a[r][c].sub(&v);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        basis.push(v);
    }
    basis
}
