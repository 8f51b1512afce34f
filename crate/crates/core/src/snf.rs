//! Smith normal form of small integer matrices, and solving `A x = b` over `(Q/Z)^n`.
//!
//! Roots of unity are handled additively: `exp(2 pi i x)` with `x` rational mod 1.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

/// `P * A * Q = D` with `P`, `Q` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub p: Vec<Vec<i64>>,
    pub q: Vec<Vec<i64>>,
    pub d: Vec<Vec<i64>>,
}

impl Smith {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.len().min(self.cols()))
            .map(|i| self.d[i][i])
            .filter(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    fn cols(&self) -> usize {
        self.q.len()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Computes the Smith form of an `r x c` matrix given as rows.
pub fn smith(a: &[Vec<i64>], cols: usize) -> Smith {
    let rows = a.len();
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);

    let swap_rows = |m: &mut Vec<Vec<i64>>, i: usize, j: usize| m.swap(i, j);
    let swap_cols = |m: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= f * row_j
    let row_axpy = |m: &mut Vec<Vec<i64>>, i: usize, j: usize, f: i64| {
        let src = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(src) {
            *x -= f * y;
        }
    };
    let col_axpy = |m: &mut Vec<Vec<i64>>, i: usize, j: usize, f: i64| {
        for row in m.iter_mut() {
            row[i] -= f * row[j];
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // Pivot: smallest nonzero absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(p, q, d);
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut p, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut q, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let f = Integer::div_floor(&d[i][t], &d[t][t]);
                if f != 0 {
                    row_axpy(&mut d, i, t, f);
                    row_axpy(&mut p, i, t, f);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = Integer::div_floor(&d[t][j], &d[t][t]);
                if f != 0 {
                    col_axpy(&mut d, j, t, f);
                    col_axpy(&mut q, j, t, f);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into row t and retry.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % d[t][t] != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, -1);
                    row_axpy(&mut p, t, i, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in p[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    finish(p, q, d)
}

fn finish(p: Vec<Vec<i64>>, q: Vec<Vec<i64>>, mut d: Vec<Vec<i64>>) -> Smith {
    for (t, row) in d.iter_mut().enumerate() {
        if t < row.len() && row[t] < 0 {
            row[t] = -row[t];
        }
    }
    Smith { p, q, d }
}

/// Result of solving over `(Q/Z)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModOneSolutions {
    /// Every solution, each coordinate in `[0, 1)`, sorted.
    Finite(Vec<Vec<Rational64>>),
    /// A positive-dimensional solution set (rank below `n`), which is nonempty.
    Infinite,
}

impl ModOneSolutions {
    pub fn count(&self) -> Option<usize> {
        match self {
            ModOneSolutions::Finite(v) => Some(v.len()),
            ModOneSolutions::Infinite => None,
        }
    }
}

pub fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

/// All `x` in `(Q/Z)^cols` with `A x = b (mod 1)`.
pub fn solve_mod_one(a: &[Vec<i64>], b: &[Rational64], cols: usize) -> ModOneSolutions {
    assert_eq!(a.len(), b.len());
    let s = smith(a, cols);
    let rows = a.len();
    // D y = P b with x = Q y.
    let pb: Vec<Rational64> = (0..rows)
        .map(|i| {
            (0..rows).fold(Rational64::zero(), |acc, k| {
                acc + Rational64::from_integer(s.p[i][k]) * b[k]
            })
        })
        .collect();
    let diag: Vec<i64> = (0..cols)
        .map(|i| if i < rows { s.d[i][i] } else { 0 })
        .collect();
    for i in 0..rows {
        let di = if i < cols { s.d[i][i] } else { 0 };
        if di == 0 && !frac(pb[i]).is_zero() {
            return ModOneSolutions::Finite(Vec::new());
        }
    }
    if diag.contains(&0) {
        return ModOneSolutions::Infinite;
    }
    // y_i ranges over (pb_i + t) / d_i.
    let mut ys: Vec<Vec<Rational64>> = vec![Vec::new()];
    for i in 0..cols {
        let di = diag[i];
        let mut next = Vec::with_capacity(ys.len() * di as usize);
        for y in &ys {
            for t in 0..di {
                let mut y2 = y.clone();
                y2.push((pb[i] + Rational64::from_integer(t)) / Rational64::from_integer(di));
                next.push(y2);
            }
        }
        ys = next;
    }
    let mut xs: Vec<Vec<Rational64>> = ys
        .into_iter()
        .map(|y| {
            (0..cols)
                .map(|r| {
                    frac((0..cols).fold(Rational64::zero(), |acc, k| {
                        acc + Rational64::from_integer(s.q[r][k]) * y[k]
                    }))
                })
                .collect()
        })
        .collect();
    xs.sort();
    xs.dedup();
    ModOneSolutions::Finite(xs)
}

/// Generators of the finite group `{x : A x = 0 mod 1}` with their orders,
/// or `None` when the group is infinite. Trivial factors are dropped.
pub fn kernel_generators(a: &[Vec<i64>], cols: usize) -> Option<Vec<(Vec<Rational64>, i64)>> {
    let s = smith(a, cols);
    let diag: Vec<i64> = (0..cols)
        .map(|i| if i < a.len() { s.d[i][i] } else { 0 })
        .collect();
    if diag.contains(&0) {
        return None;
    }
    Some(
        diag.iter()
            .enumerate()
            .filter(|(_, &di)| di > 1)
            .map(|(i, &di)| {
                let g = (0..cols)
                    .map(|r| frac(Rational64::new(s.q[r][i], di)))
                    .collect();
                (g, di)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3);
        assert_eq!(s.invariant_factors(), vec![2, 6, 12]);
        assert_eq!(matmul(&matmul(&s.p, &a), &s.q), s.d);
    }

    #[test]
    fn z8_reference_lattice() {
        // differences of Y^4 Z and X Z^4 from X^5, as (j, k)
        let a = vec![vec![4, 1], vec![0, 4]];
        let s = smith(&a, 2);
        assert_eq!(s.invariant_factors(), vec![1, 16]);
        assert_eq!(
            solve_mod_one(&a, &[Rational64::zero(); 2], 2).count(),
            Some(16)
        );
    }

    #[test]
    fn rank_deficient_is_infinite() {
        let a = vec![vec![2, 4], vec![1, 2]];
        assert_eq!(
            solve_mod_one(&a, &[Rational64::zero(); 2], 2),
            ModOneSolutions::Infinite
        );
        assert!(kernel_generators(&a, 2).is_none());
    }

    #[test]
    fn inconsistent_system_is_empty() {
        // 2x = 1/2 and x = 0 has no solution
        let a = vec![vec![2, 0], vec![1, 0], vec![0, 1]];
        let b = vec![
            Rational64::new(1, 2),
            Rational64::zero(),
            Rational64::zero(),
        ];
        assert_eq!(solve_mod_one(&a, &b, 2), ModOneSolutions::Finite(vec![]));
    }

    #[test]
    fn inhomogeneous_solutions_check() {
        let a = vec![vec![3, 1], vec![1, -2]];
        let b = vec![Rational64::new(1, 3), Rational64::new(1, 4)];
        let ModOneSolutions::Finite(sols) = solve_mod_one(&a, &b, 2) else {
            panic!()
        };
        assert_eq!(sols.len(), 7);
        for x in sols {
            for (row, bi) in a.iter().zip(&b) {
                let v = Rational64::from_integer(row[0]) * x[0]
                    + Rational64::from_integer(row[1]) * x[1];
                assert!(frac(v - bi).is_zero());
            }
        }
    }
}
