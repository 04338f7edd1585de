//! Linear algebra over principal ideal domains and arbitrary commutative rings.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::ring::{Field, Pid, Ring};

/// Row-major dense matrix.
pub type Matrix<E> = Vec<Vec<E>>;

/// A particular solution and generators of the solution module of `A x = 0`.
#[derive(Clone, Debug)]
pub struct Solution<E> {
    pub x: Vec<E>,
    pub syzygies: Vec<Vec<E>>,
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    vec![vec![ring.zero(); cols]; rows]
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    let mut m = zeros(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ring.one();
    }
    m
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, x: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(ring.zero(), |acc, (r, v)| ring.add(&acc, &ring.mul(r, v))))
        .collect()
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(ring.zero(), |acc, (r, brow)| ring.add(&acc, &ring.mul(r, &brow[j]))))
                .collect()
        })
        .collect()
}

/// Column Hermite reduction `A U = H` with `U` unimodular, reusable for
/// several right-hand sides.
#[derive(Clone, Debug)]
pub struct Hermite<E> {
    h: Matrix<E>,
    u: Matrix<E>,
    /// For each row: pivot columns before it, and whether it is a pivot row.
    row_info: Vec<(usize, bool)>,
    rank: usize,
}

impl<E: Clone> Hermite<E> {
    pub fn new<R: Pid<Elem = E>>(ring: &R, a: &Matrix<E>) -> Self {
        let n = a.len();
        let m = a.first().map_or(0, |r| r.len());
        let mut h = a.clone();
        let mut u = identity(ring, m);
        let mut row_info: Vec<(usize, bool)> = Vec::with_capacity(n);
        let mut c = 0;
        for i in 0..n {
            if c == m {
                row_info.push((c, false));
                continue;
            }
            for j in c + 1..m {
                if ring.is_zero(&h[i][j]) {
                    continue;
                }
                let (x, y) = (h[i][c].clone(), h[i][j].clone());
                let (g, s, t) = ring.xgcd(&x, &y);
                let xg = ring.div_exact(&x, &g).expect("gcd divides");
                let yg = ring.div_exact(&y, &g).expect("gcd divides");
                let combine = |mat: &mut Matrix<E>| {
                    for row in mat.iter_mut() {
                        let (vc, vj) = (row[c].clone(), row[j].clone());
                        row[c] = ring.add(&ring.mul(&s, &vc), &ring.mul(&t, &vj));
                        row[j] = ring.sub(&ring.mul(&xg, &vj), &ring.mul(&yg, &vc));
                    }
                };
                combine(&mut h);
                combine(&mut u);
            }
            let pivot = !ring.is_zero(&h[i][c]);
            row_info.push((c, pivot));
            if pivot {
                c += 1;
            }
        }
        Hermite { h, u, row_info, rank: c }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve<R: Pid<Elem = E>>(&self, ring: &R, b: &[E]) -> Result<Vec<E>> {
        assert_eq!(b.len(), self.row_info.len(), "right-hand side length");
        let m = self.u.len();
        let mut y = vec![ring.zero(); m];
        for (i, &(before, pivot)) in self.row_info.iter().enumerate() {
            let mut resid = b[i].clone();
            for j in 0..before {
                resid = ring.sub(&resid, &ring.mul(&self.h[i][j], &y[j]));
            }
            if pivot {
                y[before] = ring.div_exact(&resid, &self.h[i][before]).ok_or(AlgebraError::NoSolution)?;
            } else if !ring.is_zero(&resid) {
                return Err(AlgebraError::NoSolution);
            }
        }
        Ok(mat_vec(ring, &self.u, &y))
    }

    /// Generators of the kernel: the columns of `U` beyond the rank.
    pub fn syzygies(&self) -> Vec<Vec<E>> {
        let m = self.u.len();
        (self.rank..m).map(|j| self.u.iter().map(|row| row[j].clone()).collect()).collect()
    }
}

/// Solves `A x = b` over a PID by column Hermite reduction. The syzygies
/// generate the kernel because the base is a domain.
pub fn solve_and_syzygies<R: Pid>(ring: &R, a: &Matrix<R::Elem>, b: &[R::Elem]) -> Result<Solution<R::Elem>> {
    assert_eq!(b.len(), a.len(), "right-hand side length");
    let hermite = Hermite::new(ring, a);
    let x = hermite.solve(ring, b)?;
    Ok(Solution { x, syzygies: hermite.syzygies() })
}

/// Division-free determinant by expansion over column subsets.
pub fn det<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    // minors[mask] = det of rows 0..popcount(mask) restricted to the columns in mask.
    let mut memo: BTreeMap<u64, R::Elem> = BTreeMap::new();
    memo.insert(0, ring.one());
    for row in 0..n {
        let mut next: BTreeMap<u64, R::Elem> = BTreeMap::new();
        for (mask, val) in &memo {
            if ring.is_zero(val) {
                continue;
            }
            let mut sign_count = 0;
            for col in (0..n).rev() {
                let bit = 1u64 << col;
                if mask & bit != 0 {
                    sign_count += 1;
                    continue;
                }
                let entry = &m[row][col];
                if ring.is_zero(entry) {
                    continue;
                }
                let mut term = ring.mul(val, entry);
                if sign_count % 2 == 1 {
                    term = ring.neg(&term);
                }
                let slot = next.entry(mask | bit).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &term);
            }
        }
        memo = next;
    }
    memo.remove(&((1u64 << n) - 1)).unwrap_or_else(|| ring.zero())
}

/// Classical adjoint: `adj(M) M = M adj(M) = det(M) I`.
pub fn adjugate<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = m.len();
    let mut out = zeros(ring, n, n);
    if n == 1 {
        out[0][0] = ring.one();
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix<R::Elem> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det(ring, &minor);
            out[i][j] = if (i + j) % 2 == 1 { ring.neg(&d) } else { d };
        }
    }
    out
}

/// Row echelon form over a field; returns the rank and the reduced matrix.
pub fn row_reduce<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (usize, Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&a[i][c])) else { continue };
        a.swap(r, p);
        let inv = field.inv(&a[r][c]).expect("nonzero pivot");
        for v in a[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&a[i][c]) {
                let factor = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (v, pv) in a[i].iter_mut().zip(&pivot_row) {
                    *v = field.sub(v, &field.mul(&factor, pv));
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    (r, a, pivot_cols)
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    row_reduce(field, m).0
}

pub fn transpose<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// A solution of `A x = b` over a field, free variables set to zero.
pub fn solve_field<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: Matrix<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let (_, rref, pivots) = row_reduce(field, &aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rref[r][cols].clone();
    }
    Some(x)
}
