//! Exact linear algebra kernels over machine-sized integers.
//!
//! All inputs in this crate are tiny (entries in `-3..=3`, dimension at
//! most 21), so fraction-free elimination in `i128` is exact with huge
//! headroom against the Hadamard bound; arithmetic is checked so any
//! overflow would panic rather than wrap.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

pub type Q = Ratio<i128>;

#[cfg(test)]
pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn cmul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("i128 overflow in exact kernel")
}

/// Determinant of a square integer matrix (fraction-free Bareiss).
pub fn det_i64(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (cmul(m[i][j], m[k][k]) - cmul(m[i][k], m[k][j])) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Solve `A x = b` for square integer `A`; `None` when `A` is singular.
pub fn solve_square(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter()
                .map(|&x| Q::from_integer(x as i128))
                .chain(std::iter::once(Q::from_integer(bi as i128)))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| m[i][k] != Q::from_integer(0))?;
        m.swap(k, p);
        let pivot = m[k][k];
        for j in k..=n {
            m[k][j] /= pivot;
        }
        for i in 0..n {
            if i != k && m[i][k] != Q::from_integer(0) {
                let f = m[i][k];
                for j in k..=n {
                    let sub = f * m[k][j];
                    m[i][j] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != Q::from_integer(0)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        for i in rank + 1..m.len() {
            if m[i][col] != Q::from_integer(0) {
                let f = m[i][col] / pivot;
                for j in col..cols {
                    let sub = f * m[rank][j];
                    m[i][j] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Incremental integer row echelon form used to prune dependent rows
/// during vertex enumeration. Rows are reduced rationally.
#[derive(Clone, Default)]
pub struct Echelon {
    /// Reduced rows with their pivot columns, kept rational.
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Try to add an integer row; returns `false` (unchanged) when the row
    /// is linearly dependent on the current rows. Only appends, so a later
    /// [`Echelon::pop`] restores the previous state exactly.
    pub fn push(&mut self, row: &[i64]) -> bool {
        let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x as i128)).collect();
        for (pivot_col, r) in &self.rows {
            if v[*pivot_col] != Q::from_integer(0) {
                let f = v[*pivot_col] / r[*pivot_col];
                for j in 0..v.len() {
                    let sub = f * r[j];
                    v[j] -= sub;
                }
            }
        }
        match v.iter().position(|x| *x != Q::from_integer(0)) {
            Some(col) => {
                self.rows.push((col, v));
                true
            }
            None => false,
        }
    }

    /// Remove the most recently pushed row.
    pub fn pop(&mut self) {
        self.rows.pop();
    }
}
