//! Exact linear algebra: dense rational matrices and integer rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.rows)
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &p;
                inv[(col, j)] /= &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let (x, y) = (a[(col, j)].clone(), inv[(col, j)].clone());
                    a[(r, j)] -= &f * x;
                    inv[(r, j)] -= &f * y;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Weight filtration check: entry `(i, j)` vanishes whenever
    /// `weight(i) < weight(j)`.
    pub fn preserves_filtration(&self, weight: impl Fn(usize) -> usize) -> bool {
        (0..self.rows)
            .all(|i| (0..self.cols).all(|j| weight(i) >= weight(j) || self[(i, j)].is_zero()))
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Sparse integer row: sorted `(column, value)` pairs, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

fn primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// `p·row − a·pivot`, both sorted by column.
fn combine(row: &SparseRow, p: &BigInt, pivot: &SparseRow, a: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, val) = if ci < cj {
            i += 1;
            (ci, p * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(a * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, p * &row[i - 1].1 - a * &pivot[j - 1].1)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

/// Rank over ℚ of an integer matrix given as sparse rows, by fraction-free
/// elimination with row content removal. Pivots on the leading column of
/// the shortest available row.
pub fn sparse_rank(rows: Vec<SparseRow>) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    let mut pending: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    pending.sort_by_key(|r| r.len());
    for mut row in pending {
        primitive(&mut row);
        loop {
            let Some(&(lead, _)) = row.first() else { break };
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(piv) => {
                    let p = piv[0].1.clone();
                    let a = row[0].1.clone();
                    let g = p.gcd(&a);
                    row = combine(&row, &(&p / &g), piv, &(&a / &g));
                    primitive(&mut row);
                }
            }
        }
    }
    pivots.len()
}

/// Rank by dense Bareiss elimination, pivoting from the last column
/// backwards. Independent of [`sparse_rank`]; used as a cross-check.
pub fn bareiss_rank(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> usize {
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for &(i, j, v) in entries {
        m[i][j] += v;
    }
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in (0..cols).rev() {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(piv, rank);
        let p = m[rank][col].clone();
        for r in rank + 1..rows {
            let a = m[r][col].clone();
            for c in 0..cols {
                let v = (&p * &m[r][c] - &a * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}
