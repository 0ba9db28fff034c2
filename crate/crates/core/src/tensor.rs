//! Degree-truncated free associative algebra over ℚ.
//!
//! Homogeneous degree `d` is stored densely with words indexed big-endian in
//! base `n`, so concatenation is `i_u · n^{|v|} + i_v`.

use num_traits::{One, Zero};

use crate::hall::{FreeLie, LieElement};
use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct TensorSeries {
    n: usize,
    max_degree: usize,
    levels: Vec<Vec<Q>>,
}

pub fn word_index(n: usize, w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &l| acc * n + l as usize)
}

impl TensorSeries {
    pub fn zero(n: usize, max_degree: usize) -> Self {
        let levels = (0..=max_degree)
            .map(|d| vec![Q::zero(); n.pow(d as u32)])
            .collect();
        TensorSeries {
            n,
            max_degree,
            levels,
        }
    }

    pub fn one(n: usize, max_degree: usize) -> Self {
        let mut t = TensorSeries::zero(n, max_degree);
        t.levels[0][0] = Q::one();
        t
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn level(&self, d: usize) -> &[Q] {
        &self.levels[d]
    }

    pub fn coeff(&self, w: &[u8]) -> &Q {
        &self.levels[w.len()][word_index(self.n, w)]
    }

    pub fn add_assign_scaled(&mut self, other: &TensorSeries, s: &Q) {
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += y * s;
                }
            }
        }
    }

    pub fn scale(&self, s: &Q) -> TensorSeries {
        let mut t = self.clone();
        for lvl in &mut t.levels {
            for x in lvl.iter_mut() {
                if !x.is_zero() {
                    *x *= s;
                }
            }
        }
        t
    }

    fn nonzero(&self, d: usize) -> Vec<(usize, &Q)> {
        self.levels[d]
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    /// Truncated product.
    pub fn mul(&self, other: &TensorSeries) -> TensorSeries {
        let mut out = TensorSeries::zero(self.n, self.max_degree);
        let rhs: Vec<Vec<(usize, &Q)>> = (0..=self.max_degree).map(|d| other.nonzero(d)).collect();
        for p in 0..=self.max_degree {
            let lhs = self.nonzero(p);
            if lhs.is_empty() {
                continue;
            }
            for qd in 0..=self.max_degree - p {
                let shift = self.n.pow(qd as u32);
                let target = &mut out.levels[p + qd];
                for (i, a) in &lhs {
                    for (j, b) in &rhs[qd] {
                        target[i * shift + j] += *a * *b;
                    }
                }
            }
        }
        out
    }

    /// `Σ_{m ≤ max_degree} x^m / m!` for `x` without constant term.
    pub fn exp(&self) -> TensorSeries {
        let mut out = TensorSeries::one(self.n, self.max_degree);
        let mut power = TensorSeries::one(self.n, self.max_degree);
        for m in 1..=self.max_degree {
            power = power.mul(self).scale(&Q::new(1.into(), (m as i64).into()));
            out.add_assign_scaled(&power, &Q::one());
        }
        out
    }

    /// `log(self)` for `self` with constant term 1.
    pub fn log(&self) -> TensorSeries {
        let mut y = self.clone();
        y.levels[0][0] -= Q::one();
        let mut out = TensorSeries::zero(self.n, self.max_degree);
        let mut power = TensorSeries::one(self.n, self.max_degree);
        for m in 1..=self.max_degree {
            power = power.mul(&y);
            let c = if m % 2 == 1 { q(1) } else { q(-1) } / q(m as i64);
            out.add_assign_scaled(&power, &c);
        }
        out
    }

    /// Inverse of an element with constant term 1.
    pub fn inverse_unipotent(&self) -> TensorSeries {
        let mut neg_y = self.scale(&q(-1));
        neg_y.levels[0][0] = Q::zero();
        let mut out = TensorSeries::one(self.n, self.max_degree);
        let mut power = TensorSeries::one(self.n, self.max_degree);
        for _ in 1..=self.max_degree {
            power = power.mul(&neg_y);
            out.add_assign_scaled(&power, &Q::one());
        }
        out
    }

    pub fn from_lie(alg: &FreeLie, x: &LieElement) -> TensorSeries {
        let mut t = TensorSeries::zero(alg.generators(), alg.class());
        for (i, c) in x.terms() {
            for (w, p) in alg.poly(i) {
                t.levels[w.len()][word_index(alg.generators(), w)] += c * q(*p);
            }
        }
        t
    }

    /// Lyndon coordinates of the homogeneous degree-`d` part, which must be
    /// a Lie polynomial. Returns `None` if a non-Lie residue remains.
    pub fn lie_part(&self, alg: &FreeLie, d: usize) -> Option<Vec<(usize, Q)>> {
        let n = alg.generators();
        let mut residual = self.levels[d].clone();
        let mut out = Vec::new();
        for idx in alg.weight_range(d) {
            let pos = word_index(n, &alg.element(idx).word);
            let c = residual[pos].clone();
            if c.is_zero() {
                continue;
            }
            for (w, p) in alg.poly(idx) {
                residual[word_index(n, w)] -= &c * q(*p);
            }
            out.push((idx, c));
        }
        residual.iter().all(|x| x.is_zero()).then_some(out)
    }

    /// Lyndon coordinates of a Lie series (degrees `1..=class`).
    pub fn to_lie(&self, alg: &FreeLie) -> Option<LieElement> {
        let mut terms = Vec::new();
        for d in 1..=alg.class() {
            terms.extend(self.lie_part(alg, d)?);
        }
        Some(LieElement::from_terms(alg.class(), terms))
    }
}
