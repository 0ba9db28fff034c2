//! The Chevalley–Eilenberg complex `Λ*𝔤_k` with the Koszul boundary
//!
//! ```text
//! ∂(V1∧…∧Vn) = Σ_{i<j} (-1)^{i+j+1} [Vi,Vj] ∧ V1 ∧ … V̂i … V̂j … ∧ Vn
//! ```
//!
//! its weight-graded rational homology, and the extended differential into
//! `C_2(𝔤_{k+1}) / (𝔤^{(1)} ∧ 𝔩)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hall::{FreeLie, LieElement};
use crate::linalg::{bareiss_rank, sparse_rank, QMatrix, SparseRow};
use crate::rational::{q, Q};

/// Sorts `tuple` in place, returning the permutation sign, or `None` if an
/// index repeats.
pub fn normalize_wedge(tuple: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j - 1] > tuple[j] {
            tuple.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && tuple[j - 1] == tuple[j] {
            return None;
        }
    }
    Some(sign)
}

/// A rational combination of wedges of Lyndon basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeChain {
    class: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl WedgeChain {
    pub fn zero(class: usize, degree: usize) -> Self {
        WedgeChain {
            class,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a chain from unsorted tuples; signs from sorting are applied
    /// and degenerate wedges dropped.
    pub fn from_terms(
        class: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Q)>,
    ) -> Self {
        let mut c = WedgeChain::zero(class, degree);
        for (t, x) in terms {
            c.add_term(t, x);
        }
        c
    }

    pub fn add_term(&mut self, mut tuple: Vec<usize>, coeff: Q) {
        assert_eq!(tuple.len(), self.degree, "inhomogeneous wedge");
        let Some(sign) = normalize_wedge(&mut tuple) else {
            return;
        };
        let coeff = if sign < 0 { -coeff } else { coeff };
        match self.terms.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WedgeChain) -> WedgeChain {
        let mut out = self.clone();
        for (t, x) in &other.terms {
            out.add_term(t.clone(), x.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> WedgeChain {
        WedgeChain::from_terms(
            self.class,
            self.degree,
            self.terms.iter().map(|(t, x)| (t.clone(), x * s)),
        )
    }

    pub fn sub(&self, other: &WedgeChain) -> WedgeChain {
        self.add(&other.scale(&q(-1)))
    }

    /// Same tuples regarded in the algebra of another class (the Lyndon
    /// basis of a lower class is a prefix of the higher one).
    pub fn lift(&self, class: usize) -> WedgeChain {
        WedgeChain {
            class,
            degree: self.degree,
            terms: self.terms.clone(),
        }
    }

    /// Wedge of Lie elements `x1 ∧ … ∧ xn`.
    pub fn wedge(class: usize, factors: &[LieElement]) -> WedgeChain {
        let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::from_integer(1.into()))];
        for f in factors {
            let mut next = Vec::new();
            for (t, c) in &partial {
                for (i, x) in f.terms() {
                    if t.contains(&i) {
                        continue;
                    }
                    let mut nt = t.clone();
                    nt.push(i);
                    next.push((nt, c * x));
                }
            }
            partial = next;
        }
        WedgeChain::from_terms(class, factors.len(), partial)
    }
}

/// Koszul boundary of one basis wedge, with integer coefficients. The input
/// must be strictly increasing.
pub fn boundary_of_basis(alg: &FreeLie, tuple: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let n = tuple.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if alg.weight(tuple[i]) + alg.weight(tuple[j]) > alg.class() {
                continue;
            }
            // 1-based (i+1)+(j+1)+1 has the parity of i+j+1.
            let sign = if (i + j + 1) % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = tuple
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i && p != j)
                .map(|(_, &v)| v)
                .collect();
            for (k, c) in alg.bracket_basis(tuple[i], tuple[j]) {
                let mut t = Vec::with_capacity(n - 1);
                t.push(k);
                t.extend_from_slice(&rest);
                if let Some(s) = normalize_wedge(&mut t) {
                    out.push((t, sign * s * c));
                }
            }
        }
    }
    out
}

/// Koszul boundary over the algebra of the chain's class.
pub fn ce_boundary(alg: &FreeLie, chain: &WedgeChain) -> Result<WedgeChain> {
    if chain.class != alg.class() {
        return Err(Error::ClassMismatch(chain.class, alg.class()));
    }
    let mut acc: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    if chain.degree == 0 {
        return Ok(WedgeChain::zero(chain.class, 0));
    }
    for (t, x) in &chain.terms {
        for (nt, c) in boundary_of_basis(alg, t) {
            *acc.entry(nt).or_insert_with(Q::zero) += x * q(c);
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(WedgeChain {
        class: chain.class,
        degree: chain.degree - 1,
        terms: acc,
    })
}

/// All strictly increasing `degree`-tuples of basis indices with total
/// weight `weight`, in lexicographic order.
pub fn basis_wedges(alg: &FreeLie, degree: usize, weight: usize) -> Vec<Vec<usize>> {
    fn rec(
        alg: &FreeLie,
        start: usize,
        left: usize,
        weight: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            if weight == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..alg.dim() {
            let w = alg.weight(i);
            // Indices are sorted by weight, so remaining factors weigh ≥ w.
            if w * left > weight {
                break;
            }
            cur.push(i);
            rec(alg, i + 1, left - 1, weight - w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(alg, 0, degree, weight, &mut Vec::new(), &mut out);
    out
}

/// Weights carried by degree-`n` wedges of a class-`c` algebra.
pub fn weight_span(alg: &FreeLie, degree: usize) -> std::ops::RangeInclusive<usize> {
    if degree == 0 {
        return 0..=0;
    }
    degree..=degree * alg.class()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// Sparse fraction-free elimination.
    Sparse,
    /// Dense Bareiss elimination in reverse column order.
    Bareiss,
}

/// Rank of `∂_n` restricted to the weight-`w` block.
pub fn boundary_rank(
    alg: &FreeLie,
    degree: usize,
    weight: usize,
    method: RankMethod,
    max_block: usize,
) -> Result<usize> {
    if degree <= 1 {
        return Ok(0);
    }
    let src = basis_wedges(alg, degree, weight);
    if src.is_empty() {
        return Ok(0);
    }
    let tgt = basis_wedges(alg, degree - 1, weight);
    let size = src.len().max(tgt.len());
    if size > max_block {
        return Err(Error::Budget {
            what: format!("weight block (degree {degree}, weight {weight})"),
            needed: size,
            limit: max_block,
        });
    }
    let col: HashMap<&[usize], usize> = tgt
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let rows: Vec<Vec<(usize, i64)>> = src
        .par_iter()
        .map(|t| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (nt, c) in boundary_of_basis(alg, t) {
                *acc.entry(col[nt.as_slice()]).or_insert(0) += c;
            }
            acc.into_iter().filter(|(_, c)| *c != 0).collect()
        })
        .collect();
    Ok(match method {
        RankMethod::Sparse => sparse_rank(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|(c, v)| (c, BigInt::from(v)))
                        .collect::<SparseRow>()
                })
                .collect(),
        ),
        RankMethod::Bareiss => {
            let entries: Vec<(usize, usize, i64)> = rows
                .iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().map(move |&(c, v)| (i, c, v)))
                .collect();
            bareiss_rank(src.len(), tgt.len(), &entries)
        }
    })
}

/// Checks `∂∘∂ = 0` on every basis wedge of one weight block, with integer
/// arithmetic. Returns the number of wedges checked.
pub fn check_boundary_squared(alg: &FreeLie, degree: usize, weight: usize) -> Result<usize> {
    let src = basis_wedges(alg, degree, weight);
    let bad = src.par_iter().find_any(|t| {
        let mut acc: HashMap<Vec<usize>, i64> = HashMap::new();
        for (face, c) in boundary_of_basis(alg, t) {
            for (ff, d) in boundary_of_basis(alg, &face) {
                *acc.entry(ff).or_insert(0) += c * d;
            }
        }
        acc.values().any(|&v| v != 0)
    });
    match bad {
        Some(t) => Err(Error::NotACycle(format!("∂∂ ≠ 0 on wedge {t:?}"))),
        None => Ok(src.len()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub genus: usize,
    pub level: usize,
    /// `dim H_n` for `n = 0..=n_max`.
    pub total: Vec<usize>,
    /// `(n, weight) → dim H_{n,weight}`, zero entries omitted.
    pub by_weight: BTreeMap<usize, BTreeMap<usize, usize>>,
}

/// Dimensions of `H_n(𝔤_k; ℚ)` for `n ≤ n_max`, computed per weight block.
pub fn homology_dims(
    g: usize,
    k: usize,
    n_max: usize,
    method: RankMethod,
    max_block: usize,
) -> Result<HomologyTable> {
    if k < 2 {
        return Err(Error::Level { min: 2, got: k });
    }
    let alg = FreeLie::get(2 * g, k - 1);
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for n in 0..=n_max + 1 {
        for w in weight_span(&alg, n) {
            blocks.push((n, w));
        }
    }
    let ranks: Vec<((usize, usize), Result<(usize, usize)>)> = blocks
        .par_iter()
        .map(|&(n, w)| {
            let dim = if n == 0 {
                1
            } else {
                basis_wedges(&alg, n, w).len()
            };
            let r = if n == 0 {
                Ok(0)
            } else {
                boundary_rank(&alg, n, w, method, max_block)
            };
            ((n, w), r.map(|r| (dim, r)))
        })
        .collect();
    let mut table: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (key, r) in ranks {
        table.insert(key, r?);
    }
    let mut total = vec![0; n_max + 1];
    let mut by_weight: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for n in 0..=n_max {
        for w in weight_span(&alg, n) {
            let (dim, r_n) = table[&(n, w)];
            let r_up = table.get(&(n + 1, w)).map(|x| x.1).unwrap_or(0);
            let h = dim - r_n - r_up;
            total[n] += h;
            if h > 0 {
                by_weight.entry(n).or_default().insert(w, h);
            }
        }
    }
    Ok(HomologyTable {
        genus: g,
        level: k,
        total,
        by_weight,
    })
}

/// `dim C_3(𝔤_k) − dim B_3(𝔤_k)`.
pub fn cmodb_dim(g: usize, k: usize, max_block: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::Level { min: 2, got: k });
    }
    let alg = FreeLie::get(2 * g, k - 1);
    let weights: Vec<usize> = weight_span(&alg, 3).collect();
    let parts: Vec<Result<usize>> = weights
        .par_iter()
        .map(|&w| {
            let dim = basis_wedges(&alg, 3, w).len();
            let r = boundary_rank(&alg, 4, w, RankMethod::Sparse, max_block)?;
            Ok(dim - r)
        })
        .collect();
    parts.into_iter().sum()
}

/// Whether a degree-2 basis wedge of the class-`k` algebra lies in
/// `𝔤^{(1)} ∧ 𝔩`: one factor of top weight `k`, the other of weight `≥ 2`.
fn in_commutator_wedge_center(alg: &FreeLie, t: &[usize]) -> bool {
    let top = alg.class();
    let (wa, wb) = (alg.weight(t[0]), alg.weight(t[1]));
    (wa == top && wb >= 2) || (wb == top && wa >= 2)
}

/// Canonical representative of a class in `C_2(𝔤_{k+1}) / (𝔤^{(1)} ∧ 𝔩)`:
/// the subspace is spanned by basis wedges, so reduction drops them.
pub fn reduce_mod_gl(alg_up: &FreeLie, chain: &WedgeChain) -> WedgeChain {
    assert_eq!(chain.degree, 2);
    WedgeChain {
        class: chain.class,
        degree: 2,
        terms: chain
            .terms
            .iter()
            .filter(|(t, _)| !in_commutator_wedge_center(alg_up, t))
            .map(|(t, x)| (t.clone(), x.clone()))
            .collect(),
    }
}

/// `d̃²[c] = ∂c̃ + 𝔤^{(1)} ∧ 𝔩` for a 3-chain `c` of `𝔤_k` (class `k-1`)
/// on `n` generators. The lift uses the shared Lyndon indices.
pub fn extended_differential(n: usize, chain: &WedgeChain) -> Result<WedgeChain> {
    if chain.degree != 3 {
        return Err(Error::Config(format!(
            "extended differential takes 3-chains, got degree {}",
            chain.degree
        )));
    }
    let up = FreeLie::get(n, chain.class + 1);
    let lifted = chain.lift(chain.class + 1);
    Ok(reduce_mod_gl(&up, &ce_boundary(&up, &lifted)?))
}

/// An element of `H ⊗ L_{k+1}`: `Σ_i x_i ⊗ rows[i]`, each row a weight-`k`
/// element of the class-`k` algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTensor {
    pub genus: usize,
    pub level: usize,
    pub rows: Vec<LieElement>,
}

impl HTensor {
    pub fn zero(genus: usize, level: usize) -> Self {
        HTensor {
            genus,
            level,
            rows: vec![LieElement::zero(level); 2 * genus],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn add(&self, other: &HTensor) -> HTensor {
        HTensor {
            genus: self.genus,
            level: self.level,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> HTensor {
        HTensor {
            genus: self.genus,
            level: self.level,
            rows: self.rows.iter().map(|r| r.scale(s)).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.is_integral())
    }

    /// Adds `h ⊗ λ` for an integer vector `h ∈ H`.
    pub fn add_outer(&mut self, h: &[i64], lambda: &LieElement, coeff: i64) {
        for (i, &hi) in h.iter().enumerate() {
            if hi != 0 {
                self.rows[i] = self.rows[i].add(&lambda.scale(&q(hi * coeff)));
            }
        }
    }
}

/// Reads a reduced 2-chain of the class-`k` algebra (genus `g`) as an
/// element of `H ⊗ L_{k+1}`. Surviving terms must pair a generator with a
/// top-weight element.
pub fn read_h_tensor_l(alg_up: &FreeLie, g: usize, chain: &WedgeChain) -> Result<HTensor> {
    let top = alg_up.class();
    let mut out = HTensor::zero(g, top);
    for (t, x) in chain.terms() {
        let (wa, wb) = (alg_up.weight(t[0]), alg_up.weight(t[1]));
        if wa != 1 || wb != top {
            return Err(Error::OutsideTensor(format!(
                "{} ∧ {}",
                alg_up.label(t[0]),
                alg_up.label(t[1])
            )));
        }
        out.rows[t[0]] = out.rows[t[0]].add(&LieElement::from_terms(top, [(t[1], x.clone())]));
    }
    Ok(out)
}

/// Wedge extension of a linear map on `𝔤` to `Λⁿ𝔤`.
pub fn act(m: &QMatrix, chain: &WedgeChain) -> WedgeChain {
    let columns: Vec<Vec<(usize, Q)>> = (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter(|&i| !m[(i, j)].is_zero())
                .map(|i| (i, m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut out = WedgeChain::zero(chain.class, chain.degree);
    for (t, x) in chain.terms() {
        let factors: Vec<LieElement> = t
            .iter()
            .map(|&i| LieElement::from_terms(chain.class, columns[i].iter().cloned()))
            .collect();
        out = out.add(&WedgeChain::wedge(chain.class, &factors).scale(x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::malcev::Nilpotent;
    use crate::word::catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_chain(
        alg: &FreeLie,
        degree: usize,
        terms: usize,
        rng: &mut ChaCha8Rng,
    ) -> WedgeChain {
        WedgeChain::from_terms(
            alg.class(),
            degree,
            (0..terms).map(|_| {
                let t: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..alg.dim())).collect();
                (t, q(rng.gen_range(-3..=3)))
            }),
        )
    }

    #[test]
    fn two_wedge_boundary_is_bracket() {
        let alg = FreeLie::get(4, 3);
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let c = WedgeChain::from_terms(3, 2, [(vec![i, j], q(1))]);
                let d = ce_boundary(&alg, &c).unwrap();
                let br = alg
                    .bracket(&alg.basis_element(i), &alg.basis_element(j))
                    .unwrap();
                let expect =
                    WedgeChain::from_terms(3, 1, br.terms().map(|(k, x)| (vec![k], x.clone())));
                assert_eq!(d, expect);
            }
        }
    }

    #[test]
    fn abelian_boundary_vanishes() {
        let alg = FreeLie::get(4, 1);
        let c = WedgeChain::from_terms(1, 3, [(vec![0, 1, 2], q(2)), (vec![1, 2, 3], q(-1))]);
        assert!(ce_boundary(&alg, &c).unwrap().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero_on_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for class in 2..=4 {
            let alg = FreeLie::get(4, class);
            for degree in 2..=4 {
                let c = random_chain(&alg, degree, 6, &mut rng);
                let dd = ce_boundary(&alg, &ce_boundary(&alg, &c).unwrap()).unwrap();
                assert!(dd.is_zero(), "class {class} degree {degree}");
            }
        }
        let alg = FreeLie::get(3, 3);
        let c = WedgeChain::from_terms(3, 3, [(vec![0, 1, 2], q(1))]);
        assert!(ce_boundary(&alg, &ce_boundary(&alg, &c).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn abelian_homology_is_binomial() {
        let t = homology_dims(2, 2, 4, RankMethod::Sparse, 1 << 20).unwrap();
        assert_eq!(t.total, vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn second_homology_is_next_graded_piece() {
        // Hopf: H_2 of the free nilpotent algebra of class c is L_{c+1}.
        for (k, method) in [
            (3, RankMethod::Sparse),
            (3, RankMethod::Bareiss),
            (4, RankMethod::Sparse),
        ] {
            let t = homology_dims(2, k, 2, method, 1 << 20).unwrap();
            assert_eq!(t.total[0], 1);
            assert_eq!(t.total[1], 4);
            let next = crate::hall::hall_dims(4, k)[k - 1];
            assert_eq!(t.total[2], next);
            assert_eq!(t.by_weight[&2], BTreeMap::from([(k, next)]));
        }
    }

    #[test]
    fn elimination_methods_agree() {
        let a = homology_dims(2, 3, 3, RankMethod::Sparse, 1 << 20).unwrap();
        let b = homology_dims(2, 3, 3, RankMethod::Bareiss, 1 << 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            homology_dims(3, 4, 4, RankMethod::Sparse, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn cmodb_of_abelian_is_full() {
        assert_eq!(cmodb_dim(2, 2, 1 << 20).unwrap(), 4);
    }

    #[test]
    fn extended_differential_of_generators() {
        let c = WedgeChain::from_terms(1, 3, [(vec![0, 1, 2], q(1))]);
        let d = extended_differential(4, &c).unwrap();
        let up = FreeLie::get(4, 2);
        let br = |i: usize, j: usize| {
            let x = up.bracket(&up.generator(i), &up.generator(j)).unwrap();
            assert_eq!(x.terms().count(), 1);
            let (k, c) = x.terms().next().unwrap();
            (k, c.clone())
        };
        let (k01, c01) = br(0, 1);
        let (k02, c02) = br(0, 2);
        let (k12, c12) = br(1, 2);
        let expect = WedgeChain::from_terms(
            2,
            2,
            [
                (vec![k01, 2], c01),
                (vec![k02, 1], -c02),
                (vec![k12, 0], c12),
            ],
        );
        assert_eq!(d, expect);
        let t = read_h_tensor_l(&up, 2, &d).unwrap();
        assert_eq!(t.rows[2], LieElement::from_terms(2, [(k01, q(-1))]));
        assert_eq!(t.rows[1], LieElement::from_terms(2, [(k02, q(1))]));
        assert_eq!(t.rows[0], LieElement::from_terms(2, [(k12, q(-1))]));
        assert!(extended_differential(4, &WedgeChain::zero(1, 3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn read_rejects_terms_outside_tensor() {
        let up = FreeLie::get(4, 3);
        let w2 = up.weight_range(2);
        let c = WedgeChain::from_terms(3, 2, [(vec![w2.start, w2.start + 1], q(1))]);
        assert!(matches!(
            read_h_tensor_l(&up, 2, &c),
            Err(Error::OutsideTensor(_))
        ));
        assert!(read_h_tensor_l(&up, 2, &WedgeChain::zero(3, 2))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn extended_differential_kills_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for class in 1..=2 {
            let alg = FreeLie::get(4, class);
            for _ in 0..20 {
                let w = random_chain(&alg, 4, 4, &mut rng);
                let b = ce_boundary(&alg, &w).unwrap();
                assert!(extended_differential(4, &b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_of_projection_lands_in_commutator_wedge_center() {
        let up = FreeLie::get(4, 3);
        for w in 3..=9 {
            for t in basis_wedges(&up, 3, w) {
                if t.iter().all(|&i| up.weight(i) < 3) {
                    continue;
                }
                let d = ce_boundary(&up, &WedgeChain::from_terms(3, 3, [(t, q(1))])).unwrap();
                assert!(reduce_mod_gl(&up, &d).is_zero());
            }
        }
    }

    #[test]
    fn action_is_functorial_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cat = catalog(2).unwrap();
        for k in 2..=3 {
            let nil = Nilpotent::get(2, k).unwrap();
            let nil_up = Nilpotent::get(2, k + 1).unwrap();
            let alg = nil.algebra().clone();
            let up = nil_up.algebra().clone();
            for (_, phi) in &cat {
                let m = nil.induced_lie_auto(phi);
                let m_up = nil_up.induced_lie_auto(phi);
                for _ in 0..3 {
                    let c = random_chain(&alg, 3, 5, &mut rng);
                    let lhs = extended_differential(4, &act(&m, &c)).unwrap();
                    let rhs =
                        reduce_mod_gl(&up, &act(&m_up, &extended_differential(4, &c).unwrap()));
                    assert_eq!(lhs, rhs);
                }
            }
            let (phi, psi) = (&cat[0].1, &cat[2].1);
            let c = random_chain(&alg, 3, 5, &mut rng);
            let composed = act(&nil.induced_lie_auto(&phi.mul(psi)), &c);
            let stepwise = act(
                &nil.induced_lie_auto(phi),
                &act(&nil.induced_lie_auto(psi), &c),
            );
            assert_eq!(composed, stepwise);
            assert_eq!(act(&QMatrix::identity(alg.dim()), &c), c);
        }
    }
}
