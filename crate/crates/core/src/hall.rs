//! Free nilpotent Lie algebras over ℚ in the Lyndon basis.
//!
//! Basis elements are Lyndon words over the generator alphabet, bracketed by
//! the standard factorization, and ordered by length then lexicographically.
//! Structure constants are integers and are computed once per `(n, class)`
//! by expanding brackets in the free associative algebra and peeling off
//! the lexicographically smallest word (`P(w) = w + larger words`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::word::Generator;

/// Lyndon words of length `1..=max_len` over `n` letters, in lexicographic
/// order (Duval's generation).
pub fn lyndon_words(n: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == n - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Per-weight dimensions `[d_1, …, d_c]` of the free Lie algebra on `n`
/// generators.
pub fn hall_dims(n: usize, class: usize) -> Vec<usize> {
    let mut dims = vec![0; class];
    for w in lyndon_words(n, class) {
        dims[w.len() - 1] += 1;
    }
    dims
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// A basis element: a Lyndon word together with its standard bracketing.
#[derive(Clone, Debug)]
pub struct HallElement {
    pub word: Vec<u8>,
    pub weight: usize,
    /// Basis indices of the standard factors, `None` for generators.
    pub factors: Option<(usize, usize)>,
}

/// A truncated free Lie algebra: the Lyndon basis of weights `≤ class` on
/// `n` generators and its integer structure constants.
pub struct FreeLie {
    n: usize,
    class: usize,
    elements: Vec<HallElement>,
    index_of: HashMap<Vec<u8>, usize>,
    weight_start: Vec<usize>,
    polys: Vec<Vec<(Vec<u8>, i64)>>,
    brackets: HashMap<(u32, u32), Vec<(u32, i64)>>,
}

static ALGEBRAS: LazyLock<DashMap<(usize, usize), Arc<FreeLie>>> = LazyLock::new(DashMap::new);

impl fmt::Debug for FreeLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FreeLie(n={}, class={}, dim={})",
            self.n,
            self.class,
            self.dim()
        )
    }
}

fn mul_polys(
    a: &[(Vec<u8>, i64)],
    b: &[(Vec<u8>, i64)],
    sign: i64,
    acc: &mut HashMap<Vec<u8>, i64>,
) {
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            *acc.entry(w).or_insert(0) += sign * x * y;
        }
    }
}

impl FreeLie {
    /// Shared instance for `(n, class)`.
    pub fn get(n: usize, class: usize) -> Arc<FreeLie> {
        if let Some(a) = ALGEBRAS.get(&(n, class)) {
            return a.clone();
        }
        let alg = Arc::new(FreeLie::build(n, class));
        ALGEBRAS.entry((n, class)).or_insert(alg).clone()
    }

    fn build(n: usize, class: usize) -> FreeLie {
        let mut words = lyndon_words(n, class);
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index_of: HashMap<Vec<u8>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut elements = Vec::with_capacity(words.len());
        let mut polys: Vec<Vec<(Vec<u8>, i64)>> = Vec::with_capacity(words.len());
        for w in &words {
            let factors = (w.len() > 1).then(|| {
                let split = (1..w.len())
                    .find(|&i| is_lyndon(&w[i..]))
                    .expect("proper Lyndon suffix exists");
                (index_of[&w[..split]], index_of[&w[split..]])
            });
            let poly = match factors {
                None => vec![(w.clone(), 1)],
                Some((u, v)) => {
                    let mut acc = HashMap::new();
                    mul_polys(&polys[u], &polys[v], 1, &mut acc);
                    mul_polys(&polys[v], &polys[u], -1, &mut acc);
                    let mut p: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
                    p.sort();
                    p
                }
            };
            polys.push(poly);
            elements.push(HallElement {
                word: w.clone(),
                weight: w.len(),
                factors,
            });
        }
        let mut weight_start = vec![0; class + 2];
        for wt in 1..=class + 1 {
            weight_start[wt] = elements.iter().take_while(|e| e.weight < wt).count();
        }
        let mut alg = FreeLie {
            n,
            class,
            elements,
            index_of,
            weight_start,
            polys,
            brackets: HashMap::new(),
        };
        let dim = alg.dim();
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| alg.elements[i].weight + alg.elements[j].weight <= class)
            .collect();
        let table: Vec<((u32, u32), Vec<(u32, i64)>)> = pairs
            .par_iter()
            .map(|&(i, j)| ((i as u32, j as u32), alg.expand_bracket(i, j)))
            .collect();
        alg.brackets = table.into_iter().collect();
        alg
    }

    fn expand_bracket(&self, i: usize, j: usize) -> Vec<(u32, i64)> {
        let mut acc = HashMap::new();
        mul_polys(&self.polys[i], &self.polys[j], 1, &mut acc);
        mul_polys(&self.polys[j], &self.polys[i], -1, &mut acc);
        acc.retain(|_, c| *c != 0);
        let wt = self.elements[i].weight + self.elements[j].weight;
        let mut out = Vec::new();
        for idx in self.weight_range(wt) {
            let Some(c) = acc.get(&self.elements[idx].word).copied() else {
                continue;
            };
            out.push((idx as u32, c));
            for (w, p) in &self.polys[idx] {
                let e = acc.entry(w.clone()).or_insert(0);
                *e -= c * p;
                if *e == 0 {
                    acc.remove(w);
                }
            }
        }
        assert!(acc.is_empty(), "bracket did not lie in the Lie span");
        out
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &HallElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[HallElement] {
        &self.elements
    }

    pub fn weight(&self, i: usize) -> usize {
        self.elements[i].weight
    }

    /// Basis indices of weight exactly `w` (empty above the class).
    pub fn weight_range(&self, w: usize) -> std::ops::Range<usize> {
        if w == 0 || w > self.class {
            return 0..0;
        }
        self.weight_start[w]..self.weight_start[w + 1]
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.class)
            .map(|w| self.weight_range(w).len())
            .collect()
    }

    pub fn index_of_word(&self, w: &[u8]) -> Option<usize> {
        self.index_of.get(w).copied()
    }

    /// Expansion of the basis element in the free associative algebra.
    pub fn poly(&self, i: usize) -> &[(Vec<u8>, i64)] {
        &self.polys[i]
    }

    /// Structure constants of `[h_i, h_j]`; empty when truncated or trivial.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        use std::cmp::Ordering::*;
        let (a, b, sign) = match i.cmp(&j) {
            Equal => return Vec::new(),
            Less => (i, j, 1),
            Greater => (j, i, -1),
        };
        match self.brackets.get(&(a as u32, b as u32)) {
            Some(v) => v.iter().map(|&(k, c)| (k as usize, sign * c)).collect(),
            None => Vec::new(),
        }
    }

    /// Human-readable bracket label, e.g. `[[a1,b1],b1]`.
    pub fn label(&self, i: usize) -> String {
        let e = &self.elements[i];
        match e.factors {
            None => Generator::from_index(e.word[0] as usize).name(),
            Some((u, v)) => format!("[{},{}]", self.label(u), self.label(v)),
        }
    }

    pub fn labels(&self, range: std::ops::Range<usize>) -> Vec<String> {
        range.map(|i| self.label(i)).collect()
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        LieElement::basis(self.class, i)
    }

    pub fn generator(&self, gen: usize) -> LieElement {
        LieElement::basis(self.class, gen)
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        if x.class != y.class {
            return Err(Error::ClassMismatch(x.class, y.class));
        }
        if x.class != self.class {
            return Err(Error::ClassMismatch(x.class, self.class));
        }
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (&i, a) in &x.coeffs {
            for (&j, b) in &y.coeffs {
                if self.weight(i) + self.weight(j) > self.class {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.bracket_basis(i, j) {
                    *acc.entry(k).or_insert_with(Q::zero) += &ab * q(c);
                }
            }
        }
        Ok(LieElement::from_map(self.class, acc))
    }

    /// Bracket of a basis-tree over arbitrary leaf values: evaluates `h_i`
    /// with the generators replaced by `leaves[g]`.
    pub fn evaluate_basis(&self, leaves: &[LieElement]) -> Result<Vec<LieElement>> {
        let mut out: Vec<LieElement> = Vec::with_capacity(self.dim());
        for e in &self.elements {
            let v = match e.factors {
                None => leaves[e.word[0] as usize].clone(),
                Some((u, v)) => self.bracket(&out[u], &out[v])?,
            };
            out.push(v);
        }
        Ok(out)
    }

    /// The projection dropping weights above `class`, expressed in the
    /// algebra of that class (indices coincide).
    pub fn truncate(&self, x: &LieElement, class: usize) -> LieElement {
        let coeffs = x
            .coeffs
            .iter()
            .filter(|(i, _)| self.weight(**i) <= class)
            .map(|(i, c)| (*i, c.clone()))
            .collect();
        LieElement { class, coeffs }
    }
}

/// A rational combination of Lyndon basis elements of weight at most `class`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieElement {
    class: usize,
    coeffs: BTreeMap<usize, Q>,
}

impl LieElement {
    pub fn zero(class: usize) -> Self {
        LieElement {
            class,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(class: usize, i: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, Q::one());
        LieElement { class, coeffs }
    }

    pub fn from_map(class: usize, mut coeffs: BTreeMap<usize, Q>) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        LieElement { class, coeffs }
    }

    pub fn from_terms(class: usize, terms: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut m: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in terms {
            *m.entry(i).or_insert_with(Q::zero) += c;
        }
        LieElement::from_map(class, m)
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn with_class(mut self, class: usize) -> Self {
        self.class = class;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut m = self.coeffs.clone();
        for (i, c) in &other.coeffs {
            *m.entry(*i).or_insert_with(Q::zero) += c;
        }
        LieElement::from_map(self.class.max(other.class), m)
    }

    pub fn neg(&self) -> LieElement {
        LieElement {
            class: self.class,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Q) -> LieElement {
        LieElement::from_map(
            self.class,
            self.coeffs.iter().map(|(i, c)| (*i, c * s)).collect(),
        )
    }

    /// Homogeneous part of weight `w`.
    pub fn weight_part(&self, alg: &FreeLie, w: usize) -> LieElement {
        LieElement {
            class: self.class,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| alg.weight(**i) == w)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Dense coefficient vector over the given index range.
    pub fn dense(&self, range: std::ops::Range<usize>) -> Vec<Q> {
        range.map(|i| self.coeff(i)).collect()
    }
}
