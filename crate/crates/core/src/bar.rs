//! Normalized bar chains over the free group on the surface generators and
//! over `Γ_k`, the fundamental 2-chain, bounding of 2-cycles by comparison
//! with the free resolution, and the cap-product form of `d²`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::LazyLock;

use dashmap::DashMap;
use serde_json::{json, Value};

use crate::ce::HTensor;
use crate::error::{Error, Result};
use crate::malcev::{Nilpotent, NormalForm};
use crate::word::{boundary_word, Generator, Letter, MappingClass, Word};

/// Group elements usable as bar labels.
pub trait Label: Clone + Ord + Debug + Send + Sync {
    fn is_trivial(&self) -> bool;
    fn to_json(&self) -> Value;
}

impl Label for Word {
    fn is_trivial(&self) -> bool {
        self.is_identity()
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Label for NormalForm {
    fn is_trivial(&self) -> bool {
        self.is_identity()
    }

    fn to_json(&self) -> Value {
        json!(self.0)
    }
}

/// Multiplication for a label type.
pub trait Group {
    type Elem: Label;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// The free group on `a1, b1, …`, which surjects onto the surface group.
pub struct FreeGroup;

impl Group for FreeGroup {
    type Elem = Word;
    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.mul(b)
    }
}

impl Group for Nilpotent {
    type Elem = NormalForm;
    fn mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        self.nf_mul(a, b)
    }
}

/// Integer combination of bar simplices `[g1|…|gn]` without identity
/// entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain<L: Label> {
    degree: usize,
    terms: BTreeMap<Vec<L>, i64>,
}

impl<L: Label> BarChain<L> {
    pub fn zero(degree: usize) -> Self {
        BarChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<L>, i64)>) -> Self {
        let mut c = BarChain::zero(degree);
        for (t, n) in terms {
            c.add_term(t, n);
        }
        c
    }

    pub fn simplex(labels: Vec<L>) -> Self {
        BarChain::from_terms(labels.len(), [(labels, 1)])
    }

    pub fn add_term(&mut self, labels: Vec<L>, coeff: i64) {
        assert_eq!(labels.len(), self.degree, "inhomogeneous bar chain");
        if coeff == 0 || labels.iter().any(|l| l.is_trivial()) {
            return;
        }
        let e = self.terms.entry(labels);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<L>, i64)> {
        self.terms.iter().map(|(t, &n)| (t, n))
    }

    pub fn add(&self, other: &BarChain<L>) -> BarChain<L> {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &BarChain<L>) -> BarChain<L> {
        self.add_scaled(other, -1)
    }

    pub fn add_scaled(&self, other: &BarChain<L>, s: i64) -> BarChain<L> {
        let mut out = self.clone();
        for (t, n) in other.terms() {
            out.add_term(t.clone(), s * n);
        }
        out
    }

    pub fn scale(&self, s: i64) -> BarChain<L> {
        BarChain::from_terms(self.degree, self.terms().map(|(t, n)| (t.clone(), s * n)))
    }

    /// Entrywise image under a map of groups.
    pub fn map<M: Label>(&self, f: impl Fn(&L) -> M) -> BarChain<M> {
        BarChain::from_terms(
            self.degree,
            self.terms().map(|(t, n)| (t.iter().map(&f).collect(), n)),
        )
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(t, n)| {
                    json!({
                        "coeff": n,
                        "labels": t.iter().map(Label::to_json).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

/// Alternating face sum; middle faces multiply neighbouring entries.
pub fn bar_boundary<G: Group>(group: &G, chain: &BarChain<G::Elem>) -> BarChain<G::Elem> {
    let n = chain.degree;
    assert!(n >= 1, "boundary needs degree ≥ 1");
    let mut out = BarChain::zero(n - 1);
    for (t, c) in chain.terms() {
        out.add_term(t[1..].to_vec(), c);
        for i in 1..n {
            let mut face = Vec::with_capacity(n - 1);
            face.extend_from_slice(&t[..i - 1]);
            face.push(group.mul(&t[i - 1], &t[i]));
            face.extend_from_slice(&t[i + 1..]);
            out.add_term(face, if i % 2 == 0 { c } else { -c });
        }
        out.add_term(t[..n - 1].to_vec(), if n % 2 == 0 { c } else { -c });
    }
    out
}

/// `Σ_{i<m} [y1…yi | y_{i+1}]` over the letters of `w`.
pub fn staircase(w: &Word) -> BarChain<Word> {
    let letters = w.letters();
    let mut out = BarChain::zero(2);
    for i in 1..letters.len() {
        out.add_term(
            vec![
                Word::new(letters[..i].iter().copied()),
                Word::new([letters[i]]),
            ],
            1,
        );
    }
    out
}

/// The fundamental 2-chain `C` with `∂C = −[ℓ]`.
pub fn fundamental_two_chain(g: usize) -> Result<BarChain<Word>> {
    let mut c = staircase(&boundary_word(g)?);
    for x in Generator::all(g) {
        let w = Word::gen(x);
        c.add_term(vec![w.clone(), w.inv()], -1);
    }
    Ok(c)
}

/// An element of `ℤπ`.
pub type GroupRing = BTreeMap<Word, i64>;

fn ring_add(r: &mut GroupRing, w: Word, n: i64) {
    let e = r.entry(w.clone()).or_insert(0);
    *e += n;
    if *e == 0 {
        r.remove(&w);
    }
}

/// Fox derivative `∂w/∂x`.
pub fn fox_derivative(w: &Word, x: Generator) -> GroupRing {
    let mut out = GroupRing::new();
    let letters = w.letters();
    for (i, l) in letters.iter().enumerate() {
        if l.gen != x {
            continue;
        }
        if l.inverse {
            ring_add(&mut out, Word::new(letters[..=i].iter().copied()), -1);
        } else {
            ring_add(&mut out, Word::new(letters[..i].iter().copied()), 1);
        }
    }
    out
}

/// Element of the bar resolution: `Σ n · g[g1|…|gn]`, a free `ℤπ`-module
/// on normalized simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionElement {
    degree: usize,
    terms: BTreeMap<(Word, Vec<Word>), i64>,
}

impl ResolutionElement {
    pub fn zero(degree: usize) -> Self {
        ResolutionElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Word, Vec<Word>, i64)>,
    ) -> Self {
        let mut r = ResolutionElement::zero(degree);
        for (g, t, n) in terms {
            r.add_term(g, t, n);
        }
        r
    }

    pub fn add_term(&mut self, g: Word, simplex: Vec<Word>, n: i64) {
        assert_eq!(simplex.len(), self.degree);
        if n == 0 || simplex.iter().any(|x| x.is_identity()) {
            return;
        }
        let key = (g, simplex);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Vec<Word>, i64)> {
        self.terms.iter().map(|((g, t), &n)| (g, t, n))
    }

    pub fn add_scaled(&self, other: &ResolutionElement, s: i64) -> ResolutionElement {
        let mut out = self.clone();
        for (g, t, n) in other.terms() {
            out.add_term(g.clone(), t.clone(), s * n);
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn translate(&self, g: &Word) -> ResolutionElement {
        ResolutionElement::from_terms(
            self.degree,
            self.terms().map(|(h, t, n)| (g.mul(h), t.clone(), n)),
        )
    }

    /// Image in the coinvariants `ℤ ⊗_{ℤπ} B`, i.e. bar chains.
    pub fn coinvariants(&self) -> BarChain<Word> {
        BarChain::from_terms(self.degree, self.terms().map(|(_, t, n)| (t.clone(), n)))
    }

    /// `ℤπ`-linear resolution boundary.
    pub fn boundary(&self) -> ResolutionElement {
        let n = self.degree;
        assert!(n >= 1);
        let mut out = ResolutionElement::zero(n - 1);
        for (g, t, c) in self.terms() {
            out.add_term(g.mul(&t[0]), t[1..].to_vec(), c);
            for i in 1..n {
                let mut face = t[..i - 1].to_vec();
                face.push(t[i - 1].mul(&t[i]));
                face.extend_from_slice(&t[i + 1..]);
                out.add_term(g.clone(), face, if i % 2 == 0 { c } else { -c });
            }
            out.add_term(
                g.clone(),
                t[..n - 1].to_vec(),
                if n % 2 == 0 { c } else { -c },
            );
        }
        out
    }

    /// Contracting homotopy `g[σ] ↦ [g|σ]`; `ℤ`-linear only.
    pub fn contract(&self) -> ResolutionElement {
        ResolutionElement::from_terms(
            self.degree + 1,
            self.terms().map(|(g, t, n)| {
                let mut s = Vec::with_capacity(t.len() + 1);
                s.push(g.clone());
                s.extend_from_slice(t);
                (Word::identity(), s, n)
            }),
        )
    }

    /// `ι∘ρ`: through the rank-`2g` free resolution, which has nothing in
    /// degrees `≥ 2`.
    pub fn iota_rho(&self, genus: usize) -> ResolutionElement {
        match self.degree {
            0 => self.clone(),
            1 => {
                let mut out = ResolutionElement::zero(1);
                for (g, t, n) in self.terms() {
                    for y in Generator::all(genus) {
                        for (h, m) in fox_derivative(&t[0], y) {
                            out.add_term(g.mul(&h), vec![Word::gen(y)], n * m);
                        }
                    }
                }
                out
            }
            d => ResolutionElement::zero(d),
        }
    }

    /// Comparison homotopy with `∂u + u∂ = ιρ − id`.
    pub fn homotopy(&self, genus: usize) -> ResolutionElement {
        let mut out = ResolutionElement::zero(self.degree + 1);
        for (g, t, n) in self.terms() {
            let u = basis_homotopy(genus, t);
            out = out.add_scaled(&u.translate(g), n);
        }
        out
    }
}

static HOMOTOPY_MEMO: LazyLock<DashMap<(usize, Vec<Word>), ResolutionElement>> =
    LazyLock::new(DashMap::new);

/// `u(e[σ]) = h(ιρ[σ] − [σ] − u∂[σ])`, memoized.
fn basis_homotopy(genus: usize, simplex: &[Word]) -> ResolutionElement {
    let key = (genus, simplex.to_vec());
    if let Some(x) = HOMOTOPY_MEMO.get(&key) {
        return x.clone();
    }
    let basis =
        ResolutionElement::from_terms(simplex.len(), [(Word::identity(), simplex.to_vec(), 1)]);
    let mut inner = basis.iota_rho(genus).add_scaled(&basis, -1);
    if !simplex.is_empty() {
        inner = inner.add_scaled(&basis.boundary().homotopy(genus), -1);
    }
    let u = inner.contract();
    HOMOTOPY_MEMO.insert(key, u.clone());
    u
}

fn generators_in(chain: &BarChain<Word>) -> usize {
    chain
        .terms()
        .flat_map(|(t, _)| t.iter())
        .filter_map(|w| w.max_generator())
        .map(|x| x.handle())
        .max()
        .unwrap_or(1)
}

/// A 3-chain `D` with `∂D = z` for a 2-cycle `z` of the free group.
pub fn bound_two_cycle(z: &BarChain<Word>) -> Result<BarChain<Word>> {
    if z.degree != 2 {
        return Err(Error::NotACycle(format!(
            "expected a 2-chain, got degree {}",
            z.degree
        )));
    }
    if !bar_boundary(&FreeGroup, z).is_zero() {
        return Err(Error::NotACycle("∂z ≠ 0".to_string()));
    }
    let genus = generators_in(z);
    let lifted =
        ResolutionElement::from_terms(2, z.terms().map(|(t, n)| (Word::identity(), t.clone(), n)));
    Ok(lifted.homotopy(genus).coinvariants().scale(-1))
}

/// `C_*(π) → C_*(Γ_k)`.
pub fn push(nil: &Nilpotent, chain: &BarChain<Word>) -> BarChain<NormalForm> {
    chain.map(|w| nil.word_normal_form(w))
}

/// Entrywise action of a mapping class.
pub fn act_on_chain(phi: &MappingClass, chain: &BarChain<Word>) -> BarChain<Word> {
    chain.map(|w| phi.apply(w))
}

/// `Σ_{σ∈S₃} sgn(σ)[σx|σy|σz]`.
pub fn antisym_cycle(x: &NormalForm, y: &NormalForm, z: &NormalForm) -> BarChain<NormalForm> {
    let v = [x, y, z];
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([1, 0, 2], -1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
    ];
    BarChain::from_terms(
        3,
        perms
            .iter()
            .map(|(p, s)| (p.iter().map(|&i| v[i].clone()).collect(), *s)),
    )
}

/// `ε · Σ n [g1|g2|g3] ↦ ab(g1) ⊗ c(g2,g3)` for a 3-cycle of `Γ_k`.
pub fn cap_d2(nil: &Nilpotent, z: &BarChain<NormalForm>, eps: i64) -> Result<HTensor> {
    if z.degree != 3 {
        return Err(Error::NotACycle(format!(
            "expected a 3-chain, got degree {}",
            z.degree
        )));
    }
    if !bar_boundary(nil, z).is_zero() {
        return Err(Error::NotACycle("∂z ≠ 0".to_string()));
    }
    let mut out = HTensor::zero(nil.genus(), nil.level());
    for (t, n) in z.terms() {
        let h = nil.abelianize(&t[0]);
        if h.iter().all(|&x| x == 0) {
            continue;
        }
        let c = nil.cocycle_nf(&t[1], &t[2])?;
        out.add_outer(&h, &c, eps * n);
    }
    Ok(out)
}

/// Letter-by-letter word of an exponent vector, for building words from
/// abelian data.
pub fn word_of_exponents(e: &[i64]) -> Word {
    Word::new(e.iter().enumerate().flat_map(|(i, &n)| {
        let l = Letter::pos(Generator::from_index(i));
        let l = if n < 0 { l.inv() } else { l };
        std::iter::repeat(l).take(n.unsigned_abs() as usize)
    }))
}
