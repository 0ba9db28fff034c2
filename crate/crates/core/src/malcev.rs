//! Arithmetic in the nilpotent truncations `Γ_k = π/π^{(k-1)}` through their
//! rational Mal'cev completions.
//!
//! Elements are stored by log coordinates in the Lyndon basis of the free Lie
//! algebra of class `k-1` (first kind). The integral [`NormalForm`] collects
//! exponents `g = ∏ u_i^{e_i}` in basis order over the basic group
//! commutators `u_{[l,r]} = [u_l, u_r]` (second kind). Products are computed with group-like series in the
//! truncated tensor algebra.

use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hall::{FreeLie, LieElement};
use crate::linalg::QMatrix;
use crate::rational::{fmt_q, q, to_i64, Q};
use crate::tensor::TensorSeries;
use crate::word::{Generator, MappingClass, Word};

/// Truncated Baker–Campbell–Hausdorff product `log(exp x · exp y)`.
pub fn bch(alg: &FreeLie, x: &LieElement, y: &LieElement) -> LieElement {
    let ex = TensorSeries::from_lie(alg, x).exp();
    let ey = TensorSeries::from_lie(alg, y).exp();
    ex.mul(&ey)
        .log()
        .to_lie(alg)
        .expect("log of a group-like series is a Lie series")
}

/// An element of `Γ_k` (or its completion) by log coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NilElement {
    pub level: usize,
    pub log: LieElement,
}

/// Collected exponents over the Lyndon basis of weights `≤ k-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(pub Vec<i64>);

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }
}

/// `Γ_k` for a fixed genus: the class `k-1` Lie algebra and cached data.
pub struct Nilpotent {
    genus: usize,
    level: usize,
    alg: Arc<FreeLie>,
    /// `L_i^m / m!` with `L_i = log u_i`, for `1 ≤ m ≤ class / weight`.
    basis_powers: Vec<Vec<TensorSeries>>,
    generator_exp: Vec<(TensorSeries, TensorSeries)>,
    word_cache: DashMap<Word, Arc<(NilElement, NormalForm)>>,
    nf_cache: DashMap<NormalForm, Arc<TensorSeries>>,
}

static GROUPS: LazyLock<DashMap<(usize, usize), Arc<Nilpotent>>> = LazyLock::new(DashMap::new);

impl std::fmt::Debug for Nilpotent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Nilpotent(g={}, k={})", self.genus, self.level)
    }
}

impl Nilpotent {
    /// Shared instance of `Γ_k` for genus `g`; requires `k ≥ 2`.
    pub fn get(g: usize, k: usize) -> Result<Arc<Nilpotent>> {
        if g == 0 {
            return Err(Error::Genus { min: 1, got: g });
        }
        if k < 2 {
            return Err(Error::Level { min: 2, got: k });
        }
        if let Some(x) = GROUPS.get(&(g, k)) {
            return Ok(x.clone());
        }
        let built = Arc::new(Nilpotent::build(g, k));
        Ok(GROUPS.entry((g, k)).or_insert(built).clone())
    }

    fn build(g: usize, k: usize) -> Nilpotent {
        let class = k - 1;
        let alg = FreeLie::get(2 * g, class);
        let generator_exp: Vec<(TensorSeries, TensorSeries)> = (0..2 * g)
            .map(|i| {
                let x = TensorSeries::from_lie(&alg, &alg.generator(i));
                (x.exp(), x.scale(&q(-1)).exp())
            })
            .collect();
        let mut basic: Vec<(TensorSeries, TensorSeries)> = Vec::with_capacity(alg.dim());
        for i in 0..alg.dim() {
            let u = match alg.element(i).factors {
                None => generator_exp[i].clone(),
                Some((l, r)) => {
                    let (ul, ul_inv) = &basic[l];
                    let (ur, ur_inv) = &basic[r];
                    (
                        ul.mul(ur).mul(ul_inv).mul(ur_inv),
                        ur.mul(ul).mul(ur_inv).mul(ul_inv),
                    )
                }
            };
            basic.push(u);
        }
        let basis_powers = (0..alg.dim())
            .map(|i| {
                let p = basic[i].0.log();
                let mut out = Vec::new();
                let mut power = TensorSeries::one(2 * g, class);
                for m in 1..=class / alg.weight(i) {
                    power = power.mul(&p).scale(&Q::new(1.into(), (m as i64).into()));
                    out.push(power.clone());
                }
                out
            })
            .collect();
        Nilpotent {
            genus: g,
            level: k,
            alg,
            basis_powers,
            generator_exp,
            word_cache: DashMap::new(),
            nf_cache: DashMap::new(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn class(&self) -> usize {
        self.level - 1
    }

    pub fn algebra(&self) -> &Arc<FreeLie> {
        &self.alg
    }

    pub fn identity(&self) -> NilElement {
        NilElement {
            level: self.level,
            log: LieElement::zero(self.class()),
        }
    }

    pub fn identity_nf(&self) -> NormalForm {
        NormalForm(vec![0; self.alg.dim()])
    }

    pub fn element(&self, log: LieElement) -> NilElement {
        NilElement {
            level: self.level,
            log: log.with_class(self.class()),
        }
    }

    pub fn mul(&self, x: &NilElement, y: &NilElement) -> NilElement {
        self.element(bch(&self.alg, &x.log, &y.log))
    }

    pub fn inv(&self, x: &NilElement) -> NilElement {
        self.element(x.log.neg())
    }

    fn series(&self, x: &NilElement) -> TensorSeries {
        TensorSeries::from_lie(&self.alg, &x.log).exp()
    }

    fn from_series(&self, t: &TensorSeries) -> NilElement {
        self.element(t.log().to_lie(&self.alg).expect("group-like series"))
    }

    fn word_series(&self, w: &Word) -> TensorSeries {
        let mut t = TensorSeries::one(2 * self.genus, self.class());
        for l in w.letters() {
            let (pos, neg) = &self.generator_exp[l.gen.index()];
            t = t.mul(if l.inverse { neg } else { pos });
        }
        t
    }

    fn word_data(&self, w: &Word) -> Arc<(NilElement, NormalForm)> {
        if let Some(x) = self.word_cache.get(w) {
            return x.clone();
        }
        let t = self.word_series(w);
        let nf = self.peel(&t).expect("images of words are integral");
        let data = Arc::new((self.from_series(&t), nf));
        self.word_cache.insert(w.clone(), data.clone());
        data
    }

    /// Image of a word under `π → Γ_k`, by log coordinates.
    pub fn log_word(&self, w: &Word) -> NilElement {
        self.word_data(w).0.clone()
    }

    pub fn word_normal_form(&self, w: &Word) -> NormalForm {
        self.word_data(w).1.clone()
    }

    /// `u_i^e` as a series.
    fn basis_exp(&self, i: usize, e: i64) -> TensorSeries {
        let mut t = TensorSeries::one(2 * self.genus, self.class());
        let mut power = Q::one();
        let qe = q(e);
        for p in &self.basis_powers[i] {
            power *= &qe;
            t.add_assign_scaled(p, &power);
        }
        t
    }

    /// Collected exponents of a group-like series, peeling weights
    /// lowest-first.
    fn peel(&self, t: &TensorSeries) -> Result<NormalForm> {
        let mut exps = vec![0i64; self.alg.dim()];
        let mut cur = t.clone();
        for w in 1..=self.class() {
            let coords = cur
                .lie_part(&self.alg, w)
                .ok_or_else(|| Error::NotIntegral("series is not group-like".to_string()))?;
            if coords.is_empty() {
                continue;
            }
            let mut undo = TensorSeries::one(2 * self.genus, self.class());
            for (i, c) in coords.iter().rev() {
                let e = to_i64(c).ok_or_else(|| {
                    Error::NotIntegral(format!("exponent {} on {}", fmt_q(c), self.alg.label(*i)))
                })?;
                exps[*i] = e;
                undo = undo.mul(&self.basis_exp(*i, -e));
            }
            cur = undo.mul(&cur);
        }
        Ok(NormalForm(exps))
    }

    /// Series of `∏ u_i^{e_i}`, cached.
    fn nf_series(&self, nf: &NormalForm) -> Arc<TensorSeries> {
        if let Some(x) = self.nf_cache.get(nf) {
            return x.clone();
        }
        let mut t = TensorSeries::one(2 * self.genus, self.class());
        for (i, &e) in nf.0.iter().enumerate() {
            if e != 0 {
                t = t.mul(&self.basis_exp(i, e));
            }
        }
        let t = Arc::new(t);
        self.nf_cache.insert(nf.clone(), t.clone());
        t
    }

    pub fn normal_form(&self, x: &NilElement) -> Result<NormalForm> {
        self.peel(&self.series(x))
    }

    pub fn from_normal_form(&self, nf: &NormalForm) -> NilElement {
        self.from_series(&self.nf_series(nf))
    }

    pub fn nf_mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        if a.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return a.clone();
        }
        let t = self.nf_series(a).mul(&self.nf_series(b));
        self.peel(&t)
            .expect("product of integral elements is integral")
    }

    pub fn nf_inv(&self, a: &NormalForm) -> NormalForm {
        let t = self.nf_series(a).inverse_unipotent();
        self.peel(&t)
            .expect("inverse of an integral element is integral")
    }

    /// Abelianization of a normal form: its weight-one exponents.
    pub fn abelianize(&self, nf: &NormalForm) -> Vec<i64> {
        nf.0[self.alg.weight_range(1)].to_vec()
    }

    /// `Γ_k → Γ_{k-1}`: drop the top-weight coordinates.
    pub fn project(&self, x: &NilElement) -> Result<NilElement> {
        let lower = Nilpotent::get(self.genus, self.level - 1)?;
        Ok(lower.element(self.alg.truncate(&x.log, self.class() - 1)))
    }

    /// Section `Γ_k → Γ_{k+1}` extending collected exponents by zero.
    pub fn section(&self, x: &NilElement) -> Result<NilElement> {
        let upper = Nilpotent::get(self.genus, self.level + 1)?;
        let nf = self.normal_form(x)?;
        Ok(upper.from_normal_form(&self.lift_nf(&upper, &nf)))
    }

    fn lift_nf(&self, upper: &Nilpotent, nf: &NormalForm) -> NormalForm {
        let mut e = nf.0.clone();
        e.resize(upper.alg.dim(), 0);
        NormalForm(e)
    }

    /// Extension cocycle `s(g)s(h)s(gh)⁻¹ ∈ L_{k+1}` as a weight-`k` element
    /// of the class-`k` algebra.
    pub fn cocycle(&self, g: &NilElement, h: &NilElement) -> Result<LieElement> {
        let a = self.normal_form(g)?;
        let b = self.normal_form(h)?;
        self.cocycle_nf(&a, &b)
    }

    pub fn cocycle_nf(&self, a: &NormalForm, b: &NormalForm) -> Result<LieElement> {
        let upper = Nilpotent::get(self.genus, self.level + 1)?;
        if a.is_identity() || b.is_identity() {
            return Ok(LieElement::zero(upper.class()));
        }
        let prod = upper.nf_mul(&self.lift_nf(&upper, a), &self.lift_nf(&upper, b));
        let top = upper.alg.weight_range(upper.class());
        Ok(LieElement::from_terms(
            upper.class(),
            top.map(|i| (i, q(prod.0[i]))),
        ))
    }

    /// `φ ∈ I(k)`: `φ` acts trivially on `Γ_k`.
    pub fn is_in_torelli(&self, phi: &MappingClass) -> bool {
        Generator::all(self.genus)
            .all(|x| self.word_normal_form(phi.image(x)) == self.word_normal_form(&Word::gen(x)))
    }

    /// First generator moved in `Γ_k`, if any.
    pub fn moved_generator(&self, phi: &MappingClass) -> Option<Generator> {
        Generator::all(self.genus)
            .find(|&x| self.word_normal_form(phi.image(x)) != self.word_normal_form(&Word::gen(x)))
    }

    /// Matrix of the induced automorphism of the Lie algebra of `Γ_k` over
    /// the Lyndon basis; column `j` is the image of `h_j`.
    pub fn induced_lie_auto(&self, phi: &MappingClass) -> QMatrix {
        let leaves: Vec<LieElement> = Generator::all(self.genus)
            .map(|x| self.log_word(phi.image(x)).log)
            .collect();
        self.lie_endomorphism(&leaves)
    }

    /// Lie endomorphism determined by generator images.
    pub fn lie_endomorphism(&self, leaves: &[LieElement]) -> QMatrix {
        let images = self
            .alg
            .evaluate_basis(leaves)
            .expect("leaves share the class");
        let cols: Vec<Vec<Q>> = images.iter().map(|x| x.dense(0..self.alg.dim())).collect();
        QMatrix::from_columns(self.alg.dim(), &cols)
    }

    pub fn apply_matrix(&self, m: &QMatrix, x: &LieElement) -> LieElement {
        let v = m.apply(&x.dense(0..self.alg.dim()));
        LieElement::from_terms(
            self.class(),
            v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()),
        )
    }
}
