//! Johnson and Morita homomorphisms, symplectic duality, the check
//! `τ_k = (D⊗id)∘d²∘τ̃_k`, and the group-theoretic maps around them.

use std::collections::HashMap;
use std::hash::Hash;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::bar::{
    act_on_chain, antisym_cycle, bar_boundary, bound_two_cycle, cap_d2, fundamental_two_chain,
    push, BarChain, FreeGroup,
};
use crate::ce::{extended_differential, read_h_tensor_l, HTensor, WedgeChain};
use crate::error::{Error, Result};
use crate::hall::{FreeLie, LieElement};
use crate::linalg::QMatrix;
use crate::malcev::{Nilpotent, NormalForm};
use crate::rational::{fmt_q, q, Q};
use crate::word::{catalog_entry, Generator, MappingClass, Word};

/// An element of `Hom(H, L_{k+1})`: the weight-`k` value on each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JohnsonValue {
    pub genus: usize,
    pub level: usize,
    pub values: Vec<LieElement>,
}

impl JohnsonValue {
    pub fn zero(genus: usize, level: usize) -> Self {
        JohnsonValue {
            genus,
            level,
            values: vec![LieElement::zero(level); 2 * genus],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integral())
    }

    pub fn add(&self, other: &JohnsonValue) -> JohnsonValue {
        JohnsonValue {
            genus: self.genus,
            level: self.level,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &JohnsonValue) -> JohnsonValue {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> JohnsonValue {
        JohnsonValue {
            genus: self.genus,
            level: self.level,
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    /// Value on a vector of `H`.
    pub fn eval(&self, h: &[Q]) -> LieElement {
        let mut out = LieElement::zero(self.level);
        for (c, v) in h.iter().zip(&self.values) {
            if !c.is_zero() {
                out = out.add(&v.scale(c));
            }
        }
        out
    }

    /// `(α·t)(x) = α(t(α⁻¹x))` for an automorphism of `H` given as a
    /// rational matrix, acting on `L_{k+1}` through its graded extension.
    pub fn act(&self, h_matrix: &QMatrix) -> Result<JohnsonValue> {
        let inv = h_matrix
            .inverse()
            .ok_or_else(|| Error::Calibration("singular action on H".to_string()))?;
        let alg = FreeLie::get(2 * self.genus, self.level);
        let leaves: Vec<LieElement> = (0..2 * self.genus)
            .map(|j| {
                LieElement::from_terms(
                    self.level,
                    (0..2 * self.genus).map(|i| (i, h_matrix[(i, j)].clone())),
                )
            })
            .collect();
        let images = alg.evaluate_basis(&leaves)?;
        let apply = |x: &LieElement| {
            let mut out = LieElement::zero(self.level);
            for (i, c) in x.terms() {
                out = out.add(&images[i].weight_part(&alg, self.level).scale(c));
            }
            out
        };
        Ok(JohnsonValue {
            genus: self.genus,
            level: self.level,
            values: (0..2 * self.genus)
                .map(|j| apply(&self.eval(&inv.column(j))))
                .collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        let alg = FreeLie::get(2 * self.genus, self.level);
        let mut values = Map::new();
        for (i, v) in self.values.iter().enumerate() {
            values.insert(Generator::from_index(i).name(), lie_json(&alg, v));
        }
        json!({
            "basis": alg.labels(alg.weight_range(self.level)),
            "genus": self.genus,
            "level": self.level,
            "values": values,
        })
    }
}

/// Sparse JSON of a Lie element keyed by bracket labels, values as strings.
pub fn lie_json(alg: &FreeLie, x: &LieElement) -> Value {
    let mut m = Map::new();
    for (i, c) in x.terms() {
        m.insert(alg.label(i), Value::String(fmt_q(c)));
    }
    Value::Object(m)
}

pub fn tensor_json(t: &HTensor) -> Value {
    let alg = FreeLie::get(2 * t.genus, t.level);
    let mut rows = Map::new();
    for (i, v) in t.rows.iter().enumerate() {
        rows.insert(Generator::from_index(i).name(), lie_json(&alg, v));
    }
    json!({
        "basis": alg.labels(alg.weight_range(t.level)),
        "genus": t.genus,
        "level": t.level,
        "rows": rows,
    })
}

fn require_torelli(nil: &Nilpotent, phi: &MappingClass) -> Result<()> {
    match nil.moved_generator(phi) {
        None => Ok(()),
        Some(x) => Err(Error::NotTorelli {
            k: nil.level(),
            generator: x.name(),
        }),
    }
}

/// `τ_k(φ)(x)` = weight-`k` part of `log(φ(x)x⁻¹)` in `Γ_{k+1}`.
pub fn johnson(phi: &MappingClass, k: usize) -> Result<JohnsonValue> {
    let g = phi.genus();
    require_torelli(&*Nilpotent::get(g, k)?, phi)?;
    let up = Nilpotent::get(g, k + 1)?;
    let out = JohnsonValue {
        genus: g,
        level: k,
        values: Generator::all(g)
            .map(|x| johnson_on_word(&up, phi, &Word::gen(x)))
            .collect(),
    };
    if !out.is_integral() {
        return Err(Error::NotIntegral(format!("Johnson value at level {k}")));
    }
    Ok(out)
}

/// `log(φ(w)w⁻¹)` in `Γ_{k+1}`, restricted to weight `k`.
pub fn johnson_on_word(up: &Nilpotent, phi: &MappingClass, w: &Word) -> LieElement {
    let x = up.log_word(&phi.apply(w).mul(&w.inv()));
    x.log.weight_part(up.algebra(), up.class())
}

/// Global signs absorbing the orientation conventions of `d²` and of the
/// duality `H ≅ H*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub eps: i64,
    pub delta: i64,
}

/// `(D⊗id)(h ⊗ λ)(x) = δ·⟨h, x⟩·λ` with `⟨a_i, b_i⟩ = 1`.
pub fn symplectic_dual(t: &HTensor, delta: i64) -> JohnsonValue {
    let mut out = JohnsonValue::zero(t.genus, t.level);
    for i in 0..t.genus {
        let (a, b) = (2 * i, 2 * i + 1);
        out.values[b] = t.rows[a].scale(&q(delta));
        out.values[a] = t.rows[b].scale(&q(-delta));
    }
    out
}

pub fn symplectic_dual_inverse(v: &JohnsonValue, delta: i64) -> HTensor {
    let mut out = HTensor::zero(v.genus, v.level);
    for i in 0..v.genus {
        let (a, b) = (2 * i, 2 * i + 1);
        out.rows[a] = v.values[b].scale(&q(delta));
        out.rows[b] = v.values[a].scale(&q(-delta));
    }
    out
}

/// A chain-level representative of `τ̃_k(φ) ∈ H₃(Γ_k)` and its `d²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaValue {
    pub level: usize,
    pub cycle: BarChain<NormalForm>,
    pub d2_invariant: HTensor,
}

impl MoritaValue {
    pub fn to_json(&self) -> Value {
        json!({
            "cycle": self.cycle.to_json(),
            "d2_invariant": tensor_json(&self.d2_invariant),
            "level": self.level,
        })
    }
}

/// `D` with `∂D = φC − C` over the free group.
pub fn bounding_chain(phi: &MappingClass, max_terms: usize) -> Result<BarChain<Word>> {
    let c = fundamental_two_chain(phi.genus())?;
    let z = act_on_chain(phi, &c).sub(&c);
    let d = bound_two_cycle(&z)?;
    if d.len() > max_terms {
        return Err(Error::Budget {
            what: "bounding 3-chain terms".to_string(),
            needed: d.len(),
            limit: max_terms,
        });
    }
    Ok(d)
}

/// `τ̃_k(φ)`: push a chain bounding `φC − C` to `Γ_k`.
pub fn morita(phi: &MappingClass, k: usize, eps: i64, max_terms: usize) -> Result<MoritaValue> {
    let nil = Nilpotent::get(phi.genus(), k)?;
    require_torelli(&nil, phi)?;
    let d = bounding_chain(phi, max_terms)?;
    morita_from_chain(&nil, &d, eps)
}

/// Morita value from a chosen bounding chain.
pub fn morita_from_chain(nil: &Nilpotent, d: &BarChain<Word>, eps: i64) -> Result<MoritaValue> {
    let cycle = push(nil, d);
    if !bar_boundary(nil, &cycle).is_zero() {
        return Err(Error::NotACycle("pushed bounding chain".to_string()));
    }
    let d2_invariant = cap_d2(nil, &cycle, eps)?;
    Ok(MoritaValue {
        level: nil.level(),
        cycle,
        d2_invariant,
    })
}

/// `D + ∂W` for a 4-chain `W`: another valid choice of bounding chain.
pub fn perturb_bounding_chain(d: &BarChain<Word>, w: &BarChain<Word>) -> BarChain<Word> {
    d.add(&bar_boundary(&FreeGroup, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    pub johnson: JohnsonValue,
    pub predicted: JohnsonValue,
    pub difference: JohnsonValue,
}

impl Verification {
    pub fn to_json(&self) -> Value {
        json!({
            "difference": self.difference.to_json(),
            "holds": self.holds,
            "johnson": self.johnson.to_json(),
            "predicted": self.predicted.to_json(),
        })
    }
}

/// Compares `τ_k(φ)` with `(D⊗id)(d² τ̃_k(φ))`.
pub fn verify_morita_johnson(
    phi: &MappingClass,
    k: usize,
    cal: Calibration,
    max_terms: usize,
) -> Result<Verification> {
    let johnson = johnson(phi, k)?;
    let m = morita(phi, k, cal.eps, max_terms)?;
    let predicted = symplectic_dual(&m.d2_invariant, cal.delta);
    let difference = johnson.sub(&predicted);
    Ok(Verification {
        holds: difference.is_zero(),
        johnson,
        predicted,
        difference,
    })
}

fn sign_between(lhs: &HTensor, rhs: &HTensor, what: &str) -> Result<i64> {
    if lhs.is_zero() || rhs.is_zero() {
        return Err(Error::Calibration(format!("{what}: zero reference value")));
    }
    if lhs == rhs {
        Ok(1)
    } else if *lhs == rhs.scale(&q(-1)) {
        Ok(-1)
    } else {
        Err(Error::Calibration(format!(
            "{what}: values differ beyond a sign"
        )))
    }
}

/// `ε` from the abelian case: cap of the antisymmetrized cycle on
/// `a1, b1, a2` against `d̃²(A1∧B1∧A2)`.
pub fn calibrate_eps(g: usize) -> Result<i64> {
    let nil = Nilpotent::get(g, 2)?;
    let gens: Vec<NormalForm> = (0..3)
        .map(|i| nil.word_normal_form(&Word::gen(Generator::from_index(i))))
        .collect();
    let cap = cap_d2(&nil, &antisym_cycle(&gens[0], &gens[1], &gens[2]), 1)?;
    let lie = WedgeChain::from_terms(1, 3, [(vec![0, 1, 2], q(1))]);
    let lie = read_h_tensor_l(
        &FreeLie::get(2 * g, 2),
        g,
        &extended_differential(2 * g, &lie)?,
    )?;
    sign_between(&lie, &cap, "cap calibration")
}

/// `δ` from the single instance `sep1` at level 3.
pub fn calibrate_delta(g: usize, eps: i64, max_terms: usize) -> Result<i64> {
    let phi = catalog_entry(g, "sep1")?;
    let tau = johnson(&phi, 3)?;
    let m = morita(&phi, 3, eps, max_terms)?;
    let t = symplectic_dual_inverse(&tau, 1);
    sign_between(&t, &m.d2_invariant, "duality calibration")
}

pub fn calibrate(g: usize, max_terms: usize) -> Result<Calibration> {
    let eps = calibrate_eps(g)?;
    let delta = calibrate_delta(g, eps, max_terms)?;
    Ok(Calibration { eps, delta })
}

/// Lie automorphism of `𝔤_{k+1}` with `X_i ↦ X_i + t(x_i)`, realizing
/// `x ↦ x·t([x])` on `Γ_{k+1}`.
pub fn hom_to_aut(t: &JohnsonValue) -> Result<QMatrix> {
    let up = Nilpotent::get(t.genus, t.level + 1)?;
    let alg = up.algebra();
    let leaves: Vec<LieElement> = (0..2 * t.genus)
        .map(|i| alg.generator(i).add(&t.values[i]))
        .collect();
    Ok(up.lie_endomorphism(&leaves))
}

/// Reads `t` back off an automorphism of `𝔤_{k+1}` that is the identity on
/// `𝔤_k`.
pub fn read_hom(genus: usize, k: usize, m: &QMatrix) -> Result<JohnsonValue> {
    let up = Nilpotent::get(genus, k + 1)?;
    let alg = up.algebra();
    let mut out = JohnsonValue::zero(genus, k);
    for i in 0..2 * genus {
        let col = LieElement::from_terms(k, m.column(i).into_iter().enumerate());
        let diff = col.sub(&alg.generator(i));
        let top = diff.weight_part(alg, k);
        if diff != top {
            return Err(Error::NotTorelli {
                k,
                generator: Generator::from_index(i).name(),
            });
        }
        out.values[i] = top;
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossedReport {
    pub holds: bool,
    pub checked: usize,
    pub skipped: usize,
    pub notices: Vec<String>,
}

/// Tests `f(gh) = g·f(h) + f(g)` on every pair of samples whose product is
/// also sampled. Other pairs are skipped with a notice.
pub fn crossed_check<G, M>(
    samples: &[(G, M)],
    mul: impl Fn(&G, &G) -> G,
    act: impl Fn(&G, &M) -> M,
    add: impl Fn(&M, &M) -> M,
) -> CrossedReport
where
    G: Clone + Eq + Hash + std::fmt::Debug,
    M: Clone + PartialEq,
{
    let table: HashMap<&G, &M> = samples.iter().map(|(g, m)| (g, m)).collect();
    let mut report = CrossedReport {
        holds: true,
        ..Default::default()
    };
    for (g, fg) in samples {
        for (h, fh) in samples {
            let gh = mul(g, h);
            let Some(fgh) = table.get(&gh) else {
                report.skipped += 1;
                report
                    .notices
                    .push(format!("skipped {g:?}·{h:?}: product not sampled"));
                continue;
            };
            report.checked += 1;
            if **fgh != add(&act(g, fh), fg) {
                report.holds = false;
            }
        }
    }
    report
}

/// `τ_k(αφα⁻¹) = α·τ_k(φ)`.
pub fn equivariance_check(alpha: &MappingClass, phi: &MappingClass, k: usize) -> Result<bool> {
    let lhs = johnson(&phi.conj_by(alpha), k)?;
    let rhs = johnson(phi, k)?.act(&h_matrix(alpha))?;
    Ok(lhs == rhs)
}

/// Action on `H` as a rational matrix.
pub fn h_matrix(phi: &MappingClass) -> QMatrix {
    let m = phi.h_action();
    let n = m.len();
    let mut out = QMatrix::zeros(n, n);
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[(i, j)] = q(x);
        }
    }
    out
}

/// `(α, v)` in `Aut(H) ⋉ Hom(H, L_{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectElement {
    pub alpha: QMatrix,
    pub v: JohnsonValue,
}

impl SemidirectElement {
    pub fn identity(genus: usize, level: usize) -> Self {
        SemidirectElement {
            alpha: QMatrix::identity(2 * genus),
            v: JohnsonValue::zero(genus, level),
        }
    }

    /// `(α,v)(β,w) = (αβ, α·w + v)`.
    pub fn mul(&self, other: &SemidirectElement) -> Result<SemidirectElement> {
        Ok(SemidirectElement {
            alpha: self.alpha.mul(&other.alpha),
            v: other.v.act(&self.alpha)?.add(&self.v),
        })
    }

    pub fn inv(&self) -> Result<SemidirectElement> {
        let a = self
            .alpha
            .inverse()
            .ok_or_else(|| Error::Calibration("singular action on H".to_string()))?;
        let v = self.v.act(&a)?.scale(&q(-1));
        Ok(SemidirectElement { alpha: a, v })
    }
}
