//! The free group π on `a1, b1, …, ag, bg`, its endomorphisms, and mapping-class
//! representatives fixing the boundary word `ℓ = [a1,b1]⋯[ag,bg]`.
//!
//! Commutators follow `[x, y] = x y x⁻¹ y⁻¹` everywhere in the crate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;

use crate::error::{Error, Result};

/// One of the `2g` free generators, ordered `a1 < b1 < a2 < b2 < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    A,
    B,
}

impl Generator {
    pub fn from_index(index: usize) -> Self {
        Generator(index as u16)
    }

    /// `a_i` for a 1-based handle index.
    pub fn a(handle: usize) -> Self {
        Generator(2 * (handle as u16 - 1))
    }

    pub fn b(handle: usize) -> Self {
        Generator(2 * (handle as u16 - 1) + 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn handle(self) -> usize {
        self.0 as usize / 2 + 1
    }

    pub fn kind(self) -> Kind {
        if self.0 % 2 == 0 {
            Kind::A
        } else {
            Kind::B
        }
    }

    pub fn name(self) -> String {
        match self.kind() {
            Kind::A => format!("a{}", self.handle()),
            Kind::B => format!("b{}", self.handle()),
        }
    }

    pub fn all(g: usize) -> impl Iterator<Item = Generator> {
        (0..2 * g).map(Generator::from_index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: Generator) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: Generator) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

static INTERNER: LazyLock<DashMap<Arc<[Letter]>, ()>> = LazyLock::new(DashMap::new);

fn intern(letters: Vec<Letter>) -> Arc<[Letter]> {
    if let Some(entry) = INTERNER.get(letters.as_slice()) {
        return entry.key().clone();
    }
    let arc: Arc<[Letter]> = letters.into();
    INTERNER.entry(arc).or_insert(()).key().clone()
}

/// A freely reduced word. Storage is interned, so equality is a pointer
/// comparison.
#[derive(Clone)]
pub struct Word(Arc<[Letter]>);

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::ptr::hash(Arc::as_ptr(&self.0) as *const Letter, state)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    /// Freely reduces `letters` and interns the result.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(intern(out))
    }

    pub fn identity() -> Self {
        Word::new([])
    }

    pub fn gen(g: Generator) -> Self {
        Word::new([Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        let mut out: Vec<Letter> = self.0.to_vec();
        for &l in other.0.iter() {
            push_reduced(&mut out, l);
        }
        Word(intern(out))
    }

    pub fn inv(&self) -> Word {
        Word(intern(self.0.iter().rev().map(|l| l.inv()).collect()))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inv()).mul(&y.inv())
    }

    pub fn conj(x: &Word, by: &Word) -> Word {
        by.mul(x).mul(&by.inv())
    }

    /// Exponent-sum vector in `ℤ^{2g}`.
    pub fn abelianize(&self, g: usize) -> Vec<i64> {
        let mut v = vec![0; 2 * g];
        for l in self.0.iter() {
            v[l.gen.index()] += l.exponent();
        }
        v
    }

    /// Prefixes `y1⋯yi` for `i = 1..len`, reduced.
    pub fn prefixes(&self) -> Vec<Word> {
        (1..=self.len())
            .map(|i| Word::new(self.0[..i].iter().copied()))
            .collect()
    }

    pub fn max_generator(&self) -> Option<Generator> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Parses a whitespace-separated word such as `a1 b1 a1^-1`; `e` or
    /// an empty string is the identity.
    pub fn parse(s: &str, g: usize) -> Result<Word> {
        parse_word_at(s, g, 1, 1)
    }
}

fn parse_generator(tok: &str, g: usize) -> Option<Generator> {
    let (kind, rest) = tok.split_at(1.min(tok.len()));
    let handle: usize = rest.parse().ok()?;
    if handle == 0 || handle > g {
        return None;
    }
    match kind {
        "a" => Some(Generator::a(handle)),
        "b" => Some(Generator::b(handle)),
        _ => None,
    }
}

fn parse_letter(tok: &str, g: usize) -> Option<Letter> {
    let (base, inverse) = match tok.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (tok, false),
    };
    parse_generator(base, g).map(|gen| Letter { gen, inverse })
}

fn tokens_with_columns(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

fn parse_word_at(s: &str, g: usize, line: usize, col0: usize) -> Result<Word> {
    let mut letters = Vec::new();
    for (col, tok) in tokens_with_columns(s) {
        if tok == "e" || tok == "1" {
            continue;
        }
        match parse_letter(tok, g) {
            Some(l) => letters.push(l),
            None => {
                return Err(Error::Parse {
                    line,
                    column: col0 + s[..col].chars().count(),
                    message: format!("unknown token `{tok}` for genus {g}"),
                })
            }
        }
    }
    Ok(Word::new(letters))
}

/// `ℓ = [a1,b1][a2,b2]⋯[ag,bg]`.
pub fn boundary_word(g: usize) -> Result<Word> {
    if g == 0 {
        return Err(Error::Genus { min: 1, got: 0 });
    }
    let mut letters = Vec::with_capacity(4 * g);
    for i in 1..=g {
        let (a, b) = (Generator::a(i), Generator::b(i));
        letters.extend([
            Letter::pos(a),
            Letter::pos(b),
            Letter::neg(a),
            Letter::neg(b),
        ]);
    }
    Ok(Word::new(letters))
}

/// An endomorphism of π given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endo {
    pub images: Vec<Word>,
}

impl Endo {
    pub fn identity(g: usize) -> Self {
        Endo {
            images: Generator::all(g).map(Word::gen).collect(),
        }
    }

    pub fn genus(&self) -> usize {
        self.images.len() / 2
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.gen.index()];
            if l.inverse {
                for &x in img.letters().iter().rev() {
                    push_reduced(&mut out, x.inv());
                }
            } else {
                for &x in img.letters() {
                    push_reduced(&mut out, x);
                }
            }
        }
        Word(intern(out))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endo) -> Endo {
        Endo {
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| *w == Word::gen(Generator::from_index(i)))
    }

    pub fn h_action(&self) -> IntMatrix {
        let n = self.images.len();
        let mut m = vec![vec![0i64; n]; n];
        for (col, w) in self.images.iter().enumerate() {
            for (row, e) in w.abelianize(n / 2).into_iter().enumerate() {
                m[row][col] = e;
            }
        }
        m
    }
}

/// A candidate automorphism: forward images plus (optionally) inverse images.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub images: Endo,
    pub inverse_images: Option<Endo>,
}

/// An automorphism of π verified to fix `ℓ`, with its verified inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MappingClass {
    forward: Endo,
    inverse: Endo,
}

/// Checks `φ∘φ⁻¹ = φ⁻¹∘φ = id` and `φ(ℓ) = ℓ`. Missing inverse images are an
/// error, never guessed.
pub fn verify_mapping_class(c: &Candidate) -> Result<bool> {
    let inv = c
        .inverse_images
        .as_ref()
        .ok_or_else(|| Error::NotMappingClass("inverse images were not supplied".to_string()))?;
    let g = c.images.genus();
    if g == 0 || inv.genus() != g || c.images.images.len() % 2 != 0 {
        return Err(Error::NotMappingClass(
            "image and inverse lists must both have 2g entries".to_string(),
        ));
    }
    let ell = boundary_word(g)?;
    Ok(c.images.compose(inv).is_identity()
        && inv.compose(&c.images).is_identity()
        && c.images.apply(&ell) == ell)
}

impl MappingClass {
    pub fn new(c: Candidate) -> Result<Self> {
        if !verify_mapping_class(&c)? {
            return Err(Error::NotMappingClass(
                "composition with inverse is not the identity or ℓ is moved".to_string(),
            ));
        }
        Ok(MappingClass {
            forward: c.images,
            inverse: c.inverse_images.unwrap(),
        })
    }

    /// Builds from explicit image lists; panics if the data does not verify.
    /// Intended for the built-in catalog.
    fn from_images(images: Vec<Word>, inverse: Vec<Word>) -> Self {
        MappingClass::new(Candidate {
            images: Endo { images },
            inverse_images: Some(Endo { images: inverse }),
        })
        .expect("catalog entry must verify")
    }

    pub fn identity(g: usize) -> Self {
        MappingClass {
            forward: Endo::identity(g),
            inverse: Endo::identity(g),
        }
    }

    pub fn genus(&self) -> usize {
        self.forward.genus()
    }

    pub fn forward(&self) -> &Endo {
        &self.forward
    }

    pub fn inverse_endo(&self) -> &Endo {
        &self.inverse
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.forward.apply(w)
    }

    pub fn image(&self, g: Generator) -> &Word {
        &self.forward.images[g.index()]
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &MappingClass) -> MappingClass {
        MappingClass {
            forward: self.forward.compose(&other.forward),
            inverse: other.inverse.compose(&self.inverse),
        }
    }

    pub fn inv(&self) -> MappingClass {
        MappingClass {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn pow(&self, n: i64) -> MappingClass {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = MappingClass::identity(self.genus());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `by ∘ self ∘ by⁻¹`.
    pub fn conj_by(&self, by: &MappingClass) -> MappingClass {
        by.mul(self).mul(&by.inv())
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity()
    }

    pub fn h_action(&self) -> IntMatrix {
        self.forward.h_action()
    }
}

pub type IntMatrix = Vec<Vec<i64>>;

pub fn int_matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// The intersection form with `⟨a_i, b_i⟩ = 1`.
pub fn symplectic_form(g: usize) -> IntMatrix {
    let mut j = vec![vec![0i64; 2 * g]; 2 * g];
    for i in 1..=g {
        let (a, b) = (Generator::a(i).index(), Generator::b(i).index());
        j[a][b] = 1;
        j[b][a] = -1;
    }
    j
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j]).collect())
        .collect()
}

fn w(g: usize, s: &str) -> Word {
    Word::parse(s, g).expect("catalog word")
}

fn images_with(g: usize, overrides: &[(Generator, Word)]) -> Vec<Word> {
    let mut imgs = Endo::identity(g).images;
    for (gen, word) in overrides {
        imgs[gen.index()] = word.clone();
    }
    imgs
}

/// Named mapping classes available for every genus `g ≥ 2`:
///
/// * `t{i}`: `a_i ↦ a_i b_i`
/// * `s{i}`: `b_i ↦ b_i a_i`
/// * `mix{i}`: a twist mixing handles `i` and `i+1`
/// * `sep{i}`: conjugation of handle `i` by `γ_i = [a_i, b_i]`
/// * `conj_l`: `x ↦ ℓ x ℓ⁻¹`
pub fn catalog(g: usize) -> Result<Vec<(String, MappingClass)>> {
    if g < 2 {
        return Err(Error::Genus { min: 2, got: g });
    }
    let mut out = Vec::new();
    for i in 1..=g {
        let (a, b) = (Generator::a(i), Generator::b(i));
        let (aw, bw) = (Word::gen(a), Word::gen(b));
        out.push((
            format!("t{i}"),
            MappingClass::from_images(
                images_with(g, &[(a, aw.mul(&bw))]),
                images_with(g, &[(a, aw.mul(&bw.inv()))]),
            ),
        ));
        out.push((
            format!("s{i}"),
            MappingClass::from_images(
                images_with(g, &[(b, bw.mul(&aw))]),
                images_with(g, &[(b, bw.mul(&aw.inv()))]),
            ),
        ));
    }
    for i in 1..g {
        let (ai, bi, aj, bj) = (
            format!("a{i}"),
            format!("b{i}"),
            format!("a{}", i + 1),
            format!("b{}", i + 1),
        );
        let fwd = images_with(
            g,
            &[
                (Generator::a(i), w(g, &format!("{ai} {bi}^-1 {aj}^-1 {bi}"))),
                (
                    Generator::b(i),
                    w(g, &format!("{bi}^-1 {aj} {bi} {aj}^-1 {bi}")),
                ),
                (Generator::a(i + 1), w(g, &format!("{bi}^-1 {aj} {bi}"))),
                (Generator::b(i + 1), w(g, &format!("{bj} {bi}"))),
            ],
        );
        let inv = images_with(
            g,
            &[
                (Generator::a(i), w(g, &format!("{ai} {aj}"))),
                (Generator::b(i), w(g, &format!("{aj}^-1 {bi} {aj}"))),
                (
                    Generator::a(i + 1),
                    w(g, &format!("{aj}^-1 {bi} {aj} {bi}^-1 {aj}")),
                ),
                (
                    Generator::b(i + 1),
                    w(g, &format!("{bj} {aj}^-1 {bi}^-1 {aj}")),
                ),
            ],
        );
        out.push((format!("mix{i}"), MappingClass::from_images(fwd, inv)));
    }
    for i in 1..=g {
        let (a, b) = (Generator::a(i), Generator::b(i));
        let gamma = Word::commutator(&Word::gen(a), &Word::gen(b));
        let conj = |x: Generator, by: &Word| Word::conj(&Word::gen(x), by);
        out.push((
            format!("sep{i}"),
            MappingClass::from_images(
                images_with(g, &[(a, conj(a, &gamma)), (b, conj(b, &gamma))]),
                images_with(g, &[(a, conj(a, &gamma.inv())), (b, conj(b, &gamma.inv()))]),
            ),
        ));
    }
    let ell = boundary_word(g)?;
    out.push((
        "conj_l".to_string(),
        MappingClass::from_images(
            Generator::all(g)
                .map(|x| Word::conj(&Word::gen(x), &ell))
                .collect(),
            Generator::all(g)
                .map(|x| Word::conj(&Word::gen(x), &ell.inv()))
                .collect(),
        ),
    ));
    Ok(out)
}

pub fn catalog_entry(g: usize, name: &str) -> Result<MappingClass> {
    catalog(g)?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, m)| m)
        .ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown catalog entry `{name}`"),
        })
}

/// Evaluates a product expression over catalog names, e.g.
/// `mix1 sep1 mix1^-1` or `conj_l*sep1^2`. Factors compose left to right
/// as functions: `x y` means `x ∘ y`.
pub fn catalog_expr(g: usize, expr: &str) -> Result<MappingClass> {
    let cat: HashMap<String, MappingClass> = catalog(g)?.into_iter().collect();
    let mut acc = MappingClass::identity(g);
    let cleaned = expr.replace('*', " ");
    for (col, tok) in tokens_with_columns(&cleaned) {
        let (name, power) = match tok.split_once('^') {
            Some((n, p)) => (n, p.parse::<i64>().ok()),
            None => (tok, Some(1)),
        };
        let m = match (name, power) {
            ("id", Some(_)) => MappingClass::identity(g),
            (n, Some(p)) => match cat.get(n) {
                Some(m) => m.pow(p),
                None => {
                    return Err(Error::Parse {
                        line: 1,
                        column: col + 1,
                        message: format!("unknown catalog entry `{n}`"),
                    })
                }
            },
            (_, None) => {
                return Err(Error::Parse {
                    line: 1,
                    column: col + 1,
                    message: format!("bad exponent in `{tok}`"),
                })
            }
        };
        acc = acc.mul(&m);
    }
    Ok(acc)
}

/// Parses the automorphism text format:
///
/// ```text
/// # comment
/// a1 -> a1 b1
/// inverse:
/// a1 -> a1 b1^-1
/// ```
///
/// Generators not listed map to themselves. Without an `inverse:` section
/// the inverse is left absent unless the forward map is the identity.
pub fn parse_automorphism(text: &str, g: usize) -> Result<Candidate> {
    let mut fwd: BTreeMap<usize, Word> = BTreeMap::new();
    let mut inv: BTreeMap<usize, Word> = BTreeMap::new();
    let mut in_inverse = false;
    let mut saw_inverse = false;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.trim() == "inverse:" {
            if saw_inverse {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "duplicate `inverse:` section".to_string(),
                });
            }
            in_inverse = true;
            saw_inverse = true;
            continue;
        }
        let Some(arrow) = line.find("->") else {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: "expected `generator -> word`".to_string(),
            });
        };
        let lhs = line[..arrow].trim();
        let lhs_col = line[..arrow].find(lhs).unwrap_or(0) + 1;
        let gen = parse_generator(lhs, g).ok_or_else(|| Error::Parse {
            line: line_no,
            column: lhs_col,
            message: format!("unknown generator `{lhs}` for genus {g}"),
        })?;
        let rhs_start = arrow + 2;
        let word = parse_word_at(&line[rhs_start..], g, line_no, rhs_start + 1)?;
        let table = if in_inverse { &mut inv } else { &mut fwd };
        if table.insert(gen.index(), word).is_some() {
            return Err(Error::Parse {
                line: line_no,
                column: lhs_col,
                message: format!("generator `{lhs}` assigned twice"),
            });
        }
    }
    let build = |t: &BTreeMap<usize, Word>| {
        let mut e = Endo::identity(g);
        for (i, w) in t {
            e.images[*i] = w.clone();
        }
        e
    };
    let images = build(&fwd);
    let inverse_images = if saw_inverse {
        Some(build(&inv))
    } else if images.is_identity() {
        Some(Endo::identity(g))
    } else {
        None
    };
    Ok(Candidate {
        images,
        inverse_images,
    })
}

/// Renders a mapping class in the automorphism text format.
pub fn format_automorphism(m: &MappingClass) -> String {
    let mut s = String::new();
    let g = m.genus();
    for x in Generator::all(g) {
        s.push_str(&format!("{x} -> {}\n", m.forward.images[x.index()]));
    }
    s.push_str("inverse:\n");
    for x in Generator::all(g) {
        s.push_str(&format!("{x} -> {}\n", m.inverse.images[x.index()]));
    }
    s
}

/// Searches products of length at most `max_length` in `gens` (and their
/// inverses) whose action on `H` is trivial but which are not the identity
/// automorphism. Runs a meet-in-the-middle over two balls grouped by the
/// action matrix.
pub fn torelli_search(
    g: usize,
    gens: &[(String, MappingClass)],
    max_length: usize,
    count: usize,
) -> Vec<(String, MappingClass)> {
    let mut symbols: Vec<(String, MappingClass)> = Vec::new();
    for (name, m) in gens {
        symbols.push((name.clone(), m.clone()));
        symbols.push((format!("{name}^-1"), m.inv()));
    }
    let r1 = max_length.div_ceil(2);
    let r2 = max_length / 2;
    let ball1 = ball(g, &symbols, r1);
    let mut by_matrix: HashMap<IntMatrix, Vec<usize>> = HashMap::new();
    let ball2 = if r2 == r1 {
        ball1.clone()
    } else {
        ball(g, &symbols, r2)
    };
    for (i, (_, _, m)) in ball2.iter().enumerate() {
        by_matrix.entry(m.h_action()).or_default().push(i);
    }
    let mut found: BTreeMap<(usize, String), MappingClass> = BTreeMap::new();
    let mut seen: std::collections::HashSet<MappingClass> = std::collections::HashSet::new();
    for (len_u, name_u, u) in &ball1 {
        let Some(partners) = by_matrix.get(&u.h_action()) else {
            continue;
        };
        for &j in partners {
            let (len_v, name_v, v) = &ball2[j];
            let prod = u.mul(&v.inv());
            if prod.is_identity() || seen.contains(&prod) {
                continue;
            }
            let name = match (name_u.is_empty(), name_v.is_empty()) {
                (true, true) => "id".to_string(),
                (false, true) => name_u.clone(),
                (true, false) => format!("({name_v})^-1"),
                (false, false) => format!("{name_u} ({name_v})^-1"),
            };
            seen.insert(prod.clone());
            found.insert((len_u + len_v, name), prod);
        }
    }
    found
        .into_iter()
        .take(count)
        .map(|((_, n), m)| (n, m))
        .collect()
}

fn ball(
    g: usize,
    symbols: &[(String, MappingClass)],
    radius: usize,
) -> Vec<(usize, String, MappingClass)> {
    let mut out = vec![(0usize, String::new(), MappingClass::identity(g))];
    let mut seen: std::collections::HashSet<MappingClass> =
        [MappingClass::identity(g)].into_iter().collect();
    let mut frontier = vec![0usize];
    for len in 1..=radius {
        let mut next = Vec::new();
        for &i in &frontier {
            for (sname, s) in symbols {
                let m = out[i].2.mul(s);
                if seen.insert(m.clone()) {
                    let name = if out[i].1.is_empty() {
                        sname.clone()
                    } else {
                        format!("{} {sname}", out[i].1)
                    };
                    out.push((len, name, m));
                    next.push(out.len() - 1);
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gw(s: &str) -> Word {
        Word::parse(s, 3).unwrap()
    }

    #[test]
    fn boundary_word_small_genus() {
        assert_eq!(boundary_word(1).unwrap(), gw("a1 b1 a1^-1 b1^-1"));
        assert_eq!(
            boundary_word(2).unwrap(),
            gw("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")
        );
        for g in 1..6 {
            assert_eq!(boundary_word(g).unwrap().len(), 4 * g);
        }
        assert!(matches!(boundary_word(0), Err(Error::Genus { .. })));
    }

    #[test]
    fn interning_gives_pointer_equality() {
        let x = gw("a1 b1");
        let y = gw("a1").mul(&gw("b1"));
        assert_eq!(x, y);
        assert!(Arc::ptr_eq(&x.0, &y.0));
        assert!(gw("a1 a1^-1").is_identity());
    }

    #[test]
    fn transvection_fixes_commutator() {
        let mut e = Endo::identity(2);
        e.images[0] = Word::parse("a1 b1", 2).unwrap();
        let c = Word::parse("a1 b1 a1^-1 b1^-1", 2).unwrap();
        assert_eq!(e.apply(&c), c);
        assert!(e.apply(&Word::identity()).is_identity());
    }

    #[test]
    fn verification_cases() {
        let id = Candidate {
            images: Endo::identity(2),
            inverse_images: Some(Endo::identity(2)),
        };
        assert!(verify_mapping_class(&id).unwrap());

        let mut fwd = Endo::identity(2);
        fwd.images[0] = Word::parse("a1 b1", 2).unwrap();
        let mut inv = Endo::identity(2);
        inv.images[0] = Word::parse("a1 b1^-1", 2).unwrap();
        let t1 = Candidate {
            images: fwd.clone(),
            inverse_images: Some(inv),
        };
        assert!(verify_mapping_class(&t1).unwrap());

        let mut swap = Endo::identity(2);
        swap.images.swap(0, 1);
        let swap = Candidate {
            images: swap.clone(),
            inverse_images: Some(swap),
        };
        assert!(!verify_mapping_class(&swap).unwrap());

        let missing = Candidate {
            images: fwd,
            inverse_images: None,
        };
        assert!(matches!(
            verify_mapping_class(&missing),
            Err(Error::NotMappingClass(_))
        ));
    }

    #[test]
    fn catalog_entries_verify() {
        for g in 2..=3 {
            let ell = boundary_word(g).unwrap();
            for (name, m) in catalog(g).unwrap() {
                assert_eq!(m.apply(&ell), ell, "{name}");
                assert!(m.mul(&m.inv()).is_identity(), "{name}");
            }
        }
        let sep1 = catalog_entry(2, "sep1").unwrap();
        let a2 = Word::parse("a2", 2).unwrap();
        assert_eq!(sep1.apply(&a2), a2);
        let conj = catalog_entry(2, "conj_l").unwrap();
        let ell = boundary_word(2).unwrap();
        let a1 = Word::parse("a1", 2).unwrap();
        assert_eq!(conj.apply(&a1), Word::conj(&a1, &ell));
    }

    #[test]
    fn h_action_examples() {
        assert_eq!(MappingClass::identity(2).h_action(), int_identity(4));
        assert_eq!(
            catalog_entry(2, "conj_l").unwrap().h_action(),
            int_identity(4)
        );
        let t1 = catalog_entry(2, "t1").unwrap().h_action();
        let mut expect = int_identity(4);
        expect[1][0] = 1;
        assert_eq!(t1, expect);
    }

    #[test]
    fn catalog_actions_are_symplectic() {
        let j = symplectic_form(3);
        for (name, m) in catalog(3).unwrap() {
            let h = m.h_action();
            assert_eq!(int_matmul(&int_matmul(&transpose(&h), &j), &h), j, "{name}");
        }
    }

    #[test]
    fn torelli_search_examples() {
        let g = 2;
        let conj = vec![("conj_l".to_string(), catalog_entry(g, "conj_l").unwrap())];
        let found = torelli_search(g, &conj, 3, 10);
        assert!(!found.is_empty());
        let c = catalog_entry(g, "conj_l").unwrap();
        for (_, m) in &found {
            assert!((-3..=3).any(|p| c.pow(p) == *m));
        }

        let t1 = vec![("t1".to_string(), catalog_entry(g, "t1").unwrap())];
        assert!(torelli_search(g, &t1, 4, 10).is_empty());
    }

    #[test]
    fn catalog_expressions() {
        let m = catalog_expr(2, "mix1 sep1 mix1^-1").unwrap();
        let direct = catalog_entry(2, "sep1")
            .unwrap()
            .conj_by(&catalog_entry(2, "mix1").unwrap());
        assert_eq!(m, direct);
        assert_eq!(
            catalog_expr(2, "conj_l^2").unwrap(),
            catalog_entry(2, "conj_l").unwrap().pow(2)
        );
        assert!(catalog_expr(2, "nope").is_err());
    }

    #[test]
    fn automorphism_text_format() {
        let text = "# t1\na1 -> a1 b1\ninverse:\na1 -> a1 b1^-1\n";
        let c = parse_automorphism(text, 2).unwrap();
        let m = MappingClass::new(c).unwrap();
        assert_eq!(m, catalog_entry(2, "t1").unwrap());
        let back = parse_automorphism(&format_automorphism(&m), 2).unwrap();
        assert_eq!(MappingClass::new(back).unwrap(), m);

        let empty = parse_automorphism("", 2).unwrap();
        assert!(MappingClass::new(empty).unwrap().is_identity());

        let no_inverse = parse_automorphism("a1 -> a1 b1\n", 2).unwrap();
        assert!(no_inverse.inverse_images.is_none());

        match parse_automorphism("a1 -> a1 c7\n", 2) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (1, 10));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_automorphism("\n  z9 -> a1\n", 2) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
