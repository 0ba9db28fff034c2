//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torelli::bar::{antisym_cycle, bar_boundary, cap_d2, BarChain};
use torelli::ce::{
    act, ce_boundary, check_boundary_squared, extended_differential, homology_dims,
    read_h_tensor_l, reduce_mod_gl, weight_span, RankMethod, WedgeChain,
};
use torelli::cli::DEFAULT_SUITE;
use torelli::hall::{hall_dims, FreeLie, LieElement};
use torelli::homs::{
    bounding_chain, calibrate, calibrate_eps, crossed_check, johnson, morita, morita_from_chain,
    perturb_bounding_chain, verify_morita_johnson,
};
use torelli::malcev::{Nilpotent, NormalForm};
use torelli::rational::q;
use torelli::word::{
    catalog, catalog_entry, catalog_expr, torelli_search, Generator, Letter, MappingClass, Word,
};

type Check = std::result::Result<String, String>;

const MAX_TERMS: usize = 1 << 22;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn random_word(rng: &mut ChaCha8Rng, g: usize, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = Word::new((0..len).map(|_| {
            let l = Letter::pos(Generator::from_index(rng.gen_range(0..2 * g)));
            if rng.gen_bool(0.5) {
                l.inv()
            } else {
                l
            }
        }));
        if !w.is_identity() {
            return w;
        }
    }
}

fn random_wedge(alg: &FreeLie, degree: usize, terms: usize, rng: &mut ChaCha8Rng) -> WedgeChain {
    WedgeChain::from_terms(
        alg.class(),
        degree,
        (0..terms).map(|_| {
            let t: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..alg.dim())).collect();
            (t, q(rng.gen_range(-3..=3)))
        }),
    )
}

/// Lyndon words counted by brute force: strictly smaller than every proper
/// rotation.
fn brute_force_lyndon_count(n: usize, len: usize) -> usize {
    let total = n.pow(len as u32);
    let mut count = 0;
    let mut w = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for i in (0..len).rev() {
            w[i] = c % n;
            c /= n;
        }
        if (1..len).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
            w < rot
        }) {
            count += 1;
        }
    }
    count
}

fn c1_hall_dimensions() -> Check {
    let start = Instant::now();
    for n in [2, 4, 6] {
        let dims = hall_dims(n, 6);
        for len in 1..=6 {
            let oracle = brute_force_lyndon_count(n, len);
            ensure(
                dims[len - 1] == oracle,
                format!("n={n} weight {len}: {} vs {oracle}", dims[len - 1]),
            )?;
        }
    }
    ensure(hall_dims(4, 4) == vec![4, 6, 20, 60], "n=4 dims")?;
    within(start, Duration::from_secs(10))?;
    Ok("n ∈ {2,4,6}, weights ≤ 6".to_string())
}

fn c2_boundary_squared() -> Check {
    let start = Instant::now();
    let mut wedges = 0;
    let mut blocks = 0;
    for g in 1..=3 {
        for k in 2..=4 {
            let alg = FreeLie::get(2 * g, k - 1);
            for degree in 2..=4 {
                for w in weight_span(&alg, degree) {
                    wedges += check_boundary_squared(&alg, degree, w)
                        .map_err(|e| format!("g={g} k={k}: {e}"))?;
                    blocks += 1;
                }
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{wedges} basis wedges in {blocks} weight blocks"))
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c3_abelian_homology() -> Check {
    for g in 1..=3 {
        let t = homology_dims(g, 2, 4, RankMethod::Sparse, 1 << 20).map_err(|e| e.to_string())?;
        let expect: Vec<usize> = (0..=4).map(|n| binomial(2 * g, n)).collect();
        ensure(
            t.total == expect,
            format!("g={g}: {:?} vs {expect:?}", t.total),
        )?;
        for k in 2..=4 {
            let t =
                homology_dims(g, k, 1, RankMethod::Sparse, 1 << 20).map_err(|e| e.to_string())?;
            ensure(
                t.total == vec![1, 2 * g],
                format!("g={g} k={k}: {:?}", t.total),
            )?;
        }
    }
    Ok("g ≤ 3".to_string())
}

fn c4_group_model() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 2..=5 {
        let nil = Nilpotent::get(2, k).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let (u, v, w) = (
                random_word(&mut rng, 2, 10),
                random_word(&mut rng, 2, 10),
                random_word(&mut rng, 2, 10),
            );
            let (x, y, z) = (nil.log_word(&u), nil.log_word(&v), nil.log_word(&w));
            ensure(
                nil.mul(&nil.mul(&x, &y), &z) == nil.mul(&x, &nil.mul(&y, &z)),
                format!("associativity at k={k}"),
            )?;
            ensure(nil.mul(&x, &nil.inv(&x)) == nil.identity(), "inverse")?;
            ensure(nil.mul(&nil.identity(), &x) == x, "identity")?;
            let (a, b, c) = (
                nil.word_normal_form(&u),
                nil.word_normal_form(&v),
                nil.word_normal_form(&w),
            );
            ensure(
                nil.nf_mul(&nil.nf_mul(&a, &b), &c) == nil.nf_mul(&a, &nil.nf_mul(&b, &c)),
                "collected associativity",
            )?;
            ensure(
                nil.nf_mul(&a, &nil.nf_inv(&a)).is_identity(),
                "collected inverse",
            )?;
        }
    }
    let nil = Nilpotent::get(2, 5).map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let (u, v) = (random_word(&mut rng, 2, 12), random_word(&mut rng, 2, 12));
        ensure(
            nil.log_word(&u.mul(&v)) == nil.mul(&nil.log_word(&u), &nil.log_word(&v)),
            "log_word multiplicativity",
        )?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("k ≤ 5, 100 triples per level, 200 word pairs".to_string())
}

fn c5_cocycle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [2, 3] {
        let nil = Nilpotent::get(2, k).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let (a, b, c) = (
                nil.word_normal_form(&random_word(&mut rng, 2, 8)),
                nil.word_normal_form(&random_word(&mut rng, 2, 8)),
                nil.word_normal_form(&random_word(&mut rng, 2, 8)),
            );
            let cc =
                |x: &NormalForm, y: &NormalForm| nil.cocycle_nf(x, y).map_err(|e| e.to_string());
            let lhs = cc(&a, &b)?.add(&cc(&nil.nf_mul(&a, &b), &c)?);
            let rhs = cc(&b, &c)?.add(&cc(&a, &nil.nf_mul(&b, &c))?);
            ensure(lhs == rhs, format!("cocycle identity at k={k}"))?;
            ensure(cc(&a, &b)?.is_integral(), "integrality")?;
        }
    }
    Ok("k ∈ {2,3}, 100 triples each".to_string())
}

fn c6_sign_calibration() -> Check {
    let start = Instant::now();
    let eps = calibrate_eps(2).map_err(|e| e.to_string())?;
    let nil = Nilpotent::get(2, 2).map_err(|e| e.to_string())?;
    let up = FreeLie::get(4, 2);
    let low = FreeLie::get(4, 1);
    let compare = |x: &[i64], y: &[i64], w: &[i64]| -> std::result::Result<(), String> {
        let nf = |v: &[i64]| NormalForm(v.to_vec());
        let z = antisym_cycle(&nf(x), &nf(y), &nf(w));
        let cap = cap_d2(&nil, &z, eps).map_err(|e| e.to_string())?;
        let lie =
            |v: &[i64]| LieElement::from_terms(1, v.iter().enumerate().map(|(i, &c)| (i, q(c))));
        let c = WedgeChain::wedge(low.class(), &[lie(x), lie(y), lie(w)]);
        let d = read_h_tensor_l(
            &up,
            2,
            &extended_differential(4, &c).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(cap == d, format!("mismatch at {x:?} {y:?} {w:?}"))
    };
    let unit = |i: usize| {
        let mut v = vec![0; 4];
        v[i] = 1;
        v
    };
    for t in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        compare(&unit(t[0]), &unit(t[1]), &unit(t[2]))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let mut v = || (0..4).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>();
        let (x, y, w) = (v(), v(), v());
        compare(&x, &y, &w)?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "ε = {eps} on 4 generator triples and 20 random triples"
    ))
}

fn c7_flagship() -> Check {
    let start = Instant::now();
    let cal = calibrate(2, MAX_TERMS).map_err(|e| e.to_string())?;
    let mut passed = 0;
    let mut distinct = BTreeSet::new();
    for expr in DEFAULT_SUITE {
        let phi = catalog_expr(2, expr).map_err(|e| e.to_string())?;
        let v = verify_morita_johnson(&phi, 3, cal, MAX_TERMS).map_err(|e| e.to_string())?;
        ensure(v.holds, format!("{expr} fails"))?;
        passed += 1;
        distinct.insert(format!("{:?}", v.johnson.values));
    }
    ensure(passed >= 8, "fewer than 8 instances")?;
    ensure(
        distinct.len() >= 8,
        format!("only {} distinct Johnson values", distinct.len()),
    )?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "δ = {} frozen on sep1; {passed} instances, {} distinct values",
        cal.delta,
        distinct.len(),
    ))
}

fn c8_closed_forms() -> Check {
    let alg = FreeLie::get(4, 3);
    let br = |x: &LieElement, y: &LieElement| alg.bracket(x, y).unwrap();
    let x: Vec<LieElement> = (0..4).map(|i| alg.generator(i)).collect();
    let omega = br(&x[0], &x[1]).add(&br(&x[2], &x[3]));
    let conj = johnson(&catalog_entry(2, "conj_l").map_err(|e| e.to_string())?, 3)
        .map_err(|e| e.to_string())?;
    for j in 0..4 {
        ensure(
            conj.values[j] == br(&omega, &x[j]),
            format!("conj_l on generator {j}"),
        )?;
    }
    let sep = johnson(&catalog_entry(2, "sep1").map_err(|e| e.to_string())?, 3)
        .map_err(|e| e.to_string())?;
    let c = br(&x[0], &x[1]);
    ensure(sep.values[0] == br(&c, &x[0]), "sep1 on a1")?;
    ensure(sep.values[1] == br(&c, &x[1]), "sep1 on b1")?;
    ensure(
        sep.values[2].is_zero() && sep.values[3].is_zero(),
        "sep1 on handle 2",
    )?;
    Ok("τ₃(conj_ℓ) and τ₃(sep₁) match bracket expressions".to_string())
}

fn c9_kernel_law() -> Check {
    let cat = catalog(2).map_err(|e| e.to_string())?;
    let gens: Vec<(String, MappingClass)> = cat
        .iter()
        .filter(|(n, _)| ["t1", "t2", "s1", "s2", "mix1"].contains(&n.as_str()))
        .cloned()
        .collect();
    let mut elements = torelli_search(2, &gens, 10, 20);
    let searched = elements.len();
    for expr in [
        "sep1",
        "conj_l",
        "sep1 conj_l",
        "conj_l^2",
        "mix1 sep1 mix1^-1 sep1",
        "sep1^3 conj_l^-1",
    ] {
        elements.push((
            expr.to_string(),
            catalog_expr(2, expr).map_err(|e| e.to_string())?,
        ));
    }
    let mut checks = 0;
    let (mut zero, mut nonzero) = (0, 0);
    for k in [2, 3] {
        let nil = Nilpotent::get(2, k).map_err(|e| e.to_string())?;
        let next = Nilpotent::get(2, k + 1).map_err(|e| e.to_string())?;
        for (name, phi) in &elements {
            if !nil.is_in_torelli(phi) {
                continue;
            }
            let tau = johnson(phi, k).map_err(|e| e.to_string())?;
            ensure(tau.is_integral(), format!("{name}: non-integral"))?;
            ensure(
                tau.is_zero() == next.is_in_torelli(phi),
                format!("{name} at k={k}"),
            )?;
            if tau.is_zero() {
                zero += 1;
            } else {
                nonzero += 1;
            }
            checks += 1;
        }
    }
    ensure(checks >= 20, format!("only {checks} checks"))?;
    Ok(format!("{checks} checks ({searched} searched elements), {zero} in the next Torelli group, {nonzero} not"))
}

fn c10_extended_differential() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in [2, 3] {
        let alg = FreeLie::get(4, k - 1);
        for _ in 0..50 {
            let w = random_wedge(&alg, 4, 4, &mut rng);
            let d = ce_boundary(&alg, &w).map_err(|e| e.to_string())?;
            ensure(
                extended_differential(4, &d)
                    .map_err(|e| e.to_string())?
                    .is_zero(),
                format!("d̃²∂ ≠ 0 at k={k}"),
            )?;
        }
    }
    let cat = catalog(2).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for k in [2, 3] {
        let nil = Nilpotent::get(2, k).map_err(|e| e.to_string())?;
        let up_nil = Nilpotent::get(2, k + 1).map_err(|e| e.to_string())?;
        let alg = nil.algebra().clone();
        let up = up_nil.algebra().clone();
        let chains: Vec<WedgeChain> = (0..20)
            .map(|_| random_wedge(&alg, 3, 4, &mut rng))
            .collect();
        for (name, phi) in &cat {
            let m = nil.induced_lie_auto(phi);
            let m_up = up_nil.induced_lie_auto(phi);
            for c in &chains {
                let lhs = extended_differential(4, &act(&m, c)).map_err(|e| e.to_string())?;
                let rhs = reduce_mod_gl(
                    &up,
                    &act(
                        &m_up,
                        &extended_differential(4, c).map_err(|e| e.to_string())?,
                    ),
                );
                ensure(lhs == rhs, format!("{name} at k={k}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "100 boundaries killed; {checks} equivariance checks"
    ))
}

fn c11_morita_stability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let nil = Nilpotent::get(2, 3).map_err(|e| e.to_string())?;
    let eps = calibrate_eps(2).map_err(|e| e.to_string())?;
    for (trial, name) in (0..10).zip(["conj_l", "sep1"].iter().cycle()) {
        let phi = catalog_entry(2, name).map_err(|e| e.to_string())?;
        let d = bounding_chain(&phi, MAX_TERMS).map_err(|e| e.to_string())?;
        let base = morita_from_chain(&nil, &d, eps).map_err(|e| e.to_string())?;
        let mut w = BarChain::zero(4);
        for _ in 0..3 {
            w.add_term(
                (0..4).map(|_| random_word(&mut rng, 2, 4)).collect(),
                rng.gen_range(-2..=2),
            );
        }
        let perturbed = perturb_bounding_chain(&d, &w);
        let other = morita_from_chain(&nil, &perturbed, eps).map_err(|e| e.to_string())?;
        ensure(
            other.cycle != base.cycle || w.is_zero(),
            format!("trial {trial}: perturbation had no effect"),
        )?;
        ensure(
            other.d2_invariant == base.d2_invariant,
            format!("trial {trial} ({name})"),
        )?;
    }
    Ok("10 perturbations by pushed boundaries".to_string())
}

fn c12_crossed_checker() -> Check {
    // S₄ permuting the coordinates of ℤ⁴.
    let mut perms: Vec<[usize; 4]> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        perms.push(p);
                    }
                }
            }
        }
    }
    let mul = |p: &[usize; 4], r: &[usize; 4]| [p[r[0]], p[r[1]], p[r[2]], p[r[3]]];
    let act = |p: &[usize; 4], v: &[i64; 4]| {
        let mut out = [0; 4];
        for i in 0..4 {
            out[p[i]] = v[i];
        }
        out
    };
    let add = |a: &[i64; 4], b: &[i64; 4]| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..50 {
        let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let mut samples: Vec<([usize; 4], [i64; 4])> = perms
            .iter()
            .map(|p| {
                let gm = act(p, &m);
                (*p, std::array::from_fn(|i| gm[i] - m[i]))
            })
            .collect();
        ensure(
            crossed_check(&samples, mul, act, add).holds,
            format!("coboundary rejected in trial {trial}"),
        )?;
        let at = rng.gen_range(0..samples.len());
        let slot = rng.gen_range(0..4);
        samples[at].1[slot] += if rng.gen_bool(0.5) { 1 } else { -1 };
        ensure(
            !crossed_check(&samples, mul, act, add).holds,
            format!("perturbation accepted in trial {trial}"),
        )?;
    }
    Ok("50 coboundaries accepted, 50 perturbations rejected".to_string())
}

fn c13_heap() -> Check {
    let phi = catalog_entry(2, "conj_l").map_err(|e| e.to_string())?;
    let eps = calibrate_eps(2).map_err(|e| e.to_string())?;
    let m = morita(&phi, 3, eps, MAX_TERMS).map_err(|e| e.to_string())?;
    let nil = Nilpotent::get(2, 3).map_err(|e| e.to_string())?;
    ensure(
        bar_boundary(&*nil, &m.cycle).is_zero(),
        "cycle has a boundary",
    )?;
    ensure(!m.d2_invariant.is_zero(), "d² invariant vanishes")?;
    ensure(nil.is_in_torelli(&phi), "conj_l ∉ I(3)")?;
    ensure(
        !Nilpotent::get(2, 4)
            .map_err(|e| e.to_string())?
            .is_in_torelli(&phi),
        "conj_l ∈ I(4)",
    )?;
    Ok("d² of τ̃₃(conj_ℓ) ≠ 0 and conj_ℓ ∈ I(3) ∖ I(4)".to_string())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("Hall dimensions", c1_hall_dimensions),
        ("CE boundary squares to zero", c2_boundary_squared),
        ("Abelian homology", c3_abelian_homology),
        ("BCH group model", c4_group_model),
        ("Extension cocycle", c5_cocycle),
        ("Cap sign calibration", c6_sign_calibration),
        ("Johnson from Morita (flagship)", c7_flagship),
        ("Closed-form Johnson values", c8_closed_forms),
        ("Kernel law", c9_kernel_law),
        (
            "Extended differential well-defined and equivariant",
            c10_extended_differential,
        ),
        ("Morita stability", c11_morita_stability),
        ("Crossed-homomorphism checker", c12_crossed_checker),
        ("Heap consistency", c13_heap),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!(
                "PASS {:>2} {name}: {detail} [{:.2?}]",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why} [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
