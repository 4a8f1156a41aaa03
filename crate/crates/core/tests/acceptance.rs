//! Acceptance criteria 1–14: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nctriples_core::algebra::{
    operator_norm, random_element, represent, represent_twisted, AlgebraElement, Cocycle, Operator,
};
use nctriples_core::category::{build_p_form, check_fluctuation_compat, check_p_form_intertwining};
use nctriples_core::functor::{
    check_functor_laws, check_linearization_bound, functor_morphism, left_exactness_witness, relator_morphisms,
    ObjectSpec, RelatorWeights,
};
use nctriples_core::groups::{BallIndex, GroupElement, GroupHom, GroupModel};
use nctriples_core::triple::{
    assemble_triple, commutator_norm, double_triple, heat_trace, ko_signature, regularity_estimates, verify_grading,
    verify_real_structure, TripleModel,
};
use nctriples_core::weights::{
    check_dirac_weight, check_length_axioms, decompose_weight, pushforward_length, quotient_length, Subgroup,
    WeightModel,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z() -> Arc<GroupModel> {
    Arc::new(GroupModel::integers())
}

fn cyclic(n: u64) -> Arc<GroupModel> {
    Arc::new(GroupModel::Cyclic(n))
}

fn idx(i: usize) -> GroupElement {
    GroupElement::Index(i)
}

fn triple(weight: &WeightModel, radius: u32) -> TripleModel {
    let g = weight.group().clone();
    let gens = g.canonical_generators();
    assemble_triple(g, weight, radius, &gens).unwrap()
}

fn word_length(g: &Arc<GroupModel>) -> WeightModel {
    WeightModel::standard_length(g.clone()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = triple(&word_length(&z()), 40);
    for x in 1..=3i64 {
        let c = commutator_norm(&t, &GroupElement::int(x)).map_err(|e| e.to_string())?;
        // Oracle: sup over the ball of |ω(x + y) − ω(y)| with both ends inside.
        let oracle = (-40i64..=40)
            .filter(|y| (x + y).abs() <= 40)
            .map(|y| ((x + y).abs() - y.abs()).abs())
            .max()
            .unwrap() as f64;
        ensure(c.computed == oracle && c.analytic == oracle && oracle == x as f64, || {
            format!("x = {x}: computed {}, sup {}, oracle {oracle}", c.computed, c.analytic)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("‖[D, π(δ_x)]‖ = 1, 2, 3 exactly in {} ms", elapsed.as_millis()))
}

fn criterion_2() -> Outcome {
    let mut pairs = 0usize;
    for (g, r) in [(Arc::new(GroupModel::FreeAbelian(2)), 10), (Arc::new(GroupModel::Free(2)), 5)] {
        let w = word_length(&g);
        let ball = BallIndex::canonical(g.clone(), r).unwrap();
        let probes: Vec<GroupElement> = ball.elements().to_vec();
        let report = check_dirac_weight(&w, &ball, &probes).map_err(|e| e.to_string())?;
        ensure(report.passed("length_bound"), || format!("{}: {:?}", g.describe(), report.check("length_bound")))?;
        // Oracle over all ball pairs, both translation sides.
        let values: Vec<f64> = ball.elements().iter().map(|x| ball.word_length_of(x).unwrap() as f64).collect();
        for (i, x) in ball.elements().iter().enumerate() {
            let lx = values[i];
            for (j, y) in ball.elements().iter().enumerate() {
                for xy in [g.multiply(x, y), g.multiply(y, x)] {
                    if let Some(k) = ball.position(&xy) {
                        pairs += 1;
                        ensure((values[k] - values[j]).abs() <= lx, || {
                            format!("{}: x = {}, y = {}", g.describe(), g.label(x), g.label(y))
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("zero violations over {pairs} ordered ball pairs"))
}

/// Weights for criteria 3 and 4: random tables on small cyclic groups plus standard weights on ℤ.
fn real_structure_corpus() -> Vec<(WeightModel, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for i in 0..240 {
        let n = 2 + (i % 5) as u64;
        let g = cyclic(n);
        let values: Vec<f64> = if i % 4 == 0 {
            vec![rng.gen_range(-3..=3) as f64; n as usize]
        } else {
            (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect()
        };
        out.push((WeightModel::table(g, values).unwrap(), n as u32));
    }
    let zg = z();
    for (c, a) in [(0.0, 1.0), (2.0, -3.0), (-1.5, 0.5), (4.0, 0.0)] {
        out.push((WeightModel::affine(zg.clone(), c, vec![a]).unwrap(), 8));
    }
    for a in [1.0, 2.0, -1.0] {
        out.push((WeightModel::hom(zg.clone(), vec![a]).unwrap(), 8));
    }
    for c in [0.0, 5.0] {
        out.push((WeightModel::constant(zg.clone(), c), 8));
    }
    out.push((word_length(&zg), 8));
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let corpus = real_structure_corpus();
    let (mut holds, mut fails) = (0, 0);
    for (k, (w, r)) in corpus.iter().enumerate() {
        let t = triple(w, *r);
        let report = verify_real_structure(&t, 5, k as u64).map_err(|e| e.to_string())?;
        let fo = report.check("first_order").ok_or("no first_order check")?;
        ensure(fo.value("exhaustive") == Some(1.0), || format!("#{k} not exhaustive"))?;
        let decomposed = decompose_weight(w, t.ball()).map_err(|e| e.to_string())?.succeeded();
        ensure(report.first_order == decomposed, || {
            format!("#{k} {}: first order {} but decomposition {decomposed}", w.describe(), report.first_order)
        })?;
        if report.first_order {
            holds += 1;
            continue;
        }
        fails += 1;
        // Replay: [D, π(δ_x)]Jπ(δ_y)J δ_z = (ω(xzy⁻¹) − ω(zy⁻¹)) δ_{xzy⁻¹},
        // Jπ(δ_y)J[D, π(δ_x)] δ_z = (ω(xz) − ω(z)) δ_{xzy⁻¹}.
        let wit = fo.witness.as_ref().ok_or_else(|| format!("#{k} failure without witness"))?;
        let g = w.group();
        let (x, y, zz) = (&wit.elements[0], &wit.elements[1], &wit.elements[2]);
        let zy = g.multiply(zz, &g.inverse(y));
        let ev = |e: &GroupElement| w.evaluate(e).unwrap();
        let lhs = ev(&g.multiply(x, &zy)) - ev(&zy);
        let rhs = ev(&g.multiply(x, zz)) - ev(zz);
        ensure(lhs != rhs && wit.values == vec![lhs, rhs], || {
            format!("#{k}: witness {:?} does not replay ({lhs}, {rhs})", wit.values)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    ensure(holds > 0 && fails > 0, || "corpus does not exercise both verdicts".into())?;
    Ok(format!(
        "{} weights ({holds} hold, {fails} fail, witnesses replayed) in {} ms",
        corpus.len(),
        elapsed.as_millis()
    ))
}

fn criterion_4() -> Outcome {
    let corpus = real_structure_corpus();
    for (k, (w, r)) in corpus.iter().enumerate() {
        let ball = BallIndex::canonical(w.group().clone(), *r).unwrap();
        let d = decompose_weight(w, &ball).map_err(|e| e.to_string())?;
        ensure(d.conditions.len() == 4 && d.agree(), || {
            let states: Vec<String> = d.conditions.iter().map(|c| format!("{}={}", c.name, c.status)).collect();
            format!("#{k} {}: {}", w.describe(), states.join(", "))
        })?;
    }
    Ok(format!("four conditions agree on all {} weights", corpus.len()))
}

/// Injective `ℤ/a → ℤ/b`, `1 ↦ m·(b/a)`.
fn mono(a: u64, b: u64, m: u64) -> GroupHom {
    GroupHom::from_images(cyclic(a), cyclic(b), &[(idx(1), idx((m * (b / a)) as usize % b as usize))]).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tops = [4u64, 6, 8, 9, 10, 12, 14, 15, 16];
    for chain in 0..20 {
        let c = tops[rng.gen_range(0..tops.len())];
        let divisors = |n: u64| (2..=n).filter(|d| n.is_multiple_of(*d)).collect::<Vec<_>>();
        let b = divisors(c)[rng.gen_range(0..divisors(c).len())];
        let a = divisors(b)[rng.gen_range(0..divisors(b).len())];
        let unit = |n: u64, rng: &mut ChaCha8Rng| loop {
            let m = rng.gen_range(1..=n);
            if gcd(m, n) == 1 {
                break m;
            }
        };
        let phi = mono(a, b, unit(a, &mut rng));
        let psi = mono(b, c, unit(b, &mut rng));
        let wk = word_length(&cyclic(c));
        let wh = WeightModel::pullback(&psi, &wk).unwrap();
        let wg = WeightModel::pullback(&phi, &wh).unwrap();
        let (g, h, k) = (
            ObjectSpec::canonical(wg, 0),
            ObjectSpec::canonical(wh, 0),
            ObjectSpec::canonical(wk, 0),
        );
        let laws = check_functor_laws(&phi, &psi, &g, &h, &k).map_err(|e| format!("chain {chain}: {e}"))?;
        for l in &laws {
            ensure(l.passed(), || format!("chain {chain} ℤ/{a}→ℤ/{b}→ℤ/{c}: {l:?}"))?;
        }
        // Oracle: ΦᴴΦ = I entrywise, computed by hand from the matrix.
        for (hom, s, t) in [(&phi, &g, &h), (&psi, &h, &k)] {
            let m = functor_morphism(hom, s, t, false).map_err(|e| e.to_string())?.morphism;
            let n = m.phi.cols();
            for i in 0..n {
                for j in 0..n {
                    let dot: Complex64 = (0..m.phi.rows()).map(|r| m.phi.get(r, i).conj() * m.phi.get(r, j)).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    ensure(dot == Complex64::new(want, 0.0), || format!("chain {chain}: Gram entry ({i}, {j}) = {dot}"))?;
                }
            }
            ensure(left_exactness_witness(hom, s, t).map_err(|e| e.to_string())?.passed(), || {
                format!("chain {chain}: not monic")
            })?;
        }
    }
    Ok("20 chains: composition, identity and isometry exact".into())
}

fn full_suite(pair: &nctriples_core::functor::RelatorPair) -> Result<(), String> {
    for e in &pair.entries {
        ensure(e.morphism.is_some() && e.checks.iter().all(|c| c.passed()), || {
            let bad: Vec<&str> = e.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            format!("splitting {:?}: failing {bad:?}", e.splitting.table())
        })?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let epi = |n: u64, m: u64| GroupHom::from_images(cyclic(n), cyclic(m), &[(idx(1), idx(1))]).unwrap();
    let pullback = RelatorWeights::Pullback;

    let r = relator_morphisms(&epi(6, 3), &word_length(&cyclic(6)), &pullback).map_err(|e| e.to_string())?;
    ensure(r.entries.len() == 1, || format!("ℤ/6→ℤ/3: {} splittings", r.entries.len()))?;
    ensure(r.entries[0].splitting.apply(&idx(1)) == idx(4), || "ψ(1) ≠ 4".into())?;
    full_suite(&r)?;

    let k4 = Arc::new(GroupModel::product(GroupModel::Cyclic(2), GroupModel::Cyclic(2)));
    let proj = GroupHom::from_fn(k4.clone(), cyclic(2), |x| match x {
        GroupElement::Pair(a, _) => a.as_ref().clone(),
        other => panic!("unexpected element {other:?}"),
    })
    .unwrap();
    let r = relator_morphisms(&proj, &word_length(&k4), &pullback).map_err(|e| e.to_string())?;
    ensure(r.entries.len() == 2, || format!("K4→ℤ/2: {} splittings", r.entries.len()))?;
    full_suite(&r)?;

    let r = relator_morphisms(&epi(4, 2), &word_length(&cyclic(4)), &pullback).map_err(|e| e.to_string())?;
    ensure(r.entries.is_empty(), || format!("ℤ/4→ℤ/2: {} splittings", r.entries.len()))?;
    Ok("splittings 1 (ψ(1) = 4), 2, 0; every relator pair passes".into())
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (n, m) in [(4u64, 2u64), (6, 3)] {
        let hom = GroupHom::from_images(cyclic(n), cyclic(m), &[(idx(1), idx(1))]).unwrap();
        let rep = check_linearization_bound(&hom, 100, 17).map_err(|e| e.to_string())?;
        let kernel = (n / m) as usize;
        ensure(rep.checks.iter().all(|c| c.passed()), || format!("ℤ/{n}→ℤ/{m}: {:?}", rep.checks))?;
        ensure(rep.kernel_order == kernel, || format!("|ker| = {}", rep.kernel_order))?;
        ensure(rep.max_ratio <= kernel as f64, || format!("ratio {}", rep.max_ratio))?;
        ensure(rep.witness_ratio == kernel as f64, || format!("witness ratio {}", rep.witness_ratio))?;
        // Oracle: A_φ is onto ℂ[H], so dim ker = |G| − |H| = |G| − |G/ker|.
        let expected = (n - m) as usize;
        ensure(rep.kernel_dimension == expected && rep.expected_dimension == expected, || {
            format!("kernel dimension {} / {}", rep.kernel_dimension, rep.expected_dimension)
        })?;
        parts.push(format!("ℤ/{n}→ℤ/{m}: ratio ≤ {kernel}, dim ker = {expected}"));
    }
    Ok(parts.join("; "))
}

fn criterion_8() -> Outcome {
    let t = triple(&word_length(&z()), 8);
    let h = heat_trace(&t, 1.0).map_err(|e| e.to_string())?;
    let oracle: f64 = 1.0 + (1..=8).map(|n: i32| 2.0 * (-(n * n) as f64).exp()).sum::<f64>();
    ensure((h.value - oracle).abs() < 1e-6 && (h.value - 1.7726372).abs() < 1e-6, || {
        format!("value {} oracle {oracle}", h.value)
    })?;
    Ok(format!("Tr e^(−D²) = {:.7}", h.value))
}

fn criterion_9() -> Outcome {
    let c5 = cyclic(5);
    let doubled = double_triple(&triple(&WeightModel::constant(c5, 3.0), 5)).unwrap();
    let checks = verify_grading(&doubled, 50, 9).map_err(|e| e.to_string())?;
    for c in &checks {
        let residual = c.value("residual").or(c.value("max_residual")).unwrap_or(0.0);
        ensure(c.passed() && residual == 0.0, || format!("{c:?}"))?;
    }
    let ko = ko_signature(&doubled).map_err(|e| e.to_string())?;
    ensure(ko.compatible == vec![0], || format!("doubled ℤ/5: KO {:?}", ko.compatible))?;

    let hom = triple(&WeightModel::hom(z(), vec![1.0]).unwrap(), 6);
    let ko = ko_signature(&hom).map_err(|e| e.to_string())?;
    ensure(ko.compatible == vec![1], || format!("ℤ, ω = n: KO {:?}", ko.compatible))?;
    let ko = ko_signature(&double_triple(&hom).unwrap()).map_err(|e| e.to_string())?;
    ensure(ko.compatible.is_empty(), || format!("doubled ℤ: KO {:?}", ko.compatible))?;
    Ok("Γ exact on 50 samples; KO {0}, {1}, ∅".into())
}

/// `[π(f), Jπ(g*)J]` with `J` built directly as `δ_x ↦ δ_{x⁻¹}`.
fn zeroth_order_oracle(t: &TripleModel, f: &AlgebraElement, g: &AlgebraElement) -> f64 {
    let ball = t.ball();
    let n = ball.len();
    let mut j = Operator::zeros(n, n).unwrap();
    for i in 0..n {
        j.set(ball.position(&ball.group().inverse(ball.element(i))).unwrap(), i, Complex64::new(1.0, 0.0));
    }
    let j = j.into_antilinear();
    let right = j.compose(&represent(&g.involution(), ball).unwrap()).unwrap().compose(&j).unwrap();
    let c = represent(f, ball).unwrap().commutator(&right).unwrap();
    let spread = f.support_radius(ball).unwrap() + g.support_radius(ball).unwrap();
    operator_norm(&c.restrict_columns(&ball.safe_indices(spread))).unwrap()
}

fn criterion_10() -> Outcome {
    let s3 = Arc::new(GroupModel::symmetric(3).unwrap());
    let cases = [
        (triple(&word_length(&z()), 10), "ℤ"),
        (triple(&WeightModel::table(s3, vec![0.0, 1.0, 1.0, 2.0, 2.0, 3.0]).unwrap(), 3), "S₃"),
    ];
    let mut worst: f64 = 0.0;
    for (t, name) in &cases {
        let r = verify_real_structure(t, 50, 10).map_err(|e| e.to_string())?;
        let c = r.check("zeroth_order").ok_or("no zeroth_order check")?;
        ensure(c.passed() && c.value("pairs") == Some(50.0), || format!("{name}: {c:?}"))?;
        worst = worst.max(c.value("max_residual").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let f = random_element(t.ball(), 2, 4, &mut rng);
            let g = random_element(t.ball(), 2, 4, &mut rng);
            let r = zeroth_order_oracle(t, &f, &g);
            worst = worst.max(r);
            ensure(r < 1e-12, || format!("{name}: oracle residual {r}"))?;
        }
    }
    Ok(format!("max residual {worst:e} over 2 × 50 pairs, library and oracle"))
}

fn criterion_11() -> Outcome {
    let z2 = Arc::new(GroupModel::FreeAbelian(2));
    let ball = BallIndex::canonical(z2.clone(), 6).unwrap();
    let u = Cocycle::bicharacter(0.5);
    let c = u.verify(&ball, 500, 11).map_err(|e| e.to_string())?;
    ensure(c.passed() && c.value("max_residual").unwrap_or(0.0) == 0.0, || format!("{c:?}"))?;
    let t = triple(&word_length(&z2), 6);
    let d = t.dirac_operator().unwrap();
    let mut worst: f64 = 0.0;
    for x in ball.elements() {
        let twisted = operator_norm(&d.commutator(&represent_twisted(x, &u, &ball).unwrap()).unwrap()).unwrap();
        let plain = commutator_norm(&t, x).unwrap().computed;
        worst = worst.max((twisted - plain).abs());
        ensure((twisted - plain).abs() <= 1e-12, || format!("x = {}: {twisted} vs {plain}", z2.label(x)))?;
    }
    Ok(format!("cocycle exact on 500 triples; {} commutator norms agree (max diff {worst:e})", ball.len()))
}

fn criterion_12() -> Outcome {
    let l = word_length(&z());
    for d in 2..=8u64 {
        let q = quotient_length(&l, &Subgroup::Multiples(d)).map_err(|e| e.to_string())?;
        let whole = BallIndex::whole_group(q.quotient.clone(), &q.quotient.canonical_generators()).unwrap();
        let axioms = check_length_axioms(&q.weight, &whole).map_err(|e| e.to_string())?;
        ensure(axioms.all_passed(), || format!("d = {d}: {:?}", axioms.checks))?;
        let hom = GroupHom::from_images(z(), cyclic(d), &[(GroupElement::int(1), idx(1))]).unwrap();
        let pf = pushforward_length(&hom, &l).map_err(|e| e.to_string())?;
        ensure(pf.agrees == Some(true), || format!("d = {d}: {:?}", pf.comparison))?;
        for k in 0..d {
            // Oracle: distance to the nearest multiple of d.
            let want = k.min(d - k) as f64;
            let got = q.weight.evaluate(&idx(k as usize)).map_err(|e| e.to_string())?;
            let pushed = pf.weight.evaluate(&idx(k as usize)).map_err(|e| e.to_string())?;
            ensure(got == want && pushed == want, || format!("d = {d}, k = {k}: {got}, {pushed}, want {want}"))?;
        }
        if d == 3 {
            let values: Vec<f64> = (0..3).map(|k| q.weight.evaluate(&idx(k)).unwrap()).collect();
            ensure(values == vec![0.0, 1.0, 1.0], || format!("ℤ/3: {values:?}"))?;
        }
    }
    Ok("d = 2..8: length axioms hold, push-forward = quotient, ℤ/3 gives {0,1,1}".into())
}

fn criterion_13() -> Outcome {
    let hom = mono(2, 4, 1);
    let w4 = word_length(&cyclic(4));
    let w2 = WeightModel::pullback(&hom, &w4).unwrap();
    let m = functor_morphism(&hom, &ObjectSpec::canonical(w2, 0), &ObjectSpec::canonical(w4, 0), false)
        .map_err(|e| e.to_string())?
        .morphism;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for p in 0..=2 {
        for _ in 0..20 {
            let terms: Vec<Vec<AlgebraElement>> = (0..3)
                .map(|_| (0..=p).map(|_| random_element(m.source.ball(), 1, 2, &mut rng)).collect())
                .collect();
            let c = check_p_form_intertwining(&m, &terms).map_err(|e| e.to_string())?;
            let r = c.value("max_residual").unwrap();
            worst = worst.max(r);
            ensure(c.passed() && r < 1e-12, || format!("p = {p}: {c:?}"))?;
        }
    }
    let image = |terms: &[Vec<AlgebraElement>]| -> Vec<Vec<AlgebraElement>> {
        terms.iter().map(|t| t.iter().map(|a| m.algebra_map.apply(a).unwrap()).collect()).collect()
    };
    for _ in 0..20 {
        let terms: Vec<Vec<AlgebraElement>> = (0..2)
            .map(|_| (0..2).map(|_| random_element(m.source.ball(), 1, 2, &mut rng)).collect())
            .collect();
        let a1 = build_p_form(&m.source, terms.clone()).map_err(|e| e.to_string())?;
        let a2 = build_p_form(&m.target, image(&terms)).map_err(|e| e.to_string())?;
        let r = check_fluctuation_compat(&m, &a1, &a2).map_err(|e| e.to_string())?;
        ensure(r.compatible && r.deformed.passed() && r.deformed.morphism.is_some(), || {
            format!("fluctuation: {:?} / {:?}", r.compatibility, r.deformed.checks)
        })?;
    }
    Ok(format!("60 form sets, max residual {worst:e}; 20 fluctuations compatible"))
}

fn criterion_14() -> Outcome {
    let t = triple(&word_length(&z()), 12);
    let entries = regularity_estimates(&t, &GroupElement::int(1), 4).map_err(|e| e.to_string())?;
    let depths: Vec<usize> = entries.iter().map(|e| e.depth).collect();
    ensure((1..=4).all(|d| depths.contains(&d)), || format!("depths {depths:?}"))?;
    for e in &entries {
        ensure(e.computed <= 1.0 && e.bound == 1.0 && e.holds(), || format!("{e:?}"))?;
    }
    Ok(format!("{} iterated commutators ≤ 1", entries.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("commutator-norm identity on ℤ", criterion_1),
        ("Dirac-weight bound for lengths", criterion_2),
        ("real-structure classification", criterion_3),
        ("four-way affine equivalence", criterion_4),
        ("functor laws on cyclic chains", criterion_5),
        ("splitting and relator counts", criterion_6),
        ("linearization bound and kernel", criterion_7),
        ("heat trace", criterion_8),
        ("doubled triple and KO sets", criterion_9),
        ("zeroth-order condition", criterion_10),
        ("twisted representation", criterion_11),
        ("quotient and push-forward lengths", criterion_12),
        ("p-forms and fluctuations", criterion_13),
        ("regularity estimates", criterion_14),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {}: {name} ({detail})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail})", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
