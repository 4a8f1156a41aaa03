use std::path::{Path, PathBuf};

use nctriples_core::algebra::{random_element, AlgebraElement, Operator};
use nctriples_core::category::{
    build_p_form, check_even_flag, check_fluctuation_compat, check_morphism, check_p_form_intertwining, check_real_flag,
    AlgebraMap, CategoryError, MorphismOptions,
};
use nctriples_core::functor::{
    check_functor_laws, check_linearization_bound, functor_morphism, functor_object, h_matrix, left_exactness_witness,
    relator_morphisms, FunctorError, ObjectSpec, RelatorPair, RelatorWeights,
};
use nctriples_core::groups::GroupHom;
use nctriples_core::report::{Check, Status};
use nctriples_core::triple::{
    assemble_triple, double_triple, grading_obstruction, heat_trace, ko_signature, regularity_check,
    regularity_estimates, verify_axioms, verify_grading, verify_real_structure, GradingKind, TripleError, TripleModel,
};
use nctriples_core::weights::{check_weighted_hom, ProperMethod, WeightModel};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{decimal, CheckRecord};
use crate::spec::{read_json, GroupSpec, HomSpec, InputError, PhiSpec, TripleSpec, WeightSpec};

pub struct Outcome {
    pub checks: Vec<CheckRecord>,
    pub summary: Option<Value>,
}

fn records(prefix: &str, checks: &[Check]) -> Vec<CheckRecord> {
    checks.iter().map(|c| CheckRecord::from_check(prefix, c)).collect()
}

fn build(spec: &TripleSpec) -> Result<TripleModel, InputError> {
    let b = spec.build()?;
    let t = assemble_triple(b.group, &b.weight, b.radius, &b.generators)?;
    Ok(if b.double { double_triple(&t)? } else { t })
}

pub fn triple_summary(t: &TripleModel) -> Value {
    let flags = t.flags();
    let proper = match flags.proper.proper {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    };
    let method = match flags.proper.method {
        ProperMethod::Analytic => "analytic",
        ProperMethod::Exhaustive => "exhaustive",
        ProperMethod::BallEvidence => "ball_evidence",
    };
    let basis: Vec<String> = (0..t.dimension()).map(|i| t.group().label(t.basis_element(i))).collect();
    let dirac: Vec<String> = t.dirac_diagonal().iter().map(|&v| decimal(v)).collect();
    json!({
        "group": t.group().describe(),
        "weight": t.weight().describe(),
        "radius": t.ball().radius(),
        "ball_size": t.ball().len(),
        "complete_ball": t.ball().is_complete(),
        "copies": t.copies(),
        "basis": basis,
        "dirac": dirac,
        "flags": {
            "proper": proper,
            "proper_method": method,
            "dirac": flags.dirac.as_str(),
            "spectral": t.is_spectral(),
        },
    })
}

pub fn build_triple(
    group: &Path,
    weight: &Path,
    radius: u32,
    gens: Option<&str>,
    double: bool,
    out: Option<&Path>,
) -> Result<Outcome, InputError> {
    let group_spec: GroupSpec = read_json(group)?;
    let weight_spec: WeightSpec = read_json(weight)?;
    let generators = gens.map(|g| g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    let mut spec = TripleSpec::Triple {
        group: group_spec,
        weight: weight_spec,
        radius,
        generators,
        double,
        summary: None,
    };
    let t = build(&spec)?;
    let axioms = verify_axioms(&t)?;
    let summary = triple_summary(&t);
    if let Some(path) = out {
        let TripleSpec::Triple { summary: s, .. } = &mut spec;
        *s = Some(summary.clone());
        let text = serde_json::to_string_pretty(&spec).expect("triple spec serializes");
        std::fs::write(path, text + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome {
        checks: records("axioms", &axioms.checks),
        summary: Some(summary),
    })
}

pub const VERIFY_CHECKS: [&str; 6] = ["axioms", "real", "ko", "regularity", "heat", "grading"];

/// Expands `all` and the `heat_trace` alias; rejects unknown names.
pub fn parse_check_list(text: &str, known: &[&str]) -> Result<Vec<String>, InputError> {
    let mut out: Vec<String> = Vec::new();
    for raw in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let name = if raw == "heat_trace" { "heat" } else { raw };
        if name == "all" {
            for k in known {
                if !out.iter().any(|o| o == k) {
                    out.push(k.to_string());
                }
            }
        } else if known.contains(&name) {
            if !out.iter().any(|o| o == name) {
                out.push(name.to_string());
            }
        } else {
            return Err(InputError(format!("unknown check {raw:?}; known: all, {}", known.join(", "))));
        }
    }
    if out.is_empty() {
        return Err(InputError("empty check list".into()));
    }
    Ok(out)
}

pub struct VerifyOptions {
    pub t: f64,
    pub x: Option<String>,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
}

pub fn verify(triple: &Path, checks: &[String], opts: &VerifyOptions) -> Result<Outcome, InputError> {
    let spec: TripleSpec = read_json(triple)?;
    let t = build(&spec)?;
    let mut out = Vec::new();
    let mut summary = serde_json::Map::new();
    summary.insert("triple".into(), triple_summary(&t));
    for name in checks {
        match name.as_str() {
            "axioms" => out.extend(records("axioms", &verify_axioms(&t)?.checks)),
            "real" => {
                let r = verify_real_structure(&t, opts.samples, opts.seed)?;
                out.extend(records("real", &r.checks));
                summary.insert("j_sign".into(), json!(r.j_sign));
            }
            "ko" => match ko_signature(&t) {
                Ok(ko) => {
                    let rel = |v: &[nctriples_core::triple::Commutation]| -> Vec<&str> { v.iter().map(|c| c.as_str()).collect() };
                    let mut c = Check::pass("ko").with_value("j_sign", ko.j_sign as f64);
                    c = c.with_detail(format!("compatible KO-dimensions {:?}", ko.compatible));
                    out.push(CheckRecord::from_check("", &c));
                    summary.insert(
                        "ko".into(),
                        json!({
                            "j_sign": ko.j_sign,
                            "dirac_relations": rel(&ko.dirac_relations),
                            "grading_relation": ko.grading_relation.as_deref().map(rel),
                            "compatible": ko.compatible,
                        }),
                    );
                }
                Err(TripleError::NoValidRealStructure(failing)) => {
                    // Same sampling as the signature computation, for the witness.
                    let real = verify_real_structure(&t, 20, 7)?;
                    let witness = real.checks.iter().find(|c| !c.passed()).and_then(|c| c.witness.clone());
                    let c = Check::new("ko", Status::Fail)
                        .with_witness(witness)
                        .with_detail(format!("no valid real structure: {failing}"));
                    out.push(CheckRecord::from_check("", &c));
                    summary.insert("ko".into(), Value::Null);
                }
                Err(e) => return Err(e.into()),
            },
            "regularity" => {
                let x = match &opts.x {
                    Some(text) => t.group().parse_element(text)?,
                    None => t
                        .ball()
                        .generators()
                        .first()
                        .cloned()
                        .ok_or_else(|| InputError("triple has no generators; pass --x".into()))?,
                };
                let entries = regularity_estimates(&t, &x, opts.depth)?;
                let spread = t.ball().word_length_of(&x).unwrap_or(0);
                let c = regularity_check(&entries, t.safe_radius(spread)).with_detail(format!("x = {}", t.group().label(&x)));
                out.push(CheckRecord::from_check("", &c));
            }
            "heat" => {
                let h = heat_trace(&t, opts.t)?;
                let status = if h.tail_small { Status::Pass } else { Status::Unknown };
                let c = Check::new("heat_trace", status)
                    .with_value("t", opts.t)
                    .with_value("value", h.value)
                    .with_value("last_shell_relative", h.last_shell_relative)
                    .with_safe_core(Some(t.ball().radius()));
                out.push(CheckRecord::from_check("", &c));
                summary.insert("heat_trace".into(), json!(h.value));
            }
            "grading" => {
                if t.grading().is_some() {
                    out.extend(records("grading", &verify_grading(&t, opts.samples, opts.seed)?));
                    summary.insert("grading".into(), json!("present"));
                } else {
                    let d = grading_obstruction(&t)?;
                    out.extend(records("grading", &d.checks));
                    let kind = match d.kind {
                        GradingKind::Obstructed => "obstructed",
                        GradingKind::ZeroWeight => "zero_weight",
                        GradingKind::Pairing { .. } => "pairing",
                    };
                    summary.insert("grading".into(), json!(kind));
                }
            }
            other => unreachable!("check list validated: {other}"),
        }
    }
    Ok(Outcome {
        checks: out,
        summary: Some(Value::Object(summary)),
    })
}

pub const MORPHISM_CHECKS: [&str; 5] = ["base", "real", "even", "pforms", "fluctuation"];

pub enum PhiSource {
    Hom(PathBuf),
    Phi(PathBuf),
}

pub struct MorphismArgs<'a> {
    pub source: &'a Path,
    pub target: &'a Path,
    pub phi: PhiSource,
    pub checks: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub allow_non_spectral: bool,
}

/// `H_ψ` on the ball bases, repeated per copy.
fn hom_phi(hom: &GroupHom, t1: &TripleModel, t2: &TripleModel) -> Result<Operator, InputError> {
    if t1.copies() != t2.copies() {
        return Err(InputError("source and target differ in doubling".into()));
    }
    let h = h_matrix(hom, t1.ball(), t2.ball())?;
    Ok(if t1.copies() == 2 { Operator::block_diagonal(&h, &h)? } else { h })
}

/// Every column is a standard basis vector.
fn is_hom_shaped(phi: &Operator) -> bool {
    (0..phi.cols()).all(|j| {
        let s = phi.column_support(j);
        s.len() == 1 && s[0].1 == Complex64::new(1.0, 0.0)
    })
}

fn random_terms(t: &TripleModel, degree: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<AlgebraElement>> {
    (0..count)
        .map(|_| (0..=degree).map(|_| random_element(t.ball(), 1, 2, rng)).collect())
        .collect()
}

fn image_terms(map: &AlgebraMap, terms: &[Vec<AlgebraElement>]) -> Result<Vec<Vec<AlgebraElement>>, CategoryError> {
    terms.iter().map(|t| t.iter().map(|a| map.apply(a)).collect()).collect()
}

pub fn morphism(args: &MorphismArgs<'_>) -> Result<Outcome, InputError> {
    let s1: TripleSpec = read_json(args.source)?;
    let s2: TripleSpec = read_json(args.target)?;
    let t1 = build(&s1)?;
    let t2 = build(&s2)?;
    let (map, phi, reference) = match &args.phi {
        PhiSource::Hom(path) => {
            let spec: HomSpec = read_json(path)?;
            let hom = spec.build()?;
            check_hom_ends(&hom, &t1, &t2)?;
            let phi = hom_phi(&hom, &t1, &t2)?;
            (AlgebraMap::HomInduced(hom), phi.clone(), Some(phi))
        }
        PhiSource::Phi(path) => {
            let spec: PhiSpec = read_json(path)?;
            let (phi, hom) = spec.build(t2.dimension(), t1.dimension())?;
            match hom {
                Some(hom) => {
                    check_hom_ends(&hom, &t1, &t2)?;
                    let reference = hom_phi(&hom, &t1, &t2).ok();
                    (AlgebraMap::HomInduced(hom), phi, reference)
                }
                None => {
                    if t1.group() != t2.group() {
                        return Err(InputError("Φ without a homomorphism needs source and target on one group".into()));
                    }
                    let reference = (t1.dimension() == t2.dimension())
                        .then(|| Operator::identity(t1.dimension()))
                        .transpose()?;
                    (AlgebraMap::Identity, phi, reference)
                }
            }
        }
    };
    let opts = MorphismOptions {
        allow_non_spectral: args.allow_non_spectral,
        samples: args.samples,
        seed: args.seed,
        ..MorphismOptions::default()
    };
    let report = check_morphism(&t1, &t2, &map, &phi, &opts)?;
    let mut out = records("base", &report.checks);
    let hom_induced_phi = reference.as_ref().is_some_and(|r| r == &phi);
    let mut summary = json!({
        "source": triple_summary(&t1),
        "target": triple_summary(&t2),
        "phi_shape": [phi.rows(), phi.cols()],
        "hom_shaped": is_hom_shaped(&phi),
        "hom_induced_phi": hom_induced_phi,
        "morphism": report.morphism.is_some(),
    });
    let Some(mut m) = report.morphism else {
        return Ok(Outcome {
            checks: out,
            summary: Some(summary),
        });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for name in &args.checks {
        match name.as_str() {
            "base" => {}
            "real" => out.push(CheckRecord::from_check("morphism", &check_real_flag(&mut m)?)),
            "even" => {
                let c = match check_even_flag(&mut m) {
                    Ok(c) => c,
                    Err(CategoryError::MissingStructure(what)) => Check::new("even", Status::Unknown).with_detail(what),
                    Err(e) => return Err(e.into()),
                };
                out.push(CheckRecord::from_check("morphism", &c));
            }
            "pforms" => {
                if !m.algebra_map.is_hom_induced() {
                    let c = Check::new("pforms", Status::Unknown).with_detail("algebra map is not hom-induced");
                    out.push(CheckRecord::from_check("", &c));
                    continue;
                }
                for p in 0..=2 {
                    let mut worst: Option<Check> = None;
                    for _ in 0..5 {
                        let terms = random_terms(&m.source, p, 2, &mut rng);
                        let c = check_p_form_intertwining(&m, &terms)?;
                        let replace = match &worst {
                            None => true,
                            Some(w) => w.passed() && !c.passed(),
                        };
                        if replace {
                            worst = Some(c);
                        }
                    }
                    let mut c = worst.expect("five term sets");
                    c.name = format!("degree_{p}");
                    out.push(CheckRecord::from_check("pforms", &c));
                }
            }
            "fluctuation" => {
                let terms = random_terms(&m.source, 1, 2, &mut rng);
                let a1 = build_p_form(&m.source, terms.clone())?;
                let a2 = build_p_form(&m.target, image_terms(&m.algebra_map, &terms)?)?;
                let r = check_fluctuation_compat(&m, &a1, &a2)?;
                let mut compat = r.compatibility.clone();
                compat.name = "compatibility".into();
                out.push(CheckRecord::from_check("fluctuation", &compat));
                out.extend(records("fluctuation", &r.warnings).into_iter().map(|mut c| {
                    // Self-adjointness of the potentials is advisory.
                    if c.is_fail() {
                        c.status = Status::Unknown.as_str().into();
                    }
                    c
                }));
                out.extend(records("fluctuation/deformed", &r.deformed.checks));
            }
            other => unreachable!("check list validated: {other}"),
        }
    }
    if let Value::Object(s) = &mut summary {
        s.insert("isometry".into(), json!(m.is_isometry()));
        s.insert("degenerate".into(), json!(m.is_degenerate()));
        s.insert("real".into(), json!(m.real_checked));
        s.insert("even".into(), json!(m.even_checked));
        s.insert("safe_radius".into(), json!(m.safe_radius));
    }
    Ok(Outcome {
        checks: out,
        summary: Some(summary),
    })
}

fn check_hom_ends(hom: &GroupHom, t1: &TripleModel, t2: &TripleModel) -> Result<(), InputError> {
    if hom.source() != t1.group() || hom.target() != t2.group() {
        return Err(InputError(format!(
            "homomorphism {} → {} does not match triples on {} and {}",
            hom.source().describe(),
            hom.target().describe(),
            t1.group().describe(),
            t2.group().describe()
        )));
    }
    Ok(())
}

fn split_paths(list: &str) -> Vec<PathBuf> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(PathBuf::from).collect()
}

/// A library refusal that is a verdict about the data rather than bad input.
fn functor_verdict(name: &str, e: FunctorError) -> Result<Check, InputError> {
    match e {
        FunctorError::NotAMorphism(_) | FunctorError::NotSpectralWeight(_) => {
            Ok(Check::new(name, Status::Fail).with_detail(e.to_string()))
        }
        other => Err(other.into()),
    }
}

fn relator_summary(pair: &RelatorPair) -> Value {
    let target = pair.epi.target();
    let source = pair.epi.source();
    let images: Vec<Vec<String>> = pair
        .splittings()
        .map(|s| target.elements().unwrap_or_default().iter().map(|x| source.label(&s.apply(x))).collect())
        .collect();
    json!({
        "splittings": pair.entries.len(),
        "relator_pairs": pair.morphisms().count(),
        "splitting_images": images,
    })
}

fn relator_records(prefix: &str, pair: &RelatorPair) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (k, e) in pair.entries.iter().enumerate() {
        out.extend(records(&format!("{prefix}splitting{k}"), &e.checks));
    }
    out
}

pub struct FunctorArgs<'a> {
    pub chain: &'a str,
    pub weights: Option<&'a str>,
    pub radius: u32,
    pub samples: usize,
    pub seed: u64,
}

pub fn functor(args: &FunctorArgs<'_>) -> Result<Outcome, InputError> {
    let homs = split_paths(args.chain)
        .iter()
        .map(|p| read_json::<HomSpec>(p)?.build())
        .collect::<Result<Vec<_>, InputError>>()?;
    if homs.is_empty() {
        return Err(InputError("empty chain".into()));
    }
    for (i, w) in homs.windows(2).enumerate() {
        if w[0].target() != w[1].source() {
            return Err(InputError(format!("homomorphisms {i} and {} are not composable", i + 1)));
        }
    }
    let mut groups = vec![homs[0].source().clone()];
    groups.extend(homs.iter().map(|h| h.target().clone()));
    let weight_paths = args.weights.map(split_paths).unwrap_or_default();
    if !weight_paths.is_empty() && weight_paths.len() != groups.len() {
        return Err(InputError(format!("chain has {} groups but {} weights", groups.len(), weight_paths.len())));
    }
    // Without explicit weights: word length on the last group, pulled back along the chain.
    let weights = if weight_paths.is_empty() {
        let mut ws = vec![WeightModel::standard_length(groups[groups.len() - 1].clone())?];
        for hom in homs.iter().rev() {
            let next = WeightModel::pullback(hom, &ws[ws.len() - 1])?;
            ws.push(next);
        }
        ws.reverse();
        ws
    } else {
        groups
            .iter()
            .zip(&weight_paths)
            .map(|(g, p)| read_json::<WeightSpec>(p)?.build(g))
            .collect::<Result<Vec<_>, InputError>>()?
    };

    // Grow infinite targets until they contain the image of the source ball.
    let mut radii = vec![args.radius; groups.len()];
    for (i, hom) in homs.iter().enumerate() {
        if hom.target().is_finite() || !hom.classify().mono {
            continue;
        }
        let src = ObjectSpec::canonical(weights[i].clone(), radii[i]);
        let dst = ObjectSpec::canonical(weights[i + 1].clone(), radii[i + 1]);
        if let Err(FunctorError::TargetBallTooSmall { needed, .. }) = functor_morphism(hom, &src, &dst, false) {
            radii[i + 1] = radii[i + 1].max(needed);
        }
    }
    let objects: Vec<ObjectSpec> = weights
        .iter()
        .zip(&radii)
        .map(|(w, &r)| ObjectSpec::canonical(w.clone(), r))
        .collect();

    let mut out = Vec::new();
    let mut hom_summaries = Vec::new();
    for (i, hom) in homs.iter().enumerate() {
        let prefix = format!("hom{i}");
        let class = hom.classify().clone();
        if !class.mono && !class.epi {
            return Err(InputError(format!("homomorphism {i} is neither injective nor surjective")));
        }
        let mut entry = serde_json::Map::new();
        entry.insert("mono".into(), json!(class.mono));
        entry.insert("epi".into(), json!(class.epi));
        if class.mono {
            match functor_morphism(hom, &objects[i], &objects[i + 1], false) {
                Ok(fm) => {
                    out.extend(records(&prefix, &fm.checks));
                    out.push(CheckRecord::from_check(&prefix, &left_exactness_witness(hom, &objects[i], &objects[i + 1])?));
                    entry.insert("phi_shape".into(), json!([fm.morphism.phi.rows(), fm.morphism.phi.cols()]));
                }
                Err(FunctorError::NotWeighted(_)) => {
                    let t1 = functor_object(&objects[i], false)?;
                    let r = check_weighted_hom(hom, &weights[i], &weights[i + 1], t1.ball())?;
                    out.extend(records(&prefix, &r.checks));
                }
                Err(e) => out.push(CheckRecord::from_check(&prefix, &functor_verdict("functor_morphism", e)?)),
            }
        }
        if class.epi && hom.source().is_finite() {
            let pair = relator_morphisms(hom, &weights[i], &RelatorWeights::Pullback)?;
            out.extend(relator_records(&format!("{prefix}/"), &pair));
            let lin = check_linearization_bound(hom, args.samples, args.seed)?;
            out.extend(records(&format!("{prefix}/linearization"), &lin.checks));
            if let Value::Object(s) = relator_summary(&pair) {
                entry.extend(s);
            }
        }
        hom_summaries.push(Value::Object(entry));
    }
    for (i, w) in homs.windows(2).enumerate() {
        if !(w[0].classify().mono && w[1].classify().mono) {
            continue;
        }
        let prefix = format!("laws{i}");
        match check_functor_laws(&w[0], &w[1], &objects[i], &objects[i + 1], &objects[i + 2]) {
            Ok(checks) => out.extend(records(&prefix, &checks)),
            Err(FunctorError::NotWeighted(d)) => {
                let c = Check::new("laws", Status::Unknown).with_detail(format!("skipped; homomorphism is not weighted: {d}"));
                out.push(CheckRecord::from_check("", &c).renamed(&prefix));
            }
            Err(e) => out.push(CheckRecord::from_check(&prefix, &functor_verdict("laws", e)?)),
        }
    }
    let summary = json!({
        "groups": groups.iter().map(|g| g.describe()).collect::<Vec<_>>(),
        "radii": radii,
        "homs": hom_summaries,
    });
    Ok(Outcome {
        checks: out,
        summary: Some(summary),
    })
}

pub fn relator(epi: &Path, weights: &str, samples: usize, seed: u64) -> Result<Outcome, InputError> {
    let hom = read_json::<HomSpec>(epi)?.build()?;
    let paths = split_paths(weights);
    if paths.is_empty() || paths.len() > 2 {
        return Err(InputError("--weights takes WG.json or WG.json,WH.json".into()));
    }
    let w_g = read_json::<WeightSpec>(&paths[0])?.build(hom.source())?;
    let mode = match paths.get(1) {
        Some(p) => RelatorWeights::Fixed(read_json::<WeightSpec>(p)?.build(hom.target())?),
        None => RelatorWeights::Pullback,
    };
    let pair = relator_morphisms(&hom, &w_g, &mode)?;
    let mut out = relator_records("", &pair);
    let lin = check_linearization_bound(&hom, samples, seed)?;
    out.extend(records("linearization", &lin.checks));
    let mut summary = relator_summary(&pair);
    if let Value::Object(s) = &mut summary {
        s.insert("kernel_order".into(), json!(lin.kernel_order));
        s.insert("max_ratio".into(), json!(lin.max_ratio));
        s.insert("kernel_dimension".into(), json!(lin.kernel_dimension));
    }
    Ok(Outcome {
        checks: out,
        summary: Some(summary),
    })
}
