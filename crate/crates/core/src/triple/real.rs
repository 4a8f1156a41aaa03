use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{commutator_norm, with_grading, TripleError, TripleModel};
use crate::algebra::{operator_norm, random_element, AlgebraElement, Operator};
use crate::report::{self, Check, Status, Witness};
use crate::weights::{decompose_weight, Decomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Commutation {
    Commute,
    Anticommute,
}

impl Commutation {
    pub fn as_str(self) -> &'static str {
        match self {
            Commutation::Commute => "commute",
            Commutation::Anticommute => "anticommute",
        }
    }
}

/// KO-dimension signs mod 8: `(J², J vs D, J vs Γ)`; `None` rows are odd.
pub const KO_TABLE: [(i8, Commutation, Option<Commutation>); 8] = [
    (1, Commutation::Commute, Some(Commutation::Commute)),
    (1, Commutation::Anticommute, None),
    (-1, Commutation::Commute, Some(Commutation::Anticommute)),
    (-1, Commutation::Commute, None),
    (-1, Commutation::Commute, Some(Commutation::Commute)),
    (-1, Commutation::Anticommute, None),
    (1, Commutation::Commute, Some(Commutation::Anticommute)),
    (1, Commutation::Commute, None),
];

/// Column-sparse operator used by the first-order operator route.
#[derive(Debug, Clone)]
struct Sparse {
    cols: Vec<Vec<(usize, Complex64)>>,
    antilinear: bool,
}

impl Sparse {
    fn from_dense(op: &Operator) -> Self {
        Sparse {
            cols: (0..op.cols()).map(|j| op.column_support(j)).collect(),
            antilinear: op.is_antilinear(),
        }
    }

    /// Matrix `A·B` (or `A·conj B` for antilinear `A`).
    fn compose(&self, b: &Sparse) -> Sparse {
        let cols = b
            .cols
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, Complex64)> = Vec::new();
                for &(k, v) in col {
                    let v = if self.antilinear { v.conj() } else { v };
                    for &(i, a) in &self.cols[k] {
                        match acc.iter_mut().find(|(r, _)| *r == i) {
                            Some((_, s)) => *s += a * v,
                            None => acc.push((i, a * v)),
                        }
                    }
                }
                acc.retain(|(_, s)| *s != Complex64::new(0.0, 0.0));
                acc.sort_by_key(|(r, _)| *r);
                acc
            })
            .collect();
        Sparse {
            cols,
            antilinear: self.antilinear ^ b.antilinear,
        }
    }

    fn sub(&self, b: &Sparse) -> Sparse {
        let cols = self
            .cols
            .iter()
            .zip(&b.cols)
            .map(|(p, q)| {
                let mut acc = p.clone();
                for &(i, v) in q {
                    match acc.iter_mut().find(|(r, _)| *r == i) {
                        Some((_, s)) => *s -= v,
                        None => acc.push((i, -v)),
                    }
                }
                acc.retain(|(_, s)| *s != Complex64::new(0.0, 0.0));
                acc.sort_by_key(|(r, _)| *r);
                acc
            })
            .collect();
        Sparse {
            cols,
            antilinear: self.antilinear,
        }
    }
}

fn entry(col: &[(usize, Complex64)], row: usize) -> Complex64 {
    col.iter().find(|(r, _)| *r == row).map_or(Complex64::new(0.0, 0.0), |(_, v)| *v)
}

fn operators_equal(a: &Operator, b: &Operator, tol: f64) -> Result<bool, TripleError> {
    if a.is_antilinear() != b.is_antilinear() {
        return Ok(false);
    }
    Ok(a.max_abs_diff(b)? <= tol)
}

fn j_square_sign(triple: &TripleModel) -> Result<Option<i8>, TripleError> {
    let j = triple.j_operator()?;
    let jj = j.compose(&j)?;
    let id = Operator::identity(triple.dimension())?;
    if operators_equal(&jj, &id, 0.0)? {
        Ok(Some(1))
    } else if operators_equal(&jj, &id.scale(Complex64::new(-1.0, 0.0)), 0.0)? {
        Ok(Some(-1))
    } else {
        Ok(None)
    }
}

/// Relations `AB = BA` and `AB = −BA` that hold exactly (up to `tol`).
fn commutation_relations(a: &Operator, b: &Operator, tol: f64) -> Result<Vec<Commutation>, TripleError> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    let mut out = Vec::new();
    if ab.max_abs_diff(&ba)? <= tol {
        out.push(Commutation::Commute);
    }
    if ab.max_abs_diff(&ba.scale(Complex64::new(-1.0, 0.0)))? <= tol {
        out.push(Commutation::Anticommute);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        report::find(&self.checks, name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Self-adjointness, compact resolvent, bounded commutators and the
/// invariant-core convergence evidence.
pub fn verify_axioms(triple: &TripleModel) -> Result<AxiomReport, TripleError> {
    let mut checks = Vec::new();
    let d = triple.dirac_operator()?;
    let sa = d.max_abs_diff(&d.adjoint()?)?;
    checks.push(
        Check::new("self_adjoint", Status::from_bool(sa <= 1e-12))
            .with_value("max_asymmetry", sa)
            .with_detail(if triple.fluctuation().is_some() { "D + A against its adjoint" } else { "real diagonal" }),
    );

    let proper = &triple.flags().proper;
    let status = match proper.proper {
        Some(true) => Status::Pass,
        Some(false) => Status::Fail,
        None => Status::Unknown,
    };
    checks.push(Check::new("compact_resolvent", status).with_detail(proper.detail.clone()));

    let mut bounded = Check::new("bounded_commutators", triple.flags().dirac);
    let ball = triple.ball();
    for g in ball.generators().iter().filter(|g| ball.contains(g)) {
        let c = commutator_norm(triple, g)?;
        let label = triple.group().label(g);
        bounded = bounded
            .with_value(format!("norm_{label}"), c.computed)
            .with_value(format!("sup_{label}"), c.analytic);
    }
    checks.push(bounded);

    checks.push(invariant_core(triple));
    Ok(AxiomReport { checks })
}

/// Graph-norm residuals of the shell truncations of a rapidly decaying
/// domain vector `ξ(x) = e^{−κℓ(x)} / (1 + |ω(x)|)`.
fn invariant_core(triple: &TripleModel) -> Check {
    let ball = triple.ball();
    let n = ball.len();
    let kappa = (1.0 + ball.generators().len() as f64).ln() + 1.0;
    let values = &triple.dirac_diagonal()[..n];
    let contrib: Vec<f64> = (0..n)
        .map(|i| {
            let xi = (-kappa * ball.word_length(i) as f64).exp() / (1.0 + values[i].abs());
            (1.0 + values[i] * values[i]) * xi * xi
        })
        .collect();
    let total: f64 = contrib.iter().sum();
    let radius = ball.word_length(n - 1);
    let residuals: Vec<f64> = (0..=radius)
        .map(|r| (contrib[ball.count_within(r)..].iter().sum::<f64>() / total).sqrt())
        .collect();
    let monotone = residuals.windows(2).all(|w| w[1] <= w[0]);
    let last = *residuals.last().unwrap_or(&0.0);
    let mut c = Check::new("invariant_core", Status::from_bool(monotone && last < 1e-8))
        .with_value("residual_full", last)
        .with_detail("D preserves finitely supported vectors; shell truncations converge in graph norm");
    if residuals.len() >= 2 {
        c = c.with_value("residual_inner", residuals[residuals.len() - 2]);
    }
    c
}

#[derive(Debug, Clone)]
pub struct RealStructureReport {
    pub checks: Vec<Check>,
    /// `J² = ±1`.
    pub j_sign: Option<i8>,
    /// Relations between `J` and `D` that hold.
    pub dirac_relations: Vec<Commutation>,
    pub first_order: bool,
    pub decomposition: Option<Decomposition>,
    pub valid: bool,
}

impl RealStructureReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        report::find(&self.checks, name)
    }
}

/// Sign test, zeroth-order condition (sampled pairs on the safe core) and
/// first-order condition by the operator route, cross-checked against the
/// weight decomposition.
pub fn verify_real_structure(triple: &TripleModel, samples: usize, seed: u64) -> Result<RealStructureReport, TripleError> {
    let ball = triple.ball();
    let group = triple.group().clone();
    let n = ball.len();
    let tol = report::tolerance(triple.is_integer_valued());
    let mut checks = Vec::new();

    let j_sign = j_square_sign(triple)?;
    checks.push(
        Check::new("j_squared", Status::from_bool(j_sign.is_some())).with_value("sign", j_sign.unwrap_or(0) as f64),
    );

    // pointwise ω(x⁻¹) = ±ω(x), cross-checked against JD ∓ DJ
    let values = &triple.dirac_diagonal()[..n];
    let mut pointwise = Vec::new();
    for (sign, rel) in [(1.0, Commutation::Commute), (-1.0, Commutation::Anticommute)] {
        if (0..n).all(|i| (values[ball.inverse_position(i)] - sign * values[i]).abs() <= tol) {
            pointwise.push(rel);
        }
    }
    let j = triple.j_operator()?;
    let d = triple.dirac_operator()?;
    let dirac_relations = commutation_relations(&j, &d, tol)?;
    let mut sign_check = Check::new("sign", Status::from_bool(!dirac_relations.is_empty()))
        .with_value("commute", dirac_relations.contains(&Commutation::Commute) as u8 as f64)
        .with_value("anticommute", dirac_relations.contains(&Commutation::Anticommute) as u8 as f64);
    if dirac_relations.is_empty() {
        let bad = (0..n)
            .find(|&i| {
                let v = values[ball.inverse_position(i)];
                (v - values[i]).abs() > tol && (v + values[i]).abs() > tol
            })
            .unwrap_or(0);
        sign_check = sign_check.with_witness(Some(Witness::new(
            &group,
            vec![ball.element(bad).clone()],
            vec![values[bad], values[ball.inverse_position(bad)]],
        )));
    }
    checks.push(sign_check);
    if triple.fluctuation().is_none() {
        checks.push(Check::new("sign_routes_agree", Status::from_bool(pointwise == dirac_relations)));
    }

    checks.push(zeroth_order(triple, samples, seed)?);

    let (first, first_ok) = first_order(triple, seed)?;
    checks.push(first);

    let decomposition = if triple.fluctuation().is_none() {
        let dec = decompose_weight(triple.weight(), ball)?;
        checks.push(
            Check::new("first_order_agreement", Status::from_bool(dec.succeeded() == first_ok && dec.agree()))
                .with_detail(format!(
                    "operator route {}, affine decomposition {}",
                    if first_ok { "holds" } else { "fails" },
                    if dec.succeeded() { "exists" } else { "does not exist" }
                )),
        );
        Some(dec)
    } else {
        None
    };

    let valid = j_sign.is_some()
        && !dirac_relations.is_empty()
        && first_ok
        && report::find(&checks, "zeroth_order").is_some_and(Check::passed);
    Ok(RealStructureReport {
        checks,
        j_sign,
        dirac_relations,
        first_order: first_ok,
        decomposition,
        valid,
    })
}

/// `‖[π(f), Jπ(g*)J⁻¹]‖` on the safe core for seeded pairs.
fn zeroth_order(triple: &TripleModel, samples: usize, seed: u64) -> Result<Check, TripleError> {
    let ball = triple.ball();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = (ball.radius() / 3).clamp(1, 2);
    let j = triple.j_operator()?;
    let mut worst: f64 = 0.0;
    let mut cores = 0usize;
    for _ in 0..samples {
        let f = random_element(ball, radius, 4, &mut rng);
        let g = random_element(ball, radius, 4, &mut rng);
        let spread = f.support_radius(ball).unwrap_or(0) + g.support_radius(ball).unwrap_or(0);
        let safe = triple.safe_indices(spread);
        if safe.is_empty() {
            continue;
        }
        cores += 1;
        let right = j.compose(&triple.pi(&g.involution())?)?.compose(&j)?;
        let c = triple.pi(&f)?.commutator(&right)?;
        let r = operator_norm(&c.restrict_columns(&safe))?;
        if r > 1e-12 {
            return Ok(Check::new("zeroth_order", Status::Fail)
                .with_value("residual", r)
                .with_detail("[π(f), Jπ(g*)J⁻¹] ≠ 0 on the safe core"));
        }
        worst = worst.max(r);
    }
    Ok(Check::new("zeroth_order", Status::from_bool(cores > 0))
        .with_value("max_residual", worst)
        .with_value("pairs", cores as f64)
        .with_safe_core(triple.safe_radius(2 * radius)))
}

const EXHAUSTIVE_TRIPLES: usize = 1_000_000;
const SAMPLED_TRIPLES: usize = 100_000;

/// `[[D, π(δ_x)], Jπ(δ_y)J] δ_z = 0` for `ℓx + ℓy + ℓz ≤ R` (all `z` on a
/// complete ball). Enumerates `x, y, z` in ball order when the count allows.
fn first_order(triple: &TripleModel, seed: u64) -> Result<(Check, bool), TripleError> {
    let ball = triple.ball();
    let group = triple.group().clone();
    let n = ball.len();
    let dim = triple.dimension();
    let tol = report::tolerance(triple.is_integer_valued());

    let d = match triple.fluctuation() {
        Some(_) => Sparse::from_dense(&triple.dirac_operator()?),
        None => Sparse {
            cols: triple
                .dirac_diagonal()
                .iter()
                .enumerate()
                .map(|(i, &v)| if v == 0.0 { vec![] } else { vec![(i, Complex64::new(v, 0.0))] })
                .collect(),
            antilinear: false,
        },
    };
    let mut jcols = vec![Vec::new(); dim];
    for c in 0..triple.copies() {
        for i in 0..n {
            jcols[c * n + i] = vec![(c * n + ball.inverse_position(i), Complex64::new(1.0, 0.0))];
        }
    }
    let j = Sparse {
        cols: jcols,
        antilinear: true,
    };
    let pi = |x: usize| {
        let mut cols = vec![Vec::new(); dim];
        for c in 0..triple.copies() {
            for k in 0..n {
                if let Some(i) = ball.product_position(x, k) {
                    cols[c * n + k] = vec![(c * n + i, Complex64::new(1.0, 0.0))];
                }
            }
        }
        Sparse { cols, antilinear: false }
    };
    let commutator_x = |x: usize| {
        let p = pi(x);
        d.compose(&p).sub(&p.compose(&d))
    };
    let right_y = |y: usize| j.compose(&pi(y)).compose(&j);

    let spread_ok = |s: u32| ball.is_complete() || s <= ball.radius();
    let safe_for = |s: u32| triple.safe_indices(s);
    let count: usize = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| spread_ok(ball.word_length(x) + ball.word_length(y)))
        .map(|(x, y)| {
            if ball.is_complete() {
                dim
            } else {
                triple.copies() * ball.count_within(ball.radius() - ball.word_length(x) - ball.word_length(y))
            }
        })
        .sum();
    let exhaustive = count <= EXHAUSTIVE_TRIPLES;

    let test = |cx: &Sparse, ry: &Sparse, z: usize| -> Option<(usize, Complex64, Complex64)> {
        let lhs = cx.compose(&Sparse {
            cols: vec![ry.cols[z].clone()],
            antilinear: false,
        });
        let rhs = ry.compose(&Sparse {
            cols: vec![cx.cols[z].clone()],
            antilinear: false,
        });
        let (l, r) = (&lhs.cols[0], &rhs.cols[0]);
        l.iter()
            .map(|(i, _)| *i)
            .chain(r.iter().map(|(i, _)| *i))
            .map(|i| (i, entry(l, i), entry(r, i)))
            .filter(|(_, a, b)| (a - b).norm() > tol)
            .max_by(|p, q| (p.1 - p.2).norm().total_cmp(&(q.1 - q.2).norm()))
    };
    let witness = |x: usize, y: usize, z: usize, a: Complex64, b: Complex64| {
        Witness::new(
            &group,
            vec![ball.element(x).clone(), ball.element(y).clone(), triple.basis_element(z).clone()],
            vec![a.re, b.re],
        )
    };

    let mut tested = 0usize;
    let mut failure = None;
    if exhaustive {
        let rights: Vec<Sparse> = (0..n).map(right_y).collect();
        'outer: for x in 0..n {
            let cx = commutator_x(x);
            for (y, ry) in rights.iter().enumerate() {
                let s = ball.word_length(x) + ball.word_length(y);
                if !spread_ok(s) {
                    continue;
                }
                for z in safe_for(s) {
                    tested += 1;
                    if let Some((_, a, b)) = test(&cx, ry, z) {
                        failure = Some(witness(x, y, z, a, b));
                        break 'outer;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut cxs: HashMap<usize, Sparse> = HashMap::new();
        let mut rys: HashMap<usize, Sparse> = HashMap::new();
        let mut attempts = 0usize;
        while tested < SAMPLED_TRIPLES && attempts < 20 * SAMPLED_TRIPLES {
            attempts += 1;
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            let s = ball.word_length(x) + ball.word_length(y);
            if !spread_ok(s) {
                continue;
            }
            let safe = safe_for(s);
            if safe.is_empty() {
                continue;
            }
            let z = safe[rng.gen_range(0..safe.len())];
            tested += 1;
            let cx = cxs.entry(x).or_insert_with(|| commutator_x(x));
            let ry = rys.entry(y).or_insert_with(|| right_y(y));
            if let Some((_, a, b)) = test(cx, ry, z) {
                failure = Some(witness(x, y, z, a, b));
                break;
            }
        }
    }
    let ok = failure.is_none();
    let check = Check::new("first_order", Status::from_bool(ok))
        .with_witness(failure)
        .with_value("triples", tested as f64)
        .with_value("exhaustive", exhaustive as u8 as f64)
        .with_safe_core(triple.safe_radius(0))
        .with_detail(if ok {
            "[[D, π(δ_x)], Jπ(δ_y)J⁻¹] vanishes on the safe core"
        } else {
            "witness (x, y, z): [D, π(δ_x)]Jπ(δ_y)J δ_z against Jπ(δ_y)J[D, π(δ_x)] δ_z"
        });
    Ok((check, ok))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KoSignature {
    pub j_sign: i8,
    pub dirac_relations: Vec<Commutation>,
    pub grading_relation: Option<Vec<Commutation>>,
    /// KO-dimensions mod 8 consistent with the measured signs.
    pub compatible: Vec<u8>,
}

/// Measures the signs and intersects with the KO table.
pub fn ko_signature(triple: &TripleModel) -> Result<KoSignature, TripleError> {
    let real = verify_real_structure(triple, 20, 7)?;
    if !real.valid {
        let failing: Vec<&str> = real.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        return Err(TripleError::NoValidRealStructure(failing.join(", ")));
    }
    let j_sign = real.j_sign.expect("valid real structure has J² = ±1");
    let grading_relation = match triple.grading() {
        Some(g) => Some(commutation_relations(&triple.j_operator()?, g, 0.0)?),
        None => None,
    };
    let compatible = KO_TABLE
        .iter()
        .enumerate()
        .filter(|(_, (js, jd, jg))| {
            *js == j_sign
                && real.dirac_relations.contains(jd)
                && match (jg, &grading_relation) {
                    (None, None) => true,
                    (Some(want), Some(have)) => have.contains(want),
                    _ => false,
                }
        })
        .map(|(n, _)| n as u8)
        .collect();
    Ok(KoSignature {
        j_sign,
        dirac_relations: real.dirac_relations,
        grading_relation,
        compatible,
    })
}

/// `Γ² = 1`, `Γ* = Γ`, `ΓD = −DΓ` and `[Γ, π(f)] = 0` on the safe core.
pub fn verify_grading(triple: &TripleModel, samples: usize, seed: u64) -> Result<Vec<Check>, TripleError> {
    let Some(gamma) = triple.grading() else {
        return Ok(vec![Check::new("grading", Status::Fail).with_detail("no grading")]);
    };
    let dim = triple.dimension();
    let mut checks = Vec::new();
    let sq = gamma.compose(gamma)?.max_abs_diff(&Operator::identity(dim)?)?;
    checks.push(Check::new("gamma_involution", Status::from_bool(sq <= 1e-12)).with_value("residual", sq));
    let sa = gamma.max_abs_diff(&gamma.adjoint()?)?;
    checks.push(Check::new("gamma_self_adjoint", Status::from_bool(sa <= 1e-12)).with_value("residual", sa));
    let d = triple.dirac_operator()?;
    let anti = gamma.anticommutator(&d)?.max_abs_entry();
    checks.push(Check::new("gamma_anticommutes_dirac", Status::from_bool(anti <= 1e-12)).with_value("residual", anti));

    let ball = triple.ball();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut probes: Vec<AlgebraElement> = ball
        .generators()
        .iter()
        .filter(|g| ball.contains(g))
        .map(|g| AlgebraElement::delta(triple.group().clone(), g.clone()))
        .collect();
    probes.extend((0..samples).map(|_| random_element(ball, (ball.radius() / 2).max(1), 4, &mut rng)));
    for f in &probes {
        let safe = triple.safe_indices(f.support_radius(ball).unwrap_or(0));
        let c = gamma.commutator(&triple.pi(f)?)?;
        worst = worst.max(c.restrict_columns(&safe).max_abs_entry());
    }
    checks.push(
        Check::new("gamma_commutes_algebra", Status::from_bool(worst <= 1e-12))
            .with_value("residual", worst)
            .with_value("probes", probes.len() as f64),
    );
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GradingKind {
    /// `ΓD = −DΓ` with `D = c ≠ 0` forces `Γ = 0`.
    Obstructed,
    /// `ω ≡ 0`: a grading commuting with `π` was constructed.
    ZeroWeight,
    /// Necessary pairing test on the ball: the multiset `{ω}` is symmetric under negation.
    Pairing { symmetric: bool },
}

#[derive(Debug, Clone)]
pub struct GradingDiagnosis {
    pub kind: GradingKind,
    pub checks: Vec<Check>,
    /// Triple carrying the constructed grading (zero weight only).
    pub graded: Option<TripleModel>,
}

/// Decides whether an undoubled triple admits a grading.
pub fn grading_obstruction(triple: &TripleModel) -> Result<GradingDiagnosis, TripleError> {
    let ball = triple.ball();
    let n = ball.len();
    let values = &triple.dirac_diagonal()[..n];
    let first = values[0];
    let constant = values.iter().all(|v| *v == first);

    if constant && first != 0.0 {
        return Ok(GradingDiagnosis {
            kind: GradingKind::Obstructed,
            checks: vec![Check::new("grading_exists", Status::Fail)
                .with_value("constant", first)
                .with_detail("ΓD + DΓ = 2cΓ vanishes only for Γ = 0")],
            graded: None,
        });
    }

    if constant {
        let mut checks = vec![inversion_grading(triple)?];
        // Γ = 2P − 1 with P the average of right translations; on an
        // infinite group P = 0 and Γ = 1.
        let dim = triple.dimension();
        let gamma = if triple.group().is_finite() && ball.is_complete() {
            let mut g = Operator::identity(dim)?.scale(Complex64::new(-1.0, 0.0));
            let w = Complex64::new(2.0 / n as f64, 0.0);
            for c in 0..triple.copies() {
                for i in 0..n {
                    for k in 0..n {
                        g.add_at(c * n + i, c * n + k, w);
                    }
                }
            }
            g
        } else {
            Operator::identity(dim)?
        };
        let graded = with_grading(triple, gamma)?;
        checks.extend(verify_grading(&graded, 10, 3)?);
        return Ok(GradingDiagnosis {
            kind: GradingKind::ZeroWeight,
            checks,
            graded: Some(graded),
        });
    }

    let tol = report::tolerance(triple.is_integer_valued());
    let mut up: Vec<f64> = values.to_vec();
    let mut down: Vec<f64> = values.iter().map(|v| -v).collect();
    up.sort_by(f64::total_cmp);
    down.sort_by(f64::total_cmp);
    let symmetric = up.iter().zip(&down).all(|(a, b)| (a - b).abs() <= tol);
    Ok(GradingDiagnosis {
        kind: GradingKind::Pairing { symmetric },
        checks: vec![Check::new("spectral_pairing", Status::from_bool(symmetric))
            .with_detail("necessary condition only; existence of Γ is not decided")],
        graded: None,
    })
}

/// Whether `δ_x ↦ δ_{x⁻¹}` commutes with `π(δ_g)` for the generators.
fn inversion_grading(triple: &TripleModel) -> Result<Check, TripleError> {
    let ball = triple.ball();
    let group = triple.group();
    for g in ball.generators().iter().filter(|g| ball.contains(g)) {
        let lg = ball.word_length_of(g).unwrap_or(0);
        for i in triple.ball().safe_indices(lg) {
            let x = ball.element(i);
            // π(δ_g)Γ δ_x = δ_{g x⁻¹}, Γπ(δ_g) δ_x = δ_{x⁻¹ g⁻¹}
            let a = group.multiply(g, &group.inverse(x));
            let b = group.inverse(&group.multiply(g, x));
            if a != b {
                return Ok(Check::new("inversion_grading_commutes", Status::Fail)
                    .with_witness(Some(Witness::new(group, vec![g.clone(), x.clone()], vec![])))
                    .with_detail(format!("π(δ_g)Γδ_x = δ_{} but Γπ(δ_g)δ_x = δ_{}", group.label(&a), group.label(&b))));
            }
        }
    }
    Ok(Check::pass("inversion_grading_commutes"))
}
