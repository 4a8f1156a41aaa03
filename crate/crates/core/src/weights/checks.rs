use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{WeightError, WeightKind, WeightModel};
use crate::groups::{BallIndex, GroupElement, GroupHom, GroupModel};
use crate::report::{self, Check, Status, Witness};

/// Triple count up to which the four-point identity is checked exhaustively.
const FOUR_POINT_EXHAUSTIVE: usize = 4_000_000;
const FOUR_POINT_SAMPLES: usize = 200_000;
/// Balls up to this size get a length-axiom pass inside the Dirac check.
const LENGTH_PASS_LIMIT: usize = 600;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightReport {
    pub checks: Vec<Check>,
    /// Per-probe sup of `|ω(y) − ω(x⁻¹y)|` over the ball.
    pub sups: Vec<(GroupElement, f64)>,
    /// False when some condition was sampled instead of enumerated.
    pub exhaustive: bool,
}

impl WeightReport {
    fn new(checks: Vec<Check>) -> Self {
        WeightReport {
            checks,
            sups: Vec::new(),
            exhaustive: true,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        report::find(&self.checks, name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(Check::passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn require_ball(weight: &WeightModel, ball: &BallIndex) -> Result<(), WeightError> {
    if ball.group() != weight.group() {
        return Err(crate::groups::GroupError::GroupMismatch("weight and ball live on different groups".into()).into());
    }
    Ok(())
}

/// Length axioms over all stored pairs of the ball. Products leaving the ball
/// are evaluated through `f`.
fn length_axioms_with(
    ball: &BallIndex,
    values: &[f64],
    tol: f64,
    f: impl Fn(&GroupElement) -> Result<f64, WeightError>,
) -> Result<Vec<Check>, WeightError> {
    let group = ball.group();
    let n = ball.len();
    let mut sub: Option<Witness> = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let xy = match ball.product_position(i, j) {
                Some(k) => values[k],
                None => f(&group.multiply(ball.element(i), ball.element(j)))?,
            };
            if xy > values[i] + values[j] + tol {
                sub = Some(Witness::new(
                    group,
                    vec![ball.element(i).clone(), ball.element(j).clone()],
                    vec![xy, values[i], values[j]],
                ));
                break 'outer;
            }
        }
    }
    let sym = (0..n).find(|&i| (values[ball.inverse_position(i)] - values[i]).abs() > tol).map(|i| {
        Witness::new(
            group,
            vec![ball.element(i).clone()],
            vec![values[i], values[ball.inverse_position(i)]],
        )
    });
    let zero = (0..n)
        .find(|&i| (values[i].abs() <= tol) != (i == 0))
        .map(|i| Witness::new(group, vec![ball.element(i).clone()], vec![values[i]]));
    let nonneg = (0..n)
        .find(|&i| values[i] < -tol)
        .map(|i| Witness::new(group, vec![ball.element(i).clone()], vec![values[i]]));
    let mk = |name: &str, w: Option<Witness>| Check::new(name, Status::from_bool(w.is_none())).with_witness(w);
    Ok(vec![
        mk("subadditivity", sub),
        mk("symmetry", sym),
        mk("zero_only_at_identity", zero),
        mk("nonnegativity", nonneg),
    ])
}

/// Subadditivity, symmetry under inversion, vanishing exactly at the
/// identity, and nonnegativity, each over every stored pair of the ball.
pub fn check_length_axioms(weight: &WeightModel, ball: &BallIndex) -> Result<WeightReport, WeightError> {
    require_ball(weight, ball)?;
    let values = weight.values_on_ball(ball)?;
    let tol = report::tolerance(weight.is_integer_valued());
    let checks = length_axioms_with(ball, &values, tol, |x| weight.evaluate(x))?;
    Ok(WeightReport::new(checks))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProperMethod {
    Analytic,
    Exhaustive,
    /// No rule applies; only ball statistics are reported.
    BallEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProperCertificate {
    pub proper: Option<bool>,
    pub method: ProperMethod,
    pub detail: String,
}

impl ProperCertificate {
    fn analytic(proper: bool, detail: impl Into<String>) -> Self {
        ProperCertificate {
            proper: Some(proper),
            method: ProperMethod::Analytic,
            detail: detail.into(),
        }
    }
}

fn single_integer_factor(group: &GroupModel) -> bool {
    group.hom_rank() == 1
}

/// Decides whether preimages of bounded intervals are finite.
pub fn check_proper(weight: &WeightModel, ball: &BallIndex) -> ProperCertificate {
    let group = weight.group();
    if group.is_finite() {
        return ProperCertificate {
            proper: Some(true),
            method: ProperMethod::Exhaustive,
            detail: format!("finite group of order {}", group.order().unwrap_or(0)),
        };
    }
    match weight.kind() {
        WeightKind::WordLength { .. } => ProperCertificate::analytic(true, "word-length balls are finite"),
        WeightKind::Constant(c) => ProperCertificate::analytic(false, format!("the preimage of {c} is the whole group")),
        WeightKind::Hom { coefficients } | WeightKind::Affine { coefficients, .. } => {
            if coefficients.iter().all(|c| *c == 0.0) {
                ProperCertificate::analytic(false, "zero homomorphism on an infinite group")
            } else if single_integer_factor(group) {
                ProperCertificate::analytic(true, "nonzero homomorphism on an infinite cyclic factor")
            } else {
                ProperCertificate::analytic(
                    false,
                    "a homomorphism to ℝ on a group of rank at least two has a bounded strip with infinitely many elements",
                )
            }
        }
        WeightKind::Polynomial { coefficients } => {
            let nonconstant = coefficients.iter().skip(1).any(|c| *c != 0.0);
            ProperCertificate::analytic(nonconstant, "|p(n)| → ∞ exactly when p is nonconstant")
        }
        WeightKind::Pullback { hom, weight: inner } => {
            let c = hom.classify();
            if c.exact && c.mono {
                let inner_cert = check_proper_unbounded(inner);
                match inner_cert {
                    Some(p) => ProperCertificate::analytic(p, "pullback along an injective homomorphism"),
                    None => unknown(ball),
                }
            } else if c.exact && c.kernel.is_none() {
                ProperCertificate::analytic(false, "pullback along a homomorphism with infinite kernel")
            } else {
                unknown(ball)
            }
        }
        WeightKind::Table(_) | WeightKind::PushForward { .. } => unknown(ball),
    }
}

/// Properness of a weight without ball context (used for pullbacks).
fn check_proper_unbounded(weight: &WeightModel) -> Option<bool> {
    let ball = BallIndex::canonical(weight.group().clone(), 0).ok()?;
    check_proper(weight, &ball).proper
}

fn unknown(ball: &BallIndex) -> ProperCertificate {
    ProperCertificate {
        proper: None,
        method: ProperMethod::BallEvidence,
        detail: format!("no analytic rule; ball of radius {} holds {} elements", ball.radius(), ball.len()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiracVerdict {
    /// Differences bounded; `by_length` means bounded by `ω(x)` itself.
    Bounded { by_length: bool },
    Unbounded,
    Unknown,
}

fn dirac_analytic(weight: &WeightModel) -> DiracVerdict {
    if weight.group().is_finite() {
        return DiracVerdict::Bounded { by_length: false };
    }
    match weight.kind() {
        WeightKind::WordLength { .. } | WeightKind::PushForward { .. } => DiracVerdict::Bounded { by_length: true },
        WeightKind::Hom { .. } | WeightKind::Affine { .. } | WeightKind::Constant(_) => {
            DiracVerdict::Bounded { by_length: false }
        }
        WeightKind::Polynomial { coefficients } => {
            if coefficients.iter().skip(2).all(|c| *c == 0.0) {
                DiracVerdict::Bounded { by_length: false }
            } else {
                DiracVerdict::Unbounded
            }
        }
        WeightKind::Pullback { weight, .. } => match dirac_analytic(weight) {
            DiracVerdict::Bounded { .. } => DiracVerdict::Bounded { by_length: false },
            _ => DiracVerdict::Unknown,
        },
        WeightKind::Table(_) => DiracVerdict::Unknown,
    }
}

/// Sup of `|ω(y) − ω(x⁻¹y)|` over `y` with `y, x⁻¹y` among the first `limit` ball elements.
fn translate_sup(ball: &BallIndex, values: &[f64], x: &GroupElement, limit: usize) -> f64 {
    let group = ball.group();
    let x_inv = group.inverse(x);
    let mut sup: f64 = 0.0;
    for (j, y) in ball.elements()[..limit].iter().enumerate() {
        if let Some(k) = ball.position(&group.multiply(&x_inv, y)) {
            if k < limit {
                sup = sup.max((values[j] - values[k]).abs());
            }
        }
    }
    sup
}

/// Bounded-difference test for every probe: per-probe sups at radius `R`
/// and `R − 1`, an analytic verdict per kind, and for lengths the bound
/// `sup ≤ ℓ(x)`.
pub fn check_dirac_weight(
    weight: &WeightModel,
    ball: &BallIndex,
    probes: &[GroupElement],
) -> Result<WeightReport, WeightError> {
    require_ball(weight, ball)?;
    for p in probes {
        if !ball.contains(p) {
            return Err(WeightError::ProbeOutsideBall(ball.group().label(p)));
        }
    }
    let group = ball.group();
    let values = weight.values_on_ball(ball)?;
    let tol = report::tolerance(weight.is_integer_valued());
    let inner = if ball.radius() > 0 && !ball.is_complete() {
        ball.count_within(ball.radius() - 1)
    } else {
        ball.len()
    };
    let mut sups = Vec::new();
    let mut growth: Option<(GroupElement, f64, f64)> = None;
    for x in probes {
        let outer_sup = translate_sup(ball, &values, x, ball.len());
        let inner_sup = translate_sup(ball, &values, x, inner);
        if outer_sup > inner_sup + tol && growth.is_none() {
            growth = Some((x.clone(), inner_sup, outer_sup));
        }
        sups.push((x.clone(), outer_sup));
    }
    let verdict = dirac_analytic(weight);
    let mut check = match verdict {
        DiracVerdict::Bounded { .. } => Check::pass("dirac_weight").with_detail("bounded translate differences"),
        DiracVerdict::Unbounded => Check::new("dirac_weight", Status::Fail).with_detail("translate differences diverge"),
        DiracVerdict::Unknown => Check::new("dirac_weight", Status::Unknown).with_detail(if growth.is_some() {
            "no analytic rule; sup grows with the radius"
        } else {
            "no analytic rule; sup stable across the last two radii"
        }),
    };
    if let Some((x, a, b)) = &growth {
        check = check
            .with_value("sup_inner_radius", *a)
            .with_value("sup_outer_radius", *b);
        if verdict == DiracVerdict::Unbounded || verdict == DiracVerdict::Unknown {
            check = check.with_witness(Some(Witness::new(group, vec![x.clone()], vec![*a, *b])));
        }
    } else if verdict == DiracVerdict::Unbounded {
        if let Some((x, s)) = sups.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
            check = check.with_witness(Some(Witness::new(group, vec![x.clone()], vec![*s])));
        }
    }
    if let Some((_, s)) = sups.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        check = check.with_value("max_sup", *s);
    }
    let mut checks = vec![check];

    let is_length = weight.is_structural_length()
        || (ball.len() <= LENGTH_PASS_LIMIT && check_length_axioms(weight, ball)?.all_passed());
    if is_length {
        let mut violation = None;
        for (x, s) in &sups {
            let lx = weight.evaluate(x)?;
            if *s > lx + tol {
                violation = Some(Witness::new(group, vec![x.clone()], vec![*s, lx]));
                break;
            }
        }
        checks.push(
            Check::new("length_bound", Status::from_bool(violation.is_none()))
                .with_witness(violation)
                .with_detail("sup over the ball never exceeds ℓ(x)"),
        );
    }
    Ok(WeightReport {
        checks,
        sups,
        exhaustive: true,
    })
}

/// Result of testing whether `ω = α + φ` with `φ` a homomorphism.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `left_translates`, `additive`, `right_translates`, `four_point`.
    pub conditions: Vec<Check>,
    pub alpha: f64,
    pub hom: Option<WeightModel>,
    pub exhaustive: bool,
}

impl Decomposition {
    pub fn succeeded(&self) -> bool {
        self.hom.is_some()
    }

    /// The four conditions returned the same boolean.
    pub fn agree(&self) -> bool {
        self.conditions.iter().all(|c| c.passed()) || self.conditions.iter().all(|c| !c.passed())
    }

    pub fn condition(&self, name: &str) -> Option<&Check> {
        report::find(&self.conditions, name)
    }
}

/// `(ω(xzy⁻¹) − ω(zy⁻¹), ω(xz) − ω(z))`.
pub fn four_point_sides(
    weight: &WeightModel,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
) -> Result<(f64, f64), WeightError> {
    let g = weight.group();
    let zy = g.multiply(z, &g.inverse(y));
    let xzy = g.multiply(x, &zy);
    let xz = g.multiply(x, z);
    Ok((
        weight.evaluate(&xzy)? - weight.evaluate(&zy)?,
        weight.evaluate(&xz)? - weight.evaluate(z)?,
    ))
}

/// Evaluates the four equivalent affine-weight conditions on the ball
/// (arguments restricted to ball elements) and extracts `α = ω(e)` and the
/// homomorphism `ω − α` when they hold.
pub fn decompose_weight(weight: &WeightModel, ball: &BallIndex) -> Result<Decomposition, WeightError> {
    require_ball(weight, ball)?;
    let group = ball.group();
    let n = ball.len();
    let values = weight.values_on_ball(ball)?;
    let tol = report::tolerance(weight.is_integer_valued());
    let alpha = values[0];
    let el = |i: usize| ball.element(i).clone();

    // left translates: y ↦ ω(y) − ω(x⁻¹y)
    let mut left = None;
    'left: for i in 0..n {
        let xi = ball.inverse_position(i);
        let mut first: Option<(usize, f64)> = None;
        for j in 0..n {
            let Some(k) = ball.product_position(xi, j) else { continue };
            let d = values[j] - values[k];
            match first {
                None => first = Some((j, d)),
                Some((j0, d0)) if (d - d0).abs() > tol => {
                    left = Some(Witness::new(group, vec![el(i), el(j0), el(j)], vec![d0, d]));
                    break 'left;
                }
                _ => {}
            }
        }
    }
    // right translates: y ↦ ω(y) − ω(yx⁻¹)
    let mut right = None;
    'right: for i in 0..n {
        let xi = ball.inverse_position(i);
        let mut first: Option<(usize, f64)> = None;
        for j in 0..n {
            let Some(k) = ball.product_position(j, xi) else { continue };
            let d = values[j] - values[k];
            match first {
                None => first = Some((j, d)),
                Some((j0, d0)) if (d - d0).abs() > tol => {
                    right = Some(Witness::new(group, vec![el(i), el(j0), el(j)], vec![d0, d]));
                    break 'right;
                }
                _ => {}
            }
        }
    }
    // additivity of φ = ω − α
    let mut additive = None;
    'add: for i in 0..n {
        for j in 0..n {
            let Some(k) = ball.product_position(i, j) else { continue };
            let lhs = values[k] - alpha;
            let rhs = values[i] - alpha + values[j] - alpha;
            if (lhs - rhs).abs() > tol {
                additive = Some(Witness::new(group, vec![el(i), el(j)], vec![lhs, rhs]));
                break 'add;
            }
        }
    }
    // four-point identity
    let mut exhaustive = true;
    let inv: Vec<usize> = (0..n).map(|i| ball.inverse_position(i)).collect();
    let four = |x: usize, y: usize, z: usize| -> Option<Option<Witness>> {
        let zy = ball.product_position(z, inv[y])?;
        let xzy = ball.product_position(x, zy)?;
        let xz = ball.product_position(x, z)?;
        let lhs = values[xzy] - values[zy];
        let rhs = values[xz] - values[z];
        Some(((lhs - rhs).abs() > tol).then(|| Witness::new(group, vec![el(x), el(y), el(z)], vec![lhs, rhs])))
    };
    let mut four_point = None;
    if n.saturating_mul(n).saturating_mul(n) <= FOUR_POINT_EXHAUSTIVE {
        'four: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if let Some(Some(w)) = four(x, y, z) {
                        four_point = Some(w);
                        break 'four;
                    }
                }
            }
        }
    } else {
        exhaustive = false;
        'diag: for x in 0..n {
            for y in 0..n {
                if let Some(Some(w)) = four(x, y, y) {
                    four_point = Some(w);
                    break 'diag;
                }
            }
        }
        if four_point.is_none() {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..FOUR_POINT_SAMPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if let Some(Some(w)) = four(x, y, z) {
                    four_point = Some(w);
                    break;
                }
            }
        }
    }
    let mk = |name: &str, w: Option<Witness>| Check::new(name, Status::from_bool(w.is_none())).with_witness(w);
    let conditions = vec![
        mk("left_translates", left),
        mk("additive", additive),
        mk("right_translates", right),
        mk("four_point", four_point),
    ];
    let all = conditions.iter().all(Check::passed);
    let hom = if all { Some(extract_hom(weight, ball, alpha)?) } else { None };
    Ok(Decomposition {
        conditions,
        alpha,
        hom,
        exhaustive,
    })
}

fn extract_hom(weight: &WeightModel, ball: &BallIndex, alpha: f64) -> Result<WeightModel, WeightError> {
    let group = weight.group();
    let rank = group.hom_rank();
    let mut coefficients = vec![0.0; rank];
    for g in group.canonical_generators() {
        let coords = group.hom_coordinates(&g);
        if let Some(i) = coords.iter().position(|&c| c == 1) {
            if coords.iter().filter(|&&c| c != 0).count() == 1 {
                let value = match ball.position(&g) {
                    Some(k) => weight.values_on_ball(ball)?[k],
                    None => weight.evaluate(&g)?,
                };
                coefficients[i] = value - alpha;
            }
        }
    }
    WeightModel::hom(group.clone(), coefficients)
}

/// Weighted (`ω_G = ω_H ∘ φ`), co-isometric (`|ω_H∘φ| ≤ |ω_G|`), charged
/// (`|ω_G|` is a length) and, for weighted length homomorphisms, injectivity.
pub fn check_weighted_hom(
    hom: &GroupHom,
    w_g: &WeightModel,
    w_h: &WeightModel,
    ball: &BallIndex,
) -> Result<WeightReport, WeightError> {
    require_ball(w_g, ball)?;
    if hom.source() != w_g.group() || hom.target() != w_h.group() {
        return Err(crate::groups::GroupError::GroupMismatch("weights do not match the homomorphism".into()).into());
    }
    let group = ball.group();
    let tol = report::tolerance(w_g.is_integer_valued() && w_h.is_integer_valued());
    let g_values = w_g.values_on_ball(ball)?;
    let mut h_values = Vec::with_capacity(ball.len());
    for x in ball.elements() {
        h_values.push(w_h.evaluate(&hom.apply(x))?);
    }
    let weighted = (0..ball.len())
        .find(|&i| (g_values[i] - h_values[i]).abs() > tol)
        .map(|i| Witness::new(group, vec![ball.element(i).clone()], vec![g_values[i], h_values[i]]));
    let coiso = (0..ball.len())
        .find(|&i| h_values[i].abs() > g_values[i].abs() + tol)
        .map(|i| Witness::new(group, vec![ball.element(i).clone()], vec![g_values[i], h_values[i]]));
    let abs_values: Vec<f64> = g_values.iter().map(|v| v.abs()).collect();
    let charged = length_axioms_with(ball, &abs_values, tol, |x| w_g.evaluate(x).map(f64::abs))?;
    let charged_fail = charged.iter().find(|c| !c.passed()).cloned();

    let mut checks = vec![
        Check::new("weighted", Status::from_bool(weighted.is_none())).with_witness(weighted.clone()),
        Check::new("co_isometric", Status::from_bool(coiso.is_none())).with_witness(coiso),
        Check::new("charged", Status::from_bool(charged_fail.is_none()))
            .with_witness(charged_fail.as_ref().and_then(|c| c.witness.clone()))
            .with_detail(charged_fail.map(|c| format!("|ω| fails {}", c.name)).unwrap_or_default()),
    ];

    let is_length = length_axioms_with(ball, &g_values, tol, |x| w_g.evaluate(x))?
        .iter()
        .all(Check::passed);
    let injective = if weighted.is_none() && is_length {
        let kernel_hit = ball.elements()[1..]
            .iter()
            .find(|x| hom.target().is_identity(&hom.apply(x)));
        let c = hom.classify();
        match kernel_hit {
            Some(x) => Check::new("injective", Status::Fail)
                .with_witness(Some(Witness::new(group, vec![x.clone()], vec![])))
                .with_detail("a weighted homomorphism of lengths must be injective"),
            None if c.exact && !c.mono => {
                Check::new("injective", Status::Fail).with_detail("classification reports a nontrivial kernel")
            }
            None => Check::pass("injective").with_detail("no kernel element in the ball; agrees with classification"),
        }
    } else {
        Check::new("injective", Status::Unknown).with_detail("only implied for weighted homomorphisms of lengths")
    };
    checks.push(injective);
    Ok(WeightReport::new(checks))
}
