//! Morphisms of truncated spectral triples, p-forms and inner fluctuations.

mod pforms;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{linearize_hom, random_element, AlgebraElement, AlgebraError, Operator};
use crate::groups::{GroupElement, GroupError, GroupHom};
use crate::report::{self, Check, Status, Witness};
use crate::triple::{TripleError, TripleModel};

pub use pforms::{
    build_p_form, check_fluctuation_compat, check_p_form_intertwining, FluctuationReport, PForm,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CategoryError {
    #[error("Φ is {rows}×{cols} but the triples need {want_rows}×{want_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("{0} triple is not spectral")]
    NotSpectral(&'static str),
    #[error("missing {0}")]
    MissingStructure(&'static str),
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("algebra map is not induced by a group homomorphism")]
    NotHomInduced,
    #[error("expected 1-forms, got degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("algebra map has no image for {0}")]
    MissingImage(String),
    #[error("{0} lies outside the ball")]
    ElementOutsideBall(String),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `φ: ℂ[G₁] → ℂ[G₂]`.
#[derive(Debug, Clone)]
pub enum AlgebraMap {
    Identity,
    HomInduced(GroupHom),
    /// Linear extension of explicit images of delta functions.
    DeltaImages(BTreeMap<GroupElement, AlgebraElement>),
}

impl AlgebraMap {
    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement, CategoryError> {
        match self {
            AlgebraMap::Identity => Ok(f.clone()),
            AlgebraMap::HomInduced(h) => Ok(linearize_hom(h, f)?),
            AlgebraMap::DeltaImages(images) => {
                let mut out: Option<AlgebraElement> = None;
                for (x, c) in f.terms() {
                    let img = images
                        .get(x)
                        .ok_or_else(|| CategoryError::MissingImage(f.group().label(x)))?
                        .scale(*c);
                    out = Some(match out {
                        Some(o) => o.add(&img)?,
                        None => img,
                    });
                }
                match out {
                    Some(o) => Ok(o),
                    None => match images.values().next() {
                        Some(any) => Ok(AlgebraElement::zero(any.group().clone())),
                        None => Err(CategoryError::MissingImage("0".into())),
                    },
                }
            }
        }
    }

    pub fn is_hom_induced(&self) -> bool {
        matches!(self, AlgebraMap::Identity | AlgebraMap::HomInduced(_))
    }

    /// `second ∘ first`.
    pub fn then(&self, second: &AlgebraMap) -> Result<AlgebraMap, CategoryError> {
        Ok(match (self, second) {
            (AlgebraMap::Identity, m) | (m, AlgebraMap::Identity) => m.clone(),
            (AlgebraMap::HomInduced(a), AlgebraMap::HomInduced(b)) => AlgebraMap::HomInduced(b.compose(a)?),
            (AlgebraMap::DeltaImages(images), m) => AlgebraMap::DeltaImages(
                images
                    .iter()
                    .map(|(x, img)| Ok((x.clone(), m.apply(img)?)))
                    .collect::<Result<_, CategoryError>>()?,
            ),
            (AlgebraMap::HomInduced(a), AlgebraMap::DeltaImages(images)) => {
                let elements = a.source().elements().ok_or(GroupError::InfiniteGroup)?;
                AlgebraMap::DeltaImages(
                    elements
                        .into_iter()
                        .map(|x| {
                            let y = a.apply(&x);
                            let img = images.get(&y).cloned().ok_or_else(|| CategoryError::MissingImage(a.target().label(&y)))?;
                            Ok((x, img))
                        })
                        .collect::<Result<_, CategoryError>>()?,
                )
            }
        })
    }

    /// Seeded test of `φ(fg) = φ(f)φ(g)`, `φ(f*) = φ(f)*` and `φ(1) = 1`.
    pub fn validate(&self, source: &TripleModel, samples: usize, seed: u64) -> Result<Check, CategoryError> {
        let ball = source.ball();
        let group = source.group();
        let one = AlgebraElement::one(group.clone());
        let image_one = self.apply(&one)?;
        if image_one != AlgebraElement::one(image_one.group().clone()) {
            return Ok(Check::new("algebra_map", Status::Fail).with_detail("φ(1) ≠ 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = (ball.radius() / 2).max(1);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let f = random_element(ball, radius, 3, &mut rng);
            let g = random_element(ball, radius, 3, &mut rng);
            let fg = f.convolve(&g)?;
            let m = self.apply(&fg)?.max_abs_diff(&self.apply(&f)?.convolve(&self.apply(&g)?)?);
            let s = self.apply(&f.involution())?.max_abs_diff(&self.apply(&f)?.involution());
            worst = worst.max(m).max(s);
            if m > 1e-12 || s > 1e-12 {
                return Ok(Check::new("algebra_map", Status::Fail)
                    .with_value("residual", m.max(s))
                    .with_detail(if m > 1e-12 { "φ is not multiplicative" } else { "φ is not involutive" }));
            }
        }
        Ok(Check::pass("algebra_map")
            .with_value("max_residual", worst)
            .with_value("samples", samples as f64))
    }
}

#[derive(Debug, Clone)]
pub struct MorphismOptions {
    /// Accept triples whose weight is not spectral.
    pub allow_non_spectral: bool,
    /// Random algebra elements tested in addition to the generators.
    pub samples: usize,
    pub seed: u64,
    /// Extra word-length spread of Φ itself (columns beyond it are truncated).
    pub phi_spread: u32,
}

impl Default for MorphismOptions {
    fn default() -> Self {
        MorphismOptions {
            allow_non_spectral: false,
            samples: 50,
            seed: 0,
            phi_spread: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TripleMorphism {
    pub source: TripleModel,
    pub target: TripleModel,
    pub algebra_map: AlgebraMap,
    pub phi: Operator,
    pub real_checked: bool,
    pub even_checked: bool,
    pub phi_spread: u32,
    /// Smallest safe-core radius used by the verifying checks.
    pub safe_radius: Option<u32>,
}

impl TripleMorphism {
    /// `ΦᴴΦ = 1`.
    pub fn is_isometry(&self) -> bool {
        self.phi
            .adjoint()
            .and_then(|a| a.compose(&self.phi))
            .and_then(|g| Operator::identity(self.phi.cols()).and_then(|id| g.max_abs_diff(&id)))
            .is_ok_and(|r| r <= 1e-12)
    }

    pub fn is_degenerate(&self) -> bool {
        self.phi.max_abs_entry() == 0.0
    }
}

#[derive(Debug, Clone)]
pub struct MorphismReport {
    pub checks: Vec<Check>,
    pub morphism: Option<TripleMorphism>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.morphism.is_some()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        report::find(&self.checks, name)
    }
}

fn require_shapes(t1: &TripleModel, t2: &TripleModel, phi: &Operator) -> Result<(), CategoryError> {
    if phi.rows() != t2.dimension() || phi.cols() != t1.dimension() || phi.is_antilinear() {
        return Err(CategoryError::DimensionMismatch {
            rows: phi.rows(),
            cols: phi.cols(),
            want_rows: t2.dimension(),
            want_cols: t1.dimension(),
        });
    }
    Ok(())
}

fn require_spectral(t1: &TripleModel, t2: &TripleModel, opts: &MorphismOptions) -> Result<(), CategoryError> {
    if !opts.allow_non_spectral {
        if !t1.is_spectral() {
            return Err(CategoryError::NotSpectral("source"));
        }
        if !t2.is_spectral() {
            return Err(CategoryError::NotSpectral("target"));
        }
    }
    Ok(())
}

/// Source columns in the safe core of `source_spread` whose Φ-image lies in
/// the target safe core of `target_spread`.
pub(crate) fn safe_columns(
    t1: &TripleModel,
    t2: &TripleModel,
    phi: &Operator,
    phi_spread: u32,
    source_spread: u32,
    target_spread: u32,
) -> Vec<usize> {
    let mut ok = vec![false; t2.dimension()];
    for i in t2.safe_indices(target_spread) {
        ok[i] = true;
    }
    t1.safe_indices(source_spread + phi_spread)
        .into_iter()
        .filter(|&j| phi.column_support(j).iter().all(|(i, _)| ok[*i]))
        .collect()
}

/// Largest entry difference over the given columns, with the worst entry.
pub(crate) struct Mismatch {
    pub residual: f64,
    pub column: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
}

pub(crate) fn compare_columns(lhs: &Operator, rhs: &Operator, columns: &[usize]) -> Mismatch {
    let mut worst = Mismatch {
        residual: 0.0,
        column: usize::MAX,
        lhs: Complex64::new(0.0, 0.0),
        rhs: Complex64::new(0.0, 0.0),
    };
    for &j in columns {
        for i in 0..lhs.rows() {
            let (a, b) = (lhs.get(i, j), rhs.get(i, j));
            let r = (a - b).norm();
            if r > worst.residual {
                worst = Mismatch {
                    residual: r,
                    column: j,
                    lhs: a,
                    rhs: b,
                };
            }
        }
    }
    worst
}

/// Check from a mismatch; the witness is the source basis vector `δ_x`.
pub(crate) fn mismatch_check(
    name: &str,
    m: &Mismatch,
    tol: f64,
    source: &TripleModel,
    safe_radius: Option<u32>,
    detail: &str,
) -> Check {
    let ok = m.residual <= tol;
    let witness = (!ok).then(|| {
        Witness::new(
            source.group(),
            vec![source.basis_element(m.column).clone()],
            vec![m.lhs.re, m.lhs.im, m.rhs.re, m.rhs.im],
        )
    });
    let mut c = Check::new(name, Status::from_bool(ok))
        .with_witness(witness)
        .with_value("max_residual", m.residual)
        .with_safe_core(safe_radius)
        .with_detail(detail);
    if !ok && source.copies() == 2 {
        c = c.with_value("witness_copy", (m.column / source.ball().len()) as f64);
    }
    c
}

fn tolerance(t1: &TripleModel, t2: &TripleModel) -> f64 {
    report::tolerance(t1.is_integer_valued() && t2.is_integer_valued())
}

/// Generator deltas, the unit and seeded random elements of the source.
fn probe_elements(t1: &TripleModel, samples: usize, seed: u64) -> Vec<AlgebraElement> {
    let ball = t1.ball();
    let group = t1.group();
    let mut probes = vec![AlgebraElement::one(group.clone())];
    probes.extend(
        ball.generators()
            .iter()
            .filter(|g| ball.contains(g))
            .map(|g| AlgebraElement::delta(group.clone(), g.clone())),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = (ball.radius() / 2).max(1);
    probes.extend((0..samples).map(|_| random_element(ball, radius, 4, &mut rng)));
    probes
}

fn support_radius(t: &TripleModel, f: &AlgebraElement) -> Result<u32, CategoryError> {
    f.support_radius(t.ball()).ok_or_else(|| {
        let outside = f.support().find(|x| !t.ball().contains(x)).cloned().unwrap_or_else(|| t.group().identity());
        CategoryError::ElementOutsideBall(t.group().label(&outside))
    })
}

/// `Φπ₁(f) = π₂(φ(f))Φ` for generators and random `f`, and `ΦD₁ = D₂Φ`, on the safe core.
pub fn check_morphism(
    t1: &TripleModel,
    t2: &TripleModel,
    algebra_map: &AlgebraMap,
    phi: &Operator,
    opts: &MorphismOptions,
) -> Result<MorphismReport, CategoryError> {
    require_shapes(t1, t2, phi)?;
    require_spectral(t1, t2, opts)?;
    let tol = tolerance(t1, t2);
    let mut checks = Vec::new();
    if let AlgebraMap::DeltaImages(_) = algebra_map {
        checks.push(algebra_map.validate(t1, 100, opts.seed)?);
    }

    let mut worst = Mismatch {
        residual: 0.0,
        column: usize::MAX,
        lhs: Complex64::new(0.0, 0.0),
        rhs: Complex64::new(0.0, 0.0),
    };
    let mut min_radius: Option<u32> = None;
    let mut tested = 0usize;
    for f in probe_elements(t1, opts.samples, opts.seed) {
        let image = algebra_map.apply(&f)?;
        let s1 = support_radius(t1, &f)?;
        let s2 = support_radius(t2, &image)?;
        let cols = safe_columns(t1, t2, phi, opts.phi_spread, s1, s2);
        if cols.is_empty() {
            continue;
        }
        tested += 1;
        if let Some(r) = t1.safe_radius(s1 + opts.phi_spread) {
            min_radius = Some(min_radius.map_or(r, |m| m.min(r)));
        }
        let lhs = phi.compose(&t1.pi(&f)?)?;
        let rhs = t2.pi(&image)?.compose(phi)?;
        let m = compare_columns(&lhs, &rhs, &cols);
        if m.residual > worst.residual {
            worst = m;
        }
    }
    let mut pi_check = mismatch_check(
        "pi_intertwining",
        &worst,
        tol,
        t1,
        min_radius,
        "Φ∘π₁(f) = π₂(φ(f))∘Φ",
    )
    .with_value("probes", tested as f64);
    if tested == 0 {
        pi_check.status = Status::Unknown;
        pi_check.detail = "safe core is empty for every probe".into();
    }
    checks.push(pi_check);

    let cols = safe_columns(t1, t2, phi, opts.phi_spread, 0, 0);
    let lhs = phi.compose(&t1.dirac_operator()?)?;
    let rhs = t2.dirac_operator()?.compose(phi)?;
    let m = compare_columns(&lhs, &rhs, &cols);
    let d_radius = t1.safe_radius(opts.phi_spread);
    checks.push(mismatch_check("dirac_intertwining", &m, tol, t1, d_radius, "Φ∘D₁ = D₂∘Φ"));
    if phi.max_abs_entry() == 0.0 {
        checks.push(Check::new("degenerate", Status::Pass).with_detail("Φ = 0 satisfies every intertwining vacuously"));
    }

    let ok = checks.iter().all(Check::passed);
    let morphism = ok.then(|| TripleMorphism {
        source: t1.clone(),
        target: t2.clone(),
        algebra_map: algebra_map.clone(),
        phi: phi.clone(),
        real_checked: false,
        even_checked: false,
        phi_spread: opts.phi_spread,
        safe_radius: match (min_radius, d_radius) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
    });
    Ok(MorphismReport { checks, morphism })
}

/// `J₂∘Φ = Φ∘J₁`; sets `real_checked` on success.
pub fn check_real_flag(m: &mut TripleMorphism) -> Result<Check, CategoryError> {
    let j1 = m.source.j_operator()?;
    let j2 = m.target.j_operator()?;
    let lhs = j2.compose(&m.phi)?;
    let rhs = m.phi.compose(&j1)?;
    let cols = safe_columns(&m.source, &m.target, &m.phi, m.phi_spread, 0, 0);
    let mm = compare_columns(&lhs, &rhs, &cols);
    let c = mismatch_check("real", &mm, tolerance(&m.source, &m.target), &m.source, m.safe_radius, "J₂∘Φ = Φ∘J₁");
    m.real_checked = c.passed();
    Ok(c)
}

/// `Γ₂∘Φ = Φ∘Γ₁`; sets `even_checked` on success.
pub fn check_even_flag(m: &mut TripleMorphism) -> Result<Check, CategoryError> {
    let g1 = m.source.grading().ok_or(CategoryError::MissingStructure("source grading"))?;
    let g2 = m.target.grading().ok_or(CategoryError::MissingStructure("target grading"))?;
    let lhs = g2.compose(&m.phi)?;
    let rhs = m.phi.compose(g1)?;
    let cols = safe_columns(&m.source, &m.target, &m.phi, m.phi_spread, 0, 0);
    let mm = compare_columns(&lhs, &rhs, &cols);
    let c = mismatch_check("even", &mm, tolerance(&m.source, &m.target), &m.source, m.safe_radius, "Γ₂∘Φ = Φ∘Γ₁");
    m.even_checked = c.passed();
    Ok(c)
}

pub fn identity(t: &TripleModel) -> Result<TripleMorphism, CategoryError> {
    Ok(TripleMorphism {
        source: t.clone(),
        target: t.clone(),
        algebra_map: AlgebraMap::Identity,
        phi: Operator::identity(t.dimension())?,
        real_checked: true,
        even_checked: t.grading().is_some(),
        phi_spread: 0,
        safe_radius: t.safe_radius(0),
    })
}

/// `m2 ∘ m1`.
pub fn compose(m2: &TripleMorphism, m1: &TripleMorphism) -> Result<TripleMorphism, CategoryError> {
    if !m1.target.same_structure(&m2.source) || m1.target.weight().describe() != m2.source.weight().describe() {
        return Err(CategoryError::NotComposable);
    }
    Ok(TripleMorphism {
        source: m1.source.clone(),
        target: m2.target.clone(),
        algebra_map: m1.algebra_map.then(&m2.algebra_map)?,
        phi: m2.phi.compose(&m1.phi)?,
        real_checked: m1.real_checked && m2.real_checked,
        even_checked: m1.even_checked && m2.even_checked,
        phi_spread: m1.phi_spread + m2.phi_spread,
        safe_radius: match (m1.safe_radius, m2.safe_radius) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
    })
}

#[derive(Debug, Clone)]
pub struct WeakReport {
    /// `Φ∘[D₁, π₁(f)] = [D₂, π₂(φ(f))]∘Φ`.
    pub weak: Check,
    pub strict: MorphismReport,
    pub degenerate: bool,
}

/// Commutator-only intertwining alongside the strict verdict.
pub fn check_weak_intertwining(
    t1: &TripleModel,
    t2: &TripleModel,
    algebra_map: &AlgebraMap,
    phi: &Operator,
    opts: &MorphismOptions,
) -> Result<WeakReport, CategoryError> {
    let strict = check_morphism(t1, t2, algebra_map, phi, opts)?;
    let d1 = t1.dirac_operator()?;
    let d2 = t2.dirac_operator()?;
    let mut worst = Mismatch {
        residual: 0.0,
        column: usize::MAX,
        lhs: Complex64::new(0.0, 0.0),
        rhs: Complex64::new(0.0, 0.0),
    };
    let mut min_radius: Option<u32> = None;
    for f in probe_elements(t1, opts.samples, opts.seed) {
        let image = algebra_map.apply(&f)?;
        let s1 = support_radius(t1, &f)?;
        let s2 = support_radius(t2, &image)?;
        let cols = safe_columns(t1, t2, phi, opts.phi_spread, s1, s2);
        if let Some(r) = t1.safe_radius(s1 + opts.phi_spread) {
            min_radius = Some(min_radius.map_or(r, |m| m.min(r)));
        }
        let lhs = phi.compose(&d1.commutator(&t1.pi(&f)?)?)?;
        let rhs = d2.commutator(&t2.pi(&image)?)?.compose(phi)?;
        let m = compare_columns(&lhs, &rhs, &cols);
        if m.residual > worst.residual {
            worst = m;
        }
    }
    let strict_ok = strict.passed();
    let weak = mismatch_check(
        "weak_intertwining",
        &worst,
        tolerance(t1, t2),
        t1,
        min_radius,
        "Φ∘[D₁, π₁(f)] = [D₂, π₂(φ(f))]∘Φ",
    );
    let weak = if weak.passed() {
        let detail = if strict_ok { "strict and weak" } else { "weak only" };
        Check { detail: detail.into(), ..weak }
    } else {
        weak
    };
    Ok(WeakReport {
        weak,
        strict,
        degenerate: phi.max_abs_entry() == 0.0,
    })
}

/// `Φ = π(δ_g)Jπ(δ_g)J` with the algebra map of `ad_g`; a morphism iff `ω` is
/// invariant under conjugation by `g` on the ball.
pub fn inner_automorphism(t: &TripleModel, g: &GroupElement) -> Result<MorphismReport, CategoryError> {
    let Some(lg) = t.ball().word_length_of(g) else {
        return Err(CategoryError::ElementOutsideBall(t.group().label(g)));
    };
    let p = t.pi_delta(g)?;
    let j = t.j_operator()?;
    let phi = p.compose(&j)?.compose(&p)?.compose(&j)?;
    let conj = GroupHom::conjugation(t.group().clone(), g)?;
    let opts = MorphismOptions {
        phi_spread: 2 * lg,
        ..MorphismOptions::default()
    };
    check_morphism(t, t, &AlgebraMap::HomInduced(conj), &phi, &opts)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::GroupModel;
    use crate::triple::assemble_triple;
    use crate::weights::WeightModel;

    fn cyc(n: u64, table: Vec<f64>) -> TripleModel {
        let g = Arc::new(GroupModel::Cyclic(n));
        let w = WeightModel::table(g.clone(), table).unwrap();
        assemble_triple(g, &w, n as u32, &[GroupElement::Index(1)]).unwrap()
    }

    fn h_matrix(hom: &GroupHom, t1: &TripleModel, t2: &TripleModel) -> Operator {
        let mut m = Operator::zeros(t2.dimension(), t1.dimension()).unwrap();
        for (j, x) in t1.ball().elements().iter().enumerate() {
            m.set(t2.ball().position(&hom.apply(x)).unwrap(), j, Complex64::new(1.0, 0.0));
        }
        m
    }

    fn c2_to_c4() -> GroupHom {
        GroupHom::from_images(
            Arc::new(GroupModel::Cyclic(2)),
            Arc::new(GroupModel::Cyclic(4)),
            &[(GroupElement::Index(1), GroupElement::Index(2))],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_morphism() {
        let t = cyc(5, vec![0.0, 1.0, 2.0, 2.0, 1.0]);
        let id = identity(&t).unwrap();
        let r = check_morphism(&t, &t, &id.algebra_map, &id.phi, &MorphismOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn pulled_back_weight_gives_a_morphism_and_word_length_does_not() {
        let hom = c2_to_c4();
        let t2 = cyc(4, vec![0.0, 1.0, 2.0, 1.0]);
        let t1 = cyc(2, vec![0.0, 2.0]);
        let phi = h_matrix(&hom, &t1, &t2);
        let map = AlgebraMap::HomInduced(hom);
        let r = check_morphism(&t1, &t2, &map, &phi, &MorphismOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        let mut m = r.morphism.unwrap();
        assert!(check_real_flag(&mut m).unwrap().passed());
        assert!(m.is_isometry());

        let t1 = cyc(2, vec![0.0, 1.0]);
        let r = check_morphism(&t1, &t2, &map, &phi, &MorphismOptions::default()).unwrap();
        assert!(!r.passed());
        let d = r.check("dirac_intertwining").unwrap();
        let w = d.witness.as_ref().unwrap();
        assert_eq!(w.elements, vec![GroupElement::Index(1)]);
        assert_eq!(w.values, vec![1.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn imaginary_phi_breaks_real_flag() {
        let hom = c2_to_c4();
        let t2 = cyc(4, vec![0.0, 1.0, 2.0, 1.0]);
        let t1 = cyc(2, vec![0.0, 2.0]);
        let phi = h_matrix(&hom, &t1, &t2).scale(Complex64::new(0.0, 1.0));
        let r = check_morphism(&t1, &t2, &AlgebraMap::HomInduced(hom), &phi, &MorphismOptions::default()).unwrap();
        let mut m = r.morphism.unwrap();
        let c = check_real_flag(&mut m).unwrap();
        assert!(!m.real_checked);
        assert_eq!(c.value("max_residual"), Some(2.0));
        assert_eq!(c.witness.unwrap().elements, vec![GroupElement::Index(0)]);
    }

    #[test]
    fn weak_versus_strict() {
        let z = Arc::new(GroupModel::integers());
        let g = [GroupElement::int(1)];
        let t1 = assemble_triple(z.clone(), &WeightModel::hom(z.clone(), vec![1.0]).unwrap(), 6, &g).unwrap();
        let t2 = assemble_triple(z.clone(), &WeightModel::affine(z.clone(), 1.0, vec![1.0]).unwrap(), 6, &g).unwrap();
        let phi = Operator::identity(t1.dimension()).unwrap();
        let r = check_weak_intertwining(&t1, &t2, &AlgebraMap::Identity, &phi, &MorphismOptions::default()).unwrap();
        assert!(r.weak.passed());
        assert!(!r.strict.passed());
        assert!(!r.strict.check("dirac_intertwining").unwrap().passed());
        let zero = Operator::zeros(t1.dimension(), t1.dimension()).unwrap();
        let r = check_weak_intertwining(&t1, &t1, &AlgebraMap::Identity, &zero, &MorphismOptions::default()).unwrap();
        assert!(r.degenerate && r.weak.passed() && r.strict.passed());
    }

    #[test]
    fn inner_automorphisms() {
        let z = Arc::new(GroupModel::integers());
        let t = assemble_triple(z.clone(), &WeightModel::standard_length(z).unwrap(), 6, &[GroupElement::int(1)]).unwrap();
        let r = inner_automorphism(&t, &GroupElement::int(2)).unwrap();
        assert!(r.passed(), "{:?}", r.checks);

        let s3 = Arc::new(GroupModel::symmetric(3).unwrap());
        let els = s3.elements().unwrap();
        let sign_class: Vec<f64> = els
            .iter()
            .map(|x| match s3.element_order(x).unwrap() {
                1 => 0.0,
                2 => 1.0,
                _ => 2.0,
            })
            .collect();
        let gens = s3.canonical_generators();
        let w = WeightModel::table(s3.clone(), sign_class).unwrap();
        let t = assemble_triple(s3.clone(), &w, 3, &gens).unwrap();
        let transposition = els.iter().find(|x| s3.element_order(x) == Some(2)).unwrap().clone();
        let r = inner_automorphism(&t, &transposition).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        let phi = &r.morphism.as_ref().unwrap().phi;
        for (j, y) in t.ball().elements().iter().enumerate() {
            let c = s3.multiply(&s3.multiply(&transposition, y), &s3.inverse(&transposition));
            assert_eq!(phi.get(t.ball().position(&c).unwrap(), j), Complex64::new(1.0, 0.0));
        }

        let mut skew: Vec<f64> = (0..6).map(|i| i as f64).collect();
        skew[0] = 0.0;
        let w = WeightModel::table(s3.clone(), skew).unwrap();
        let t = assemble_triple(s3, &w, 3, &gens).unwrap();
        let r = inner_automorphism(&t, &transposition).unwrap();
        assert!(!r.passed());
        assert!(r.check("dirac_intertwining").unwrap().witness.is_some());
    }

    #[test]
    fn composition_and_flags() {
        let hom = c2_to_c4();
        let t2 = cyc(4, vec![0.0, 1.0, 2.0, 1.0]);
        let t1 = cyc(2, vec![0.0, 2.0]);
        let phi = h_matrix(&hom, &t1, &t2);
        let mut m = check_morphism(&t1, &t2, &AlgebraMap::HomInduced(hom), &phi, &MorphismOptions::default())
            .unwrap()
            .morphism
            .unwrap();
        check_real_flag(&mut m).unwrap();
        let left = compose(&identity(&t2).unwrap(), &m).unwrap();
        let right = compose(&m, &identity(&t1).unwrap()).unwrap();
        assert_eq!(left.phi, m.phi);
        assert_eq!(right.phi, m.phi);
        assert!(left.real_checked);
        assert!(matches!(compose(&m, &m), Err(CategoryError::NotComposable)));
    }
}
