//! The functor from weighted groups with weighted monomorphisms to spectral
//! triples, and the relator on split epimorphisms of finite groups.

mod relator;

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{AlgebraError, Operator};
use crate::category::{
    check_morphism, check_real_flag, AlgebraMap, CategoryError, MorphismOptions, TripleMorphism,
};
use crate::groups::{BallIndex, GroupElement, GroupError, GroupHom, GroupModel};
use crate::report::{Check, Status};
use crate::triple::{assemble_triple, TripleError, TripleModel};
use crate::weights::{self, check_length_axioms, check_weighted_hom, ProperCertificate, WeightError, WeightModel};

pub use relator::{
    check_linearization_bound, relator_closure, relator_morphisms, LinearizationReport, RelatorEntry, RelatorPair,
    RelatorWeights,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctorError {
    #[error("weight is not spectral: {0}")]
    NotSpectralWeight(String),
    #[error("homomorphism is not injective")]
    NotMono,
    #[error("homomorphism is not weighted: {0}")]
    NotWeighted(String),
    #[error("target ball of radius {radius} misses images of length {needed}")]
    TargetBallTooSmall { needed: u32, radius: u32 },
    #[error("homomorphisms are not composable")]
    NotComposable,
    #[error("homomorphism is not surjective")]
    NotEpi,
    #[error("finite groups required")]
    InfiniteGroup,
    #[error("pair is not a morphism of spectral triples: {0}")]
    NotAMorphism(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVerdicts {
    pub proper: ProperCertificate,
    pub dirac: Status,
    pub length: bool,
    pub charged: bool,
}

/// A group with a weight and lazily computed verdicts.
#[derive(Debug, Clone)]
pub struct WeightedGroup {
    weight: WeightModel,
    verdicts: Arc<OnceLock<Result<WeightVerdicts, WeightError>>>,
}

impl WeightedGroup {
    pub fn new(weight: WeightModel) -> Self {
        WeightedGroup {
            weight,
            verdicts: Arc::new(OnceLock::new()),
        }
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        self.weight.group()
    }

    pub fn weight(&self) -> &WeightModel {
        &self.weight
    }

    /// Verdicts on the whole group (finite) or a canonical ball of radius 6.
    pub fn verdicts(&self) -> Result<&WeightVerdicts, WeightError> {
        self.verdicts
            .get_or_init(|| compute_verdicts(&self.weight))
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn verdict_ball(group: &Arc<GroupModel>) -> Result<BallIndex, WeightError> {
    Ok(if group.is_finite() {
        BallIndex::whole_group(group.clone(), &group.canonical_generators())?
    } else {
        BallIndex::canonical(group.clone(), 6)?
    })
}

fn compute_verdicts(weight: &WeightModel) -> Result<WeightVerdicts, WeightError> {
    let group = weight.group();
    let ball = verdict_ball(group)?;
    let probes: Vec<GroupElement> = ball.generators().iter().filter(|g| ball.contains(g)).cloned().collect();
    let dirac = weights::check_dirac_weight(weight, &ball, &probes)?;
    let identity = GroupHom::identity(group.clone());
    let charged = check_weighted_hom(&identity, weight, weight, &ball)?;
    Ok(WeightVerdicts {
        proper: weights::check_proper(weight, &ball),
        dirac: dirac.check("dirac_weight").map_or(Status::Unknown, |c| c.status),
        length: check_length_axioms(weight, &ball)?.all_passed(),
        charged: charged.passed("charged"),
    })
}

/// Weighted group together with the truncation used to realize its triple.
#[derive(Debug, Clone)]
pub struct ObjectSpec {
    pub weighted: WeightedGroup,
    pub radius: u32,
    pub generators: Vec<GroupElement>,
}

impl ObjectSpec {
    pub fn new(weight: WeightModel, radius: u32, generators: Vec<GroupElement>) -> Self {
        ObjectSpec {
            weighted: WeightedGroup::new(weight),
            radius,
            generators,
        }
    }

    /// Canonical generators; finite groups use their whole Cayley graph.
    pub fn canonical(weight: WeightModel, radius: u32) -> Self {
        let gens = weight.group().canonical_generators();
        let radius = if weight.group().is_finite() {
            weight.group().order().map_or(radius, |n| n as u32)
        } else {
            radius
        };
        Self::new(weight, radius, gens)
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        self.weighted.group()
    }

    pub fn weight(&self) -> &WeightModel {
        self.weighted.weight()
    }
}

/// `(G, ω) ↦ (ℂ[G], ℓ²(B_R), D_ω)`.
pub fn functor_object(spec: &ObjectSpec, allow_non_spectral: bool) -> Result<TripleModel, FunctorError> {
    let t = assemble_triple(spec.group().clone(), spec.weight(), spec.radius, &spec.generators)?;
    if !t.is_spectral() && !allow_non_spectral {
        let f = t.flags();
        return Err(FunctorError::NotSpectralWeight(format!(
            "{}: proper {:?}, Dirac weight {}",
            spec.weight().describe(),
            f.proper.proper,
            f.dirac.as_str()
        )));
    }
    Ok(t)
}

/// `H_φ`: column `x` is `δ_{φ(x)}`.
pub fn h_matrix(hom: &GroupHom, source: &BallIndex, target: &BallIndex) -> Result<Operator, FunctorError> {
    let mut m = Operator::zeros(target.len(), source.len())?;
    let mut needed = 0;
    for (j, x) in source.elements().iter().enumerate() {
        let y = hom.apply(x);
        match target.position(&y) {
            Some(i) => m.set(i, j, Complex64::new(1.0, 0.0)),
            None => {
                needed = needed.max(image_length(target, &y));
            }
        }
    }
    if needed > 0 {
        return Err(FunctorError::TargetBallTooSmall {
            needed,
            radius: target.radius(),
        });
    }
    Ok(m)
}

fn image_length(target: &BallIndex, y: &GroupElement) -> u32 {
    let gens = target.generators().to_vec();
    weights::WeightModel::word_length(target.group().clone(), &gens)
        .and_then(|w| w.evaluate(y))
        .map_or(u32::MAX, |v| v as u32)
}

/// The functor's value on a weighted monomorphism.
#[derive(Debug, Clone)]
pub struct FunctorMorphism {
    pub morphism: TripleMorphism,
    pub checks: Vec<Check>,
}

pub fn functor_morphism(
    hom: &GroupHom,
    source: &ObjectSpec,
    target: &ObjectSpec,
    allow_non_spectral: bool,
) -> Result<FunctorMorphism, FunctorError> {
    if hom.source() != source.group() || hom.target() != target.group() {
        return Err(GroupError::GroupMismatch("objects do not match the homomorphism".into()).into());
    }
    if !hom.classify().mono {
        return Err(FunctorError::NotMono);
    }
    let t1 = functor_object(source, allow_non_spectral)?;
    let t2 = functor_object(target, allow_non_spectral)?;
    let weighted = check_weighted_hom(hom, source.weight(), target.weight(), t1.ball())?;
    let mut checks = weighted.checks.clone();
    if !weighted.passed("weighted") {
        let detail = weighted
            .check("weighted")
            .and_then(|c| c.witness.as_ref())
            .map(|w| format!("ω_G({}) = {} but ω_H(φ({})) = {}", w.labels[0], w.values[0], w.labels[0], w.values[1]))
            .unwrap_or_default();
        return Err(FunctorError::NotWeighted(detail));
    }
    let phi = h_matrix(hom, t1.ball(), t2.ball())?;
    let opts = MorphismOptions {
        allow_non_spectral,
        ..MorphismOptions::default()
    };
    let report = check_morphism(&t1, &t2, &AlgebraMap::HomInduced(hom.clone()), &phi, &opts)?;
    checks.extend(report.checks.iter().cloned());
    let Some(mut morphism) = report.morphism else {
        let failing: Vec<String> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
        return Err(FunctorError::NotAMorphism(failing.join(", ")));
    };
    checks.push(check_real_flag(&mut morphism)?);
    checks.push(Check::new("isometry", Status::from_bool(morphism.is_isometry())));
    Ok(FunctorMorphism { morphism, checks })
}

/// `F(ψ∘φ) = F(ψ)∘F(φ)`, `F(id) = id` and agreement of the algebra maps on deltas.
pub fn check_functor_laws(
    phi: &GroupHom,
    psi: &GroupHom,
    g: &ObjectSpec,
    h: &ObjectSpec,
    k: &ObjectSpec,
) -> Result<Vec<Check>, FunctorError> {
    if phi.target() != psi.source() {
        return Err(FunctorError::NotComposable);
    }
    let f_phi = functor_morphism(phi, g, h, false)?.morphism;
    let f_psi = functor_morphism(psi, h, k, false)?.morphism;
    let composite = psi.compose(phi).map_err(|_| FunctorError::NotComposable)?;
    let f_comp = functor_morphism(&composite, g, k, false)?.morphism;
    let product = f_psi.phi.compose(&f_phi.phi)?;
    let comp_residual = f_comp.phi.max_abs_diff(&product)?;

    let mut id_residual: f64 = 0.0;
    for spec in [g, h, k] {
        let id = GroupHom::identity(spec.group().clone());
        let f_id = functor_morphism(&id, spec, spec, false)?.morphism;
        id_residual = id_residual.max(f_id.phi.max_abs_diff(&Operator::identity(f_id.phi.cols())?)?);
    }

    let mut maps_agree = true;
    for x in f_phi.source.ball().elements() {
        let d = crate::algebra::AlgebraElement::delta(g.group().clone(), x.clone());
        let lhs = f_comp.algebra_map.apply(&d)?;
        let rhs = f_psi.algebra_map.apply(&f_phi.algebra_map.apply(&d)?)?;
        maps_agree &= lhs == rhs;
    }
    let isometries = [&f_phi, &f_psi, &f_comp].iter().all(|m| m.is_isometry());
    Ok(vec![
        Check::new("composition", Status::from_bool(comp_residual == 0.0)).with_value("max_residual", comp_residual),
        Check::new("identity", Status::from_bool(id_residual == 0.0)).with_value("max_residual", id_residual),
        Check::new("algebra_maps", Status::from_bool(maps_agree)),
        Check::new("isometries", Status::from_bool(isometries)),
    ])
}

/// `H_φ` has orthonormal columns, so the functor's image of a monomorphism is monic.
pub fn left_exactness_witness(hom: &GroupHom, source: &ObjectSpec, target: &ObjectSpec) -> Result<Check, FunctorError> {
    let m = functor_morphism(hom, source, target, false)?.morphism;
    let gram = m.phi.adjoint()?.compose(&m.phi)?;
    let residual = gram.max_abs_diff(&Operator::identity(gram.cols())?)?;
    Ok(Check::new("monic", Status::from_bool(residual == 0.0))
        .with_value("gram_residual", residual)
        .with_value("columns", gram.cols() as f64))
}

#[derive(Debug, Clone)]
pub struct NonFullness {
    pub checks: Vec<Check>,
    pub morphism: Option<TripleMorphism>,
    /// Every column of Φ is a standard basis vector, as for any `H_ψ`.
    pub hom_shaped: bool,
    pub degenerate: bool,
}

impl NonFullness {
    /// A genuine witness: a morphism whose Φ is not of the form `H_ψ`.
    pub fn is_witness(&self) -> bool {
        self.morphism.is_some() && !self.hom_shaped && !self.degenerate
    }
}

/// The endomorphism `(id, λ·1)` of the triple over `spec`.
pub fn non_fullness_witness(spec: &ObjectSpec, lambda: f64) -> Result<NonFullness, FunctorError> {
    let t = functor_object(spec, false)?;
    let phi = Operator::identity(t.dimension())?.scale(Complex64::new(lambda, 0.0));
    let report = check_morphism(&t, &t, &AlgebraMap::Identity, &phi, &MorphismOptions::default())?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let hom_shaped = (0..phi.cols()).all(|j| {
        let col = phi.column(j);
        col.iter().filter(|v| **v == one).count() == 1 && col.iter().all(|v| *v == one || *v == zero)
    });
    let degenerate = lambda == 0.0;
    let mut checks = report.checks;
    checks.push(
        Check::new("not_hom_induced", Status::from_bool(!hom_shaped))
            .with_value("lambda", lambda)
            .with_detail(if hom_shaped {
                "Φ has 0/1 unit columns like H_ψ"
            } else {
                "H_ψ has 0/1 unit columns; λ·1 does not"
            }),
    );
    Ok(NonFullness {
        checks,
        morphism: report.morphism,
        hom_shaped,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: u64, values: Vec<f64>) -> ObjectSpec {
        let g = Arc::new(GroupModel::Cyclic(n));
        ObjectSpec::canonical(WeightModel::table(g, values).unwrap(), 0)
    }

    fn c(n: u64) -> Arc<GroupModel> {
        Arc::new(GroupModel::Cyclic(n))
    }

    #[test]
    fn objects() {
        let z = Arc::new(GroupModel::integers());
        let spec = ObjectSpec::canonical(WeightModel::standard_length(z.clone()).unwrap(), 4);
        assert_eq!(functor_object(&spec, false).unwrap().dimension(), 9);
        let t = functor_object(&cyclic_table(4, vec![0.0, 1.0, 2.0, 1.0]), false).unwrap();
        assert_eq!(t.dirac_diagonal(), &[0.0, 1.0, 1.0, 2.0]);
        let spec = ObjectSpec::canonical(WeightModel::constant(z, 1.0), 4);
        assert!(matches!(functor_object(&spec, false), Err(FunctorError::NotSpectralWeight(_))));
        let v = spec.weighted.verdicts().unwrap();
        assert_eq!(v.proper.proper, Some(false));
    }

    #[test]
    fn functor_on_monomorphisms() {
        let hom = GroupHom::from_images(c(2), c(4), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let m = functor_morphism(&hom, &cyclic_table(2, vec![0.0, 2.0]), &cyclic_table(4, vec![0.0, 1.0, 2.0, 1.0]), false)
            .unwrap();
        assert!(m.checks.iter().all(Check::passed), "{:?}", m.checks);
        assert!(m.morphism.real_checked);

        let z = Arc::new(GroupModel::integers());
        let double = GroupHom::from_images(z.clone(), z.clone(), &[(GroupElement::int(1), GroupElement::int(2))]).unwrap();
        let w_h = WeightModel::standard_length(z.clone()).unwrap();
        let w_g = WeightModel::pullback(&double, &w_h).unwrap();
        let g = ObjectSpec::canonical(w_g.clone(), 10);
        let h = ObjectSpec::canonical(w_h.clone(), 20);
        assert!(functor_morphism(&double, &g, &h, false).is_ok());
        let short = ObjectSpec::canonical(w_h.clone(), 19);
        assert!(matches!(
            functor_morphism(&double, &g, &short, false),
            Err(FunctorError::TargetBallTooSmall { needed: 20, radius: 19 })
        ));
        let unweighted = ObjectSpec::canonical(w_h.clone(), 10);
        assert!(matches!(functor_morphism(&double, &unweighted, &h, false), Err(FunctorError::NotWeighted(_))));
        let collapse = GroupHom::from_images(c(4), c(2), &[(GroupElement::Index(1), GroupElement::Index(1))]).unwrap();
        assert!(matches!(
            functor_morphism(&collapse, &cyclic_table(4, vec![0.0, 1.0, 0.0, 1.0]), &cyclic_table(2, vec![0.0, 1.0]), false),
            Err(FunctorError::NotMono)
        ));
        let id = GroupHom::identity(z);
        let m = functor_morphism(&id, &h, &h, false).unwrap();
        assert_eq!(m.morphism.phi, Operator::identity(41).unwrap());
    }

    #[test]
    fn laws_on_a_doubling_chain() {
        let h12 = GroupHom::from_images(c(2), c(4), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let h24 = GroupHom::from_images(c(4), c(8), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let w8 = WeightModel::standard_length(c(8)).unwrap();
        let w4 = WeightModel::pullback(&h24, &w8).unwrap();
        let w2 = WeightModel::pullback(&h12, &w4).unwrap();
        let checks = check_functor_laws(
            &h12,
            &h24,
            &ObjectSpec::canonical(w2, 0),
            &ObjectSpec::canonical(w4, 0),
            &ObjectSpec::canonical(w8, 0),
        )
        .unwrap();
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }

    #[test]
    fn left_exactness() {
        let z = Arc::new(GroupModel::integers());
        let double = GroupHom::from_images(z.clone(), z.clone(), &[(GroupElement::int(1), GroupElement::int(2))]).unwrap();
        let w = WeightModel::standard_length(z).unwrap();
        let g = ObjectSpec::canonical(WeightModel::pullback(&double, &w).unwrap(), 5);
        let check = left_exactness_witness(&double, &g, &ObjectSpec::canonical(w, 10)).unwrap();
        assert!(check.passed());
        let inc = GroupHom::from_images(c3(), c(6), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let w6 = WeightModel::standard_length(c(6)).unwrap();
        let g = ObjectSpec::canonical(WeightModel::pullback(&inc, &w6).unwrap(), 0);
        assert!(left_exactness_witness(&inc, &g, &ObjectSpec::canonical(w6, 0)).unwrap().passed());
    }

    fn c3() -> Arc<GroupModel> {
        c(3)
    }

    #[test]
    fn non_fullness() {
        let z = Arc::new(GroupModel::integers());
        let spec = ObjectSpec::canonical(WeightModel::standard_length(z).unwrap(), 5);
        assert!(non_fullness_witness(&spec, 2.0).unwrap().is_witness());
        let one = non_fullness_witness(&spec, 1.0).unwrap();
        assert!(one.morphism.is_some() && one.hom_shaped && !one.is_witness());
        let zero = non_fullness_witness(&spec, 0.0).unwrap();
        assert!(zero.morphism.is_some() && zero.degenerate && !zero.is_witness());
    }
}
