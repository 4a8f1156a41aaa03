use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{functor_morphism, FunctorError, ObjectSpec};
use crate::algebra::{linearize_hom, random_full_element, AlgebraElement};
use crate::category::{compose, TripleMorphism};
use crate::exact::{self, Rational};
use crate::groups::{GroupElement, GroupError, GroupHom};
use crate::report::{Check, Status};
use crate::weights::{check_weighted_hom, WeightModel};

/// Weight on the quotient used for each splitting.
#[derive(Debug, Clone)]
pub enum RelatorWeights {
    /// One weight for every splitting; splittings that are not weighted are reported.
    Fixed(WeightModel),
    /// `ω_H = ω_G ∘ ψ` for each splitting `ψ`.
    Pullback,
}

#[derive(Debug, Clone)]
pub struct RelatorEntry {
    pub splitting: GroupHom,
    pub weight: WeightModel,
    pub weighted: bool,
    pub checks: Vec<Check>,
    /// `(A_ψ, H_ψ)` from the triple over `H` to the triple over `G`.
    pub morphism: Option<TripleMorphism>,
}

#[derive(Debug, Clone)]
pub struct RelatorPair {
    pub epi: GroupHom,
    pub entries: Vec<RelatorEntry>,
}

impl RelatorPair {
    pub fn splittings(&self) -> impl Iterator<Item = &GroupHom> {
        self.entries.iter().map(|e| &e.splitting)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &TripleMorphism> {
        self.entries.iter().filter_map(|e| e.morphism.as_ref())
    }
}

/// One triple morphism `H → G` per splitting `ψ` of the epimorphism `G → H`.
pub fn relator_morphisms(epi: &GroupHom, w_g: &WeightModel, weights: &RelatorWeights) -> Result<RelatorPair, FunctorError> {
    if !epi.source().is_finite() || !epi.target().is_finite() {
        return Err(FunctorError::InfiniteGroup);
    }
    if w_g.group() != epi.source() {
        return Err(GroupError::GroupMismatch("weight does not live on the source".into()).into());
    }
    let splittings = epi.enumerate_splittings().map_err(|e| match e {
        GroupError::NotEpimorphism => FunctorError::NotEpi,
        GroupError::InfiniteGroup => FunctorError::InfiniteGroup,
        other => other.into(),
    })?;
    let g_spec = ObjectSpec::canonical(w_g.clone(), 0);
    let mut entries = Vec::new();
    for psi in splittings {
        let w_h = match weights {
            RelatorWeights::Fixed(w) => w.clone(),
            RelatorWeights::Pullback => WeightModel::pullback(&psi, w_g)?,
        };
        let h_spec = ObjectSpec::canonical(w_h.clone(), 0);
        let ball = super::verdict_ball(epi.target())?;
        let report = check_weighted_hom(&psi, &w_h, w_g, &ball)?;
        let weighted = report.passed("weighted");
        // The functor morphism repeats the weighted-hom checks.
        let (checks, morphism) = if weighted {
            let fm = functor_morphism(&psi, &h_spec, &g_spec, false)?;
            (fm.checks, Some(fm.morphism))
        } else {
            (report.checks, None)
        };
        entries.push(RelatorEntry {
            splitting: psi,
            weight: w_h,
            weighted,
            checks,
            morphism,
        });
    }
    Ok(RelatorPair {
        epi: epi.clone(),
        entries,
    })
}

/// For `G →φ₁ H →φ₂ K` with pulled-back weights: every composite
/// `H_{ψ₁}·H_{ψ₂}` of stored morphisms is stored for `φ₂∘φ₁` under the
/// splitting `ψ₁∘ψ₂`.
pub fn relator_closure(phi1: &GroupHom, phi2: &GroupHom, w_g: &WeightModel) -> Result<Check, FunctorError> {
    let composite_epi = phi2.compose(phi1).map_err(|_| FunctorError::NotComposable)?;
    let composite = relator_morphisms(&composite_epi, w_g, &RelatorWeights::Pullback)?;
    let first = relator_morphisms(phi1, w_g, &RelatorWeights::Pullback)?;
    let mut pairs = 0usize;
    for e1 in &first.entries {
        let Some(m1) = &e1.morphism else { continue };
        let second = relator_morphisms(phi2, &e1.weight, &RelatorWeights::Pullback)?;
        for e2 in &second.entries {
            let Some(m2) = &e2.morphism else { continue };
            pairs += 1;
            let psi = e1.splitting.compose(&e2.splitting)?;
            let composed = compose(m1, m2)?;
            let stored = composite
                .entries
                .iter()
                .find(|e| e.splitting.same_map(&psi))
                .and_then(|e| e.morphism.as_ref());
            let ok = stored.is_some_and(|s| s.phi == composed.phi && s.target.same_structure(&composed.target));
            if !ok {
                return Ok(Check::new("relator_closure", Status::Fail).with_detail(format!(
                    "composite of splittings {:?} missing or different",
                    psi.table().unwrap_or_default()
                )));
            }
        }
    }
    Ok(Check::pass("relator_closure")
        .with_value("composites", pairs as f64)
        .with_value("stored", composite.entries.len() as f64))
}

#[derive(Debug, Clone)]
pub struct LinearizationReport {
    pub kernel_order: usize,
    /// Largest `‖A_φ f‖² / ‖f‖²` over the random samples.
    pub max_ratio: f64,
    /// Ratio on `f = Σ_{h ∈ ker φ} δ_h`.
    pub witness_ratio: f64,
    pub kernel_dimension: usize,
    pub expected_dimension: usize,
    pub checks: Vec<Check>,
}

/// `‖A_φ f‖² ≤ |ker φ|·‖f‖²`, its equality case, and `ker A_φ` computed exactly.
pub fn check_linearization_bound(hom: &GroupHom, samples: usize, seed: u64) -> Result<LinearizationReport, FunctorError> {
    let g = hom.source();
    let h = hom.target();
    let (Some(g_elements), Some(h_elements)) = (g.elements(), h.elements()) else {
        return Err(FunctorError::InfiniteGroup);
    };
    let kernel: Vec<GroupElement> = g_elements.iter().filter(|x| h.is_identity(&hom.apply(x))).cloned().collect();
    let k = kernel.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    let mut violation = None;
    for _ in 0..samples {
        let f = random_full_element(g, &mut rng);
        if f.is_zero() {
            continue;
        }
        let lhs = linearize_hom(hom, &f)?.norm_sqr();
        let rhs = k as f64 * f.norm_sqr();
        max_ratio = max_ratio.max(lhs / f.norm_sqr());
        if lhs > rhs && violation.is_none() {
            violation = Some(lhs / f.norm_sqr());
        }
    }
    let indicator = AlgebraElement::from_terms(g.clone(), kernel.iter().map(|x| (x.clone(), Complex64::new(1.0, 0.0))));
    let witness_ratio = linearize_hom(hom, &indicator)?.norm_sqr() / indicator.norm_sqr();

    // A_φ as an |H| × |G| integer matrix
    let n = g_elements.len();
    let mut rows = vec![vec![0i64; n]; h_elements.len()];
    for (j, x) in g_elements.iter().enumerate() {
        let i = h.element_index(&hom.apply(x)).expect("image in the target");
        rows[i][j] = 1;
    }
    let null = exact::nullspace(&rows, n);
    let image = rows.iter().filter(|r| r.iter().any(|&v| v != 0)).count();
    let zero = Rational::from_integer(0);
    let spanning: Vec<Vec<Rational>> = g_elements
        .iter()
        .enumerate()
        .flat_map(|(j, x)| {
            kernel.iter().filter_map(move |hk| {
                let i = g.element_index(&g.multiply(x, hk)).expect("element");
                (i != j).then(|| {
                    let mut v = vec![Rational::from_integer(0); n];
                    v[i] = Rational::from_integer(1);
                    v[j] = Rational::from_integer(-1);
                    v
                })
            })
        })
        .collect();
    let span_rank = exact::rank_rational(&spanning);
    let spanning_in_kernel = spanning.iter().all(|v| {
        rows.iter()
            .all(|r| r.iter().zip(v).fold(zero, |acc, (&a, b)| acc + Rational::from_integer(a as i128) * b) == zero)
    });
    let kernel_in_span = null.iter().all(|v| {
        let mut ext = spanning.clone();
        ext.push(v.clone());
        exact::rank_rational(&ext) == span_rank
    });
    let expected = n - image;

    let checks = vec![
        Check::new("norm_bound", Status::from_bool(violation.is_none()))
            .with_value("max_ratio", max_ratio)
            .with_value("kernel_order", k as f64)
            .with_value("samples", samples as f64),
        Check::new("equality_witness", Status::from_bool(witness_ratio == k as f64)).with_value("ratio", witness_ratio),
        Check::new(
            "kernel_span",
            Status::from_bool(null.len() == expected && span_rank == expected && spanning_in_kernel && kernel_in_span),
        )
        .with_value("kernel_dimension", null.len() as f64)
        .with_value("expected_dimension", expected as f64)
        .with_value("span_rank", span_rank as f64)
        .with_detail("ker A_φ = span{δ_{xh} − δ_x : h ∈ ker φ}"),
    ];
    Ok(LinearizationReport {
        kernel_order: k,
        max_ratio,
        witness_ratio,
        kernel_dimension: null.len(),
        expected_dimension: expected,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::GroupModel;

    fn c(n: u64) -> Arc<GroupModel> {
        Arc::new(GroupModel::Cyclic(n))
    }

    fn reduce(a: u64, b: u64) -> GroupHom {
        GroupHom::from_images(c(a), c(b), &[(GroupElement::Index(1), GroupElement::Index(1))]).unwrap()
    }

    #[test]
    fn splitting_counts() {
        let w6 = WeightModel::table(c(6), vec![0.0, 1.0, 2.0, 3.0, 2.0, 1.0]).unwrap();
        let r = relator_morphisms(&reduce(6, 3), &w6, &RelatorWeights::Pullback).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].splitting.apply(&GroupElement::Index(1)), GroupElement::Index(4));
        let wh = r.entries[0].weight.values_on_ball(r.morphisms().next().unwrap().source.ball()).unwrap();
        assert_eq!(wh, vec![0.0, 2.0, 2.0]);
        assert_eq!(r.morphisms().count(), 1);

        let k4 = Arc::new(GroupModel::product(GroupModel::Cyclic(2), GroupModel::Cyclic(2)));
        let proj = GroupHom::from_fn(k4.clone(), c(2), |x| match x {
            GroupElement::Pair(a, _) => a.as_ref().clone(),
            _ => unreachable!(),
        })
        .unwrap();
        let wk = WeightModel::standard_length(k4).unwrap();
        let r = relator_morphisms(&proj, &wk, &RelatorWeights::Pullback).unwrap();
        assert_eq!(r.morphisms().count(), 2);

        let w4 = WeightModel::standard_length(c(4)).unwrap();
        let r = relator_morphisms(&reduce(4, 2), &w4, &RelatorWeights::Pullback).unwrap();
        assert!(r.entries.is_empty());
        assert!(matches!(
            relator_morphisms(
                &GroupHom::from_images(c(2), c(4), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap(),
                &WeightModel::standard_length(c(2)).unwrap(),
                &RelatorWeights::Pullback
            ),
            Err(FunctorError::NotEpi)
        ));
    }

    #[test]
    fn fixed_weights_report_unweighted_splittings() {
        let w6 = WeightModel::table(c(6), vec![0.0, 1.0, 2.0, 3.0, 2.0, 1.0]).unwrap();
        let w3 = WeightModel::standard_length(c(3)).unwrap();
        let r = relator_morphisms(&reduce(6, 3), &w6, &RelatorWeights::Fixed(w3)).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(!r.entries[0].weighted && r.entries[0].morphism.is_none());
    }

    #[test]
    fn identity_epi_and_closure() {
        let w = WeightModel::standard_length(c(6)).unwrap();
        let id = GroupHom::identity(c(6));
        let r = relator_morphisms(&id, &w, &RelatorWeights::Pullback).unwrap();
        assert_eq!(r.entries.len(), 1);
        let m = r.morphisms().next().unwrap();
        assert_eq!(m.phi, crate::algebra::Operator::identity(6).unwrap());
        let w12 = WeightModel::standard_length(c(12)).unwrap();
        let check = relator_closure(&reduce(12, 6), &reduce(6, 3), &w12).unwrap();
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn linearization_examples() {
        let r = check_linearization_bound(&reduce(4, 2), 100, 1).unwrap();
        assert_eq!(r.kernel_order, 2);
        assert_eq!(r.witness_ratio, 2.0);
        assert!(r.checks.iter().all(Check::passed), "{:?}", r.checks);
        let r = check_linearization_bound(&reduce(6, 3), 100, 1).unwrap();
        assert_eq!((r.kernel_order, r.kernel_dimension), (2, 3));
        assert!(r.checks.iter().all(Check::passed));
        let inc = GroupHom::from_images(c(3), c(6), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let r = check_linearization_bound(&inc, 50, 1).unwrap();
        assert_eq!((r.kernel_order, r.kernel_dimension, r.max_ratio), (1, 0, 1.0));
    }
}
