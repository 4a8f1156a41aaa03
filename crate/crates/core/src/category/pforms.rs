use super::{
    check_morphism, compare_columns, mismatch_check, safe_columns, support_radius, AlgebraMap, CategoryError,
    MorphismOptions, MorphismReport, TripleMorphism,
};
use crate::algebra::{AlgebraElement, Operator};
use crate::report::{self, Check, Status};
use crate::triple::TripleModel;

/// Realized `Σ π(a₀)[D, π(a₁)]⋯[D, π(a_p)]`.
#[derive(Debug, Clone)]
pub struct PForm {
    pub degree: usize,
    pub terms: Vec<Vec<AlgebraElement>>,
    pub operator: Operator,
    /// Largest total support length over the terms.
    pub spread: u32,
}

pub fn build_p_form(triple: &TripleModel, terms: Vec<Vec<AlgebraElement>>) -> Result<PForm, CategoryError> {
    let degree = terms.first().map_or(0, |t| t.len().saturating_sub(1));
    let d = triple.dirac_operator()?;
    let mut operator = Operator::zeros(triple.dimension(), triple.dimension())?;
    let mut spread = 0;
    for term in &terms {
        if term.is_empty() || term.len() != degree + 1 {
            return Err(CategoryError::DegreeMismatch(degree, term.len().saturating_sub(1)));
        }
        let mut s = 0;
        for a in term {
            if a.group() != triple.group() {
                return Err(crate::groups::GroupError::GroupMismatch("form coefficient lives on another group".into()).into());
            }
            s += support_radius(triple, a)?;
        }
        spread = spread.max(s);
        let mut acc = triple.pi(&term[0])?;
        for a in &term[1..] {
            acc = acc.compose(&d.commutator(&triple.pi(a)?)?)?;
        }
        operator = operator.add(&acc)?;
    }
    Ok(PForm {
        degree,
        terms,
        operator,
        spread,
    })
}

fn image_terms(map: &AlgebraMap, terms: &[Vec<AlgebraElement>]) -> Result<Vec<Vec<AlgebraElement>>, CategoryError> {
    terms
        .iter()
        .map(|t| t.iter().map(|a| map.apply(a)).collect())
        .collect()
}

/// `Φ∘ω₁ = ω₂∘Φ` where `ω₂` uses the φ-images of the coefficients.
pub fn check_p_form_intertwining(m: &TripleMorphism, terms: &[Vec<AlgebraElement>]) -> Result<Check, CategoryError> {
    if !m.algebra_map.is_hom_induced() {
        return Err(CategoryError::NotHomInduced);
    }
    let source = build_p_form(&m.source, terms.to_vec())?;
    let target = build_p_form(&m.target, image_terms(&m.algebra_map, terms)?)?;
    let cols = safe_columns(&m.source, &m.target, &m.phi, m.phi_spread, source.spread, target.spread);
    let lhs = m.phi.compose(&source.operator)?;
    let rhs = target.operator.compose(&m.phi)?;
    let mm = compare_columns(&lhs, &rhs, &cols);
    Ok(mismatch_check(
        "p_form_intertwining",
        &mm,
        report::tolerance(m.source.is_integer_valued() && m.target.is_integer_valued()),
        &m.source,
        m.source.safe_radius(source.spread + m.phi_spread),
        "Φ∘ω₁ = ω₂∘Φ",
    )
    .with_value("degree", source.degree as f64)
    .with_value("columns", cols.len() as f64))
}

#[derive(Debug, Clone)]
pub struct FluctuationReport {
    pub compatible: bool,
    /// `Φ∘A₁ = A₂∘Φ` on the safe core.
    pub compatibility: Check,
    /// Self-adjointness of `A₁` and `A₂` on their safe cores (warnings only).
    pub warnings: Vec<Check>,
    /// `check_morphism` on `(D₁ + A₁, D₂ + A₂)`.
    pub deformed: MorphismReport,
}

fn self_adjoint_on_core(name: &str, t: &TripleModel, a: &PForm) -> Result<Check, CategoryError> {
    let cols = t.safe_indices(a.spread);
    let adj = a.operator.adjoint()?;
    let r = a.operator.restrict_columns(&cols).max_abs_diff(&adj.restrict_columns(&cols))?;
    Ok(Check::new(name, Status::from_bool(r <= 1e-12)).with_value("residual", r))
}

pub fn check_fluctuation_compat(
    m: &TripleMorphism,
    a1: &PForm,
    a2: &PForm,
) -> Result<FluctuationReport, CategoryError> {
    let nonempty = |a: &PForm| if a.terms.is_empty() { 1 } else { a.degree };
    if nonempty(a1) != 1 || nonempty(a2) != 1 {
        return Err(CategoryError::DegreeMismatch(a1.degree, a2.degree));
    }
    let warnings = vec![
        self_adjoint_on_core("source_potential_self_adjoint", &m.source, a1)?,
        self_adjoint_on_core("target_potential_self_adjoint", &m.target, a2)?,
    ];
    let cols = safe_columns(&m.source, &m.target, &m.phi, m.phi_spread, a1.spread, a2.spread);
    let lhs = m.phi.compose(&a1.operator)?;
    let rhs = a2.operator.compose(&m.phi)?;
    let mm = compare_columns(&lhs, &rhs, &cols);
    let tol = report::tolerance(m.source.is_integer_valued() && m.target.is_integer_valued());
    let compatibility = mismatch_check(
        "fluctuation_compatibility",
        &mm,
        tol,
        &m.source,
        m.source.safe_radius(a1.spread + m.phi_spread),
        "Φ∘A₁ = A₂∘Φ",
    );
    let t1 = m.source.with_fluctuation(&a1.operator, a1.spread)?;
    let t2 = m.target.with_fluctuation(&a2.operator, a2.spread)?;
    let opts = MorphismOptions {
        allow_non_spectral: true,
        phi_spread: m.phi_spread,
        ..MorphismOptions::default()
    };
    let deformed = check_morphism(&t1, &t2, &m.algebra_map, &m.phi, &opts)?;
    Ok(FluctuationReport {
        compatible: compatibility.passed(),
        compatibility,
        warnings,
        deformed,
    })
}
