//! Truncated spectral triples `(ℂ[G], ℓ²(B_R), D_ω)` with real structure
//! and optional grading.

mod real;

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{operator_norm, represent, AlgebraElement, AlgebraError, Operator};
use crate::groups::{BallIndex, GroupElement, GroupError, GroupModel};
use crate::report::{Check, Status};
use crate::weights::{self, check_dirac_weight, check_proper, ProperCertificate, WeightError, WeightModel};

pub use real::{
    grading_obstruction, ko_signature, verify_axioms, verify_grading, verify_real_structure, AxiomReport, Commutation,
    GradingDiagnosis, GradingKind, KoSignature, RealStructureReport, KO_TABLE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TripleError {
    #[error("{0} lies outside the ball")]
    ElementOutsideBall(String),
    #[error("no valid real structure: {0}")]
    NoValidRealStructure(String),
    #[error("depth {0} exceeds the supported maximum of 6")]
    DepthTooLarge(usize),
    #[error("heat parameter must be positive, got {0}")]
    NonPositiveT(f64),
    #[error("fluctuation has the wrong shape or is antilinear")]
    BadFluctuation,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Properness and Dirac-weight verdicts of the weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFlags {
    pub proper: ProperCertificate,
    pub dirac: Status,
}

impl SpectralFlags {
    pub fn spectral(&self) -> bool {
        self.proper.proper == Some(true) && self.dirac == Status::Pass
    }
}

#[derive(Debug, Clone)]
pub struct TripleModel {
    weight: WeightModel,
    ball: BallIndex,
    /// 1, or 2 for a doubled triple.
    copies: usize,
    /// Diagonal of `D` over all copies.
    dirac: Vec<f64>,
    grading: Option<Operator>,
    /// Inner fluctuation `A` with the word-length spread of its terms.
    fluctuation: Option<(Operator, u32)>,
    flags: SpectralFlags,
}

/// Builds the ball, the diagonal Dirac operator and the spectral verdicts.
/// Non-spectral weights still produce a model, flagged accordingly.
pub fn assemble_triple(
    group: Arc<GroupModel>,
    weight: &WeightModel,
    radius: u32,
    generators: &[GroupElement],
) -> Result<TripleModel, TripleError> {
    if weight.group() != &group {
        return Err(GroupError::GroupMismatch("weight lives on another group".into()).into());
    }
    let ball = BallIndex::with_cap(group, generators, radius, weights::ball_cap())?;
    TripleModel::on_ball(weight, ball)
}

impl TripleModel {
    pub fn on_ball(weight: &WeightModel, ball: BallIndex) -> Result<Self, TripleError> {
        if weight.group() != ball.group() {
            return Err(GroupError::GroupMismatch("weight lives on another group".into()).into());
        }
        let dirac = weight.values_on_ball(&ball)?;
        let probes: Vec<GroupElement> = ball.generators().iter().filter(|g| ball.contains(g)).cloned().collect();
        let dirac_report = check_dirac_weight(weight, &ball, &probes)?;
        let flags = SpectralFlags {
            proper: check_proper(weight, &ball),
            dirac: dirac_report.check("dirac_weight").map_or(Status::Unknown, |c| c.status),
        };
        Ok(TripleModel {
            weight: weight.clone(),
            ball,
            copies: 1,
            dirac,
            grading: None,
            fluctuation: None,
            flags,
        })
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        self.ball.group()
    }

    pub fn weight(&self) -> &WeightModel {
        &self.weight
    }

    pub fn ball(&self) -> &BallIndex {
        &self.ball
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dimension(&self) -> usize {
        self.ball.len() * self.copies
    }

    pub fn flags(&self) -> &SpectralFlags {
        &self.flags
    }

    pub fn is_spectral(&self) -> bool {
        self.flags.spectral()
    }

    pub fn is_integer_valued(&self) -> bool {
        self.weight.is_integer_valued() && self.fluctuation.is_none()
    }

    /// Diagonal of the unperturbed `D`.
    pub fn dirac_diagonal(&self) -> &[f64] {
        &self.dirac
    }

    pub fn fluctuation(&self) -> Option<&Operator> {
        self.fluctuation.as_ref().map(|(a, _)| a)
    }

    /// `D` (plus the fluctuation, if any).
    pub fn dirac_operator(&self) -> Result<Operator, TripleError> {
        let d = Operator::diagonal(&self.dirac)?;
        Ok(match &self.fluctuation {
            Some((a, _)) => d.add(a)?,
            None => d,
        })
    }

    /// `|D|` of the unperturbed operator.
    pub fn abs_dirac_operator(&self) -> Result<Operator, TripleError> {
        let abs: Vec<f64> = self.dirac.iter().map(|v| v.abs()).collect();
        Ok(Operator::diagonal(&abs)?)
    }

    /// `(Jξ)(x) = conj ξ(x⁻¹)` on every copy.
    pub fn j_operator(&self) -> Result<Operator, TripleError> {
        let n = self.ball.len();
        let mut m = Operator::zeros(self.dimension(), self.dimension())?;
        for c in 0..self.copies {
            for i in 0..n {
                m.set(c * n + self.ball.inverse_position(i), c * n + i, Complex64::new(1.0, 0.0));
            }
        }
        Ok(m.into_antilinear())
    }

    pub fn grading(&self) -> Option<&Operator> {
        self.grading.as_ref()
    }

    /// `π(f)` on every copy.
    pub fn pi(&self, f: &AlgebraElement) -> Result<Operator, TripleError> {
        let p = represent(f, &self.ball)?;
        Ok(match self.copies {
            1 => p,
            _ => Operator::block_diagonal(&p, &p)?,
        })
    }

    pub fn pi_delta(&self, x: &GroupElement) -> Result<Operator, TripleError> {
        self.pi(&AlgebraElement::delta(self.group().clone(), x.clone()))
    }

    /// Word-length spread contributed by the fluctuation.
    pub fn fluctuation_spread(&self) -> u32 {
        self.fluctuation.as_ref().map_or(0, |(_, s)| *s)
    }

    /// Basis indices (all copies) whose ball element has word length at most
    /// `R − spread − fluctuation spread`.
    pub fn safe_indices(&self, spread: u32) -> Vec<usize> {
        let base = self.ball.safe_indices(spread + self.fluctuation_spread());
        let n = self.ball.len();
        (0..self.copies).flat_map(|c| base.iter().map(move |i| c * n + i)).collect()
    }

    /// Radius of the safe core for a given spread, `None` when the ball is
    /// complete (every column is safe).
    pub fn safe_radius(&self, spread: u32) -> Option<u32> {
        if self.ball.is_complete() {
            None
        } else {
            Some(self.ball.radius().saturating_sub(spread + self.fluctuation_spread()))
        }
    }

    /// Copy with `D` replaced by `D + A`; `spread` bounds the word-length reach of `A`.
    pub fn with_fluctuation(&self, a: &Operator, spread: u32) -> Result<TripleModel, TripleError> {
        if a.rows() != self.dimension() || a.cols() != self.dimension() || a.is_antilinear() {
            return Err(TripleError::BadFluctuation);
        }
        let mut t = self.clone();
        t.fluctuation = Some((a.clone(), spread));
        Ok(t)
    }

    /// Element of the basis index (copy-agnostic).
    pub fn basis_element(&self, index: usize) -> &GroupElement {
        self.ball.element(index % self.ball.len())
    }

    /// Same underlying group, basis, copies and `D`.
    pub fn same_structure(&self, other: &TripleModel) -> bool {
        self.ball.same_basis(&other.ball)
            && self.copies == other.copies
            && self.dirac == other.dirac
            && self.fluctuation == other.fluctuation
            && self.grading == other.grading
    }
}

/// `H ⊕ H`, `π ⊕ π`, `D ⊕ (−D)`, `Γ` the block swap, `J ⊕ J`.
pub fn double_triple(triple: &TripleModel) -> Result<TripleModel, TripleError> {
    if triple.copies != 1 {
        return Err(TripleError::BadFluctuation);
    }
    let n = triple.ball.len();
    let mut t = triple.clone();
    t.copies = 2;
    t.dirac = triple.dirac.iter().copied().chain(triple.dirac.iter().map(|v| -v)).collect();
    let mut gamma = Operator::zeros(2 * n, 2 * n)?;
    for i in 0..n {
        gamma.set(i, n + i, Complex64::new(1.0, 0.0));
        gamma.set(n + i, i, Complex64::new(1.0, 0.0));
    }
    t.grading = Some(gamma);
    t.fluctuation = match &triple.fluctuation {
        Some((a, s)) => Some((Operator::block_diagonal(a, &a.scale(Complex64::new(-1.0, 0.0)))?, *s)),
        None => None,
    };
    Ok(t)
}

/// Copy of a triple with a given grading (used for zero-weight gradings).
pub fn with_grading(triple: &TripleModel, gamma: Operator) -> Result<TripleModel, TripleError> {
    if gamma.rows() != triple.dimension() || gamma.cols() != triple.dimension() {
        return Err(TripleError::BadFluctuation);
    }
    let mut t = triple.clone();
    t.grading = Some(gamma);
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorNorm {
    /// Operator norm of the compressed commutator.
    pub computed: f64,
    /// `sup |ω(xy) − ω(y)|` over `y, xy` in the ball.
    pub analytic: f64,
}

pub fn commutator_norm(triple: &TripleModel, x: &GroupElement) -> Result<CommutatorNorm, TripleError> {
    let ball = &triple.ball;
    if !ball.contains(x) {
        return Err(TripleError::ElementOutsideBall(triple.group().label(x)));
    }
    let d = triple.dirac_operator()?;
    let c = d.commutator(&triple.pi_delta(x)?)?;
    let computed = operator_norm(&c)?;
    let group = triple.group();
    let mut analytic: f64 = 0.0;
    for (j, y) in ball.elements().iter().enumerate() {
        if let Some(i) = ball.position(&group.multiply(x, y)) {
            analytic = analytic.max((triple.dirac[i] - triple.dirac[j]).abs());
        }
    }
    Ok(CommutatorNorm { computed, analytic })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainKind {
    /// `[|D|, …, [|D|, π(δ_x)]]`, bound `sⁿ`.
    Abs,
    /// `[|D|, …, [|D|, [D, π(δ_x)]]]`, bound `sⁿ⁺¹`.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityEntry {
    pub depth: usize,
    pub kind: ChainKind,
    pub computed: f64,
    pub bound: f64,
}

impl RegularityEntry {
    pub fn holds(&self) -> bool {
        self.computed <= self.bound
    }
}

/// Iterated commutators with `|D|`, normed on the safe core of `x`.
pub fn regularity_estimates(
    triple: &TripleModel,
    x: &GroupElement,
    depth: usize,
) -> Result<Vec<RegularityEntry>, TripleError> {
    if depth > 6 {
        return Err(TripleError::DepthTooLarge(depth));
    }
    let ball = &triple.ball;
    let Some(lx) = ball.word_length_of(x) else {
        return Err(TripleError::ElementOutsideBall(triple.group().label(x)));
    };
    let group = triple.group();
    let x_inv = group.inverse(x);
    let mut s: f64 = 0.0;
    for (j, y) in ball.elements().iter().enumerate() {
        if let Some(k) = ball.position(&group.multiply(&x_inv, y)) {
            s = s.max((triple.dirac[j] - triple.dirac[k]).abs());
        }
    }
    let safe = triple.safe_indices(lx);
    let abs_d = triple.abs_dirac_operator()?;
    let d = triple.dirac_operator()?;
    let p = triple.pi_delta(x)?;
    let mut abs_chain = p.clone();
    let mut mixed_chain = d.commutator(&p)?;
    let mut out = Vec::new();
    for n in 1..=depth {
        abs_chain = abs_d.commutator(&abs_chain)?;
        out.push(RegularityEntry {
            depth: n,
            kind: ChainKind::Abs,
            computed: operator_norm(&abs_chain.restrict_columns(&safe))?,
            bound: s.powi(n as i32),
        });
        mixed_chain = abs_d.commutator(&mixed_chain)?;
        out.push(RegularityEntry {
            depth: n,
            kind: ChainKind::Mixed,
            computed: operator_norm(&mixed_chain.restrict_columns(&safe))?,
            bound: s.powi(n as i32 + 1),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTrace {
    pub value: f64,
    /// Contribution of the outermost shell relative to the total.
    pub last_shell_relative: f64,
    /// Whether that contribution is below `1e-12` (convergence evidence only).
    pub tail_small: bool,
}

/// `Σ exp(−t D²)` over the basis.
pub fn heat_trace(triple: &TripleModel, t: f64) -> Result<HeatTrace, TripleError> {
    if t.is_nan() || t <= 0.0 {
        return Err(TripleError::NonPositiveT(t));
    }
    let n = triple.ball.len();
    let term = |i: usize| (-t * triple.dirac[i] * triple.dirac[i]).exp();
    let value: f64 = (0..triple.dimension()).map(term).sum();
    let last_shell_relative = if triple.ball.is_complete() {
        0.0
    } else {
        let shell = triple.ball.shell(triple.ball.radius());
        let s: f64 = (0..triple.copies)
            .flat_map(|c| shell.clone().map(move |i| c * n + i))
            .map(term)
            .sum();
        s / value
    };
    Ok(HeatTrace {
        value,
        last_shell_relative,
        tail_small: last_shell_relative < 1e-12,
    })
}

/// Pass/fail summary of the regularity entries.
pub fn regularity_check(entries: &[RegularityEntry], safe_radius: Option<u32>) -> Check {
    let violation = entries.iter().find(|e| !e.holds());
    let mut c = Check::new("regularity", Status::from_bool(violation.is_none())).with_safe_core(safe_radius);
    for e in entries {
        let tag = match e.kind {
            ChainKind::Abs => "abs",
            ChainKind::Mixed => "mixed",
        };
        c = c
            .with_value(format!("{tag}_{}_computed", e.depth), e.computed)
            .with_value(format!("{tag}_{}_bound", e.depth), e.bound);
    }
    c
}
