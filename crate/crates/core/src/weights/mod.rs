//! Weight and length functions `ω: G → ℝ` and their verification.

mod checks;
mod quotient;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::groups::{BallIndex, GroupElement, GroupError, GroupHom, GroupModel, DEFAULT_ELEMENT_CAP};

pub use checks::{
    check_dirac_weight, check_length_axioms, check_proper, check_weighted_hom, decompose_weight, four_point_sides, Decomposition,
    DiracVerdict, ProperCertificate, ProperMethod, WeightReport,
};
pub use quotient::{pushforward_length, quotient_length, PushForward, QuotientLength, Subgroup};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weight kind does not fit the group: {0}")]
    KindMismatch(String),
    #[error("table has {got} values but the group has {expected} elements")]
    PartialTable { expected: usize, got: usize },
    #[error("cannot evaluate the weight at {0} within the element cap")]
    OutOfReach(String),
    #[error("probe {0} lies outside the ball")]
    ProbeOutsideBall(String),
    #[error("subgroup is not normal: {conjugator} conjugates {element} outside it")]
    NotNormal { element: String, conjugator: String },
    #[error("subgroup is not closed under multiplication: {0}")]
    NotASubgroup(String),
    #[error("not a length function: {0}")]
    NotALength(String),
    #[error("no certified bound for the fiber infimum: {0}")]
    InfiniteFiberSearch(String),
    #[error("{0} is not in the image of the homomorphism")]
    NotInImage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How a weight is defined.
#[derive(Debug, Clone)]
pub enum WeightKind {
    /// Word length for a symmetric generating set.
    WordLength { generators: Vec<GroupElement> },
    /// Real homomorphism: one coefficient per coordinate of
    /// [`GroupModel::hom_coordinates`].
    Hom { coefficients: Vec<f64> },
    Constant(f64),
    /// Values in canonical element order of a finite group.
    Table(Vec<f64>),
    Affine { constant: f64, coefficients: Vec<f64> },
    /// `ω(n) = Σ cₖ nᵏ` on a group with a single integer coordinate.
    Polynomial { coefficients: Vec<f64> },
    /// `ω = w ∘ φ`.
    Pullback { hom: GroupHom, weight: Box<WeightModel> },
    /// Infimum of a length over the fibers of `φ`, defined on the target.
    PushForward { hom: GroupHom, length: Box<WeightModel> },
}

#[derive(Debug, Default)]
struct Cache {
    /// Word-length table of a finite group, canonical order.
    finite: OnceLock<Result<Vec<u32>, WeightError>>,
    /// Growing ball for word lengths on infinite groups.
    ball: Mutex<Option<BallIndex>>,
    /// Memoized push-forward values.
    fibers: Mutex<HashMap<GroupElement, f64>>,
}

#[derive(Debug, Clone)]
pub struct WeightModel {
    group: Arc<GroupModel>,
    kind: WeightKind,
    cache: Arc<Cache>,
}

impl WeightModel {
    pub fn new(group: Arc<GroupModel>, kind: WeightKind) -> Result<Self, WeightError> {
        let kind = match kind {
            WeightKind::WordLength { generators } => {
                for g in &generators {
                    group.check_element(g)?;
                }
                let ball = BallIndex::new(group.clone(), &generators, 0)?;
                WeightKind::WordLength {
                    generators: ball.generators().to_vec(),
                }
            }
            WeightKind::Hom { coefficients } => {
                check_coefficients(&group, &coefficients)?;
                WeightKind::Hom { coefficients }
            }
            WeightKind::Affine { constant, coefficients } => {
                check_coefficients(&group, &coefficients)?;
                WeightKind::Affine { constant, coefficients }
            }
            WeightKind::Table(values) => {
                let order = group
                    .order()
                    .ok_or_else(|| WeightError::KindMismatch("table weights need a finite group".into()))?;
                if values.len() != order {
                    return Err(WeightError::PartialTable {
                        expected: order,
                        got: values.len(),
                    });
                }
                WeightKind::Table(values)
            }
            WeightKind::Polynomial { coefficients } => {
                if !single_integer_coordinate(&group) {
                    return Err(WeightError::KindMismatch(format!(
                        "polynomial weights need ℤ, got {}",
                        group.describe()
                    )));
                }
                WeightKind::Polynomial { coefficients }
            }
            WeightKind::Pullback { hom, weight } => {
                if hom.source() != &group || hom.target() != weight.group() {
                    return Err(WeightError::KindMismatch("pullback homomorphism does not match".into()));
                }
                WeightKind::Pullback { hom, weight }
            }
            WeightKind::PushForward { hom, length } => {
                if hom.target() != &group || hom.source() != length.group() {
                    return Err(WeightError::KindMismatch("push-forward homomorphism does not match".into()));
                }
                WeightKind::PushForward { hom, length }
            }
            k @ WeightKind::Constant(_) => k,
        };
        Ok(WeightModel {
            group,
            kind,
            cache: Arc::new(Cache::default()),
        })
    }

    pub fn word_length(group: Arc<GroupModel>, generators: &[GroupElement]) -> Result<Self, WeightError> {
        Self::new(
            group,
            WeightKind::WordLength {
                generators: generators.to_vec(),
            },
        )
    }

    /// Word length for the canonical generators of the group.
    pub fn standard_length(group: Arc<GroupModel>) -> Result<Self, WeightError> {
        let gens = group.canonical_generators();
        Self::word_length(group, &gens)
    }

    pub fn constant(group: Arc<GroupModel>, value: f64) -> Self {
        Self::new(group, WeightKind::Constant(value)).expect("constant weights fit every group")
    }

    pub fn hom(group: Arc<GroupModel>, coefficients: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(group, WeightKind::Hom { coefficients })
    }

    pub fn affine(group: Arc<GroupModel>, constant: f64, coefficients: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(group, WeightKind::Affine { constant, coefficients })
    }

    pub fn table(group: Arc<GroupModel>, values: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(group, WeightKind::Table(values))
    }

    pub fn polynomial(group: Arc<GroupModel>, coefficients: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(group, WeightKind::Polynomial { coefficients })
    }

    pub fn pullback(hom: &GroupHom, weight: &WeightModel) -> Result<Self, WeightError> {
        Self::new(
            hom.source().clone(),
            WeightKind::Pullback {
                hom: hom.clone(),
                weight: Box::new(weight.clone()),
            },
        )
    }

    pub fn pushforward(hom: &GroupHom, length: &WeightModel) -> Result<Self, WeightError> {
        Self::new(
            hom.target().clone(),
            WeightKind::PushForward {
                hom: hom.clone(),
                length: Box::new(length.clone()),
            },
        )
    }

    /// Table weight obtained by evaluating `self` on every element of a finite group.
    pub fn tabulate(&self) -> Result<Self, WeightError> {
        let elements = self
            .group
            .elements()
            .ok_or_else(|| WeightError::KindMismatch("tabulation needs a finite group".into()))?;
        let values = elements.iter().map(|x| self.evaluate(x)).collect::<Result<Vec<_>, _>>()?;
        Self::table(self.group.clone(), values)
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn evaluate(&self, x: &GroupElement) -> Result<f64, WeightError> {
        self.group.check_element(x)?;
        match &self.kind {
            WeightKind::Constant(c) => Ok(*c),
            WeightKind::Hom { coefficients } => Ok(linear(coefficients, &self.group.hom_coordinates(x))),
            WeightKind::Affine { constant, coefficients } => {
                Ok(constant + linear(coefficients, &self.group.hom_coordinates(x)))
            }
            WeightKind::Table(values) => Ok(values[self.group.element_index(x).expect("finite group")]),
            WeightKind::Polynomial { coefficients } => {
                let n = self.group.hom_coordinates(x)[0] as f64;
                Ok(coefficients.iter().rev().fold(0.0, |acc, c| acc * n + c))
            }
            WeightKind::Pullback { hom, weight } => weight.evaluate(&hom.apply(x)),
            WeightKind::WordLength { generators } => self.word_length_at(generators, x).map(f64::from),
            WeightKind::PushForward { hom, length } => self.fiber_infimum(hom, length, x),
        }
    }

    /// Values on the ball in BFS order.
    pub fn values_on_ball(&self, ball: &BallIndex) -> Result<Vec<f64>, WeightError> {
        if ball.group() != &self.group {
            return Err(GroupError::GroupMismatch("weight and ball live on different groups".into()).into());
        }
        if let WeightKind::WordLength { generators } = &self.kind {
            if generators == ball.generators() {
                return Ok((0..ball.len()).map(|i| ball.word_length(i) as f64).collect());
            }
        }
        ball.elements().iter().map(|x| self.evaluate(x)).collect()
    }

    /// Integer-valued weights are compared exactly.
    pub fn is_integer_valued(&self) -> bool {
        let ints = |v: &[f64]| v.iter().all(|c| c.fract() == 0.0);
        match &self.kind {
            WeightKind::WordLength { .. } => true,
            WeightKind::Constant(c) => c.fract() == 0.0,
            WeightKind::Hom { coefficients } | WeightKind::Polynomial { coefficients } => ints(coefficients),
            WeightKind::Affine { constant, coefficients } => constant.fract() == 0.0 && ints(coefficients),
            WeightKind::Table(values) => ints(values),
            WeightKind::Pullback { weight, .. } => weight.is_integer_valued(),
            WeightKind::PushForward { length, .. } => length.is_integer_valued(),
        }
    }

    /// Whether the kind is a length by construction (word and push-forward lengths).
    pub fn is_structural_length(&self) -> bool {
        match &self.kind {
            WeightKind::WordLength { .. } => true,
            WeightKind::PushForward { length, .. } => length.is_structural_length(),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::WordLength { generators } => format!(
                "word length for {{{}}}",
                generators.iter().map(|g| self.group.label(g)).collect::<Vec<_>>().join(",")
            ),
            WeightKind::Hom { coefficients } => format!("homomorphism {coefficients:?}"),
            WeightKind::Constant(c) => format!("constant {c}"),
            WeightKind::Table(v) => format!("table {v:?}"),
            WeightKind::Affine { constant, coefficients } => format!("affine {constant} + {coefficients:?}"),
            WeightKind::Polynomial { coefficients } => format!("polynomial {coefficients:?}"),
            WeightKind::Pullback { weight, .. } => format!("pullback of {}", weight.describe()),
            WeightKind::PushForward { length, .. } => format!("push-forward of {}", length.describe()),
        }
    }

    fn word_length_at(&self, generators: &[GroupElement], x: &GroupElement) -> Result<u32, WeightError> {
        if let Some(v) = standard_word_length(&self.group, generators, x) {
            return Ok(v);
        }
        if self.group.is_finite() {
            let table = self
                .cache
                .finite
                .get_or_init(|| {
                    let ball = BallIndex::whole_group(self.group.clone(), generators)?;
                    let elements = self.group.elements().expect("finite");
                    Ok(elements
                        .iter()
                        .map(|e| ball.word_length_of(e).expect("whole group"))
                        .collect())
                })
                .clone()?;
            return Ok(table[self.group.element_index(x).expect("finite")]);
        }
        let mut guard = self.cache.ball.lock().expect("weight cache");
        loop {
            if let Some(ball) = guard.as_ref() {
                if let Some(l) = ball.word_length_of(x) {
                    return Ok(l);
                }
            }
            let radius = guard.as_ref().map_or(4, |b| b.radius() * 2);
            match BallIndex::with_cap(self.group.clone(), generators, radius, ball_cap()) {
                Ok(b) => *guard = Some(b),
                Err(_) => return Err(WeightError::OutOfReach(self.group.label(x))),
            }
        }
    }

    fn fiber_infimum(&self, hom: &GroupHom, length: &WeightModel, y: &GroupElement) -> Result<f64, WeightError> {
        if let Some(v) = self.cache.fibers.lock().expect("weight cache").get(y) {
            return Ok(*v);
        }
        let src = hom.source();
        let value = if let Some(elements) = src.elements() {
            let mut best: Option<f64> = None;
            for x in &elements {
                if hom.apply(x) == *y {
                    let v = length.evaluate(x)?;
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                }
            }
            best.ok_or_else(|| WeightError::NotInImage(self.group.label(y)))?
        } else if let WeightKind::WordLength { generators } = &length.kind {
            if let Some(order) = self.group.order() {
                let gens = src.canonical_generators();
                let images: Vec<_> = gens.iter().map(|g| hom.apply(g)).collect();
                if self.group.generated_subgroup(&images).len() < order && !self.group.generated_subgroup(&images).contains(y) {
                    return Err(WeightError::NotInImage(self.group.label(y)));
                }
            }
            // BFS order is word-length order, so the first fiber hit is the minimum.
            let mut radius = 4;
            loop {
                let ball = BallIndex::with_cap(src.clone(), generators, radius, ball_cap())
                    .map_err(|_| WeightError::OutOfReach(self.group.label(y)))?;
                if let Some(i) = ball.elements().iter().position(|x| hom.apply(x) == *y) {
                    break ball.word_length(i) as f64;
                }
                radius *= 2;
            }
        } else {
            return Err(WeightError::InfiniteFiberSearch(format!(
                "{} on the infinite group {}",
                length.describe(),
                src.describe()
            )));
        };
        self.cache.fibers.lock().expect("weight cache").insert(y.clone(), value);
        Ok(value)
    }
}

/// Element cap for balls built internally, overridable through `NCTRIPLES_MAX_BALL`.
pub fn ball_cap() -> usize {
    std::env::var("NCTRIPLES_MAX_BALL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ELEMENT_CAP)
}

fn linear(coefficients: &[f64], coords: &[i64]) -> f64 {
    coefficients.iter().zip(coords).map(|(c, &k)| c * k as f64).sum()
}

fn check_coefficients(group: &GroupModel, coefficients: &[f64]) -> Result<(), WeightError> {
    if coefficients.len() != group.hom_rank() {
        return Err(WeightError::KindMismatch(format!(
            "{} needs {} homomorphism coefficients, got {}",
            group.describe(),
            group.hom_rank(),
            coefficients.len()
        )));
    }
    Ok(())
}

fn single_integer_coordinate(group: &GroupModel) -> bool {
    matches!(group, GroupModel::FreeAbelian(1) | GroupModel::Free(1))
}

/// Closed forms for the canonical generating sets.
fn standard_word_length(group: &GroupModel, generators: &[GroupElement], x: &GroupElement) -> Option<u32> {
    let mut standard: Vec<GroupElement> = group.canonical_generators();
    let inverses: Vec<GroupElement> = standard.iter().map(|g| group.inverse(g)).collect();
    for g in inverses {
        if !standard.contains(&g) {
            standard.push(g);
        }
    }
    if standard.len() != generators.len() || !standard.iter().all(|g| generators.contains(g)) {
        return None;
    }
    match (group, x) {
        (GroupModel::Cyclic(n), GroupElement::Index(k)) => {
            let k = *k as u64;
            Some(k.min(n - k) as u32)
        }
        (GroupModel::FreeAbelian(_), GroupElement::Vector(v)) => Some(v.iter().map(|c| c.unsigned_abs()).sum::<u64>() as u32),
        (GroupModel::Free(_), GroupElement::Word(w)) => Some(w.len() as u32),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<GroupModel> {
        Arc::new(GroupModel::integers())
    }

    #[test]
    fn basic_evaluation() {
        let w = WeightModel::standard_length(z()).unwrap();
        assert_eq!(w.evaluate(&GroupElement::int(3)).unwrap(), 3.0);
        assert_eq!(w.evaluate(&GroupElement::int(-4)).unwrap(), 4.0);
        let h = WeightModel::hom(z(), vec![2.0]).unwrap();
        assert_eq!(h.evaluate(&GroupElement::int(-5)).unwrap(), -10.0);
        let p = WeightModel::polynomial(z(), vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.evaluate(&GroupElement::int(-3)).unwrap(), 9.0);
        let a = WeightModel::affine(z(), 5.0, vec![2.0]).unwrap();
        assert_eq!(a.evaluate(&GroupElement::int(1)).unwrap(), 7.0);
    }

    #[test]
    fn kind_mismatches() {
        assert!(matches!(WeightModel::table(z(), vec![0.0]), Err(WeightError::KindMismatch(_))));
        let c3 = Arc::new(GroupModel::Cyclic(3));
        assert_eq!(
            WeightModel::table(c3.clone(), vec![0.0, 1.0]).unwrap_err(),
            WeightError::PartialTable { expected: 3, got: 2 }
        );
        assert!(WeightModel::hom(z(), vec![]).is_err());
        assert!(WeightModel::polynomial(c3, vec![1.0]).is_err());
    }

    #[test]
    fn word_length_on_cyclic_and_free() {
        let c6 = Arc::new(GroupModel::Cyclic(6));
        let w = WeightModel::standard_length(c6.clone()).unwrap();
        let vals: Vec<f64> = (0..6).map(|k| w.evaluate(&GroupElement::Index(k)).unwrap()).collect();
        assert_eq!(vals, vec![0.0, 1.0, 2.0, 3.0, 2.0, 1.0]);
        // generators {2, 3} on ℤ/6 use the BFS table
        let w = WeightModel::word_length(c6, &[GroupElement::Index(2), GroupElement::Index(3)]).unwrap();
        let vals: Vec<f64> = (0..6).map(|k| w.evaluate(&GroupElement::Index(k)).unwrap()).collect();
        assert_eq!(vals, vec![0.0, 2.0, 1.0, 1.0, 1.0, 2.0]);
        let f2 = Arc::new(GroupModel::Free(2));
        let w = WeightModel::standard_length(f2.clone()).unwrap();
        assert_eq!(w.evaluate(&f2.parse_element("abAB").unwrap()).unwrap(), 4.0);
    }

    #[test]
    fn nonstandard_generators_on_integers() {
        let w = WeightModel::word_length(z(), &[GroupElement::int(2), GroupElement::int(3)]).unwrap();
        let expect = [0.0, 2.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(w.evaluate(&GroupElement::int(n as i64)).unwrap(), *e, "n = {n}");
        }
    }

    #[test]
    fn ball_values_match_word_length() {
        let w = WeightModel::standard_length(z()).unwrap();
        let ball = BallIndex::canonical(z(), 3).unwrap();
        assert_eq!(w.values_on_ball(&ball).unwrap(), vec![0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
    }

    #[test]
    fn pullback_and_pushforward() {
        let double = GroupHom::from_images(z(), z(), &[(GroupElement::int(1), GroupElement::int(2))]).unwrap();
        let l = WeightModel::standard_length(z()).unwrap();
        let pb = WeightModel::pullback(&double, &l).unwrap();
        assert_eq!(pb.evaluate(&GroupElement::int(-3)).unwrap(), 6.0);
        let c3 = Arc::new(GroupModel::Cyclic(3));
        let q = GroupHom::from_images(z(), c3, &[(GroupElement::int(1), GroupElement::Index(1))]).unwrap();
        let pf = WeightModel::pushforward(&q, &l).unwrap();
        let vals: Vec<f64> = (0..3).map(|k| pf.evaluate(&GroupElement::Index(k)).unwrap()).collect();
        assert_eq!(vals, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn integer_detection() {
        assert!(WeightModel::hom(z(), vec![2.0]).unwrap().is_integer_valued());
        assert!(!WeightModel::hom(z(), vec![0.5]).unwrap().is_integer_valued());
        assert!(WeightModel::constant(z(), 3.0).is_integer_valued());
    }
}
