//! The group algebra `ℂ[G]` and its (twisted) left-regular representation
//! compressed to a word-metric ball.

mod cocycle;
mod operator;
mod represent;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::groups::{BallIndex, GroupElement, GroupError, GroupHom, GroupModel};

pub use cocycle::Cocycle;
pub use operator::{operator_norm, operator_norm_bounds, NormBounds, Operator, MAX_DIMENSION};
pub use represent::{represent, represent_twisted, represent_twisted_element};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("dimension {0} exceeds the dense limit")]
    DimensionTooLarge(usize),
    #[error("norm of an antilinear operator requested")]
    AntilinearUnsupported,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finitely supported function `G → ℂ`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    group: Arc<GroupModel>,
    coefficients: BTreeMap<GroupElement, Complex64>,
}

impl AlgebraElement {
    pub fn zero(group: Arc<GroupModel>) -> Self {
        AlgebraElement {
            group,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn delta(group: Arc<GroupModel>, x: GroupElement) -> Self {
        Self::from_terms(group, [(x, Complex64::new(1.0, 0.0))])
    }

    pub fn one(group: Arc<GroupModel>) -> Self {
        let e = group.identity();
        Self::delta(group, e)
    }

    /// Sums repeated elements; drops zero coefficients.
    pub fn from_terms(group: Arc<GroupModel>, terms: impl IntoIterator<Item = (GroupElement, Complex64)>) -> Self {
        let mut coefficients: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
        for (x, c) in terms {
            debug_assert!(group.contains(&x), "{x:?} not in {group:?}");
            *coefficients.entry(x).or_default() += c;
        }
        coefficients.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        AlgebraElement { group, coefficients }
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn coefficient(&self, x: &GroupElement) -> Complex64 {
        self.coefficients.get(x).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.coefficients.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.coefficients.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn same_group(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.group != other.group {
            return Err(AlgebraError::GroupMismatch(format!(
                "{} vs {}",
                self.group.describe(),
                other.group.describe()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        Ok(Self::from_terms(
            self.group.clone(),
            self.terms().chain(other.terms()).map(|(x, c)| (x.clone(), *c)),
        ))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.group.clone(), self.terms().map(|(x, c)| (x.clone(), c * s)))
    }

    /// `(f*g)(z) = Σ_{xy=z} f(x) g(y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (x, a) in self.terms() {
            for (y, b) in other.terms() {
                terms.push((self.group.multiply(x, y), a * b));
            }
        }
        Ok(Self::from_terms(self.group.clone(), terms))
    }

    /// `f*(x) = conj f(x⁻¹)`.
    pub fn involution(&self) -> Self {
        Self::from_terms(
            self.group.clone(),
            self.terms().map(|(x, c)| (self.group.inverse(x), c.conj())),
        )
    }

    /// `Σ conj f(x) g(x)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64, AlgebraError> {
        self.same_group(other)?;
        Ok(self.terms().map(|(x, a)| a.conj() * other.coefficient(x)).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ |f(x)|`.
    pub fn l1_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm()).sum()
    }

    /// Largest word length in the support, if the support lies in the ball.
    pub fn support_radius(&self, ball: &BallIndex) -> Option<u32> {
        ball.support_radius(self.support())
    }

    /// Largest coefficient distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.terms()
            .chain(other.terms())
            .map(|(x, _)| (self.coefficient(x) - other.coefficient(x)).norm())
            .fold(0.0, f64::max)
    }
}

/// `A_φ(f) = Σ f(x) δ_{φ(x)}`.
pub fn linearize_hom(hom: &GroupHom, f: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if f.group() != hom.source() {
        return Err(AlgebraError::GroupMismatch("element does not live on the source".into()));
    }
    Ok(AlgebraElement::from_terms(
        hom.target().clone(),
        f.terms().map(|(x, c)| (hom.apply(x), *c)),
    ))
}

/// Gaussian integer in `[−3, 3] + i[−3, 3]`, never zero.
pub fn random_gaussian_integer<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let c = Complex64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
        if c != Complex64::new(0.0, 0.0) {
            return c;
        }
    }
}

/// Random element with up to `max_terms` Gaussian-integer terms supported on
/// ball elements of word length at most `radius`.
pub fn random_element<R: Rng>(ball: &BallIndex, radius: u32, max_terms: usize, rng: &mut R) -> AlgebraElement {
    let pool = ball.count_within(radius.min(ball.radius())).max(1);
    let k = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..k)
        .map(|_| (ball.element(rng.gen_range(0..pool)).clone(), random_gaussian_integer(rng)))
        .collect();
    AlgebraElement::from_terms(ball.group().clone(), terms)
}

/// Random element over every element of a finite group.
pub fn random_full_element<R: Rng>(group: &Arc<GroupModel>, rng: &mut R) -> AlgebraElement {
    let elements = group.elements().expect("finite group");
    AlgebraElement::from_terms(
        group.clone(),
        elements.into_iter().map(|x| {
            let c = Complex64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
            (x, c)
        }),
    )
}
