use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use super::{GroupElement, GroupError, GroupModel};

/// Default cap on the number of enumerated ball elements.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// A word-metric ball `B_r` with a fixed breadth-first ordering.
///
/// Children are expanded in generator-list order, so the ordering (and every
/// matrix built on it) is reproducible, and `B_r` is an ordered prefix of
/// `B_{r+1}`.
#[derive(Debug, Clone)]
pub struct BallIndex {
    group: Arc<GroupModel>,
    generators: Vec<GroupElement>,
    radius: u32,
    elements: Vec<GroupElement>,
    positions: HashMap<GroupElement, usize>,
    word_length: Vec<u32>,
    /// `shell_ends[r]` is the number of elements of length `≤ r`.
    shell_ends: Vec<usize>,
    inverse_pos: Vec<usize>,
    complete: bool,
}

impl BallIndex {
    pub fn new(group: Arc<GroupModel>, generators: &[GroupElement], radius: u32) -> Result<Self, GroupError> {
        Self::with_cap(group, generators, radius, DEFAULT_ELEMENT_CAP)
    }

    /// Enumerates the ball, failing with `RadiusOverflow` instead of truncating
    /// when more than `cap` elements would be produced.
    pub fn with_cap(
        group: Arc<GroupModel>,
        generators: &[GroupElement],
        radius: u32,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in generators {
            group.check_element(g)?;
        }
        let generators = symmetrize(&group, generators);
        if generators.is_empty() && !group.order().is_some_and(|n| n == 1) {
            return Err(GroupError::EmptyGeneratorSet);
        }
        let identity = group.identity();
        let mut elements = vec![identity.clone()];
        let mut positions = HashMap::from([(identity, 0usize)]);
        let mut word_length = vec![0u32];
        let mut shell_ends = vec![1usize];
        let mut shell_start = 0;
        for r in 1..=radius {
            let shell_end = elements.len();
            for i in shell_start..shell_end {
                for g in &generators {
                    let y = group.multiply(&elements[i], g);
                    if !positions.contains_key(&y) {
                        if elements.len() >= cap {
                            return Err(GroupError::RadiusOverflow { cap });
                        }
                        positions.insert(y.clone(), elements.len());
                        elements.push(y);
                        word_length.push(r);
                    }
                }
            }
            shell_start = shell_end;
            shell_ends.push(elements.len());
            if shell_start == elements.len() {
                // no new elements: the generated subgroup is exhausted
                for _ in r + 1..=radius {
                    shell_ends.push(elements.len());
                }
                break;
            }
        }
        let inverse_pos = elements
            .iter()
            .map(|x| positions[&group.inverse(x)])
            .collect();
        let complete = group.order() == Some(elements.len());
        Ok(BallIndex {
            group,
            generators,
            radius,
            elements,
            positions,
            word_length,
            shell_ends,
            inverse_pos,
            complete,
        })
    }

    /// Ball over the group's canonical generators.
    pub fn canonical(group: Arc<GroupModel>, radius: u32) -> Result<Self, GroupError> {
        let gens = group.canonical_generators();
        Self::new(group, &gens, radius)
    }

    /// The whole of a finite group, with radius equal to its diameter.
    pub fn whole_group(group: Arc<GroupModel>, generators: &[GroupElement]) -> Result<Self, GroupError> {
        let n = group.order().ok_or(GroupError::InfiniteGroup)?;
        let ball = Self::new(group, generators, n as u32)?;
        if !ball.complete {
            return Err(GroupError::Unsupported("generators do not generate the group".into()));
        }
        let diameter = *ball.word_length.iter().max().unwrap_or(&0);
        Ok(ball.truncate(diameter))
    }

    /// Restriction to a smaller radius (an ordered prefix).
    pub fn truncate(&self, radius: u32) -> Self {
        let radius = radius.min(self.radius);
        let n = self.shell_ends[radius as usize];
        let elements: Vec<GroupElement> = self.elements[..n].to_vec();
        let positions = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        BallIndex {
            group: self.group.clone(),
            generators: self.generators.clone(),
            radius,
            inverse_pos: self.inverse_pos[..n].to_vec(),
            word_length: self.word_length[..n].to_vec(),
            shell_ends: self.shell_ends[..=radius as usize].to_vec(),
            complete: self.group.order() == Some(n),
            elements,
            positions,
        }
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the ball is the entire (finite) group; truncation effects then vanish.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn position(&self, x: &GroupElement) -> Option<usize> {
        self.positions.get(x).copied()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.positions.contains_key(x)
    }

    pub fn word_length(&self, i: usize) -> u32 {
        self.word_length[i]
    }

    pub fn word_length_of(&self, x: &GroupElement) -> Option<u32> {
        self.position(x).map(|i| self.word_length[i])
    }

    pub fn inverse_position(&self, i: usize) -> usize {
        self.inverse_pos[i]
    }

    /// Position of `elements[i] * elements[j]`, if it lies in the ball.
    pub fn product_position(&self, i: usize, j: usize) -> Option<usize> {
        self.position(&self.group.multiply(&self.elements[i], &self.elements[j]))
    }

    /// Number of elements of word length at most `r`.
    pub fn count_within(&self, r: u32) -> usize {
        self.shell_ends[r.min(self.radius) as usize]
    }

    /// Index range of the elements of word length exactly `r`.
    pub fn shell(&self, r: u32) -> Range<usize> {
        let r = r.min(self.radius) as usize;
        let start = if r == 0 { 0 } else { self.shell_ends[r - 1] };
        start..self.shell_ends[r]
    }

    /// Indices of basis vectors `δ_y` with `ℓ(y) ≤ R − spread`. For a complete
    /// ball every index is safe.
    pub fn safe_indices(&self, spread: u32) -> Vec<usize> {
        if self.complete {
            return (0..self.len()).collect();
        }
        match self.radius.checked_sub(spread) {
            Some(r) => (0..self.count_within(r)).collect(),
            None => Vec::new(),
        }
    }

    /// Largest word length of a support set, if all of it lies in the ball.
    pub fn support_radius<'a>(&self, support: impl IntoIterator<Item = &'a GroupElement>) -> Option<u32> {
        let mut r = 0;
        for x in support {
            r = r.max(self.word_length_of(x)?);
        }
        Some(r)
    }

    /// Same group and identical enumeration.
    pub fn same_basis(&self, other: &BallIndex) -> bool {
        self.group == other.group && self.elements == other.elements
    }

    pub fn label(&self, i: usize) -> String {
        self.group.label(&self.elements[i])
    }
}

/// Drops the identity and duplicates, then appends missing inverses in order.
fn symmetrize(group: &GroupModel, generators: &[GroupElement]) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = Vec::new();
    for g in generators {
        if !group.is_identity(g) && !out.contains(g) {
            out.push(g.clone());
        }
    }
    let n = out.len();
    for i in 0..n {
        let inv = group.inverse(&out[i]);
        if !out.contains(&inv) {
            out.push(inv);
        }
    }
    out
}
