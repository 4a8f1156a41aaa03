use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use super::{BallIndex, GroupElement, GroupError, GroupModel};
use crate::exact;

/// Radius of the source ball used when mono/epi cannot be decided exactly.
const HEURISTIC_RADIUS: u32 = 4;

#[derive(Debug, Clone)]
enum HomMap {
    Identity,
    /// Images indexed by the canonical index of a finite source.
    Table(Vec<GroupElement>),
    /// Images of the standard generators of a free or free abelian source.
    Generators(Vec<GroupElement>),
}

/// Result of [`GroupHom::classify`]. `exact == false` marks a ball-limited
/// heuristic verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct HomClassification {
    pub mono: bool,
    pub epi: bool,
    /// Kernel elements when the kernel is finite and known.
    pub kernel: Option<Vec<GroupElement>>,
    pub exact: bool,
}

/// A validated group homomorphism.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<GroupModel>,
    target: Arc<GroupModel>,
    map: HomMap,
    classification: OnceLock<HomClassification>,
}

impl GroupHom {
    pub fn identity(group: Arc<GroupModel>) -> Self {
        GroupHom {
            source: group.clone(),
            target: group,
            map: HomMap::Identity,
            classification: OnceLock::new(),
        }
    }

    /// Defines a homomorphism by the images of finitely many source elements.
    ///
    /// Free and free abelian sources need exactly the standard generators and
    /// extend freely (images must commute for free abelian sources). Finite
    /// sources are extended along the Cayley graph of the given elements and
    /// then checked exhaustively.
    pub fn from_images(
        source: Arc<GroupModel>,
        target: Arc<GroupModel>,
        images: &[(GroupElement, GroupElement)],
    ) -> Result<Self, GroupError> {
        for (x, y) in images {
            source.check_element(x)?;
            target.check_element(y)?;
        }
        let map = match source.as_ref() {
            GroupModel::FreeAbelian(_) | GroupModel::Free(_) => {
                let gens = source.canonical_generators();
                let mut out = Vec::with_capacity(gens.len());
                for g in &gens {
                    let img = images
                        .iter()
                        .find(|(x, _)| x == g)
                        .map(|(_, y)| y.clone())
                        .ok_or_else(|| GroupError::Unsupported(format!("missing image of generator {}", source.label(g))))?;
                    out.push(img);
                }
                if images.iter().any(|(x, _)| !gens.contains(x)) {
                    return Err(GroupError::Unsupported(
                        "free sources are defined by the images of their standard generators only".into(),
                    ));
                }
                if matches!(source.as_ref(), GroupModel::FreeAbelian(_)) {
                    for i in 0..out.len() {
                        for j in i + 1..out.len() {
                            if !target.commute(&out[i], &out[j]) {
                                return Err(GroupError::NotAHomomorphism {
                                    x: source.label(&gens[i]),
                                    y: source.label(&gens[j]),
                                });
                            }
                        }
                    }
                }
                HomMap::Generators(out)
            }
            _ if source.is_finite() => HomMap::Table(extend_finite(&source, &target, images)?),
            _ => {
                return Err(GroupError::Unsupported(format!(
                    "homomorphisms out of {}",
                    source.describe()
                )))
            }
        };
        let hom = GroupHom {
            source,
            target,
            map,
            classification: OnceLock::new(),
        };
        if let HomMap::Table(_) = hom.map {
            hom.check_exhaustive()?;
        }
        Ok(hom)
    }

    /// Homomorphism out of a finite group given by a function on all elements.
    pub fn from_fn(
        source: Arc<GroupModel>,
        target: Arc<GroupModel>,
        f: impl Fn(&GroupElement) -> GroupElement,
    ) -> Result<Self, GroupError> {
        let elements = source.elements().ok_or(GroupError::InfiniteGroup)?;
        let table: Vec<GroupElement> = elements.iter().map(&f).collect();
        for y in &table {
            target.check_element(y)?;
        }
        let hom = GroupHom {
            source,
            target,
            map: HomMap::Table(table),
            classification: OnceLock::new(),
        };
        hom.check_exhaustive()?;
        Ok(hom)
    }

    /// Inner automorphism `h ↦ g h g⁻¹`.
    pub fn conjugation(group: Arc<GroupModel>, g: &GroupElement) -> Result<Self, GroupError> {
        group.check_element(g)?;
        let g_inv = group.inverse(g);
        let conj = |h: &GroupElement| group.multiply(&group.multiply(g, h), &g_inv);
        if group.is_finite() {
            return Self::from_fn(group.clone(), group.clone(), conj);
        }
        match group.as_ref() {
            GroupModel::FreeAbelian(_) => Ok(Self::identity(group.clone())),
            GroupModel::Free(_) => {
                let images: Vec<_> = group
                    .canonical_generators()
                    .into_iter()
                    .map(|x| {
                        let y = conj(&x);
                        (x, y)
                    })
                    .collect();
                Self::from_images(group.clone(), group.clone(), &images)
            }
            _ => Err(GroupError::Unsupported("conjugation on this group kind".into())),
        }
    }

    fn check_exhaustive(&self) -> Result<(), GroupError> {
        let elements = self.source.elements().ok_or(GroupError::InfiniteGroup)?;
        let e = self.source.identity();
        if !self.target.is_identity(&self.apply(&e)) {
            return Err(GroupError::NotAHomomorphism {
                x: self.source.label(&e),
                y: self.source.label(&e),
            });
        }
        for x in &elements {
            let fx = self.apply(x);
            for y in &elements {
                let lhs = self.apply(&self.source.multiply(x, y));
                let rhs = self.target.multiply(&fx, &self.apply(y));
                if lhs != rhs {
                    return Err(GroupError::NotAHomomorphism {
                        x: self.source.label(x),
                        y: self.source.label(y),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<GroupModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupModel> {
        &self.target
    }

    pub fn is_identity_map(&self) -> bool {
        matches!(self.map, HomMap::Identity)
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        match &self.map {
            HomMap::Identity => x.clone(),
            HomMap::Table(t) => {
                let i = self.source.element_index(x).expect("element of a finite source");
                t[i].clone()
            }
            HomMap::Generators(imgs) => match x {
                GroupElement::Vector(v) => v.iter().zip(imgs).fold(self.target.identity(), |acc, (&k, g)| {
                    self.target.multiply(&acc, &self.target.power(g, k))
                }),
                GroupElement::Word(w) => w.iter().fold(self.target.identity(), |acc, &l| {
                    let g = &imgs[l.unsigned_abs() as usize - 1];
                    let g = if l > 0 { g.clone() } else { self.target.inverse(g) };
                    self.target.multiply(&acc, &g)
                }),
                _ => panic!("apply: {x:?} is not an element of {:?}", self.source),
            },
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, GroupError> {
        if first.target != self.source {
            return Err(GroupError::GroupMismatch("homomorphisms are not composable".into()));
        }
        let map = match (&first.map, &self.map) {
            (HomMap::Identity, m) => m.clone(),
            (m, HomMap::Identity) => m.clone(),
            (HomMap::Table(t), _) => HomMap::Table(t.iter().map(|y| self.apply(y)).collect()),
            (HomMap::Generators(g), _) => HomMap::Generators(g.iter().map(|y| self.apply(y)).collect()),
        };
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map,
            classification: OnceLock::new(),
        })
    }

    /// Pointwise equality on a finite source, or on generator images otherwise.
    pub fn same_map(&self, other: &GroupHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let probes = self
            .source
            .elements()
            .unwrap_or_else(|| self.source.canonical_generators());
        probes.iter().all(|x| self.apply(x) == other.apply(x))
    }

    /// Full element map of a finite source, in canonical source order.
    pub fn table(&self) -> Option<Vec<GroupElement>> {
        Some(self.source.elements()?.iter().map(|x| self.apply(x)).collect())
    }

    pub fn classify(&self) -> &HomClassification {
        self.classification.get_or_init(|| self.compute_classification())
    }

    fn compute_classification(&self) -> HomClassification {
        if let HomMap::Identity = self.map {
            return HomClassification {
                mono: true,
                epi: true,
                kernel: Some(vec![self.source.identity()]),
                exact: true,
            };
        }
        if let Some(elements) = self.source.elements() {
            let kernel: Vec<GroupElement> = elements
                .iter()
                .filter(|x| self.target.is_identity(&self.apply(x)))
                .cloned()
                .collect();
            let image: HashSet<GroupElement> = elements.iter().map(|x| self.apply(x)).collect();
            return HomClassification {
                mono: kernel.len() == 1,
                epi: self.target.order() == Some(image.len()),
                kernel: Some(kernel),
                exact: true,
            };
        }
        let gens = self.source.canonical_generators();
        let images: Vec<GroupElement> = gens.iter().map(|g| self.apply(g)).collect();
        let source_rank = gens.len();
        if self.target.is_finite() {
            let span = self.target.generated_subgroup(&images);
            return HomClassification {
                mono: false,
                epi: Some(span.len()) == self.target.order(),
                kernel: None,
                exact: true,
            };
        }
        if let GroupModel::FreeAbelian(b) = self.target.as_ref() {
            let columns: Vec<Vec<i64>> = images
                .iter()
                .map(|y| match y {
                    GroupElement::Vector(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect();
            let rows: Vec<Vec<i64>> = (0..*b).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
            let rank = exact::rank(&rows);
            let free_source = matches!(self.source.as_ref(), GroupModel::Free(_));
            let mono = if free_source && source_rank >= 2 {
                false
            } else {
                rank == source_rank
            };
            return HomClassification {
                mono,
                epi: exact::columns_span_lattice(&columns, *b),
                kernel: if mono { Some(vec![self.source.identity()]) } else { None },
                exact: true,
            };
        }
        self.classify_on_ball(HEURISTIC_RADIUS)
    }

    /// Ball-limited classification: a kernel element in the source ball proves
    /// non-injectivity, all target generators hit proves surjectivity; the
    /// remaining verdicts are heuristic.
    pub fn classify_on_ball(&self, radius: u32) -> HomClassification {
        let Ok(ball) = BallIndex::canonical(self.source.clone(), radius) else {
            return HomClassification {
                mono: false,
                epi: false,
                kernel: None,
                exact: false,
            };
        };
        let kernel: Vec<GroupElement> = ball
            .elements()
            .iter()
            .filter(|x| self.target.is_identity(&self.apply(x)))
            .cloned()
            .collect();
        let image: HashSet<GroupElement> = ball.elements().iter().map(|x| self.apply(x)).collect();
        let epi = self.target.canonical_generators().iter().all(|g| image.contains(g));
        let mono = kernel.len() == 1;
        HomClassification {
            mono,
            epi,
            kernel: if mono { None } else { Some(kernel) },
            exact: !mono && epi,
        }
    }

    /// All splittings `ψ: target → source` with `φ∘ψ = id`, found by exhaustive
    /// search over generator images restricted to the fibers of the generators.
    pub fn enumerate_splittings(&self) -> Result<Vec<GroupHom>, GroupError> {
        if !self.source.is_finite() || !self.target.is_finite() {
            return Err(GroupError::InfiniteGroup);
        }
        if !self.classify().epi {
            return Err(GroupError::NotEpimorphism);
        }
        let gens = self.target.canonical_generators();
        let source_elements = self.source.elements().expect("finite");
        let fibers: Vec<Vec<GroupElement>> = gens
            .iter()
            .map(|h| source_elements.iter().filter(|x| self.apply(x) == *h).cloned().collect())
            .collect();
        let mut found: Vec<GroupHom> = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if fibers.iter().all(|f| !f.is_empty()) {
                let images: Vec<(GroupElement, GroupElement)> = gens
                    .iter()
                    .zip(&choice)
                    .zip(&fibers)
                    .map(|((h, &c), f)| (h.clone(), f[c].clone()))
                    .collect();
                if let Ok(psi) = GroupHom::from_images(self.target.clone(), self.source.clone(), &images) {
                    let composite = self.compose(&psi)?;
                    if composite.same_map(&GroupHom::identity(self.target.clone()))
                        && !found.iter().any(|q| q.same_map(&psi))
                    {
                        found.push(psi);
                    }
                }
            } else {
                break;
            }
            // odometer over fiber choices
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(found);
                }
                choice[k] += 1;
                if choice[k] < fibers[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
        Ok(found)
    }
}

/// Every homomorphism between two finite groups, via exhaustive generator images.
pub fn enumerate_homomorphisms(source: Arc<GroupModel>, target: Arc<GroupModel>) -> Result<Vec<GroupHom>, GroupError> {
    let gens = source.canonical_generators();
    let targets = target.elements().ok_or(GroupError::InfiniteGroup)?;
    if !source.is_finite() {
        return Err(GroupError::InfiniteGroup);
    }
    let mut out: Vec<GroupHom> = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<_> = gens.iter().zip(&choice).map(|(g, &c)| (g.clone(), targets[c].clone())).collect();
        if let Ok(h) = GroupHom::from_images(source.clone(), target.clone(), &images) {
            if !out.iter().any(|q| q.same_map(&h)) {
                out.push(h);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < targets.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_finite(
    source: &GroupModel,
    target: &GroupModel,
    images: &[(GroupElement, GroupElement)],
) -> Result<Vec<GroupElement>, GroupError> {
    for (g, h) in images {
        let order = source.element_order(g).expect("finite source");
        if !target.is_identity(&target.power(h, order as i64)) {
            return Err(GroupError::OrderViolation {
                generator: source.label(g),
                order,
            });
        }
    }
    let mut steps: Vec<(GroupElement, GroupElement)> = Vec::new();
    for (g, h) in images {
        steps.push((g.clone(), h.clone()));
        steps.push((source.inverse(g), target.inverse(h)));
    }
    let mut known: HashMap<GroupElement, GroupElement> = HashMap::from([(source.identity(), target.identity())]);
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = known[&x].clone();
        for (g, h) in &steps {
            let y = source.multiply(&x, g);
            let fy = target.multiply(&fx, h);
            match known.get(&y) {
                Some(prev) if *prev != fy => {
                    return Err(GroupError::NotAHomomorphism {
                        x: source.label(&x),
                        y: source.label(g),
                    })
                }
                Some(_) => {}
                None => {
                    known.insert(y.clone(), fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let elements = source.elements().expect("finite source");
    elements
        .iter()
        .map(|x| {
            known.get(x).cloned().ok_or_else(|| {
                GroupError::Unsupported("given elements do not generate the source group".into())
            })
        })
        .collect()
}
