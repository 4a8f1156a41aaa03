use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{check_length_axioms, WeightError, WeightKind, WeightModel};
use crate::groups::{BallIndex, FiniteTable, GroupElement, GroupHom, GroupModel};

/// A normal subgroup to divide by.
#[derive(Debug, Clone)]
pub enum Subgroup {
    /// Explicit elements of a finite group.
    Elements(Vec<GroupElement>),
    /// `dℤ` inside `ℤ`.
    Multiples(u64),
    /// Kernel of a homomorphism out of the group.
    Kernel(GroupHom),
}

#[derive(Debug, Clone)]
pub struct QuotientLength {
    pub quotient: Arc<GroupModel>,
    /// Table weight on the quotient (coset infimum).
    pub weight: WeightModel,
    /// One representative per quotient element, canonical quotient order.
    pub representatives: Vec<GroupElement>,
    pub certificate: String,
    coset_of: Projection,
}

#[derive(Debug, Clone)]
enum Projection {
    Table(HashMap<GroupElement, usize>),
    Modulo(u64),
}

impl QuotientLength {
    /// Image of `x` in the quotient.
    pub fn project(&self, x: &GroupElement) -> GroupElement {
        match &self.coset_of {
            Projection::Table(map) => GroupElement::Index(map[x]),
            Projection::Modulo(d) => {
                let n = match x {
                    GroupElement::Vector(v) => v[0],
                    GroupElement::Word(w) => w.iter().map(|&l| l.signum() as i64).sum(),
                    _ => unreachable!("integer element"),
                };
                GroupElement::Index(n.rem_euclid(*d as i64) as usize)
            }
        }
    }
}

fn is_integers(group: &GroupModel) -> bool {
    matches!(group, GroupModel::FreeAbelian(1) | GroupModel::Free(1))
}

fn integer_value(n: i64, group: &GroupModel) -> GroupElement {
    match group {
        GroupModel::Free(1) => GroupElement::Word(vec![n.signum() as i32; n.unsigned_abs() as usize]),
        _ => GroupElement::int(n),
    }
}

fn require_length(length: &WeightModel) -> Result<(), WeightError> {
    let group = length.group();
    let ball = if group.is_finite() {
        BallIndex::whole_group(group.clone(), &group.canonical_generators())?
    } else {
        BallIndex::canonical(group.clone(), 6)?
    };
    let report = check_length_axioms(length, &ball)?;
    if let Some(c) = report.checks.iter().find(|c| !c.passed()) {
        return Err(WeightError::NotALength(format!(
            "{} fails {} at {}",
            length.describe(),
            c.name,
            c.witness.as_ref().map(|w| w.labels.join(",")).unwrap_or_default()
        )));
    }
    Ok(())
}

/// Length on `G/N` given by the infimum of `ℓ` over each coset.
pub fn quotient_length(length: &WeightModel, subgroup: &Subgroup) -> Result<QuotientLength, WeightError> {
    require_length(length)?;
    let group = length.group().clone();
    match subgroup {
        Subgroup::Multiples(d) => {
            if !is_integers(&group) {
                return Err(WeightError::KindMismatch("multiples need the group ℤ".into()));
            }
            integer_quotient(length, *d)
        }
        Subgroup::Kernel(hom) if !group.is_finite() => {
            if hom.source() != &group {
                return Err(crate::groups::GroupError::GroupMismatch("kernel of a foreign homomorphism".into()).into());
            }
            if !is_integers(&group) || !hom.target().is_finite() {
                return Err(WeightError::KindMismatch(
                    "infinite quotients are only supported as ℤ/dℤ".into(),
                ));
            }
            let one = integer_value(1, &group);
            let d = hom.target().element_order(&hom.apply(&one)).expect("finite target");
            integer_quotient(length, d)
        }
        Subgroup::Kernel(hom) => {
            if hom.source() != &group {
                return Err(crate::groups::GroupError::GroupMismatch("kernel of a foreign homomorphism".into()).into());
            }
            let kernel = hom.classify().kernel.clone().expect("finite source");
            finite_quotient(length, &kernel)
        }
        Subgroup::Elements(elements) => finite_quotient(length, elements),
    }
}

fn finite_quotient(length: &WeightModel, subgroup: &[GroupElement]) -> Result<QuotientLength, WeightError> {
    let group = length.group();
    let elements = group
        .elements()
        .ok_or_else(|| WeightError::KindMismatch("element subgroups need a finite group".into()))?;
    for x in subgroup {
        group.check_element(x)?;
    }
    let n: HashSet<GroupElement> = subgroup.iter().cloned().collect();
    if !n.contains(&group.identity()) {
        return Err(WeightError::NotASubgroup("identity missing".into()));
    }
    for a in &n {
        if !n.contains(&group.inverse(a)) {
            return Err(WeightError::NotASubgroup(format!("inverse of {} missing", group.label(a))));
        }
        for b in &n {
            if !n.contains(&group.multiply(a, b)) {
                return Err(WeightError::NotASubgroup(format!(
                    "{}·{} missing",
                    group.label(a),
                    group.label(b)
                )));
            }
        }
    }
    for g in &elements {
        let gi = group.inverse(g);
        for h in subgroup {
            if !n.contains(&group.multiply(&group.multiply(g, h), &gi)) {
                return Err(WeightError::NotNormal {
                    element: group.label(h),
                    conjugator: group.label(g),
                });
            }
        }
    }
    let e = group.identity();
    let mut order: Vec<GroupElement> = vec![e.clone()];
    order.extend(elements.iter().filter(|x| **x != e).cloned());
    let mut coset_of: HashMap<GroupElement, usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for x in &order {
        if coset_of.contains_key(x) {
            continue;
        }
        let id = representatives.len();
        let mut best = f64::INFINITY;
        for h in subgroup {
            let y = group.multiply(x, h);
            best = best.min(length.evaluate(&y)?);
            coset_of.insert(y, id);
        }
        representatives.push(x.clone());
        values.push(best);
    }
    let m = representatives.len();
    let mul: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| coset_of[&group.multiply(&representatives[i], &representatives[j])])
                .collect()
        })
        .collect();
    let labels: Vec<String> = representatives.iter().map(|r| group.label(r)).collect();
    let table = FiniteTable::new(labels, mul, None, Some(0))?;
    let quotient = Arc::new(GroupModel::Finite(table));
    let weight = WeightModel::table(quotient.clone(), values)?;
    Ok(QuotientLength {
        quotient,
        weight,
        representatives,
        certificate: "exhaustive minimum over each coset".into(),
        coset_of: Projection::Table(coset_of),
    })
}

/// `ℤ/dℤ` with a word length on ℤ. A generating set with largest step `s`
/// gives `ℓ(n) ≥ |n|/s`, so a window of radius `s·M` (with `M` the largest
/// class minimum found in `[−d, d]`) contains every minimizer.
fn integer_quotient(length: &WeightModel, d: u64) -> Result<QuotientLength, WeightError> {
    let group = length.group().clone();
    if d == 0 {
        return Err(WeightError::KindMismatch("ℤ/0ℤ is infinite".into()));
    }
    let WeightKind::WordLength { generators } = length.kind() else {
        return Err(WeightError::InfiniteFiberSearch(format!(
            "no lower bound for {} outside one period",
            length.describe()
        )));
    };
    let step = generators
        .iter()
        .map(|g| group.hom_coordinates(g)[0].unsigned_abs())
        .max()
        .unwrap_or(1) as i64;
    let d_i = d as i64;
    let class_minima = |window: i64| -> Result<Vec<f64>, WeightError> {
        let mut best = vec![f64::INFINITY; d as usize];
        for n in -window..=window {
            let v = length.evaluate(&integer_value(n, &group))?;
            let r = n.rem_euclid(d_i) as usize;
            best[r] = best[r].min(v);
        }
        Ok(best)
    };
    let first = class_minima(d_i)?;
    let bound = first.iter().cloned().fold(0.0, f64::max) as i64;
    let window = (step * bound).max(d_i);
    let values = class_minima(window)?;
    let quotient = Arc::new(GroupModel::Cyclic(d));
    let weight = WeightModel::table(quotient.clone(), values)?;
    Ok(QuotientLength {
        quotient,
        weight,
        representatives: (0..d_i).map(|r| integer_value(r, &group)).collect(),
        certificate: format!("window |n| ≤ {window}: ℓ(n) ≥ |n|/{step} exceeds every class minimum outside it"),
        coset_of: Projection::Modulo(d),
    })
}

#[derive(Debug, Clone)]
pub struct PushForward {
    pub weight: WeightModel,
    /// `(φ(r), push-forward value, quotient value)` per coset representative.
    pub comparison: Vec<(GroupElement, f64, f64)>,
    /// `None` when no quotient route is available.
    pub agrees: Option<bool>,
}

/// Fiber infimum of a length along `φ`, compared value-for-value with the
/// quotient length through `G/ker φ` when that quotient is computable.
pub fn pushforward_length(hom: &GroupHom, length: &WeightModel) -> Result<PushForward, WeightError> {
    require_length(length)?;
    let weight = WeightModel::pushforward(hom, length)?;
    weight.evaluate(&hom.target().identity())?;
    let source = hom.source();
    let quotient = if source.is_finite() || (is_integers(source) && hom.target().is_finite()) {
        Some(quotient_length(length, &Subgroup::Kernel(hom.clone()))?)
    } else {
        None
    };
    let mut comparison = Vec::new();
    if let Some(q) = &quotient {
        for r in &q.representatives {
            let y = hom.apply(r);
            let pf = weight.evaluate(&y)?;
            let qv = q.weight.evaluate(&q.project(r))?;
            comparison.push((y, pf, qv));
        }
    }
    let agrees = quotient.map(|_| comparison.iter().all(|(_, a, b)| a == b));
    Ok(PushForward {
        weight,
        comparison,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<GroupModel> {
        Arc::new(GroupModel::integers())
    }

    fn values(w: &WeightModel) -> Vec<f64> {
        w.group().elements().unwrap().iter().map(|x| w.evaluate(x).unwrap()).collect()
    }

    #[test]
    fn integers_mod_three() {
        let l = WeightModel::standard_length(z()).unwrap();
        let q = quotient_length(&l, &Subgroup::Multiples(3)).unwrap();
        assert_eq!(values(&q.weight), vec![0.0, 1.0, 1.0]);
        assert_eq!(q.project(&GroupElement::int(-1)), GroupElement::Index(2));
    }

    #[test]
    fn quotient_by_whole_group() {
        let c4 = Arc::new(GroupModel::Cyclic(4));
        let l = WeightModel::standard_length(c4.clone()).unwrap();
        let q = quotient_length(&l, &Subgroup::Elements(c4.elements().unwrap())).unwrap();
        assert_eq!(q.quotient.order(), Some(1));
        assert_eq!(values(&q.weight), vec![0.0]);
        let q = quotient_length(&WeightModel::standard_length(z()).unwrap(), &Subgroup::Multiples(1)).unwrap();
        assert_eq!(values(&q.weight), vec![0.0]);
    }

    #[test]
    fn klein_quotient() {
        let k = Arc::new(GroupModel::product(GroupModel::Cyclic(2), GroupModel::Cyclic(2)));
        let els = k.elements().unwrap();
        let e = GroupElement::pair(GroupElement::Index(0), GroupElement::Index(0));
        let a = GroupElement::pair(GroupElement::Index(1), GroupElement::Index(0));
        let b = GroupElement::pair(GroupElement::Index(0), GroupElement::Index(1));
        let vals: Vec<f64> = els
            .iter()
            .map(|x| if *x == e { 0.0 } else if *x == a || *x == b { 1.0 } else { 2.0 })
            .collect();
        let l = WeightModel::table(k, vals).unwrap();
        let q = quotient_length(&l, &Subgroup::Elements(vec![e, b])).unwrap();
        assert_eq!(values(&q.weight), vec![0.0, 1.0]);
    }

    #[test]
    fn rejects_non_normal_and_non_lengths() {
        let s3 = Arc::new(GroupModel::symmetric(3).unwrap());
        let l = WeightModel::standard_length(s3.clone()).unwrap();
        let t = s3.parse_element("213").unwrap();
        let err = quotient_length(&l, &Subgroup::Elements(vec![s3.identity(), t])).unwrap_err();
        assert!(matches!(err, WeightError::NotNormal { .. }));
        let h = WeightModel::hom(z(), vec![1.0]).unwrap();
        assert!(matches!(quotient_length(&h, &Subgroup::Multiples(3)), Err(WeightError::NotALength(_))));
    }

    #[test]
    fn nonstandard_generators_window() {
        let l = WeightModel::word_length(z(), &[GroupElement::int(5), GroupElement::int(7)]).unwrap();
        let q = quotient_length(&l, &Subgroup::Multiples(4)).unwrap();
        // oracle: brute force over a wide window
        let mut best = [f64::INFINITY; 4];
        for n in -200i64..=200 {
            let r = n.rem_euclid(4) as usize;
            best[r] = best[r].min(l.evaluate(&GroupElement::int(n)).unwrap());
        }
        assert_eq!(values(&q.weight), best.to_vec());
    }

    #[test]
    fn pushforward_matches_quotient() {
        let l = WeightModel::standard_length(z()).unwrap();
        for d in 2..=8u64 {
            let cd = Arc::new(GroupModel::Cyclic(d));
            let phi = GroupHom::from_images(z(), cd, &[(GroupElement::int(1), GroupElement::Index(1))]).unwrap();
            let pf = pushforward_length(&phi, &l).unwrap();
            assert_eq!(pf.agrees, Some(true), "d = {d}");
            assert_eq!(pf.comparison.len(), d as usize);
        }
    }

    #[test]
    fn pushforward_along_isomorphism_and_abelianization() {
        let c5 = Arc::new(GroupModel::Cyclic(5));
        let l = WeightModel::standard_length(c5.clone()).unwrap();
        let iso = GroupHom::from_images(c5.clone(), c5.clone(), &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let pf = pushforward_length(&iso, &l).unwrap();
        assert_eq!(pf.agrees, Some(true));
        for x in c5.elements().unwrap() {
            assert_eq!(pf.weight.evaluate(&iso.apply(&x)).unwrap(), l.evaluate(&x).unwrap());
        }
        let f2 = Arc::new(GroupModel::Free(2));
        let z2 = Arc::new(GroupModel::FreeAbelian(2));
        let ab = GroupHom::from_images(
            f2.clone(),
            z2,
            &[
                (GroupElement::Word(vec![1]), GroupElement::Vector(vec![1, 0])),
                (GroupElement::Word(vec![2]), GroupElement::Vector(vec![0, 1])),
            ],
        )
        .unwrap();
        let pf = pushforward_length(&ab, &WeightModel::standard_length(f2).unwrap()).unwrap();
        assert_eq!(pf.agrees, None);
        assert_eq!(pf.weight.evaluate(&GroupElement::Vector(vec![1, 0])).unwrap(), 1.0);
        assert_eq!(pf.weight.evaluate(&GroupElement::Vector(vec![2, -1])).unwrap(), 3.0);
    }

    #[test]
    fn finite_pushforward_non_surjective() {
        let c2 = Arc::new(GroupModel::Cyclic(2));
        let c4 = Arc::new(GroupModel::Cyclic(4));
        let inc = GroupHom::from_images(c2.clone(), c4, &[(GroupElement::Index(1), GroupElement::Index(2))]).unwrap();
        let pf = pushforward_length(&inc, &WeightModel::standard_length(c2).unwrap()).unwrap();
        assert_eq!(pf.agrees, Some(true));
        assert!(matches!(pf.weight.evaluate(&GroupElement::Index(1)), Err(WeightError::NotInImage(_))));
    }
}
