use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AlgebraError;
use crate::groups::{BallIndex, GroupElement, GroupModel};
use crate::report::{Check, Status, Witness};

const COCYCLE_TOL: f64 = 1e-12;

/// A normalized unimodular 2-cocycle.
#[derive(Debug, Clone, PartialEq)]
pub enum Cocycle {
    /// `u(m, n) = exp(iπθ(m₁n₂ − m₂n₁))` on `ℤ²`.
    Bicharacter { theta: f64 },
    /// Explicit phases `u(x, y)` in canonical element order of a finite group.
    Table {
        group: Arc<GroupModel>,
        phases: Vec<Vec<Complex64>>,
    },
}

/// `exp(iπt)`, exact when `2t` is an integer.
fn half_turns(t: f64) -> Complex64 {
    let q = 2.0 * t;
    if q.fract() == 0.0 {
        match (q as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, std::f64::consts::PI * t)
    }
}

impl Cocycle {
    pub fn bicharacter(theta: f64) -> Self {
        Cocycle::Bicharacter { theta }
    }

    /// Validates shape, unimodularity, normalization and the cocycle identity
    /// (exhaustively).
    pub fn table(group: Arc<GroupModel>, phases: Vec<Vec<Complex64>>) -> Result<Self, AlgebraError> {
        let n = group
            .order()
            .ok_or_else(|| AlgebraError::InvalidCocycle("phase tables need a finite group".into()))?;
        if phases.len() != n || phases.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::InvalidCocycle(format!("phase table must be {n}×{n}")));
        }
        let c = Cocycle::Table { group, phases };
        let check = c.verify_exhaustive()?;
        if !check.passed() {
            return Err(AlgebraError::InvalidCocycle(check.detail));
        }
        Ok(c)
    }

    pub fn supports(&self, group: &GroupModel) -> bool {
        match self {
            Cocycle::Bicharacter { .. } => matches!(group, GroupModel::FreeAbelian(2)),
            Cocycle::Table { group: g, .. } => g.as_ref() == group,
        }
    }

    pub fn value(&self, x: &GroupElement, y: &GroupElement) -> Complex64 {
        match self {
            Cocycle::Bicharacter { theta } => {
                let (GroupElement::Vector(m), GroupElement::Vector(n)) = (x, y) else {
                    panic!("bicharacter arguments must be elements of ℤ²");
                };
                let k = m[0] * n[1] - m[1] * n[0];
                half_turns(theta * k as f64)
            }
            Cocycle::Table { group, phases } => {
                let i = group.element_index(x).expect("element of the table group");
                let j = group.element_index(y).expect("element of the table group");
                phases[i][j]
            }
        }
    }

    fn group_for_labels(&self) -> GroupModel {
        match self {
            Cocycle::Bicharacter { .. } => GroupModel::FreeAbelian(2),
            Cocycle::Table { group, .. } => group.as_ref().clone(),
        }
    }

    fn triple_residual(&self, group: &GroupModel, x: &GroupElement, y: &GroupElement, z: &GroupElement) -> f64 {
        let lhs = self.value(x, y) * self.value(&group.multiply(x, y), z);
        let rhs = self.value(y, z) * self.value(x, &group.multiply(y, z));
        (lhs - rhs).norm()
    }

    fn check_over(
        &self,
        group: &GroupModel,
        elements: &[GroupElement],
        triples: impl Iterator<Item = (usize, usize, usize)>,
    ) -> Check {
        let e = group.identity();
        let mut worst: f64 = 0.0;
        for x in elements {
            let r = (self.value(x, &e) - 1.0).norm().max((self.value(&e, x) - 1.0).norm());
            if r > COCYCLE_TOL {
                return Check::new("cocycle", Status::Fail)
                    .with_witness(Some(Witness::new(group, vec![x.clone()], vec![r])))
                    .with_detail("normalization u(x,e) = u(e,x) = 1 fails");
            }
            for y in elements {
                let m = self.value(x, y).norm();
                if (m - 1.0).abs() > COCYCLE_TOL {
                    return Check::new("cocycle", Status::Fail)
                        .with_witness(Some(Witness::new(group, vec![x.clone(), y.clone()], vec![m])))
                        .with_detail("phase is not unimodular");
                }
            }
        }
        let mut count = 0usize;
        for (i, j, k) in triples {
            count += 1;
            let (x, y, z) = (&elements[i], &elements[j], &elements[k]);
            let r = self.triple_residual(group, x, y, z);
            worst = worst.max(r);
            if r > COCYCLE_TOL {
                return Check::new("cocycle", Status::Fail)
                    .with_witness(Some(Witness::new(group, vec![x.clone(), y.clone(), z.clone()], vec![r])))
                    .with_detail("u(x,y)u(xy,z) = u(y,z)u(x,yz) fails");
            }
        }
        Check::pass("cocycle")
            .with_value("max_residual", worst)
            .with_value("triples", count as f64)
    }

    fn verify_exhaustive(&self) -> Result<Check, AlgebraError> {
        let group = self.group_for_labels();
        let elements = group
            .elements()
            .ok_or_else(|| AlgebraError::InvalidCocycle("exhaustive check needs a finite group".into()))?;
        let n = elements.len();
        let triples = (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))));
        Ok(self.check_over(&group, &elements, triples))
    }

    /// Normalization and unimodularity on the ball plus the cocycle identity:
    /// exhaustive for table cocycles, `samples` seeded triples from the ball
    /// otherwise.
    pub fn verify(&self, ball: &BallIndex, samples: usize, seed: u64) -> Result<Check, AlgebraError> {
        if !self.supports(ball.group()) {
            return Err(AlgebraError::GroupMismatch("cocycle and ball live on different groups".into()));
        }
        if let Cocycle::Table { .. } = self {
            return self.verify_exhaustive();
        }
        let elements = ball.elements();
        let n = elements.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples: Vec<_> = (0..samples)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        Ok(self.check_over(ball.group(), elements, triples.into_iter()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64) -> GroupElement {
        GroupElement::Vector(vec![a, b])
    }

    #[test]
    fn quarter_turns_are_exact() {
        let u = Cocycle::bicharacter(0.5);
        assert_eq!(u.value(&v(1, 0), &v(0, 1)), Complex64::new(0.0, 1.0));
        assert_eq!(u.value(&v(0, 1), &v(1, 0)), Complex64::new(0.0, -1.0));
        assert_eq!(u.value(&v(2, 0), &v(0, 1)), Complex64::new(-1.0, 0.0));
        assert_eq!(u.value(&v(3, 1), &v(0, 0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sampled_identity_on_ball() {
        let z2 = Arc::new(GroupModel::FreeAbelian(2));
        let ball = BallIndex::canonical(z2, 6).unwrap();
        for theta in [0.0, 0.5, 0.3, 1.0 / 7.0] {
            let c = Cocycle::bicharacter(theta).verify(&ball, 500, 3).unwrap();
            assert!(c.passed(), "θ = {theta}: {c:?}");
        }
    }

    #[test]
    fn table_cocycles() {
        // ℤ/2 × ℤ/2 with the sign cocycle u((a,b),(c,d)) = (−1)^{bc}
        let k = Arc::new(GroupModel::product(GroupModel::Cyclic(2), GroupModel::Cyclic(2)));
        let els = k.elements().unwrap();
        let parts = |x: &GroupElement| match x {
            GroupElement::Pair(a, b) => match (a.as_ref(), b.as_ref()) {
                (GroupElement::Index(a), GroupElement::Index(b)) => (*a, *b),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        let phases: Vec<Vec<Complex64>> = els
            .iter()
            .map(|x| {
                els.iter()
                    .map(|y| if parts(x).1 * parts(y).0 == 1 { Complex64::new(-1.0, 0.0) } else { Complex64::new(1.0, 0.0) })
                    .collect()
            })
            .collect();
        assert!(Cocycle::table(k.clone(), phases.clone()).is_ok());
        let mut bad = phases;
        bad[1][2] = Complex64::new(0.0, 1.0);
        assert!(matches!(Cocycle::table(k, bad), Err(AlgebraError::InvalidCocycle(_))));
    }
}
