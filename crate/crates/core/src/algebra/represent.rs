use super::{AlgebraElement, AlgebraError, Cocycle, Operator};
use crate::groups::{BallIndex, GroupElement};

/// Compression of the left-regular representation to the ball:
/// entry `(w, y) = f(w y⁻¹)`.
pub fn represent(f: &AlgebraElement, ball: &BallIndex) -> Result<Operator, AlgebraError> {
    if f.group() != ball.group() {
        return Err(AlgebraError::GroupMismatch("element and ball live on different groups".into()));
    }
    let n = ball.len();
    let mut m = Operator::zeros(n, n)?;
    let group = ball.group();
    for (x, c) in f.terms() {
        for j in 0..n {
            if let Some(i) = ball.position(&group.multiply(x, ball.element(j))) {
                m.add_at(i, j, *c);
            }
        }
    }
    Ok(m)
}

/// `π_u(δ_x)`: entry `(xy, y) = u(y⁻¹x⁻¹, x)`.
pub fn represent_twisted(x: &GroupElement, cocycle: &Cocycle, ball: &BallIndex) -> Result<Operator, AlgebraError> {
    let group = ball.group();
    if !cocycle.supports(group) {
        return Err(AlgebraError::GroupMismatch("cocycle and ball live on different groups".into()));
    }
    group.check_element(x)?;
    let n = ball.len();
    let mut m = Operator::zeros(n, n)?;
    for j in 0..n {
        let y = ball.element(j);
        let xy = group.multiply(x, y);
        if let Some(i) = ball.position(&xy) {
            m.set(i, j, cocycle.value(&group.inverse(&xy), x));
        }
    }
    Ok(m)
}

/// `π_u(f) = Σ f(x) π_u(δ_x)`.
pub fn represent_twisted_element(
    f: &AlgebraElement,
    cocycle: &Cocycle,
    ball: &BallIndex,
) -> Result<Operator, AlgebraError> {
    let n = ball.len();
    let mut out = Operator::zeros(n, n)?;
    for (x, c) in f.terms() {
        out = out.add(&represent_twisted(x, cocycle, ball)?.scale(*c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{operator_norm, random_element};
    use crate::groups::GroupModel;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_and_shift() {
        let z = Arc::new(GroupModel::integers());
        let ball = BallIndex::canonical(z.clone(), 1).unwrap();
        assert_eq!(
            represent(&AlgebraElement::one(z.clone()), &ball).unwrap(),
            Operator::identity(3).unwrap()
        );
        // basis order 0, 1, −1
        let s = represent(&AlgebraElement::delta(z, GroupElement::int(1)), &ball).unwrap();
        let nonzero: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| s.get(i, j) != Complex64::new(0.0, 0.0))
            .collect();
        assert_eq!(nonzero, vec![(0, 2), (1, 0)]);
        assert_eq!(s.get(1, 0), one());
        assert_eq!(s.get(0, 2), one());
    }

    #[test]
    fn unitary_on_safe_core_and_faithful() {
        let g = Arc::new(GroupModel::Free(2));
        let ball = BallIndex::canonical(g.clone(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for x in ball.elements()[..ball.count_within(2)].iter() {
            let m = represent(&AlgebraElement::delta(g.clone(), x.clone()), &ball).unwrap();
            let safe = ball.safe_indices(ball.word_length_of(x).unwrap());
            for &a in &safe {
                for &b in &safe {
                    let ip: Complex64 = m.column(a).iter().zip(m.column(b)).map(|(p, q)| p.conj() * q).sum();
                    assert_eq!(ip, if a == b { one() } else { Complex64::new(0.0, 0.0) });
                }
            }
        }
        for _ in 0..20 {
            let f = random_element(&ball, 4, 5, &mut rng);
            let col = represent(&f, &ball).unwrap().column(0);
            for (i, y) in ball.elements().iter().enumerate() {
                assert_eq!(col[i], f.coefficient(y));
            }
        }
    }

    #[test]
    fn multiplicative_on_safe_core() {
        let g = Arc::new(GroupModel::FreeAbelian(2));
        let ball = BallIndex::canonical(g, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let f = random_element(&ball, 2, 3, &mut rng);
            let h = random_element(&ball, 2, 3, &mut rng);
            let spread = f.support_radius(&ball).unwrap() + h.support_radius(&ball).unwrap();
            let lhs = represent(&f.convolve(&h).unwrap(), &ball).unwrap();
            let rhs = represent(&f, &ball).unwrap().compose(&represent(&h, &ball).unwrap()).unwrap();
            assert_eq!(lhs.max_abs_diff_on_columns(&rhs, &ball.safe_indices(spread)).unwrap(), 0.0);
        }
    }

    #[test]
    fn twisted_representation() {
        let z2 = Arc::new(GroupModel::FreeAbelian(2));
        let ball = BallIndex::canonical(z2.clone(), 4).unwrap();
        let a = GroupElement::Vector(vec![1, 0]);
        let b = GroupElement::Vector(vec![0, 1]);
        let ab = GroupElement::Vector(vec![1, 1]);
        let untwisted = Cocycle::bicharacter(0.0);
        for x in ball.elements() {
            assert_eq!(
                represent_twisted(x, &untwisted, &ball).unwrap(),
                represent(&AlgebraElement::delta(z2.clone(), x.clone()), &ball).unwrap()
            );
        }
        let u = Cocycle::bicharacter(0.5);
        assert_eq!(
            represent_twisted(&z2.identity(), &u, &ball).unwrap(),
            Operator::identity(ball.len()).unwrap()
        );
        let pa = represent_twisted(&a, &u, &ball).unwrap();
        let pb = represent_twisted(&b, &u, &ball).unwrap();
        let pab = represent_twisted(&ab, &u, &ball).unwrap();
        let safe = ball.safe_indices(2);
        let left = pa.compose(&pb).unwrap();
        let right = pb.compose(&pa).unwrap();
        // π_u(a)π_u(b) = u(a,b) π_u(ab)
        let ua = pab.scale(u.value(&a, &b));
        assert_eq!(left.max_abs_diff_on_columns(&ua, &safe).unwrap(), 0.0);
        let ub = pab.scale(u.value(&b, &a));
        assert_eq!(right.max_abs_diff_on_columns(&ub, &safe).unwrap(), 0.0);
        let ratio = u.value(&a, &b) / u.value(&b, &a);
        assert_eq!(ratio, Complex64::new(-1.0, 0.0));
        for x in ball.elements() {
            let m = represent_twisted(x, &u, &ball).unwrap();
            assert!(m.entries().iter().all(|e| e.norm() == 0.0 || (e.norm() - 1.0).abs() < 1e-15));
            assert_eq!(operator_norm(&m).unwrap(), 1.0);
        }
    }
}
