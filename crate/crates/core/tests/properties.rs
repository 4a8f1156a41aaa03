use std::sync::Arc;

use nctriples_core::algebra::{random_element, random_full_element, represent, AlgebraElement};
use nctriples_core::groups::{BallIndex, GroupElement, GroupHom, GroupModel};
use nctriples_core::triple::{assemble_triple, verify_real_structure};
use nctriples_core::weights::{decompose_weight, WeightModel};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<Arc<GroupModel>> {
    vec![
        Arc::new(GroupModel::Cyclic(7)),
        Arc::new(GroupModel::FreeAbelian(2)),
        Arc::new(GroupModel::Free(2)),
        Arc::new(GroupModel::symmetric(3).unwrap()),
        Arc::new(GroupModel::product(GroupModel::Cyclic(2), GroupModel::integers())),
    ]
}

fn pick(ball: &BallIndex, rng: &mut ChaCha8Rng) -> GroupElement {
    ball.element(rng.gen_range(0..ball.len())).clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(which in 0usize..5, seed in any::<u64>()) {
        let g = &groups()[which];
        let ball = BallIndex::canonical(g.clone(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (pick(&ball, &mut rng), pick(&ball, &mut rng), pick(&ball, &mut rng));
        let e = g.identity();
        prop_assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)));
        prop_assert_eq!(g.multiply(&a, &g.inverse(&a)), e.clone());
        prop_assert_eq!(g.multiply(&e, &a), a.clone());
        prop_assert_eq!(g.parse_element(&g.label(&a)).unwrap(), a);
    }

    #[test]
    fn convolution_is_associative_and_involutive(which in 0usize..5, seed in any::<u64>()) {
        let g = &groups()[which];
        let ball = BallIndex::canonical(g.clone(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(&ball, 2, 3, &mut rng);
        let h = random_element(&ball, 2, 3, &mut rng);
        let k = random_element(&ball, 2, 3, &mut rng);
        let left = f.convolve(&h).unwrap().convolve(&k).unwrap();
        let right = f.convolve(&h.convolve(&k).unwrap()).unwrap();
        prop_assert_eq!(left.max_abs_diff(&right), 0.0);
        let star = f.convolve(&h).unwrap().involution();
        prop_assert_eq!(star.max_abs_diff(&h.involution().convolve(&f.involution()).unwrap()), 0.0);
        prop_assert_eq!(f.involution().involution(), f);
    }

    #[test]
    fn representation_is_multiplicative_on_the_safe_core(which in 0usize..5, seed in any::<u64>()) {
        let g = &groups()[which];
        let ball = BallIndex::canonical(g.clone(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(&ball, 1, 3, &mut rng);
        let h = random_element(&ball, 1, 3, &mut rng);
        let safe = ball.safe_indices(2);
        let product = represent(&f, &ball).unwrap().compose(&represent(&h, &ball).unwrap()).unwrap();
        let direct = represent(&f.convolve(&h).unwrap(), &ball).unwrap();
        prop_assert_eq!(product.max_abs_diff_on_columns(&direct, &safe).unwrap(), 0.0);
        if ball.is_complete() {
            let adj = represent(&f, &ball).unwrap().adjoint().unwrap();
            prop_assert_eq!(adj.max_abs_diff(&represent(&f.involution(), &ball).unwrap()).unwrap(), 0.0);
        }
    }

    #[test]
    fn j_is_an_antilinear_involution(which in 0usize..5, seed in any::<u64>(), re in -3i32..3, im in -3i32..3) {
        let g = &groups()[which];
        let w = WeightModel::standard_length(g.clone()).unwrap();
        let t = assemble_triple(g.clone(), &w, 2, &g.canonical_generators()).unwrap();
        let j = t.j_operator().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi: Vec<Complex64> = (0..t.dimension())
            .map(|_| Complex64::new(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64))
            .collect();
        let lambda = Complex64::new(re as f64, im as f64);
        let scaled: Vec<Complex64> = xi.iter().map(|v| lambda * v).collect();
        let lhs = j.apply(&scaled);
        let rhs: Vec<Complex64> = j.apply(&xi).iter().map(|v| lambda.conj() * v).collect();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(j.apply(&j.apply(&xi)), xi);
    }

    #[test]
    fn pullback_evaluates_through_the_hom(m in 1usize..12, k in 0usize..12) {
        let c12 = Arc::new(GroupModel::Cyclic(12));
        let hom = GroupHom::from_images(c12.clone(), c12.clone(), &[(GroupElement::Index(1), GroupElement::Index(m))]).unwrap();
        let w = WeightModel::standard_length(c12.clone()).unwrap();
        let p = WeightModel::pullback(&hom, &w).unwrap();
        let x = GroupElement::Index(k);
        prop_assert_eq!(p.evaluate(&x).unwrap(), w.evaluate(&hom.apply(&x)).unwrap());
    }

    #[test]
    fn affine_weights_on_integers_decompose(c in -5i32..5, a in -4i32..4, r in 2u32..7) {
        let z = Arc::new(GroupModel::integers());
        let w = WeightModel::affine(z.clone(), c as f64, vec![a as f64]).unwrap();
        let d = decompose_weight(&w, &BallIndex::canonical(z, r).unwrap()).unwrap();
        prop_assert!(d.succeeded() && d.agree());
        prop_assert_eq!(d.alpha, c as f64);
    }

    #[test]
    fn table_weights_have_consistent_verdicts(n in 2u64..7, seed in any::<u64>()) {
        let g = Arc::new(GroupModel::Cyclic(n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-2..=2) as f64).collect();
        let w = WeightModel::table(g.clone(), values).unwrap();
        let t = assemble_triple(g.clone(), &w, n as u32, &g.canonical_generators()).unwrap();
        let d = decompose_weight(&w, t.ball()).unwrap();
        prop_assert!(d.agree());
        let a = verify_real_structure(&t, 5, seed).unwrap();
        let b = verify_real_structure(&t, 5, seed).unwrap();
        prop_assert_eq!(a.first_order, d.succeeded());
        prop_assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn full_elements_of_finite_groups_have_full_support_sizes(n in 2u64..9, seed in any::<u64>()) {
        let g = Arc::new(GroupModel::Cyclic(n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_full_element(&g, &mut rng);
        prop_assert!(f.len() <= n as usize);
        let unit = AlgebraElement::one(g.clone());
        prop_assert_eq!(f.convolve(&unit).unwrap(), f);
    }
}
