mod common;

use common::{random_group_element, random_measure, unit_vector};
use hyperbisect::testmap::{
    act_on_join, act_on_target, phi, phi_with_diagnostics, psi, sphere_to_hyperplane,
    AffineHyperplane, GroupElement, JoinPoint, SphereHyperplane,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn phi_equivariance(seed in any::<u64>(), d in 1usize..4, k in 1usize..4, j in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let measures: Vec<_> = (0..j).map(|_| random_measure(&mut rng, d, 12)).collect();
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| unit_vector(&mut rng, d + 1)).collect();
        let g = random_group_element(&mut rng, k);
        let base = phi(&measures, &dirs).unwrap();
        let moved = phi(&measures, &g.act_on_directions(&dirs)).unwrap();
        for (a, b) in moved.iter().zip(&base) {
            prop_assert!((a - g.character() * b).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_equivariance(seed in any::<u64>(), d in 1usize..4, k in 1usize..4, j in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let measures: Vec<_> = (0..j).map(|_| random_measure(&mut rng, d, 12)).collect();
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| unit_vector(&mut rng, d + 1)).collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let point = JoinPoint::new(raw.iter().map(|l| l / total).collect(), dirs).unwrap();
        let g = random_group_element(&mut rng, k);
        let p = psi(&measures, &point).unwrap();
        let moved = psi(&measures, &act_on_join(&g, &point).unwrap()).unwrap();
        let (w, v) = act_on_target(&g, &p.w_part, &p.v_part);
        for (a, b) in moved.w_part.iter().zip(&w).chain(moved.v_part.iter().zip(&v)) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_face_ignores_measures(seed in any::<u64>(), d in 1usize..4, k in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first: Vec<_> = (0..3).map(|_| random_measure(&mut rng, d, 10)).collect();
        let second: Vec<_> = (0..3).map(|_| random_measure(&mut rng, d, 20)).collect();
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| unit_vector(&mut rng, d + 1)).collect();
        let mut lambdas = vec![1.0 / (k - 1) as f64; k];
        lambdas[rng.gen_range(0..k)] = 0.0;
        let total: f64 = lambdas.iter().sum();
        let point = JoinPoint::new(lambdas.iter().map(|l| l / total).collect(), dirs).unwrap();
        let a = psi(&first, &point).unwrap();
        let b = psi(&second, &point).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.v_part.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sphere_round_trip(normal in prop::collection::vec(-4.0f64..4.0, 1..4), offset in -10.0f64..10.0) {
        prop_assume!(normal.iter().any(|x| x.abs() > 1e-3));
        let h = AffineHyperplane { normal: normal.clone(), offset };
        let w = h.to_sphere();
        let SphereHyperplane::Finite(back) = sphere_to_hyperplane(&w).unwrap() else {
            panic!("finite hyperplane went to infinity");
        };
        let n = (normal.iter().map(|v| v * v).sum::<f64>() + offset * offset).sqrt();
        for (a, b) in back.normal.iter().zip(&normal) {
            prop_assert!((a * n - b).abs() <= 1e-9);
        }
        prop_assert!((back.offset * n - offset).abs() <= 1e-9);
    }
}

#[test]
fn orientation_flip_negates_and_boundary_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let measures: Vec<_> = (0..2).map(|_| random_measure(&mut rng, 2, 15)).collect();
    let dirs = vec![unit_vector(&mut rng, 3), unit_vector(&mut rng, 3)];
    let flip = GroupElement::sign_flip(2, 1);
    let a = phi(&measures, &dirs).unwrap();
    let b = phi(&measures, &flip.act_on_directions(&dirs)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(*x, -*y);
    }
    let eval = phi_with_diagnostics(&measures, &dirs).unwrap();
    assert!(eval.boundary_mass.iter().all(|&m| m == 0.0));
}

#[test]
fn poles_are_rejected() {
    let measures = vec![random_measure(&mut ChaCha8Rng::seed_from_u64(1), 2, 5)];
    assert!(phi(&measures, &[vec![0.0, 0.0, 1.0]]).is_err());
    assert_eq!(sphere_to_hyperplane(&[0.0, 0.0, -1.0]).unwrap(), SphereHyperplane::AtInfinity);
}
