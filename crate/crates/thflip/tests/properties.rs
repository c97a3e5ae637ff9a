//! Property tests for the algebraic invariants: involutions, product rules,
//! factorization roundtrips and membership conditions.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thflip::antisym::{signature_counts, CharPair};
use thflip::laurent::{LaurentMatrix, LaurentPoly};
use thflip::oracle::gen;
use thflip::rational::{audit_minus, audit_plus, RationalMatrixFunction};
use thflip::solver::theta;
use thflip::wiener_hopf::{factor_matrix, perturb_factorization, split_scalar, verify_wh};
use thflip::{tol, C64};

fn laurent_strategy(max_terms: usize, span: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (-span..=span, -1.0_f64..1.0, -1.0_f64..1.0),
        1..=max_terms,
    )
    .prop_map(|terms| {
        LaurentPoly::from_terms(
            &terms
                .into_iter()
                .map(|(k, re, im)| (k, C64::new(re, im)))
                .collect::<Vec<_>>(),
        )
    })
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = RationalMatrixFunction> {
    prop::collection::vec(laurent_strategy(4, 2), n * n).prop_map(move |entries| {
        let mut m = LaurentMatrix::zero(n, n);
        for (i, p) in entries.into_iter().enumerate() {
            *m.entry_mut(i / n, i % n) = p;
        }
        RationalMatrixFunction::from_laurent(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tilde_is_an_involution(p in laurent_strategy(6, 4)) {
        prop_assert_eq!(p.tilde().tilde(), p);
    }

    #[test]
    fn tilde_commutes_with_products(a in matrix_strategy(2), b in matrix_strategy(2)) {
        let lhs = a.mul(&b).unwrap().tilde();
        let rhs = a.tilde().mul(&b.tilde()).unwrap();
        let dist = lhs.grid_distance(&rhs, 32).unwrap();
        prop_assert!(dist < 1e-10 * (1.0 + a.coeff_scale() * b.coeff_scale()));
    }

    #[test]
    fn theta_sum_is_half_kappa_sum_for_balanced_pairs(seed in 0_u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed as usize % 4);
        let pairs = gen::random_balanced_pairs(&mut rng, n, 4);
        let counts = signature_counts(&pairs);
        prop_assert_eq!(counts.beta, counts.gamma);
        let theta_sum: i64 = pairs.iter().map(|p| theta(p.rho, p.kappa)).sum();
        let kappa_sum: i64 = pairs.iter().map(|p| p.kappa).sum();
        prop_assert_eq!(2 * theta_sum, kappa_sum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_roundtrip(seed in 0_u64..5000) {
        // well conditioned inputs via the corpus generator
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_invertible_symbol(&mut rng, 2, -1, 1);
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv).unwrap();
        let dist = prod
            .grid_distance(&RationalMatrixFunction::identity(2), 64)
            .unwrap();
        prop_assert!(dist < 1e-9, "A·A⁻¹ distance {dist:.2e}");
        let back = inv.inverse().unwrap();
        prop_assert!(back.grid_distance(&a, 64).unwrap() < 1e-8);
    }

    #[test]
    fn winding_is_additive(seed in 0_u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
        let a = gen::random_separated_scalar(&mut rng);
        let b = gen::random_separated_scalar(&mut rng);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(
            ab.winding().unwrap(),
            a.winding().unwrap() + b.winding().unwrap()
        );
    }

    #[test]
    fn scalar_split_sides_are_audited(seed in 0_u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(97).wrapping_add(13));
        let r = gen::random_separated_scalar(&mut rng);
        let (minus, kappa, plus) = split_scalar(&r).unwrap();
        prop_assert!(audit_minus(&minus).unwrap().pass());
        prop_assert!(audit_plus(&plus).unwrap().pass());
        prop_assert_eq!(kappa, r.winding().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Composing factors with a prescribed index vector and refactoring
    /// recovers exactly that index multiset.
    #[test]
    fn factorization_roundtrip_recovers_indices(seed in 0_u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(11).wrapping_add(3));
        let n = 2 + (seed as usize % 2);
        let minus = gen::random_gminus(&mut rng, n, 2);
        let plus = gen::random_gminus(&mut rng, n, 2).tilde();
        let mut kappas: Vec<i64> = (0..n).map(|i| ((seed as i64 + i as i64 * 3) % 5) - 2).collect();
        kappas.sort_unstable();
        let lambda = RationalMatrixFunction::diag_monomials(
            &kappas.iter().map(|&k| (k, C64::new(1.0, 0.0))).collect::<Vec<_>>(),
        );
        let f = minus.mul(&lambda).unwrap().mul(&plus).unwrap();
        let fact = factor_matrix(&f).unwrap();
        prop_assert_eq!(&fact.partial_indices, &kappas);
        let rep = verify_wh(&fact, &f, tol::TAU_RESID).unwrap();
        prop_assert!(rep.pass, "residual {:.2e}", rep.residual);
        prop_assert_eq!(rep.index_sum, kappas.iter().sum::<i64>());
    }

    #[test]
    fn perturbation_preserves_index_multiset(seed in 0_u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(29).wrapping_add(1));
        let minus = gen::random_gminus(&mut rng, 2, 1);
        let plus = gen::random_gminus(&mut rng, 2, 1).tilde();
        let lambda = RationalMatrixFunction::diag_monomials(&[
            (0, C64::new(1.0, 0.0)),
            (1 + (seed as i64 % 2), C64::new(1.0, 0.0)),
        ]);
        let f = minus.mul(&lambda).unwrap().mul(&plus).unwrap();
        let fact = factor_matrix(&f).unwrap();
        let pert = perturb_factorization(&fact, seed);
        prop_assert_eq!(&pert.partial_indices, &fact.partial_indices);
        prop_assert!(verify_wh(&pert, &f, tol::TAU_RESID).unwrap().pass);
    }

    /// The canonical sort is a permutation and is idempotent.
    #[test]
    fn canonical_pairs_sorting(seed in 0_u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = gen::random_pairs(&mut rng, 4, 5);
        let sorted = CharPair::canonical(pairs.clone());
        prop_assert_eq!(CharPair::canonical(sorted.clone()), sorted.clone());
        let mut a = pairs;
        let mut b = sorted;
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
