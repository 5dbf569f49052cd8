//! Property suites for the shared primitives.

use matgame_core::game::{GameInstance, NormContract, WGeometry};
use matgame_core::lowrank::LowRankFactors;
use matgame_core::oracle::DenseOracle;
use matgame_core::ortho::OrthoBasis;
use matgame_core::spectral::chain_matrix;
use matgame_core::vecmath;
use proptest::prelude::*;

proptest! {
    #[test]
    fn projection_residual_is_orthogonal_to_basis(
        dim in 2usize..24,
        raw in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2..24), 0..8),
        x in prop::collection::vec(-5.0..5.0f64, 2..24),
    ) {
        let mut basis = OrthoBasis::new(dim);
        for v in &raw {
            let mut v = v.clone();
            v.resize(dim, 0.0);
            let _ = basis.insert(&v).unwrap();
        }
        let mut x = x;
        x.resize(dim, 0.0);
        let r = basis.project_complement(&x).unwrap();
        let scale = vecmath::norm2(&x);
        for v in basis.vectors() {
            prop_assert!(vecmath::dot(&r, v).abs() <= 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn basis_insert_sequences_stay_orthonormal_and_bounded(
        dim in 1usize..12,
        raw in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 1..12), 0..20),
    ) {
        let mut basis = OrthoBasis::new(dim);
        for v in &raw {
            let mut v = v.clone();
            v.resize(dim, 0.0);
            let _ = basis.insert(&v).unwrap();
        }
        prop_assert!(basis.len() <= dim);
        prop_assert!(basis.max_pairwise_dot() <= 1e-9);
        for v in basis.vectors() {
            prop_assert!((vecmath::norm2(v) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn lowrank_products_match_materialized(
        n in 1usize..32,
        d in 1usize..32,
        k in 0usize..10,
        seed in 0u64..1000,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = LowRankFactors::new(n, d);
        for _ in 0..k {
            let left: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let right: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            f.push(left, right).unwrap();
        }
        let dense = f.materialize(WGeometry::L2Ball, NormContract::None).unwrap();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fw = f.matvec(&w).unwrap();
        let dw = dense.matvec(&w).unwrap();
        for (a, b) in fw.iter().zip(&dw) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
        let fp = f.vecmat(&p).unwrap();
        let dp = dense.vecmat(&p).unwrap();
        for (a, b) in fp.iter().zip(&dp) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn min_payoff_agrees_with_scan(
        n in 1usize..10,
        d in 1usize..10,
        seed in 0u64..1000,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let a = GameInstance::new(n, d, entries.clone(), WGeometry::L2Ball, NormContract::None)
            .unwrap();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let (value, row) = a.min_payoff(&w).unwrap();
        let mut best = f64::INFINITY;
        let mut best_l = 0usize;
        for l in 0..n {
            let mut acc = 0.0;
            for i in 0..d {
                acc += entries[l * d + i] * w[i];
            }
            if acc < best {
                best = acc;
                best_l = l;
            }
        }
        prop_assert_eq!(value, best);
        prop_assert_eq!(row, best_l);
    }

    #[test]
    fn chain_quadratic_form_matches(
        t in 2usize..32,
        seed in 0u64..1000,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..t).map(|_| rng.random_range(-2.0..2.0)).collect();
        let m = chain_matrix(t, 0.0).unwrap();
        let mut quad = 0.0;
        for i in 0..t {
            for j in 0..t {
                quad += x[i] * m[i * t + j] * x[j];
            }
        }
        let mut expect = 0.0;
        for j in 0..t - 1 {
            expect += (x[j] - x[j + 1]) * (x[j] - x[j + 1]);
        }
        expect += x[t - 1] * x[t - 1];
        prop_assert!((quad - expect).abs() <= 1e-10 * expect.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn o2_with_basis_p_equals_o1_row(
        n in 1usize..8,
        d in 1usize..8,
        seed in 0u64..500,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = GameInstance::new(n, d, entries, WGeometry::L2Ball, NormContract::None).unwrap();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut oracle = DenseOracle::new(&a);
        for l in 0..n {
            let mut p = vec![0.0; n];
            p[l] = 1.0;
            let (_, pta) = oracle.o2_query(&p, &w).unwrap();
            let (_, row) = oracle.o1_query(l, &w).unwrap();
            prop_assert_eq!(pta, row);
        }
    }

    #[test]
    fn supergradient_row_realizes_min_payoff(
        n in 1usize..8,
        d in 1usize..8,
        seed in 0u64..500,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = GameInstance::new(n, d, entries, WGeometry::L2Ball, NormContract::None).unwrap();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut oracle = DenseOracle::new(&a);
        let row = oracle.osg_query(&w).unwrap();
        let (value, _) = a.min_payoff(&w).unwrap();
        prop_assert_eq!(vecmath::dot(&row, &w), value);
    }

    #[test]
    fn duality_gap_nonnegative_at_feasible_pairs(
        n in 1usize..8,
        d in 1usize..8,
        seed in 0u64..500,
    ) {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = GameInstance::new(n, d, entries, WGeometry::Simplex, NormContract::UnitEntries)
            .unwrap();
        let simplex = |len: usize, rng: &mut rand_chacha::ChaCha8Rng| {
            let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0f64).max(1e-6)).collect();
            let mass: f64 = raw.iter().sum();
            raw.iter().map(|v| v / mass).collect::<Vec<f64>>()
        };
        let w = simplex(d, &mut rng);
        let p = simplex(n, &mut rng);
        prop_assert!(a.duality_gap(&w, &p).unwrap() >= -1e-9);
    }

    #[test]
    fn psi_payoff_identities(
        n in 1usize..8,
        d in 1usize..8,
        seed in 0u64..500,
    ) {
        use matgame_core::reduction::{psi_inv, psi_matrix, psi_vec};
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = GameInstance::new(n, d, entries, WGeometry::L1Ball, NormContract::UnitEntries)
            .unwrap();
        let lifted = psi_matrix(&a).unwrap();

        let mut w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l1 = vecmath::norm1(&w);
        if l1 > 1.0 {
            vecmath::scale(1.0 / l1, &mut w);
        }
        let lhs = lifted.matvec(&psi_vec(&w).unwrap()).unwrap();
        let rhs = a.matvec(&w).unwrap();
        for (x, y) in lhs.iter().zip(&rhs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }

        let raw: Vec<f64> = (0..2 * d).map(|_| rng.random_range(0.0..1.0)).collect();
        let mass: f64 = raw.iter().sum();
        let wt: Vec<f64> = raw.iter().map(|v| v / mass).collect();
        let lhs = a.matvec(&psi_inv(&wt).unwrap()).unwrap();
        let rhs = lifted.matvec(&wt).unwrap();
        for (x, y) in lhs.iter().zip(&rhs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}
