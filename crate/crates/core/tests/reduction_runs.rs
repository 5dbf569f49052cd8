//! Running a simplex/simplex solver on an ℓ1-ball game through the lift.
//!
//! The reduction can fold queries on the algorithm side (`ReducedAlg`
//! against the base oracle) or on the oracle side (`LiftedOracle` serving
//! an unmodified 2d-column algorithm). Both must reproduce the trajectory
//! of the solver run directly on the materialized lift.

use matgame_core::game::{GameInstance, NormContract, WGeometry};
use matgame_core::oracle::{drive_interaction, Algorithm, DenseOracle, Oracle, Query, Response};
use matgame_core::reduction::{psi_matrix, LiftedOracle, ReducedAlg};
use matgame_core::solvers::MirrorProxAlg;
use matgame_core::vecmath;
use rand::Rng;
use rand::SeedableRng;

fn random_unit_entries(n: usize, d: usize, seed: u64) -> GameInstance {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    GameInstance::new(n, d, entries, WGeometry::L1Ball, NormContract::UnitEntries).unwrap()
}

#[test]
fn reduced_mirror_prox_matches_direct_run_on_lifted_matrix() {
    let (n, d, t) = (6, 4, 300);
    let a = random_unit_entries(n, d, 31);
    let lifted_dense = psi_matrix(&a).unwrap();

    // reference: mirror prox directly on the materialized lift
    let mut direct_oracle = DenseOracle::new(&lifted_dense);
    let mut direct = MirrorProxAlg::new(n, 2 * d);
    let direct_t = drive_interaction(&mut direct, &mut direct_oracle, 2 * t).unwrap();
    let direct_w = direct_t.final_output.clone();

    // algorithm-side folding against the base matrix
    let mut base_oracle = DenseOracle::new(&a);
    let mut reduced = ReducedAlg::new(MirrorProxAlg::new(n, 2 * d), d);
    let reduced_t = drive_interaction(&mut reduced, &mut base_oracle, 2 * t).unwrap();
    assert_eq!(base_oracle.calls(), 2 * t);

    // oracle-side folding serving the unmodified algorithm
    let mut base_oracle2 = DenseOracle::new(&a);
    let lifted_w;
    {
        let mut lifted_oracle = LiftedOracle::new(&mut base_oracle2, d);
        let mut inner = MirrorProxAlg::new(n, 2 * d);
        let tr = drive_interaction(&mut inner, &mut lifted_oracle, 2 * t).unwrap();
        lifted_w = tr.final_output;
        assert_eq!(lifted_oracle.calls(), 2 * t);
    }

    // identical trajectories: both reductions reproduce the direct run
    assert!(vecmath::max_abs_diff(&lifted_w, &direct_w) <= 1e-12);
    let dd = direct_w.len() / 2;
    let folded: Vec<f64> = (0..dd).map(|j| direct_w[j] - direct_w[dd + j]).collect();
    assert!(vecmath::max_abs_diff(&folded, &reduced_t.final_output) <= 1e-12);

    // value preservation: the l1 payoff of the reduced output equals the
    // simplex payoff of the lifted output
    let (l1_value, _) = a.min_payoff(&reduced_t.final_output).unwrap();
    let (lift_value, _) = lifted_dense.min_payoff(&direct_w).unwrap();
    assert!((l1_value - lift_value).abs() <= 1e-9);

    // suboptimality chain: the l1 optimum equals the lifted simplex
    // optimum, which is at most max_i (p' psi(A))_i for any feasible p, so
    // the duality gap at the averaged pair bounds the l1 suboptimality
    let p_avg = direct.averaged_p();
    let gap = lifted_dense.duality_gap(&direct_w, &p_avg).unwrap();
    assert!(gap >= -1e-12);
    assert!(gap <= 0.1, "gap {gap} did not shrink");
    let pta = lifted_dense.vecmat(&p_avg).unwrap();
    let upper = pta.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    assert!(upper - l1_value <= gap + 1e-9);
}

struct ConstantUniformAlg {
    n: usize,
    d2: usize,
}

impl Algorithm for ConstantUniformAlg {
    fn next_query(&mut self) -> Query {
        Query::TwoSided {
            p: vec![1.0 / self.n as f64; self.n],
            w: vec![1.0 / self.d2 as f64; self.d2],
        }
    }
    fn observe(&mut self, _r: &Response) {}
    fn final_output(&self) -> Vec<f64> {
        vec![1.0 / self.d2 as f64; self.d2]
    }
}

#[test]
fn constant_uniform_algorithm_reduces_to_zero_vector() {
    let (n, d) = (5, 3);
    let a = random_unit_entries(n, d, 37);
    let mut base_oracle = DenseOracle::new(&a);
    let mut reduced = ReducedAlg::new(ConstantUniformAlg { n, d2: 2 * d }, d);
    let tr = drive_interaction(&mut reduced, &mut base_oracle, 3).unwrap();
    // uniform mass on both halves cancels to the zero vector
    assert!(vecmath::norm_inf(&tr.final_output) <= 1e-15);
    let (v, _) = a.min_payoff(&tr.final_output).unwrap();
    assert_eq!(v, 0.0);
}
