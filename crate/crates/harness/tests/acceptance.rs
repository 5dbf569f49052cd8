//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its measured runtime (visible with `--nocapture`).
//!
//! Statistical criteria use fixed seed ranges; tolerances and thresholds
//! are pinned here, not configurable.

use std::time::Instant;

use matgame_core::game::{GameInstance, NormContract, WGeometry};
use matgame_core::reduction::{psi_inv, psi_matrix, psi_vec};
use matgame_core::solvers::{smoothed_value_grad, SmoothingConfig};
use matgame_core::vecmath;
use matgame_harness::config::{
    AlgoName, LowerConfig, LowerMode, PsdConfig, StatConfig, UpperConfig, UpperSource,
};
use matgame_harness::lower::{run_lower_bound, run_single};
use matgame_harness::stats::{psd_scan, stat_test_projected_gaussian};
use matgame_harness::upper::run_upper_rate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, pass: bool, started: Instant, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({:.2} s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn lower_cfg(mode: LowerMode, algo: AlgoName) -> LowerConfig {
    LowerConfig {
        mode,
        algo,
        t: 8,
        n: 4096,
        d: 64,
        delta: None,
        seeds: (0, 19),
        tol_replay: 1e-9,
        tol_nonsep: None,
        tol_witness: 1e-9,
        mu: None,
        resample: false,
        probe_nosep: false,
        out_csv: None,
        out_json: None,
    }
}

#[test]
fn criterion_1_one_sided_lower_bound_exact() {
    let started = Instant::now();
    let mut cfg = lower_cfg(LowerMode::OneSided, AlgoName::Perceptron);
    cfg.t = 24;
    cfg.d = 64;
    let (a, transcript, row) = run_single(&cfg, 0).unwrap();

    let mut pass = a.rows() == 25 && a.cols() == 64;
    for l in 0..a.rows() {
        pass &= (vecmath::norm2(a.row(l).unwrap()) - 1.0).abs() <= 1e-9;
    }
    pass &= transcript.records.len() == 24;
    pass &= (row.cert.witness_value - 0.2).abs() <= 1e-9;
    pass &= row.cert.output_min_payoff <= 1e-12;
    pass &= row.cert.replay_max_err <= 1e-9;
    pass &= row.cert.all_pass;
    pass &= started.elapsed().as_secs_f64() < 1.0;
    report(
        "1 one-sided T=24 d=64 perceptron",
        pass,
        started,
        &format!(
            "witness={:.12} output_min={:.3e} replay={:.3e}",
            row.cert.witness_value, row.cert.output_min_payoff, row.cert.replay_max_err
        ),
    );
}

#[test]
fn criterion_2_two_sided_l2_lower_bound_statistical() {
    let started = Instant::now();
    let mut cfg = lower_cfg(LowerMode::L2, AlgoName::Agd);
    cfg.t = 8;
    cfg.n = 4096;
    cfg.d = 64;
    cfg.delta = Some(0.1);
    cfg.seeds = (0, 19);
    let summary = run_lower_bound(&cfg).unwrap();

    let mut passes = 0;
    for row in &summary.rows {
        let target = row.alpha / 3.0; // alpha / sqrt(T+1), T = 8
        let ok = row.cert.norm_stat <= 1.0
            && row.cert.witness_value >= target - 1e-9
            && row.cert.output_min_payoff <= 1e-9
            && row.cert.replay_max_err <= 1e-9;
        assert_eq!(ok, row.cert.all_pass, "certificate flags disagree");
        if ok {
            passes += 1;
        }
    }
    // the interaction spends exactly T oracle calls
    let (_, transcript, _) = run_single(&cfg, 0).unwrap();
    let exact_calls = transcript.records.len() == 8;

    let within_time = started.elapsed().as_secs_f64() < 60.0;
    let pass = passes >= 16 && exact_calls && within_time;
    report(
        "2 two-sided l2 T=8 n=4096 d=64 agd",
        pass,
        started,
        &format!("passes={passes}/20 exact_calls={exact_calls}"),
    );
}

#[test]
fn criterion_3_two_sided_l1_lower_bound_statistical() {
    let started = Instant::now();
    let mut cfg = lower_cfg(LowerMode::L1, AlgoName::MirrorProx);
    cfg.t = 6;
    cfg.n = 4096;
    cfg.d = 4096;
    cfg.delta = Some(1.0 / 300.0);
    cfg.seeds = (0, 19);
    let summary = run_lower_bound(&cfg).unwrap();

    let mut passes = 0;
    for row in &summary.rows {
        let ok = row.cert.norm_stat <= 1.0
            && row.cert.witness_target > 0.0
            && row.cert.witness_value >= row.cert.witness_target - 1e-9
            && row.cert.output_min_payoff <= 1e-9;
        if ok && row.cert.replay_pass {
            passes += 1;
        }
    }
    let within_time = started.elapsed().as_secs_f64() < 300.0;
    let pass = passes >= 16 && within_time;
    report(
        "3 two-sided l1 T=6 n=d=4096 mirror-prox (reduced)",
        pass,
        started,
        &format!("passes={passes}/20 wall={:.1}s", summary.wall_clock_s),
    );
}

#[test]
fn criterion_4_reduction_identities() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    let mut pass = true;
    for _ in 0..100 {
        let n = rng.random_range(1usize..=16);
        let d = rng.random_range(1usize..=16);
        let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a =
            GameInstance::new(n, d, entries, WGeometry::L1Ball, NormContract::UnitEntries).unwrap();
        let lifted = psi_matrix(&a).unwrap();

        // psi(A) psi(w) = A w for w in the l1 ball
        let mut w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l1 = vecmath::norm1(&w).max(1e-12);
        vecmath::scale(rng.random_range(0.0..1.0) / l1, &mut w);
        let lhs = lifted.matvec(&psi_vec(&w).unwrap()).unwrap();
        let rhs = a.matvec(&w).unwrap();
        for (x, y) in lhs.iter().zip(&rhs) {
            pass &= (x - y).abs() <= 1e-12 * y.abs().max(1.0);
        }

        // A psi_inv(wt) = psi(A) wt for wt on the doubled simplex
        let raw: Vec<f64> = (0..2 * d).map(|_| rng.random_range(0.0..1.0)).collect();
        let mass: f64 = raw.iter().sum();
        let wt: Vec<f64> = raw.iter().map(|v| v / mass).collect();
        let lhs = a.matvec(&psi_inv(&wt).unwrap()).unwrap();
        let rhs = lifted.matvec(&wt).unwrap();
        for (x, y) in lhs.iter().zip(&rhs) {
            pass &= (x - y).abs() <= 1e-12 * y.abs().max(1.0);
        }

        // exact round trip on the l1 sphere
        let mut s: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = vecmath::norm1(&s).max(1e-12);
        vecmath::scale(1.0 / norm, &mut s);
        let back = psi_inv(&psi_vec(&s).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&s) {
            pass &= (x - y).abs() <= 1e-15;
        }
    }
    pass &= started.elapsed().as_secs_f64() < 1.0;
    report("4 reduction identities (100 triples)", pass, started, "");
}

#[test]
fn criterion_5_novikoff_upper_bound() {
    let started = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for &t in &[8usize, 24] {
        let cfg = UpperConfig {
            algo: AlgoName::Perceptron,
            source: UpperSource::Adversarial,
            t,
            n: t + 1,
            d: 64,
            gamma: 0.0,
            budget: 10 * (t + 2),
            seeds: (0, 4),
            mu: None,
            out_csv: None,
            out_json: None,
        };
        let summary = run_upper_rate(&cfg).unwrap();
        for row in &summary.rows {
            let updates = row.updates.unwrap_or(usize::MAX);
            let ok = row.converged_at.is_some() && updates <= t + 1;
            pass &= ok;
            detail.push_str(&format!("T={t} seed={} updates={updates}; ", row.seed));
        }
    }
    pass &= started.elapsed().as_secs_f64() < 1.0;
    report(
        "5 perceptron Novikoff bound (10 matrices)",
        pass,
        started,
        &detail,
    );
}

#[test]
fn criterion_6_smoothing_correctness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606060);
    let mut pass = true;

    // value sandwich, exact inequalities
    for _ in 0..100 {
        let n = rng.random_range(1usize..=40);
        let mu = rng.random_range(0.01..2.0);
        let cfg = SmoothingConfig::new(mu, n).unwrap();
        let aw: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let (value, weights) = smoothed_value_grad(&aw, &cfg).unwrap();
        let min = aw.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        pass &= value <= min;
        pass &= value >= min - mu * (n as f64).ln();
        let mass: f64 = weights.iter().sum();
        pass &= (mass - 1.0).abs() <= 1e-12;
    }

    // gradient vs central finite differences on a 20x10 instance
    let (n, d) = (20, 10);
    let entries: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let a = GameInstance::new(n, d, entries, WGeometry::L2Ball, NormContract::None).unwrap();
    let cfg = SmoothingConfig::new(0.1, n).unwrap();
    let h = 1e-5;
    let value_at = |w: &[f64]| {
        let aw = a.matvec(w).unwrap();
        smoothed_value_grad(&aw, &cfg).unwrap().0
    };
    for _ in 0..10 {
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let aw = a.matvec(&w).unwrap();
        let (_, q) = smoothed_value_grad(&aw, &cfg).unwrap();
        let grad = a.vecmat(&q).unwrap();
        let mut fd = vec![0.0; d];
        for i in 0..d {
            let mut wp = w.clone();
            wp[i] += h;
            let mut wm = w.clone();
            wm[i] -= h;
            fd[i] = (value_at(&wp) - value_at(&wm)) / (2.0 * h);
        }
        let rel = vecmath::norm2(&vecmath::sub(&fd, &grad)) / vecmath::norm2(&grad).max(1e-12);
        pass &= rel <= 1e-5;
    }
    pass &= started.elapsed().as_secs_f64() < 1.0;
    report("6 smoothing sandwich and gradient", pass, started, "");
}

#[test]
fn criterion_7_tridiagonal_psd_threshold() {
    let started = Instant::now();
    let scan = psd_scan(&PsdConfig {
        t_max: 64,
        out_json: None,
    })
    .unwrap();
    let pass = scan.all_pass && started.elapsed().as_secs_f64() < 5.0;
    report(
        "7 chain-matrix definiteness threshold T=2..64",
        pass,
        started,
        &format!("rows={}", scan.rows.len()),
    );
}

#[test]
fn criterion_8_projected_gaussian_tail_bounds() {
    let started = Instant::now();
    let cfg = StatConfig {
        q: 256,
        basis_size: 32,
        beta: 1.0,
        trials: 100_000,
        z_list: vec![3.0, 4.0],
        seed: 8,
        out_json: None,
    };
    let stat = stat_test_projected_gaussian(&cfg).unwrap();
    let mut detail = String::new();
    for row in &stat.rows {
        detail.push_str(&format!(
            "z={} inf {:.4e}<={:.4e} ratio {:?}<={:?}; ",
            row.z, row.emp_inf, row.bound_inf, row.emp_ratio, row.bound_ratio
        ));
    }
    let pass = stat.all_pass && started.elapsed().as_secs_f64() < 30.0;
    report("8 projected-gaussian tails q=256", pass, started, &detail);
}

#[test]
fn criterion_9_byte_identical_csv_determinism() {
    let started = Instant::now();
    let mut pass = true;

    let mut one_sided = lower_cfg(LowerMode::OneSided, AlgoName::Perceptron);
    one_sided.t = 6;
    one_sided.d = 16;
    one_sided.seeds = (0, 3);

    let mut l2 = lower_cfg(LowerMode::L2, AlgoName::Agd);
    l2.t = 4;
    l2.n = 512;
    l2.d = 32;
    l2.seeds = (0, 3);

    let mut l1 = lower_cfg(LowerMode::L1, AlgoName::MirrorProx);
    l1.t = 4;
    l1.n = 512;
    l1.d = 512;
    l1.seeds = (0, 3);

    for cfg in [one_sided, l2, l1] {
        let a = run_lower_bound(&cfg).unwrap();
        let b = run_lower_bound(&cfg).unwrap();
        pass &= a.csv == b.csv;
        pass &= !a.csv.is_empty();
    }

    // seeded statistics reproduce byte-identically as well
    let stat_cfg = StatConfig {
        q: 64,
        basis_size: 8,
        beta: 1.0,
        trials: 1000,
        z_list: vec![3.0],
        seed: 9,
        out_json: None,
    };
    let s1 = serde_json::to_string(&stat_test_projected_gaussian(&stat_cfg).unwrap().rows).unwrap();
    let s2 = serde_json::to_string(&stat_test_projected_gaussian(&stat_cfg).unwrap().rows).unwrap();
    pass &= s1 == s2;

    report("9 same-seed byte-identical outputs", pass, started, "");
}
