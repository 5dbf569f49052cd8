//! Upper-bound rate runs: solvers to convergence or budget on instances
//! with a known margin, logging per-iteration value curves.

use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use matgame_core::oracle::DenseOracle;
use matgame_core::solvers::{
    agd_smoothed, mirror_prox, perceptron, subgradient_method, SmoothingConfig,
};

use crate::config::{AlgoName, UpperConfig, UpperSource};
use crate::instances::{adversarial_margin_instance, planted_margin_instance};
use crate::report::{upper_csv, write_if_some, write_json_if_some, CurveRow};

#[derive(Debug, Serialize)]
pub struct UpperSummary {
    pub config: UpperConfig,
    /// Fraction of seeds that converged (found a positive-margin point or,
    /// for the perceptron, terminated early).
    pub success_fraction: f64,
    pub wall_clock_s: f64,
    pub rows: Vec<CurveRow>,
    #[serde(skip)]
    pub csv: String,
}

fn default_budget(cfg: &UpperConfig, rows: usize) -> usize {
    if cfg.budget > 0 {
        return cfg.budget;
    }
    match cfg.algo {
        AlgoName::Perceptron => 10 * (rows + 1),
        AlgoName::Subgradient => 400,
        AlgoName::Agd => {
            let gamma = cfg.gamma.max(0.01);
            (100.0 * (rows.max(2) as f64).ln().sqrt() / gamma).ceil() as usize
        }
        AlgoName::MirrorProx => 200,
        AlgoName::Null => 1,
    }
}

fn run_one_seed(cfg: &UpperConfig, seed: u64) -> Result<CurveRow> {
    let started = Instant::now();
    let a = match cfg.source {
        UpperSource::Adversarial => adversarial_margin_instance(cfg.t, cfg.d, seed)?,
        UpperSource::Planted => planted_margin_instance(cfg.n, cfg.d, cfg.gamma, seed)?.0,
    };
    let budget = default_budget(cfg, a.rows());
    let mut oracle = DenseOracle::new(&a);
    let d = a.cols();
    let n = a.rows();
    let (report, updates) = match cfg.algo {
        AlgoName::Perceptron => {
            let report = perceptron(&mut oracle, d, budget).map_err(|e| anyhow!("{e}"))?;
            let updates = if report.terminated_early {
                report.oracle_calls - 1
            } else {
                report.oracle_calls
            };
            (report, Some(updates))
        }
        AlgoName::Subgradient => (
            subgradient_method(&mut oracle, d, budget).map_err(|e| anyhow!("{e}"))?,
            None,
        ),
        AlgoName::Agd => {
            let mu = match cfg.mu {
                Some(mu) => mu,
                None => {
                    SmoothingConfig::for_target(cfg.gamma.max(0.01), n)
                        .map_err(|e| anyhow!("{e}"))?
                        .mu
                }
            };
            let smoothing = SmoothingConfig::new(mu, n).map_err(|e| anyhow!("{e}"))?;
            (
                agd_smoothed(&mut oracle, n, d, budget, smoothing).map_err(|e| anyhow!("{e}"))?,
                None,
            )
        }
        AlgoName::MirrorProx => {
            let (report, _) = mirror_prox(&mut oracle, n, d, budget).map_err(|e| anyhow!("{e}"))?;
            (report, None)
        }
        AlgoName::Null => bail!("the null algorithm has no rate to measure"),
    };
    let (final_value, _) = a.min_payoff(&report.final_w)?;
    let converged_at = match cfg.algo {
        AlgoName::Perceptron => report.terminated_early.then(|| updates.unwrap()),
        AlgoName::MirrorProx => None,
        _ => report
            .per_iteration_values
            .iter()
            .position(|v| *v > 0.0)
            .map(|i| i + 1),
    };
    Ok(CurveRow {
        seed,
        values: report.per_iteration_values,
        final_value,
        oracle_calls: report.oracle_calls,
        converged_at,
        updates,
        wall_clock_s: started.elapsed().as_secs_f64(),
    })
}

pub fn run_upper_rate(cfg: &UpperConfig) -> Result<UpperSummary> {
    let started = Instant::now();
    let seeds = cfg.seed_list()?;
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in &seeds {
        rows.push(run_one_seed(cfg, seed)?);
    }
    let converged = rows
        .iter()
        .filter(|r| r.converged_at.is_some() || r.final_value > 0.0)
        .count();
    let summary = UpperSummary {
        config: cfg.clone(),
        success_fraction: converged as f64 / rows.len().max(1) as f64,
        wall_clock_s: started.elapsed().as_secs_f64(),
        csv: upper_csv(&rows),
        rows,
    };
    write_if_some(&cfg.out_csv, &summary.csv)?;
    write_json_if_some(&cfg.out_json, &summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg(algo: AlgoName, source: UpperSource) -> UpperConfig {
        UpperConfig {
            algo,
            source,
            t: 8,
            n: 16,
            d: 24,
            gamma: 0.1,
            budget: 0,
            seeds: (0, 4),
            mu: None,
            out_csv: None,
            out_json: None,
        }
    }

    #[test]
    fn perceptron_on_adversarial_matrices_meets_novikoff() {
        let cfg = base_cfg(AlgoName::Perceptron, UpperSource::Adversarial);
        let summary = run_upper_rate(&cfg).unwrap();
        assert_eq!(summary.success_fraction, 1.0);
        for row in &summary.rows {
            assert!(row.updates.unwrap() <= cfg.t + 1);
        }
    }

    #[test]
    fn subgradient_on_planted_instance_converges() {
        let mut cfg = base_cfg(AlgoName::Subgradient, UpperSource::Planted);
        cfg.gamma = 0.3;
        cfg.budget = 200;
        let summary = run_upper_rate(&cfg).unwrap();
        assert!(
            summary.success_fraction >= 0.8,
            "{}",
            summary.success_fraction
        );
    }

    #[test]
    fn agd_on_planted_instance_separates() {
        let mut cfg = base_cfg(AlgoName::Agd, UpperSource::Planted);
        cfg.n = 64;
        cfg.d = 16;
        let summary = run_upper_rate(&cfg).unwrap();
        assert_eq!(summary.success_fraction, 1.0);
        for row in &summary.rows {
            assert!(row.converged_at.is_some());
        }
    }

    #[test]
    fn mirror_prox_gap_shrinks_with_budget() {
        let mut wins = 0;
        for seed in 0..10u64 {
            let mut cfg = base_cfg(AlgoName::MirrorProx, UpperSource::Planted);
            cfg.n = 16;
            cfg.d = 16;
            cfg.seeds = (seed, seed);
            cfg.budget = 50;
            let short = run_upper_rate(&cfg).unwrap();
            cfg.budget = 200;
            let long = run_upper_rate(&cfg).unwrap();
            let g_short = *short.rows[0].values.last().unwrap();
            let g_long = *long.rows[0].values.last().unwrap();
            if g_long <= g_short {
                wins += 1;
            }
        }
        assert!(wins >= 6, "{wins}/10");
    }
}
