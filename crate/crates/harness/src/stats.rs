//! Monte Carlo checks for the projected-Gaussian tail bounds and the
//! positive-semidefiniteness threshold scan.

use anyhow::{bail, Result};
use serde::Serialize;

use matgame_core::ortho::OrthoBasis;
use matgame_core::rng::GaussianStream;
use matgame_core::spectral::tridiag_psd_margin;
use matgame_core::vecmath;

use crate::config::{PsdConfig, StatConfig};
use crate::report::write_json_if_some;

#[derive(Debug, Clone, Serialize)]
pub struct StatZRow {
    pub z: f64,
    pub emp_inf: f64,
    pub bound_inf: f64,
    pub slack_inf: f64,
    pub pass_inf: bool,
    pub emp_ratio: Option<f64>,
    pub bound_ratio: Option<f64>,
    pub slack_ratio: Option<f64>,
    pub pass_ratio: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct StatReport {
    pub config: StatConfig,
    pub rows: Vec<StatZRow>,
    pub all_pass: bool,
}

fn three_sigma(bound: f64, trials: usize) -> f64 {
    let p = bound.clamp(0.0, 1.0);
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Samples x = β(I − MMᵀ)ξ for a seeded random orthonormal M and compares
/// the empirical tail frequencies of ‖x‖∞ (and of the normalized ratio
/// ‖x‖∞/‖x‖₂ when the basis spans less than half the space) against their
/// theoretical bounds, passing when every empirical frequency stays within
/// three binomial standard deviations of its bound.
pub fn stat_test_projected_gaussian(cfg: &StatConfig) -> Result<StatReport> {
    if cfg.basis_size > cfg.q {
        bail!("basis size {} exceeds dimension {}", cfg.basis_size, cfg.q);
    }
    if cfg.trials == 0 {
        bail!("trials must be positive");
    }
    if cfg.z_list.is_empty() || cfg.z_list.iter().any(|z| *z <= 0.0) {
        bail!("z values must be positive");
    }
    if cfg.beta.is_nan() || cfg.beta < 0.0 {
        bail!("beta must be nonnegative");
    }
    let ratio_active = 2 * cfg.basis_size < cfg.q;
    let mut rng = GaussianStream::new(cfg.seed);
    let mut basis = OrthoBasis::new(cfg.q);
    while basis.len() < cfg.basis_size {
        let x = rng.normal_vector(cfg.q);
        basis.insert(&x)?;
    }
    let mut inf_hits = vec![0usize; cfg.z_list.len()];
    let mut ratio_hits = vec![0usize; cfg.z_list.len()];
    let sqrt_q = (cfg.q as f64).sqrt();
    for _ in 0..cfg.trials {
        let xi = rng.normal_vector(cfg.q);
        let mut x = basis.project_complement(&xi)?;
        vecmath::scale(cfg.beta, &mut x);
        let inf = vecmath::norm_inf(&x);
        let l2 = vecmath::norm2(&x);
        let ratio = if l2 > 0.0 { inf / l2 } else { 0.0 };
        for (i, &z) in cfg.z_list.iter().enumerate() {
            if inf >= z {
                inf_hits[i] += 1;
            }
            if ratio_active && ratio >= z / sqrt_q {
                ratio_hits[i] += 1;
            }
        }
    }
    let q = cfg.q as f64;
    let mut rows = Vec::with_capacity(cfg.z_list.len());
    let mut all_pass = true;
    for (i, &z) in cfg.z_list.iter().enumerate() {
        let emp_inf = inf_hits[i] as f64 / cfg.trials as f64;
        // beta = 0 gives x = 0 and a vanishing bound
        let bound_inf = if cfg.beta > 0.0 {
            2.0 * q * (-z * z / (2.0 * cfg.beta * cfg.beta)).exp()
        } else {
            0.0
        };
        let slack_inf = three_sigma(bound_inf, cfg.trials);
        let pass_inf = emp_inf <= bound_inf + slack_inf;
        let (emp_ratio, bound_ratio, slack_ratio, pass_ratio) = if ratio_active {
            let emp = ratio_hits[i] as f64 / cfg.trials as f64;
            let bound = 2.0 * q * (-z * z / 8.0).exp() + (-q / 48.0).exp();
            let slack = three_sigma(bound, cfg.trials);
            (
                Some(emp),
                Some(bound),
                Some(slack),
                Some(emp <= bound + slack),
            )
        } else {
            (None, None, None, None)
        };
        all_pass &= pass_inf && pass_ratio.unwrap_or(true);
        rows.push(StatZRow {
            z,
            emp_inf,
            bound_inf,
            slack_inf,
            pass_inf,
            emp_ratio,
            bound_ratio,
            slack_ratio,
            pass_ratio,
        });
    }
    let report = StatReport {
        config: cfg.clone(),
        rows,
        all_pass,
    };
    write_json_if_some(&cfg.out_json, &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdRow {
    pub t: usize,
    pub margin_at_threshold: f64,
    pub margin_above_threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct PsdReport {
    pub config: PsdConfig,
    pub rows: Vec<PsdRow>,
    pub all_pass: bool,
}

/// For every T up to the bound, the chain matrix stays positive
/// semidefinite at the critical corner perturbation 1/√T and loses
/// definiteness five percent above it.
pub fn psd_scan(cfg: &PsdConfig) -> Result<PsdReport> {
    if cfg.t_max < 2 {
        bail!("the scan needs T_max >= 2");
    }
    let mut rows = Vec::with_capacity(cfg.t_max - 1);
    let mut all_pass = true;
    for t in 2..=cfg.t_max {
        let tf = t as f64;
        let at = tridiag_psd_margin(t, 1.0 / tf.sqrt())?;
        let above = tridiag_psd_margin(t, 1.05 / tf.sqrt())?;
        let pass = at >= -1e-9 && above < 0.0;
        all_pass &= pass;
        rows.push(PsdRow {
            t,
            margin_at_threshold: at,
            margin_above_threshold: above,
            pass,
        });
    }
    let report = PsdReport {
        config: cfg.clone(),
        rows,
        all_pass,
    };
    write_json_if_some(&cfg.out_json, &report)?;
    Ok(report)
}
