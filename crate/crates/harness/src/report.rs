//! Deterministic CSV and JSON emission. The CSV is the single source of
//! truth for sweep results; identical configs and seeds must produce
//! byte-identical files.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// 17 significant digits: enough to reconstruct the exact double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const LOWER_CSV_HEADER: &str = "seed,T,n,d,delta,alpha,beta,geometry,replay_max_err,norm_stat,witness_value,witness_target,output_min_payoff,all_pass";

/// One finalized adversary run.
#[derive(Debug, Clone, Serialize)]
pub struct CertRow {
    pub seed: u64,
    pub t: usize,
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub geometry: String,
    pub cert: matgame_core::adversary::Certificate,
    pub resample_attempts: u32,
    pub falsifier_value: Option<f64>,
    pub wall_clock_s: f64,
}

impl CertRow {
    pub fn to_csv_line(&self) -> String {
        let c = &self.cert;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.t,
            self.n,
            self.d,
            fmt_f64(self.delta),
            fmt_f64(self.alpha),
            fmt_f64(self.beta),
            self.geometry,
            fmt_f64(c.replay_max_err),
            fmt_f64(c.norm_stat),
            fmt_f64(c.witness_value),
            fmt_f64(c.witness_target),
            fmt_f64(c.output_min_payoff),
            c.all_pass
        )
    }
}

pub fn lower_csv(rows: &[CertRow]) -> String {
    let mut out = String::from(LOWER_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

pub const UPPER_CSV_HEADER: &str = "seed,iter,value";

/// One per-iteration value curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub seed: u64,
    pub values: Vec<f64>,
    pub final_value: f64,
    pub oracle_calls: usize,
    pub converged_at: Option<usize>,
    pub updates: Option<usize>,
    pub wall_clock_s: f64,
}

pub fn upper_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from(UPPER_CSV_HEADER);
    out.push('\n');
    for row in rows {
        for (i, v) in row.values.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", row.seed, i + 1, fmt_f64(*v)));
        }
    }
    out
}

pub fn write_if_some(path: &Option<std::path::PathBuf>, contents: &str) -> Result<()> {
    if let Some(path) = path {
        write_text(path, contents)?;
    }
    Ok(())
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json_if_some<T: Serialize>(
    path: &Option<std::path::PathBuf>,
    value: &T,
) -> Result<()> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).context("serializing summary")?;
        write_text(path, &text)?;
    }
    Ok(())
}
