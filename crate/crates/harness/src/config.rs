//! Experiment configuration shared by the CLI and the test suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use matgame_core::adversary::AdvGeometry;

/// Experiment family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMode {
    OneSided,
    L2,
    L1,
}

impl LowerMode {
    pub fn geometry(&self) -> Option<AdvGeometry> {
        match self {
            LowerMode::OneSided => None,
            LowerMode::L2 => Some(AdvGeometry::L2),
            LowerMode::L1 => Some(AdvGeometry::L1),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LowerMode::OneSided => "one_sided",
            LowerMode::L2 => "l2",
            LowerMode::L1 => "l1",
        }
    }
}

impl std::str::FromStr for LowerMode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "one_sided" | "onesided" => Ok(LowerMode::OneSided),
            "l2" => Ok(LowerMode::L2),
            "l1" => Ok(LowerMode::L1),
            other => bail!("unknown lower-bound mode {other:?} (one-sided | l2 | l1)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgoName {
    Perceptron,
    Subgradient,
    Agd,
    MirrorProx,
    /// Queries p = w = 0 every round; useful for smoke runs.
    Null,
}

impl AlgoName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgoName::Perceptron => "perceptron",
            AlgoName::Subgradient => "subgradient",
            AlgoName::Agd => "agd",
            AlgoName::MirrorProx => "mirror_prox",
            AlgoName::Null => "null",
        }
    }
}

impl std::str::FromStr for AlgoName {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "perceptron" => Ok(AlgoName::Perceptron),
            "subgradient" => Ok(AlgoName::Subgradient),
            "agd" | "agd_smoothed" => Ok(AlgoName::Agd),
            "mirror_prox" | "mirrorprox" => Ok(AlgoName::MirrorProx),
            "null" => Ok(AlgoName::Null),
            other => bail!(
                "unknown algorithm {other:?} (perceptron | subgradient | agd | mirror-prox | null)"
            ),
        }
    }
}

/// Lower-bound sweep: one adversary + one algorithm per seed.
#[derive(Debug, Clone, Serialize)]
pub struct LowerConfig {
    pub mode: LowerMode,
    pub algo: AlgoName,
    pub t: usize,
    pub n: usize,
    pub d: usize,
    /// Defaults to 1/10 (l2) or 1/(50T) (l1) when absent.
    pub delta: Option<f64>,
    /// Inclusive seed range.
    pub seeds: (u64, u64),
    pub tol_replay: f64,
    /// Defaults to 1e-12 for the one-sided mode, 1e-9 otherwise.
    pub tol_nonsep: Option<f64>,
    pub tol_witness: f64,
    /// Smoothing parameter for the accelerated algorithm; defaults to a
    /// 0.1 target accuracy.
    pub mu: Option<f64>,
    pub resample: bool,
    /// Probe the finalized construction with an accelerated falsifier and
    /// report (never gate on) the best payoff it finds.
    pub probe_nosep: bool,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl LowerConfig {
    pub fn seed_list(&self) -> Result<Vec<u64>> {
        seed_list(self.seeds)
    }
}

/// Instance source for rate runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperSource {
    /// Matrices finalized by the one-sided adversary against a seeded
    /// random-query driver: T+1 orthonormal rows, margin 1/sqrt(T+1).
    Adversarial,
    /// Random unit rows with a planted margin.
    Planted,
}

impl std::str::FromStr for UpperSource {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adversarial" | "one-sided" => Ok(UpperSource::Adversarial),
            "planted" => Ok(UpperSource::Planted),
            other => bail!("unknown instance source {other:?} (adversarial | planted)"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperConfig {
    pub algo: AlgoName,
    pub source: UpperSource,
    /// Instance scale: adversary budget (adversarial) or row count is n
    /// (planted).
    pub t: usize,
    pub n: usize,
    pub d: usize,
    /// Planted margin.
    pub gamma: f64,
    /// Solver budget; 0 selects a per-algorithm default.
    pub budget: usize,
    pub seeds: (u64, u64),
    pub mu: Option<f64>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl UpperConfig {
    pub fn seed_list(&self) -> Result<Vec<u64>> {
        seed_list(self.seeds)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatConfig {
    pub q: usize,
    pub basis_size: usize,
    pub beta: f64,
    pub trials: usize,
    pub z_list: Vec<f64>,
    pub seed: u64,
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdConfig {
    pub t_max: usize,
    pub out_json: Option<PathBuf>,
}

fn seed_list(range: (u64, u64)) -> Result<Vec<u64>> {
    let (lo, hi) = range;
    if hi < lo {
        bail!("empty seed range {lo}..{hi}");
    }
    Ok((lo..=hi).collect())
}

/// Parses `A..B` (inclusive) or a single seed `A`.
pub fn parse_seed_range(s: &str) -> Result<(u64, u64)> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a.trim().parse().context("bad seed range start")?;
        let hi: u64 = b.trim().parse().context("bad seed range end")?;
        Ok((lo, hi))
    } else {
        let v: u64 = s.trim().parse().context("bad seed")?;
        Ok((v, v))
    }
}

/// Flat `key = value` config file; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {} is not `key = value`: {raw:?}", idx + 1);
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}
