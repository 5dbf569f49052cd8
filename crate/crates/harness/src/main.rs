use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use matgame_core::game::{GameInstance, NormContract, WGeometry};
use matgame_core::oracle::{replay_verify, Transcript};
use matgame_harness::config::{
    parse_config_file, parse_seed_range, AlgoName, LowerConfig, LowerMode, PsdConfig, StatConfig,
    UpperConfig, UpperSource,
};
use matgame_harness::lower::{run_lower_bound, run_single};
use matgame_harness::report::fmt_f64;
use matgame_harness::stats::{psd_scan, stat_test_projected_gaussian};
use matgame_harness::upper::run_upper_rate;

#[derive(Parser)]
#[command(
    name = "matgame",
    version,
    about = "Matrix-game laboratory: oracle models, solvers, resisting adversaries, certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Adversary-vs-solver sweep with one certificate per seed
    Lower(LowerArgs),
    /// Solver rate run on instances with a known margin
    Upper(UpperArgs),
    /// Monte Carlo check of the projected-Gaussian tail bounds
    Stat(StatArgs),
    /// Eigenvalue scan of the corner-perturbed chain matrix
    Psd(PsdArgs),
    /// Materialize one adversarial instance and its transcript
    Dump(DumpArgs),
    /// Replay a transcript against a matrix file
    Replay(ReplayArgs),
}

/// Reads `key = value` defaults from --config, letting explicit flags win.
struct Overlay {
    file: BTreeMap<String, String>,
}

impl Overlay {
    fn load(path: &Option<PathBuf>) -> Result<Self> {
        let file = match path {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        Ok(Self { file })
    }

    fn get<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow!("config key {key}: {e}")),
            None => Ok(None),
        }
    }

    fn get_flag(&self, cli: bool, key: &str) -> Result<bool> {
        if cli {
            return Ok(true);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<bool>()
                .map_err(|e| anyhow!("config key {key}: {e}")),
            None => Ok(false),
        }
    }
}

#[derive(Args)]
struct LowerArgs {
    /// Flat key = value file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// one-sided | l2 | l1
    #[arg(long)]
    mode: Option<LowerMode>,
    /// perceptron | subgradient | agd | mirror-prox | null
    #[arg(long)]
    algo: Option<AlgoName>,
    /// Oracle-call budget
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Inclusive seed range A..B (or a single seed)
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long = "tol-replay")]
    tol_replay: Option<f64>,
    #[arg(long = "tol-nonsep")]
    tol_nonsep: Option<f64>,
    #[arg(long = "tol-witness")]
    tol_witness: Option<f64>,
    /// Smoothing parameter for the accelerated algorithm
    #[arg(long)]
    mu: Option<f64>,
    /// Retry failed seeds with derived reseeds (distribution-altering,
    /// flagged in the summary)
    #[arg(long)]
    resample: bool,
    /// Probe the construction with an accelerated falsifier (reported,
    /// not gating)
    #[arg(long = "probe-nosep")]
    probe_nosep: bool,
    /// Per-seed certificate CSV
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary
    #[arg(long)]
    json: Option<PathBuf>,
}

fn lower_config(args: LowerArgs) -> Result<LowerConfig> {
    let overlay = Overlay::load(&args.config)?;
    let mode: LowerMode = overlay
        .get(args.mode, "mode")?
        .context("--mode is required (one-sided | l2 | l1)")?;
    let algo = match overlay.get(args.algo, "algo")? {
        Some(a) => a,
        None => match mode {
            LowerMode::OneSided => AlgoName::Perceptron,
            LowerMode::L2 => AlgoName::Agd,
            LowerMode::L1 => AlgoName::MirrorProx,
        },
    };
    let seeds = match overlay.get(args.seeds, "seeds")? {
        Some(s) => parse_seed_range(&s)?,
        None => (0, 19),
    };
    Ok(LowerConfig {
        mode,
        algo,
        t: overlay.get(args.t, "T")?.unwrap_or(8),
        n: overlay.get(args.n, "n")?.unwrap_or(4096),
        d: overlay.get(args.d, "d")?.unwrap_or(64),
        delta: overlay.get(args.delta, "delta")?,
        seeds,
        tol_replay: overlay.get(args.tol_replay, "tol_replay")?.unwrap_or(1e-9),
        tol_nonsep: overlay.get(args.tol_nonsep, "tol_nonsep")?,
        tol_witness: overlay
            .get(args.tol_witness, "tol_witness")?
            .unwrap_or(1e-9),
        mu: overlay.get(args.mu, "mu")?,
        resample: overlay.get_flag(args.resample, "resample")?,
        probe_nosep: overlay.get_flag(args.probe_nosep, "probe_nosep")?,
        out_csv: overlay.get(args.out, "out")?,
        out_json: overlay.get(args.json, "json")?,
    })
}

#[derive(Args)]
struct UpperArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algo: Option<AlgoName>,
    /// adversarial | planted
    #[arg(long)]
    source: Option<UpperSource>,
    /// Adversary budget for adversarial instances
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Planted margin
    #[arg(long)]
    gamma: Option<f64>,
    /// Solver iteration budget (0 = per-algorithm default)
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn upper_config(args: UpperArgs) -> Result<UpperConfig> {
    let overlay = Overlay::load(&args.config)?;
    let seeds = match overlay.get(args.seeds, "seeds")? {
        Some(s) => parse_seed_range(&s)?,
        None => (0, 9),
    };
    Ok(UpperConfig {
        algo: overlay
            .get(args.algo, "algo")?
            .unwrap_or(AlgoName::Perceptron),
        source: overlay
            .get(args.source, "source")?
            .unwrap_or(UpperSource::Adversarial),
        t: overlay.get(args.t, "T")?.unwrap_or(8),
        n: overlay.get(args.n, "n")?.unwrap_or(64),
        d: overlay.get(args.d, "d")?.unwrap_or(64),
        gamma: overlay.get(args.gamma, "gamma")?.unwrap_or(0.1),
        budget: overlay.get(args.budget, "budget")?.unwrap_or(0),
        seeds,
        mu: overlay.get(args.mu, "mu")?,
        out_csv: overlay.get(args.out, "out")?,
        out_json: overlay.get(args.json, "json")?,
    })
}

#[derive(Args)]
struct StatArgs {
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    basis: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated thresholds
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PsdArgs {
    #[arg(long = "t-max")]
    t_max: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    mode: Option<LowerMode>,
    #[arg(long)]
    algo: Option<AlgoName>,
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Matrix text output path
    #[arg(long = "matrix-out")]
    matrix_out: PathBuf,
    /// Transcript JSON output path
    #[arg(long = "transcript-out")]
    transcript_out: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    transcript: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Lower(args) => {
            let cfg = lower_config(args)?;
            let summary = run_lower_bound(&cfg)?;
            for row in &summary.rows {
                println!(
                    "seed {:>4}  geometry {:>9}  witness {:+.6e} (target {:+.6e})  output_min {:+.3e}  replay {:.3e}  norm {:.6}  {}",
                    row.seed,
                    row.geometry,
                    row.cert.witness_value,
                    row.cert.witness_target,
                    row.cert.output_min_payoff,
                    row.cert.replay_max_err,
                    row.cert.norm_stat,
                    if row.cert.all_pass { "PASS" } else { "FAIL" }
                );
            }
            println!(
                "success {}/{} = {:.3}{}  wall {:.2}s",
                summary.rows.iter().filter(|r| r.cert.all_pass).count(),
                summary.rows.len(),
                summary.success_fraction,
                if summary.resampled {
                    " (resampled)"
                } else {
                    ""
                },
                summary.wall_clock_s
            );
        }
        Cmd::Upper(args) => {
            let cfg = upper_config(args)?;
            let summary = run_upper_rate(&cfg)?;
            for row in &summary.rows {
                println!(
                    "seed {:>4}  iters {:>6}  calls {:>6}  final {:+.6e}  converged_at {:?}{}",
                    row.seed,
                    row.values.len(),
                    row.oracle_calls,
                    row.final_value,
                    row.converged_at,
                    row.updates
                        .map(|u| format!("  updates {u}"))
                        .unwrap_or_default()
                );
            }
            println!(
                "converged fraction {:.3}  wall {:.2}s",
                summary.success_fraction, summary.wall_clock_s
            );
        }
        Cmd::Stat(args) => {
            let z_list = match args.z {
                Some(s) => s
                    .split(',')
                    .map(|tok| tok.trim().parse::<f64>().context("bad z value"))
                    .collect::<Result<Vec<f64>>>()?,
                None => vec![3.0, 4.0],
            };
            let cfg = StatConfig {
                q: args.q.unwrap_or(256),
                basis_size: args.basis.unwrap_or(32),
                beta: args.beta.unwrap_or(1.0),
                trials: args.trials.unwrap_or(100_000),
                z_list,
                seed: args.seed.unwrap_or(0),
                out_json: args.json,
            };
            let report = stat_test_projected_gaussian(&cfg)?;
            for row in &report.rows {
                println!(
                    "z {:>5.2}  inf: emp {:.6e} <= bound {:.6e} + {:.2e} -> {}{}",
                    row.z,
                    row.emp_inf,
                    row.bound_inf,
                    row.slack_inf,
                    if row.pass_inf { "PASS" } else { "FAIL" },
                    match (row.emp_ratio, row.bound_ratio, row.pass_ratio) {
                        (Some(e), Some(b), Some(p)) => format!(
                            "   ratio: emp {:.6e} <= bound {:.6e} -> {}",
                            e,
                            b,
                            if p { "PASS" } else { "FAIL" }
                        ),
                        _ => String::new(),
                    }
                );
            }
            println!("all_pass {}", report.all_pass);
            if !report.all_pass {
                std::process::exit(1);
            }
        }
        Cmd::Psd(args) => {
            let cfg = PsdConfig {
                t_max: args.t_max.unwrap_or(64),
                out_json: args.json,
            };
            let report = psd_scan(&cfg)?;
            for row in &report.rows {
                println!(
                    "T {:>3}  margin(1/sqrt(T)) {:+.3e}  margin(1.05/sqrt(T)) {:+.3e}  {}",
                    row.t,
                    row.margin_at_threshold,
                    row.margin_above_threshold,
                    if row.pass { "PASS" } else { "FAIL" }
                );
            }
            println!("all_pass {}", report.all_pass);
            if !report.all_pass {
                std::process::exit(1);
            }
        }
        Cmd::Dump(args) => {
            let mode = args.mode.unwrap_or(LowerMode::L2);
            let algo = args.algo.unwrap_or(match mode {
                LowerMode::OneSided => AlgoName::Perceptron,
                LowerMode::L2 => AlgoName::Agd,
                LowerMode::L1 => AlgoName::MirrorProx,
            });
            let seed = args.seed.unwrap_or(0);
            let cfg = LowerConfig {
                mode,
                algo,
                t: args.t.unwrap_or(8),
                n: args.n.unwrap_or(4096),
                d: args.d.unwrap_or(64),
                delta: args.delta,
                seeds: (seed, seed),
                tol_replay: 1e-9,
                tol_nonsep: None,
                tol_witness: 1e-9,
                mu: args.mu,
                resample: false,
                probe_nosep: false,
                out_csv: None,
                out_json: None,
            };
            let (instance, transcript, row) = run_single(&cfg, seed)?;
            instance.save_text(&args.matrix_out)?;
            transcript.save_json(&args.transcript_out)?;
            println!(
                "wrote {}x{} matrix to {} and {}-record transcript to {}",
                instance.rows(),
                instance.cols(),
                args.matrix_out.display(),
                transcript.records.len(),
                args.transcript_out.display()
            );
            println!(
                "witness {} (target {})  output_min {}  all_pass {}",
                fmt_f64(row.cert.witness_value),
                fmt_f64(row.cert.witness_target),
                fmt_f64(row.cert.output_min_payoff),
                row.cert.all_pass
            );
        }
        Cmd::Replay(args) => {
            let a = GameInstance::load_text(&args.matrix, WGeometry::L2Ball, NormContract::None)?;
            let transcript = Transcript::load_json(&args.transcript)?;
            let tol = args.tol.unwrap_or(1e-9);
            let (max_err, pass) = replay_verify(&a, &transcript, tol)?;
            println!(
                "replay_max_err {}  tol {}  {}",
                fmt_f64(max_err),
                fmt_f64(tol),
                if pass { "PASS" } else { "FAIL" }
            );
            if !pass {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
