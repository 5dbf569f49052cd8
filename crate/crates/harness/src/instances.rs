//! Instance sources for rate experiments.

use anyhow::{anyhow, Result};

use matgame_core::adversary::{CertTolerances, OneSidedAdversary};
use matgame_core::game::{GameInstance, NormContract, WGeometry};
use matgame_core::oracle::{drive_interaction, Algorithm, Query, Response};
use matgame_core::rng::GaussianStream;
use matgame_core::vecmath;

/// Random unit rows pinned to payoff exactly `gamma` against a hidden unit
/// direction, so the margin is at least `gamma` and a known witness
/// attains it.
pub fn planted_margin_instance(
    n: usize,
    d: usize,
    gamma: f64,
    seed: u64,
) -> Result<(GameInstance, Vec<f64>)> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(anyhow!("planted margin must lie in [0,1), got {gamma}"));
    }
    if d < 2 {
        return Err(anyhow!("planted instances need d >= 2"));
    }
    let mut rng = GaussianStream::new(seed);
    let mut star = rng.normal_vector(d);
    let norm = vecmath::norm2(&star).max(1e-12);
    vecmath::scale(1.0 / norm, &mut star);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut g = rng.normal_vector(d);
        let c = vecmath::dot(&g, &star);
        vecmath::axpy(-c, &star, &mut g);
        let gn = vecmath::norm2(&g).max(1e-12);
        vecmath::scale((1.0 - gamma * gamma).sqrt() / gn, &mut g);
        vecmath::axpy(gamma, &star, &mut g);
        rows.push(g);
    }
    let a = GameInstance::from_rows(&rows, WGeometry::L2Ball, NormContract::UnitRows)?;
    Ok((a, star))
}

/// Seeded driver issuing random one-sided queries; its only job is to make
/// the adversary commit to different matrices per seed.
pub struct RandomQueryAlg {
    rng: GaussianStream,
    n: usize,
    d: usize,
}

impl RandomQueryAlg {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        Self {
            rng: GaussianStream::new(seed),
            n,
            d,
        }
    }
}

impl Algorithm for RandomQueryAlg {
    fn next_query(&mut self) -> Query {
        let l = self.rng.index(self.n);
        let mut w = self.rng.normal_vector(self.d);
        let norm = vecmath::norm2(&w).max(1e-12);
        vecmath::scale(1.0 / norm, &mut w);
        Query::OneSided { l, w }
    }

    fn observe(&mut self, _r: &Response) {}

    fn final_output(&self) -> Vec<f64> {
        vec![0.0; self.d]
    }
}

/// Runs the one-sided adversary against a seeded random-query driver and
/// returns the finalized matrix: T+1 mutually orthonormal rows with margin
/// exactly 1/sqrt(T+1).
pub fn adversarial_margin_instance(t: usize, d: usize, seed: u64) -> Result<GameInstance> {
    let mut adv = OneSidedAdversary::new(t, d)?;
    let mut alg = RandomQueryAlg::new(t + 1, d, seed);
    let transcript = drive_interaction(&mut alg, &mut adv, t).map_err(|e| anyhow!("{e}"))?;
    let (a, cert) = adv.finalize(&transcript, CertTolerances::one_sided())?;
    if !cert.all_pass {
        return Err(anyhow!("adversarial instance failed its own certificate"));
    }
    Ok(a)
}
