//! First-order solvers, each written against the weakest oracle it needs.
//!
//! Every solver is a deterministic state machine implementing
//! [`Algorithm`](crate::oracle::Algorithm), so it can be driven against a
//! dense oracle or against a resisting adversary through the same
//! interaction loop. The free functions wrap the state machines and
//! assemble a [`SolverReport`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{drive_interaction, Algorithm, Oracle, Query, Response};
use crate::vecmath;

/// Outcome of one solver run.
#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    pub final_w: Vec<f64>,
    pub logical_iterations: usize,
    pub oracle_calls: usize,
    /// One entry per logical iteration: the min payoff (ball solvers) or
    /// the duality gap of the running averages (mirror prox).
    pub per_iteration_values: Vec<f64>,
    pub terminated_early: bool,
}

/// log-sum-exp smoothing parameters for the min operator over n rows.
#[derive(Debug, Clone, Copy)]
pub struct SmoothingConfig {
    pub mu: f64,
    pub n: usize,
}

impl SmoothingConfig {
    pub fn new(mu: f64, n: usize) -> Result<Self> {
        if mu.is_nan() || mu <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "mu must be positive, got {mu}"
            )));
        }
        Ok(Self { mu, n })
    }

    /// mu = eps / (2 ln n), the choice that makes the smoothing error at
    /// most eps/2.
    pub fn for_target(eps: f64, n: usize) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "eps must be positive, got {eps}"
            )));
        }
        Self::new(eps / (2.0 * (n.max(2) as f64).ln()), n)
    }

    /// Gradient Lipschitz constant of the smoothed composite under unit
    /// rows.
    pub fn lipschitz(&self) -> f64 {
        1.0 / self.mu
    }
}

/// Smoothed minimum of a payoff vector: −μ·log Σ exp(−zₗ/μ), evaluated
/// with max-shift stabilization, plus the softmin weights. The gradient of
/// w ↦ value is Aᵀ·weights, which the caller assembles with a second
/// two-sided query.
pub fn smoothed_value_grad(aw: &[f64], cfg: &SmoothingConfig) -> Result<(f64, Vec<f64>)> {
    if aw.len() != cfg.n {
        return Err(Error::DimensionMismatch {
            context: "smoothed_value_grad",
            expected: cfg.n,
            got: aw.len(),
        });
    }
    if cfg.mu.is_nan() || cfg.mu <= 0.0 {
        return Err(Error::InvalidParam("mu must be positive".into()));
    }
    let m = aw.iter().fold(f64::INFINITY, |acc, v| acc.min(*v));
    let mut weights: Vec<f64> = aw.iter().map(|z| (-(z - m) / cfg.mu).exp()).collect();
    let total: f64 = weights.iter().sum();
    for q in weights.iter_mut() {
        *q /= total;
    }
    Ok((m - cfg.mu * total.ln(), weights))
}

fn project_l2_ball(w: &mut [f64]) {
    let norm = vecmath::norm2(w);
    if norm > 1.0 {
        vecmath::scale(1.0 / norm, w);
    }
}

/// Multiplicative-weights prox step on the simplex: x ⊙ exp(step), with
/// max-shift stabilized exponentials, renormalized to unit mass.
fn mw_step(x: &[f64], step: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), step.len());
    let shift = step.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let mut out: Vec<f64> = x
        .iter()
        .zip(step)
        .map(|(xi, si)| xi * (si - shift).exp())
        .collect();
    let total: f64 = out.iter().sum();
    for v in out.iter_mut() {
        *v = (*v / total).max(0.0);
    }
    out
}

fn uniform(len: usize) -> Vec<f64> {
    vec![1.0 / len as f64; len]
}

// ---------------------------------------------------------------------------
// Perceptron
// ---------------------------------------------------------------------------

/// Classical perceptron against a supergradient oracle: add the returned
/// row while its payoff is nonpositive, stop as soon as the current point
/// separates it.
pub struct PerceptronAlg {
    w: Vec<f64>,
    updates: usize,
    max_updates: usize,
    separated: bool,
    values: Vec<f64>,
}

impl PerceptronAlg {
    pub fn new(d: usize) -> Self {
        Self::with_budget(d, usize::MAX)
    }

    pub fn with_budget(d: usize, max_updates: usize) -> Self {
        Self {
            w: vec![0.0; d],
            updates: 0,
            max_updates,
            separated: false,
            values: Vec::new(),
        }
    }

    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn separated(&self) -> bool {
        self.separated
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Algorithm for PerceptronAlg {
    fn next_query(&mut self) -> Query {
        Query::Supergradient { w: self.w.clone() }
    }

    fn observe(&mut self, r: &Response) {
        let Response::Supergradient { row } = r else {
            panic!("perceptron expects supergradient responses");
        };
        let payoff = vecmath::dot(row, &self.w);
        self.values.push(payoff);
        if payoff > 0.0 {
            self.separated = true;
        } else {
            vecmath::axpy(1.0, row, &mut self.w);
            self.updates += 1;
        }
    }

    fn final_output(&self) -> Vec<f64> {
        if self.separated {
            let norm = vecmath::norm2(&self.w);
            let mut out = self.w.clone();
            if norm > 0.0 {
                vecmath::scale(1.0 / norm, &mut out);
            }
            out
        } else {
            self.w.clone()
        }
    }

    fn done(&self) -> bool {
        self.separated || self.updates >= self.max_updates
    }
}

/// Runs the perceptron until it finds a separator or spends `max_updates`
/// row additions. On early termination the normalized final point has
/// strictly positive minimum payoff.
pub fn perceptron(oracle: &mut dyn Oracle, d: usize, max_updates: usize) -> Result<SolverReport> {
    if max_updates == 0 {
        return Err(Error::InvalidParam("max_updates must be at least 1".into()));
    }
    let mut alg = PerceptronAlg::with_budget(d, max_updates);
    let transcript =
        drive_interaction(&mut alg, oracle, max_updates.saturating_add(1)).map_err(|a| a.error)?;
    Ok(SolverReport {
        final_w: transcript.final_output,
        logical_iterations: transcript.records.len(),
        oracle_calls: transcript.records.len(),
        per_iteration_values: alg.values.clone(),
        terminated_early: alg.separated,
    })
}

// ---------------------------------------------------------------------------
// Projected subgradient ascent
// ---------------------------------------------------------------------------

/// Projected supergradient ascent on f(w) = min_l (Aw)_l over the unit
/// Euclidean ball, fixed step 1/√T, averaged iterate returned.
pub struct SubgradientAlg {
    w: Vec<f64>,
    sum_w: Vec<f64>,
    count: usize,
    eta: f64,
    values: Vec<f64>,
}

impl SubgradientAlg {
    pub fn new(d: usize, total_rounds: usize) -> Self {
        Self {
            w: vec![0.0; d],
            sum_w: vec![0.0; d],
            count: 0,
            eta: 1.0 / (total_rounds.max(1) as f64).sqrt(),
            values: Vec::new(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Algorithm for SubgradientAlg {
    fn next_query(&mut self) -> Query {
        Query::Supergradient { w: self.w.clone() }
    }

    fn observe(&mut self, r: &Response) {
        let Response::Supergradient { row } = r else {
            panic!("subgradient method expects supergradient responses");
        };
        self.values.push(vecmath::dot(row, &self.w));
        vecmath::axpy(1.0, &self.w, &mut self.sum_w);
        self.count += 1;
        vecmath::axpy(self.eta, row, &mut self.w);
        project_l2_ball(&mut self.w);
    }

    fn final_output(&self) -> Vec<f64> {
        if self.count == 0 {
            return self.w.clone();
        }
        let mut avg = self.sum_w.clone();
        vecmath::scale(1.0 / self.count as f64, &mut avg);
        avg
    }
}

pub fn subgradient_method(
    oracle: &mut dyn Oracle,
    d: usize,
    rounds: usize,
) -> Result<SolverReport> {
    if rounds == 0 {
        return Err(Error::InvalidParam("rounds must be at least 1".into()));
    }
    let mut alg = SubgradientAlg::new(d, rounds);
    let transcript = drive_interaction(&mut alg, oracle, rounds).map_err(|a| a.error)?;
    Ok(SolverReport {
        final_w: transcript.final_output,
        logical_iterations: transcript.records.len(),
        oracle_calls: transcript.records.len(),
        per_iteration_values: alg.values.clone(),
        terminated_early: false,
    })
}

// ---------------------------------------------------------------------------
// Accelerated ascent on the smoothed objective
// ---------------------------------------------------------------------------

/// Nesterov's three-sequence accelerated scheme on the log-sum-exp
/// smoothed objective over the unit Euclidean ball.
///
/// Every iterate stays inside the ball: the lookahead point is a convex
/// combination of projected points. One logical iteration spends two
/// two-sided calls: (0, y) to read A·y and form the softmin weights, then
/// (weights, x) to read the gradient row combination and, for free, the
/// payoff of the current primal point.
pub struct AgdAlg {
    n: usize,
    mu: f64,
    x: Vec<f64>,
    z: Vec<f64>,
    y: Vec<f64>,
    k: usize,
    phase_b: bool,
    weights: Vec<f64>,
    best_value: f64,
    best_w: Vec<f64>,
    values: Vec<f64>,
}

impl AgdAlg {
    pub fn new(n: usize, d: usize, cfg: SmoothingConfig) -> Self {
        let zero = vec![0.0; d];
        // smoothed value at the origin is -mu log n
        let prior = -cfg.mu * (n as f64).ln();
        Self {
            n,
            mu: cfg.mu,
            x: zero.clone(),
            z: zero.clone(),
            y: zero.clone(),
            k: 0,
            phase_b: false,
            weights: Vec::new(),
            best_value: prior,
            best_w: zero,
            values: Vec::new(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn consider(&mut self, value: f64, w: &[f64]) {
        if value > self.best_value {
            self.best_value = value;
            self.best_w = w.to_vec();
        }
    }
}

impl Algorithm for AgdAlg {
    fn next_query(&mut self) -> Query {
        if self.phase_b {
            Query::TwoSided {
                p: self.weights.clone(),
                w: self.x.clone(),
            }
        } else {
            let tau = 2.0 / (self.k as f64 + 2.0);
            let mut y = vec![0.0; self.x.len()];
            vecmath::axpy(1.0 - tau, &self.x, &mut y);
            vecmath::axpy(tau, &self.z, &mut y);
            self.y = y.clone();
            Query::TwoSided {
                p: vec![0.0; self.n],
                w: y,
            }
        }
    }

    fn observe(&mut self, r: &Response) {
        let Response::TwoSided { aw, pta } = r else {
            panic!("accelerated method expects two-sided responses");
        };
        let cfg = SmoothingConfig {
            mu: self.mu,
            n: self.n,
        };
        if !self.phase_b {
            let (value, weights) =
                smoothed_value_grad(aw, &cfg).expect("response length matches row count");
            self.values
                .push(aw.iter().fold(f64::INFINITY, |m, v| m.min(*v)));
            let y = self.y.clone();
            self.consider(value, &y);
            self.weights = weights;
            self.phase_b = true;
        } else {
            let (value_x, _) =
                smoothed_value_grad(aw, &cfg).expect("response length matches row count");
            let x = self.x.clone();
            self.consider(value_x, &x);
            let grad = pta;
            let lipschitz = 1.0 / self.mu;
            let mut x_next = self.y.clone();
            vecmath::axpy(1.0 / lipschitz, grad, &mut x_next);
            project_l2_ball(&mut x_next);
            let weight = (self.k as f64 + 1.0) / (2.0 * lipschitz);
            vecmath::axpy(weight, grad, &mut self.z);
            project_l2_ball(&mut self.z);
            self.x = x_next;
            self.k += 1;
            self.phase_b = false;
        }
    }

    fn final_output(&self) -> Vec<f64> {
        self.best_w.clone()
    }
}

/// Accelerated ascent of the smoothed objective; `iterations` logical
/// steps, two oracle calls each. Assumes the instance honors unit rows so
/// the smoothed gradient is (1/μ)-Lipschitz. Returns the best iterate by
/// smoothed value.
pub fn agd_smoothed(
    oracle: &mut dyn Oracle,
    n: usize,
    d: usize,
    iterations: usize,
    cfg: SmoothingConfig,
) -> Result<SolverReport> {
    let mut alg = AgdAlg::new(n, d, cfg);
    let transcript = drive_interaction(&mut alg, oracle, 2 * iterations).map_err(|a| a.error)?;
    Ok(SolverReport {
        final_w: transcript.final_output,
        logical_iterations: alg.values.len(),
        oracle_calls: transcript.records.len(),
        per_iteration_values: alg.values.clone(),
        terminated_early: false,
    })
}

// ---------------------------------------------------------------------------
// Mirror prox
// ---------------------------------------------------------------------------

/// Entropy-setup extragradient on Δ^{d-1} × Δ^{n-1} with multiplicative
/// weights prox steps, fixed stepsize 1/2 (valid once max |A_ij| ≤ 1).
/// Returns averaged extrapolation iterates; the duality gap of the running
/// averages is assembled purely from oracle responses.
pub struct MirrorProxAlg {
    eta: f64,
    w: Vec<f64>,
    p: Vec<f64>,
    w_hat: Vec<f64>,
    p_hat: Vec<f64>,
    phase_update: bool,
    sum_w_hat: Vec<f64>,
    sum_p_hat: Vec<f64>,
    sum_aw_hat: Vec<f64>,
    sum_pta_hat: Vec<f64>,
    completed: usize,
    gaps: Vec<f64>,
}

impl MirrorProxAlg {
    pub fn new(n: usize, d: usize) -> Self {
        Self::with_step(n, d, 0.5)
    }

    pub fn with_step(n: usize, d: usize, eta: f64) -> Self {
        Self {
            eta,
            w: uniform(d),
            p: uniform(n),
            w_hat: uniform(d),
            p_hat: uniform(n),
            phase_update: false,
            sum_w_hat: vec![0.0; d],
            sum_p_hat: vec![0.0; n],
            sum_aw_hat: vec![0.0; n],
            sum_pta_hat: vec![0.0; d],
            completed: 0,
            gaps: Vec::new(),
        }
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn averaged_p(&self) -> Vec<f64> {
        if self.completed == 0 {
            return self.p.clone();
        }
        let mut avg = self.sum_p_hat.clone();
        vecmath::scale(1.0 / self.completed as f64, &mut avg);
        avg
    }
}

impl Algorithm for MirrorProxAlg {
    fn next_query(&mut self) -> Query {
        if self.phase_update {
            Query::TwoSided {
                p: self.p_hat.clone(),
                w: self.w_hat.clone(),
            }
        } else {
            Query::TwoSided {
                p: self.p.clone(),
                w: self.w.clone(),
            }
        }
    }

    fn observe(&mut self, r: &Response) {
        let Response::TwoSided { aw, pta } = r else {
            panic!("mirror prox expects two-sided responses");
        };
        let ascent: Vec<f64> = pta.iter().map(|v| self.eta * v).collect();
        let descent: Vec<f64> = aw.iter().map(|v| -self.eta * v).collect();
        if !self.phase_update {
            self.w_hat = mw_step(&self.w, &ascent);
            self.p_hat = mw_step(&self.p, &descent);
            self.phase_update = true;
        } else {
            self.w = mw_step(&self.w, &ascent);
            self.p = mw_step(&self.p, &descent);
            vecmath::axpy(1.0, &self.w_hat, &mut self.sum_w_hat);
            vecmath::axpy(1.0, &self.p_hat, &mut self.sum_p_hat);
            vecmath::axpy(1.0, aw, &mut self.sum_aw_hat);
            vecmath::axpy(1.0, pta, &mut self.sum_pta_hat);
            self.completed += 1;
            let inv = 1.0 / self.completed as f64;
            let best_col = self
                .sum_pta_hat
                .iter()
                .fold(f64::NEG_INFINITY, |m, v| m.max(*v * inv));
            let worst_row = self
                .sum_aw_hat
                .iter()
                .fold(f64::INFINITY, |m, v| m.min(*v * inv));
            self.gaps.push(best_col - worst_row);
            self.phase_update = false;
        }
    }

    fn final_output(&self) -> Vec<f64> {
        if self.completed == 0 {
            return self.w.clone();
        }
        let mut avg = self.sum_w_hat.clone();
        vecmath::scale(1.0 / self.completed as f64, &mut avg);
        avg
    }
}

/// Mirror prox for simplex/simplex games; `iterations` logical steps, two
/// oracle calls each. Also returns the averaged dual strategy.
pub fn mirror_prox(
    oracle: &mut dyn Oracle,
    n: usize,
    d: usize,
    iterations: usize,
) -> Result<(SolverReport, Vec<f64>)> {
    let mut alg = MirrorProxAlg::new(n, d);
    let transcript = drive_interaction(&mut alg, oracle, 2 * iterations).map_err(|a| a.error)?;
    let report = SolverReport {
        final_w: transcript.final_output,
        logical_iterations: alg.gaps.len(),
        oracle_calls: transcript.records.len(),
        per_iteration_values: alg.gaps.clone(),
        terminated_early: false,
    };
    let p = alg.averaged_p();
    Ok((report, p))
}
