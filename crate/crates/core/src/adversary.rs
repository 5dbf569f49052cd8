//! Resisting oracles: adversaries that build a hard matrix lazily while
//! serving oracle queries, finalize it to a concrete instance, and emit a
//! certificate verifying every desk-checkable claim about the run.
//!
//! The one-sided adversary hands out mutually orthonormal rows orthogonal
//! to everything the algorithm has queried, so the final matrix has a
//! large margin while the algorithm's output separates nothing. The
//! two-sided adversary maintains a telescoping sum of outer products whose
//! left factors are projected Gaussians orthogonal to all past dual
//! queries and whose right factors are unit vectors orthogonal to all past
//! primal queries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameInstance, NormContract, WGeometry};
use crate::lowrank::LowRankFactors;
use crate::oracle::{replay_verify, Oracle, Query, Response, Transcript};
use crate::ortho::OrthoBasis;
use crate::rng::GaussianStream;
use crate::vecmath;

const RESAMPLE_LIMIT: usize = 16;

/// Which norm constraint the construction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvGeometry {
    /// Unit rows; the w-domain is the Euclidean ball.
    L2,
    /// Unit entries; the w-domain is the l1 ball.
    L1,
}

impl AdvGeometry {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdvGeometry::L2 => "l2",
            AdvGeometry::L1 => "l1",
        }
    }
}

/// Construction scales for the two-sided adversary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvParams {
    pub t: usize,
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub geometry: AdvGeometry,
}

impl AdvParams {
    /// Value of the norm-bound constraint with these scales; saturated to
    /// 1 by `make_params`.
    pub fn norm_constraint_value(&self) -> f64 {
        let t = self.t as f64;
        match self.geometry {
            AdvGeometry::L2 => {
                let log_term = (2.0 * t * self.n as f64 / self.delta).ln();
                2.0 * self.alpha * self.alpha + 8.0 * t * log_term * self.beta * self.beta
            }
            AdvGeometry::L1 => {
                let d = self.d as f64;
                let log_d = (2.0 * d / self.delta).ln();
                let log_tn = (2.0 * t * self.n as f64 / self.delta).ln();
                (8.0 * log_d / d).sqrt()
                    * (self.alpha + 2.0 * t * self.beta * (2.0 * log_tn).sqrt())
            }
        }
    }

    /// Left-hand side of the non-separation size gate enforced by
    /// `make_params` (must be at most 1/4).
    pub fn size_gate_lhs(&self) -> f64 {
        let t = self.t as f64;
        t * (80.0 * (2.0 * t / self.delta).ln()).sqrt() / self.n as f64
    }

    /// The literal high-probability premise of the non-separation
    /// argument. Desk-scale instances do not satisfy it; it is reported,
    /// not gated on.
    pub fn nosep_premise_lhs(&self) -> f64 {
        let t = self.t as f64;
        t * (80.0 * (2.0 * t / self.delta).ln() / self.n as f64).sqrt()
    }

    pub fn report(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("T".into(), self.t.to_string());
        m.insert("n".into(), self.n.to_string());
        m.insert("d".into(), self.d.to_string());
        m.insert("delta".into(), format!("{:.17e}", self.delta));
        m.insert("alpha".into(), format!("{:.17e}", self.alpha));
        m.insert("beta".into(), format!("{:.17e}", self.beta));
        m.insert("geometry".into(), self.geometry.as_str().into());
        m.insert(
            "norm_constraint_value".into(),
            format!("{:.17e}", self.norm_constraint_value()),
        );
        m.insert(
            "size_gate_lhs".into(),
            format!("{:.17e}", self.size_gate_lhs()),
        );
        m.insert(
            "nosep_premise_lhs".into(),
            format!("{:.17e}", self.nosep_premise_lhs()),
        );
        m.insert(
            "nosep_premise_holds".into(),
            (self.nosep_premise_lhs() <= 0.25).to_string(),
        );
        m
    }
}

/// Default failure parameter for each geometry.
pub fn default_delta(geometry: AdvGeometry, t: usize) -> f64 {
    match geometry {
        AdvGeometry::L2 => 0.1,
        AdvGeometry::L1 => 1.0 / (50.0 * t.max(1) as f64),
    }
}

/// Derives the construction scales: alpha = beta/(4√T) always, and beta
/// chosen as the largest value saturating the geometry's norm constraint.
/// Rejects instances too small for the construction, reporting the
/// violated inequality and the minimal feasible size.
pub fn make_params(
    t: usize,
    n: usize,
    d: usize,
    delta: f64,
    geometry: AdvGeometry,
) -> Result<AdvParams> {
    if t == 0 {
        return Err(Error::InvalidParam(
            "query budget T must be positive".into(),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    let need = 2 * t + 1;
    if n < need {
        return Err(Error::InstanceTooSmall {
            inequality: format!("2T+1 <= n (2*{t}+1 = {need} > {n})"),
            param: "n",
            minimum: need as u64,
        });
    }
    if d < need {
        return Err(Error::InstanceTooSmall {
            inequality: format!("2T+1 <= d (2*{t}+1 = {need} > {d})"),
            param: "d",
            minimum: need as u64,
        });
    }
    let tf = t as f64;
    let gate = tf * (80.0 * (2.0 * tf / delta).ln()).sqrt();
    if gate / n as f64 > 0.25 {
        return Err(Error::InstanceTooSmall {
            inequality: format!(
                "T*sqrt(80*log(2T/delta))/n <= 1/4 ({:.6} > 0.25)",
                gate / n as f64
            ),
            param: "n",
            minimum: (4.0 * gate).ceil() as u64,
        });
    }
    let beta = match geometry {
        AdvGeometry::L2 => {
            let log_term = (2.0 * tf * n as f64 / delta).ln();
            1.0 / (1.0 / (8.0 * tf) + 8.0 * tf * log_term).sqrt()
        }
        AdvGeometry::L1 => {
            let df = d as f64;
            let log_d = (2.0 * df / delta).ln();
            let log_tn = (2.0 * tf * n as f64 / delta).ln();
            1.0 / ((8.0 * log_d / df).sqrt()
                * (1.0 / (4.0 * tf.sqrt()) + 2.0 * tf * (2.0 * log_tn).sqrt()))
        }
    };
    let alpha = beta / (4.0 * tf.sqrt());
    Ok(AdvParams {
        t,
        n,
        d,
        delta,
        alpha,
        beta,
        geometry,
    })
}

/// Tolerances applied by certification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertTolerances {
    pub replay: f64,
    pub nonsep: f64,
    pub witness: f64,
}

impl CertTolerances {
    pub fn one_sided() -> Self {
        Self {
            replay: 1e-9,
            nonsep: 1e-12,
            witness: 1e-9,
        }
    }

    pub fn two_sided() -> Self {
        Self {
            replay: 1e-9,
            nonsep: 1e-9,
            witness: 1e-9,
        }
    }
}

/// Pass/fail record for one finalized adversarial run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub replay_max_err: f64,
    pub replay_pass: bool,
    /// Max row l2 norm (unit-row geometry) or max |entry| (unit-entry
    /// geometry).
    pub norm_stat: f64,
    pub norm_pass: bool,
    pub witness_value: f64,
    pub witness_target: f64,
    pub witness_pass: bool,
    pub output_min_payoff: f64,
    pub nonsep_pass: bool,
    pub all_pass: bool,
}

impl Certificate {
    fn seal(mut self) -> Self {
        self.all_pass = self.replay_pass && self.norm_pass && self.witness_pass && self.nonsep_pass;
        self
    }
}

// ---------------------------------------------------------------------------
// One-sided adversary
// ---------------------------------------------------------------------------

/// Resisting oracle for row-query / one-sided-multiplication access, also
/// able to serve supergradient clients. The matrix has T+1 rows for a
/// budget of T responses.
pub struct OneSidedAdversary {
    budget: usize,
    d: usize,
    rows: Vec<Option<Vec<f64>>>,
    basis: OrthoBasis,
    cursor: usize,
    responds: usize,
    calls: usize,
}

impl OneSidedAdversary {
    pub fn new(budget: usize, d: usize) -> Result<Self> {
        if d < 2 * budget + 2 {
            return Err(Error::DimensionExhausted {
                needed: 2 * budget + 1,
                have: d,
            });
        }
        Ok(Self {
            budget,
            d,
            rows: vec![None; budget + 1],
            basis: OrthoBasis::new(d),
            cursor: 0,
            responds: 0,
            calls: 0,
        })
    }

    pub fn rows_count(&self) -> usize {
        self.budget + 1
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn assigned_count(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    fn fresh_direction(&mut self) -> Result<Vec<f64>> {
        while self.cursor < self.d {
            let mut e = vec![0.0; self.d];
            e[self.cursor] = 1.0;
            self.cursor += 1;
            match self.basis.unit_complement(&e) {
                Ok(u) => {
                    self.basis.insert(&u)?;
                    return Ok(u);
                }
                Err(Error::DegenerateDirection) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::DimensionExhausted {
            needed: 2 * self.budget + 1,
            have: self.d,
        })
    }

    fn check_budget(&self) -> Result<()> {
        if self.responds >= self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn check_w(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.d {
            return Err(Error::DimensionMismatch {
                context: "one-sided adversary query",
                expected: self.d,
                got: w.len(),
            });
        }
        Ok(())
    }

    /// Payoff vector of the partially built matrix: assigned rows dotted
    /// with w, zero elsewhere.
    fn partial_matvec(&self, w: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.as_ref().map_or(0.0, |row| vecmath::dot(row, w)))
            .collect()
    }

    /// One-sided query: returns A·w (zeros at still-unassigned rows) and
    /// row l, assigning it first if needed.
    pub fn respond_one_sided(&mut self, l: usize, w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if l >= self.rows.len() {
            return Err(Error::RowIndexOutOfRange {
                index: l,
                rows: self.rows.len(),
            });
        }
        self.check_w(w)?;
        self.check_budget()?;
        self.basis.insert(w)?;
        if self.rows[l].is_none() {
            self.rows[l] = Some(self.fresh_direction()?);
        }
        let aw = self.partial_matvec(w);
        let row = self.rows[l].clone().unwrap();
        self.responds += 1;
        self.calls += 1;
        Ok((aw, row))
    }

    /// Supergradient query: serves an argmin row of the matrix that will
    /// eventually be finalized. If some assigned row has strictly negative
    /// payoff, the most negative one (lowest index on ties) is returned;
    /// otherwise a fresh row is assigned at the lowest free index, a valid
    /// argmin because unassigned rows stay orthogonal to every query.
    pub fn respond_supergradient(&mut self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_w(w)?;
        self.check_budget()?;
        self.basis.insert(w)?;
        let mut best: Option<(usize, f64)> = None;
        for (l, row) in self.rows.iter().enumerate() {
            if let Some(row) = row {
                let payoff = vecmath::dot(row, w);
                if best.is_none_or(|(_, b)| payoff < b) {
                    best = Some((l, payoff));
                }
            }
        }
        let row = match best {
            Some((l, payoff)) if payoff < 0.0 => self.rows[l].clone().unwrap(),
            _ => {
                let free = self
                    .rows
                    .iter()
                    .position(|r| r.is_none())
                    .expect("budget < rows guarantees a free index");
                let fresh = self.fresh_direction()?;
                self.rows[free] = Some(fresh.clone());
                fresh
            }
        };
        self.responds += 1;
        self.calls += 1;
        Ok(row)
    }

    /// Fills the remaining rows orthogonally to everything seen (queries,
    /// assigned rows, and the final output), materializes the instance,
    /// and certifies the run against its transcript.
    pub fn finalize(
        mut self,
        transcript: &Transcript,
        tols: CertTolerances,
    ) -> Result<(GameInstance, Certificate)> {
        self.check_w(&transcript.final_output)?;
        self.basis.insert(&transcript.final_output)?;
        for l in 0..self.rows.len() {
            if self.rows[l].is_none() {
                self.rows[l] = Some(self.fresh_direction()?);
            }
        }
        let rows: Vec<Vec<f64>> = self.rows.iter().map(|r| r.clone().unwrap()).collect();
        let n = rows.len();
        let max_unit_dev = rows
            .iter()
            .map(|r| (vecmath::norm2(r) - 1.0).abs())
            .fold(0.0f64, f64::max);
        let norm_pass = max_unit_dev <= 1e-9;
        let contract = if norm_pass {
            NormContract::UnitRows
        } else {
            NormContract::None
        };
        let a = GameInstance::from_rows(&rows, WGeometry::L2Ball, contract)?;

        let scale = 1.0 / (n as f64).sqrt();
        let mut witness = vec![0.0; self.d];
        for r in &rows {
            vecmath::axpy(scale, r, &mut witness);
        }
        let (witness_value, _) = a.min_payoff(&witness)?;
        let witness_target = scale;
        let (replay_max_err, replay_pass) = replay_verify(&a, transcript, tols.replay)?;
        let (output_min_payoff, _) = a.min_payoff(&transcript.final_output)?;
        let cert = Certificate {
            replay_max_err,
            replay_pass,
            norm_stat: a.max_row_norm(),
            norm_pass,
            witness_value,
            witness_target,
            witness_pass: witness_value >= witness_target - tols.witness,
            output_min_payoff,
            nonsep_pass: output_min_payoff <= tols.nonsep,
            all_pass: false,
        }
        .seal();
        Ok((a, cert))
    }
}

impl Oracle for OneSidedAdversary {
    fn respond(&mut self, q: &Query) -> Result<Response> {
        match q {
            Query::OneSided { l, w } => {
                let (aw, row) = self.respond_one_sided(*l, w)?;
                Ok(Response::OneSided { aw, row })
            }
            Query::Supergradient { w } => {
                let row = self.respond_supergradient(w)?;
                Ok(Response::Supergradient { row })
            }
            Query::TwoSided { .. } => Err(Error::KindMismatch(
                "one-sided adversary cannot serve two-sided queries",
            )),
        }
    }

    fn calls(&self) -> usize {
        self.calls
    }

    fn params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("kind".into(), "one_sided".into());
        m.insert("T".into(), self.budget.to_string());
        m.insert("n".into(), (self.budget + 1).to_string());
        m.insert("d".into(), self.d.to_string());
        m
    }
}

// ---------------------------------------------------------------------------
// Two-sided adversary
// ---------------------------------------------------------------------------

/// Resisting oracle for two-sided multiplication access. Serves round t
/// from the partial factor sum A_t = Σ_{j≤t}(v_{j−1}−v_j)u_jᵀ; the final
/// matrix appends v_T·u_{T+1}ᵀ.
pub struct TwoSidedAdversary {
    params: AdvParams,
    factors: LowRankFactors,
    u_list: Vec<Vec<f64>>,
    v_list: Vec<Vec<f64>>,
    v_prev: Vec<f64>,
    m_basis: OrthoBasis,
    n_basis: OrthoBasis,
    rng: GaussianStream,
    u_cursor: usize,
    round: usize,
    calls: usize,
    seed: u64,
}

impl TwoSidedAdversary {
    pub fn new(params: AdvParams, seed: u64) -> Result<Self> {
        let mut m_basis = OrthoBasis::new(params.n);
        m_basis.insert(&vec![1.0; params.n])?;
        Ok(Self {
            v_prev: vec![params.alpha; params.n],
            factors: LowRankFactors::new(params.n, params.d),
            u_list: Vec::with_capacity(params.t + 1),
            v_list: Vec::with_capacity(params.t),
            m_basis,
            n_basis: OrthoBasis::new(params.d),
            rng: GaussianStream::new(seed),
            u_cursor: 0,
            round: 0,
            calls: 0,
            seed,
            params,
        })
    }

    pub fn params(&self) -> &AdvParams {
        &self.params
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn u_list(&self) -> &[Vec<f64>] {
        &self.u_list
    }

    pub fn v_list(&self) -> &[Vec<f64>] {
        &self.v_list
    }

    /// Unit vector orthogonal to all primal queries and previous right
    /// factors. Unit-row geometry projects fresh standard-basis
    /// directions, which keeps the choice deterministic; unit-entry
    /// geometry projects a fresh Gaussian so the entries concentrate near
    /// 1/√d.
    fn sample_u(&mut self) -> Result<Vec<f64>> {
        match self.params.geometry {
            AdvGeometry::L2 => {
                while self.u_cursor < self.params.d {
                    let mut e = vec![0.0; self.params.d];
                    e[self.u_cursor] = 1.0;
                    self.u_cursor += 1;
                    match self.n_basis.unit_complement(&e) {
                        Ok(u) => return Ok(u),
                        Err(Error::DegenerateDirection) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::DegenerateDirection)
            }
            AdvGeometry::L1 => {
                for _ in 0..RESAMPLE_LIMIT {
                    let xi = self.rng.normal_vector(self.params.d);
                    match self.n_basis.unit_complement(&xi) {
                        Ok(u) => return Ok(u),
                        Err(Error::DegenerateDirection) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::DegenerateDirection)
            }
        }
    }

    /// β times the projection of a fresh Gaussian onto the complement of
    /// span{v₀..v_{t−1}, p₁..p_t}.
    fn sample_v(&mut self) -> Result<Vec<f64>> {
        for _ in 0..RESAMPLE_LIMIT {
            let xi = self.rng.normal_vector(self.params.n);
            let mut v = self.m_basis.project_complement(&xi)?;
            let norm = vecmath::norm2(&v);
            if norm < 1e-10 * vecmath::norm2(&xi).max(1.0) {
                continue;
            }
            vecmath::scale(self.params.beta, &mut v);
            return Ok(v);
        }
        Err(Error::DegenerateDirection)
    }

    #[cfg(debug_assertions)]
    fn debug_check_u(&self, u: &[f64]) {
        let unorm = vecmath::norm2(u);
        debug_assert!((unorm - 1.0).abs() <= 1e-12, "u norm {unorm}");
        for b in self.n_basis.vectors() {
            let dot = vecmath::dot(u, b).abs();
            debug_assert!(dot <= 1e-9, "u not orthogonal to primal history: {dot}");
        }
    }

    #[cfg(debug_assertions)]
    fn debug_check_v(&self, v: &[f64]) {
        let vnorm = vecmath::norm2(v).max(1e-300);
        for b in self.m_basis.vectors() {
            let dot = vecmath::dot(v, b).abs() / vnorm;
            debug_assert!(dot <= 1e-9, "v not orthogonal to dual history: {dot}");
        }
    }

    /// Serves one two-sided query from the extended factor sum.
    pub fn respond_two_sided(&mut self, p: &[f64], w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.round >= self.params.t {
            return Err(Error::BudgetExhausted {
                budget: self.params.t,
            });
        }
        if p.len() != self.params.n {
            return Err(Error::DimensionMismatch {
                context: "two-sided adversary p",
                expected: self.params.n,
                got: p.len(),
            });
        }
        if w.len() != self.params.d {
            return Err(Error::DimensionMismatch {
                context: "two-sided adversary w",
                expected: self.params.d,
                got: w.len(),
            });
        }
        self.n_basis.insert(w)?;
        let u = self.sample_u()?;
        #[cfg(debug_assertions)]
        self.debug_check_u(&u);
        self.n_basis.insert(&u)?;
        self.m_basis.insert(p)?;
        let v = self.sample_v()?;
        #[cfg(debug_assertions)]
        self.debug_check_v(&v);
        self.m_basis.insert(&v)?;
        let left = vecmath::sub(&self.v_prev, &v);
        self.factors.push(left, u.clone())?;
        self.u_list.push(u);
        self.v_list.push(v.clone());
        self.v_prev = v;
        self.round += 1;
        self.calls += 1;
        let aw = self.factors.matvec(w)?;
        let pta = self.factors.vecmat(p)?;
        Ok((aw, pta))
    }

    /// Appends the closing factor v_T·u_{T+1}ᵀ with u_{T+1} orthogonal to
    /// the algorithm's output, materializes the matrix, and certifies the
    /// run.
    pub fn finalize(
        mut self,
        transcript: &Transcript,
        tols: CertTolerances,
    ) -> Result<(GameInstance, LowRankFactors, Certificate)> {
        if self.round != self.params.t {
            return Err(Error::InvalidParam(format!(
                "finalize requires exactly T={} responses, got {}",
                self.params.t, self.round
            )));
        }
        if transcript.final_output.len() != self.params.d {
            return Err(Error::DimensionMismatch {
                context: "two-sided adversary final output",
                expected: self.params.d,
                got: transcript.final_output.len(),
            });
        }
        self.n_basis.insert(&transcript.final_output)?;
        let u_final = self.sample_u()?;
        self.n_basis.insert(&u_final)?;
        self.factors.push(self.v_prev.clone(), u_final.clone())?;
        self.u_list.push(u_final);

        // output identity: the closing factor contributes nothing to
        // A·w_final because u_{T+1} is orthogonal to it
        #[cfg(debug_assertions)]
        {
            let full = self.factors.matvec(&transcript.final_output).unwrap();
            let mut partial = LowRankFactors::new(self.params.n, self.params.d);
            for (l, r) in &self.factors.pairs()[..self.params.t] {
                partial.push(l.clone(), r.clone()).unwrap();
            }
            let part = partial.matvec(&transcript.final_output).unwrap();
            let dev = vecmath::max_abs_diff(&full, &part);
            debug_assert!(dev <= 1e-9, "output identity deviation {dev}");
        }

        let geometry = self.params.geometry;
        let w_geometry = match geometry {
            AdvGeometry::L2 => WGeometry::L2Ball,
            AdvGeometry::L1 => WGeometry::L1Ball,
        };
        let raw = self.factors.materialize(w_geometry, NormContract::None)?;
        let norm_stat = match geometry {
            AdvGeometry::L2 => raw.max_row_norm(),
            AdvGeometry::L1 => raw.max_abs_entry(),
        };
        let norm_pass = norm_stat <= 1.0;
        let a = if norm_pass {
            let contract = match geometry {
                AdvGeometry::L2 => NormContract::UnitRows,
                AdvGeometry::L1 => NormContract::UnitEntries,
            };
            GameInstance::new(
                raw.rows(),
                raw.cols(),
                raw.entries().to_vec(),
                w_geometry,
                contract,
            )?
        } else {
            raw
        };
        let cert = certify(&a, &self.u_list, &self.params, transcript, tols)?;
        debug_assert_eq!(cert.norm_pass, norm_pass);
        Ok((a, self.factors, cert))
    }
}

impl Oracle for TwoSidedAdversary {
    fn respond(&mut self, q: &Query) -> Result<Response> {
        match q {
            Query::TwoSided { p, w } => {
                let (aw, pta) = self.respond_two_sided(p, w)?;
                Ok(Response::TwoSided { aw, pta })
            }
            _ => Err(Error::KindMismatch(
                "two-sided adversary serves only two-sided queries",
            )),
        }
    }

    fn calls(&self) -> usize {
        self.calls
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn params(&self) -> BTreeMap<String, String> {
        self.params.report()
    }
}

/// Verifies a finalized two-sided run: transcript replay, the norm
/// contract, the witness value forced by the construction, and
/// non-separation of the algorithm's output. Failures are recorded, never
/// thrown.
pub fn certify(
    a: &GameInstance,
    u_list: &[Vec<f64>],
    params: &AdvParams,
    transcript: &Transcript,
    tols: CertTolerances,
) -> Result<Certificate> {
    let (replay_max_err, replay_pass) = replay_verify(a, transcript, tols.replay)?;
    let (norm_stat, norm_pass, witness, witness_target) = match params.geometry {
        AdvGeometry::L2 => {
            let stat = a.max_row_norm();
            let scale = 1.0 / (u_list.len() as f64).sqrt();
            let mut w = vec![0.0; a.cols()];
            for u in u_list {
                vecmath::axpy(scale, u, &mut w);
            }
            (stat, stat <= 1.0, w, params.alpha * scale)
        }
        AdvGeometry::L1 => {
            let stat = a.max_abs_entry();
            let total_l1: f64 = u_list.iter().map(|u| vecmath::norm1(u)).sum();
            let mut w = vec![0.0; a.cols()];
            for u in u_list {
                vecmath::axpy(1.0 / total_l1, u, &mut w);
            }
            (stat, stat <= 1.0, w, params.alpha / total_l1)
        }
    };
    let (witness_value, _) = a.min_payoff(&witness)?;
    let (output_min_payoff, _) = a.min_payoff(&transcript.final_output)?;
    Ok(Certificate {
        replay_max_err,
        replay_pass,
        norm_stat,
        norm_pass,
        witness_value,
        witness_target,
        witness_pass: witness_value >= witness_target - tols.witness,
        output_min_payoff,
        nonsep_pass: output_min_payoff <= tols.nonsep,
        all_pass: false,
    }
    .seal())
}
