//! Oracle contracts, query accounting, transcripts, and replay.
//!
//! Three access models are supported: the one-sided oracle (A·w plus one
//! requested row), the supergradient oracle (the row attaining the minimum
//! payoff), and the two-sided oracle (A·w and pᵀ·A). Every interaction is
//! recorded into a `Transcript` that can later be replayed against a fixed
//! matrix to confirm that the responses were consistent with it.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::vecmath;

/// A single oracle query. Inputs are unrestricted: neither w nor p is
/// required to be feasible for the game domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    /// Request A·w and row l (0-based).
    OneSided { l: usize, w: Vec<f64> },
    /// Request the row attaining min_l (Aw)_l.
    Supergradient { w: Vec<f64> },
    /// Request A·w and pᵀ·A.
    TwoSided { p: Vec<f64>, w: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Response {
    OneSided { aw: Vec<f64>, row: Vec<f64> },
    Supergradient { row: Vec<f64> },
    TwoSided { aw: Vec<f64>, pta: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    OneSided,
    Supergradient,
    TwoSided,
}

impl Query {
    pub fn kind(&self) -> OracleKind {
        match self {
            Query::OneSided { .. } => OracleKind::OneSided,
            Query::Supergradient { .. } => OracleKind::Supergradient,
            Query::TwoSided { .. } => OracleKind::TwoSided,
        }
    }
}

/// One query/response exchange; `ordinal` is the 1-based position in the
/// transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryRecord {
    OneSided {
        ordinal: usize,
        l: usize,
        w: Vec<f64>,
        aw: Vec<f64>,
        row: Vec<f64>,
    },
    Supergradient {
        ordinal: usize,
        w: Vec<f64>,
        row: Vec<f64>,
    },
    TwoSided {
        ordinal: usize,
        p: Vec<f64>,
        w: Vec<f64>,
        aw: Vec<f64>,
        pta: Vec<f64>,
    },
}

impl QueryRecord {
    pub fn from_exchange(ordinal: usize, q: &Query, r: &Response) -> Result<Self> {
        match (q, r) {
            (Query::OneSided { l, w }, Response::OneSided { aw, row }) => {
                Ok(QueryRecord::OneSided {
                    ordinal,
                    l: *l,
                    w: w.clone(),
                    aw: aw.clone(),
                    row: row.clone(),
                })
            }
            (Query::Supergradient { w }, Response::Supergradient { row }) => {
                Ok(QueryRecord::Supergradient {
                    ordinal,
                    w: w.clone(),
                    row: row.clone(),
                })
            }
            (Query::TwoSided { p, w }, Response::TwoSided { aw, pta }) => {
                Ok(QueryRecord::TwoSided {
                    ordinal,
                    p: p.clone(),
                    w: w.clone(),
                    aw: aw.clone(),
                    pta: pta.clone(),
                })
            }
            _ => Err(Error::KindMismatch("query and response kinds differ")),
        }
    }

    pub fn kind(&self) -> OracleKind {
        match self {
            QueryRecord::OneSided { .. } => OracleKind::OneSided,
            QueryRecord::Supergradient { .. } => OracleKind::Supergradient,
            QueryRecord::TwoSided { .. } => OracleKind::TwoSided,
        }
    }

    pub fn ordinal(&self) -> usize {
        match self {
            QueryRecord::OneSided { ordinal, .. }
            | QueryRecord::Supergradient { ordinal, .. }
            | QueryRecord::TwoSided { ordinal, .. } => *ordinal,
        }
    }
}

/// Full history of one algorithm/oracle interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub kind: OracleKind,
    pub records: Vec<QueryRecord>,
    pub final_output: Vec<f64>,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl Transcript {
    /// Checks record homogeneity and ordinal monotonicity.
    pub fn validate(&self) -> Result<()> {
        for (i, rec) in self.records.iter().enumerate() {
            if rec.kind() != self.kind {
                return Err(Error::InvalidTranscript(format!(
                    "record {i} has kind {:?}, transcript is {:?}",
                    rec.kind(),
                    self.kind
                )));
            }
            if rec.ordinal() != i + 1 {
                return Err(Error::InvalidTranscript(format!(
                    "record {i} has ordinal {}, expected {}",
                    rec.ordinal(),
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("transcript serialization: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Transcript = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("transcript parse: {e}")))?;
        t.validate()?;
        Ok(t)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Anything that can answer oracle queries. Implementations count calls;
/// one call is one unit regardless of how many products it returns.
pub trait Oracle {
    fn respond(&mut self, q: &Query) -> Result<Response>;
    fn calls(&self) -> usize;
    fn seed(&self) -> u64 {
        0
    }
    fn params(&self) -> BTreeMap<String, String> {
        BTreeMap::new()
    }
}

/// A deterministic iterative algorithm: queries are a function of the
/// responses received so far.
pub trait Algorithm {
    fn next_query(&mut self) -> Query;
    fn observe(&mut self, r: &Response);
    fn final_output(&self) -> Vec<f64>;
    /// Signals voluntary termination before the round budget is spent
    /// (e.g. a separator was found).
    fn done(&self) -> bool {
        false
    }
}

/// Oracle backed by a fixed dense matrix.
pub struct DenseOracle<'a> {
    a: &'a GameInstance,
    calls: usize,
}

impl<'a> DenseOracle<'a> {
    pub fn new(a: &'a GameInstance) -> Self {
        Self { a, calls: 0 }
    }

    pub fn instance(&self) -> &GameInstance {
        self.a
    }

    /// A·w together with the requested row (0-based index).
    pub fn o1_query(&mut self, l: usize, w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let row = self.a.row(l)?.to_vec();
        let aw = self.a.matvec(w)?;
        self.calls += 1;
        Ok((aw, row))
    }

    /// The row at the lowest-index argmin of A·w.
    pub fn osg_query(&mut self, w: &[f64]) -> Result<Vec<f64>> {
        let (_, l) = self.a.min_payoff(w)?;
        self.calls += 1;
        Ok(self.a.row(l)?.to_vec())
    }

    /// A·w and pᵀ·A in a single call.
    pub fn o2_query(&mut self, p: &[f64], w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let aw = self.a.matvec(w)?;
        let pta = self.a.vecmat(p)?;
        self.calls += 1;
        Ok((aw, pta))
    }
}

impl Oracle for DenseOracle<'_> {
    fn respond(&mut self, q: &Query) -> Result<Response> {
        match q {
            Query::OneSided { l, w } => {
                let (aw, row) = self.o1_query(*l, w)?;
                Ok(Response::OneSided { aw, row })
            }
            Query::Supergradient { w } => {
                let row = self.osg_query(w)?;
                Ok(Response::Supergradient { row })
            }
            Query::TwoSided { p, w } => {
                let (aw, pta) = self.o2_query(p, w)?;
                Ok(Response::TwoSided { aw, pta })
            }
        }
    }

    fn calls(&self) -> usize {
        self.calls
    }
}

/// Re-issues every recorded query against the true oracle for `a` and
/// reports the largest ∞-norm deviation between recorded and recomputed
/// responses.
///
/// Supergradient records are checked for consistency rather than for an
/// exact argmin index: the served row must equal some row of `a` and must
/// realize the minimum payoff, both within the deviation budget. Exact
/// index replay would be ill-posed whenever several rows tie at the
/// minimum to within roundoff.
pub fn replay_verify(a: &GameInstance, t: &Transcript, tol: f64) -> Result<(f64, bool)> {
    t.validate()?;
    let mut max_err = 0.0f64;
    for rec in &t.records {
        match rec {
            QueryRecord::OneSided { l, w, aw, row, .. } => {
                let true_row = a.row(*l)?;
                let true_aw = a.matvec(w)?;
                if aw.len() != true_aw.len() || row.len() != true_row.len() {
                    return Err(Error::InvalidTranscript(
                        "recorded response length mismatch".into(),
                    ));
                }
                max_err = max_err.max(vecmath::max_abs_diff(aw, &true_aw));
                max_err = max_err.max(vecmath::max_abs_diff(row, true_row));
            }
            QueryRecord::Supergradient { w, row, .. } => {
                let true_aw = a.matvec(w)?;
                if row.len() != a.cols() {
                    return Err(Error::InvalidTranscript(
                        "recorded row length mismatch".into(),
                    ));
                }
                let min_val = true_aw.iter().fold(f64::INFINITY, |m, v| m.min(*v));
                let nearest = (0..a.rows())
                    .map(|l| vecmath::max_abs_diff(row, a.row(l).unwrap()))
                    .fold(f64::INFINITY, f64::min);
                max_err = max_err.max(nearest);
                max_err = max_err.max((vecmath::dot(row, w) - min_val).max(0.0));
            }
            QueryRecord::TwoSided { p, w, aw, pta, .. } => {
                let true_aw = a.matvec(w)?;
                let true_pta = a.vecmat(p)?;
                if aw.len() != true_aw.len() || pta.len() != true_pta.len() {
                    return Err(Error::InvalidTranscript(
                        "recorded response length mismatch".into(),
                    ));
                }
                max_err = max_err.max(vecmath::max_abs_diff(aw, &true_aw));
                max_err = max_err.max(vecmath::max_abs_diff(pta, &true_pta));
            }
        }
    }
    Ok((max_err, max_err <= tol))
}

/// Error wrapper carrying the partial transcript gathered before an oracle
/// failure aborted the interaction.
#[derive(Debug)]
pub struct DriveAborted {
    pub error: Error,
    pub partial: Transcript,
}

impl std::fmt::Display for DriveAborted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "interaction aborted after {} rounds: {}",
            self.partial.records.len(),
            self.error
        )
    }
}

impl std::error::Error for DriveAborted {}

/// Runs the interaction protocol: at most `rounds` query/response
/// exchanges (fewer if the algorithm reports it is done), then records the
/// algorithm's final output.
pub fn drive_interaction(
    alg: &mut dyn Algorithm,
    oracle: &mut dyn Oracle,
    rounds: usize,
) -> std::result::Result<Transcript, Box<DriveAborted>> {
    let mut records = Vec::with_capacity(rounds);
    let mut kind = None;
    for ordinal in 1..=rounds {
        if alg.done() {
            break;
        }
        let q = alg.next_query();
        kind.get_or_insert(q.kind());
        match oracle.respond(&q) {
            Ok(r) => {
                let rec = QueryRecord::from_exchange(ordinal, &q, &r)
                    .expect("oracle returned a response of the wrong kind");
                records.push(rec);
                alg.observe(&r);
            }
            Err(error) => {
                let partial = Transcript {
                    kind: kind.unwrap_or(OracleKind::TwoSided),
                    records,
                    final_output: alg.final_output(),
                    seed: oracle.seed(),
                    params: oracle.params(),
                };
                return Err(Box::new(DriveAborted { error, partial }));
            }
        }
    }
    let kind = kind.unwrap_or(OracleKind::TwoSided);
    Ok(Transcript {
        kind,
        records,
        final_output: alg.final_output(),
        seed: oracle.seed(),
        params: oracle.params(),
    })
}
