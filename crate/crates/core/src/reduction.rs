//! Lifting ℓ1-ball games to simplex games and back.
//!
//! The column-doubled matrix [A, −A] turns any point of the ℓ1 ball into a
//! point of the doubled simplex with the same payoffs, so a simplex/simplex
//! solver can run on the lifted game while its oracle traffic is served by
//! the original matrix, one base query per lifted query.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::{check_simplex, GameInstance, WGeometry};
use crate::oracle::{Algorithm, Oracle, Query, Response};
use crate::vecmath;

/// [A, −A]: the n×2d lift. Preserves the unit-entries contract.
pub fn psi_matrix(a: &GameInstance) -> Result<GameInstance> {
    let n = a.rows();
    let d = a.cols();
    let mut entries = Vec::with_capacity(n * 2 * d);
    for l in 0..n {
        let row = a.row(l)?;
        entries.extend_from_slice(row);
        entries.extend(row.iter().map(|v| -v));
    }
    GameInstance::new(n, 2 * d, entries, WGeometry::Simplex, a.norm_contract)
}

/// Splits an ℓ1-ball point into simplex mass: positive parts on the first
/// d coordinates, magnitudes of nonpositive parts on the last d. Any mass
/// deficit 1 − ‖w‖₁ is split equally between coordinates 0 and d, which is
/// payoff-neutral because those columns of [A, −A] cancel.
pub fn psi_vec(w: &[f64]) -> Result<Vec<f64>> {
    let d = w.len();
    if d == 0 {
        return Err(Error::InvalidParam("psi of an empty vector".into()));
    }
    let l1 = vecmath::norm1(w);
    if l1 > 1.0 + 1e-12 {
        return Err(Error::Infeasible(format!(
            "psi_vec input has l1 norm {l1} > 1"
        )));
    }
    let mut out = vec![0.0; 2 * d];
    for (j, &wj) in w.iter().enumerate() {
        if wj > 0.0 {
            out[j] = wj;
        } else {
            out[j + d] = -wj;
        }
    }
    let deficit = 1.0 - l1;
    if deficit > 0.0 {
        out[0] += deficit / 2.0;
        out[d] += deficit / 2.0;
    }
    Ok(out)
}

/// Collapses a doubled-simplex point back into the ℓ1 ball:
/// wⱼ = vⱼ − v_{d+j}.
pub fn psi_inv(wt: &[f64]) -> Result<Vec<f64>> {
    if !wt.len().is_multiple_of(2) || wt.is_empty() {
        return Err(Error::InvalidParam(format!(
            "psi_inv needs an even-length vector, got {}",
            wt.len()
        )));
    }
    check_simplex(wt, wt.len(), "psi_inv input")?;
    let d = wt.len() / 2;
    Ok((0..d).map(|j| wt[j] - wt[d + j]).collect())
}

/// Difference of the two halves of a lifted query vector; the base matrix
/// sees exactly the payoffs the lifted matrix would produce.
pub fn fold_lifted_w(wt: &[f64], d: usize) -> Result<Vec<f64>> {
    if wt.len() != 2 * d {
        return Err(Error::DimensionMismatch {
            context: "lifted query",
            expected: 2 * d,
            got: wt.len(),
        });
    }
    Ok((0..d).map(|j| wt[j] - wt[d + j]).collect())
}

/// Two-sided oracle for [A, −A] simulated on a two-sided oracle for A.
/// Spends exactly one base query per lifted query.
pub struct LiftedOracle<'a> {
    base: &'a mut dyn Oracle,
    d: usize,
}

impl<'a> LiftedOracle<'a> {
    pub fn new(base: &'a mut dyn Oracle, d: usize) -> Self {
        Self { base, d }
    }
}

impl Oracle for LiftedOracle<'_> {
    fn respond(&mut self, q: &Query) -> Result<Response> {
        let Query::TwoSided { p, w } = q else {
            return Err(Error::KindMismatch(
                "the lifted oracle serves only two-sided queries",
            ));
        };
        let folded = fold_lifted_w(w, self.d)?;
        let base_resp = self.base.respond(&Query::TwoSided {
            p: p.clone(),
            w: folded,
        })?;
        let Response::TwoSided { aw, pta } = base_resp else {
            return Err(Error::KindMismatch("base oracle returned the wrong kind"));
        };
        let mut lifted_pta = Vec::with_capacity(2 * self.d);
        lifted_pta.extend_from_slice(&pta);
        lifted_pta.extend(pta.iter().map(|v| -v));
        Ok(Response::TwoSided {
            aw,
            pta: lifted_pta,
        })
    }

    fn calls(&self) -> usize {
        self.base.calls()
    }

    fn seed(&self) -> u64 {
        self.base.seed()
    }

    fn params(&self) -> BTreeMap<String, String> {
        self.base.params()
    }
}

/// Wraps a simplex/simplex algorithm (expecting an n×2d game) into an
/// algorithm for the n×d ℓ1-ball game: queries are folded down, responses
/// are mirrored up, and the final output is collapsed back into the ℓ1
/// ball. Suboptimality carries over unchanged.
pub struct ReducedAlg<A: Algorithm> {
    inner: A,
    d: usize,
}

impl<A: Algorithm> ReducedAlg<A> {
    pub fn new(inner: A, d: usize) -> Self {
        Self { inner, d }
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }
}

impl<A: Algorithm> Algorithm for ReducedAlg<A> {
    fn next_query(&mut self) -> Query {
        match self.inner.next_query() {
            Query::TwoSided { p, w } => {
                let folded =
                    fold_lifted_w(&w, self.d).expect("inner algorithm must query in 2d dimensions");
                Query::TwoSided { p, w: folded }
            }
            _ => panic!("the reduction wraps two-sided algorithms only"),
        }
    }

    fn observe(&mut self, r: &Response) {
        let Response::TwoSided { aw, pta } = r else {
            panic!("the reduction expects two-sided responses");
        };
        let mut lifted_pta = Vec::with_capacity(2 * self.d);
        lifted_pta.extend_from_slice(pta);
        lifted_pta.extend(pta.iter().map(|v| -v));
        self.inner.observe(&Response::TwoSided {
            aw: aw.clone(),
            pta: lifted_pta,
        });
    }

    fn final_output(&self) -> Vec<f64> {
        let lifted = self.inner.final_output();
        psi_inv(&lifted).expect("inner algorithm must output a simplex point")
    }

    fn done(&self) -> bool {
        self.inner.done()
    }
}
