//! Dense matrix-game instances and game-value primitives.
//!
//! A game instance is the payoff matrix of `max_w min_l (Aw)_l` together
//! with the geometry of the w-domain and an optional norm contract on the
//! matrix (unit rows for ball games, unit entries for simplex games).

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::vecmath;

/// Geometry of the maximizing player's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WGeometry {
    L2Ball,
    L1Ball,
    Simplex,
}

/// Magnitude contract the matrix is expected to honor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormContract {
    /// Every row has Euclidean norm at most 1.
    UnitRows,
    /// Every entry lies in [-1, +1].
    UnitEntries,
    None,
}

pub const UNIT_ROWS_TOL: f64 = 1e-9;
pub const UNIT_ENTRIES_TOL: f64 = 1e-12;
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Dense row-major payoff matrix with its domain geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance {
    n: usize,
    d: usize,
    entries: Vec<f64>,
    pub w_geometry: WGeometry,
    pub norm_contract: NormContract,
}

impl GameInstance {
    pub fn new(
        n: usize,
        d: usize,
        entries: Vec<f64>,
        w_geometry: WGeometry,
        norm_contract: NormContract,
    ) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParam(format!(
                "matrix dimensions must be positive, got {n}x{d}"
            )));
        }
        if entries.len() != n * d {
            return Err(Error::DimensionMismatch {
                context: "GameInstance entries",
                expected: n * d,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("matrix entries must be finite".into()));
        }
        let inst = Self {
            n,
            d,
            entries,
            w_geometry,
            norm_contract,
        };
        match norm_contract {
            NormContract::UnitRows => {
                let m = inst.max_row_norm();
                if m > 1.0 + UNIT_ROWS_TOL {
                    return Err(Error::InvalidParam(format!(
                        "UnitRows contract violated: max row norm {m}"
                    )));
                }
            }
            NormContract::UnitEntries => {
                let m = inst.max_abs_entry();
                if m > 1.0 + UNIT_ENTRIES_TOL {
                    return Err(Error::InvalidParam(format!(
                        "UnitEntries contract violated: max |entry| {m}"
                    )));
                }
            }
            NormContract::None => {}
        }
        Ok(inst)
    }

    /// Builds from explicit rows; all rows must share one length.
    pub fn from_rows(
        rows: &[Vec<f64>],
        w_geometry: WGeometry,
        norm_contract: NormContract,
    ) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(n * d);
        for r in rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "GameInstance rows",
                    expected: d,
                    got: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(n, d, entries, w_geometry, norm_contract)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, l: usize) -> Result<&[f64]> {
        if l >= self.n {
            return Err(Error::RowIndexOutOfRange {
                index: l,
                rows: self.n,
            });
        }
        Ok(&self.entries[l * self.d..(l + 1) * self.d])
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.n).fold(0.0, |m, l| {
            m.max(vecmath::norm2(&self.entries[l * self.d..(l + 1) * self.d]))
        })
    }

    pub fn max_abs_entry(&self) -> f64 {
        vecmath::norm_inf(&self.entries)
    }

    /// A·w
    pub fn matvec(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.d {
            return Err(Error::DimensionMismatch {
                context: "matvec",
                expected: self.d,
                got: w.len(),
            });
        }
        Ok((0..self.n)
            .map(|l| vecmath::dot(&self.entries[l * self.d..(l + 1) * self.d], w))
            .collect())
    }

    /// pᵀ·A, returned as a length-d vector.
    pub fn vecmat(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "vecmat",
                expected: self.n,
                got: p.len(),
            });
        }
        let mut out = vec![0.0; self.d];
        for (l, &pl) in p.iter().enumerate() {
            if pl != 0.0 {
                vecmath::axpy(pl, &self.entries[l * self.d..(l + 1) * self.d], &mut out);
            }
        }
        Ok(out)
    }

    /// Smallest payoff entry of A·w together with its row index
    /// (lowest index on ties).
    pub fn min_payoff(&self, w: &[f64]) -> Result<(f64, usize)> {
        let aw = self.matvec(w)?;
        let l = vecmath::argmin(&aw);
        Ok((aw[l], l))
    }

    /// max_i (pᵀA)_i − min_l (Aw)_l for a simplex/simplex candidate pair.
    pub fn duality_gap(&self, w: &[f64], p: &[f64]) -> Result<f64> {
        check_simplex(w, self.d, "w")?;
        check_simplex(p, self.n, "p")?;
        let aw = self.matvec(w)?;
        let pta = self.vecmat(p)?;
        let best_col = pta.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        let worst_row = aw.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        Ok(best_col - worst_row)
    }

    /// Writes the plain-text format: header `n d`, then one line per row.
    /// Entries carry 17 significant digits so reloading is lossless.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.d);
        for l in 0..self.n {
            let row = &self.entries[l * self.d..(l + 1) * self.d];
            let mut line = String::new();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                let _ = write!(line, "{v:.16e}");
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn save_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.dump_text())?;
        Ok(())
    }

    pub fn parse_text(
        text: &str,
        w_geometry: WGeometry,
        norm_contract: NormContract,
    ) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let mut hdr = header.split_whitespace();
        let n: usize = parse_num(hdr.next(), "row count")?;
        let d: usize = parse_num(hdr.next(), "column count")?;
        let mut entries = Vec::with_capacity(n * d);
        for (idx, line) in lines.enumerate() {
            if idx >= n {
                return Err(Error::Parse(format!("more than {n} data rows")));
            }
            for tok in line.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad entry {tok:?} in row {idx}")))?;
                entries.push(v);
            }
            if entries.len() != (idx + 1) * d {
                return Err(Error::Parse(format!("row {idx} does not have {d} entries")));
            }
        }
        Self::new(n, d, entries, w_geometry, norm_contract)
    }

    pub fn load_text(
        path: &Path,
        w_geometry: WGeometry,
        norm_contract: NormContract,
    ) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_text(&text, w_geometry, norm_contract)
    }
}

fn parse_num(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

/// Validates that `x` is a probability vector of the given length, within
/// the shared simplex tolerance.
pub fn check_simplex(x: &[f64], len: usize, name: &str) -> Result<()> {
    if x.len() != len {
        return Err(Error::DimensionMismatch {
            context: "simplex vector",
            expected: len,
            got: x.len(),
        });
    }
    let mass: f64 = x.iter().sum();
    if (mass - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::Infeasible(format!(
            "{name} has mass {mass}, expected 1"
        )));
    }
    if let Some(v) = x.iter().find(|v| **v < -SIMPLEX_TOL) {
        return Err(Error::Infeasible(format!("{name} has negative entry {v}")));
    }
    Ok(())
}
