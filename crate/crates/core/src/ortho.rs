//! Incrementally maintained orthonormal bases.
//!
//! Inserts use re-orthogonalized (two-pass) Gram-Schmidt: a single pass
//! loses orthogonality once the residual is small relative to the input,
//! which the adversarial constructions cannot afford over dozens of
//! inserts in high dimension.

use crate::error::{Error, Result};
use crate::vecmath;

pub const DEFAULT_DROP_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OrthoBasis {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    drop_tol: f64,
}

impl OrthoBasis {
    pub fn new(dim: usize) -> Self {
        Self::with_drop_tol(dim, DEFAULT_DROP_TOL)
    }

    pub fn with_drop_tol(dim: usize, drop_tol: f64) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
            drop_tol,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    fn check_dim(&self, x: &[f64], context: &'static str) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Extends the span by `x` unless `x` already lies in it (up to the
    /// drop tolerance, relative to max(1, ‖x‖)). Returns whether a new
    /// basis vector was added.
    pub fn insert(&mut self, x: &[f64]) -> Result<bool> {
        self.check_dim(x, "basis insert")?;
        let reference = vecmath::norm2(x).max(1.0);
        let mut r = x.to_vec();
        for _ in 0..2 {
            for v in &self.vectors {
                let c = vecmath::dot(&r, v);
                vecmath::axpy(-c, v, &mut r);
            }
        }
        let norm = vecmath::norm2(&r);
        if norm < self.drop_tol * reference {
            return Ok(false);
        }
        if self.vectors.len() == self.dim {
            return Err(Error::BasisFull { dim: self.dim });
        }
        vecmath::scale(1.0 / norm, &mut r);
        self.vectors.push(r);
        Ok(true)
    }

    /// (I − MMᵀ)x: the component of `x` orthogonal to the span.
    pub fn project_complement(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x, "project_complement")?;
        let mut r = x.to_vec();
        for v in &self.vectors {
            let c = vecmath::dot(&r, v);
            vecmath::axpy(-c, v, &mut r);
        }
        Ok(r)
    }

    /// Normalized complement direction. Errors with `DegenerateDirection`
    /// when `x` is (numerically) inside the span; the caller is expected
    /// to supply a different x.
    pub fn unit_complement(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x, "unit_complement")?;
        let reference = vecmath::norm2(x).max(1.0);
        let mut r = x.to_vec();
        for _ in 0..2 {
            for v in &self.vectors {
                let c = vecmath::dot(&r, v);
                vecmath::axpy(-c, v, &mut r);
            }
        }
        let norm = vecmath::norm2(&r);
        if norm < self.drop_tol * reference {
            return Err(Error::DegenerateDirection);
        }
        vecmath::scale(1.0 / norm, &mut r);
        Ok(r)
    }

    /// Largest |vᵢ·vⱼ| over distinct pairs; diagnostic for tests.
    pub fn max_pairwise_dot(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.vectors.len() {
            for j in (i + 1)..self.vectors.len() {
                worst = worst.max(vecmath::dot(&self.vectors[i], &self.vectors[j]).abs());
            }
        }
        worst
    }
}
