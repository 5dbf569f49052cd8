//! Sums of outer products: the adversaries' native matrix representation.
//!
//! Products against a factor list cost O(k(n+d)) per call instead of O(nd),
//! so a resisting oracle can answer queries without ever materializing the
//! matrix it is still constructing.

use crate::error::{Error, Result};
use crate::game::{GameInstance, NormContract, WGeometry};
use crate::vecmath;

/// A as Σⱼ leftⱼ·rightⱼᵀ with leftⱼ ∈ Rⁿ, rightⱼ ∈ R^d.
#[derive(Debug, Clone, Default)]
pub struct LowRankFactors {
    n: usize,
    d: usize,
    pairs: Vec<(Vec<f64>, Vec<f64>)>,
}

impl LowRankFactors {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            pairs: Vec::new(),
        }
    }

    pub fn push(&mut self, left: Vec<f64>, right: Vec<f64>) -> Result<()> {
        if left.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "low-rank left factor",
                expected: self.n,
                got: left.len(),
            });
        }
        if right.len() != self.d {
            return Err(Error::DimensionMismatch {
                context: "low-rank right factor",
                expected: self.d,
                got: right.len(),
            });
        }
        self.pairs.push((left, right));
        Ok(())
    }

    pub fn rank_bound(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Vec<f64>, Vec<f64>)] {
        &self.pairs
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.d
    }

    /// Σⱼ leftⱼ (rightⱼ·w), equal to materialize()·w.
    pub fn matvec(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.d {
            return Err(Error::DimensionMismatch {
                context: "low-rank matvec",
                expected: self.d,
                got: w.len(),
            });
        }
        let mut out = vec![0.0; self.n];
        for (left, right) in &self.pairs {
            let c = vecmath::dot(right, w);
            if c != 0.0 {
                vecmath::axpy(c, left, &mut out);
            }
        }
        Ok(out)
    }

    /// Σⱼ (p·leftⱼ) rightⱼ, equal to pᵀ·materialize().
    pub fn vecmat(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "low-rank vecmat",
                expected: self.n,
                got: p.len(),
            });
        }
        let mut out = vec![0.0; self.d];
        for (left, right) in &self.pairs {
            let c = vecmath::dot(left, p);
            if c != 0.0 {
                vecmath::axpy(c, right, &mut out);
            }
        }
        Ok(out)
    }

    /// Accumulates the factors into a dense instance.
    pub fn materialize(
        &self,
        w_geometry: WGeometry,
        norm_contract: NormContract,
    ) -> Result<GameInstance> {
        let mut entries = vec![0.0; self.n * self.d];
        for (left, right) in &self.pairs {
            for (l, &cl) in left.iter().enumerate() {
                if cl != 0.0 {
                    vecmath::axpy(cl, right, &mut entries[l * self.d..(l + 1) * self.d]);
                }
            }
        }
        GameInstance::new(self.n, self.d, entries, w_geometry, norm_contract)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn empty_factors_give_zero_products() {
        let f = LowRankFactors::new(3, 2);
        assert_eq!(f.matvec(&[1.0, -1.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(f.vecmat(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 2]);
    }

    #[test]
    fn orthogonal_query_gives_zero() {
        let mut f = LowRankFactors::new(2, 2);
        f.push(vec![1.0, 2.0], vec![1.0, 0.0]).unwrap();
        // w orthogonal to the right factor
        assert_eq!(f.matvec(&[0.0, 5.0]).unwrap(), vec![0.0, 0.0]);
        // p orthogonal to the left factor
        assert_eq!(f.vecmat(&[2.0, -1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn random_factors_match_dense_products() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (n, d) = (6, 4);
        let mut f = LowRankFactors::new(n, d);
        for _ in 0..5 {
            let left: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let right: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            f.push(left, right).unwrap();
        }
        let dense = f
            .materialize(WGeometry::L2Ball, NormContract::None)
            .unwrap();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

        // independent dense products
        let mut aw = vec![0.0; n];
        let mut pta = vec![0.0; d];
        for l in 0..n {
            for i in 0..d {
                aw[l] += dense.entries()[l * d + i] * w[i];
                pta[i] += p[l] * dense.entries()[l * d + i];
            }
        }
        let fw = f.matvec(&w).unwrap();
        let fp = f.vecmat(&p).unwrap();
        for l in 0..n {
            assert!((fw[l] - aw[l]).abs() <= 1e-12 * aw[l].abs().max(1.0));
        }
        for i in 0..d {
            assert!((fp[i] - pta[i]).abs() <= 1e-12 * pta[i].abs().max(1.0));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut f = LowRankFactors::new(3, 2);
        assert!(f.push(vec![0.0; 2], vec![0.0; 2]).is_err());
        assert!(f.push(vec![0.0; 3], vec![0.0; 3]).is_err());
        assert!(f.matvec(&[0.0; 3]).is_err());
        assert!(f.vecmat(&[0.0; 2]).is_err());
    }
}
