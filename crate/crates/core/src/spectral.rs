//! Spectral check for the corner-perturbed difference-chain matrix.
//!
//! The quadratic form Σⱼ(xⱼ−xⱼ₊₁)² + x_T² defines a tridiagonal matrix M;
//! subtracting δ² from its (1,1) entry keeps it positive semidefinite
//! exactly while δ ≤ 1/√T. `tridiag_psd_margin` reports the smallest
//! eigenvalue of the perturbed matrix so that threshold can be probed
//! numerically.

use crate::error::{Error, Result};

/// Dense T×T matrix of the chain quadratic form, minus delta² at (1,1).
pub fn chain_matrix(t: usize, delta: f64) -> Result<Vec<f64>> {
    if t < 2 {
        return Err(Error::InvalidParam(format!(
            "chain matrix needs T >= 2, got {t}"
        )));
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParam(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    let mut m = vec![0.0; t * t];
    m[0] = 1.0 - delta * delta;
    for j in 1..t {
        m[j * t + j] = 2.0;
    }
    for j in 0..t - 1 {
        m[j * t + j + 1] = -1.0;
        m[(j + 1) * t + j] = -1.0;
    }
    Ok(m)
}

/// Smallest eigenvalue of the T×T chain matrix minus δ²·e₁e₁ᵀ.
///
/// Nonnegative (up to roundoff) exactly when δ² ≤ 1/T.
pub fn tridiag_psd_margin(t: usize, delta: f64) -> Result<f64> {
    let m = chain_matrix(t, delta)?;
    Ok(symmetric_smallest_eigenvalue(m, t))
}

/// Smallest eigenvalue of a dense symmetric matrix via cyclic Jacobi
/// rotations. Adequate for the desk-scale matrices used here.
pub fn symmetric_smallest_eigenvalue(mut a: Vec<f64>, n: usize) -> f64 {
    assert_eq!(a.len(), n * n);
    if n == 1 {
        return a[0];
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t_rot = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t_rot * t_rot).sqrt();
                let s = t_rot * c;
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t_rot * apq;
                a[q * n + q] = aqq + t_rot * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = c * aip - s * aiq;
                        a[p * n + i] = a[i * n + p];
                        a[i * n + q] = s * aip + c * aiq;
                        a[q * n + i] = a[i * n + q];
                    }
                }
            }
        }
    }
    (0..n).fold(f64::INFINITY, |m, i| m.min(a[i * n + i]))
}
