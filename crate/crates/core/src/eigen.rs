//! Dominant eigenvalue of the row transfer matrix by power iteration.

use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::transfer::{matvec_implicit, TransferKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once `‖Bv − λv‖∞ / λ` drops below this (with `‖v‖∞ = 1`).
    pub tolerance: f64,
    pub max_iterations: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { tolerance: 1e-12, max_iterations: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub k: u32,
    pub p: usize,
    pub lambda_max: f64,
    /// `lambda_max^(1/p)`.
    pub per_site_estimate: f64,
    pub iterations: u64,
    pub residual: f64,
}

/// Largest eigenvalue of `B_p` for `k` colors, applied matrix-free.
pub fn lambda_max(k: u32, p: usize, opts: PowerOptions) -> Result<EigenResult> {
    check_k(k)?;
    if p == 0 {
        return Err(Error::InvalidParameter("lambda_max needs p >= 1".into()));
    }
    let (lambda, iterations, residual) = power_iteration(
        |v| matvec_implicit(k, p, TransferKind::Full, v),
        crate::row::config_count(p, k)? as usize,
        opts,
    )?;
    Ok(EigenResult { k, p, lambda_max: lambda, per_site_estimate: lambda.powf(1.0 / p as f64), iterations, residual })
}

/// Power iteration for a symmetric nonnegative operator, started from the
/// all-ones vector. Returns `(λ, iterations, residual)`.
pub fn power_iteration<F>(apply: F, dim: usize, opts: PowerOptions) -> Result<(f64, u64, f64)>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut v = vec![1.0; dim];
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let w = apply(&v)?;
        let num: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        let lambda = num / den;
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(Error::NonConvergence { iterations: it, residual });
        }
        residual = v.iter().zip(&w).map(|(a, b)| (b - lambda * a).abs()).fold(0.0, f64::max) / lambda;
        let norm = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if residual < opts.tolerance {
            return Ok((lambda, it, residual));
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Err(Error::NonConvergence { iterations: opts.max_iterations, residual })
}
