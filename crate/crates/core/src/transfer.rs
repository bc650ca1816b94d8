//! Row-to-row transfer matrices for the k-state vertex model on open rows.
//!
//! `B_p(φ, φ')` counts the assignments of horizontal-edge states along a row
//! of `p` vertices (with a free dangling edge at each end) compatible with the
//! vertical configurations `φ` below and `φ'` above. It splits as
//! `B_p = Σ_{n=1}^{k-1} A_{n,p}` where `A_{n,p}` fixes the state of the left
//! dangling edge. The components obey the block-Toeplitz recursion
//!
//! ```text
//! block (i, j) of A_{n,p+1} = A_{(n+j-i) mod k, p},   A_{0,p} = 0,   A_{n,0} = [1]
//! ```
//!
//! which is used both to materialize dense matrices and to apply them
//! implicitly without ever storing `(k-1)^p × (k-1)^p` entries.

use std::ops::AddAssign;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::matrix::DenseMatrix;
use crate::row::{config_count, decode};

/// Largest dimension materialized densely unless the caller says otherwise.
pub const DEFAULT_DENSE_BUDGET: u64 = 1 << 14;

/// Which matrix of the decomposition is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferKind {
    /// `A_{n,p}` for `n` in `1..k`.
    Component(u32),
    /// `B_p`.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    Dense(DenseMatrix<u64>),
    Implicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub k: u32,
    pub p: usize,
    pub kind: TransferKind,
    pub storage: Storage,
}

/// Debug export of a dense matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixExport {
    pub k: u32,
    pub p: usize,
    pub n: Option<u32>,
    pub rows: Vec<Vec<u64>>,
}

impl TransferMatrix {
    /// Dense `A_{n,p}` from the block recursion.
    pub fn component(k: u32, n: u32, p: usize, budget: u64) -> Result<Self> {
        let a = build_a_recursive(k, n, p, budget)?;
        Ok(TransferMatrix { k, p, kind: TransferKind::Component(n), storage: Storage::Dense(a) })
    }

    /// Dense `B_p` from the block recursion.
    pub fn full(k: u32, p: usize, budget: u64) -> Result<Self> {
        let b = build_b_recursive(k, p, budget)?;
        Ok(TransferMatrix { k, p, kind: TransferKind::Full, storage: Storage::Dense(b) })
    }

    pub fn implicit(k: u32, p: usize, kind: TransferKind) -> Result<Self> {
        check_k(k)?;
        if let TransferKind::Component(n) = kind {
            check_component(k, n)?;
        }
        config_count(p, k)?;
        Ok(TransferMatrix { k, p, kind, storage: Storage::Implicit })
    }

    pub fn dim(&self) -> usize {
        (self.k as usize - 1).pow(self.p as u32)
    }

    pub fn dense(&self) -> Option<&DenseMatrix<u64>> {
        match &self.storage {
            Storage::Dense(m) => Some(m),
            Storage::Implicit => None,
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        match &self.storage {
            Storage::Dense(m) => m.to_f64().matvec(v),
            Storage::Implicit => matvec_implicit(self.k, self.p, self.kind, v),
        }
    }

    pub fn export(&self) -> Option<MatrixExport> {
        let n = match self.kind {
            TransferKind::Component(n) => Some(n),
            TransferKind::Full => None,
        };
        self.dense().map(|m| MatrixExport { k: self.k, p: self.p, n, rows: m.to_rows() })
    }
}

fn check_component(k: u32, n: u32) -> Result<()> {
    if n == 0 || n >= k {
        return Err(Error::InvalidParameter(format!("component index n = {n} must lie in 1..={}", k - 1)));
    }
    Ok(())
}

fn check_budget(k: u32, p: usize, budget: u64) -> Result<usize> {
    let dim = config_count(p, k)?;
    if dim > budget {
        return Err(Error::BudgetExceeded { dim, budget });
    }
    Ok(dim as usize)
}

/// All components `A_{n,p}` for `n = 0..k` (index 0 holds the zero matrix).
pub fn build_components(k: u32, p: usize, budget: u64) -> Result<Vec<DenseMatrix<u64>>> {
    check_k(k)?;
    check_budget(k, p, budget)?;
    let k = k as usize;
    let mut level: Vec<DenseMatrix<u64>> =
        (0..k).map(|n| DenseMatrix::from_rows(vec![vec![u64::from(n != 0)]]).unwrap()).collect();
    for _ in 0..p {
        let size = level[0].dim();
        let next = (0..k)
            .map(|n| {
                let mut m = DenseMatrix::zeros(size * (k - 1));
                if n == 0 {
                    return m;
                }
                for i in 0..k - 1 {
                    for j in 0..k - 1 {
                        let src = (n + j + k - i) % k;
                        if src != 0 {
                            m.write_block(i * size, j * size, &level[src]);
                        }
                    }
                }
                m
            })
            .collect();
        level = next;
    }
    Ok(level)
}

/// Dense `A_{n,p}` built by the block-Toeplitz recursion.
pub fn build_a_recursive(k: u32, n: u32, p: usize, budget: u64) -> Result<DenseMatrix<u64>> {
    check_k(k)?;
    check_component(k, n)?;
    Ok(build_components(k, p, budget)?.swap_remove(n as usize))
}

/// Dense `B_p = Σ_n A_{n,p}` from the recursion.
pub fn build_b_recursive(k: u32, p: usize, budget: u64) -> Result<DenseMatrix<u64>> {
    let parts = build_components(k, p, budget)?;
    let mut iter = parts.into_iter().skip(1);
    let first = iter.next().expect("k >= 3 gives at least two components");
    iter.try_fold(first, |acc, m| acc.checked_add(&m))
}

/// Number of left-dangling-edge states for which a left-to-right sweep of the
/// row survives every vertex.
fn sweep_count(k: u32, below: &[u32], above: &[u32]) -> u64 {
    (1..k)
        .filter(|&first_left| {
            let mut left = first_left;
            for (&b, &a) in below.iter().zip(above) {
                let up = (k - a) % k;
                let right = (3 * k - (b + up + left) % k) % k;
                if right == 0 {
                    return false;
                }
                left = k - right;
            }
            true
        })
        .count() as u64
}

/// Dense `B_p` by direct enumeration of each row. Independent of the recursion.
pub fn build_b_direct(k: u32, p: usize, budget: u64) -> Result<DenseMatrix<u64>> {
    check_k(k)?;
    if p == 0 {
        return Err(Error::InvalidParameter("direct sweep needs p >= 1".into()));
    }
    let dim = check_budget(k, p, budget)?;
    let configs: Vec<Vec<u32>> = (0..dim as u64).map(|i| decode(i, p, k)).collect::<Result<_>>()?;
    let rows =
        configs.par_iter().map(|below| configs.iter().map(|above| sweep_count(k, below, above)).collect()).collect();
    DenseMatrix::from_rows(rows)
}

/// Applies every component to `v`: returns `out[n] = A_{n,p} v` for `n = 0..k`.
///
/// Cost is `O(p (k-1)^{p+2})` rather than the dense `(k-1)^{2p}`.
pub fn apply_components<T>(k: u32, p: usize, v: &[T]) -> Result<Vec<Vec<T>>>
where
    T: Clone + Zero + AddAssign + Send + Sync,
{
    check_k(k)?;
    let dim = config_count(p, k)? as usize;
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    Ok(apply_rec(k as usize, p, v))
}

fn apply_rec<T>(k: usize, p: usize, v: &[T]) -> Vec<Vec<T>>
where
    T: Clone + Zero + AddAssign + Send + Sync,
{
    if p == 0 {
        let mut out = vec![v.to_vec(); k];
        out[0] = vec![T::zero(); v.len()];
        return out;
    }
    let size = v.len() / (k - 1);
    let sub: Vec<Vec<Vec<T>>> = if v.len() >= 4096 {
        v.par_chunks(size).map(|blk| apply_rec(k, p - 1, blk)).collect()
    } else {
        v.chunks(size).map(|blk| apply_rec(k, p - 1, blk)).collect()
    };
    let mut out = vec![vec![T::zero(); v.len()]; k];
    for (n, out_n) in out.iter_mut().enumerate().skip(1) {
        for i in 0..k - 1 {
            let dst = &mut out_n[i * size..(i + 1) * size];
            for (j, sub_j) in sub.iter().enumerate() {
                let src = (n + j + k - i) % k;
                if src == 0 {
                    continue;
                }
                for (d, s) in dst.iter_mut().zip(&sub_j[src]) {
                    *d += s.clone();
                }
            }
        }
    }
    out
}

/// Matrix-free product with `A_{n,p}` or `B_p`.
pub fn matvec_implicit<T>(k: u32, p: usize, kind: TransferKind, v: &[T]) -> Result<Vec<T>>
where
    T: Clone + Zero + AddAssign + Send + Sync,
{
    if let TransferKind::Component(n) = kind {
        check_k(k)?;
        check_component(k, n)?;
    }
    let mut parts = apply_components(k, p, v)?;
    Ok(match kind {
        TransferKind::Component(n) => parts.swap_remove(n as usize),
        TransferKind::Full => {
            let mut iter = parts.into_iter().skip(1);
            let mut acc = iter.next().expect("k >= 3");
            for part in iter {
                for (a, b) in acc.iter_mut().zip(part) {
                    *a += b;
                }
            }
            acc
        }
    })
}
