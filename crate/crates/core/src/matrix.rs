//! Small dense square matrices over exact integer types.

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Entry types usable in exact matrix arithmetic. Overflow is reported, never wrapped.
pub trait Exact: Clone + Zero + One + CheckedAdd + CheckedMul + Send + Sync + PartialEq + std::fmt::Debug {}

impl<T> Exact for T where T: Clone + Zero + One + CheckedAdd + CheckedMul + Send + Sync + PartialEq + std::fmt::Debug {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend(row);
        }
        Ok(DenseMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Copies `block` into the sub-matrix whose top-left corner is `(row, col)`.
    pub fn write_block(&mut self, row: usize, col: usize, block: &DenseMatrix<T>) {
        for i in 0..block.dim {
            let dst = (row + i) * self.dim + col;
            self.data[dst..dst + block.dim].clone_from_slice(block.row(i));
        }
    }

    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        let mut out = Self::zeros(size);
        for i in 0..size {
            let src = (row + i) * self.dim + col;
            out.data[i * size..(i + 1) * size].clone_from_slice(&self.data[src..src + size]);
        }
        out
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Exact> DenseMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix { dim: self.dim, data })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let n = self.dim;
        if n != other.dim {
            return Err(Error::DimensionMismatch { expected: n, got: other.dim });
        }
        let mut data = vec![T::zero(); n * n];
        if n == 0 {
            return Ok(DenseMatrix { dim: 0, data });
        }
        data.par_chunks_mut(n).enumerate().try_for_each(|(i, out)| {
            for (l, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(l)) {
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.checked_mul(b).ok_or(Error::Overflow)?;
                    *o = o.checked_add(&prod).ok_or(Error::Overflow)?;
                }
            }
            Ok::<(), Error>(())
        })?;
        Ok(DenseMatrix { dim: n, data })
    }

    pub fn checked_pow(&self, exp: u32) -> Result<Self> {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn trace(&self) -> Result<T> {
        (0..self.dim).try_fold(T::zero(), |acc, i| acc.checked_add(self.get(i, i)).ok_or(Error::Overflow))
    }

    pub fn sum_entries(&self) -> Result<T> {
        self.data.iter().try_fold(T::zero(), |acc, x| acc.checked_add(x).ok_or(Error::Overflow))
    }
}

impl DenseMatrix<u64> {
    pub fn to_u128(&self) -> DenseMatrix<u128> {
        self.map(|&x| u128::from(x))
    }

    pub fn to_biguint(&self) -> DenseMatrix<BigUint> {
        self.map(|&x| BigUint::from(x))
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        self.map(|&x| x as f64)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

impl DenseMatrix<f64> {
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self.rows().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }
}

/// Lossless `u128 -> u64` narrowing, used when a product is known to be small.
pub fn narrow(m: &DenseMatrix<u128>) -> Result<DenseMatrix<u64>> {
    let data = m.data.iter().map(|x| x.to_u64().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
    Ok(DenseMatrix { dim: m.dim, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<u64>>) -> DenseMatrix<u64> {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn multiply_and_power() {
        let b = m(vec![vec![2, 1], vec![1, 2]]);
        assert_eq!(b.checked_mul(&b).unwrap(), m(vec![vec![5, 4], vec![4, 5]]));
        assert_eq!(b.checked_pow(0).unwrap(), DenseMatrix::identity(2));
        // eigenvalues 3 and 1
        assert_eq!(b.checked_pow(4).unwrap().trace().unwrap(), 82);
    }

    #[test]
    fn overflow_is_reported() {
        let big = m(vec![vec![u64::MAX / 2 + 1]]);
        assert_eq!(big.checked_add(&big), Err(Error::Overflow));
        assert_eq!(big.checked_mul(&big), Err(Error::Overflow));
        let wide = big.to_u128();
        assert!(wide.checked_mul(&wide).is_ok());
    }

    #[test]
    fn blocks() {
        let mut a = DenseMatrix::<u64>::zeros(4);
        let b = m(vec![vec![1, 2], vec![3, 4]]);
        a.write_block(2, 0, &b);
        assert_eq!(*a.get(3, 1), 4);
        assert_eq!(a.block(2, 0, 2), b);
        assert_eq!(a.transpose().block(0, 2, 2), b.transpose());
        assert!(!a.is_symmetric());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(DenseMatrix::from_rows(vec![vec![1u64, 2], vec![3]]).is_err());
    }
}
