//! Exact trace identities for the three-color transfer matrices and the
//! closed-form partition functions of narrow cylinders.
//!
//! For `k = 3`, `B_p = A_p + A_pᵀ`, and
//!
//! * `Tr[A_pⁿ] = 2^p`,
//! * `Tr[A_pⁿ A_pᵀ] = (n+2)^p`,
//! * `x_p = Tr[A_p² (A_pᵀ)²]`, `y_p = Tr[A_p A_pᵀ A_p A_pᵀ]` satisfy
//!   `(x_p, y_p)ᵀ = [[4,2],[4,3]]^p (1,1)ᵀ`.
//!
//! These give `Tr[B_p^m]` in closed form for `m ≤ 4`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::matrix::DenseMatrix;
use crate::transfer::{build_a_recursive, build_b_recursive, matvec_implicit, TransferKind};

/// A product of `A` and `Aᵀ` factors, written over the letters `A` and `T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord(Vec<Letter>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    T,
}

impl TraceWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        TraceWord(letters)
    }

    /// `Aⁿ (Aᵀ)^t`.
    pub fn powers(n: usize, t: usize) -> Self {
        TraceWord(std::iter::repeat_n(Letter::A, n).chain(std::iter::repeat_n(Letter::T, t)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Lexicographically least cyclic rotation. Words with equal canonical
    /// forms have equal traces.
    pub fn canonical(&self) -> TraceWord {
        let n = self.0.len();
        (0..n.max(1))
            .map(|s| TraceWord(self.0.iter().cycle().skip(s).take(n).copied().collect()))
            .min()
            .unwrap_or_else(|| self.clone())
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "A",
                Letter::T => "T",
            })?;
        }
        Ok(())
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'T' => Ok(Letter::T),
                other => Err(Error::Parse(format!("trace word letter {other:?} is not A or T"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TraceWord)
    }
}

/// Exact traces of words in `A_p` and `A_pᵀ` for three colors, evaluated densely
/// and cached by canonical rotation.
#[derive(Debug, Clone)]
pub struct TraceLedger {
    pub k: u32,
    pub p: usize,
    a: DenseMatrix<BigUint>,
    at: DenseMatrix<BigUint>,
    entries: BTreeMap<TraceWord, BigUint>,
}

impl TraceLedger {
    pub fn new(p: usize, budget: u64) -> Result<Self> {
        let a = build_a_recursive(3, 1, p, budget)?.to_biguint();
        let at = a.transpose();
        Ok(TraceLedger { k: 3, p, a, at, entries: BTreeMap::new() })
    }

    pub fn a(&self) -> &DenseMatrix<BigUint> {
        &self.a
    }

    pub fn at(&self) -> &DenseMatrix<BigUint> {
        &self.at
    }

    pub fn trace(&mut self, word: &TraceWord) -> Result<BigUint> {
        let key = word.canonical();
        if let Some(v) = self.entries.get(&key) {
            return Ok(v.clone());
        }
        let mut prod = DenseMatrix::<BigUint>::identity(self.a.dim());
        for l in key.letters() {
            prod = prod.checked_mul(match l {
                Letter::A => &self.a,
                Letter::T => &self.at,
            })?;
        }
        let t = prod.trace()?;
        self.entries.insert(key, t.clone());
        Ok(t)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TraceWord, &BigUint)> {
        self.entries.iter()
    }
}

/// `Tr[A_pⁿ] = 2^p`.
pub fn trace_power(p: usize, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParameter("trace_power needs n >= 1".into()));
    }
    Ok(BigUint::from(2u32).pow(p as u32))
}

/// `Tr[A_pⁿ A_pᵀ] = (n+2)^p`.
pub fn trace_power_transpose(p: usize, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParameter("trace_power_transpose needs n >= 1".into()));
    }
    Ok(BigUint::from(n + 2).pow(p as u32))
}

/// `(x_p, y_p) = [[4,2],[4,3]]^p (1,1)ᵀ` in exact arithmetic.
pub fn coupled_traces(p: usize) -> (BigUint, BigUint) {
    let step = DenseMatrix::from_rows(vec![
        vec![BigUint::from(4u32), BigUint::from(2u32)],
        vec![BigUint::from(4u32), BigUint::from(3u32)],
    ])
    .expect("square");
    let power = step.checked_pow(p as u32).expect("BigUint never overflows");
    let x = power.get(0, 0) + power.get(0, 1);
    let y = power.get(1, 0) + power.get(1, 1);
    (x, y)
}

fn check_strip_m(m: u32) -> Result<()> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidParameter(format!("closed forms exist only for m in 2..=4, got {m}")));
    }
    Ok(())
}

/// Closed-form `Tr[B_p^m]` for the three-color `m × p` cylinder, `m ∈ {2,3,4}`.
pub fn strip_count(m: u32, p: usize) -> Result<BigUint> {
    check_strip_m(m)?;
    if p == 0 {
        return Err(Error::InvalidParameter("strip_count needs p >= 1".into()));
    }
    let pp = p as u32;
    let two = BigUint::from(2u32);
    Ok(match m {
        2 => &two * (two.pow(pp) + BigUint::from(3u32).pow(pp)),
        3 => two.pow(pp + 1) + BigUint::from(6u32) * BigUint::from(4u32).pow(pp),
        _ => {
            let (x, y) = coupled_traces(p);
            &two * trace_power(p, 4)?
                + BigUint::from(8u32) * trace_power_transpose(p, 3)?
                + BigUint::from(4u32) * x
                + &two * y
        }
    })
}

/// `lim_{p→∞} strip_count(m, p)^{1/(mp)}`.
pub fn strip_limit(m: u32) -> Result<f64> {
    check_strip_m(m)?;
    Ok(match m {
        2 => 3f64.sqrt(),
        3 => 4f64.powf(1.0 / 3.0),
        _ => ((7.0 + 33f64.sqrt()) / 2.0).powf(0.25),
    })
}

/// `Tr[B_p^m]` for any `k` by dense exact multiplication.
pub fn cylinder_count(k: u32, m: u32, p: usize, budget: u64) -> Result<BigUint> {
    check_k(k)?;
    if m == 0 {
        return Err(Error::InvalidParameter("cylinder needs m >= 1".into()));
    }
    let b = build_b_recursive(k, p, budget)?;
    match b.to_u128().checked_pow(m).and_then(|x| x.trace()) {
        Ok(t) => Ok(BigUint::from(t)),
        Err(Error::Overflow) => b.to_biguint().checked_pow(m)?.trace(),
        Err(e) => Err(e),
    }
}

/// Sum of all entries of `B_p^{m-1}`: the open `m`-layer lattice count.
pub fn open_lattice_count(k: u32, m: u32, p: usize) -> Result<BigUint> {
    check_k(k)?;
    if m < 2 {
        return Err(Error::InvalidParameter("open lattice needs m >= 2".into()));
    }
    let dim = crate::row::config_count(p, k)? as usize;
    let mut v = vec![BigUint::one(); dim];
    for _ in 0..m - 1 {
        v = matvec_implicit(k, p, TransferKind::Full, &v)?;
    }
    Ok(v.into_iter().fold(BigUint::zero(), |acc, x| acc + x))
}

/// `Z^{1/(mp)}` evaluated through logarithms so large `Z` never hits `f64` overflow.
pub fn per_site(z: &BigUint, sites: u64) -> f64 {
    if z.is_zero() || sites == 0 {
        return 0.0;
    }
    let bits = z.bits();
    let shift = bits.saturating_sub(64);
    let top = (z >> shift).to_f64().unwrap_or(f64::MAX);
    ((top.ln() + shift as f64 * std::f64::consts::LN_2) / sites as f64).exp()
}

/// JSON record for a finite-lattice count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripRecord {
    pub m: u32,
    pub p: usize,
    #[serde(rename = "Z")]
    pub z: String,
    pub per_site: f64,
}

impl StripRecord {
    pub fn new(m: u32, p: usize, z: &BigUint) -> Self {
        StripRecord { m, p, z: z.to_string(), per_site: per_site(z, u64::from(m) * p as u64) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::DEFAULT_DENSE_BUDGET;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(trace_power(0, 5).unwrap(), big(1));
        assert_eq!(trace_power(3, 2).unwrap(), big(8));
        assert_eq!(trace_power(5, 7).unwrap(), big(32));
        assert_eq!(trace_power_transpose(0, 3).unwrap(), big(1));
        assert_eq!(trace_power_transpose(2, 1).unwrap(), big(9));
        assert_eq!(trace_power_transpose(4, 2).unwrap(), big(256));
        assert!(trace_power(2, 0).is_err());
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_count(2, 1).unwrap(), big(10));
        assert_eq!(strip_count(2, 3).unwrap(), big(70));
        assert_eq!(strip_count(3, 2).unwrap(), big(104));
        // x_1 = 6, y_1 = 7, Tr[A^4] = 2, Tr[A^3 A^T] = 5
        assert_eq!(coupled_traces(1), (big(6), big(7)));
        assert_eq!(strip_count(4, 1).unwrap(), big(82));
        assert!(strip_count(5, 1).is_err());
        assert!(strip_count(1, 1).is_err());
    }

    #[test]
    fn limits() {
        assert!((strip_limit(2).unwrap() - 1.7320508075688772).abs() < 1e-15);
        assert!((strip_limit(3).unwrap() - 1.5874).abs() < 1e-4);
        assert!((strip_limit(4).unwrap() - 1.589).abs() < 1e-3);
    }

    #[test]
    fn ledger_dense_traces() {
        let mut ledger = TraceLedger::new(4, DEFAULT_DENSE_BUDGET).unwrap();
        assert_eq!(ledger.trace(&"AAA".parse().unwrap()).unwrap(), big(16));
        assert_eq!(ledger.trace(&"AAT".parse().unwrap()).unwrap(), big(256));
        // rotations share one entry
        assert_eq!(ledger.trace(&"TAA".parse().unwrap()).unwrap(), big(256));
        assert_eq!(ledger.entries().count(), 2);
        assert!("AXT".parse::<TraceWord>().is_err());
    }

    #[test]
    fn canonical_rotation() {
        let w: TraceWord = "TAAT".parse().unwrap();
        assert_eq!(w.canonical().to_string(), "AATT");
        assert_eq!(TraceWord::powers(2, 1).to_string(), "AAT");
    }

    #[test]
    fn open_examples() {
        assert_eq!(open_lattice_count(3, 2, 1).unwrap(), big(6));
        assert_eq!(open_lattice_count(3, 3, 1).unwrap(), big(18));
        let b2 = build_b_recursive(3, 2, DEFAULT_DENSE_BUDGET).unwrap();
        assert_eq!(open_lattice_count(3, 2, 2).unwrap(), big(b2.sum_entries().unwrap()));
        assert!(open_lattice_count(3, 1, 2).is_err());
    }

    #[test]
    fn cylinder_matches_closed_form_small() {
        for m in 2..=4 {
            for p in 1..=5 {
                assert_eq!(cylinder_count(3, m, p, DEFAULT_DENSE_BUDGET).unwrap(), strip_count(m, p).unwrap());
            }
        }
    }

    #[test]
    fn per_site_of_large_numbers() {
        let z = BigUint::from(3u32).pow(2000);
        assert!((per_site(&z, 1000) - 9.0).abs() < 1e-9);
        assert!((per_site(&big(81), 4) - 3.0).abs() < 1e-12);
    }
}
