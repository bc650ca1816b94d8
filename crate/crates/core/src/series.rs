//! Graph expansion of the vertex-model count around the Pauling estimate.
//!
//! With `A(ξᵢ, ξⱼ) ∈ {0, 1}` the compatibility of neighboring vertex
//! configurations, the shifted matrix `a = (A − C)/C`, `C = 1/(k−1)`, has
//! entries `k−2` (compatible) and `−1` (incompatible) and zero row sums, so
//! open-ended graphs drop out. Elementary cycles of length `n` contribute
//! `Tr[aⁿ]/M_kⁿ = (k−2)(k−1)ⁿ/M_kⁿ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::{vertex_configs, vertex_count_closed_form, VertexConfig, LEFT, RIGHT};
use crate::error::{check_k, Error, Result};
use crate::matrix::DenseMatrix;

/// Largest `k` for which the dense `M_k × M_k` matrices are built (`M_6 = 105`).
pub const MAX_DENSE_K: u32 = 6;

/// Compatibility of a configuration with its right-hand neighbor: the left
/// configuration's right edge meets the right configuration's left edge.
#[derive(Debug, Clone)]
pub struct CompatibilityMatrix {
    pub k: u32,
    pub configs: Vec<VertexConfig>,
    /// `A(ξᵢ, ξⱼ)`.
    pub compat: DenseMatrix<i128>,
    /// `a(ξᵢ, ξⱼ) = (k−1)·A − 1`.
    pub shifted: DenseMatrix<i128>,
}

impl CompatibilityMatrix {
    pub fn build(k: u32) -> Result<Self> {
        check_k(k)?;
        if k > MAX_DENSE_K {
            return Err(Error::InvalidParameter(format!(
                "dense compatibility matrices are limited to k <= {MAX_DENSE_K}"
            )));
        }
        let configs = vertex_configs(k)?;
        let n = configs.len();
        let mut compat = DenseMatrix::zeros(n);
        let mut shifted = DenseMatrix::zeros(n);
        let scale = i128::from(k - 1);
        for (i, xi) in configs.iter().enumerate() {
            for (j, xj) in configs.iter().enumerate() {
                let ok = (xi.states[RIGHT] + xj.states[LEFT]) % k == 0;
                compat.set(i, j, i128::from(ok));
                shifted.set(i, j, scale * i128::from(ok) - 1);
            }
        }
        Ok(CompatibilityMatrix { k, configs, compat, shifted })
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn shifted_row_sums(&self) -> Vec<i128> {
        self.shifted.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn shifted_col_sums(&self) -> Vec<i128> {
        self.shifted.transpose().rows().map(|r| r.iter().sum()).collect()
    }

    /// `Tr[aⁿ]` by explicit matrix power.
    pub fn shifted_power_trace(&self, n: u32) -> Result<i128> {
        self.shifted.checked_pow(n)?.trace()
    }
}

fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `M_k / (k−1)²`.
pub fn pauling(k: u32) -> Result<BigRational> {
    let m = vertex_count_closed_form(k)?;
    Ok(rational(m, u64::from(k - 1).pow(2)))
}

/// `Tr[aⁿ] = (k−2)(k−1)ⁿ`.
pub fn shifted_trace_closed_form(k: u32, n: u32) -> Result<BigInt> {
    check_k(k)?;
    Ok(BigInt::from(k - 2) * BigInt::from(k - 1).pow(n))
}

/// `(aⁿ(compatible pair), aⁿ(incompatible pair))` from the two-class recursion
/// started at `(k−2, −1)`.
pub fn shifted_power_classes(k: u32, n: u32) -> Result<(BigInt, BigInt)> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::InvalidParameter("power must be >= 1".into()));
    }
    let km2 = BigInt::from(k - 2);
    let mut comp = km2.clone();
    let mut incomp = BigInt::from(-1);
    for _ in 1..n {
        let diff = &comp - &incomp;
        comp = &km2 * &diff;
        incomp = -diff;
    }
    Ok((comp, incomp))
}

/// `Tr[aⁿ]` from the two-class recursion: `(k−1)²` diagonal configurations are
/// self-compatible, the other `M_k − (k−1)²` are not.
pub fn shifted_trace_by_recursion(k: u32, n: u32) -> Result<BigInt> {
    let (comp, incomp) = shifted_power_classes(k, n)?;
    let self_compatible = BigInt::from(k - 1).pow(2);
    let m = BigInt::from(vertex_count_closed_form(k)?);
    Ok(&self_compatible * comp + (m - self_compatible) * incomp)
}

/// Contribution of an elementary Eulerian cycle on `n` vertices, `Tr[aⁿ]/M_kⁿ`.
///
/// For `k ≤ 6` and `n ≤ 6` the trace is also computed by explicit matrix power
/// and by the two-class recursion, and any disagreement is an error.
pub fn eulerian_cycle_contribution(k: u32, n: u32) -> Result<BigRational> {
    check_k(k)?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    let trace = shifted_trace_closed_form(k, n)?;
    if k <= MAX_DENSE_K && n <= 6 {
        let dense = BigInt::from(CompatibilityMatrix::build(k)?.shifted_power_trace(n)?);
        let rec = shifted_trace_by_recursion(k, n)?;
        if dense != trace || rec != trace {
            return Err(Error::InvalidParameter(format!(
                "Tr[a^{n}] mismatch for k = {k}: closed form {trace}, matrix power {dense}, recursion {rec}"
            )));
        }
    }
    let m = BigInt::from(vertex_count_closed_form(k)?);
    Ok(BigRational::new(trace, m.pow(n)))
}

fn check_triple(k: u32, l: [u32; 3]) -> Result<()> {
    check_k(k)?;
    for &x in &l {
        if x == 0 || x >= k {
            return Err(Error::InvalidEdgeState { state: x, max: k - 1 });
        }
    }
    Ok(())
}

/// `Σ_ξ a(ξ,ξⱼ)a(ξ,ξₗ)a(ξ,ξₘ)` over a vertex with three marked neighbors
/// whose states (seen from the neighbors) are `l1, l2, l3`. Closed form
/// `(k−2) − 2(k−2)² − (k−2)³ + 2`, valid when `l1 + l2 + l3 ≡ 0`.
pub fn non_eulerian_triple(k: u32, l1: u32, l2: u32, l3: u32) -> Result<i64> {
    check_triple(k, [l1, l2, l3])?;
    if !(l1 + l2 + l3).is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!(
            "closed form needs l1 + l2 + l3 = 0 mod k; got {l1} + {l2} + {l3} mod {k}"
        )));
    }
    let x = i64::from(k) - 2;
    Ok(x - 2 * x * x - x * x * x + 2)
}

/// How the configurations at the central vertex split by compatibility with
/// the three neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCases {
    /// Compatible with all three.
    pub all: u64,
    /// Compatible with exactly two; index = the incompatible neighbor.
    pub two: [u64; 3],
    /// Compatible with exactly one; index = the compatible neighbor.
    pub one: [u64; 3],
    /// Compatible with none.
    pub none: u64,
}

impl TripleCases {
    /// The weighted sum `Σ a·a·a` these counts imply.
    pub fn weighted_sum(&self, k: u32) -> i64 {
        let x = i64::from(k) - 2;
        let two: u64 = self.two.iter().sum();
        let one: u64 = self.one.iter().sum();
        self.all as i64 * x * x * x - two as i64 * x * x + one as i64 * x - self.none as i64
    }
}

/// Classifies every configuration `(a1, a2, a3, a)` at the central vertex,
/// where `a1..a3` face the three neighbors and `a` is the free edge.
pub fn triple_cases_brute_force(k: u32, l: [u32; 3]) -> Result<TripleCases> {
    check_triple(k, l)?;
    let mut cases = TripleCases { all: 0, two: [0; 3], one: [0; 3], none: 0 };
    for a1 in 1..k {
        for a2 in 1..k {
            for a3 in 1..k {
                if (a1 + a2 + a3) % k == 0 {
                    continue;
                }
                let ok = [(a1 + l[0]).is_multiple_of(k), (a2 + l[1]).is_multiple_of(k), (a3 + l[2]).is_multiple_of(k)];
                match ok.iter().filter(|&&b| b).count() {
                    3 => cases.all += 1,
                    2 => cases.two[ok.iter().position(|&b| !b).expect("one false")] += 1,
                    1 => cases.one[ok.iter().position(|&b| b).expect("one true")] += 1,
                    _ => cases.none += 1,
                }
            }
        }
    }
    Ok(cases)
}

/// The same classification from counting arguments, without enumerating
/// the configurations.
pub fn triple_cases_counted(k: u32, l: [u32; 3]) -> Result<TripleCases> {
    check_triple(k, l)?;
    let kk = k;
    let md = |x: u32| x % kk;
    // Allowed states on the edge facing neighbor i when incompatible with it.
    let allowed = |li: u32, s: u32| s != 0 && md(s + li) != 0;
    let x = u64::from(k - 2);

    let all = u64::from(md(l[0] + l[1] + l[2]) != 0);
    let two_excluding = |y: u32, z: u32, w: u32| x - u64::from(allowed(w, md(y + z)));
    let one_only = |y: u32, u: u32, w: u32| {
        let hits = [md(y), md(y + w)];
        let n = (1..k).filter(|&a| allowed(u, a) && hits.contains(&a)).count() as u64;
        x * x - (x - n)
    };
    let (l1, l2, l3) = (l[0], l[1], l[2]);
    let eq_l2 = (1..k).filter(|&a| allowed(l1, a) && a == md(l2)).count() as u64;
    let eq_l3 = (1..k).filter(|&a| allowed(l1, a) && (a == md(l3) || a == md(l2 + l3))).count() as u64;
    let none = x * x * x - (x * x - (2 * x - eq_l2 - eq_l3));
    Ok(TripleCases {
        all,
        two: [two_excluding(l2, l3, l1), two_excluding(l1, l3, l2), two_excluding(l1, l2, l3)],
        one: [one_only(l1, l2, l3), one_only(l2, l3, l1), one_only(l3, l1, l2)],
        none,
    })
}

/// Non-Eulerian triple sum by explicit summation over all `M_k` configurations,
/// using the built `a` matrix semantics (`k−2` compatible, `−1` otherwise).
pub fn non_eulerian_triple_brute_force(k: u32, l: [u32; 3]) -> Result<i64> {
    check_triple(k, l)?;
    let x = i64::from(k) - 2;
    let weight = |ok: bool| if ok { x } else { -1 };
    let mut total = 0i64;
    for xi in vertex_configs(k)? {
        // three edges face the neighbors, the fourth is free
        let s = xi.states;
        total += weight((s[0] + l[0]).is_multiple_of(k))
            * weight((s[1] + l[1]).is_multiple_of(k))
            * weight((s[2] + l[2]).is_multiple_of(k));
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub n: u32,
    #[serde(with = "ratio_string")]
    pub value: BigRational,
}

/// Pauling term, cycle corrections and the resulting estimate of `W(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub k: u32,
    #[serde(rename = "M_k")]
    pub m_k: u64,
    #[serde(with = "ratio_string")]
    pub pauling: BigRational,
    pub corrections: Vec<Correction>,
    #[serde(with = "ratio_string")]
    pub estimate_exact: BigRational,
    pub estimate: f64,
    /// Three-edge (non-Eulerian) vertex sum, nonzero for `k > 3` and not included in the estimate.
    pub non_eulerian_triple: i64,
}

/// `W(k) ≈ (M_k/(k−1)²)·(1 + (k−2)(k−1)⁴/M_k⁴)`.
pub fn w_estimate(k: u32) -> Result<SeriesEstimate> {
    check_k(k)?;
    let m_k = vertex_count_closed_form(k)?;
    let pauling = pauling(k)?;
    let square = BigRational::new(shifted_trace_closed_form(k, 4)?, BigInt::from(m_k).pow(4));
    let estimate_exact = &pauling * (BigRational::one() + &square);
    let estimate = ratio_to_f64(&estimate_exact);
    let triple = non_eulerian_triple(k, 1, 1, k - 2)?;
    Ok(SeriesEstimate {
        k,
        m_k,
        pauling,
        corrections: vec![Correction { n: 4, value: square }],
        estimate_exact,
        estimate,
        non_eulerian_triple: triple,
    })
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    // Scale numerator and denominator into f64 range before dividing.
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

mod ratio_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        let (n, den) = text.split_once('/').ok_or_else(|| D::Error::custom("expected num/den"))?;
        Ok(BigRational::new(n.parse().map_err(D::Error::custom)?, den.parse().map_err(D::Error::custom)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn compatibility_row_counts() {
        for k in 3..=MAX_DENSE_K {
            let c = CompatibilityMatrix::build(k).unwrap();
            assert_eq!(c.dim() as u64, vertex_count_closed_form(k).unwrap());
            let ones = i128::from((k - 1).pow(2) - (k - 2));
            for row in c.compat.rows() {
                assert_eq!(row.iter().sum::<i128>(), ones);
            }
            assert!(c.shifted_row_sums().iter().all(|&s| s == 0));
            assert!(c.shifted_col_sums().iter().all(|&s| s == 0));
        }
        assert_eq!(CompatibilityMatrix::build(3).unwrap().dim(), 6);
        assert_eq!(CompatibilityMatrix::build(4).unwrap().dim(), 21);
        assert!(CompatibilityMatrix::build(7).is_err());
    }

    #[test]
    fn two_class_powers() {
        for k in 3..=MAX_DENSE_K {
            let c = CompatibilityMatrix::build(k).unwrap();
            for n in 1..=6 {
                let power = c.shifted.checked_pow(n).unwrap();
                let (comp, incomp) = shifted_power_classes(k, n).unwrap();
                let x = i128::from(k - 1);
                assert_eq!(BigInt::from(x.pow(n - 1) * (x - 1)), comp);
                assert_eq!(BigInt::from(-x.pow(n - 1)), incomp);
                for i in 0..c.dim() {
                    for j in 0..c.dim() {
                        let want = if *c.compat.get(i, j) == 1 { &comp } else { &incomp };
                        assert_eq!(&BigInt::from(*power.get(i, j)), want);
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_contributions() {
        assert_eq!(eulerian_cycle_contribution(3, 4).unwrap(), r(1, 81));
        assert_eq!(eulerian_cycle_contribution(3, 6).unwrap(), r(64, 46656));
        assert_eq!(eulerian_cycle_contribution(4, 4).unwrap(), r(162, 194481));
        assert!(eulerian_cycle_contribution(4, 2).is_err());
        // beyond the dense range only the closed form is used
        assert_eq!(
            eulerian_cycle_contribution(9, 8).unwrap(),
            BigRational::new(
                BigInt::from(7) * BigInt::from(8).pow(8),
                BigInt::from(vertex_count_closed_form(9).unwrap()).pow(8),
            )
        );
    }

    #[test]
    fn triple_examples() {
        assert_eq!(non_eulerian_triple(3, 1, 1, 1).unwrap(), 0);
        assert_eq!(non_eulerian_triple(4, 1, 1, 2).unwrap(), -12);
        assert_eq!(non_eulerian_triple(5, 1, 2, 2).unwrap(), -40);
        assert_eq!(non_eulerian_triple_brute_force(5, [1, 2, 2]).unwrap(), -40);
        assert!(matches!(non_eulerian_triple(4, 1, 1, 1), Err(Error::InvalidParameter(_))));
        assert!(non_eulerian_triple(4, 0, 1, 3).is_err());
    }

    #[test]
    fn triple_closed_form_matches_summation() {
        for k in 3..=6 {
            for l1 in 1..k {
                for l2 in 1..k {
                    for l3 in 1..k {
                        let cases = triple_cases_brute_force(k, [l1, l2, l3]).unwrap();
                        assert_eq!(cases, triple_cases_counted(k, [l1, l2, l3]).unwrap(), "k={k} l=({l1},{l2},{l3})");
                        let brute = non_eulerian_triple_brute_force(k, [l1, l2, l3]).unwrap();
                        assert_eq!(cases.weighted_sum(k), brute);
                        if (l1 + l2 + l3) % k == 0 {
                            assert_eq!(non_eulerian_triple(k, l1, l2, l3).unwrap(), brute);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn estimates() {
        let three = w_estimate(3).unwrap();
        assert_eq!(three.pauling, r(3, 2));
        assert_eq!(three.estimate_exact, r(3, 2) * (r(1, 1) + r(1, 81)));
        assert!((three.estimate - 1.5185185185185186).abs() < 1e-15);
        assert_eq!(three.non_eulerian_triple, 0);

        let four = w_estimate(4).unwrap();
        assert_eq!(four.m_k, 21);
        assert_eq!(four.pauling, r(21, 9));
        assert_eq!(four.corrections[0].value, r(162, 194481));
        assert!((four.estimate - 2.3353).abs() < 1e-4);
        assert_eq!(four.non_eulerian_triple, -12);
    }

    #[test]
    fn large_k_tracks_k() {
        let ratios: Vec<f64> =
            [10u32, 100, 1000].iter().map(|&k| w_estimate(k).unwrap().estimate / f64::from(k)).collect();
        assert!(ratios.windows(2).all(|w| w[0] < w[1]), "{ratios:?}");
        assert!(ratios[1] > 0.9 && ratios[1] < 1.1);
        assert!((ratios[2] - 1.0).abs() < 0.01);
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_value(w_estimate(3).unwrap()).unwrap();
        assert_eq!(json["M_k"], 6);
        assert_eq!(json["pauling"], "3/2");
        assert_eq!(json["corrections"][0]["n"], 4);
        assert_eq!(json["corrections"][0]["value"], "1/81");
        let back: SeriesEstimate = serde_json::from_value(json).unwrap();
        assert_eq!(back, w_estimate(3).unwrap());
    }
}
