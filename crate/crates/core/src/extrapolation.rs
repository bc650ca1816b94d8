//! Least-squares fits of a width sequence to a polynomial in `1/p`, giving the
//! `p → ∞` limit as the constant coefficient.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DEGREE: usize = 5;
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// `a_0 … a_d`, so that `value ≈ Σ a_i p^{-i}`.
    pub coefficients: Vec<f64>,
    pub degree: usize,
    pub residual_rms: f64,
    /// 2-norm condition number of the column-scaled design matrix.
    pub condition_number: f64,
    pub data: Vec<(f64, f64)>,
}

impl FitResult {
    pub fn limit(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn eval(&self, p: f64) -> f64 {
        // Horner in 1/p
        let x = 1.0 / p;
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Unweighted least-squares fit of `value ≈ Σ_{i=0}^{degree} a_i p^{-i}`.
pub fn fit_inverse_poly(data: &[(f64, f64)], degree: usize) -> Result<FitResult> {
    if degree > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {degree} exceeds {MAX_DEGREE}")));
    }
    let cols = degree + 1;
    if data.len() < cols {
        return Err(Error::InvalidParameter(format!("{} points cannot determine {cols} coefficients", data.len())));
    }
    if let Some(&(p, _)) = data.iter().find(|(p, v)| !(p.is_finite() && *p >= 1.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!("width {p} must be finite and >= 1")));
    }
    let mut ps: Vec<f64> = data.iter().map(|d| d.0).collect();
    ps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if let Some(w) = ps.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RankDeficient(format!("duplicate width {}", w[0])));
    }
    let distinct = ps.len();
    if distinct < cols {
        return Err(Error::RankDeficient(format!("{distinct} distinct widths for {cols} coefficients")));
    }

    let rows = data.len();
    let mut design = DMatrix::from_fn(rows, cols, |r, c| data[r].0.powi(-(c as i32)));
    let scales: Vec<f64> = (0..cols).map(|c| design.column(c).norm()).collect();
    for (c, s) in scales.iter().enumerate() {
        design.column_mut(c).unscale_mut(*s);
    }
    let rhs = DVector::from_iterator(rows, data.iter().map(|d| d.1));

    let svd = design.clone().svd(true, true);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if min.is_nan() || min <= max * 1e-14 {
        return Err(Error::RankDeficient(format!("singular values span {max:e} to {min:e}")));
    }
    let scaled = svd.solve(&rhs, 0.0).map_err(|e| Error::RankDeficient(e.to_string()))?;
    let coefficients: Vec<f64> = scaled.iter().zip(&scales).map(|(x, s)| x / s).collect();

    let fitted = &design * &scaled;
    let residual_rms = ((&fitted - &rhs).norm_squared() / rows as f64).sqrt();
    Ok(FitResult { coefficients, degree, residual_rms, condition_number: max / min, data: data.to_vec() })
}

/// Reads `p,value` rows (with that header) from CSV text.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "value" {
        return Err(Error::Parse(format!(
            "expected header `p,value`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader.deserialize::<(f64, f64)>().map(|row| row.map_err(|e| Error::Parse(e.to_string()))).collect()
}

/// Gnuplot data: block 0 holds the data points, block 1 the fitted curve
/// sampled `samples` times across the data range.
pub fn gnuplot_data(fit: &FitResult, samples: usize) -> String {
    let mut out = String::new();
    writeln!(out, "# data points: p value").unwrap();
    for (p, v) in &fit.data {
        writeln!(out, "{p} {v}").unwrap();
    }
    let lo = fit.data.iter().map(|d| d.0).fold(f64::INFINITY, f64::min);
    let hi = fit.data.iter().map(|d| d.0).fold(f64::NEG_INFINITY, f64::max);
    writeln!(out, "\n\n# fitted curve: p value (limit a0 = {})", fit.limit()).unwrap();
    let n = samples.max(2);
    for i in 0..n {
        let p = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        writeln!(out, "{p} {}", fit.eval(p)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data() {
        let data: Vec<(f64, f64)> = (1..=10).map(|p| (p as f64, 2.5)).collect();
        for d in 0..=5 {
            let fit = fit_inverse_poly(&data, d).unwrap();
            assert!((fit.limit() - 2.5).abs() < 1e-12);
            assert!(fit.coefficients[1..].iter().all(|c| c.abs() < 1e-9), "{:?}", fit.coefficients);
            assert!(fit.residual_rms < 1e-12);
        }
    }

    #[test]
    fn synthetic_round_trip() {
        let truth = [1.5, 0.3, -0.1];
        let data: Vec<(f64, f64)> = (1..=10)
            .map(|p| {
                let x = 1.0 / p as f64;
                (p as f64, truth[0] + truth[1] * x + truth[2] * x * x)
            })
            .collect();
        let fit = fit_inverse_poly(&data, 2).unwrap();
        for (c, t) in fit.coefficients.iter().zip(truth) {
            assert!((c - t).abs() < 1e-10);
        }
        assert!((fit.eval(4.0) - data[3].1).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let data = vec![(1.0, 1.0), (2.0, 2.0), (2.0, 3.0)];
        assert!(matches!(fit_inverse_poly(&data, 1), Err(Error::RankDeficient(_))));
        assert!(fit_inverse_poly(&data[..2], 2).is_err());
        assert!(fit_inverse_poly(&[(0.5, 1.0), (2.0, 1.0)], 1).is_err());
        assert!(fit_inverse_poly(&data, 9).is_err());
    }

    #[test]
    fn csv_parsing() {
        let rows = parse_csv("p,value\n1,3.0\n2, 2.13578\n").unwrap();
        assert_eq!(rows, vec![(1.0, 3.0), (2.0, 2.13578)]);
        assert!(parse_csv("width,value\n1,2\n").is_err());
        assert!(parse_csv("p,value\n1,abc\n").is_err());
    }

    #[test]
    fn gnuplot_blocks() {
        let data: Vec<(f64, f64)> = (1..=4).map(|p| (p as f64, 1.0 + 1.0 / p as f64)).collect();
        let fit = fit_inverse_poly(&data, 1).unwrap();
        let text = gnuplot_data(&fit, 5);
        assert!(text.starts_with('#'));
        assert_eq!(text.split("\n\n\n").count(), 2);
        let last = text.lines().last().unwrap();
        let cols: Vec<f64> = last.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(cols.len(), 2);
        assert!((cols[1] - 1.25).abs() < 1e-12);
    }
}
