//! Finite-size fit of mutual information to the chord-length form
//! `I₂ = (c₂/4)·ln((L/π) sin(π L_A / L)) + b₂`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// `ln((L/π) sin(π L_A / L))`.
pub fn scaling_variable(len: usize, len_a: usize) -> Result<f64> {
    if len_a == 0 || len_a >= len {
        return Err(Error::DegenerateBipartition { len, len_a });
    }
    let l = len as f64;
    Ok((l / PI * (PI * len_a as f64 / l).sin()).ln())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitPoint {
    pub len: usize,
    pub len_a: usize,
    pub i2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub c2: f64,
    pub b2: f64,
    /// Root mean square of the residuals.
    pub rms: f64,
    /// `i2 − (c2/4)·x − b2`, in input order.
    pub residuals: Vec<f64>,
}

/// Two scaling-variable values closer than this (relative) count as one.
const DISTINCT_X_TOLERANCE: f64 = 1e-12;

/// Ordinary least squares of `i2` against [`scaling_variable`].
///
/// Sums are accumulated over the points in a canonical order, so any
/// permutation of the input gives a bit-identical result.
pub fn fit_cft(points: &[FitPoint]) -> Result<FitResult> {
    let xs = points
        .iter()
        .map(|p| scaling_variable(p.len, p.len_a))
        .collect::<Result<Vec<f64>>>()?;

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (p, q) = (&points[i], &points[j]);
        (p.len, p.len_a, p.i2.to_bits()).cmp(&(q.len, q.len_a, q.i2.to_bits()))
    });

    let mut sorted_x: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
    sorted_x.sort_by(f64::total_cmp);
    let distinct = 1 + sorted_x
        .windows(2)
        .filter(|w| w[1] - w[0] > DISTINCT_X_TOLERANCE * w[1].abs().max(1.0))
        .count();
    if points.is_empty() || distinct < 2 {
        return Err(Error::RankDeficientFit(format!(
            "{} points with {} distinct scaling-variable values",
            points.len(),
            if points.is_empty() { 0 } else { distinct }
        )));
    }

    let n = points.len() as f64;
    let mean_x = order.iter().map(|&i| xs[i]).sum::<f64>() / n;
    let mean_y = order.iter().map(|&i| points[i].i2).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &i in &order {
        let dx = xs[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (points[i].i2 - mean_y);
    }
    let slope = sxy / sxx;
    let b2 = mean_y - slope * mean_x;
    let c2 = 4.0 * slope;

    let residuals: Vec<f64> = points.iter().zip(&xs).map(|(p, x)| p.i2 - slope * x - b2).collect();
    let rms = (order.iter().map(|&i| residuals[i] * residuals[i]).sum::<f64>() / n).sqrt();
    Ok(FitResult { c2, b2, rms, residuals })
}

/// Inclusive range of subsystem sizes entering a fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FitWindow {
    pub lo: usize,
    pub hi: usize,
}

impl FitWindow {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty fit window {lo}:{hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// `[⌈L/4⌉, ⌊3L/4⌋]`, keeping away from the chain ends.
    pub fn default_for(len: usize) -> Self {
        Self {
            lo: len.div_ceil(4),
            hi: 3 * len / 4,
        }
    }

    pub fn contains(&self, len_a: usize) -> bool {
        (self.lo..=self.hi).contains(&len_a)
    }
}

impl fmt::Display for FitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for FitWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("fit window {s:?} is not of the form lo:hi"));
        let (lo, hi) = s.trim().split_once(':').ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        Self::new(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(len: usize, c2: f64, b2: f64) -> Vec<FitPoint> {
        (1..len)
            .map(|len_a| FitPoint {
                len,
                len_a,
                i2: c2 / 4.0 * scaling_variable(len, len_a).unwrap() + b2,
            })
            .collect()
    }

    #[test]
    fn scaling_variable_closed_forms() {
        assert!((scaling_variable(32, 16).unwrap() - (32.0 / PI).ln()).abs() < 1e-12);
        assert!((scaling_variable(32, 16).unwrap() - 2.321006).abs() < 1e-6);
        let expected = (20.0 / (PI * 2f64.sqrt())).ln();
        assert!((scaling_variable(20, 5).unwrap() - expected).abs() < 1e-12);
        for len_a in 1..20 {
            let d = scaling_variable(20, len_a).unwrap() - scaling_variable(20, 20 - len_a).unwrap();
            assert!(d.abs() < 1e-14);
        }
        assert!(scaling_variable(20, 0).is_err());
        assert!(scaling_variable(20, 20).is_err());
    }

    #[test]
    fn exact_data_recovered() {
        let fit = fit_cft(&synthetic(20, 1.0, 0.5)).unwrap();
        assert!((fit.c2 - 1.0).abs() < 1e-12);
        assert!((fit.b2 - 0.5).abs() < 1e-12);
        assert!(fit.rms < 1e-12);
    }

    #[test]
    fn two_points_interpolate() {
        let pts = [
            FitPoint { len: 12, len_a: 2, i2: 0.3 },
            FitPoint { len: 12, len_a: 5, i2: 0.7 },
        ];
        let fit = fit_cft(&pts).unwrap();
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn symmetric_pair_is_rank_deficient() {
        let pts = [
            FitPoint { len: 12, len_a: 4, i2: 0.3 },
            FitPoint { len: 12, len_a: 8, i2: 0.31 },
        ];
        assert!(matches!(fit_cft(&pts), Err(Error::RankDeficientFit(_))));
        assert!(matches!(fit_cft(&[]), Err(Error::RankDeficientFit(_))));
    }

    #[test]
    fn residuals_consistent_with_rms() {
        let mut pts = synthetic(16, 0.9, 0.1);
        for (k, p) in pts.iter_mut().enumerate() {
            p.i2 += 0.01 * ((k * 7 % 5) as f64 - 2.0);
        }
        let fit = fit_cft(&pts).unwrap();
        for (p, r) in pts.iter().zip(&fit.residuals) {
            let x = scaling_variable(p.len, p.len_a).unwrap();
            assert!((p.i2 - fit.c2 / 4.0 * x - fit.b2 - r).abs() < 1e-14);
        }
        let rms = (fit.residuals.iter().map(|r| r * r).sum::<f64>() / pts.len() as f64).sqrt();
        assert!((rms - fit.rms).abs() < 1e-14);
    }

    #[test]
    fn window_parsing_and_default() {
        assert_eq!("6:14".parse::<FitWindow>().unwrap(), FitWindow { lo: 6, hi: 14 });
        assert_eq!(" 3 : 4 ".parse::<FitWindow>().unwrap(), FitWindow { lo: 3, hi: 4 });
        assert!("7:3".parse::<FitWindow>().is_err());
        assert!("7".parse::<FitWindow>().is_err());
        assert_eq!(FitWindow::default_for(20), FitWindow { lo: 5, hi: 15 });
        assert_eq!(FitWindow::default_for(10), FitWindow { lo: 3, hi: 7 });
        assert_eq!(FitWindow::new(6, 14).unwrap().to_string(), "6:14");
    }
}
