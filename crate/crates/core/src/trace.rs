//! Sampled curves returned by the solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// A probability sampled on a time grid (units of 1/Γ₁).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTrace {
    pub label: String,
    pub time_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: SystemParams,
}

impl ProbabilityTrace {
    pub fn from_fn(
        label: impl Into<String>,
        params: &SystemParams,
        times: &[f64],
        mut f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        check_time_grid(times)?;
        let values = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            label: label.into(),
            time_grid: times.to_vec(),
            values,
            params: *params,
        })
    }

    /// Largest pointwise difference to another trace on the same grid.
    pub fn sup_distance(&self, other: &ProbabilityTrace) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which spectrum a [`SpectrumTrace`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    ExchangeEmission,
    Raman,
    InputPulse,
}

/// A spectrum sampled on a detuning grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub kind: SpectrumKind,
    pub detuning_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Constant the raw values were divided by.
    pub normalization: f64,
    pub params: SystemParams,
}

impl SpectrumTrace {
    /// Trapezoidal area over the stored grid.
    pub fn area(&self) -> f64 {
        trapezoid(&self.detuning_grid, &self.values)
    }

    pub fn argmax(&self) -> Option<f64> {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| self.detuning_grid[i])
    }
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

/// 400 points on [0, 10], the range plotted for every time trace.
pub fn default_time_grid() -> Vec<f64> {
    linspace(0.0, 10.0, 400)
}

pub fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("time grid is empty".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidGrid(
            "times must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "time grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn check_axis(name: &str, values: &[f64], positive: bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} grid is empty")));
    }
    if values
        .iter()
        .any(|v| !v.is_finite() || (positive && *v <= 0.0) || *v < 0.0)
    {
        let need = if positive { "positive" } else { "nonnegative" };
        return Err(Error::InvalidGrid(format!("{name} grid values must be {need}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = default_time_grid();
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 10.0);
        let l = logspace(0.1, 10.0, 3);
        assert!((l[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_time_grids() {
        assert!(check_time_grid(&[]).is_err());
        assert!(check_time_grid(&[0.0, 0.0]).is_err());
        assert!(check_time_grid(&[-1.0, 0.0]).is_err());
        assert!(check_time_grid(&[0.0, 1.0]).is_ok());
    }
}
