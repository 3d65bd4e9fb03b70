//! Order-statistic and moment estimators over a pixel series.

use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::Estimator;

pub fn mean_estimate(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// Root mean square of the amplitudes, i.e. the amplitude of the mean intensity.
pub fn intensity_mean_estimate(series: &[f64]) -> f64 {
    (series.iter().map(|v| v * v).sum::<f64>() / series.len() as f64).sqrt()
}

/// Median; even lengths average the two middle order statistics.
pub fn median_estimate(series: &[f64]) -> f64 {
    let mut sorted = series.to_vec();
    median_in_place(&mut sorted)
}

/// Mean of the order statistics left after dropping `m = floor((N-1) alpha)`
/// samples from each end.
pub fn trimmed_mean_estimate(series: &[f64], alpha: f64) -> Result<f64> {
    let mut sorted = series.to_vec();
    trimmed_in_place(&mut sorted, alpha)
}

/// Samples trimmed from each end for `n` samples at proportion `alpha`.
pub fn trim_count(n: usize, alpha: f64) -> usize {
    ((n.saturating_sub(1)) as f64 * alpha).floor() as usize
}

fn sort(values: &mut [f64]) {
    values.sort_unstable_by(f64::total_cmp);
}

pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    if n % 2 == 1 {
        let (_, m, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
        return *m;
    }
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let below = lower.iter().copied().max_by(f64::total_cmp).unwrap_or(*upper);
    (below + *upper) / 2.0
}

fn trimmed_in_place(values: &mut [f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = values.len();
    let m = trim_count(n, alpha);
    if n <= 2 * m || n == 0 {
        return Err(Error::Argument(format!(
            "trimming {m} samples from each end of {n} leaves nothing"
        )));
    }
    if m == 0 {
        return Ok(mean_estimate(values));
    }
    sort(values);
    let kept = &values[m..n - m];
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    match alpha.partial_cmp(&0.0) {
        Some(Ordering::Greater | Ordering::Equal) if alpha < 0.5 => Ok(()),
        _ => Err(Error::Argument(format!("trim proportion must be in [0, 0.5), got {alpha}"))),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MeanEstimator;

impl Estimator for MeanEstimator {
    fn name(&self) -> &str {
        "mean"
    }

    fn estimate(&self, series: &mut [f64]) -> Result<f64> {
        Ok(mean_estimate(series))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MedianEstimator;

impl Estimator for MedianEstimator {
    fn name(&self) -> &str {
        "median"
    }

    fn estimate(&self, series: &mut [f64]) -> Result<f64> {
        Ok(median_in_place(series))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrimmedMeanEstimator {
    alpha: f64,
}

impl TrimmedMeanEstimator {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Estimator for TrimmedMeanEstimator {
    fn name(&self) -> &str {
        "trimmed"
    }

    fn estimate(&self, series: &mut [f64]) -> Result<f64> {
        trimmed_in_place(series, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IntensityMeanEstimator;

impl Estimator for IntensityMeanEstimator {
    fn name(&self) -> &str {
        "intensity"
    }

    fn estimate(&self, series: &mut [f64]) -> Result<f64> {
        Ok(intensity_mean_estimate(series))
    }
}
