//! Autoregressive one-step forecast with Yule-Walker coefficients.
//!
//! Sign convention follows the AR difference equation
//! `y[n] = -sum_k a[k] y[n-k] + u[n]`, so for order one `a[1] = -r[1]/r[0]`
//! and the forecast is `(r[1]/r[0]) * y[N]`.

use crate::error::{Error, Result};

use super::{mean_estimate, Estimator};

/// Yule-Walker fit: coefficients `a[1..=p]` and the autocorrelations
/// `r[0..=p]` they were solved from.
#[derive(Debug, Clone, PartialEq)]
pub struct ArFit {
    pub coefficients: Vec<f64>,
    pub autocorr: Vec<f64>,
}

impl ArFit {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

/// Biased sample autocorrelation of the raw (not mean-removed) series,
/// `r[k] = (1/N) sum_{n} y[n] y[n+k]` for `k = 0..=max_lag`.
pub fn sample_autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::Argument(format!(
            "autocorrelation lag {max_lag} needs more than {n} samples"
        )));
    }
    let inv_n = 1.0 / n as f64;
    Ok((0..=max_lag)
        .map(|k| {
            let s: f64 = series[..n - k].iter().zip(&series[k..]).map(|(a, b)| a * b).sum();
            s * inv_n
        })
        .collect())
}

/// Solves the order-`order` Yule-Walker system by Levinson-Durbin recursion.
///
/// An identically zero series (`r[0] == 0`) gives all-zero coefficients.
pub fn fit_ar(series: &[f64], order: usize) -> Result<ArFit> {
    if order == 0 {
        return Err(Error::Argument("AR order must be at least 1".into()));
    }
    if series.len() <= order {
        return Err(Error::Argument(format!(
            "AR({order}) needs more than {order} samples, got {}",
            series.len()
        )));
    }
    let r = sample_autocorrelation(series, order)?;
    if r[0] == 0.0 {
        return Ok(ArFit {
            coefficients: vec![0.0; order],
            autocorr: r,
        });
    }

    let mut a = vec![0.0; order];
    let mut err = r[0];
    for m in 1..=order {
        let mut acc = r[m];
        for j in 1..m {
            acc += a[j - 1] * r[m - j];
        }
        let k = -acc / err;
        let prev = a.clone();
        for j in 1..m {
            a[j - 1] = prev[j - 1] + k * prev[m - j - 1];
        }
        a[m - 1] = k;
        err *= 1.0 - k * k;
        if m < order && err <= 0.0 {
            return Err(Error::Argument(format!(
                "Yule-Walker system is singular at order {m}"
            )));
        }
    }
    Ok(ArFit {
        coefficients: a,
        autocorr: r,
    })
}

/// One-step-ahead forecast `y[N+1] = -sum_k a[k] y[N+1-k]`.
pub fn ar_forecast(series: &[f64], fit: &ArFit) -> Result<f64> {
    let n = series.len();
    let p = fit.order();
    if n < p {
        return Err(Error::Argument(format!(
            "AR({p}) forecast needs at least {p} samples, got {n}"
        )));
    }
    Ok(-fit
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| a * series[n - 1 - i])
        .sum::<f64>())
}

/// AR(1) ground scene predictor.
///
/// With `centered` the fit runs on the mean-removed series and the forecast
/// is shifted back by the sample mean.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArEstimator {
    pub centered: bool,
}

impl Estimator for ArEstimator {
    fn name(&self) -> &str {
        "ar"
    }

    fn estimate(&self, series: &mut [f64]) -> Result<f64> {
        if !self.centered {
            let fit = fit_ar(series, 1)?;
            return ar_forecast(series, &fit);
        }
        let mu = mean_estimate(series);
        series.iter_mut().for_each(|v| *v -= mu);
        let fit = fit_ar(series, 1)?;
        Ok(mu + ar_forecast(series, &fit)?)
    }
}
