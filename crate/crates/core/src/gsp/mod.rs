//! Ground scene prediction: per-pixel estimators over an image stack.
//!
//! Every estimator implements [`Estimator`] and is registered by name in an
//! [`EstimatorRegistry`]. [`predict_scene`] applies one to every pixel
//! position of a stack.

mod ar;
mod order;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{Image, ImageStack};

pub use ar::{ar_forecast, fit_ar, sample_autocorrelation, ArEstimator, ArFit};
pub use order::{
    intensity_mean_estimate, mean_estimate, median_estimate, trim_count, trimmed_mean_estimate, IntensityMeanEstimator,
    MeanEstimator, MedianEstimator, TrimmedMeanEstimator,
};

/// Trim proportion used when none is given; `m = 2` for stacks of eight.
pub const DEFAULT_TRIM_ALPHA: f64 = 0.3;

/// A per-pixel reducer from a stack series to one predicted amplitude.
pub trait Estimator: Send + Sync + fmt::Debug {
    /// Registry name.
    fn name(&self) -> &str;

    /// Reduces one pixel series given in stack order.
    ///
    /// The slice is scratch space and may be reordered or overwritten.
    fn estimate(&self, series: &mut [f64]) -> Result<f64>;
}

/// Parameters shared by the estimator constructors. Each estimator reads
/// the fields that apply to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    pub alpha: f64,
    pub centered: bool,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_TRIM_ALPHA,
            centered: false,
        }
    }
}

type Builder = Box<dyn Fn(&EstimatorOptions) -> Result<Box<dyn Estimator>> + Send + Sync>;

struct Entry {
    summary: &'static str,
    build: Builder,
}

/// Name → constructor table for estimators.
pub struct EstimatorRegistry {
    entries: BTreeMap<String, Entry>,
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry holding `ar`, `trimmed`, `median`, `mean` and `intensity`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("ar", "AR(1) one-step forecast, Yule-Walker fit", |o| {
            Ok(Box::new(ArEstimator { centered: o.centered }))
        });
        reg.register("trimmed", "trimmed mean, m = floor((N-1) alpha)", |o| {
            Ok(Box::new(TrimmedMeanEstimator::new(o.alpha)?))
        });
        reg.register("median", "per-pixel median", |_| Ok(Box::new(MedianEstimator)));
        reg.register("mean", "per-pixel arithmetic mean", |_| Ok(Box::new(MeanEstimator)));
        reg.register("intensity", "square root of the mean intensity", |_| {
            Ok(Box::new(IntensityMeanEstimator))
        });
        reg
    }

    /// Adds or replaces an estimator constructor.
    pub fn register<F>(&mut self, name: &str, summary: &'static str, build: F)
    where
        F: Fn(&EstimatorOptions) -> Result<Box<dyn Estimator>> + Send + Sync + 'static,
    {
        self.entries.insert(
            name.to_string(),
            Entry {
                summary,
                build: Box::new(build),
            },
        );
    }

    pub fn build(&self, name: &str, options: &EstimatorOptions) -> Result<Box<dyn Estimator>> {
        let entry = self.entries.get(name).ok_or_else(|| {
            Error::Argument(format!(
                "unknown estimator `{name}` (available: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        (entry.build)(options)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn describe(&self) -> impl Iterator<Item = (&str, &'static str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.summary))
    }
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl fmt::Debug for EstimatorRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

/// Applies `estimator` to the series at every pixel position.
///
/// Rows are distributed over the current rayon pool; each pixel is computed
/// independently so the output does not depend on the partitioning.
pub fn predict_scene(stack: &ImageStack, estimator: &dyn Estimator) -> Result<Image> {
    let cols = stack.cols();
    let n = stack.len();
    let mut out = vec![0.0f32; stack.rows() * cols];
    let failures: Vec<Error> = out
        .par_chunks_mut(cols)
        .enumerate()
        .filter_map(|(row, line)| {
            let mut buf = vec![0.0; n];
            for (col, px) in line.iter_mut().enumerate() {
                stack.fill_series(row * cols + col, &mut buf);
                match estimator.estimate(&mut buf) {
                    Ok(v) => *px = v as f32,
                    Err(e) => {
                        return Some(Error::AtPixel {
                            row,
                            col,
                            source: Box::new(e),
                        })
                    }
                }
            }
            None
        })
        .collect();
    if let Some(first) = failures.into_iter().next() {
        return Err(first);
    }
    if let Some(index) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::AtPixel {
            row: index / cols,
            col: index % cols,
            source: Box::new(Error::Argument("estimate is not finite in float32".into())),
        });
    }
    Ok(stack.first().derive(out))
}
