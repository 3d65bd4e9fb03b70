//! Descriptive statistics of amplitude images and goodness-of-fit measures
//! between an interest image and a predicted ground scene.

use crate::error::{Error, Result};
use crate::gsp::median_estimate;
use crate::image::{BinaryMask, Image, Target};

/// Default half-width of the square excluded around each target (11x11 px).
pub const DEFAULT_EXCLUSION_HALF_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptiveStats {
    pub average: f64,
    /// Sample standard deviation, divisor `Q - 1`.
    pub std_dev: f64,
    /// `m3 / m2^1.5` with biased central moments.
    pub skewness: f64,
    /// Non-excess kurtosis `m4 / m2^2` (3 for a Gaussian).
    pub kurtosis: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityMeasures {
    pub mse: f64,
    pub mape: f64,
    pub mdae: f64,
    pub pixels_used: usize,
}

pub fn describe(image: &Image) -> Result<DescriptiveStats> {
    describe_values(image.pixels().iter().map(|&p| f64::from(p)))
}

pub(crate) fn describe_values(values: impl Iterator<Item = f64> + Clone) -> Result<DescriptiveStats> {
    let (count, sum) = values.clone().fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if count < 2 {
        return Err(Error::Argument(format!("need at least 2 pixels, got {count}")));
    }
    let q = count as f64;
    let average = sum / q;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - average;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if m2 == 0.0 {
        return Err(Error::Argument(
            "zero variance: skewness and kurtosis are undefined".into(),
        ));
    }
    let std_dev = (m2 / (q - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / q, m3 / q, m4 / q);
    Ok(DescriptiveStats {
        average,
        std_dev,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
    })
}

/// Marks the `(2 * half_window + 1)^2` square around each rounded target
/// position, clipped to the raster.
pub fn exclusion_mask(targets: &[Target], rows: usize, cols: usize, half_window: usize) -> BinaryMask {
    let mut mask = BinaryMask::filled(rows, cols, false);
    let h = half_window as i64;
    for t in targets {
        let (r, c) = (t.row.round() as i64, t.col.round() as i64);
        let r0 = (r - h).max(0);
        let r1 = (r + h).min(rows as i64 - 1);
        let c0 = (c - h).max(0);
        let c1 = (c + h).min(cols as i64 - 1);
        for row in r0..=r1 {
            for col in c0..=c1 {
                mask.set(row as usize, col as usize, true);
            }
        }
    }
    mask
}

/// MSE, MAPE and MdAE over the pixels not marked in `excluded`.
///
/// MAPE additionally skips pixels where the interest image is exactly zero.
pub fn quality(interest: &Image, predicted: &Image, excluded: &BinaryMask) -> Result<QualityMeasures> {
    interest.ensure_same_shape(predicted, "interest vs predicted")?;
    excluded.ensure_shape(interest.rows(), interest.cols(), "exclusion mask")?;

    let mut abs_err = Vec::with_capacity(interest.len());
    let mut sq_sum = 0.0;
    let (mut pct_sum, mut pct_count) = (0.0, 0usize);
    for ((&x, &xh), &skip) in interest.pixels().iter().zip(predicted.pixels()).zip(excluded.bits()) {
        if skip {
            continue;
        }
        let (x, xh) = (f64::from(x), f64::from(xh));
        let e = (x - xh).abs();
        sq_sum += e * e;
        if x != 0.0 {
            pct_sum += e / x.abs();
            pct_count += 1;
        }
        abs_err.push(e);
    }
    let q = abs_err.len();
    if q == 0 {
        return Err(Error::Argument("every pixel is excluded".into()));
    }
    Ok(QualityMeasures {
        mse: sq_sum / q as f64,
        mape: if pct_count == 0 { 0.0 } else { pct_sum / pct_count as f64 },
        mdae: median_estimate(&abs_err),
        pixels_used: q,
    })
}
