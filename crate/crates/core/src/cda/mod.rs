//! Change detection: difference image, global threshold, opening, dilation
//! and connected components.

mod components;
mod morphology;

use crate::error::{Error, Result};
use crate::image::{BinaryMask, CdaParams, Detection, Image};

pub use components::{connected_components, label};
pub use morphology::{dilate, erode, opening};

/// Pixel-wise `surveillance - reference`; new scatterers are positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceImage(Image);

impl DifferenceImage {
    pub fn image(&self) -> &Image {
        &self.0
    }

    pub fn into_image(self) -> Image {
        self.0
    }
}

/// Global threshold `lambda = mu + C * sigma` over the difference pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub c_constant: f64,
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub lambda: f64,
}

impl ThresholdSpec {
    pub fn new(c_constant: f64, mu_hat: f64, sigma_hat: f64) -> Self {
        Self {
            c_constant,
            mu_hat,
            sigma_hat,
            lambda: mu_hat + c_constant * sigma_hat,
        }
    }

    pub fn with_c(&self, c_constant: f64) -> Self {
        Self::new(c_constant, self.mu_hat, self.sigma_hat)
    }
}

pub fn difference(surveillance: &Image, reference: &Image) -> Result<DifferenceImage> {
    surveillance.ensure_same_shape(reference, "surveillance vs reference")?;
    let px = surveillance
        .pixels()
        .iter()
        .zip(reference.pixels())
        .map(|(s, r)| s - r)
        .collect();
    Ok(DifferenceImage(surveillance.derive(px)))
}

/// Sample mean and standard deviation (divisor `Q - 1`) of the difference.
pub fn compute_threshold(diff: &DifferenceImage, c_constant: f64) -> ThresholdSpec {
    let px = diff.0.pixels();
    let q = px.len() as f64;
    let mu = px.iter().map(|&v| f64::from(v)).sum::<f64>() / q;
    let ss: f64 = px
        .iter()
        .map(|&v| {
            let d = f64::from(v) - mu;
            d * d
        })
        .sum();
    let sigma = if px.len() > 1 { (ss / (q - 1.0)).sqrt() } else { 0.0 };
    ThresholdSpec::new(c_constant, mu, sigma)
}

/// Marks pixels strictly above `lambda`.
pub fn apply_threshold(diff: &DifferenceImage, spec: &ThresholdSpec) -> BinaryMask {
    let img = &diff.0;
    let bits = img.pixels().iter().map(|&v| f64::from(v) > spec.lambda).collect();
    BinaryMask::new(img.rows(), img.cols(), bits).expect("shape taken from image")
}

/// Threshold followed by opening and dilation, before labeling.
pub fn change_mask(diff: &DifferenceImage, spec: &ThresholdSpec, params: &CdaParams) -> Result<BinaryMask> {
    let raw = apply_threshold(diff, spec);
    dilate(&opening(&raw, params.opening_kernel)?, params.dilation_kernel)
}

/// Output of one change-detection run.
#[derive(Debug, Clone)]
pub struct DetectionRun {
    pub threshold: ThresholdSpec,
    pub mask: BinaryMask,
    pub detections: Vec<Detection>,
}

/// Runs the full chain for one surveillance/reference pair.
pub fn detect(surveillance: &Image, reference: &Image, params: &CdaParams) -> Result<Vec<Detection>> {
    Ok(detect_run(surveillance, reference, params)?.detections)
}

pub fn detect_run(surveillance: &Image, reference: &Image, params: &CdaParams) -> Result<DetectionRun> {
    params.validate()?;
    let diff = difference(surveillance, reference)?;
    let spec = compute_threshold(&diff, params.c_constant);
    detect_on_difference(&diff, &spec, params)
}

/// Same as [`detect_run`] with a precomputed difference and threshold, so a
/// sweep over `C` computes the statistics once.
pub fn detect_on_difference(diff: &DifferenceImage, spec: &ThresholdSpec, params: &CdaParams) -> Result<DetectionRun> {
    if spec.sigma_hat < 0.0 || !spec.lambda.is_finite() {
        return Err(Error::Argument(format!("invalid threshold {spec:?}")));
    }
    let mask = change_mask(diff, spec, params)?;
    let detections = connected_components(&mask, params.connectivity);
    Ok(DetectionRun {
        threshold: *spec,
        mask,
        detections,
    })
}
