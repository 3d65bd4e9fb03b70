//! Ground scene prediction (GSP) and change detection for stacks of
//! co-registered, wavelength-resolution SAR amplitude images.
//!
//! The processing chain is:
//!
//! 1. [`gsp::predict_scene`] reduces an [`ImageStack`] to a reference image
//!    with one of the per-pixel estimators in the [`gsp::EstimatorRegistry`].
//! 2. [`cda::detect`] subtracts the reference from a surveillance image,
//!    thresholds the difference at `mean + C * std`, cleans the mask with a
//!    morphological opening followed by a dilation and extracts connected
//!    components.
//! 3. [`eval`] matches detections to ground truth and produces
//!    probability-of-detection / false-alarm-rate tables.
//!
//! Image-sized stages run on the current rayon pool. Results never depend on
//! the number of worker threads; use [`with_threads`] to pin a pool size.

pub mod cda;
pub mod cli;
pub mod error;
pub mod eval;
pub mod gsp;
pub mod image;
pub mod io;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use image::{BinaryMask, CdaParams, Connectivity, Detection, Image, ImageStack, PixelSeries, Target};

/// Runs `f` inside a dedicated rayon pool with `threads` workers.
///
/// `threads == 0` uses the rayon default (one worker per core).
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Argument(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}
