//! Deterministic synthetic stacks: a static clutter field observed several
//! times with small independent jitter, plus bright square targets in
//! designated images.
//!
//! Random numbers come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Each uniform draw is `(next_u64 >> 11) * 2^-53`.
//! Draw order is fixed: one clutter value per pixel in raster order, then
//! one jitter value per pixel for image 0, image 1, and so on. The clutter
//! field is smoothed with a normalized box filter of radius
//! `round(clutter_correlation_px)` (edge windows average only in-bounds
//! pixels) and mapped affinely to the requested mean and standard deviation.
//! Jitter is uniform with zero mean and the requested standard deviation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{BinaryMask, Image, ImageStack, Target, DEFAULT_PIXEL_SPACING_M};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthTarget {
    pub image_index: usize,
    /// Centre of the flat square, in pixels.
    pub row: usize,
    pub col: usize,
    pub size_px: usize,
    pub amplitude_boost: f64,
}

impl SynthTarget {
    pub fn new(image_index: usize, row: usize, col: usize) -> Self {
        Self {
            image_index,
            row,
            col,
            size_px: 10,
            amplitude_boost: 0.5,
        }
    }

    fn origin(&self) -> (i64, i64) {
        let half = (self.size_px / 2) as i64;
        (self.row as i64 - half, self.col as i64 - half)
    }

    /// Geometric centre of the flat square.
    pub fn center(&self) -> (f64, f64) {
        let (r0, c0) = self.origin();
        let off = (self.size_px as f64 - 1.0) / 2.0;
        (r0 as f64 + off, c0 as f64 + off)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub rows: usize,
    pub cols: usize,
    pub n_images: usize,
    pub seed: u64,
    pub clutter_mean: f64,
    pub clutter_std: f64,
    pub clutter_correlation_px: f64,
    pub temporal_jitter_std: f64,
    pub pixel_spacing_m: f64,
    pub targets: Vec<SynthTarget>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            rows: 300,
            cols: 200,
            n_images: 8,
            seed: 1,
            clutter_mean: 0.14,
            clutter_std: 0.07,
            clutter_correlation_px: 3.0,
            temporal_jitter_std: 0.01,
            pixel_spacing_m: DEFAULT_PIXEL_SPACING_M,
            targets: Vec::new(),
        }
    }
}

/// Target spacing of the default scenario: 20 px, 50 m at 2.5 m/px.
pub const SCENARIO_SPACING_PX: usize = 20;
/// Flat target side of the default scenario.
///
/// Smaller than the 10 px generator default: 25 targets of 10x10 px cover
/// 4% of a 300x200 scene, which lifts the sample standard deviation of the
/// difference image so far that `mu + 5 sigma` exceeds the target boost.
pub const SCENARIO_TARGET_SIZE_PX: usize = 6;

impl SynthConfig {
    /// Desk-scale scenario: 300x200 px, 8 images, a 5x5 grid of targets
    /// (boost 0.5) in image 0 (the surveillance image) and again in image 1.
    pub fn default_scenario() -> Self {
        let mut cfg = Self {
            seed: 20,
            ..Self::default()
        };
        for image_index in [0, 1] {
            cfg.targets.extend(target_grid(
                image_index,
                (cfg.rows / 2, cfg.cols / 2),
                5,
                SCENARIO_SPACING_PX,
                SCENARIO_TARGET_SIZE_PX,
                0.5,
            ));
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if self.rows == 0 || self.cols == 0 {
            return bad(format!("scene must be non-empty, got {}x{}", self.rows, self.cols));
        }
        if self.n_images < 2 {
            return bad(format!("need at least 2 images, got {}", self.n_images));
        }
        for (name, v) in [
            ("clutter_mean", self.clutter_mean),
            ("clutter_std", self.clutter_std),
            ("clutter_correlation_px", self.clutter_correlation_px),
            ("temporal_jitter_std", self.temporal_jitter_std),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be a non-negative number, got {v}"));
            }
        }
        if !(self.pixel_spacing_m.is_finite() && self.pixel_spacing_m > 0.0) {
            return bad(format!("pixel spacing must be positive, got {}", self.pixel_spacing_m));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if t.image_index >= self.n_images {
                return bad(format!("target {i}: image {} >= n_images {}", t.image_index, self.n_images));
            }
            if t.row >= self.rows || t.col >= self.cols {
                return bad(format!("target {i}: ({}, {}) outside scene", t.row, t.col));
            }
            if t.size_px == 0 {
                return bad(format!("target {i}: size must be positive"));
            }
            if !(t.amplitude_boost.is_finite() && t.amplitude_boost > 0.0) {
                return bad(format!("target {i}: boost must be positive, got {}", t.amplitude_boost));
            }
        }
        Ok(())
    }
}

/// `side x side` grid of targets centred on `center`.
pub fn target_grid(
    image_index: usize,
    center: (usize, usize),
    side: usize,
    spacing: usize,
    size_px: usize,
    amplitude_boost: f64,
) -> Vec<SynthTarget> {
    let span = (side.saturating_sub(1) * spacing) as i64;
    let r0 = center.0 as i64 - span / 2;
    let c0 = center.1 as i64 - span / 2;
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side as i64 {
        for j in 0..side as i64 {
            out.push(SynthTarget {
                image_index,
                row: (r0 + i * spacing as i64).max(0) as usize,
                col: (c0 + j * spacing as i64).max(0) as usize,
                size_px,
                amplitude_boost,
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SynthScene {
    pub stack: ImageStack,
    /// Ground truth per image, in config order.
    pub targets: Vec<Vec<Target>>,
    /// The static clutter field shared by all images.
    pub background: Image,
    /// Pixels touched by a target (square and rim) per image.
    pub footprints: Vec<BinaryMask>,
}

pub fn generate(config: &SynthConfig) -> Result<SynthScene> {
    config.validate()?;
    let (rows, cols) = (config.rows, config.cols);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let noise: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    let radius = config.clutter_correlation_px.round() as usize;
    let smooth = box_filter(&noise, rows, cols, radius);
    let n = smooth.len() as f64;
    let mu = smooth.iter().sum::<f64>() / n;
    let sd = (smooth.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n).sqrt();
    let scale = if sd > 0.0 { config.clutter_std / sd } else { 0.0 };
    let clutter: Vec<f64> = smooth
        .iter()
        .map(|v| (config.clutter_mean + (v - mu) * scale).max(0.0))
        .collect();

    let jitter_width = config.temporal_jitter_std * 12f64.sqrt();
    let mut images = Vec::with_capacity(config.n_images);
    let mut targets = vec![Vec::new(); config.n_images];
    let mut footprints = vec![BinaryMask::filled(rows, cols, false); config.n_images];
    let mut layers: Vec<Vec<f64>> = Vec::with_capacity(config.n_images);
    for _ in 0..config.n_images {
        layers.push(
            clutter
                .iter()
                .map(|c| (c + jitter_width * (rng.random::<f64>() - 0.5)).max(0.0))
                .collect(),
        );
    }
    for (k, t) in config.targets.iter().enumerate() {
        let layer = &mut layers[t.image_index];
        let foot = &mut footprints[t.image_index];
        let (r0, c0) = t.origin();
        let size = t.size_px as i64;
        for r in r0 - 1..=r0 + size {
            for c in c0 - 1..=c0 + size {
                if r < 0 || c < 0 || r >= rows as i64 || c >= cols as i64 {
                    continue;
                }
                let inside = r >= r0 && r < r0 + size && c >= c0 && c < c0 + size;
                let boost = if inside { t.amplitude_boost } else { t.amplitude_boost / 2.0 };
                let i = r as usize * cols + c as usize;
                layer[i] += boost;
                foot.set(r as usize, c as usize, true);
            }
        }
        let (cr, cc) = t.center();
        targets[t.image_index].push(Target::new(format!("t{k}"), cr, cc));
    }
    for layer in layers {
        let px = layer.into_iter().map(|v| v as f32).collect();
        images.push(Image::with_spacing(rows, cols, px, config.pixel_spacing_m)?);
    }
    let background = Image::with_spacing(
        rows,
        cols,
        clutter.iter().map(|&v| v as f32).collect(),
        config.pixel_spacing_m,
    )?;
    Ok(SynthScene {
        stack: ImageStack::new(images)?,
        targets,
        background,
        footprints,
    })
}

/// Normalized separable box mean of radius `radius`, edge windows truncated.
fn box_filter(src: &[f64], rows: usize, cols: usize, radius: usize) -> Vec<f64> {
    if radius == 0 {
        return src.to_vec();
    }
    let pass = |src: &[f64], len: usize, stride: usize, lines: usize, step: usize| {
        let mut out = vec![0.0; src.len()];
        for line in 0..lines {
            let base = line * step;
            for i in 0..len {
                let lo = i.saturating_sub(radius);
                let hi = (i + radius).min(len - 1);
                let s: f64 = (lo..=hi).map(|j| src[base + j * stride]).sum();
                out[base + i * stride] = s / (hi - lo + 1) as f64;
            }
        }
        out
    };
    let horizontal = pass(src, cols, 1, rows, cols);
    pass(&horizontal, rows, cols, cols, 1)
}
