//! Raster and detection types shared by every stage.
//!
//! All rasters are flat row-major with the origin at the top-left pixel and
//! coordinates written `(row, col)`.

use crate::error::{Error, Result};

/// Ground sampling distance used when a header does not say otherwise.
pub const DEFAULT_PIXEL_SPACING_M: f64 = 2.5;

/// Single-channel amplitude raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    rows: usize,
    cols: usize,
    pixels: Vec<f32>,
    pixel_spacing_m: f64,
}

impl Image {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f32>) -> Result<Self> {
        Self::with_spacing(rows, cols, pixels, DEFAULT_PIXEL_SPACING_M)
    }

    pub fn with_spacing(rows: usize, cols: usize, pixels: Vec<f32>, pixel_spacing_m: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument(format!("image dimensions must be positive, got {rows}x{cols}")));
        }
        if pixels.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} pixels supplied for a {rows}x{cols} image",
                pixels.len()
            )));
        }
        if !(pixel_spacing_m.is_finite() && pixel_spacing_m > 0.0) {
            return Err(Error::Argument(format!("pixel spacing must be positive, got {pixel_spacing_m}")));
        }
        if let Some(index) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::Argument(format!("non-finite pixel at index {index}")));
        }
        Ok(Self {
            rows,
            cols,
            pixels,
            pixel_spacing_m,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(rows: usize, cols: usize, value: f32) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixel_spacing_m(&self) -> f64 {
        self.pixel_spacing_m
    }

    pub fn pixels(&self) -> &[f32] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f32> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f32> {
        (row < self.rows && col < self.cols).then(|| self.pixels[row * self.cols + col])
    }

    pub fn row(&self, row: usize) -> &[f32] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    /// Ground area covered by the raster in square kilometres.
    pub fn area_km2(&self) -> f64 {
        let side = self.pixel_spacing_m / 1000.0;
        (self.rows * self.cols) as f64 * side * side
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub(crate) fn ensure_same_shape(&self, other: &Image, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    /// Builds an image from already validated parts, keeping this image's spacing.
    pub(crate) fn derive(&self, pixels: Vec<f32>) -> Self {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        Self {
            rows: self.rows,
            cols: self.cols,
            pixels,
            pixel_spacing_m: self.pixel_spacing_m,
        }
    }
}

/// Values observed at one pixel position across a stack, in stack order.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelSeries(Vec<f64>);

impl PixelSeries {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for PixelSeries {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Co-registered images of one scene. Order is the file order given by the
/// caller and carries no temporal meaning beyond what the AR forecast uses.
#[derive(Debug, Clone)]
pub struct ImageStack {
    images: Vec<Image>,
}

impl ImageStack {
    pub fn new(images: Vec<Image>) -> Result<Self> {
        if images.len() < 2 {
            return Err(Error::Argument(format!(
                "a stack needs at least 2 images, got {}",
                images.len()
            )));
        }
        let first = &images[0];
        for (i, img) in images.iter().enumerate().skip(1) {
            first.ensure_same_shape(img, &format!("stack image {i}"))?;
            if img.pixel_spacing_m != first.pixel_spacing_m {
                return Err(Error::Dimension(format!(
                    "stack image {i} has pixel spacing {} m, expected {} m",
                    img.pixel_spacing_m, first.pixel_spacing_m
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.images[0].rows
    }

    pub fn cols(&self) -> usize {
        self.images[0].cols
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Image> {
        self.images
    }

    /// Template image carrying the stack geometry.
    pub fn first(&self) -> &Image {
        &self.images[0]
    }

    pub fn extract_series(&self, row: usize, col: usize) -> Result<PixelSeries> {
        if row >= self.rows() || col >= self.cols() {
            return Err(Error::Bounds {
                row,
                col,
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let mut out = vec![0.0; self.len()];
        self.fill_series(row * self.cols() + col, &mut out);
        Ok(PixelSeries(out))
    }

    /// Copies the series at flat index `index` into `buf` (length N).
    pub(crate) fn fill_series(&self, index: usize, buf: &mut [f64]) {
        for (slot, img) in buf.iter_mut().zip(&self.images) {
            *slot = f64::from(img.pixels[index]);
        }
    }
}

/// Boolean raster used for threshold output, morphology and exclusion regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} bits supplied for a {rows}x{cols} mask",
                bits.len()
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    pub fn filled(rows: usize, cols: usize, value: bool) -> Self {
        Self {
            rows,
            cols,
            bits: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.cols + col] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// True when every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub(crate) fn ensure_shape(&self, rows: usize, cols: usize, what: &str) -> Result<()> {
        if self.rows == rows && self.cols == cols {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: mask is {}x{}, image is {rows}x{cols}",
                self.rows, self.cols
            )))
        }
    }
}

/// Ground-truth target position in pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub id: String,
    pub row: f64,
    pub col: f64,
}

impl Target {
    pub fn new(id: impl Into<String>, row: f64, col: f64) -> Self {
        Self {
            id: id.into(),
            row,
            col,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_row: usize,
    pub min_col: usize,
    pub max_row: usize,
    pub max_col: usize,
}

impl BoundingBox {
    pub fn contains(&self, row: f64, col: f64) -> bool {
        row >= self.min_row as f64 && row <= self.max_row as f64 && col >= self.min_col as f64 && col <= self.max_col as f64
    }
}

/// One connected change object.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub centroid_row: f64,
    pub centroid_col: f64,
    pub pixel_count: usize,
    pub bbox: BoundingBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl TryFrom<u8> for Connectivity {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(Error::Argument(format!("connectivity must be 4 or 8, got {other}"))),
        }
    }
}

/// Change-detection parameters: threshold constant and morphology sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdaParams {
    pub c_constant: f64,
    pub opening_kernel: usize,
    pub dilation_kernel: usize,
    pub connectivity: Connectivity,
}

impl Default for CdaParams {
    fn default() -> Self {
        Self {
            c_constant: 5.0,
            opening_kernel: 3,
            dilation_kernel: 7,
            connectivity: Connectivity::Eight,
        }
    }
}

impl CdaParams {
    pub fn with_c(c_constant: f64) -> Self {
        Self {
            c_constant,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_constant.is_finite() && self.c_constant > 0.0) {
            return Err(Error::Argument(format!("C must be positive, got {}", self.c_constant)));
        }
        check_kernel(self.opening_kernel)?;
        check_kernel(self.dilation_kernel)
    }
}

pub(crate) fn check_kernel(kernel: usize) -> Result<()> {
    if kernel % 2 == 1 {
        Ok(())
    } else {
        Err(Error::Argument(format!("kernel size must be odd and >= 1, got {kernel}")))
    }
}
