//! Binary erosion and dilation with square structuring elements.
//!
//! Pixels beyond the raster border count as false for both operations. A
//! square window is separable, so each operation runs as a horizontal pass
//! followed by a vertical pass; both passes are row-parallel.

use rayon::prelude::*;

use crate::error::Result;
use crate::image::{check_kernel, BinaryMask};

#[derive(Clone, Copy)]
enum Op {
    Erode,
    Dilate,
}

impl Op {
    /// Window verdict from the number of set pixels among `k` positions
    /// (positions outside the raster are not counted).
    fn keep(self, set: usize, k: usize) -> bool {
        match self {
            Op::Erode => set == k,
            Op::Dilate => set > 0,
        }
    }
}

pub fn erode(mask: &BinaryMask, kernel: usize) -> Result<BinaryMask> {
    apply(mask, kernel, Op::Erode)
}

pub fn dilate(mask: &BinaryMask, kernel: usize) -> Result<BinaryMask> {
    apply(mask, kernel, Op::Dilate)
}

/// Erosion followed by dilation with the same kernel.
pub fn opening(mask: &BinaryMask, kernel: usize) -> Result<BinaryMask> {
    dilate(&erode(mask, kernel)?, kernel)
}

fn apply(mask: &BinaryMask, kernel: usize, op: Op) -> Result<BinaryMask> {
    check_kernel(kernel)?;
    if kernel == 1 {
        return Ok(mask.clone());
    }
    let (rows, cols) = (mask.rows(), mask.cols());
    let half = kernel / 2;
    let src = mask.bits();

    let mut horizontal = vec![false; rows * cols];
    horizontal
        .par_chunks_mut(cols)
        .zip(src.par_chunks(cols))
        .for_each(|(out, line)| {
            // running count of set pixels in [c - half, c + half]
            let mut set = line[..half.min(cols)].iter().filter(|&&b| b).count();
            for c in 0..cols {
                if c + half < cols && line[c + half] {
                    set += 1;
                }
                if c > half && line[c - half - 1] {
                    set -= 1;
                }
                out[c] = op.keep(set, kernel);
            }
        });

    let mut bits = vec![false; rows * cols];
    bits.par_chunks_mut(cols).enumerate().for_each(|(r, out)| {
        let lo = r.saturating_sub(half);
        let hi = (r + half).min(rows - 1);
        let mut counts = vec![0usize; cols];
        for line in horizontal[lo * cols..(hi + 1) * cols].chunks(cols) {
            for (n, &b) in counts.iter_mut().zip(line) {
                *n += usize::from(b);
            }
        }
        for (o, &n) in out.iter_mut().zip(&counts) {
            *o = op.keep(n, kernel);
        }
    });
    BinaryMask::new(rows, cols, bits)
}
