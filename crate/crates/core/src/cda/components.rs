//! Connected-component extraction by two-pass labeling with union-find.

use crate::image::{BinaryMask, BoundingBox, Connectivity, Detection};

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        Self { parent: Vec::new() }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Keeps the smaller root so provisional label order is preserved.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

const NONE: u32 = u32::MAX;

/// Labels every set pixel with a component index (`None` for background).
///
/// Components are numbered in raster order of their first pixel.
pub fn label(mask: &BinaryMask, connectivity: Connectivity) -> (Vec<Option<u32>>, usize) {
    let (rows, cols) = (mask.rows(), mask.cols());
    let bits = mask.bits();
    let mut labels = vec![NONE; rows * cols];
    let mut sets = DisjointSet::new();

    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if !bits[i] {
                continue;
            }
            let mut neighbours = [NONE; 4];
            if c > 0 {
                neighbours[0] = labels[i - 1];
            }
            if r > 0 {
                neighbours[1] = labels[i - cols];
                if connectivity == Connectivity::Eight {
                    if c > 0 {
                        neighbours[2] = labels[i - cols - 1];
                    }
                    if c + 1 < cols {
                        neighbours[3] = labels[i - cols + 1];
                    }
                }
            }
            let mut current = NONE;
            for &n in neighbours.iter().filter(|&&n| n != NONE) {
                if current == NONE {
                    current = n;
                } else {
                    sets.union(current, n);
                }
            }
            labels[i] = if current == NONE { sets.make() } else { current };
        }
    }

    // second pass: resolve roots and renumber densely in first-seen order
    let mut dense = vec![NONE; sets.parent.len()];
    let mut next = 0u32;
    let out = labels
        .into_iter()
        .map(|l| {
            if l == NONE {
                return None;
            }
            let root = sets.find(l) as usize;
            if dense[root] == NONE {
                dense[root] = next;
                next += 1;
            }
            Some(dense[root])
        })
        .collect();
    (out, next as usize)
}

/// Extracts one [`Detection`] per connected component, ordered by
/// `(min_row, min_col)` and then by first pixel in raster order.
pub fn connected_components(mask: &BinaryMask, connectivity: Connectivity) -> Vec<Detection> {
    let cols = mask.cols();
    let (labels, count) = label(mask, connectivity);

    struct Acc {
        n: usize,
        sum_r: f64,
        sum_c: f64,
        bbox: BoundingBox,
    }
    let mut acc: Vec<Acc> = Vec::with_capacity(count);
    for (i, l) in labels.iter().enumerate() {
        let Some(l) = *l else { continue };
        let (r, c) = (i / cols, i % cols);
        if l as usize == acc.len() {
            acc.push(Acc {
                n: 0,
                sum_r: 0.0,
                sum_c: 0.0,
                bbox: BoundingBox {
                    min_row: r,
                    min_col: c,
                    max_row: r,
                    max_col: c,
                },
            });
        }
        let a = &mut acc[l as usize];
        a.n += 1;
        a.sum_r += r as f64;
        a.sum_c += c as f64;
        a.bbox.min_row = a.bbox.min_row.min(r);
        a.bbox.min_col = a.bbox.min_col.min(c);
        a.bbox.max_row = a.bbox.max_row.max(r);
        a.bbox.max_col = a.bbox.max_col.max(c);
    }
    let mut dets: Vec<(usize, Detection)> = acc
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            (
                i,
                Detection {
                    centroid_row: a.sum_r / a.n as f64,
                    centroid_col: a.sum_c / a.n as f64,
                    pixel_count: a.n,
                    bbox: a.bbox,
                },
            )
        })
        .collect();
    dets.sort_by_key(|(i, d)| (d.bbox.min_row, d.bbox.min_col, *i));
    dets.into_iter().map(|(_, d)| d).collect()
}
