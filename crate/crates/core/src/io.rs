//! Raw `.f32` rasters with `key=value` sidecar headers, target lists and
//! result tables.
//!
//! Raster payloads are row-major little-endian IEEE-754 float32 with no
//! framing. The header is plain text:
//!
//! ```text
//! rows=3000
//! cols=2000
//! pixel_spacing_m=1.0
//! dtype=float32
//! byte_order=little_endian
//! ```
//!
//! `rows`, `cols` and `pixel_spacing_m` are required; `dtype` and
//! `byte_order` are optional but must carry the values above when present.

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::RocTable;
use crate::image::{Detection, Image, Target};

pub const ROC_HEADER: &str = "C,lambda,detected,known,Pd,false_alarms,area_km2,FAR";
pub const DETECTIONS_HEADER: &str = "centroid_row,centroid_col,pixel_count,min_row,min_col,max_row,max_col";
pub const CASE_TABLE_HEADER: &str = "mission,pass,known,detected,pd,false_alarms";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterHeader {
    pub rows: usize,
    pub cols: usize,
    pub pixel_spacing_m: f64,
}

impl RasterHeader {
    pub fn payload_len(&self) -> usize {
        self.rows * self.cols * 4
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let header_err = |msg: String| Error::Header {
            path: path.to_path_buf(),
            msg,
        };
        let mut keys = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| header_err(format!("line {}: expected key=value", n + 1)))?;
            keys.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let get = |k: &str| keys.get(k).ok_or_else(|| header_err(format!("missing key `{k}`")));
        let count = |k: &str| -> Result<usize> {
            let v = get(k)?;
            match v.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(header_err(format!("`{k}` must be a positive integer, got `{v}`"))),
            }
        };
        let rows = count("rows")?;
        let cols = count("cols")?;
        let spacing_text = get("pixel_spacing_m")?;
        let pixel_spacing_m = spacing_text
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite() && *s > 0.0)
            .ok_or_else(|| header_err(format!("`pixel_spacing_m` must be a positive real, got `{spacing_text}`")))?;
        if let Some(dtype) = keys.get("dtype") {
            if dtype != "float32" {
                return Err(header_err(format!("unsupported dtype `{dtype}`")));
            }
        }
        if let Some(order) = keys.get("byte_order") {
            if order != "little_endian" {
                return Err(header_err(format!("unsupported byte_order `{order}`")));
            }
        }
        Ok(Self {
            rows,
            cols,
            pixel_spacing_m,
        })
    }

    pub fn render(&self) -> String {
        format!(
            "rows={}\ncols={}\npixel_spacing_m={}\ndtype=float32\nbyte_order=little_endian\n",
            self.rows, self.cols, self.pixel_spacing_m
        )
    }
}

/// Sidecar header path for a payload path: `scene.f32` → `scene.hdr`.
pub fn header_path_for(data_path: &Path) -> PathBuf {
    data_path.with_extension("hdr")
}

pub fn read_raster(data_path: &Path, header_path: &Path) -> Result<Image> {
    let text = fs::read_to_string(header_path).map_err(|e| Error::io(header_path, e))?;
    let header = RasterHeader::parse(&text, header_path)?;
    let bytes = fs::read(data_path).map_err(|e| Error::io(data_path, e))?;
    if bytes.len() != header.payload_len() {
        return Err(Error::Format {
            path: data_path.to_path_buf(),
            msg: format!(
                "payload is {} bytes, header {}x{} float32 requires {}",
                bytes.len(),
                header.rows,
                header.cols,
                header.payload_len()
            ),
        });
    }
    let pixels: Vec<f32> = bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    if let Some(index) = pixels.iter().position(|p| !p.is_finite()) {
        return Err(Error::Data {
            path: data_path.to_path_buf(),
            index,
        });
    }
    Image::with_spacing(header.rows, header.cols, pixels, header.pixel_spacing_m)
}

/// Reads `path` and its `.hdr` sidecar.
pub fn read_raster_auto(data_path: &Path) -> Result<Image> {
    read_raster(data_path, &header_path_for(data_path))
}

pub fn write_raster(image: &Image, data_path: &Path, header_path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(image.len() * 4);
    for p in image.pixels() {
        bytes.extend_from_slice(&p.to_le_bytes());
    }
    fs::write(data_path, bytes).map_err(|e| Error::io(data_path, e))?;
    let header = RasterHeader {
        rows: image.rows(),
        cols: image.cols(),
        pixel_spacing_m: image.pixel_spacing_m(),
    };
    fs::write(header_path, header.render()).map_err(|e| Error::io(header_path, e))
}

pub fn write_raster_auto(image: &Image, data_path: &Path) -> Result<()> {
    write_raster(image, data_path, &header_path_for(data_path))
}

pub fn read_targets(path: &Path) -> Result<Vec<Target>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_targets(&text, path)
}

pub fn parse_targets(text: &str, path: &Path) -> Result<Vec<Target>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            msg,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [id, row, col] = fields.as_slice() else {
            return Err(parse_err(format!("expected `id,row,col`, got {} fields", fields.len())));
        };
        let coord = |name: &str, v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(format!("{name} `{v}` is not a finite number")))
        };
        out.push(Target::new(*id, coord("row", row)?, coord("col", col)?));
    }
    Ok(out)
}

pub fn write_targets(targets: &[Target], path: &Path) -> Result<()> {
    let mut body = String::from("# id,row,col\n");
    for t in targets {
        body.push_str(&format!("{},{},{}\n", t.id, t.row, t.col));
    }
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Writes the ROC table. Reals use the shortest representation that parses
/// back to the same `f64`.
pub fn write_roc(table: &RocTable, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Argument("refusing to write an empty ROC table".into()));
    }
    write_text(path, &render_roc(table))
}

pub fn render_roc(table: &RocTable) -> String {
    let mut out = String::from(ROC_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.c_constant, r.lambda, r.detected, r.known, r.pd, r.false_alarms, r.area_km2, r.far
        ));
    }
    out
}

pub fn read_detections(path: &Path) -> Result<Vec<Detection>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == DETECTIONS_HEADER {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            msg,
        };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 7 {
            return Err(parse_err(format!("expected 7 fields, got {}", f.len())));
        }
        let real = |v: &str| v.parse::<f64>().map_err(|_| parse_err(format!("bad number `{v}`")));
        let int = |v: &str| v.parse::<usize>().map_err(|_| parse_err(format!("bad integer `{v}`")));
        out.push(Detection {
            centroid_row: real(f[0])?,
            centroid_col: real(f[1])?,
            pixel_count: int(f[2])?,
            bbox: crate::image::BoundingBox {
                min_row: int(f[3])?,
                min_col: int(f[4])?,
                max_row: int(f[5])?,
                max_col: int(f[6])?,
            },
        });
    }
    Ok(out)
}

pub fn render_detections(detections: &[Detection]) -> String {
    let mut out = String::from(DETECTIONS_HEADER);
    out.push('\n');
    for d in detections {
        out.push_str(&format!(
            "{:.6},{:.6},{},{},{},{},{}\n",
            d.centroid_row, d.centroid_col, d.pixel_count, d.bbox.min_row, d.bbox.min_col, d.bbox.max_row, d.bbox.max_col
        ));
    }
    out
}

pub fn write_detections(detections: &[Detection], path: &Path) -> Result<()> {
    write_text(path, &render_detections(detections))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
