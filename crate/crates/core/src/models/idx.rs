//! IDX binary format reader (the MNIST container format).
//!
//! Images: big-endian magic `0x00000803`, then three big-endian u32
//! dimensions (count, rows, cols), then `count * rows * cols` bytes.
//! Labels: magic `0x00000801`, one u32 dimension, then `count` bytes.

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;
use std::path::Path;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone)]
pub struct IdxImages {
    /// One flattened image per row, pixels scaled to [0, 1] by dividing
    /// the raw bytes by 255.
    pub rows: DenseMatrix,
    pub image_rows: usize,
    pub image_cols: usize,
}

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    if bytes.len() < offset + 4 {
        return Err(Error::TruncatedPayload {
            expected: offset + 4,
            got: bytes.len(),
        });
    }
    Ok(u32::from_be_bytes([
        bytes[offset],
        bytes[offset + 1],
        bytes[offset + 2],
        bytes[offset + 3],
    ]))
}

/// Parse an IDX image file from raw bytes.
pub fn load_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    let magic = read_u32(bytes, 0)?;
    if magic != IMAGES_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let count = read_u32(bytes, 4)? as usize;
    let rows = read_u32(bytes, 8)? as usize;
    let cols = read_u32(bytes, 12)? as usize;
    let expected = 16 + count * rows * cols;
    if bytes.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            got: bytes.len(),
        });
    }
    let pixels = rows * cols;
    let mut m = DenseMatrix::zeros(count, pixels);
    for i in 0..count {
        let start = 16 + i * pixels;
        let dst = m.row_mut(i);
        for (j, &b) in bytes[start..start + pixels].iter().enumerate() {
            dst[j] = b as f64 / 255.0;
        }
    }
    Ok(IdxImages {
        rows: m,
        image_rows: rows,
        image_cols: cols,
    })
}

/// Parse an IDX label file from raw bytes.
pub fn load_idx_labels(bytes: &[u8]) -> Result<Vec<usize>> {
    let magic = read_u32(bytes, 0)?;
    if magic != LABELS_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let count = read_u32(bytes, 4)? as usize;
    let expected = 8 + count;
    if bytes.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            got: bytes.len(),
        });
    }
    Ok(bytes[8..8 + count].iter().map(|&b| b as usize).collect())
}

pub fn load_idx_images_path(path: &Path) -> Result<IdxImages> {
    load_idx_images(&std::fs::read(path)?)
}

pub fn load_idx_labels_path(path: &Path) -> Result<Vec<usize>> {
    load_idx_labels(&std::fs::read(path)?)
}
