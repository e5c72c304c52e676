//! The binary array container used for every `.bin` file in a dataset.
//!
//! Layout, all integers little-endian:
//!
//! | offset      | size | content                              |
//! |-------------|------|--------------------------------------|
//! | 0           | 4    | magic `MMKA`                         |
//! | 4           | 4    | format version (`u32`, currently 1)  |
//! | 8           | 4    | element type tag (`1` f32, `2` u32)  |
//! | 12          | 4    | dimension count `d` (1..=8)          |
//! | 16          | 8·d  | dimensions (`u64` each)              |
//! | 16 + 8·d    | rest | packed row-major payload             |
//!
//! The payload length must equal the product of the dimensions times the
//! element size exactly; trailing bytes are rejected. All size arithmetic is
//! checked before any allocation, so hostile headers cannot trigger oversized
//! allocations.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// File magic, the first four bytes of every array file.
pub const ARRAY_MAGIC: [u8; 4] = *b"MMKA";
/// Current (and only) format version.
pub const ARRAY_VERSION: u32 = 1;
/// Maximum number of dimensions a header may declare.
pub const MAX_DIMS: u32 = 8;

const TAG_F32: u32 = 1;
const TAG_U32: u32 = 2;

/// Typed payload of an array file.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrayData {
    F32(Vec<f32>),
    U32(Vec<u32>),
}

impl ArrayData {
    pub fn len(&self) -> usize {
        match self {
            ArrayData::F32(v) => v.len(),
            ArrayData::U32(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn tag(&self) -> u32 {
        match self {
            ArrayData::F32(_) => TAG_F32,
            ArrayData::U32(_) => TAG_U32,
        }
    }
}

/// An n-dimensional array with its shape, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayFile {
    pub dims: Vec<u64>,
    pub data: ArrayData,
}

fn checked_element_count(dims: &[u64]) -> Option<u64> {
    dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
}

fn shape_error(dims: &[u64], len: usize) -> Error {
    Error::DimensionMismatch(format!(
        "array shape {dims:?} does not describe {len} elements"
    ))
}

impl ArrayFile {
    pub fn f32(dims: Vec<u64>, values: Vec<f32>) -> Result<Self> {
        Self::new(dims, ArrayData::F32(values))
    }

    pub fn u32(dims: Vec<u64>, values: Vec<u32>) -> Result<Self> {
        Self::new(dims, ArrayData::U32(values))
    }

    fn new(dims: Vec<u64>, data: ArrayData) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_DIMS as usize {
            return Err(Error::DimensionMismatch(format!(
                "array must have 1..={MAX_DIMS} dimensions, got {}",
                dims.len()
            )));
        }
        let count = checked_element_count(&dims).ok_or_else(|| shape_error(&dims, data.len()))?;
        if count != data.len() as u64 {
            return Err(shape_error(&dims, data.len()));
        }
        Ok(Self { dims, data })
    }

    /// Serializes into the on-disk byte layout.
    pub fn to_bytes(&self) -> Vec<u8> {
        let elem_size = match self.data {
            ArrayData::F32(_) => 4,
            ArrayData::U32(_) => 4,
        };
        let mut out =
            Vec::with_capacity(16 + 8 * self.dims.len() + elem_size * self.data.len());
        out.extend_from_slice(&ARRAY_MAGIC);
        out.extend_from_slice(&ARRAY_VERSION.to_le_bytes());
        out.extend_from_slice(&self.data.tag().to_le_bytes());
        out.extend_from_slice(&(self.dims.len() as u32).to_le_bytes());
        for &d in &self.dims {
            out.extend_from_slice(&d.to_le_bytes());
        }
        match &self.data {
            ArrayData::F32(values) => {
                for v in values {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
            ArrayData::U32(values) => {
                for v in values {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        out
    }

    /// Parses the byte layout; `origin` names the source in errors.
    pub fn from_bytes(bytes: &[u8], origin: &Path) -> Result<Self> {
        let fail = |offset: u64, what: String| Error::Format {
            path: origin.to_path_buf(),
            offset,
            what,
        };
        let take4 = |offset: usize, what: &str| -> Result<[u8; 4]> {
            bytes
                .get(offset..offset + 4)
                .map(|s| s.try_into().expect("4-byte slice"))
                .ok_or_else(|| {
                    fail(
                        offset as u64,
                        format!("file truncated inside {what} (length {})", bytes.len()),
                    )
                })
        };
        let magic = take4(0, "magic")?;
        if magic != ARRAY_MAGIC {
            return Err(fail(0, format!("bad magic {magic:02x?}, expected \"MMKA\"")));
        }
        let version = u32::from_le_bytes(take4(4, "version")?);
        if version != ARRAY_VERSION {
            return Err(fail(
                4,
                format!("unsupported version {version}, expected {ARRAY_VERSION}"),
            ));
        }
        let tag = u32::from_le_bytes(take4(8, "element type")?);
        if tag != TAG_F32 && tag != TAG_U32 {
            return Err(fail(8, format!("unknown element type tag {tag}")));
        }
        let ndims = u32::from_le_bytes(take4(12, "dimension count")?);
        if ndims == 0 || ndims > MAX_DIMS {
            return Err(fail(
                12,
                format!("dimension count {ndims} outside 1..={MAX_DIMS}"),
            ));
        }
        let mut dims = Vec::with_capacity(ndims as usize);
        for i in 0..ndims as usize {
            let offset = 16 + 8 * i;
            let raw: [u8; 8] = bytes
                .get(offset..offset + 8)
                .map(|s| s.try_into().expect("8-byte slice"))
                .ok_or_else(|| {
                    fail(
                        offset as u64,
                        format!("file truncated inside dimension {i} (length {})", bytes.len()),
                    )
                })?;
            dims.push(u64::from_le_bytes(raw));
        }
        let payload_offset = 16 + 8 * ndims as usize;
        let count = checked_element_count(&dims).ok_or_else(|| {
            fail(
                payload_offset as u64,
                format!("dimensions {dims:?} overflow the element count"),
            )
        })?;
        let expected_bytes = count.checked_mul(4).ok_or_else(|| {
            fail(
                payload_offset as u64,
                format!("dimensions {dims:?} overflow the payload size"),
            )
        })?;
        let actual_bytes = (bytes.len() - payload_offset) as u64;
        if expected_bytes != actual_bytes {
            return Err(fail(
                payload_offset as u64,
                format!(
                    "payload length mismatch: shape {dims:?} needs {expected_bytes} bytes, file has {actual_bytes}"
                ),
            ));
        }
        let payload = &bytes[payload_offset..];
        let data = match tag {
            TAG_F32 => ArrayData::F32(
                payload
                    .chunks_exact(4)
                    .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
                    .collect(),
            ),
            TAG_U32 => ArrayData::U32(
                payload
                    .chunks_exact(4)
                    .map(|c| u32::from_le_bytes(c.try_into().expect("4-byte chunk")))
                    .collect(),
            ),
            _ => unreachable!("tag validated above"),
        };
        Ok(Self { dims, data })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes, path)
    }

    /// The payload as f32, or a dimension-mismatch error.
    pub fn expect_f32(&self) -> Result<&[f32]> {
        match &self.data {
            ArrayData::F32(v) => Ok(v),
            ArrayData::U32(_) => Err(Error::DimensionMismatch(
                "expected a float32 array, found uint32".into(),
            )),
        }
    }

    /// The payload as u32, or a dimension-mismatch error.
    pub fn expect_u32(&self) -> Result<&[u32]> {
        match &self.data {
            ArrayData::U32(v) => Ok(v),
            ArrayData::F32(_) => Err(Error::DimensionMismatch(
                "expected a uint32 array, found float32".into(),
            )),
        }
    }
}
