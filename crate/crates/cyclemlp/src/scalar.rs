//! Floating-point element trait implemented for `f32` and `f64`.
//!
//! Model paths run in `f32` by default; oracles and gradient checks run in
//! `f64`. Everything numeric in this crate is generic over [`Scalar`] so the
//! two paths share one implementation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumAssign};

/// Element type of tensors, matrices, and parameters.
pub trait Scalar:
    Float + FloatConst + NumAssign + Copy + Debug + Display + Send + Sync + 'static
{
    /// Dtype code used by the CYMT/CYMW file formats (0 = f32, 1 = f64).
    const DTYPE_CODE: u8;
    /// Human-readable dtype name.
    const DTYPE_NAME: &'static str;
    /// Bytes per element in the little-endian on-disk encoding.
    const BYTE_WIDTH: usize;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_usize(v: usize) -> Self;

    /// Gauss error function, evaluated in double precision.
    fn erf(self) -> Self;

    fn write_le(self, out: &mut Vec<u8>);
    fn read_le(bytes: &[u8]) -> Self;
}

impl Scalar for f32 {
    const DTYPE_CODE: u8 = 0;
    const DTYPE_NAME: &'static str = "f32";
    const BYTE_WIDTH: usize = 4;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        v as f32
    }

    #[inline]
    fn erf(self) -> Self {
        libm::erf(self as f64) as f32
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn read_le(bytes: &[u8]) -> Self {
        f32::from_le_bytes(bytes[..4].try_into().expect("short f32 payload"))
    }
}

impl Scalar for f64 {
    const DTYPE_CODE: u8 = 1;
    const DTYPE_NAME: &'static str = "f64";
    const BYTE_WIDTH: usize = 8;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        v as f64
    }

    #[inline]
    fn erf(self) -> Self {
        libm::erf(self)
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes[..8].try_into().expect("short f64 payload"))
    }
}

/// Dtype code of a serialized tensor, decoded from a file header.
pub fn dtype_name(code: u8) -> Option<&'static str> {
    match code {
        0 => Some("f32"),
        1 => Some("f64"),
        _ => None,
    }
}
