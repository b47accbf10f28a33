//! Error type shared by every module of the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two tensors that must agree in shape do not.
    DimsMismatch {
        left: [usize; 4],
        right: [usize; 4],
    },
    /// Input channel count does not match the weight's row count.
    ChannelMismatch { expected: usize, got: usize },
    /// Extent product overflows the platform size type.
    SizeOverflow { dims: [usize; 4] },
    /// A strided embedding would produce an empty output map.
    InputTooSmall {
        input: (usize, usize),
        kernel: usize,
        stride: usize,
        padding: usize,
    },
    /// A spatial FC weight is tied to a different H*W than the input's.
    ScaleMismatch { weight_side: usize, input_hw: usize },
    /// Unknown model variant name.
    UnknownVariant(String),
    /// Anything else a caller got wrong (negative std, even kernel, ...).
    InvalidArgument(String),
    /// File I/O failure.
    Io(String),
    /// Malformed CYMT/CYMW payload.
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimsMismatch { left, right } => {
                write!(f, "tensor dims mismatch: {left:?} vs {right:?}")
            }
            Error::ChannelMismatch { expected, got } => {
                write!(f, "channel mismatch: weight expects {expected}, input has {got}")
            }
            Error::SizeOverflow { dims } => {
                write!(f, "extent product overflows usize: {dims:?}")
            }
            Error::InputTooSmall {
                input,
                kernel,
                stride,
                padding,
            } => write!(
                f,
                "input {}x{} too small for kernel {kernel} stride {stride} padding {padding}",
                input.0, input.1
            ),
            Error::ScaleMismatch {
                weight_side,
                input_hw,
            } => write!(
                f,
                "spatial FC weight is fixed to H*W={weight_side}, input has H*W={input_hw}"
            ),
            Error::UnknownVariant(name) => write!(f, "unknown variant '{name}'"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
