//! Cycle fully-connected operators and the CycleMLP backbone family.
//!
//! The crate provides:
//! - a minimal dense 4-D tensor with deterministic seeded initialization,
//! - the cycle FC operator (a channel FC whose per-channel samples walk a
//!   pseudo-kernel window), plus layer norm, GELU, channel MLP, overlapping
//!   patch embedding, pooling, and softmax cross-entropy, each with exact
//!   vector-Jacobian products,
//! - the hierarchical four-stage backbone in variants b1..b5 and a desk-
//!   scale toy variant, producing classification logits and a 1/4..1/32
//!   feature pyramid,
//! - brute-force oracles, finite-difference gradient checking, exact
//!   parameter/MAC accounting, and a toy training harness,
//! - CYMT tensor and CYMW checkpoint file formats for interop.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`): model paths
//! default to `f32`, oracles and gradient checks run in `f64`.

pub mod error;
pub mod ops;
pub mod rng;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use rng::Rng;
pub use scalar::Scalar;
pub use tensor::{Matrix, Tensor};

/// Single-precision tensor: the default for model paths.
pub type Tensor32 = Tensor<f32>;
/// Double-precision tensor: oracles and gradient checks.
pub type Tensor64 = Tensor<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Matrix64 = Matrix<f64>;
