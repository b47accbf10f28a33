//! Parameters shared by the channel FC and cycle FC operators.

use crate::error::{Error, Result};
use crate::ops::offsets::{Kernel, OffsetTable};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::tensor::Matrix;

/// Weight (C_i x C_o), bias (C_o), and the pseudo-kernel extents.
///
/// The parameter count is C_i*C_o + C_o regardless of the kernel: the kernel
/// only selects where each input channel is sampled, it adds no weights.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleFcParams<T> {
    pub weight: Matrix<T>,
    pub bias: Vec<T>,
    pub kernel: Kernel,
}

impl<T: Scalar> CycleFcParams<T> {
    pub fn new(weight: Matrix<T>, bias: Vec<T>, kernel: Kernel) -> Result<Self> {
        if bias.len() != weight.cols() {
            return Err(Error::InvalidArgument(format!(
                "bias length {} does not match weight cols {}",
                bias.len(),
                weight.cols()
            )));
        }
        Ok(CycleFcParams {
            weight,
            bias,
            kernel,
        })
    }

    pub fn zeros(c_in: usize, c_out: usize, kernel: Kernel) -> Self {
        CycleFcParams {
            weight: Matrix::zeros(c_in, c_out),
            bias: vec![T::zero(); c_out],
            kernel,
        }
    }

    /// Glorot-normal weight init (std = sqrt(2/(c_in+c_out))), zero bias.
    pub fn init(c_in: usize, c_out: usize, kernel: Kernel, rng: &mut Rng) -> Self {
        let std = T::from_f64((2.0 / (c_in + c_out) as f64).sqrt());
        CycleFcParams {
            weight: Matrix::rand_normal(c_in, c_out, rng, T::zero(), std)
                .expect("std is non-negative"),
            bias: vec![T::zero(); c_out],
            kernel,
        }
    }

    #[inline]
    pub fn c_in(&self) -> usize {
        self.weight.rows()
    }

    #[inline]
    pub fn c_out(&self) -> usize {
        self.weight.cols()
    }

    pub fn param_count(&self) -> usize {
        self.weight.rows() * self.weight.cols() + self.bias.len()
    }

    pub fn offsets(&self) -> OffsetTable {
        OffsetTable::from_kernel(self.c_in(), self.kernel)
    }

    pub fn cast<U: Scalar>(&self) -> CycleFcParams<U> {
        CycleFcParams {
            weight: self.weight.cast(),
            bias: self.bias.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
            kernel: self.kernel,
        }
    }
}

/// Gradients mirroring [`CycleFcParams`].
#[derive(Clone, Debug)]
pub struct FcGrads<T> {
    pub dweight: Matrix<T>,
    pub dbias: Vec<T>,
}

impl<T: Scalar> FcGrads<T> {
    pub fn zeros_like(p: &CycleFcParams<T>) -> Self {
        FcGrads {
            dweight: Matrix::zeros(p.c_in(), p.c_out()),
            dbias: vec![T::zero(); p.c_out()],
        }
    }
}
