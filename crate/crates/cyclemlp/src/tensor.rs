//! Dense 4-D tensor (N, C, H, W) and a small 2-D matrix for weights.
//!
//! Layout is channel-major row-major: linear index of (n, c, h, w) is
//! `((n*C + c)*H + h)*W + w`, so W is innermost and the channel stride at a
//! fixed spatial site is H*W. Tensors are plain owned buffers; every
//! operation in this crate treats its inputs as immutable.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    dims: [usize; 4],
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    /// Constant-filled tensor. Fails if the extent product overflows usize.
    pub fn new(dims: [usize; 4], fill: T) -> Result<Self> {
        let len = checked_len(dims)?;
        Ok(Tensor {
            dims,
            data: vec![fill; len],
        })
    }

    pub fn zeros(dims: [usize; 4]) -> Result<Self> {
        Self::new(dims, T::zero())
    }

    pub fn from_vec(dims: [usize; 4], data: Vec<T>) -> Result<Self> {
        let len = checked_len(dims)?;
        if data.len() != len {
            return Err(Error::InvalidArgument(format!(
                "data length {} does not match dims {:?} (need {})",
                data.len(),
                dims,
                len
            )));
        }
        Ok(Tensor { dims, data })
    }

    /// I.i.d. normal entries, sampled in f64 and cast to `T`.
    pub fn rand_normal(dims: [usize; 4], rng: &mut Rng, mean: T, std: T) -> Result<Self> {
        if std < T::zero() {
            return Err(Error::InvalidArgument(format!(
                "negative std {std} in rand_normal"
            )));
        }
        let len = checked_len(dims)?;
        let mean64 = mean.to_f64();
        let std64 = std.to_f64();
        let data = (0..len)
            .map(|_| T::from_f64(mean64 + std64 * rng.normal()))
            .collect();
        Ok(Tensor { dims, data })
    }

    #[inline]
    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dims[0]
    }

    #[inline]
    pub fn c(&self) -> usize {
        self.dims[1]
    }

    #[inline]
    pub fn h(&self) -> usize {
        self.dims[2]
    }

    #[inline]
    pub fn w(&self) -> usize {
        self.dims[3]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    /// Linear index of (n, c, h, w).
    #[inline]
    pub fn idx(&self, n: usize, c: usize, h: usize, w: usize) -> usize {
        debug_assert!(
            n < self.dims[0] && c < self.dims[1] && h < self.dims[2] && w < self.dims[3],
            "index ({n},{c},{h},{w}) out of bounds for {:?}",
            self.dims
        );
        ((n * self.dims[1] + c) * self.dims[2] + h) * self.dims[3] + w
    }

    #[inline]
    pub fn at(&self, n: usize, c: usize, h: usize, w: usize) -> T {
        self.data[self.idx(n, c, h, w)]
    }

    #[inline]
    pub fn at_mut(&mut self, n: usize, c: usize, h: usize, w: usize) -> &mut T {
        let i = self.idx(n, c, h, w);
        &mut self.data[i]
    }

    /// Elementwise |a - b| <= atol + rtol*|b|. Errors on dims mismatch.
    pub fn allclose(&self, other: &Self, atol: T, rtol: T) -> Result<bool> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims,
                right: other.dims,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .all(|(&a, &b)| (a - b).abs() <= atol + rtol * b.abs()))
    }

    /// Largest elementwise |a - b|; errors on dims mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims,
                right: other.dims,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    pub fn cast<U: Scalar>(&self) -> Tensor<U> {
        Tensor {
            dims: self.dims,
            data: self.data.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
        }
    }

    pub fn scale(&mut self, factor: T) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// self += other, errors on dims mismatch.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims,
                right: other.dims,
            });
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }
}

fn checked_len(dims: [usize; 4]) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or(Error::SizeOverflow { dims })
}

/// Row-major 2-D weight matrix (rows = input width, cols = output width).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, fill: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, T::zero())
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rand_normal(rows: usize, cols: usize, rng: &mut Rng, mean: T, std: T) -> Result<Self> {
        if std < T::zero() {
            return Err(Error::InvalidArgument(format!(
                "negative std {std} in rand_normal"
            )));
        }
        let mean64 = mean.to_f64();
        let std64 = std.to_f64();
        let data = (0..rows * cols)
            .map(|_| T::from_f64(mean64 + std64 * rng.normal()))
            .collect();
        Ok(Matrix { rows, cols, data })
    }

    /// Identity-like matrix: ones on the main diagonal.
    pub fn eye(side: usize) -> Self {
        let mut m = Self::zeros(side, side);
        for i in 0..side {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    /// Row `r` as a contiguous slice of length `cols`.
    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
        }
    }
}
