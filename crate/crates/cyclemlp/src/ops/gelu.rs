//! GELU activation, exact erf form: 0.5 * x * (1 + erf(x / sqrt(2))).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[inline]
pub fn gelu_scalar<T: Scalar>(x: T) -> T {
    let half = T::from_f64(0.5);
    half * x * (T::one() + (x / T::SQRT_2()).erf())
}

/// d/dx gelu(x) = Phi(x) + x * phi(x), with Phi the standard normal CDF.
#[inline]
pub fn gelu_grad_scalar<T: Scalar>(x: T) -> T {
    let half = T::from_f64(0.5);
    let cdf = half * (T::one() + (x / T::SQRT_2()).erf());
    let inv_sqrt_2pi = T::from_f64(0.3989422804014327);
    let pdf = inv_sqrt_2pi * (-half * x * x).exp();
    cdf + x * pdf
}

#[derive(Clone, Debug)]
pub struct GeluCtx<T> {
    x: Tensor<T>,
}

pub fn gelu_forward<T: Scalar>(x: &Tensor<T>) -> (Tensor<T>, GeluCtx<T>) {
    let mut y = x.clone();
    for v in y.data_mut() {
        *v = gelu_scalar(*v);
    }
    (y, GeluCtx { x: x.clone() })
}

pub fn gelu_vjp<T: Scalar>(ctx: &GeluCtx<T>, dy: &Tensor<T>) -> Result<Tensor<T>> {
    if dy.dims() != ctx.x.dims() {
        return Err(Error::DimsMismatch {
            left: dy.dims(),
            right: ctx.x.dims(),
        });
    }
    let mut dx = ctx.x.clone();
    for (v, &g) in dx.data_mut().iter_mut().zip(dy.data()) {
        *v = gelu_grad_scalar(*v) * g;
    }
    Ok(dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_fixed_point() {
        assert_eq!(gelu_scalar(0.0f64), 0.0);
    }

    #[test]
    fn positive_tail_approaches_identity() {
        assert!((gelu_scalar(6.0f64) - 6.0).abs() < 1e-6);
    }

    #[test]
    fn negative_tail_vanishes() {
        assert!(gelu_scalar(-8.0f64).abs() < 1e-9);
    }

    #[test]
    fn monotone_on_grid_above_inflection() {
        // gelu is monotone for x >= 0; check on a coarse grid.
        let mut prev = gelu_scalar(0.0f64);
        for i in 1..100 {
            let y = gelu_scalar(i as f64 * 0.1);
            assert!(y >= prev);
            prev = y;
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let pts = [-3.0f64, -1.2, -0.3, 0.0, 0.4, 1.7, 2.9];
        let h = 1e-6;
        for &x in &pts {
            let analytic = gelu_grad_scalar(x);
            let numeric = (gelu_scalar(x + h) - gelu_scalar(x - h)) / (2.0 * h);
            let denom = analytic.abs().max(numeric.abs()).max(1e-8);
            assert!(
                ((analytic - numeric) / denom).abs() < 1e-8,
                "x={x}: {analytic} vs {numeric}"
            );
        }
    }
}
