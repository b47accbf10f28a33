//! Global average pooling over the spatial plane.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[derive(Clone, Debug)]
pub struct GapCtx {
    in_dims: [usize; 4],
}

pub fn global_avg_pool_forward<T: Scalar>(x: &Tensor<T>) -> (Tensor<T>, GapCtx) {
    let (nn, cc, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    let hw = hh * ww;
    let mut y = Tensor::zeros([nn, cc, 1, 1]).expect("pooled dims cannot overflow");
    if hw > 0 {
        let inv = T::one() / T::from_usize(hw);
        let xd = x.data();
        let yd = y.data_mut();
        for n in 0..nn {
            for c in 0..cc {
                let plane = &xd[(n * cc + c) * hw..][..hw];
                yd[n * cc + c] = plane.iter().fold(T::zero(), |a, &v| a + v) * inv;
            }
        }
    }
    (y, GapCtx { in_dims: x.dims() })
}

pub fn global_avg_pool_vjp<T: Scalar>(ctx: &GapCtx, dy: &Tensor<T>) -> Result<Tensor<T>> {
    let [nn, cc, hh, ww] = ctx.in_dims;
    if dy.dims() != [nn, cc, 1, 1] {
        return Err(Error::DimsMismatch {
            left: dy.dims(),
            right: [nn, cc, 1, 1],
        });
    }
    let mut dx = Tensor::zeros(ctx.in_dims)?;
    let hw = hh * ww;
    if hw > 0 {
        let inv = T::one() / T::from_usize(hw);
        let dyd = dy.data();
        let dxd = dx.data_mut();
        for n in 0..nn {
            for c in 0..cc {
                let g = dyd[n * cc + c] * inv;
                dxd[(n * cc + c) * hw..][..hw].fill(g);
            }
        }
    }
    Ok(dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn constant_input_passes_through() {
        let x = Tensor::<f64>::new([2, 3, 4, 5], 2.5).unwrap();
        let (y, _) = global_avg_pool_forward(&x);
        assert_eq!(y.dims(), [2, 3, 1, 1]);
        assert!(y.iter().all(|&v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn single_site_is_identity() {
        let mut rng = Rng::new(2);
        let x = Tensor::<f64>::rand_normal([1, 4, 1, 1], &mut rng, 0.0, 1.0).unwrap();
        let (y, _) = global_avg_pool_forward(&x);
        assert_eq!(y, x);
    }

    #[test]
    fn vjp_spreads_uniformly() {
        let x = Tensor::<f64>::zeros([1, 1, 2, 2]).unwrap();
        let (_, ctx) = global_avg_pool_forward(&x);
        let dy = Tensor::new([1, 1, 1, 1], 8.0).unwrap();
        let dx = global_avg_pool_vjp(&ctx, &dy).unwrap();
        assert!(dx.iter().all(|&v| (v - 2.0).abs() < 1e-12));
    }
}
