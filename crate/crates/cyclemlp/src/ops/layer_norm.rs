//! Layer normalization over the channel dimension of each token (n, h, w).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

pub const LAYER_NORM_EPS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LayerNormParams<T> {
    pub gamma: Vec<T>,
    pub beta: Vec<T>,
    pub eps: T,
}

impl<T: Scalar> LayerNormParams<T> {
    /// gamma = 1, beta = 0, default epsilon.
    pub fn new(channels: usize) -> Self {
        LayerNormParams {
            gamma: vec![T::one(); channels],
            beta: vec![T::zero(); channels],
            eps: T::from_f64(LAYER_NORM_EPS),
        }
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    pub fn param_count(&self) -> usize {
        self.gamma.len() + self.beta.len()
    }

    pub fn cast<U: Scalar>(&self) -> LayerNormParams<U> {
        LayerNormParams {
            gamma: self.gamma.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
            beta: self.beta.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
            eps: U::from_f64(self.eps.to_f64()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LayerNormGrads<T> {
    pub dgamma: Vec<T>,
    pub dbeta: Vec<T>,
}

/// Saved normalized activations and per-token inverse std.
#[derive(Clone, Debug)]
pub struct LayerNormCtx<T> {
    xhat: Tensor<T>,
    inv_std: Vec<T>,
}

pub fn layer_norm_forward<T: Scalar>(
    x: &Tensor<T>,
    p: &LayerNormParams<T>,
) -> Result<(Tensor<T>, LayerNormCtx<T>)> {
    let (nn, cc, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    if p.channels() != cc {
        return Err(Error::ChannelMismatch {
            expected: p.channels(),
            got: cc,
        });
    }
    if p.eps <= T::zero() {
        return Err(Error::InvalidArgument("layer norm eps must be positive".into()));
    }

    let hw = hh * ww;
    let mut y = Tensor::zeros(x.dims())?;
    let mut xhat = Tensor::zeros(x.dims())?;
    let mut inv_std = vec![T::zero(); nn * hw];
    let xd = x.data();
    let yd = y.data_mut();
    let xh = xhat.data_mut();
    let inv_c = T::one() / T::from_usize(cc.max(1));

    for n in 0..nn {
        for s in 0..hw {
            let base = n * cc * hw + s;
            let mut mean = T::zero();
            for c in 0..cc {
                mean += xd[base + c * hw];
            }
            mean *= inv_c;
            let mut var = T::zero();
            for c in 0..cc {
                let d = xd[base + c * hw] - mean;
                var += d * d;
            }
            var *= inv_c;
            let inv = T::one() / (var + p.eps).sqrt();
            inv_std[n * hw + s] = inv;
            for c in 0..cc {
                let xn = (xd[base + c * hw] - mean) * inv;
                xh[base + c * hw] = xn;
                yd[base + c * hw] = p.gamma[c] * xn + p.beta[c];
            }
        }
    }
    Ok((y, LayerNormCtx { xhat, inv_std }))
}

pub fn layer_norm_vjp<T: Scalar>(
    p: &LayerNormParams<T>,
    ctx: &LayerNormCtx<T>,
    dy: &Tensor<T>,
) -> Result<(Tensor<T>, LayerNormGrads<T>)> {
    let xhat = &ctx.xhat;
    if dy.dims() != xhat.dims() {
        return Err(Error::DimsMismatch {
            left: dy.dims(),
            right: xhat.dims(),
        });
    }
    let (nn, cc, hh, ww) = (xhat.n(), xhat.c(), xhat.h(), xhat.w());
    let hw = hh * ww;
    let mut dx = Tensor::zeros(xhat.dims())?;
    let mut grads = LayerNormGrads {
        dgamma: vec![T::zero(); cc],
        dbeta: vec![T::zero(); cc],
    };
    let xh = xhat.data();
    let dyd = dy.data();
    let dxd = dx.data_mut();
    let inv_c = T::one() / T::from_usize(cc.max(1));

    for n in 0..nn {
        for s in 0..hw {
            let base = n * cc * hw + s;
            let inv = ctx.inv_std[n * hw + s];
            let mut sum_dxhat = T::zero();
            let mut sum_dxhat_xhat = T::zero();
            for c in 0..cc {
                let g = dyd[base + c * hw];
                let xn = xh[base + c * hw];
                grads.dbeta[c] += g;
                grads.dgamma[c] += g * xn;
                let dxhat = g * p.gamma[c];
                sum_dxhat += dxhat;
                sum_dxhat_xhat += dxhat * xn;
            }
            let mean_dxhat = sum_dxhat * inv_c;
            let mean_dxhat_xhat = sum_dxhat_xhat * inv_c;
            for c in 0..cc {
                let dxhat = dyd[base + c * hw] * p.gamma[c];
                let xn = xh[base + c * hw];
                dxd[base + c * hw] = inv * (dxhat - mean_dxhat - xn * mean_dxhat_xhat);
            }
        }
    }
    Ok((dx, grads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn constant_token_maps_to_zero() {
        let x = Tensor::<f64>::new([1, 4, 2, 2], 3.7).unwrap();
        let p = LayerNormParams::new(4);
        let (y, _) = layer_norm_forward(&x, &p).unwrap();
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_point_standardization() {
        // Token (1, 3) standardizes to (-1, +1) as eps -> 0.
        let x = Tensor::<f64>::from_vec([1, 2, 1, 1], vec![1.0, 3.0]).unwrap();
        let mut p = LayerNormParams::new(2);
        p.eps = 1e-14;
        let (y, _) = layer_norm_forward(&x, &p).unwrap();
        assert!((y.data()[0] + 1.0).abs() < 1e-6);
        assert!((y.data()[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn per_token_statistics() {
        let mut rng = Rng::new(8);
        let x = Tensor::<f64>::rand_normal([2, 16, 3, 5], &mut rng, 1.0, 2.0).unwrap();
        let p = LayerNormParams::new(16);
        let (y, _) = layer_norm_forward(&x, &p).unwrap();
        for n in 0..2 {
            for h in 0..3 {
                for w in 0..5 {
                    let vals: Vec<f64> = (0..16).map(|c| y.at(n, c, h, w)).collect();
                    let mean = vals.iter().sum::<f64>() / 16.0;
                    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 16.0;
                    assert!(mean.abs() < 1e-6, "token mean {mean}");
                    assert!((var - 1.0).abs() < 1e-4, "token var {var}");
                }
            }
        }
    }

    #[test]
    fn gamma_grad_sums_normalized_activations() {
        let mut rng = Rng::new(9);
        let x = Tensor::<f64>::rand_normal([1, 3, 2, 2], &mut rng, 0.0, 1.0).unwrap();
        let p = LayerNormParams::new(3);
        let (y, ctx) = layer_norm_forward(&x, &p).unwrap();
        let dy = Tensor::new(y.dims(), 1.0).unwrap();
        let (_, grads) = layer_norm_vjp(&p, &ctx, &dy).unwrap();
        for c in 0..3 {
            let expect: f64 = (0..2)
                .flat_map(|h| (0..2).map(move |w| (h, w)))
                .map(|(h, w)| ctx_xhat(&ctx, 0, c, h, w))
                .sum();
            assert!((grads.dgamma[c] - expect).abs() < 1e-12);
            assert!((grads.dbeta[c] - 4.0).abs() < 1e-12);
        }
    }

    fn ctx_xhat(ctx: &LayerNormCtx<f64>, n: usize, c: usize, h: usize, w: usize) -> f64 {
        ctx.xhat.at(n, c, h, w)
    }
}
