//! Overlapping patch embedding: a strided 2-D cross-correlation with zero
//! padding. Used for the stem (k=7, s=4, p=3) and the stage transitions
//! (k=3, s=2, p=1).

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq)]
pub struct PatchEmbedParams<T> {
    /// Weight laid out as (C_out, C_in, k, k).
    pub weight: Tensor<T>,
    pub bias: Vec<T>,
    pub stride: usize,
    pub padding: usize,
}

impl<T: Scalar> PatchEmbedParams<T> {
    pub fn new(weight: Tensor<T>, bias: Vec<T>, stride: usize, padding: usize) -> Result<Self> {
        let k = weight.h();
        if k != weight.w() || k % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "patch embed kernel must be square and odd, got {}x{}",
                weight.h(),
                weight.w()
            )));
        }
        if bias.len() != weight.n() {
            return Err(Error::InvalidArgument(format!(
                "bias length {} does not match output channels {}",
                bias.len(),
                weight.n()
            )));
        }
        if stride == 0 {
            return Err(Error::InvalidArgument("stride must be positive".into()));
        }
        Ok(PatchEmbedParams {
            weight,
            bias,
            stride,
            padding,
        })
    }

    /// Glorot-normal init with conv fan-in/out (channels times k^2).
    pub fn init(
        c_in: usize,
        c_out: usize,
        k: usize,
        stride: usize,
        padding: usize,
        rng: &mut Rng,
    ) -> Self {
        let fan_in = c_in * k * k;
        let fan_out = c_out * k * k;
        let std = T::from_f64((2.0 / (fan_in + fan_out) as f64).sqrt());
        let weight = Tensor::rand_normal([c_out, c_in, k, k], rng, T::zero(), std)
            .expect("std is non-negative");
        PatchEmbedParams {
            weight,
            bias: vec![T::zero(); c_out],
            stride,
            padding,
        }
    }

    #[inline]
    pub fn c_in(&self) -> usize {
        self.weight.c()
    }

    #[inline]
    pub fn c_out(&self) -> usize {
        self.weight.n()
    }

    #[inline]
    pub fn kernel(&self) -> usize {
        self.weight.h()
    }

    pub fn param_count(&self) -> usize {
        self.weight.len() + self.bias.len()
    }

    pub fn cast<U: Scalar>(&self) -> PatchEmbedParams<U> {
        PatchEmbedParams {
            weight: self.weight.cast(),
            bias: self.bias.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
            stride: self.stride,
            padding: self.padding,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PatchEmbedGrads<T> {
    pub dweight: Tensor<T>,
    pub dbias: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct PatchEmbedCtx<T> {
    pub(crate) x: Tensor<T>,
}

/// floor((extent + 2p - k)/s) + 1, or None when that is below 1.
pub fn out_extent(extent: usize, k: usize, stride: usize, padding: usize) -> Option<usize> {
    let padded = extent + 2 * padding;
    if padded < k {
        return None;
    }
    Some((padded - k) / stride + 1)
}

pub fn patch_embed_forward<T: Scalar>(
    x: &Tensor<T>,
    p: &PatchEmbedParams<T>,
) -> Result<(Tensor<T>, PatchEmbedCtx<T>)> {
    let (nn, ci, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    if ci != p.c_in() {
        return Err(Error::ChannelMismatch {
            expected: p.c_in(),
            got: ci,
        });
    }
    let k = p.kernel();
    let (s, pad) = (p.stride, p.padding);
    let too_small = || Error::InputTooSmall {
        input: (hh, ww),
        kernel: k,
        stride: s,
        padding: pad,
    };
    let ho = out_extent(hh, k, s, pad).ok_or_else(too_small)?;
    let wo = out_extent(ww, k, s, pad).ok_or_else(too_small)?;
    let co = p.c_out();

    let mut y = Tensor::zeros([nn, co, ho, wo])?;
    let xd = x.data();
    let wd = p.weight.data();
    let yd = y.data_mut();
    for n in 0..nn {
        for j in 0..co {
            for oh in 0..ho {
                let ih0 = (oh * s) as isize - pad as isize;
                for ow in 0..wo {
                    let iw0 = (ow * s) as isize - pad as isize;
                    let mut acc = p.bias[j];
                    for c in 0..ci {
                        for kh in 0..k {
                            let ih = ih0 + kh as isize;
                            if ih < 0 || ih >= hh as isize {
                                continue;
                            }
                            let xrow = &xd[((n * ci + c) * hh + ih as usize) * ww..][..ww];
                            let wrow = &wd[((j * ci + c) * k + kh) * k..][..k];
                            for kw in 0..k {
                                let iw = iw0 + kw as isize;
                                if iw < 0 || iw >= ww as isize {
                                    continue;
                                }
                                acc += wrow[kw] * xrow[iw as usize];
                            }
                        }
                    }
                    yd[((n * co + j) * ho + oh) * wo + ow] = acc;
                }
            }
        }
    }
    Ok((y, PatchEmbedCtx { x: x.clone() }))
}

pub fn patch_embed_vjp<T: Scalar>(
    p: &PatchEmbedParams<T>,
    ctx: &PatchEmbedCtx<T>,
    dy: &Tensor<T>,
) -> Result<(Tensor<T>, PatchEmbedGrads<T>)> {
    let x = &ctx.x;
    let (nn, ci, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    let k = p.kernel();
    let (s, pad) = (p.stride, p.padding);
    let ho = dy.h();
    let wo = dy.w();
    let co = p.c_out();
    let expect_ho = out_extent(hh, k, s, pad).unwrap_or(0);
    let expect_wo = out_extent(ww, k, s, pad).unwrap_or(0);
    if dy.dims() != [nn, co, expect_ho, expect_wo] {
        return Err(Error::DimsMismatch {
            left: dy.dims(),
            right: [nn, co, expect_ho, expect_wo],
        });
    }

    let mut dx = Tensor::zeros(x.dims())?;
    let mut dweight = Tensor::zeros(p.weight.dims())?;
    let mut dbias = vec![T::zero(); co];
    let xd = x.data();
    let wd = p.weight.data();
    let dyd = dy.data();
    {
        let dxd = dx.data_mut();
        let dwd = dweight.data_mut();
        for n in 0..nn {
            for j in 0..co {
                for oh in 0..ho {
                    let ih0 = (oh * s) as isize - pad as isize;
                    for ow in 0..wo {
                        let iw0 = (ow * s) as isize - pad as isize;
                        let g = dyd[((n * co + j) * ho + oh) * wo + ow];
                        dbias[j] += g;
                        for c in 0..ci {
                            for kh in 0..k {
                                let ih = ih0 + kh as isize;
                                if ih < 0 || ih >= hh as isize {
                                    continue;
                                }
                                let xbase = ((n * ci + c) * hh + ih as usize) * ww;
                                let wbase = ((j * ci + c) * k + kh) * k;
                                for kw in 0..k {
                                    let iw = iw0 + kw as isize;
                                    if iw < 0 || iw >= ww as isize {
                                        continue;
                                    }
                                    dwd[wbase + kw] += xd[xbase + iw as usize] * g;
                                    dxd[xbase + iw as usize] += wd[wbase + kw] * g;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((
        dx,
        PatchEmbedGrads {
            dweight,
            dbias,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_extent_formulas() {
        assert_eq!(out_extent(224, 7, 4, 3), Some(56));
        assert_eq!(out_extent(56, 3, 2, 1), Some(28));
        assert_eq!(out_extent(2, 7, 4, 0), None);
    }

    #[test]
    fn too_small_input_rejected() {
        let mut rng = Rng::new(0);
        let p = PatchEmbedParams::<f32>::init(3, 4, 7, 4, 0, &mut rng);
        let x = Tensor::zeros([1, 3, 2, 2]).unwrap();
        assert!(matches!(
            patch_embed_forward(&x, &p),
            Err(Error::InputTooSmall { .. })
        ));
    }

    #[test]
    fn pointwise_kernel_is_channel_fc() {
        // 1x1 kernel, stride 1: every site maps independently.
        let mut rng = Rng::new(5);
        let x = Tensor::<f64>::rand_normal([1, 2, 3, 3], &mut rng, 0.0, 1.0).unwrap();
        let mut weight = Tensor::zeros([2, 2, 1, 1]).unwrap();
        *weight.at_mut(0, 0, 0, 0) = 1.0;
        *weight.at_mut(1, 1, 0, 0) = 1.0;
        let p = PatchEmbedParams::new(weight, vec![0.0; 2], 1, 0).unwrap();
        let (y, _) = patch_embed_forward(&x, &p).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn zero_cotangent_zero_grads() {
        let mut rng = Rng::new(6);
        let x = Tensor::<f64>::rand_normal([1, 2, 6, 6], &mut rng, 0.0, 1.0).unwrap();
        let p = PatchEmbedParams::init(2, 3, 3, 2, 1, &mut rng);
        let (y, ctx) = patch_embed_forward(&x, &p).unwrap();
        let dy = Tensor::zeros(y.dims()).unwrap();
        let (dx, grads) = patch_embed_vjp(&p, &ctx, &dy).unwrap();
        assert!(dx.iter().all(|&v| v == 0.0));
        assert!(grads.dweight.iter().all(|&v| v == 0.0));
        assert!(grads.dbias.iter().all(|&v| v == 0.0));
    }
}
