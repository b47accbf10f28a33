//! Channel FC: a per-site linear map over the channel dimension.
//!
//! Y(n,j,h,w) = bias_j + sum_c F[c,j] * X(n,c,h,w). Spatial sites never mix,
//! so the operator accepts any H, W with the same parameters.

use crate::error::{Error, Result};
use crate::ops::fc_params::{CycleFcParams, FcGrads};
use crate::scalar::Scalar;
use crate::tensor::{Matrix, Tensor};

/// Saved forward state for the backward pass.
#[derive(Clone, Debug)]
pub struct ChannelFcCtx<T> {
    pub(crate) x: Tensor<T>,
}

pub fn channel_fc_forward<T: Scalar>(
    x: &Tensor<T>,
    p: &CycleFcParams<T>,
) -> Result<(Tensor<T>, ChannelFcCtx<T>)> {
    if !p.kernel.is_pointwise() {
        return Err(Error::InvalidArgument(format!(
            "channel FC requires a 1x1 kernel, got {}",
            p.kernel
        )));
    }
    if x.c() != p.c_in() {
        return Err(Error::ChannelMismatch {
            expected: p.c_in(),
            got: x.c(),
        });
    }

    let (nn, ci, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    let co = p.c_out();
    let mut y = Tensor::zeros([nn, co, hh, ww])?;
    let xd = x.data();
    let yd = y.data_mut();
    // Row tile: accumulate all output channels for one (n, h) row so each
    // input row is streamed exactly once and stores stay contiguous.
    let mut tile = vec![T::zero(); co * ww];
    for n in 0..nn {
        for h in 0..hh {
            for j in 0..co {
                tile[j * ww..(j + 1) * ww].fill(p.bias[j]);
            }
            for c in 0..ci {
                let xrow = &xd[((n * ci + c) * hh + h) * ww..][..ww];
                let wrow = p.weight.row(c);
                for j in 0..co {
                    let f = wrow[j];
                    let trow = &mut tile[j * ww..(j + 1) * ww];
                    for w in 0..ww {
                        trow[w] += f * xrow[w];
                    }
                }
            }
            for j in 0..co {
                yd[((n * co + j) * hh + h) * ww..][..ww].copy_from_slice(&tile[j * ww..(j + 1) * ww]);
            }
        }
    }
    Ok((y, ChannelFcCtx { x: x.clone() }))
}

pub fn channel_fc_vjp<T: Scalar>(
    p: &CycleFcParams<T>,
    ctx: &ChannelFcCtx<T>,
    dy: &Tensor<T>,
) -> Result<(Tensor<T>, FcGrads<T>)> {
    let x = &ctx.x;
    let (nn, ci, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    let co = p.c_out();
    if dy.dims() != [nn, co, hh, ww] {
        return Err(Error::DimsMismatch {
            left: dy.dims(),
            right: [nn, co, hh, ww],
        });
    }

    let mut dx = Tensor::zeros(x.dims())?;
    let mut grads = FcGrads::zeros_like(p);
    let xd = x.data();
    let dyd = dy.data();
    let dxd = dx.data_mut();

    // Transposed weight gives contiguous rows for the dx accumulation.
    let mut wt = Matrix::<T>::zeros(co, ci);
    for c in 0..ci {
        for j in 0..co {
            *wt.at_mut(j, c) = p.weight.at(c, j);
        }
    }

    let mut dxtile = vec![T::zero(); ci * ww];
    for n in 0..nn {
        for h in 0..hh {
            dxtile.fill(T::zero());
            for j in 0..co {
                let dyrow = &dyd[((n * co + j) * hh + h) * ww..][..ww];
                grads.dbias[j] += dyrow.iter().fold(T::zero(), |a, &v| a + v);
                let wtrow = wt.row(j);
                for c in 0..ci {
                    let f = wtrow[c];
                    let drow = &mut dxtile[c * ww..(c + 1) * ww];
                    for w in 0..ww {
                        drow[w] += f * dyrow[w];
                    }
                }
                for c in 0..ci {
                    let xrow = &xd[((n * ci + c) * hh + h) * ww..][..ww];
                    let mut acc = T::zero();
                    for w in 0..ww {
                        acc += xrow[w] * dyrow[w];
                    }
                    *grads.dweight.at_mut(c, j) += acc;
                }
            }
            for c in 0..ci {
                dxd[((n * ci + c) * hh + h) * ww..][..ww]
                    .copy_from_slice(&dxtile[c * ww..(c + 1) * ww]);
            }
        }
    }
    Ok((dx, grads))
}
