//! Cycle FC: a channel FC whose per-channel input sample is spatially
//! displaced in a repeating cycle.
//!
//! Y(n,j,h,w) = bias_j + sum_c F[c,j] * X~(n, c, h+dh(c), w+dw(c)), where X~
//! reads zero outside the spatial bounds and the offsets come from the
//! pseudo-kernel (see [`crate::ops::offsets`]). Parameter count and MAC
//! count are identical to channel FC; with a 1x1 kernel the operator is
//! bit-identical to it.

use crate::error::{Error, Result};
use crate::ops::fc_params::{CycleFcParams, FcGrads};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Saved forward state for the backward pass.
#[derive(Clone, Debug)]
pub struct CycleFcCtx<T> {
    pub(crate) x: Tensor<T>,
}

pub fn cycle_fc_forward<T: Scalar>(
    x: &Tensor<T>,
    p: &CycleFcParams<T>,
) -> Result<(Tensor<T>, CycleFcCtx<T>)> {
    if x.c() != p.c_in() {
        return Err(Error::ChannelMismatch {
            expected: p.c_in(),
            got: x.c(),
        });
    }

    let (nn, ci, hh, ww) = (x.n(), x.c(), x.h(), x.w());
    let co = p.c_out();
    let offsets = p.offsets();
    let mut y = Tensor::zeros([nn, co, hh, ww])?;
    let xd = x.data();
    let yd = y.data_mut();
    let mut tile = vec![T::zero(); co * ww];
    for n in 0..nn {
        for h in 0..hh {
            for j in 0..co {
                tile[j * ww..(j + 1) * ww].fill(p.bias[j]);
            }
            for c in 0..ci {
                let h2 = h as isize + offsets.dh(c);
                if h2 < 0 || h2 >= hh as isize {
                    continue;
                }
                let dw = offsets.dw(c);
                // Output columns whose shifted sample stays in [0, W).
                let w_lo = 0.max(-dw) as usize;
                let w_hi = ww.min((ww as isize - dw).max(0) as usize);
                if w_lo >= w_hi {
                    continue;
                }
                let xrow = &xd[((n * ci + c) * hh + h2 as usize) * ww..][..ww];
                let wrow = p.weight.row(c);
                for j in 0..co {
                    let f = wrow[j];
                    let trow = &mut tile[j * ww + w_lo..j * ww + w_hi];
                    let xs = &xrow[(w_lo as isize + dw) as usize..(w_hi as isize + dw) as usize];
                    for (t, &xv) in trow.iter_mut().zip(xs) {
                        *t += f * xv;
                    }
                }
            }
            for j in 0..co {
                yd[((n * co + j) * hh + h) * ww..][..ww].copy_from_slice(&tile[j * ww..(j + 1) * ww]);
            }
        }
    }
    Ok((y, CycleFcCtx { x: x.clone() }))
}

pub fn cycle_fc_vjp<T: Scalar>(
    p: &CycleFcParams<T>,
    ctx: &CycleFcCtx<T>,
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

    let offsets = p.offsets();
    let mut dx = Tensor::zeros(x.dims())?;
    let mut grads = FcGrads::zeros_like(p);
    let xd = x.data();
    let dyd = dy.data();

    for j in 0..co {
        let mut acc = T::zero();
        for n in 0..nn {
            for h in 0..hh {
                let dyrow = &dyd[((n * co + j) * hh + h) * ww..][..ww];
                acc += dyrow.iter().fold(T::zero(), |a, &v| a + v);
            }
        }
        grads.dbias[j] = acc;
    }

    // dF[c,j] = sum over sites of the shifted input times dy.
    for n in 0..nn {
        for h in 0..hh {
            for c in 0..ci {
                let h2 = h as isize + offsets.dh(c);
                if h2 < 0 || h2 >= hh as isize {
                    continue;
                }
                let dw = offsets.dw(c);
                let w_lo = 0.max(-dw) as usize;
                let w_hi = ww.min((ww as isize - dw).max(0) as usize);
                if w_lo >= w_hi {
                    continue;
                }
                let xrow = &xd[((n * ci + c) * hh + h2 as usize) * ww..][..ww];
                let xs = &xrow[(w_lo as isize + dw) as usize..(w_hi as isize + dw) as usize];
                for j in 0..co {
                    let dyrow = &dyd[((n * co + j) * hh + h) * ww + w_lo..][..w_hi - w_lo];
                    let mut acc = T::zero();
                    for (&xv, &dv) in xs.iter().zip(dyrow) {
                        acc += xv * dv;
                    }
                    *grads.dweight.at_mut(c, j) += acc;
                }
            }
        }
    }

    // dx(n,c,h',w') = sum_j F[c,j] * dy(n,j,h'-dh(c),w'-dw(c)).
    let dxd = dx.data_mut();
    let mut dxtile = vec![T::zero(); ci * ww];
    for n in 0..nn {
        for h in 0..hh {
            dxtile.fill(T::zero());
            for c in 0..ci {
                let h2 = h as isize - offsets.dh(c);
                if h2 < 0 || h2 >= hh as isize {
                    continue;
                }
                let dw = offsets.dw(c);
                // Input columns whose consumer site w' - dw stays in range.
                let w_lo = 0.max(dw) as usize;
                let w_hi = ww.min((ww as isize + dw).max(0) as usize);
                if w_lo >= w_hi {
                    continue;
                }
                let wrow = p.weight.row(c);
                let drow = &mut dxtile[c * ww + w_lo..c * ww + w_hi];
                for j in 0..co {
                    let f = wrow[j];
                    let dyrow = &dyd[((n * co + j) * hh + h2 as usize) * ww..][..ww];
                    let ds = &dyrow[(w_lo as isize - dw) as usize..(w_hi as isize - dw) as usize];
                    for (d, &dv) in drow.iter_mut().zip(ds) {
                        *d += f * dv;
                    }
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

/// Exact multiply-accumulate count of one cycle FC application.
pub fn cycle_fc_macs(n: usize, c_in: usize, c_out: usize, h: usize, w: usize) -> u64 {
    n as u64 * h as u64 * w as u64 * c_in as u64 * c_out as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::channel_fc::channel_fc_forward;
    use crate::ops::offsets::{Kernel, OffsetTable};
    use crate::rng::Rng;
    use crate::tensor::Matrix;

    #[test]
    fn worked_1x3_row() {
        // W=3 row, three channels, kernel 1x3, unit weights:
        // site w reads channel c at w + ((c mod 3) - 1).
        let x = Tensor::<f64>::from_vec(
            [1, 3, 1, 3],
            vec![
                1.0, 4.0, 7.0, // channel 0 over w
                2.0, 5.0, 8.0, // channel 1
                3.0, 6.0, 9.0, // channel 2
            ],
        )
        .unwrap();
        let p = CycleFcParams::new(
            Matrix::from_vec(3, 1, vec![1.0, 1.0, 1.0]).unwrap(),
            vec![0.0],
            Kernel::new(1, 3).unwrap(),
        )
        .unwrap();
        let (y, _) = cycle_fc_forward(&x, &p).unwrap();
        assert_eq!(y.data(), &[8.0, 15.0, 12.0]);
    }

    #[test]
    fn pointwise_kernel_matches_channel_fc_bitwise() {
        let mut rng = Rng::new(11);
        for _ in 0..50 {
            let ci = 1 + rng.next_below(8);
            let co = 1 + rng.next_below(8);
            let x = Tensor::<f32>::rand_normal(
                [1 + rng.next_below(2), ci, 1 + rng.next_below(5), 1 + rng.next_below(5)],
                &mut rng,
                0.0,
                1.0,
            )
            .unwrap();
            let p = CycleFcParams::init(ci, co, Kernel::square(), &mut rng);
            let (a, _) = cycle_fc_forward(&x, &p).unwrap();
            let (b, _) = channel_fc_forward(&x, &p).unwrap();
            assert_eq!(a.data(), b.data());
        }
    }

    #[test]
    fn resolution_agnostic_params() {
        let mut rng = Rng::new(3);
        let p = CycleFcParams::<f32>::init(6, 4, Kernel::new(3, 1).unwrap(), &mut rng);
        let small = Tensor::rand_normal([1, 6, 9, 11], &mut rng, 0.0, 1.0).unwrap();
        let large = Tensor::rand_normal([1, 6, 9 + 13, 11 + 7], &mut rng, 0.0, 1.0).unwrap();
        assert!(cycle_fc_forward(&small, &p).is_ok());
        assert!(cycle_fc_forward(&large, &p).is_ok());
    }

    #[test]
    fn spatial_locality_respects_kernel_window() {
        let mut rng = Rng::new(21);
        for &(kh, kw) in &[(1usize, 3usize), (3, 1), (1, 5)] {
            let kernel = Kernel::new(kh, kw).unwrap();
            let p = CycleFcParams::<f64>::init(7, 5, kernel, &mut rng);
            let x = Tensor::rand_normal([1, 7, 6, 6], &mut rng, 0.0, 1.0).unwrap();
            let (y0, _) = cycle_fc_forward(&x, &p).unwrap();

            let (ph, pw) = (2usize, 3usize);
            let mut xp = x.clone();
            for c in 0..7 {
                *xp.at_mut(0, c, ph, pw) += 1.0;
            }
            let (y1, _) = cycle_fc_forward(&xp, &p).unwrap();
            for h in 0..6 {
                for w in 0..6 {
                    let changed = (0..5).any(|j| y0.at(0, j, h, w) != y1.at(0, j, h, w));
                    let reach_h = (h as isize - ph as isize).unsigned_abs() <= kh / 2;
                    let reach_w = (w as isize - pw as isize).unsigned_abs() <= kw / 2;
                    if changed {
                        assert!(reach_h && reach_w, "leak at ({h},{w}) for kernel {kernel}");
                    }
                }
            }
        }
    }

    #[test]
    fn vjp_zero_cotangent() {
        let mut rng = Rng::new(4);
        let x = Tensor::<f64>::rand_normal([1, 4, 3, 3], &mut rng, 0.0, 1.0).unwrap();
        let p = CycleFcParams::init(4, 2, Kernel::new(1, 3).unwrap(), &mut rng);
        let (y, ctx) = cycle_fc_forward(&x, &p).unwrap();
        let dy = Tensor::zeros(y.dims()).unwrap();
        let (dx, grads) = cycle_fc_vjp(&p, &ctx, &dy).unwrap();
        assert!(dx.iter().all(|&v| v == 0.0));
        assert!(grads.dweight.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn offsets_match_params_kernel() {
        let p = CycleFcParams::<f32>::zeros(6, 2, Kernel::new(1, 3).unwrap());
        assert_eq!(p.offsets(), OffsetTable::build(6, 1, 3).unwrap());
    }
}
