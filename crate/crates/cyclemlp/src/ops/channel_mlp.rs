//! Two-layer per-site MLP over channels with a GELU in between.

use crate::error::{Error, Result};
use crate::ops::channel_fc::{channel_fc_forward, channel_fc_vjp, ChannelFcCtx};
use crate::ops::fc_params::{CycleFcParams, FcGrads};
use crate::ops::gelu::{gelu_forward, gelu_vjp, GeluCtx};
use crate::ops::offsets::Kernel;
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// fc1: C -> E*C, fc2: E*C -> C. Both are 1x1 (per-site) linear layers.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMlpParams<T> {
    pub fc1: CycleFcParams<T>,
    pub fc2: CycleFcParams<T>,
}

impl<T: Scalar> ChannelMlpParams<T> {
    pub fn new(fc1: CycleFcParams<T>, fc2: CycleFcParams<T>) -> Result<Self> {
        if fc1.c_out() != fc2.c_in() {
            return Err(Error::InvalidArgument(format!(
                "mlp hidden widths disagree: fc1 out {}, fc2 in {}",
                fc1.c_out(),
                fc2.c_in()
            )));
        }
        if !fc1.kernel.is_pointwise() || !fc2.kernel.is_pointwise() {
            return Err(Error::InvalidArgument(
                "channel MLP layers must use 1x1 kernels".into(),
            ));
        }
        Ok(ChannelMlpParams { fc1, fc2 })
    }

    pub fn init(channels: usize, expand: usize, rng: &mut Rng) -> Self {
        let hidden = channels * expand;
        ChannelMlpParams {
            fc1: CycleFcParams::init(channels, hidden, Kernel::square(), rng),
            fc2: CycleFcParams::init(hidden, channels, Kernel::square(), rng),
        }
    }

    pub fn param_count(&self) -> usize {
        self.fc1.param_count() + self.fc2.param_count()
    }

    pub fn cast<U: Scalar>(&self) -> ChannelMlpParams<U> {
        ChannelMlpParams {
            fc1: self.fc1.cast(),
            fc2: self.fc2.cast(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChannelMlpCtx<T> {
    ctx1: ChannelFcCtx<T>,
    gelu: GeluCtx<T>,
    ctx2: ChannelFcCtx<T>,
}

#[derive(Clone, Debug)]
pub struct ChannelMlpGrads<T> {
    pub fc1: FcGrads<T>,
    pub fc2: FcGrads<T>,
}

pub fn channel_mlp_forward<T: Scalar>(
    x: &Tensor<T>,
    p: &ChannelMlpParams<T>,
) -> Result<(Tensor<T>, ChannelMlpCtx<T>)> {
    let (h, ctx1) = channel_fc_forward(x, &p.fc1)?;
    let (a, gelu) = gelu_forward(&h);
    let (y, ctx2) = channel_fc_forward(&a, &p.fc2)?;
    Ok((y, ChannelMlpCtx { ctx1, gelu, ctx2 }))
}

pub fn channel_mlp_vjp<T: Scalar>(
    p: &ChannelMlpParams<T>,
    ctx: &ChannelMlpCtx<T>,
    dy: &Tensor<T>,
) -> Result<(Tensor<T>, ChannelMlpGrads<T>)> {
    let (da, g2) = channel_fc_vjp(&p.fc2, &ctx.ctx2, dy)?;
    let dh = gelu_vjp(&ctx.gelu, &da)?;
    let (dx, g1) = channel_fc_vjp(&p.fc1, &ctx.ctx1, &dh)?;
    Ok((dx, ChannelMlpGrads { fc1: g1, fc2: g2 }))
}
