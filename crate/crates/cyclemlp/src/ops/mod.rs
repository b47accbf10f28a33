//! Forward operators and their vector-Jacobian products.

pub mod channel_fc;
pub mod channel_mlp;
pub mod cycle_fc;
pub mod fc_params;
pub mod gelu;
pub mod layer_norm;
pub mod loss;
pub mod offsets;
pub mod patch_embed;
pub mod pool;

pub use channel_fc::{channel_fc_forward, channel_fc_vjp, ChannelFcCtx};
pub use channel_mlp::{
    channel_mlp_forward, channel_mlp_vjp, ChannelMlpCtx, ChannelMlpGrads, ChannelMlpParams,
};
pub use cycle_fc::{cycle_fc_forward, cycle_fc_macs, cycle_fc_vjp, CycleFcCtx};
pub use fc_params::{CycleFcParams, FcGrads};
pub use gelu::{gelu_forward, gelu_grad_scalar, gelu_scalar, gelu_vjp, GeluCtx};
pub use layer_norm::{
    layer_norm_forward, layer_norm_vjp, LayerNormCtx, LayerNormGrads, LayerNormParams,
    LAYER_NORM_EPS,
};
pub use loss::softmax_xent;
pub use offsets::{build_offset_table, Kernel, OffsetTable};
pub use patch_embed::{
    out_extent, patch_embed_forward, patch_embed_vjp, PatchEmbedCtx, PatchEmbedGrads,
    PatchEmbedParams,
};
pub use pool::{global_avg_pool_forward, global_avg_pool_vjp, GapCtx};
