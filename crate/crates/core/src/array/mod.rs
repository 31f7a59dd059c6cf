//! ULA geometry, angular spread functions, covariance synthesis and channel
//! sampling.

mod asf;
mod channel;
pub mod record;
mod toeplitz;
mod ula;

pub use asf::{
    quantize_groups, sample_asf, sample_groups, Asf, AsfGroup, GroupShape, GroupSparseAsfSpec,
    GroupWeights, ASF_SUM_TOLERANCE,
};
pub use channel::{
    noise_variance_for_snr, sample_channels, sample_channels_with_noise, sample_cov, ChannelBatch,
    PSD_CLIP_TOLERANCE,
};
pub(crate) use toeplitz::fourier_column;
pub use toeplitz::{synth_cov, toeplitzify, HermitianToeplitz};
pub use ula::{array_response, Carrier, UlaModel, DEFAULT_F_DL, DEFAULT_F_UL, SPEED_OF_LIGHT};
pub(crate) use ula::steering;
