//! Downlink link-level simulation: pilots, LMMSE channel estimation, ZF
//! precoding, statistical beamforming, and per-block sum rates.

mod lmmse;
mod pilots;
mod sbf;
mod trial;
mod zf;

pub use lmmse::{lmmse_estimate, ChannelPrior, MAX_CONDITION};
pub use pilots::{make_pilots, PilotMatrix};
pub use sbf::statistical_beamformer;
pub use trial::{
    max_relative_interference, sbf_noise_level, sbf_trial, sparsify_trial, user_rates, LinkParams, PriorKind,
    TrialOutcome, UserChannels,
};
pub use zf::{zf_precoder, zf_with_fallback};
