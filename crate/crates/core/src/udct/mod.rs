//! Uplink-to-downlink covariance transformation: NNLS, ℓ2 projection and
//! MLP-based ASF estimators, DL reconstruction, and distortion metrics.

mod dictionary;
mod estimate;
mod metrics;
mod nnls;
mod reconstruct;

pub use dictionary::{stack_complex, UlDictionary};
pub use estimate::{
    estimate, estimate_l2, estimate_mlp, estimate_nnls, mlp_features, UdctEstimate, UdctMethod,
    UdctOptions,
};
pub use metrics::{efficiency_profile, metric_efficiency, metric_nfd, metric_power_loss};
pub use nnls::{kkt_residual, nnls, NnlsOptions, NnlsReport};
pub use reconstruct::{interpolate_asf, reconstruct_dl, DEFAULT_UPSAMPLE};
