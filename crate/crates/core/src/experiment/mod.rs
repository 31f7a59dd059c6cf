//! Experiment orchestration shared by the command-line tool and the
//! acceptance tests: configuration, training-set generation, UDCT
//! evaluation sweeps and sparsifying-precoder rate sweeps.

mod config;
mod dataset;
mod rate;
mod stats;
mod training;
mod udct_eval;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use config::{
    DatasetSection, ExperimentConfig, LrStage, ModelSection, PrecoderSection, TrainingSection, UdctSection,
};
pub use dataset::{generate_dataset, read_dataset, ul_observation, write_dataset, Dataset, DATASET_MAGIC};
pub use rate::{drop_covariances, rate_sweep, summarize_rates, write_rate_csv, RateRow, RateSummary};
pub use stats::{parallel_map, MeanSem};
pub use training::train_model;
pub use udct_eval::{eval_udct, summarize_udct, write_udct_csv, UdctRow, UdctSummary};

pub(crate) const STREAM_DATASET: u64 = 0xda7a;
pub(crate) const STREAM_TRAIN: u64 = 0x7a19;
pub(crate) const STREAM_UDCT_TEST: u64 = 0x0dc7;
pub(crate) const STREAM_RATE: u64 = 0x7a7e;

/// Row label of a UDCT evaluation: one of the estimators, or `truth`,
/// which injects the true DL covariance as the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    Nnls,
    L2,
    Mlp,
    Truth,
}

impl EvalMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvalMethod::Nnls => "nnls",
            EvalMethod::L2 => "l2",
            EvalMethod::Mlp => "mlp",
            EvalMethod::Truth => "truth",
        }
    }

    pub fn estimator(self) -> Option<crate::udct::UdctMethod> {
        use crate::udct::UdctMethod;
        match self {
            EvalMethod::Nnls => Some(UdctMethod::Nnls),
            EvalMethod::L2 => Some(UdctMethod::L2),
            EvalMethod::Mlp => Some(UdctMethod::Mlp),
            EvalMethod::Truth => None,
        }
    }
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "truth" => Ok(EvalMethod::Truth),
            other => Ok(match other.parse::<crate::udct::UdctMethod>()? {
                crate::udct::UdctMethod::Nnls => EvalMethod::Nnls,
                crate::udct::UdctMethod::L2 => EvalMethod::L2,
                crate::udct::UdctMethod::Mlp => EvalMethod::Mlp,
            }),
        }
    }
}

/// Downlink scheme of a rate-sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    SparsifyTrueCov,
    SparsifyEstCov,
    SbfTrueCov,
    SbfEstCov,
}

impl RateMethod {
    pub const ALL: [RateMethod; 4] =
        [RateMethod::SparsifyTrueCov, RateMethod::SparsifyEstCov, RateMethod::SbfTrueCov, RateMethod::SbfEstCov];

    pub fn name(self) -> &'static str {
        match self {
            RateMethod::SparsifyTrueCov => "sparsify_true_cov",
            RateMethod::SparsifyEstCov => "sparsify_est_cov",
            RateMethod::SbfTrueCov => "sbf_true_cov",
            RateMethod::SbfEstCov => "sbf_est_cov",
        }
    }

    pub fn uses_estimates(self) -> bool {
        matches!(self, RateMethod::SparsifyEstCov | RateMethod::SbfEstCov)
    }

    pub fn is_sparsify(self) -> bool {
        matches!(self, RateMethod::SparsifyTrueCov | RateMethod::SparsifyEstCov)
    }
}

impl fmt::Display for RateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RateMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        RateMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown rate method {s:?}")))
    }
}
