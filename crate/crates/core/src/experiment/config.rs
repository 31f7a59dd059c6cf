use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::array::{GroupSparseAsfSpec, UlaModel, DEFAULT_F_DL, DEFAULT_F_UL};
use crate::error::{Error, Result};
use crate::link::PriorKind;
use crate::milp::MilpOptions;
use crate::nn::{MlpSpec, TrainConfig};
use crate::rng::derive_seed;
use crate::udct::{UdctMethod, UdctOptions};

use super::{STREAM_TRAIN, EvalMethod, RateMethod};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub antennas: usize,
    pub grid: usize,
    pub f_ul: f64,
    pub f_dl: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { antennas: 32, grid: 128, f_ul: DEFAULT_F_UL, f_dl: DEFAULT_F_DL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub samples: usize,
    /// Snapshots per sample as a multiple of the antenna count.
    pub n_over_m: usize,
    pub snr_db: f64,
    /// Rotate every training ASF by a random number of grid cells. The UL
    /// response is 2-periodic in xi, so this is an exact symmetry of the
    /// observation and spreads training mass evenly over the grid.
    pub circular_shift: bool,
}

impl Default for DatasetSection {
    fn default() -> Self {
        Self { samples: 300_000, n_over_m: 2, snr_db: 20.0, circular_shift: true }
    }
}

/// A run of epochs at one constant learning rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LrStage {
    pub learning_rate: f64,
    pub epochs: usize,
}

/// Training hyperparameters; the seed is derived from the experiment seed.
/// The learning rate is piecewise constant: `epochs` at `learning_rate`,
/// then each of `later_stages` in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub train_fraction: f64,
    pub later_stages: Vec<LrStage>,
}

impl Default for TrainingSection {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            batch_size: 32,
            epochs: 12,
            train_fraction: 0.8,
            later_stages: vec![
                LrStage { learning_rate: 0.1, epochs: 8 },
                LrStage { learning_rate: 0.02, epochs: 6 },
            ],
        }
    }
}

impl TrainingSection {
    /// `(first_epoch, stage)` for every stage, the first included.
    pub fn stages(&self) -> Vec<(usize, LrStage)> {
        let first = LrStage { learning_rate: self.learning_rate, epochs: self.epochs };
        let mut start = 0;
        std::iter::once(first)
            .chain(self.later_stages.iter().copied())
            .map(|st| {
                let s = (start, st);
                start += st.epochs;
                s
            })
            .collect()
    }

    pub fn total_epochs(&self) -> usize {
        self.epochs + self.later_stages.iter().map(|s| s.epochs).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UdctSection {
    pub n_over_m: Vec<usize>,
    pub realizations: usize,
    pub methods: Vec<EvalMethod>,
    pub snr_db: f64,
    pub upsample: usize,
    /// Emit the wall-clock column; off for bit-exact reruns.
    pub record_timing: bool,
}

impl Default for UdctSection {
    fn default() -> Self {
        Self {
            n_over_m: (1..=8).collect(),
            realizations: 200,
            methods: vec![EvalMethod::Nnls, EvalMethod::L2, EvalMethod::Mlp],
            snr_db: 20.0,
            upsample: crate::udct::DEFAULT_UPSAMPLE,
            record_timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrecoderSection {
    pub t_dl: Vec<usize>,
    pub users: usize,
    /// Resource elements per coherence block.
    pub coherence: usize,
    /// Data-phase SNR; sets `P_dl` with unit receiver noise.
    pub snr_db: f64,
    /// `P0` as a fraction of the mean per-user beam power.
    pub p0_fraction: f64,
    pub relative_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_obj: Option<f64>,
    pub prior: PriorKind,
    /// Independent user drops (ASF draws); each gets its own precoder.
    pub drops: usize,
    pub channels_per_drop: usize,
    pub milp_time_limit_s: f64,
    pub methods: Vec<RateMethod>,
    /// Covariance estimator behind the `*_est_cov` methods.
    pub estimator: UdctMethod,
    pub estimate_n_over_m: usize,
    pub estimate_snr_db: f64,
}

impl Default for PrecoderSection {
    fn default() -> Self {
        Self {
            t_dl: vec![8, 12, 16, 20, 24],
            users: 8,
            coherence: 128,
            snr_db: 20.0,
            p0_fraction: 0.5,
            relative_threshold: crate::milp::DEFAULT_RELATIVE_THRESHOLD,
            epsilon_obj: None,
            prior: PriorKind::Diagonal,
            drops: 30,
            channels_per_drop: 10,
            milp_time_limit_s: 60.0,
            methods: RateMethod::ALL.to_vec(),
            estimator: UdctMethod::Mlp,
            estimate_n_over_m: 2,
            estimate_snr_db: 20.0,
        }
    }
}

/// Everything an experiment run depends on besides its input files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Worker threads; `None` uses the available parallelism.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
    pub model: ModelSection,
    pub ensemble: GroupSparseAsfSpec,
    pub dataset: DatasetSection,
    pub training: TrainingSection,
    pub udct: UdctSection,
    pub precoder: PrecoderSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            threads: None,
            out_dir: PathBuf::from("out"),
            model: ModelSection::default(),
            ensemble: GroupSparseAsfSpec::default(),
            dataset: DatasetSection::default(),
            training: TrainingSection::default(),
            udct: UdctSection::default(),
            precoder: PrecoderSection::default(),
        }
    }
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.ula()?;
        self.ensemble.validate()?;
        self.train_config().validate()?;
        require(
            self.training.later_stages.iter().all(|s| s.learning_rate >= 0.0 && s.learning_rate.is_finite()),
            || "training.later_stages learning rates must be finite and nonnegative".into(),
        )?;
        let d = &self.dataset;
        require(d.samples > 0, || "dataset.samples must be positive".into())?;
        require(d.n_over_m > 0, || "dataset.n_over_m must be positive".into())?;
        let u = &self.udct;
        require(!u.n_over_m.is_empty() && !u.n_over_m.contains(&0), || {
            format!("udct.n_over_m must be a nonempty list of positive values, got {:?}", u.n_over_m)
        })?;
        require(u.realizations > 0, || "udct.realizations must be positive".into())?;
        require(!u.methods.is_empty(), || "udct.methods is empty".into())?;
        require(u.upsample > 0, || "udct.upsample must be positive".into())?;
        let p = &self.precoder;
        require(!p.t_dl.is_empty() && !p.t_dl.contains(&0), || {
            format!("precoder.t_dl must be a nonempty list of positive values, got {:?}", p.t_dl)
        })?;
        require(p.users > 0 && p.coherence > 0, || "precoder.users and coherence must be positive".into())?;
        require(p.drops > 0 && p.channels_per_drop > 0, || "precoder.drops and channels_per_drop must be positive".into())?;
        require(p.p0_fraction >= 0.0 && p.relative_threshold > 0.0, || "precoder thresholds out of range".into())?;
        require(p.milp_time_limit_s > 0.0, || "precoder.milp_time_limit_s must be positive".into())?;
        require(!p.methods.is_empty(), || "precoder.methods is empty".into())?;
        require(p.estimate_n_over_m > 0, || "precoder.estimate_n_over_m must be positive".into())?;
        require(self.threads != Some(0), || "threads must be positive".into())
    }

    pub fn ula(&self) -> Result<UlaModel> {
        UlaModel::new(self.model.antennas, self.model.grid, self.model.f_ul, self.model.f_dl)
    }

    pub fn mlp_spec(&self) -> MlpSpec {
        MlpSpec::for_array(self.model.antennas, self.model.grid)
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.training;
        TrainConfig {
            learning_rate: t.learning_rate,
            batch_size: t.batch_size,
            epochs: t.epochs,
            seed: derive_seed(self.seed, STREAM_TRAIN),
            train_fraction: t.train_fraction,
        }
    }

    pub fn udct_options(&self) -> UdctOptions {
        UdctOptions { upsample: self.udct.upsample, ..UdctOptions::default() }
    }

    pub fn milp_options(&self) -> MilpOptions {
        MilpOptions {
            time_limit: Some(std::time::Duration::from_secs_f64(self.precoder.milp_time_limit_s)),
            ..MilpOptions::default()
        }
    }

    /// Hex SHA-256 of the canonical TOML serialization, leaving out the
    /// thread count and output directory, which never change results.
    pub fn hash(&self) -> Result<String> {
        let canonical = Self { threads: None, out_dir: PathBuf::new(), ..self.clone() };
        let digest = Sha256::digest(canonical.to_toml()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    /// `# config_hash=<sha256> seed=<seed>` comment line for CSV outputs.
    pub fn csv_comment(&self) -> Result<String> {
        Ok(format!("# config_hash={} seed={}", self.hash()?, self.seed))
    }
}
