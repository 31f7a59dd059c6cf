use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::mlp::{backward_batch, forward_batch, MlpParams, MlpSpec};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

const STREAM_INIT: u64 = 0x1417;
const STREAM_SPLIT: u64 = 0x5b17;
const STREAM_EPOCH: u64 = 0xe90c;

/// One labeled training pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Fraction of the dataset used for training; the rest validates.
    pub train_fraction: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-3, batch_size: 32, epochs: 100, seed: 0, train_fraction: 0.8 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning rate {}", self.learning_rate)));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!("train fraction {} not in (0, 1)", self.train_fraction)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    pub epoch: usize,
    pub train_loss: f64,
    /// `None` when the split leaves no validation samples.
    pub val_loss: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: MlpParams,
    pub trace: Vec<EpochLoss>,
    pub initial_val_loss: Option<f64>,
}

/// Deterministic train/validation split of sample indices.
pub fn split_indices(len: usize, cfg: &TrainConfig) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut rng_from_seed(derive_seed(cfg.seed, STREAM_SPLIT)));
    let n_train = ((cfg.train_fraction * len as f64).round() as usize).clamp(1, len.max(1));
    let val = idx.split_off(n_train.min(len));
    (idx, val)
}

fn check_dataset(spec: &MlpSpec, data: &[Sample]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for s in data {
        if s.features.len() != spec.input_width {
            return Err(Error::shape(spec.input_width, s.features.len()));
        }
        if s.label.len() != spec.output_width() {
            return Err(Error::shape(spec.output_width(), s.label.len()));
        }
    }
    Ok(())
}

fn stack(data: &[Sample], idx: &[usize]) -> (DMatrix<f64>, DMatrix<f64>) {
    let fw = data[idx[0]].features.len();
    let lw = data[idx[0]].label.len();
    let mut x = DMatrix::zeros(fw, idx.len());
    let mut t = DMatrix::zeros(lw, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        x.column_mut(c).copy_from_slice(&data[i].features);
        t.column_mut(c).copy_from_slice(&data[i].label);
    }
    (x, t)
}

/// Mean L1 loss of `params` over the given samples.
pub fn mean_loss(params: &MlpParams, data: &[Sample], idx: &[usize]) -> Result<f64> {
    if idx.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut total = 0.0;
    for chunk in idx.chunks(256) {
        let (x, t) = stack(data, chunk);
        let tape = forward_batch(params, x)?;
        let out = tape.activations.last().expect("output layer");
        total += out.iter().zip(t.iter()).map(|(p, q)| (p - q).abs()).sum::<f64>();
    }
    Ok(total / idx.len() as f64)
}

/// Trains a freshly initialized network with minibatch SGD on the L1 loss.
pub fn train(spec: &MlpSpec, data: &[Sample], cfg: &TrainConfig) -> Result<TrainOutcome> {
    spec.validate()?;
    resume_training(initial_params(spec, cfg), data, cfg, 0)
}

/// The initialization [`train`] starts from.
pub fn initial_params(spec: &MlpSpec, cfg: &TrainConfig) -> MlpParams {
    MlpParams::glorot(spec, derive_seed(cfg.seed, STREAM_INIT))
}

/// Continues training for `cfg.epochs` more epochs, numbering them from
/// `start_epoch`. Epoch shuffles depend only on (seed, epoch number), so
/// training E1 epochs and resuming for E2 equals training E1 + E2 at once.
pub fn resume_training(
    mut params: MlpParams,
    data: &[Sample],
    cfg: &TrainConfig,
    start_epoch: usize,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    let spec = params.spec();
    check_dataset(&spec, data)?;
    let (train_idx, val_idx) = split_indices(data.len(), cfg);
    let val_loss = |p: &MlpParams| -> Result<Option<f64>> {
        if val_idx.is_empty() {
            Ok(None)
        } else {
            mean_loss(p, data, &val_idx).map(Some)
        }
    };
    let initial_val_loss = val_loss(&params)?;
    let mut trace = Vec::with_capacity(cfg.epochs);
    for epoch in start_epoch..start_epoch + cfg.epochs {
        let mut order = train_idx.clone();
        order.shuffle(&mut rng_from_seed(derive_seed(derive_seed(cfg.seed, STREAM_EPOCH), epoch as u64)));
        let mut loss_sum = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let (x, t) = stack(data, batch);
            let (loss, grad) = backward_batch(&params, x, &t)?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            loss_sum += loss * batch.len() as f64;
            if cfg.learning_rate > 0.0 {
                params.add_scaled(&grad, -cfg.learning_rate);
            }
        }
        let train_loss = loss_sum / order.len() as f64;
        let val = val_loss(&params)?;
        if !train_loss.is_finite() || val.is_some_and(|v| !v.is_finite()) {
            return Err(Error::NonFiniteLoss { epoch });
        }
        log::debug!("epoch {epoch}: train {train_loss:.5} val {val:?}");
        trace.push(EpochLoss { epoch, train_loss, val_loss: val });
    }
    Ok(TrainOutcome { params, trace, initial_val_loss })
}
