use super::config::ExperimentConfig;
use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::nn::{initial_params, resume_training, MlpParams, TrainConfig, TrainOutcome};

/// Runs the configured learning-rate schedule from `start_epoch` on.
/// `init` continues a checkpoint; `None` starts from the fresh
/// initialization, which requires `start_epoch == 0`. A schedule split
/// across runs ends bit-identical to one uninterrupted run.
pub fn train_model(
    cfg: &ExperimentConfig,
    data: &Dataset,
    init: Option<MlpParams>,
    start_epoch: usize,
) -> Result<TrainOutcome> {
    let total = cfg.training.total_epochs();
    if start_epoch > total {
        return Err(Error::Config(format!("start epoch {start_epoch} is past the {total}-epoch schedule")));
    }
    let base = cfg.train_config();
    let mut params = match init {
        Some(p) => p,
        None if start_epoch == 0 => {
            let spec = cfg.mlp_spec();
            spec.validate()?;
            initial_params(&spec, &base)
        }
        None => return Err(Error::Config("resuming past epoch 0 needs a checkpoint".into())),
    };
    let mut trace = Vec::with_capacity(total - start_epoch);
    let mut initial_val_loss = None;
    let mut first_segment = true;
    for (first, stage) in cfg.training.stages() {
        let end = first + stage.epochs;
        if end < start_epoch {
            continue;
        }
        let from = first.max(start_epoch);
        let tc = TrainConfig { learning_rate: stage.learning_rate, epochs: end.saturating_sub(from), ..base.clone() };
        let out = resume_training(params, &data.samples, &tc, from)?;
        if first_segment {
            initial_val_loss = out.initial_val_loss;
            first_segment = false;
        }
        params = out.params;
        trace.extend(out.trace);
    }
    Ok(TrainOutcome { params, trace, initial_val_loss })
}
