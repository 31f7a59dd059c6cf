//! Multilayer perceptron mapping normalized UL covariance features to an ASF
//! estimate, with L1 training and checkpointing.

mod checkpoint;
mod mlp;
mod train;

pub use checkpoint::{
    read_checkpoint, write_checkpoint, write_loss_trace, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use mlp::{backward, forward, loss_l1, Dense, MlpParams, MlpSpec};
pub use train::{
    initial_params, mean_loss, resume_training, split_indices, train, EpochLoss, Sample, TrainConfig, TrainOutcome,
};
