use super::toeplitz::HermitianToeplitz;
use super::ula::UlaModel;
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, CMatrix, CVector};
use crate::rng::{complex_normal_vector, rng_from_seed};

/// Relative eigenvalue floor below which a covariance is rejected as not PSD.
pub const PSD_CLIP_TOLERANCE: f64 = 1e-8;

/// N noisy snapshots `y = h + z` of one user's channel.
#[derive(Debug, Clone)]
pub struct ChannelBatch {
    pub snapshots: Vec<CVector>,
    pub noise_variance: f64,
    pub snr_db: f64,
}

impl ChannelBatch {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

/// Per-antenna noise variance for a target SNR: `tr(cov) / (M 10^(snr/10))`.
pub fn noise_variance_for_snr(cov: &HermitianToeplitz, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    cov.trace() / (cov.dim() as f64 * 10f64.powf(snr_db / 10.0))
}

pub fn sample_channels(
    model: &UlaModel,
    cov: &HermitianToeplitz,
    n: usize,
    snr_db: f64,
    seed: u64,
) -> Result<ChannelBatch> {
    let n0 = noise_variance_for_snr(cov, snr_db);
    let mut batch = sample_channels_with_noise(model, cov, n, n0, seed)?;
    batch.snr_db = snr_db;
    Ok(batch)
}

/// Same as [`sample_channels`] with an explicit noise variance, e.g. for a
/// zero covariance where an SNR is meaningless.
pub fn sample_channels_with_noise(
    model: &UlaModel,
    cov: &HermitianToeplitz,
    n: usize,
    noise_variance: f64,
    seed: u64,
) -> Result<ChannelBatch> {
    if n == 0 {
        return Err(Error::Degenerate("need at least one snapshot".into()));
    }
    if cov.dim() != model.num_antennas() {
        return Err(Error::shape(model.num_antennas(), cov.dim()));
    }
    if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
        return Err(Error::Degenerate(format!("noise variance {noise_variance}")));
    }
    let root = psd_sqrt(&cov.to_matrix(), PSD_CLIP_TOLERANCE)?;
    let mut rng = rng_from_seed(seed);
    let m = cov.dim();
    let sigma = noise_variance.sqrt();
    let snapshots = (0..n)
        .map(|_| {
            let g = complex_normal_vector(&mut rng, m);
            let z = complex_normal_vector(&mut rng, m);
            &root * g + z.scale(sigma)
        })
        .collect();
    let snr_db = if noise_variance == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (cov.trace() / (m as f64 * noise_variance)).log10()
    };
    Ok(ChannelBatch { snapshots, noise_variance, snr_db })
}

/// `(1/N) sum_s y_s y_s^H`.
pub fn sample_cov(batch: &ChannelBatch) -> Result<CMatrix> {
    let first = batch.snapshots.first().ok_or(Error::EmptyDataset)?;
    let m = first.len();
    let mut acc = CMatrix::zeros(m, m);
    for y in &batch.snapshots {
        if y.len() != m {
            return Err(Error::shape(m, y.len()));
        }
        acc.ger_adjoint_accumulate(y);
    }
    Ok(acc.unscale(batch.snapshots.len() as f64))
}

trait OuterAccumulate {
    fn ger_adjoint_accumulate(&mut self, y: &CVector);
}

impl OuterAccumulate for CMatrix {
    fn ger_adjoint_accumulate(&mut self, y: &CVector) {
        let m = y.len();
        for j in 0..m {
            let yj = y[j].conj();
            for i in 0..m {
                self[(i, j)] += y[i] * yj;
            }
        }
    }
}
