//! Labeled training pairs (UL covariance features, grid ASF) and their
//! binary file.
//!
//! Layout, little-endian:
//!
//! ```text
//! magic     [u8; 4]   b"UDDS"
//! version   u8        1
//! M, G      u32, u32
//! f_ul/f_dl f64, f64
//! n_over_m  u32
//! snr_db    f64
//! seed      u64
//! S         u64
//! S records of 2M f64 features then G f64 labels
//! ```

use std::io::{Read, Write};

use super::config::ExperimentConfig;
use super::stats::parallel_map;
use super::STREAM_DATASET;
use crate::array::record::{read_f64, read_f64s, read_header, read_u32, read_u64, write_f64s, write_header};
use crate::array::{sample_asf, sample_channels, sample_cov, synth_cov, toeplitzify, Asf, Carrier, UlaModel};
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::nn::Sample;
use crate::rng::derive_path;
use crate::udct::mlp_features;

pub const DATASET_MAGIC: [u8; 4] = *b"UDDS";

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub model: UlaModel,
    pub n_over_m: usize,
    pub snr_db: f64,
    pub seed: u64,
    pub samples: Vec<Sample>,
}

/// First column of the Toeplitzified sample covariance of `N = n_over_m * M`
/// noisy UL snapshots drawn for `asf`.
pub fn ul_observation(model: &UlaModel, asf: &Asf, n_over_m: usize, snr_db: f64, seed: u64) -> Result<CVector> {
    let cov = synth_cov(model, asf, Carrier::Uplink)?;
    let batch = sample_channels(model, &cov, n_over_m * model.num_antennas(), snr_db, seed)?;
    Ok(toeplitzify(&sample_cov(&batch)?)?.first_column().clone())
}

pub fn generate_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let model = cfg.ula()?;
    let d = &cfg.dataset;
    let samples = parallel_map(d.samples, cfg.threads, |s| {
        let mut asf = sample_asf(&cfg.ensemble, &model, derive_path(cfg.seed, &[STREAM_DATASET, s as u64, 0]))?;
        if d.circular_shift {
            let shift = derive_path(cfg.seed, &[STREAM_DATASET, s as u64, 2]) % model.grid_size() as u64;
            let mut w = asf.into_weights();
            w.rotate_right(shift as usize);
            asf = Asf::new(w)?;
        }
        let sigma = ul_observation(&model, &asf, d.n_over_m, d.snr_db, derive_path(cfg.seed, &[STREAM_DATASET, s as u64, 1]))?;
        Ok(Sample { features: mlp_features(&sigma), label: asf.into_weights() })
    })?;
    Ok(Dataset { model, n_over_m: d.n_over_m, snr_db: d.snr_db, seed: cfg.seed, samples })
}

pub fn write_dataset<W: Write>(w: &mut W, data: &Dataset) -> Result<()> {
    let (m, g) = (data.model.num_antennas(), data.model.grid_size());
    write_header(w, DATASET_MAGIC, &data.model)?;
    w.write_all(&(data.n_over_m as u32).to_le_bytes())?;
    w.write_all(&data.snr_db.to_le_bytes())?;
    w.write_all(&data.seed.to_le_bytes())?;
    w.write_all(&(data.samples.len() as u64).to_le_bytes())?;
    for s in &data.samples {
        if s.features.len() != 2 * m || s.label.len() != g {
            return Err(Error::shape(format!("{} features and {g} labels", 2 * m), format!("{} and {}", s.features.len(), s.label.len())));
        }
        write_f64s(w, &s.features)?;
        write_f64s(w, &s.label)?;
    }
    Ok(())
}

pub fn read_dataset<R: Read>(r: &mut R) -> Result<Dataset> {
    let model = read_header(r, DATASET_MAGIC)?;
    let n_over_m = read_u32(r)? as usize;
    let snr_db = read_f64(r)?;
    let seed = read_u64(r)?;
    let count = read_u64(r)? as usize;
    let (m, g) = (model.num_antennas(), model.grid_size());
    let samples = (0..count)
        .map(|_| Ok(Sample { features: read_f64s(r, 2 * m)?, label: read_f64s(r, g)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after dataset records".into()));
    }
    Ok(Dataset { model, n_over_m, snr_db, seed, samples })
}
