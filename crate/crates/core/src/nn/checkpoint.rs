//! Binary checkpoints and loss-trace CSV.
//!
//! Checkpoint layout (little-endian):
//!
//! ```text
//! magic        [u8; 4]  b"FDDN"
//! version      u8       1
//! input width  u32
//! layer count  u32
//! widths       u32 per layer
//! per layer    weights (out x in, row-major f64), then bias (out x f64)
//! ```

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};

use super::mlp::{Dense, MlpParams, MlpSpec};
use super::train::EpochLoss;
use crate::array::record::{read_f64s, read_u32, read_u8, write_f64s};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"FDDN";
pub const CHECKPOINT_VERSION: u8 = 1;
/// Refuse to allocate absurd layer sizes from a corrupt header.
const MAX_WIDTH: u32 = 1 << 20;

pub fn write_checkpoint<W: Write>(w: &mut W, params: &MlpParams) -> Result<()> {
    let spec = params.spec();
    w.write_all(&CHECKPOINT_MAGIC)?;
    w.write_all(&[CHECKPOINT_VERSION])?;
    w.write_all(&(spec.input_width as u32).to_le_bytes())?;
    w.write_all(&(spec.layer_widths.len() as u32).to_le_bytes())?;
    for &width in &spec.layer_widths {
        w.write_all(&(width as u32).to_le_bytes())?;
    }
    for layer in &params.layers {
        for r in 0..layer.weights.nrows() {
            let row: Vec<f64> = layer.weights.row(r).iter().copied().collect();
            write_f64s(w, &row)?;
        }
        write_f64s(w, layer.bias.as_slice())?;
    }
    Ok(())
}

pub fn read_checkpoint<R: Read>(r: &mut R) -> Result<MlpParams> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::Format(format!("bad checkpoint magic {magic:?}")));
    }
    let version = read_u8(r)?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let read_width = |r: &mut R| -> Result<usize> {
        let v = read_u32(r)?;
        if v == 0 || v > MAX_WIDTH {
            return Err(Error::Format(format!("implausible layer width {v}")));
        }
        Ok(v as usize)
    };
    let input_width = read_width(r)?;
    let n_layers = read_u32(r)?;
    if n_layers == 0 || n_layers > 64 {
        return Err(Error::Format(format!("implausible layer count {n_layers}")));
    }
    let widths = (0..n_layers).map(|_| read_width(r)).collect::<Result<Vec<_>>>()?;
    let spec = MlpSpec::new(input_width, widths)?;
    let layers = spec
        .layer_shapes()
        .into_iter()
        .map(|(inp, out)| {
            let w = read_f64s(r, out * inp)?;
            let b = read_f64s(r, out)?;
            Ok(Dense { weights: DMatrix::from_row_slice(out, inp, &w), bias: DVector::from_vec(b) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MlpParams { layers })
}

/// Writes `epoch,train_loss,val_loss`; a missing validation loss is left
/// empty.
pub fn write_loss_trace<W: Write>(w: &mut W, trace: &[EpochLoss]) -> Result<()> {
    writeln!(w, "epoch,train_loss,val_loss")?;
    for e in trace {
        match e.val_loss {
            Some(v) => writeln!(w, "{},{:e},{:e}", e.epoch, e.train_loss, v)?,
            None => writeln!(w, "{},{:e},", e.epoch, e.train_loss)?,
        }
    }
    Ok(())
}
