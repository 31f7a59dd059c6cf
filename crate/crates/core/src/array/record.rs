//! Binary and CSV persistence for ASFs and covariances.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! magic     [u8; 4]   b"FDDA" (ASF) or b"FDDC" (covariance)
//! version   u8        1
//! M         u32
//! G         u32
//! f_ul      f64       Hz
//! f_dl      f64       Hz
//! payload             ASF: G x f64 weights
//!                     covariance: u8 carrier (0 = UL, 1 = DL),
//!                                 then M x (re f64, im f64) first column
//! ```

use std::io::{Read, Write};

use num_complex::Complex64;

use super::asf::Asf;
use super::toeplitz::HermitianToeplitz;
use super::ula::{Carrier, UlaModel};
use crate::error::{Error, Result};
use crate::linalg::CVector;

pub const ASF_MAGIC: [u8; 4] = *b"FDDA";
pub const COV_MAGIC: [u8; 4] = *b"FDDC";
pub const RECORD_VERSION: u8 = 1;

pub(crate) fn write_header<W: Write>(w: &mut W, magic: [u8; 4], model: &UlaModel) -> Result<()> {
    w.write_all(&magic)?;
    w.write_all(&[RECORD_VERSION])?;
    w.write_all(&(model.num_antennas() as u32).to_le_bytes())?;
    w.write_all(&(model.grid_size() as u32).to_le_bytes())?;
    w.write_all(&model.f_ul().to_le_bytes())?;
    w.write_all(&model.f_dl().to_le_bytes())?;
    Ok(())
}

pub(crate) fn read_header<R: Read>(r: &mut R, magic: [u8; 4]) -> Result<UlaModel> {
    let mut got = [0u8; 4];
    r.read_exact(&mut got)?;
    if got != magic {
        return Err(Error::Format(format!("bad magic {got:?}, expected {magic:?}")));
    }
    let version = read_u8(r)?;
    if version != RECORD_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let m = read_u32(r)? as usize;
    let g = read_u32(r)? as usize;
    let f_ul = read_f64(r)?;
    let f_dl = read_f64(r)?;
    UlaModel::new(m, g, f_ul, f_dl)
}

pub(crate) fn read_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub(crate) fn write_f64s<W: Write>(w: &mut W, values: &[f64]) -> Result<()> {
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_f64s<R: Read>(r: &mut R, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|_| read_f64(r)).collect()
}

pub fn write_asf<W: Write>(w: &mut W, model: &UlaModel, asf: &Asf) -> Result<()> {
    if asf.grid_size() != model.grid_size() {
        return Err(Error::shape(model.grid_size(), asf.grid_size()));
    }
    write_header(w, ASF_MAGIC, model)?;
    write_f64s(w, asf.weights())
}

pub fn read_asf<R: Read>(r: &mut R) -> Result<(UlaModel, Asf)> {
    let model = read_header(r, ASF_MAGIC)?;
    let weights = read_f64s(r, model.grid_size())?;
    Ok((model, Asf::new(weights)?))
}

pub fn write_covariance<W: Write>(
    w: &mut W,
    model: &UlaModel,
    carrier: Carrier,
    cov: &HermitianToeplitz,
) -> Result<()> {
    if cov.dim() != model.num_antennas() {
        return Err(Error::shape(model.num_antennas(), cov.dim()));
    }
    write_header(w, COV_MAGIC, model)?;
    w.write_all(&[match carrier {
        Carrier::Uplink => 0,
        Carrier::Downlink => 1,
    }])?;
    for z in cov.first_column().iter() {
        write_f64s(w, &[z.re, z.im])?;
    }
    Ok(())
}

pub fn read_covariance<R: Read>(r: &mut R) -> Result<(UlaModel, Carrier, HermitianToeplitz)> {
    let model = read_header(r, COV_MAGIC)?;
    let carrier = match read_u8(r)? {
        0 => Carrier::Uplink,
        1 => Carrier::Downlink,
        b => return Err(Error::Format(format!("bad carrier tag {b}"))),
    };
    let m = model.num_antennas();
    let raw = read_f64s(r, 2 * m)?;
    let col = CVector::from_fn(m, |k, _| Complex64::new(raw[2 * k], raw[2 * k + 1]));
    Ok((model, carrier, HermitianToeplitz::new(col)?))
}

/// `index,xi,weight` rows.
pub fn write_asf_csv<W: Write>(w: &mut W, model: &UlaModel, asf: &Asf) -> Result<()> {
    writeln!(w, "index,xi,weight")?;
    for (i, wt) in asf.weights().iter().enumerate() {
        writeln!(w, "{},{:.17e},{:.17e}", i, model.grid_point(i), wt)?;
    }
    Ok(())
}

/// `row,col,re,im` rows of the full matrix.
pub fn write_covariance_csv<W: Write>(w: &mut W, cov: &HermitianToeplitz) -> Result<()> {
    writeln!(w, "row,col,re,im")?;
    let full = cov.to_matrix();
    for i in 0..cov.dim() {
        for j in 0..cov.dim() {
            let z = full[(i, j)];
            writeln!(w, "{},{},{:.17e},{:.17e}", i, j, z.re, z.im)?;
        }
    }
    Ok(())
}
