use crate::array::HermitianToeplitz;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

use super::dft::dft_matrix;

/// Imaginary residue of the DFT-domain diagonal above which a warning is
/// logged.
pub const IMAG_RESIDUE_WARN: f64 = 1e-9;

/// Beam-domain gains of K users: `lambda[m, k]` is the power of user `k` on
/// DFT beam `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamGains {
    num_beams: usize,
    num_users: usize,
    /// Row-major M x K, clipped at zero.
    lambda: Vec<f64>,
    /// Per-user sums before clipping.
    raw_totals: Vec<f64>,
}

impl BeamGains {
    pub fn from_lambda(num_beams: usize, num_users: usize, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() != num_beams * num_users {
            return Err(Error::shape(num_beams * num_users, lambda.len()));
        }
        let raw_totals = (0..num_users).map(|k| (0..num_beams).map(|m| lambda[m * num_users + k]).sum()).collect();
        let lambda = lambda.into_iter().map(|v| v.max(0.0)).collect();
        Ok(Self { num_beams, num_users, lambda, raw_totals })
    }

    pub fn num_beams(&self) -> usize {
        self.num_beams
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn lambda(&self, m: usize, k: usize) -> f64 {
        self.lambda[m * self.num_users + k]
    }

    /// Row-major M x K gains.
    pub fn lambda_matrix(&self) -> &[f64] {
        &self.lambda
    }

    /// `sqrt(lambda)`.
    pub fn amplitude(&self, m: usize, k: usize) -> f64 {
        self.lambda(m, k).sqrt()
    }

    /// Sum over beams of the unclipped gains of user `k`; equals the trace
    /// of its covariance.
    pub fn raw_total(&self, k: usize) -> f64 {
        self.raw_totals[k]
    }

    pub fn user_gains(&self, k: usize) -> Vec<f64> {
        (0..self.num_beams).map(|m| self.lambda(m, k)).collect()
    }
}

/// Diagonal of `F^H S_k F` for every user (circulant approximation).
pub fn circulant_gains(covs: &[HermitianToeplitz]) -> Result<BeamGains> {
    let m = covs.first().map_or(0, |c| c.dim());
    if let Some(bad) = covs.iter().find(|c| c.dim() != m) {
        return Err(Error::shape(m, bad.dim()));
    }
    let f = dft_matrix(m);
    let k = covs.len();
    let mut lambda = vec![0.0; m * k];
    for (u, cov) in covs.iter().enumerate() {
        let d = diag_conjugated(&f, &cov.to_matrix());
        for (b, z) in d.iter().enumerate() {
            if z.im.abs() > IMAG_RESIDUE_WARN * (1.0 + cov.trace().abs()) {
                log::warn!("beam {b} of user {u}: imaginary residue {:.3e}", z.im);
            }
            lambda[b * k + u] = z.re;
        }
    }
    BeamGains::from_lambda(m, k, lambda)
}

fn diag_conjugated(f: &CMatrix, s: &CMatrix) -> Vec<num_complex::Complex64> {
    let sf = s * f;
    (0..f.ncols()).map(|c| f.column(c).dotc(&sf.column(c))).collect()
}
