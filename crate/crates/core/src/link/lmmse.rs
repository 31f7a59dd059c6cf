use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_condition, CMatrix, CVector};

/// Condition number above which the pilot-domain system is rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Prior covariance of an effective channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelPrior {
    /// Independent coefficients with the given variances.
    Diagonal(Vec<f64>),
    Full(CMatrix),
}

impl ChannelPrior {
    pub fn dim(&self) -> usize {
        match self {
            ChannelPrior::Diagonal(d) => d.len(),
            ChannelPrior::Full(c) => c.nrows(),
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        match self {
            ChannelPrior::Diagonal(d) => {
                CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&v| Complex64::new(v, 0.0))))
            }
            ChannelPrior::Full(c) => c.clone(),
        }
    }
}

/// Linear MMSE estimate `C Psi^H (Psi C Psi^H + N0 I)^-1 y`.
pub fn lmmse_estimate(psi: &CMatrix, prior: &ChannelPrior, y: &CVector, n0: f64) -> Result<CVector> {
    let (t, m) = psi.shape();
    if prior.dim() != m {
        return Err(Error::shape(m, prior.dim()));
    }
    if y.len() != t {
        return Err(Error::shape(t, y.len()));
    }
    let c_psi_h = match prior {
        ChannelPrior::Diagonal(d) => {
            let mut a = psi.adjoint();
            for (r, &v) in d.iter().enumerate() {
                a.row_mut(r).scale_mut(v);
            }
            a
        }
        ChannelPrior::Full(c) => c * psi.adjoint(),
    };
    let mut system = psi * &c_psi_h;
    for i in 0..t {
        system[(i, i)] += Complex64::new(n0, 0.0);
    }
    let cond = hermitian_condition(&system);
    if cond.is_nan() || cond > MAX_CONDITION {
        return Err(Error::SingularSystem { cond });
    }
    let solved = system.lu().solve(y).ok_or(Error::SingularSystem { cond })?;
    Ok(c_psi_h * solved)
}
