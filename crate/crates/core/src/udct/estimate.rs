use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::dictionary::{stack_complex, UlDictionary};
use super::nnls::{nnls, NnlsOptions, NnlsReport};
use super::reconstruct::{reconstruct_dl, DEFAULT_UPSAMPLE};
use crate::array::{Asf, HermitianToeplitz};
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::nn::{forward, MlpParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UdctMethod {
    Nnls,
    L2,
    Mlp,
}

impl UdctMethod {
    pub const ALL: [UdctMethod; 3] = [UdctMethod::Nnls, UdctMethod::L2, UdctMethod::Mlp];

    pub fn name(self) -> &'static str {
        match self {
            UdctMethod::Nnls => "nnls",
            UdctMethod::L2 => "l2",
            UdctMethod::Mlp => "mlp",
        }
    }
}

impl fmt::Display for UdctMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UdctMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nnls" => Ok(UdctMethod::Nnls),
            "l2" => Ok(UdctMethod::L2),
            "mlp" => Ok(UdctMethod::Mlp),
            other => Err(Error::Config(format!("unknown UDCT method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UdctOptions {
    pub upsample: usize,
    pub nnls: NnlsOptions,
}

impl Default for UdctOptions {
    fn default() -> Self {
        Self { upsample: DEFAULT_UPSAMPLE, nnls: NnlsOptions::default() }
    }
}

/// An ASF estimate together with the DL covariance reconstructed from it.
#[derive(Debug, Clone)]
pub struct UdctEstimate {
    pub method: UdctMethod,
    pub asf_estimate: Asf,
    pub dl_cov: HermitianToeplitz,
    /// Solver diagnostics (NNLS only).
    pub report: Option<NnlsReport>,
    /// ℓ2 only: the minimum-norm fit before clipping.
    pub raw_fit: Option<Vec<f64>>,
}

/// Divides by the lead entry, which for a PSD Toeplitz column is its real
/// positive power.
fn normalized_target(sigma: &CVector) -> Result<CVector> {
    let lead = sigma.as_slice().first().map_or(0.0, |c| c.re);
    if !(lead > 0.0 && lead.is_finite()) || sigma.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::Degenerate(format!("UL covariance lead entry {lead} is not positive")));
    }
    Ok(sigma.unscale(lead))
}

fn check_len(dict: &UlDictionary, sigma: &CVector) -> Result<()> {
    let m = dict.model().num_antennas();
    if sigma.len() != m {
        return Err(Error::shape(m, sigma.len()));
    }
    Ok(())
}

fn finish(
    dict: &UlDictionary,
    method: UdctMethod,
    asf: Asf,
    opts: &UdctOptions,
) -> Result<UdctEstimate> {
    let dl_cov = reconstruct_dl(dict.model(), &asf, opts.upsample)?;
    Ok(UdctEstimate { method, asf_estimate: asf, dl_cov, report: None, raw_fit: None })
}

/// Nonnegative least-squares fit of grid weights to the UL covariance
/// column, renormalized to unit mass.
pub fn estimate_nnls(dict: &UlDictionary, sigma_ul: &CVector, opts: &UdctOptions) -> Result<UdctEstimate> {
    check_len(dict, sigma_ul)?;
    let target = stack_complex(&normalized_target(sigma_ul)?);
    let (x, report) = nnls(dict.stacked(), &target, dict.gram(), dict.lipschitz(), &opts.nnls);
    if !report.converged {
        log::warn!(
            "NNLS stopped after {} iterations with KKT residual {:.3e}",
            report.iterations,
            report.kkt_residual
        );
    }
    let asf = Asf::normalized(x.iter().map(|v| v.max(0.0)).collect())?;
    let mut est = finish(dict, UdctMethod::Nnls, asf, opts)?;
    est.report = Some(report);
    Ok(est)
}

/// Minimum-norm least-squares grid vector for the UL column
/// (pseudo-inverse), with negative entries clipped and mass renormalized.
pub fn estimate_l2(dict: &UlDictionary, sigma_ul: &CVector, opts: &UdctOptions) -> Result<UdctEstimate> {
    check_len(dict, sigma_ul)?;
    let target = stack_complex(&normalized_target(sigma_ul)?);
    let raw: DVector<f64> = dict.pinv() * target;
    let asf = Asf::normalized(raw.iter().map(|v| v.max(0.0)).collect())?;
    let mut est = finish(dict, UdctMethod::L2, asf, opts)?;
    est.raw_fit = Some(raw.as_slice().to_vec());
    Ok(est)
}

/// Network input for a UL covariance column: the column divided by the
/// magnitude of its lead entry (when nonzero), real parts then imaginary
/// parts.
pub fn mlp_features(sigma_ul: &CVector) -> Vec<f64> {
    let lead = sigma_ul.as_slice().first().map_or(0.0, |c| c.norm());
    let s = if lead > 0.0 { sigma_ul.unscale(lead) } else { sigma_ul.clone() };
    stack_complex(&s).as_slice().to_vec()
}

/// ASF predicted by a trained network.
pub fn estimate_mlp(
    dict: &UlDictionary,
    params: &MlpParams,
    sigma_ul: &CVector,
    opts: &UdctOptions,
) -> Result<UdctEstimate> {
    check_len(dict, sigma_ul)?;
    let g = dict.model().grid_size();
    if params.output_width() != g {
        return Err(Error::shape(format!("network with {g} outputs"), params.output_width()));
    }
    let out = forward(params, &mlp_features(sigma_ul))?;
    let asf = Asf::normalized(out)?;
    finish(dict, UdctMethod::Mlp, asf, opts)
}

/// Dispatches on `method`; `params` is required for [`UdctMethod::Mlp`].
pub fn estimate(
    method: UdctMethod,
    dict: &UlDictionary,
    params: Option<&MlpParams>,
    sigma_ul: &CVector,
    opts: &UdctOptions,
) -> Result<UdctEstimate> {
    match method {
        UdctMethod::Nnls => estimate_nnls(dict, sigma_ul, opts),
        UdctMethod::L2 => estimate_l2(dict, sigma_ul, opts),
        UdctMethod::Mlp => {
            let p = params.ok_or_else(|| Error::Config("MLP estimate needs trained parameters".into()))?;
            estimate_mlp(dict, p, sigma_ul, opts)
        }
    }
}
