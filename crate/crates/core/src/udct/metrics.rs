
use crate::array::HermitianToeplitz;
use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen};

fn same_dim(a: &HermitianToeplitz, b: &HermitianToeplitz) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::shape(a.dim(), b.dim()));
    }
    Ok(())
}

/// `||S - S_est||_F / ||S||_F` over the full matrices.
pub fn metric_nfd(true_dl: &HermitianToeplitz, est_dl: &HermitianToeplitz) -> Result<f64> {
    same_dim(true_dl, est_dl)?;
    let t = true_dl.to_matrix();
    let denom = frobenius(&t);
    if denom == 0.0 {
        return Err(Error::ZeroTrueCovariance);
    }
    Ok(frobenius(&(t - est_dl.to_matrix())) / denom)
}

/// Power of `true_dl` captured by the top-`q` eigenvectors of `est_dl`,
/// relative to its own top-`q` eigenvectors, for every `q` in `1..=M`.
pub fn efficiency_profile(true_dl: &HermitianToeplitz, est_dl: &HermitianToeplitz) -> Result<Vec<f64>> {
    same_dim(true_dl, est_dl)?;
    let t = true_dl.to_matrix();
    if frobenius(&t) == 0.0 {
        return Err(Error::ZeroTrueCovariance);
    }
    let true_eig = hermitian_eigen(&t);
    let est_vecs = hermitian_eigen(&est_dl.to_matrix()).vectors;
    // captured[q] = u_q^H S u_q for the estimated eigenvectors
    let projected = est_vecs.adjoint() * &t * &est_vecs;
    let m = t.nrows();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut out = Vec::with_capacity(m);
    for q in 0..m {
        num += projected[(q, q)].re;
        den += true_eig.values[q];
        out.push(if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 1.0 });
    }
    Ok(out)
}

/// Order-`q` efficiency, `1 <= q <= M`.
pub fn metric_efficiency(true_dl: &HermitianToeplitz, est_dl: &HermitianToeplitz, q: usize) -> Result<f64> {
    let m = true_dl.dim();
    if q == 0 || q > m {
        return Err(Error::InvalidOrder { q, m });
    }
    Ok(efficiency_profile(true_dl, est_dl)?[q - 1])
}

/// `1 - min_q eta_q`.
pub fn metric_power_loss(true_dl: &HermitianToeplitz, est_dl: &HermitianToeplitz) -> Result<f64> {
    let profile = efficiency_profile(true_dl, est_dl)?;
    Ok(1.0 - profile.into_iter().fold(1.0, f64::min))
}
