use crate::array::HermitianToeplitz;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};

/// Statistical beamformers: column `k` is the unit-norm principal
/// eigenvector of `(N0 I + sum_{l != k} S_l)^-1 S_k`.
///
/// The generalized problem is solved exactly by whitening with the Cholesky
/// factor `L` of the interference-plus-noise matrix: the top eigenvector `w`
/// of `L^-1 S_k L^-H` maps back to `L^-H w`.
pub fn statistical_beamformer(covs: &[HermitianToeplitz], n0: f64) -> Result<CMatrix> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::Config(format!("noise level must be positive, got {n0}")));
    }
    let m = covs.first().map_or(0, |c| c.dim());
    if let Some(bad) = covs.iter().find(|c| c.dim() != m) {
        return Err(Error::shape(m, bad.dim()));
    }
    let mats: Vec<CMatrix> = covs.iter().map(|c| c.to_matrix()).collect();
    let total = mats.iter().fold(CMatrix::identity(m, m).scale(n0), |acc, s| acc + s);
    let mut out = CMatrix::zeros(m, covs.len());
    for (k, s) in mats.iter().enumerate() {
        let r = &total - s;
        let r = (&r + r.adjoint()).scale(0.5);
        let chol = r.cholesky().ok_or_else(|| Error::Degenerate("interference matrix not positive definite".into()))?;
        let l = chol.l();
        let x = l.solve_lower_triangular(s).expect("nonsingular Cholesky factor");
        let a = l.solve_lower_triangular(&x.adjoint()).expect("nonsingular Cholesky factor");
        let w = hermitian_eigen(&a).vectors.column(0).into_owned();
        let mut v = l.adjoint().solve_upper_triangular(&w).expect("nonsingular Cholesky factor");
        let n = v.norm();
        v.unscale_mut(n);
        out.set_column(k, &v);
    }
    Ok(out)
}
