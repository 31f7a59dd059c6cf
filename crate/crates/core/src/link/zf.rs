use crate::error::{Error, Result};
use crate::linalg::{hermitian_condition, CMatrix};

use super::lmmse::MAX_CONDITION;

/// Column-normalized pseudo-inverse `V = H (H^H H)^-1 G^{1/2}` of the
/// estimated effective channels (M' x K'). Returns `V` and the diagonal of
/// `G`, chosen so that every column of `V` has unit norm; then
/// `H^H V = G^{1/2}`.
pub fn zf_precoder(h_hat: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    let gram = h_hat.adjoint() * h_hat;
    let cond = hermitian_condition(&gram);
    if cond.is_nan() || cond > MAX_CONDITION || h_hat.ncols() > h_hat.nrows() {
        return Err(Error::RankDeficient { cond });
    }
    let inv = gram.try_inverse().ok_or(Error::RankDeficient { cond })?;
    let mut v = h_hat * inv;
    let mut g = Vec::with_capacity(v.ncols());
    for mut col in v.column_iter_mut() {
        let n = col.norm();
        col.unscale_mut(n);
        g.push(1.0 / (n * n));
    }
    Ok((v, g))
}

/// Zero-forcing on the users that can be separated: while the channel
/// matrix is rank deficient, the user with the weakest estimated channel is
/// dropped. Returns the kept column indices with `V`.
pub fn zf_with_fallback(h_hat: &CMatrix) -> (Vec<usize>, Option<CMatrix>) {
    let mut keep: Vec<usize> = (0..h_hat.ncols()).collect();
    while !keep.is_empty() {
        let sub = h_hat.select_columns(&keep);
        match zf_precoder(&sub) {
            Ok((v, _)) => return (keep, Some(v)),
            Err(_) => {
                let weakest = (0..keep.len())
                    .min_by(|&a, &b| sub.column(a).norm().total_cmp(&sub.column(b).norm()))
                    .expect("nonempty");
                log::debug!("ZF rank deficient; dropping user {}", keep[weakest]);
                keep.remove(weakest);
            }
        }
    }
    (keep, None)
}
