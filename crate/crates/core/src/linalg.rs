//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigen-decomposition of a Hermitian matrix with eigenpairs sorted by
/// descending eigenvalue. Eigenvalues within 1e-12 of each other are treated
/// as tied and keep the solver's original order.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    // symmetrize so round-off asymmetry does not leak into the solver
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    let vals = eig.eigenvalues;
    order.sort_by(|&a, &b| {
        let (va, vb) = (vals[a], vals[b]);
        if (va - vb).abs() <= 1e-12 {
            a.cmp(&b)
        } else {
            vb.partial_cmp(&va).unwrap_or(std::cmp::Ordering::Equal)
        }
    });
    let values = order.iter().map(|&i| vals[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn check_hermitian(m: &CMatrix, rel_tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::shape("square matrix", format!("{}x{}", m.nrows(), m.ncols())));
    }
    let tolerance = rel_tol * frobenius(m).max(f64::MIN_POSITIVE);
    let asymmetry = hermitian_asymmetry(m);
    if asymmetry > tolerance {
        return Err(Error::NotHermitian { asymmetry, tolerance });
    }
    Ok(())
}

pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}

/// Hermitian square root of a PSD matrix. Negative eigenvalues down to
/// `-clip_rel * tr` are clipped to zero; anything more negative is an error.
pub fn psd_sqrt(m: &CMatrix, clip_rel: f64) -> Result<CMatrix> {
    let eig = hermitian_eigen(m);
    let trace = trace_re(m);
    let floor = -clip_rel * trace.abs();
    let min_eig = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < floor {
        return Err(Error::NotPsd { min_eig, trace });
    }
    let n = m.nrows();
    let mut scaled = eig.vectors.clone();
    for (c, &v) in eig.values.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        for r in 0..n {
            scaled[(r, c)] *= s;
        }
    }
    Ok(&scaled * eig.vectors.adjoint())
}

/// Ratio of extreme eigenvalue magnitudes of a Hermitian matrix.
pub fn hermitian_condition(m: &CMatrix) -> f64 {
    let eig = hermitian_eigen(m);
    let max = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = eig.values.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// max |A - I| entrywise.
pub fn identity_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((m[(r, c)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn vector_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
