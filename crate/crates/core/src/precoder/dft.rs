use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{CMatrix, CVector};

/// Unitary DFT matrix with 0-based indices: `F[m, n] = exp(-j 2 pi m n / M) / sqrt(M)`.
/// Indexing from 1 instead only multiplies each column by a unit phase, which
/// leaves every beam gain unchanged.
pub fn dft_matrix(m: usize) -> CMatrix {
    let scale = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |r, c| dft_entry(m, r, c) * scale)
}

/// Column `n` of [`dft_matrix`].
pub fn dft_column(m: usize, n: usize) -> CVector {
    let scale = 1.0 / (m as f64).sqrt();
    CVector::from_fn(m, |r, _| dft_entry(m, r, n) * scale)
}

fn dft_entry(m: usize, r: usize, c: usize) -> Complex64 {
    // reduce the exponent first so large M keeps full phase accuracy
    let e = (r * c) % m;
    Complex64::from_polar(1.0, -2.0 * PI * e as f64 / m as f64)
}
