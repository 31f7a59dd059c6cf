use std::f64::consts::PI;

use num_complex::Complex64;

use super::asf::Asf;
use super::ula::{Carrier, UlaModel};
use crate::error::{Error, Result};
use crate::linalg::{check_hermitian, CMatrix, CVector};

/// Hermitian Toeplitz matrix stored as its first column `c`, so that
/// `T[i, j] = c[i - j]` for `i >= j` and `conj(c[j - i])` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianToeplitz {
    first_column: CVector,
}

impl HermitianToeplitz {
    /// Rejects a leading entry with a non-negligible imaginary part and zeroes
    /// any round-off residue.
    pub fn new(mut first_column: CVector) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::shape("nonempty first column", "empty"));
        }
        let lead = first_column[0];
        let scale = first_column.iter().fold(0.0f64, |a, z| a.max(z.norm())).max(1e-300);
        if lead.im.abs() > 1e-12 * scale {
            return Err(Error::NotHermitian { asymmetry: lead.im.abs(), tolerance: 1e-12 * scale });
        }
        first_column[0] = Complex64::new(lead.re, 0.0);
        Ok(Self { first_column })
    }

    pub fn zeros(m: usize) -> Self {
        Self { first_column: CVector::zeros(m) }
    }

    pub fn identity(m: usize) -> Self {
        let mut c = CVector::zeros(m);
        c[0] = Complex64::new(1.0, 0.0);
        Self { first_column: c }
    }

    pub fn dim(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &CVector {
        &self.first_column
    }

    pub fn trace(&self) -> f64 {
        self.dim() as f64 * self.first_column[0].re
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { first_column: self.first_column.scale(s) }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let c = &self.first_column;
        CMatrix::from_fn(self.dim(), self.dim(), |i, j| if i >= j { c[i - j] } else { c[j - i].conj() })
    }

    /// Frobenius norm from the first column: each lag `l` appears `M - l`
    /// times below and above the diagonal.
    pub fn frobenius(&self) -> f64 {
        let m = self.dim();
        let c = &self.first_column;
        let mut s = m as f64 * c[0].norm_sqr();
        for l in 1..m {
            s += 2.0 * (m - l) as f64 * c[l].norm_sqr();
        }
        s.sqrt()
    }
}

/// Covariance generated by a grid ASF on the given carrier:
/// `c[k] = sum_i w_i exp(j pi k s xi_i)`.
pub fn synth_cov(model: &UlaModel, asf: &Asf, carrier: Carrier) -> Result<HermitianToeplitz> {
    if asf.grid_size() != model.grid_size() {
        return Err(Error::shape(
            format!("ASF on {} grid points", model.grid_size()),
            asf.grid_size(),
        ));
    }
    let scale = model.carrier_scale(carrier);
    let points = model.grid_points();
    HermitianToeplitz::new(fourier_column(
        model.num_antennas(),
        scale,
        points.iter().copied().zip(asf.weights().iter().copied()),
    ))
}

/// `c[k] = sum w exp(j pi k s xi)` over (xi, w) pairs.
pub(crate) fn fourier_column(
    m: usize,
    scale: f64,
    masses: impl Iterator<Item = (f64, f64)>,
) -> CVector {
    let mut col = CVector::zeros(m);
    for (xi, w) in masses {
        if w == 0.0 {
            continue;
        }
        // recurrence on the unit phasor; accurate to ~1e-15 for M <= 1024
        let step = Complex64::from_polar(1.0, PI * scale * xi);
        let mut ph = Complex64::new(w, 0.0);
        for k in 0..m {
            col[k] += ph;
            ph *= step;
        }
    }
    col[0].im = 0.0;
    col
}

/// Orthogonal projection of a Hermitian matrix onto Hermitian Toeplitz
/// matrices: each lag is the mean of its diagonal.
pub fn toeplitzify(s: &CMatrix) -> Result<HermitianToeplitz> {
    check_hermitian(s, 1e-9)?;
    let m = s.nrows();
    let col = CVector::from_fn(m, |lag, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m - lag {
            acc += s[(i + lag, i)] + s[(i, i + lag)].conj();
        }
        acc / (2.0 * (m - lag) as f64)
    });
    HermitianToeplitz::new(col)
}
