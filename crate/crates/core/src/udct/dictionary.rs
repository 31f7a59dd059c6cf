use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::array::{steering, Carrier, UlaModel};
use crate::linalg::{CMatrix, CVector};

/// UL harmonic dictionary: column `i` is the UL array response at grid point
/// `xi_i`. Solvers work on the real stack `[Re D; Im D]` (2M x G).
#[derive(Debug)]
pub struct UlDictionary {
    model: UlaModel,
    complex: CMatrix,
    stacked: DMatrix<f64>,
    gram: DMatrix<f64>,
    lipschitz: f64,
    pinv: OnceLock<DMatrix<f64>>,
}

/// Relative singular-value cutoff used for pseudo-inverses.
pub(crate) fn pinv_cutoff(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Moore-Penrose pseudo-inverse via SVD.
pub(crate) fn pseudo_inverse(a: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = pinv_cutoff(a.nrows(), a.ncols(), smax);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut out = DMatrix::zeros(a.ncols(), a.nrows());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            out += vt.row(i).transpose() * u.column(i).transpose() / s;
        }
    }
    out
}

impl UlDictionary {
    pub fn new(model: &UlaModel) -> Self {
        let m = model.num_antennas();
        let scale = model.carrier_scale(Carrier::Uplink);
        let points = model.grid_points();
        let mut complex = CMatrix::zeros(m, points.len());
        for (i, &xi) in points.iter().enumerate() {
            complex.set_column(i, &steering(m, scale * xi));
        }
        let stacked = DMatrix::from_fn(2 * m, points.len(), |r, c| {
            if r < m {
                complex[(r, c)].re
            } else {
                complex[(r - m, c)].im
            }
        });
        let gram = stacked.tr_mul(&stacked);
        let outer = &stacked * stacked.transpose();
        let lipschitz = outer.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max);
        Self { model: *model, complex, stacked, gram, lipschitz, pinv: OnceLock::new() }
    }

    pub fn model(&self) -> &UlaModel {
        &self.model
    }

    pub fn complex(&self) -> &CMatrix {
        &self.complex
    }

    pub fn stacked(&self) -> &DMatrix<f64> {
        &self.stacked
    }

    /// `D^T D` of the real stack.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Largest eigenvalue of `D^T D`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Pseudo-inverse of the real stack, computed on first use.
    pub fn pinv(&self) -> &DMatrix<f64> {
        self.pinv.get_or_init(|| pseudo_inverse(&self.stacked))
    }

    /// `D w` as a complex M-vector.
    pub fn apply(&self, weights: &[f64]) -> CVector {
        let w = nalgebra::DVector::from_column_slice(weights).map(|v| crate::Complex64::new(v, 0.0));
        &self.complex * w
    }
}

/// `[Re v; Im v]`.
pub fn stack_complex(v: &CVector) -> nalgebra::DVector<f64> {
    let m = v.len();
    nalgebra::DVector::from_fn(2 * m, |r, _| if r < m { v[r].re } else { v[r - m].im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{array_response, synth_cov, Asf};

    #[test]
    fn columns_are_ul_responses() {
        let model = UlaModel::with_default_carriers(6, 16).unwrap();
        let d = UlDictionary::new(&model);
        for i in 0..16 {
            let a = array_response(&model, model.grid_point(i), Carrier::Uplink).unwrap();
            assert!((d.complex().column(i) - a).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_matches_ul_synthesis() {
        let model = UlaModel::with_default_carriers(5, 20).unwrap();
        let d = UlDictionary::new(&model);
        let w: Vec<f64> = (0..20).map(|i| ((i * 7) % 5) as f64).collect();
        let asf = Asf::normalized(w).unwrap();
        let c = synth_cov(&model, &asf, Carrier::Uplink).unwrap();
        assert!((d.apply(asf.weights()) - c.first_column()).norm() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose_identities() {
        let model = UlaModel::with_default_carriers(4, 12).unwrap();
        let d = UlDictionary::new(&model);
        let a = d.stacked();
        let p = d.pinv();
        assert!((a * p * a - a).norm() < 1e-10);
        assert!((p * a * p - p).norm() < 1e-10);
        assert!(((a * p).transpose() - a * p).norm() < 1e-10);
        assert!(((p * a).transpose() - p * a).norm() < 1e-10);
    }

    #[test]
    fn lipschitz_bounds_gram() {
        let model = UlaModel::with_default_carriers(4, 16).unwrap();
        let d = UlDictionary::new(&model);
        let top = d.gram().symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max);
        assert!((top - d.lipschitz()).abs() < 1e-9 * top);
    }
}
