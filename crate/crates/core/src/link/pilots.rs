use crate::linalg::CMatrix;
use crate::rng::{complex_normal_matrix, rng_from_seed};

/// DL pilot matrix `Psi` (T_dl x M').
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    pub psi: CMatrix,
    /// Set when `T_dl > M'`: the rows cannot be orthogonal, so the columns
    /// are orthonormal instead (`Psi^H Psi = P_dl I`).
    pub overcomplete: bool,
}

/// Random pilots proportional to a (partial) unitary matrix.
///
/// For `T_dl <= M'`, `Psi Psi^H = P_dl I_T`. Otherwise `Psi^H Psi = P_dl I_M'`
/// and the mean squared row norm is `P_dl M' / T_dl`.
pub fn make_pilots(t_dl: usize, m_prime: usize, p_dl: f64, seed: u64) -> PilotMatrix {
    let mut rng = rng_from_seed(seed);
    let amp = p_dl.max(0.0).sqrt();
    if t_dl <= m_prime {
        let g = complex_normal_matrix(&mut rng, m_prime, t_dl);
        let q = g.qr().q();
        PilotMatrix { psi: q.adjoint().scale(amp), overcomplete: false }
    } else {
        let g = complex_normal_matrix(&mut rng, t_dl, m_prime);
        let q = g.qr().q();
        PilotMatrix { psi: q.scale(amp), overcomplete: true }
    }
}
