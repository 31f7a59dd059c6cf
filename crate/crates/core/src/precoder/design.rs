use std::io::Write;

use super::dft::dft_column;
use super::gains::{circulant_gains, BeamGains};
use crate::array::HermitianToeplitz;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::milp::{solve_milp, BeamGraph, MilpInstance, MilpOptions, MilpSolution};

/// Beam/user graph from gains with per-user thresholds
/// `relative_threshold * max_m lambda[m, k]`.
pub fn build_graph(gains: &BeamGains, relative_threshold: f64) -> Result<BeamGraph> {
    if relative_threshold.is_nan() || relative_threshold <= 0.0 {
        return Err(Error::Config(format!("threshold must be positive, got {relative_threshold}")));
    }
    BeamGraph::with_relative_threshold(
        gains.num_beams(),
        gains.num_users(),
        gains.lambda_matrix().to_vec(),
        relative_threshold,
    )
}

/// `fraction` times the mean total gain per user.
pub fn default_p0(gains: &BeamGains, fraction: f64) -> f64 {
    let k = gains.num_users().max(1) as f64;
    fraction * (0..gains.num_users()).map(|u| gains.user_gains(u).iter().sum::<f64>()).sum::<f64>() / k
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignParams {
    pub t_dl: usize,
    pub p0: f64,
    pub relative_threshold: f64,
    /// Objective coefficient per selected beam; `None` uses `1 / (2M)`.
    pub epsilon_obj: Option<f64>,
    pub milp: MilpOptions,
}

/// Selected DFT beams and users, with `B = F_B^H` (M' x M).
#[derive(Debug, Clone)]
pub struct SparsifyingPrecoder {
    pub beams: Vec<usize>,
    pub users: Vec<usize>,
    pub b: CMatrix,
    pub gains: BeamGains,
    pub graph: BeamGraph,
}

impl SparsifyingPrecoder {
    pub fn num_beams(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty() || self.users.is_empty()
    }

    /// Selected beams in the support of user `k` (positions into `beams`).
    pub fn user_support(&self, k: usize) -> Vec<usize> {
        (0..self.beams.len()).filter(|&i| self.graph.adjacent(self.beams[i], k)).collect()
    }
}

/// Rows `f_m^H` for the given beams.
pub fn beam_selection_matrix(m: usize, beams: &[usize]) -> CMatrix {
    let mut b = CMatrix::zeros(beams.len(), m);
    for (i, &beam) in beams.iter().enumerate() {
        b.set_row(i, &dft_column(m, beam).adjoint());
    }
    b
}

/// Gains, graph, exact selection and `B`, from the covariances the
/// transmitter believes in.
pub fn design_precoder(covs: &[HermitianToeplitz], params: &DesignParams) -> Result<(SparsifyingPrecoder, MilpSolution)> {
    let gains = circulant_gains(covs)?;
    design_from_gains(gains, params)
}

pub fn design_from_gains(gains: BeamGains, params: &DesignParams) -> Result<(SparsifyingPrecoder, MilpSolution)> {
    let graph = build_graph(&gains, params.relative_threshold)?;
    let inst = match params.epsilon_obj {
        Some(eps) => MilpInstance::with_epsilon(graph.clone(), params.t_dl, params.p0, eps)?,
        None => MilpInstance::new(graph.clone(), params.t_dl, params.p0)?,
    };
    let sol = solve_milp(&inst, &params.milp)?;
    if !sol.proven_optimal {
        log::warn!("precoder selection not certified optimal (gap {:.3e})", sol.gap);
    }
    let beams = sol.selected_beams();
    let users = sol.selected_users();
    let b = beam_selection_matrix(gains.num_beams(), &beams);
    Ok((SparsifyingPrecoder { beams, users, b, gains, graph }, sol))
}

/// CSV with columns `kind,i,j,re,im`: `beam,i,m` and `user,i,k` rows list
/// the selections, `b,r,c,re,im` rows the entries of `B`.
pub fn write_precoder_csv<W: Write>(w: &mut W, p: &SparsifyingPrecoder) -> Result<()> {
    writeln!(w, "kind,i,j,re,im")?;
    for (i, m) in p.beams.iter().enumerate() {
        writeln!(w, "beam,{i},{m},,")?;
    }
    for (i, k) in p.users.iter().enumerate() {
        writeln!(w, "user,{i},{k},,")?;
    }
    for r in 0..p.b.nrows() {
        for c in 0..p.b.ncols() {
            let z = p.b[(r, c)];
            writeln!(w, "b,{r},{c},{:e},{:e}", z.re, z.im)?;
        }
    }
    Ok(())
}
