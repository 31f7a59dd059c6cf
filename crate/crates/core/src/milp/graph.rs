use crate::error::{Error, Result};

/// Default per-user threshold, relative to the user's strongest beam.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-2;

/// Weighted bipartite beam-user graph. Beam `m` and user `k` are adjacent
/// when `W[m, k]` exceeds user `k`'s threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamGraph {
    num_beams: usize,
    num_users: usize,
    /// Row-major M x K.
    weights: Vec<f64>,
    adjacency: Vec<bool>,
    thresholds: Vec<f64>,
}

impl BeamGraph {
    /// Adjacency from explicit per-user thresholds (`W > threshold`).
    pub fn with_thresholds(
        num_beams: usize,
        num_users: usize,
        weights: Vec<f64>,
        thresholds: Vec<f64>,
    ) -> Result<Self> {
        if weights.len() != num_beams * num_users {
            return Err(Error::shape(num_beams * num_users, weights.len()));
        }
        if thresholds.len() != num_users {
            return Err(Error::shape(num_users, thresholds.len()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidInstance(format!("weight {w} is negative or non-finite")));
        }
        if let Some(t) = thresholds.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::InvalidInstance(format!("threshold {t} is negative or non-finite")));
        }
        let adjacency = (0..num_beams * num_users)
            .map(|i| weights[i] > thresholds[i % num_users])
            .collect();
        Ok(Self { num_beams, num_users, weights, adjacency, thresholds })
    }

    /// One absolute threshold for every user.
    pub fn with_threshold(num_beams: usize, num_users: usize, weights: Vec<f64>, threshold: f64) -> Result<Self> {
        Self::with_thresholds(num_beams, num_users, weights, vec![threshold; num_users])
    }

    /// Thresholds `relative * max_m W[m, k]` per user.
    pub fn with_relative_threshold(
        num_beams: usize,
        num_users: usize,
        weights: Vec<f64>,
        relative: f64,
    ) -> Result<Self> {
        if weights.len() != num_beams * num_users {
            return Err(Error::shape(num_beams * num_users, weights.len()));
        }
        if !(relative.is_finite() && relative >= 0.0) {
            return Err(Error::InvalidInstance(format!("relative threshold {relative}")));
        }
        let thresholds = (0..num_users)
            .map(|k| relative * (0..num_beams).map(|m| weights[m * num_users + k]).fold(0.0, f64::max))
            .collect();
        Self::with_thresholds(num_beams, num_users, weights, thresholds)
    }

    /// Graph with the given adjacency and weights; thresholds are recorded
    /// as zero. Used for instances specified by their edges directly.
    pub fn from_adjacency(num_beams: usize, num_users: usize, adjacency: Vec<bool>, weights: Vec<f64>) -> Result<Self> {
        if adjacency.len() != num_beams * num_users {
            return Err(Error::shape(num_beams * num_users, adjacency.len()));
        }
        let mut g = Self::with_threshold(num_beams, num_users, weights, 0.0)?;
        g.adjacency = adjacency;
        Ok(g)
    }

    pub fn num_beams(&self) -> usize {
        self.num_beams
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn weight(&self, m: usize, k: usize) -> f64 {
        self.weights[m * self.num_users + k]
    }

    pub fn adjacent(&self, m: usize, k: usize) -> bool {
        self.adjacency[m * self.num_users + k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn adjacency(&self) -> &[bool] {
        &self.adjacency
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count()
    }

    /// Beams adjacent to user `k`.
    pub fn user_beams(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_beams).filter(move |&m| self.adjacent(m, k))
    }

    /// Total weight of user `k` over all beams.
    pub fn user_power(&self, k: usize) -> f64 {
        (0..self.num_beams).map(|m| self.weight(m, k)).sum()
    }
}

/// One instance of the beam/user selection program.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpInstance {
    pub graph: BeamGraph,
    pub t_dl: usize,
    pub p0: f64,
    /// Coefficient of the selected-beam count in the objective.
    pub epsilon_obj: f64,
}

impl MilpInstance {
    /// Uses the default objective coefficient `1 / (2M)`.
    pub fn new(graph: BeamGraph, t_dl: usize, p0: f64) -> Result<Self> {
        let eps = 1.0 / (2.0 * graph.num_beams().max(1) as f64);
        Self::with_epsilon(graph, t_dl, p0, eps)
    }

    pub fn with_epsilon(graph: BeamGraph, t_dl: usize, p0: f64, epsilon_obj: f64) -> Result<Self> {
        let inst = Self { graph, t_dl, p0, epsilon_obj };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.graph.num_beams();
        if self.t_dl == 0 || self.t_dl > m {
            return Err(Error::InvalidInstance(format!("T_dl = {} outside 1..={m}", self.t_dl)));
        }
        if !(self.p0.is_finite() && self.p0 >= 0.0) {
            return Err(Error::InvalidInstance(format!("P0 = {}", self.p0)));
        }
        if !(self.epsilon_obj.is_finite() && self.epsilon_obj > 0.0) {
            return Err(Error::InvalidInstance(format!("objective epsilon = {}", self.epsilon_obj)));
        }
        Ok(())
    }
}
