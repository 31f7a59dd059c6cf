use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ula::UlaModel;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Tolerance on the unit-sum invariant of an ASF.
pub const ASF_SUM_TOLERANCE: f64 = 1e-9;

/// Grid-quantized angular spread function: nonnegative weights on the grid
/// `xi_i = -1 + 2 i / G` that sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Asf {
    weights: Vec<f64>,
}

impl Asf {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidAsf("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidAsf(format!("weight {w} is negative or non-finite")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > ASF_SUM_TOLERANCE {
            return Err(Error::InvalidAsf(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative weights to unit sum.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidAsf(format!("weight {w} is negative or non-finite")));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Degenerate("ASF has no mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Self::new(weights)
    }

    pub fn uniform(grid_size: usize) -> Self {
        Self { weights: vec![1.0 / grid_size as f64; grid_size] }
    }

    pub fn spike(grid_size: usize, index: usize) -> Self {
        let mut weights = vec![0.0; grid_size];
        weights[index] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid_size(&self) -> usize {
        self.weights.len()
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn l1_distance(&self, other: &Asf) -> f64 {
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GroupShape {
    #[default]
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GroupWeights {
    /// kappa_i = u_i / sum(u), u_i ~ U(0, 1).
    #[default]
    Random,
    Equal,
}

/// Ensemble of group-sparse ASFs: `num_groups` connected groups of random
/// width in (0, max_width].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSparseAsfSpec {
    pub num_groups: usize,
    pub max_width: f64,
    #[serde(default)]
    pub shape: GroupShape,
    #[serde(default)]
    pub weights: GroupWeights,
}

impl Default for GroupSparseAsfSpec {
    fn default() -> Self {
        Self {
            num_groups: 2,
            max_width: 0.4,
            shape: GroupShape::Uniform,
            weights: GroupWeights::Random,
        }
    }
}

impl GroupSparseAsfSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_groups == 0 {
            return Err(Error::InvalidAsf("need at least one group".into()));
        }
        if !(self.max_width > 0.0 && self.max_width <= 2.0) {
            return Err(Error::InvalidAsf(format!("max width {} not in (0, 2]", self.max_width)));
        }
        Ok(())
    }
}

/// One scattering group with support `[start, start + width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsfGroup {
    pub start: f64,
    pub width: f64,
    pub weight: f64,
}

pub fn sample_groups<R: Rng + ?Sized>(spec: &GroupSparseAsfSpec, rng: &mut R) -> Vec<AsfGroup> {
    let mut groups: Vec<AsfGroup> = (0..spec.num_groups)
        .map(|_| {
            let width = spec.max_width * (1.0 - rng.random::<f64>());
            let start = -1.0 + (2.0 - width) * rng.random::<f64>();
            let weight = match spec.weights {
                GroupWeights::Random => rng.random::<f64>(),
                GroupWeights::Equal => 1.0,
            };
            AsfGroup { start, width, weight }
        })
        .collect();
    let total: f64 = groups.iter().map(|g| g.weight).sum();
    if total > 0.0 {
        groups.iter_mut().for_each(|g| g.weight /= total);
    } else {
        let n = groups.len() as f64;
        groups.iter_mut().for_each(|g| g.weight = 1.0 / n);
    }
    groups
}

/// Quantizes uniform groups onto the grid. Grid cell `i` is the interval of
/// half-width `1/G` around `xi_i`; the sliver `[1 - 1/G, 1]` wraps onto cell
/// 0 (the UL steering phase is 2-periodic in `xi`). Overlapping groups add.
pub fn quantize_groups(model: &UlaModel, groups: &[AsfGroup]) -> Result<Asf> {
    let g = model.grid_size();
    let step = model.grid_step();
    let mut weights = vec![0.0; g];
    for grp in groups {
        if !(grp.width >= 0.0 && grp.start >= -1.0 && grp.start + grp.width <= 1.0 + 1e-12) {
            return Err(Error::InvalidAsf(format!(
                "group [{}, {}] leaves [-1, 1]",
                grp.start,
                grp.start + grp.width
            )));
        }
        let lo = (grp.start + 1.0) / step + 0.5;
        let hi = ((grp.start + grp.width + 1.0) / step + 0.5).min(g as f64 + 0.5);
        if hi - lo <= 0.0 {
            weights[(lo.floor() as usize) % g] += grp.weight;
            continue;
        }
        let first = lo.floor() as usize;
        let last = hi.floor() as usize;
        for cell in first..=last {
            let overlap = hi.min((cell + 1) as f64) - lo.max(cell as f64);
            if overlap > 0.0 {
                weights[cell % g] += grp.weight * overlap / (hi - lo);
            }
        }
    }
    Asf::normalized(weights)
}

/// Draws one ASF from the group-sparse ensemble.
pub fn sample_asf(spec: &GroupSparseAsfSpec, model: &UlaModel, seed: u64) -> Result<Asf> {
    spec.validate()?;
    let mut rng = rng_from_seed(seed);
    let groups = sample_groups(spec, &mut rng);
    quantize_groups(model, &groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> UlaModel {
        UlaModel::with_default_carriers(32, 128).unwrap()
    }

    /// Circular runs of nonzero cells as (start, length).
    fn support_runs(w: &[f64]) -> Vec<(usize, usize)> {
        let g = w.len();
        let Some(zero) = w.iter().position(|&x| x == 0.0) else {
            return vec![(0, g)];
        };
        let mut runs = Vec::new();
        let mut i = 0;
        while i < g {
            let idx = (zero + i) % g;
            if w[idx] > 0.0 {
                let start = idx;
                let mut len = 0;
                while i < g && w[(zero + i) % g] > 0.0 {
                    len += 1;
                    i += 1;
                }
                runs.push((start, len));
            } else {
                i += 1;
            }
        }
        runs
    }

    #[test]
    fn rejects_unnormalized_and_negative() {
        assert!(Asf::new(vec![0.5, 0.4]).is_err());
        assert!(Asf::new(vec![1.5, -0.5]).is_err());
        assert!(Asf::new(vec![0.25; 4]).is_ok());
        assert!(matches!(Asf::normalized(vec![0.0; 3]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn vanishing_width_gives_single_spike() {
        let spec = GroupSparseAsfSpec { num_groups: 1, max_width: 1e-12, ..Default::default() };
        for seed in 0..20 {
            let asf = sample_asf(&spec, &model(), seed).unwrap();
            let nz = asf.weights().iter().filter(|&&w| w > 0.0).count();
            assert_eq!(nz, 1, "seed {seed}");
            assert!((asf.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_group_support_is_at_most_two_short_runs() {
        let m = model();
        let spec = GroupSparseAsfSpec::default();
        for seed in [7u64, 8, 9, 10, 11, 12] {
            let asf = sample_asf(&spec, &m, seed).unwrap();
            let runs = support_runs(asf.weights());
            assert!(!runs.is_empty() && runs.len() <= 2, "seed {seed}: {runs:?}");
            for (_, len) in runs {
                // each group spans at most ceil(w / step) + 1 cells
                let max_cells = (0.4 / m.grid_step()).ceil() as usize + 1;
                // two overlapping groups can merge into one run
                assert!(len <= 2 * max_cells, "run of {len} cells");
            }
        }
    }

    #[test]
    fn disjoint_equal_groups_share_mass_evenly() {
        let m = model();
        let groups = [
            AsfGroup { start: -0.8, width: 0.25, weight: 0.5 },
            AsfGroup { start: 0.1, width: 0.25, weight: 0.5 },
        ];
        let asf = quantize_groups(&m, &groups).unwrap();
        let left: f64 = asf.weights()[..64].iter().sum();
        let right: f64 = asf.weights()[64..].iter().sum();
        assert!((left - 0.5).abs() < 1e-12 && (right - 0.5).abs() < 1e-12);
    }

    #[test]
    fn equal_weight_law_splits_mass() {
        let m = model();
        let spec = GroupSparseAsfSpec { weights: GroupWeights::Equal, ..Default::default() };
        let mut rng = rng_from_seed(4);
        let groups = sample_groups(&spec, &mut rng);
        assert!(groups.iter().all(|g| (g.weight - 0.5).abs() < 1e-15));
        assert!(groups.iter().all(|g| g.width > 0.0 && g.width <= 0.4));
        assert!(groups.iter().all(|g| g.start >= -1.0 && g.start + g.width <= 1.0));
        quantize_groups(&m, &groups).unwrap();
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = model();
        let spec = GroupSparseAsfSpec::default();
        assert_eq!(sample_asf(&spec, &m, 99).unwrap(), sample_asf(&spec, &m, 99).unwrap());
        assert_ne!(sample_asf(&spec, &m, 99).unwrap(), sample_asf(&spec, &m, 100).unwrap());
    }

    #[test]
    fn right_edge_wraps_to_first_cell() {
        let m = UlaModel::with_default_carriers(2, 8).unwrap();
        let asf = quantize_groups(&m, &[AsfGroup { start: 0.9, width: 0.1, weight: 1.0 }]).unwrap();
        // cell 7 spans [0.625, 0.875], cell 0 covers [0.875, 1] by wrap
        assert!((asf.weights()[0] - 1.0).abs() < 1e-12);
    }
}
