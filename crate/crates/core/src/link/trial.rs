use serde::{Deserialize, Serialize};

use super::lmmse::{lmmse_estimate, ChannelPrior};
use super::pilots::make_pilots;
use super::zf::zf_with_fallback;
use crate::array::{HermitianToeplitz, PSD_CLIP_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, trace_re, CMatrix};
use crate::precoder::SparsifyingPrecoder;
use crate::rng::{complex_normal_vector, derive_seed, rng_from_seed};

const STREAM_PILOTS: u64 = 0x9107;
const STREAM_PILOT_NOISE: u64 = 0x9108;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    /// Circulant beam gains of the selected beams.
    Diagonal,
    /// `B S B^H` from the assumed covariance.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    pub t_dl: usize,
    /// Resource elements per coherence block.
    pub coherence: usize,
    /// Total transmit power; the receiver noise is normalized to 1.
    pub p_dl: f64,
    pub prior: PriorKind,
    /// Skip pilots and use the exact effective channels.
    pub exact_csi: bool,
}

impl LinkParams {
    pub fn new(t_dl: usize, coherence: usize, snr_db: f64) -> Self {
        Self { t_dl, coherence, p_dl: 10f64.powf(snr_db / 10.0), prior: PriorKind::Diagonal, exact_csi: false }
    }

    /// `max(0, 1 - T_dl / T)`.
    pub fn overhead_factor(&self) -> f64 {
        (1.0 - self.t_dl as f64 / self.coherence as f64).max(0.0)
    }
}

/// Per-trial result. `coefficients[(i, j)] = b_{k_i, k_j}` over the served
/// users `served`.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub served: Vec<usize>,
    pub coefficients: CMatrix,
    /// Per served user `log2(1 + SINR)`, before the overhead factor.
    pub user_rates: Vec<f64>,
    /// Sum rate in bits per channel use, including the pilot overhead.
    pub sum_rate: f64,
    /// `tr(V P V^H)` of the data precoder.
    pub tx_power: f64,
    pub pilots_overcomplete: bool,
}

impl TrialOutcome {
    fn idle() -> Self {
        Self {
            served: Vec::new(),
            coefficients: CMatrix::zeros(0, 0),
            user_rates: Vec::new(),
            sum_rate: 0.0,
            tx_power: 0.0,
            pilots_overcomplete: false,
        }
    }
}

/// Draws channel vectors `h_k ~ CN(0, S_k)` for a fixed set of users.
#[derive(Debug, Clone)]
pub struct UserChannels {
    roots: Vec<CMatrix>,
}

impl UserChannels {
    pub fn new(true_covs: &[HermitianToeplitz]) -> Result<Self> {
        let roots = true_covs
            .iter()
            .map(|c| psd_sqrt(&c.to_matrix(), PSD_CLIP_TOLERANCE))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { roots })
    }

    pub fn num_users(&self) -> usize {
        self.roots.len()
    }

    /// M x K channel matrix; column `k` is user `k`'s channel.
    pub fn sample(&self, seed: u64) -> CMatrix {
        let m = self.roots.first().map_or(0, |r| r.nrows());
        let mut rng = rng_from_seed(seed);
        let mut h = CMatrix::zeros(m, self.roots.len());
        for (k, root) in self.roots.iter().enumerate() {
            let g = complex_normal_vector(&mut rng, m);
            h.set_column(k, &(root * g));
        }
        h
    }
}

/// `log2(1 + |b_kk|^2 / (1 + sum_{k' != k} |b_kk'|^2))` per row.
pub fn user_rates(coefficients: &CMatrix) -> Vec<f64> {
    (0..coefficients.nrows())
        .map(|k| {
            let row = coefficients.row(k);
            let signal = row[k].norm_sqr();
            let interference: f64 = row.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, b)| b.norm_sqr()).sum();
            (1.0 + signal / (1.0 + interference)).log2()
        })
        .collect()
}

/// Coefficients `b_{k, k'} = h_k^H v_{k'} sqrt(p)` with equal power `p`
/// per column of `v`; `channels` holds one user per column.
fn coefficients(channels: &CMatrix, v: &CMatrix, p: f64) -> CMatrix {
    (channels.adjoint() * v).scale(p.sqrt())
}

/// One coherence block with the sparsifying precoder: DL pilots through
/// `B`, LMMSE estimation at the users, analog feedback, ZF over the
/// estimated effective channels with equal power, and the resulting rates.
///
/// `channels` is M x K (all users); `assumed_covs` are the covariances the
/// transmitter designed with (used by the full prior).
pub fn sparsify_trial(
    precoder: &SparsifyingPrecoder,
    assumed_covs: &[HermitianToeplitz],
    channels: &CMatrix,
    params: &LinkParams,
    seed: u64,
) -> Result<TrialOutcome> {
    if precoder.is_empty() {
        return Ok(TrialOutcome::idle());
    }
    if channels.nrows() != precoder.b.ncols() {
        return Err(Error::shape(precoder.b.ncols(), channels.nrows()));
    }
    let users = &precoder.users;
    let m_prime = precoder.num_beams();
    let effective = &precoder.b * channels.select_columns(users);

    let (estimates, overcomplete) = if params.exact_csi {
        (effective.clone(), false)
    } else {
        let pilots = make_pilots(params.t_dl, m_prime, params.p_dl, derive_seed(seed, STREAM_PILOTS));
        let mut noise_rng = rng_from_seed(derive_seed(seed, STREAM_PILOT_NOISE));
        let mut est = CMatrix::zeros(m_prime, users.len());
        for (i, &k) in users.iter().enumerate() {
            let y = &pilots.psi * effective.column(i) + complex_normal_vector(&mut noise_rng, params.t_dl);
            let prior = match params.prior {
                PriorKind::Diagonal => {
                    ChannelPrior::Diagonal(precoder.beams.iter().map(|&m| precoder.gains.lambda(m, k)).collect())
                }
                PriorKind::Full => {
                    let s = assumed_covs.get(k).ok_or_else(|| Error::shape(users.len(), assumed_covs.len()))?;
                    ChannelPrior::Full(&precoder.b * s.to_matrix() * precoder.b.adjoint())
                }
            };
            est.set_column(i, &lmmse_estimate(&pilots.psi, &prior, &y, 1.0)?);
        }
        (est, pilots.overcomplete)
    };

    let (keep, v) = zf_with_fallback(&estimates);
    let Some(v) = v else { return Ok(TrialOutcome::idle()) };
    let served: Vec<usize> = keep.iter().map(|&i| users[i]).collect();
    let p = params.p_dl / served.len() as f64;
    let b = coefficients(&effective.select_columns(&keep), &v, p);
    let tx_power = p * trace_re(&(v.adjoint() * &v));
    let rates = user_rates(&b);
    let sum_rate = params.overhead_factor() * rates.iter().sum::<f64>();
    Ok(TrialOutcome { served, coefficients: b, user_rates: rates, sum_rate, tx_power, pilots_overcomplete: overcomplete })
}

/// Statistical beamforming for all K users with equal power and no pilot
/// overhead.
pub fn sbf_trial(beams: &CMatrix, channels: &CMatrix, p_dl: f64) -> Result<TrialOutcome> {
    if beams.shape() != channels.shape() {
        return Err(Error::shape(format!("{:?}", channels.shape()), format!("{:?}", beams.shape())));
    }
    let k = beams.ncols();
    if k == 0 {
        return Ok(TrialOutcome::idle());
    }
    let p = p_dl / k as f64;
    let b = coefficients(channels, beams, p);
    let rates = user_rates(&b);
    Ok(TrialOutcome {
        served: (0..k).collect(),
        coefficients: b,
        sum_rate: rates.iter().sum(),
        user_rates: rates,
        tx_power: p * trace_re(&(beams.adjoint() * beams)),
        pilots_overcomplete: false,
    })
}

/// Noise level used when designing statistical beamformers for equal power
/// `P_dl / K` per user with unit receiver noise.
pub fn sbf_noise_level(num_users: usize, p_dl: f64) -> f64 {
    num_users as f64 / p_dl
}

/// Largest `|b_{k,k'}| / |b_{k,k}|` over `k' != k`.
pub fn max_relative_interference(b: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..b.nrows() {
        let d = b[(r, r)].norm();
        for c in 0..b.ncols() {
            if c != r {
                worst = worst.max(b[(r, c)].norm() / d);
            }
        }
    }
    worst
}
