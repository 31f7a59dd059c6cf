use std::collections::BTreeMap;
use std::io::Write;

use super::config::ExperimentConfig;
use super::dataset::ul_observation;
use super::stats::{parallel_map, MeanSem};
use super::{RateMethod, STREAM_RATE};
use crate::array::{sample_asf, synth_cov, Carrier, HermitianToeplitz};
use crate::error::{Error, Result};
use crate::link::{sbf_noise_level, sbf_trial, sparsify_trial, statistical_beamformer, LinkParams, TrialOutcome, UserChannels};
use crate::nn::MlpParams;
use crate::precoder::{circulant_gains, default_p0, design_from_gains, DesignParams};
use crate::rng::derive_path;
use crate::udct::{estimate, UlDictionary};

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub method: RateMethod,
    pub t_dl: usize,
    pub trial: usize,
    pub sum_rate: f64,
    pub k_served: usize,
    /// `tr(V P V^H)`; zero when nobody is served.
    pub tx_power: f64,
    /// Whether the MILP behind this row's precoder was proven optimal
    /// (always true for statistical beamforming).
    pub milp_proven: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSummary {
    pub method: RateMethod,
    pub t_dl: usize,
    pub sum_rate: MeanSem,
    pub mean_served: f64,
}

/// True DL covariances of one user drop and, when `with_estimates`, the
/// covariances estimated from simulated UL observations.
pub fn drop_covariances(
    cfg: &ExperimentConfig,
    drop: usize,
    params: Option<&MlpParams>,
    with_estimates: bool,
) -> Result<(Vec<HermitianToeplitz>, Option<Vec<HermitianToeplitz>>)> {
    let model = cfg.ula()?;
    let p = &cfg.precoder;
    let dict = with_estimates.then(|| UlDictionary::new(&model));
    let opts = cfg.udct_options();
    let mut truth = Vec::with_capacity(p.users);
    let mut est = Vec::with_capacity(p.users);
    for k in 0..p.users {
        let path = |leaf: u64| derive_path(cfg.seed, &[STREAM_RATE, drop as u64, k as u64, leaf]);
        let asf = sample_asf(&cfg.ensemble, &model, path(0))?;
        truth.push(synth_cov(&model, &asf, Carrier::Downlink)?);
        if let Some(dict) = &dict {
            let sigma = ul_observation(&model, &asf, p.estimate_n_over_m, p.estimate_snr_db, path(1))?;
            est.push(estimate(p.estimator, dict, params, &sigma, &opts)?.dl_cov);
        }
    }
    Ok((truth, with_estimates.then_some(est)))
}

fn row(method: RateMethod, t_dl: usize, trial: usize, out: &TrialOutcome, milp_proven: bool) -> RateRow {
    RateRow {
        method,
        t_dl,
        trial,
        sum_rate: out.sum_rate,
        k_served: out.served.len(),
        tx_power: out.tx_power,
        milp_proven,
    }
}

/// Sum-rate Monte Carlo over `drops x channels_per_drop` trials per pilot
/// dimension. All methods and pilot dimensions of a drop see the same
/// channel realizations. Rows are ordered by pilot dimension, method, then
/// trial.
pub fn rate_sweep(cfg: &ExperimentConfig, params: Option<&MlpParams>) -> Result<Vec<RateRow>> {
    cfg.validate()?;
    let p = &cfg.precoder;
    let m = cfg.model.antennas;
    if let Some(t) = p.t_dl.iter().find(|&&t| t > m) {
        return Err(Error::Config(format!("pilot dimension {t} exceeds {m} antennas")));
    }
    let with_estimates = p.methods.iter().any(|m| m.uses_estimates());
    if with_estimates && p.estimator == crate::udct::UdctMethod::Mlp && params.is_none() {
        return Err(Error::Config("estimated-covariance rows need a trained checkpoint".into()));
    }
    let p_dl = 10f64.powf(p.snr_db / 10.0);
    let cpd = p.channels_per_drop;
    let per_drop = parallel_map(p.drops, cfg.threads, |d| {
        let (truth, est) = drop_covariances(cfg, d, params, with_estimates)?;
        let channels = UserChannels::new(&truth)?;
        let h: Vec<_> = (0..cpd)
            .map(|c| channels.sample(derive_path(cfg.seed, &[STREAM_RATE, d as u64, u64::MAX, c as u64])))
            .collect();
        let covs_for = |m: RateMethod| if m.uses_estimates() { est.as_deref().expect("estimates drawn") } else { &truth[..] };
        let mut rows = Vec::new();
        for &method in p.methods.iter().filter(|m| !m.is_sparsify()) {
            let beams = statistical_beamformer(covs_for(method), sbf_noise_level(p.users, p_dl))?;
            let outs = h.iter().map(|hc| sbf_trial(&beams, hc, p_dl)).collect::<Result<Vec<_>>>()?;
            for &t_dl in &p.t_dl {
                rows.extend(outs.iter().enumerate().map(|(c, o)| row(method, t_dl, d * cpd + c, o, true)));
            }
        }
        for &method in p.methods.iter().filter(|m| m.is_sparsify()) {
            let covs = covs_for(method);
            let gains = circulant_gains(covs)?;
            let p0 = default_p0(&gains, p.p0_fraction);
            for &t_dl in &p.t_dl {
                let design = DesignParams {
                    t_dl,
                    p0,
                    relative_threshold: p.relative_threshold,
                    epsilon_obj: p.epsilon_obj,
                    milp: cfg.milp_options(),
                };
                let (pre, sol) = design_from_gains(gains.clone(), &design)?;
                if !sol.proven_optimal {
                    log::warn!("drop {d}, T_dl {t_dl}: MILP stopped with gap {:.3e}", sol.gap);
                }
                let link = LinkParams { prior: p.prior, ..LinkParams::new(t_dl, p.coherence, p.snr_db) };
                for (c, hc) in h.iter().enumerate() {
                    let seed = derive_path(cfg.seed, &[STREAM_RATE, d as u64, u64::MAX - 1, c as u64, t_dl as u64]);
                    let out = sparsify_trial(&pre, covs, hc, &link, seed)?;
                    rows.push(row(method, t_dl, d * cpd + c, &out, sol.proven_optimal));
                }
            }
        }
        Ok(rows)
    })?;
    let mut rows: Vec<RateRow> = per_drop.into_iter().flatten().collect();
    let t_rank = |t: usize| p.t_dl.iter().position(|&x| x == t);
    let m_rank = |m: RateMethod| p.methods.iter().position(|&x| x == m);
    rows.sort_by_key(|r| (t_rank(r.t_dl), m_rank(r.method), r.trial));
    Ok(rows)
}

/// Mean sum rate with standard error per (method, pilot dimension).
pub fn summarize_rates(rows: &[RateRow]) -> Vec<RateSummary> {
    let mut cells: BTreeMap<(usize, RateMethod), Vec<&RateRow>> = BTreeMap::new();
    for r in rows {
        cells.entry((r.t_dl, r.method)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((t_dl, method), rs)| RateSummary {
            method,
            t_dl,
            sum_rate: MeanSem::of(rs.iter().map(|r| r.sum_rate)),
            mean_served: rs.iter().map(|r| r.k_served as f64).sum::<f64>() / rs.len() as f64,
        })
        .collect()
}

pub fn write_rate_csv<W: Write>(w: &mut W, cfg: &ExperimentConfig, rows: &[RateRow]) -> Result<()> {
    writeln!(w, "{}", cfg.csv_comment()?)?;
    writeln!(w, "method,t_dl,trial,sum_rate_bits_per_symbol,k_served")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.method, r.t_dl, r.trial, r.sum_rate, r.k_served)?;
    }
    Ok(())
}
