use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use super::config::ExperimentConfig;
use super::dataset::ul_observation;
use super::stats::{parallel_map, MeanSem};
use super::{EvalMethod, STREAM_UDCT_TEST};
use crate::array::{sample_asf, synth_cov, Carrier};
use crate::error::{Error, Result};
use crate::nn::MlpParams;
use crate::rng::derive_path;
use crate::udct::{estimate, metric_nfd, metric_power_loss, UlDictionary};

#[derive(Debug, Clone, PartialEq)]
pub struct UdctRow {
    pub method: EvalMethod,
    pub n_over_m: usize,
    pub realization: usize,
    pub e_nfd: f64,
    pub e_ple: f64,
    /// `None` when timing is disabled.
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UdctSummary {
    pub method: EvalMethod,
    pub n_over_m: usize,
    pub e_nfd: MeanSem,
    pub e_ple: MeanSem,
}

/// Monte Carlo evaluation of every configured method at every sampling
/// ratio. Realization `r` draws one ASF shared by all ratios and methods,
/// plus fresh UL noise per ratio. Rows are ordered by ratio, method, then
/// realization.
pub fn eval_udct(cfg: &ExperimentConfig, params: Option<&MlpParams>) -> Result<Vec<UdctRow>> {
    cfg.validate()?;
    let u = &cfg.udct;
    if u.methods.contains(&EvalMethod::Mlp) && params.is_none() {
        return Err(Error::Config("MLP rows need a trained checkpoint".into()));
    }
    let model = cfg.ula()?;
    let dict = UlDictionary::new(&model);
    let opts = cfg.udct_options();
    let per_realization = parallel_map(u.realizations, cfg.threads, |r| {
        let asf = sample_asf(&cfg.ensemble, &model, derive_path(cfg.seed, &[STREAM_UDCT_TEST, r as u64, 0]))?;
        let true_dl = synth_cov(&model, &asf, Carrier::Downlink)?;
        let mut rows = Vec::with_capacity(u.n_over_m.len() * u.methods.len());
        for &n in &u.n_over_m {
            let noise_seed = derive_path(cfg.seed, &[STREAM_UDCT_TEST, r as u64, 1, n as u64]);
            let sigma = ul_observation(&model, &asf, n, u.snr_db, noise_seed)?;
            for &method in &u.methods {
                let start = Instant::now();
                let est_dl = match method.estimator() {
                    Some(m) => estimate(m, &dict, params, &sigma, &opts)?.dl_cov,
                    None => true_dl.clone(),
                };
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                rows.push(UdctRow {
                    method,
                    n_over_m: n,
                    realization: r,
                    e_nfd: metric_nfd(&true_dl, &est_dl)?,
                    e_ple: metric_power_loss(&true_dl, &est_dl)?,
                    wall_time_ms: u.record_timing.then_some(elapsed),
                });
            }
        }
        Ok(rows)
    })?;
    let mut rows: Vec<UdctRow> = per_realization.into_iter().flatten().collect();
    let ratio_rank = |n: usize| u.n_over_m.iter().position(|&x| x == n);
    let method_rank = |m: EvalMethod| u.methods.iter().position(|&x| x == m);
    rows.sort_by_key(|r| (ratio_rank(r.n_over_m), method_rank(r.method), r.realization));
    Ok(rows)
}

/// Mean and standard error per (method, ratio), ordered by ratio then method.
pub fn summarize_udct(rows: &[UdctRow]) -> Vec<UdctSummary> {
    let mut cells: BTreeMap<(usize, EvalMethod), Vec<&UdctRow>> = BTreeMap::new();
    for r in rows {
        cells.entry((r.n_over_m, r.method)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((n_over_m, method), rs)| UdctSummary {
            method,
            n_over_m,
            e_nfd: MeanSem::of(rs.iter().map(|r| r.e_nfd)),
            e_ple: MeanSem::of(rs.iter().map(|r| r.e_ple)),
        })
        .collect()
}

pub fn write_udct_csv<W: Write>(w: &mut W, cfg: &ExperimentConfig, rows: &[UdctRow]) -> Result<()> {
    writeln!(w, "{}", cfg.csv_comment()?)?;
    let timing = cfg.udct.record_timing;
    writeln!(w, "method,n_over_m,realization,e_nfd,e_ple{}", if timing { ",wall_time_ms" } else { "" })?;
    for r in rows {
        write!(w, "{},{},{},{},{}", r.method, r.n_over_m, r.realization, r.e_nfd, r.e_ple)?;
        match (timing, r.wall_time_ms) {
            (true, Some(t)) => writeln!(w, ",{t:.3}")?,
            (true, None) => writeln!(w, ",")?,
            (false, _) => writeln!(w)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::MlpSpec;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.model.antennas = 8;
        cfg.model.grid = 32;
        cfg.udct.n_over_m = vec![1, 4];
        cfg.udct.realizations = 3;
        cfg.udct.record_timing = false;
        cfg
    }

    #[test]
    fn truth_injection_gives_zero_distortion() {
        let mut cfg = small();
        cfg.udct.methods = vec![EvalMethod::Truth];
        cfg.udct.realizations = 1;
        let rows = eval_udct(&cfg, None).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.e_nfd == 0.0 && r.e_ple.abs() < 1e-12));
    }

    #[test]
    fn method_filter_and_row_order() {
        let mut cfg = small();
        cfg.udct.methods = vec![EvalMethod::Nnls];
        let rows = eval_udct(&cfg, None).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.method == EvalMethod::Nnls));
        let keys: Vec<_> = rows.iter().map(|r| (r.n_over_m, r.realization)).collect();
        assert_eq!(keys, vec![(1, 0), (1, 1), (1, 2), (4, 0), (4, 1), (4, 2)]);
        let mut out = Vec::new();
        write_udct_csv(&mut out, &cfg, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].starts_with("# config_hash=") && lines[0].ends_with("seed=1"));
        assert_eq!(lines[1], "method,n_over_m,realization,e_nfd,e_ple");
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn reruns_are_bit_identical_across_thread_counts() {
        let mut cfg = small();
        let params = crate::nn::MlpParams::glorot(&MlpSpec::for_array(8, 32), 4);
        cfg.threads = Some(1);
        let a = eval_udct(&cfg, Some(&params)).unwrap();
        cfg.threads = Some(3);
        let b = eval_udct(&cfg, Some(&params)).unwrap();
        assert_eq!(a, b);
        assert_eq!(summarize_udct(&a).len(), 6);
    }

    #[test]
    fn mlp_rows_require_parameters() {
        assert!(matches!(eval_udct(&small(), None), Err(Error::Config(_))));
    }
}
