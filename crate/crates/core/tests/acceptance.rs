//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! measured numbers underneath, and fails if any criterion fails.
//!
//! Run a subset by listing criterion numbers:
//! `cargo test -p fddmimo-core --test acceptance -- 3 4`.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fddmimo_core::array::{sample_asf, synth_cov, toeplitzify, Carrier, GroupSparseAsfSpec, UlaModel};
use fddmimo_core::experiment::{
    eval_udct, generate_dataset, rate_sweep, train_model, EvalMethod, ExperimentConfig, MeanSem, RateMethod, RateRow,
    UdctRow,
};
use fddmimo_core::link::{lmmse_estimate, make_pilots, max_relative_interference, zf_precoder, ChannelPrior};
use fddmimo_core::milp::{max_matching, solve_milp, BeamGraph, MilpInstance, MilpOptions};
use fddmimo_core::nn::{backward, forward, loss_l1, mean_loss, split_indices, MlpParams, MlpSpec};
use fddmimo_core::precoder::{beam_selection_matrix, circulant_gains};
use fddmimo_core::rng::{complex_normal_matrix, complex_normal_vector, rng_from_seed};
use fddmimo_core::udct::efficiency_profile;
use fddmimo_core::Complex64;
use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;

type CMatrix = DMatrix<Complex64>;

struct Verdict {
    pass: bool,
    details: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Self { pass: true, details: Vec::new() }
    }

    /// Records one check; the verdict fails if any check fails.
    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }
}

struct Trained {
    params: MlpParams,
    elapsed: Duration,
    val_loss: f64,
    /// Validation loss of always predicting the uniform ASF.
    uniform_loss: f64,
}

/// Expensive results shared between criteria.
struct Shared {
    cfg: ExperimentConfig,
    mlp: OnceCell<Trained>,
    udct: OnceCell<(Vec<UdctRow>, Duration)>,
    rates: OnceCell<(Vec<RateRow>, Duration)>,
}

impl Shared {
    fn mlp(&self) -> &Trained {
        self.mlp.get_or_init(|| {
            let start = Instant::now();
            let data = generate_dataset(&self.cfg).expect("dataset");
            let out = train_model(&self.cfg, &data, None, 0).expect("training");
            let elapsed = start.elapsed();
            let (_, val) = split_indices(data.samples.len(), &self.cfg.train_config());
            let uniform = 1.0 / self.cfg.model.grid as f64;
            let uniform_loss = val
                .iter()
                .map(|&i| data.samples[i].label.iter().map(|t| (t - uniform).abs()).sum::<f64>())
                .sum::<f64>()
                / val.len() as f64;
            let val_loss = mean_loss(&out.params, &data.samples, &val).expect("validation loss");
            Trained { params: out.params, elapsed, val_loss, uniform_loss }
        })
    }

    fn udct(&self) -> &(Vec<UdctRow>, Duration) {
        self.udct.get_or_init(|| {
            let params = &self.mlp().params;
            let start = Instant::now();
            let rows = eval_udct(&self.cfg, Some(params)).expect("udct evaluation");
            (rows, start.elapsed())
        })
    }

    fn rates(&self) -> &(Vec<RateRow>, Duration) {
        self.rates.get_or_init(|| {
            let params = &self.mlp().params;
            let start = Instant::now();
            let rows = rate_sweep(&self.cfg, Some(params)).expect("rate sweep");
            (rows, start.elapsed())
        })
    }
}

/// Mean difference `a - b` over paired samples, with the threshold it has
/// to clear: the largest of both standard errors and that of the paired
/// difference.
fn paired_gap(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let sa = MeanSem::of(a.iter().copied());
    let sb = MeanSem::of(b.iter().copied());
    let d = MeanSem::of(a.iter().zip(b).map(|(x, y)| x - y));
    (d.mean, sa.sem.max(sb.sem).max(d.sem))
}

fn udct_values(rows: &[UdctRow], method: EvalMethod, n_over_m: usize, ple: bool) -> Vec<f64> {
    let mut sel: Vec<&UdctRow> = rows.iter().filter(|r| r.method == method && r.n_over_m == n_over_m).collect();
    sel.sort_by_key(|r| r.realization);
    sel.iter().map(|r| if ple { r.e_ple } else { r.e_nfd }).collect()
}

fn criterion_1(sh: &Shared) -> Verdict {
    let mut v = Verdict::new();
    let trained = sh.mlp();
    let train_time = &trained.elapsed;
    v.check(
        trained.val_loss < trained.uniform_loss,
        format!("validation L1 loss {:.4}, uniform predictor {:.4}", trained.val_loss, trained.uniform_loss),
    );
    let (rows, eval_time) = sh.udct();
    for (n_over_m, ple) in [(1, false), (2, false), (1, true)] {
        let name = if ple { "E_PLE" } else { "E_NFD" };
        let mlp = udct_values(rows, EvalMethod::Mlp, n_over_m, ple);
        v.check(mlp.len() >= 100, format!("{} realizations at N/M = {n_over_m}", mlp.len()));
        for other in [EvalMethod::Nnls, EvalMethod::L2] {
            let base = udct_values(rows, other, n_over_m, ple);
            let (gap, threshold) = paired_gap(&base, &mlp);
            v.check(
                gap > threshold,
                format!(
                    "N/M = {n_over_m} {name}: mlp {:.4} vs {other} {:.4}, gap {gap:.4} > SEM {threshold:.4}",
                    MeanSem::of(mlp.iter().copied()).mean,
                    MeanSem::of(base.iter().copied()).mean
                ),
            );
        }
    }
    let total = *train_time + *eval_time;
    v.check(
        total <= Duration::from_secs(20 * 60),
        format!("dataset + training {:.0} s, evaluation {:.0} s", train_time.as_secs_f64(), eval_time.as_secs_f64()),
    );
    v
}

fn criterion_2(sh: &Shared) -> Verdict {
    let mut v = Verdict::new();
    let (rows, _) = sh.udct();
    for method in [EvalMethod::Nnls, EvalMethod::L2, EvalMethod::Mlp] {
        let one = MeanSem::of(udct_values(rows, method, 1, false));
        let eight = MeanSem::of(udct_values(rows, method, 8, false));
        let drop = 1.0 - eight.mean / one.mean;
        v.check(
            drop >= 0.2 && one.count >= 100 && eight.count >= 100,
            format!("{method}: E_NFD {:.4} at N/M = 1, {:.4} at N/M = 8, {:.0}% lower", one.mean, eight.mean, 100.0 * drop),
        );
    }
    v
}

/// Every (x, y) checked against the constraints directly, scored by
/// maximum matching on the selected subgraph.
fn exhaustive_optimum(inst: &MilpInstance) -> f64 {
    let g = &inst.graph;
    let (nb, nu) = (g.num_beams(), g.num_users());
    let mut best = 0.0f64;
    for xm in 0u32..1 << nb {
        let x: Vec<bool> = (0..nb).map(|m| xm >> m & 1 == 1).collect();
        let beams_ok = |y: &[bool]| (0..nb).all(|m| !x[m] || (0..nu).any(|k| y[k] && g.adjacent(m, k)));
        for ym in 0u32..1 << nu {
            let y: Vec<bool> = (0..nu).map(|k| ym >> k & 1 == 1).collect();
            let users_ok = (0..nu).all(|k| {
                let degree = (0..nb).filter(|&m| x[m] && g.adjacent(m, k)).count();
                let power: f64 = (0..nb).filter(|&m| x[m]).map(|m| g.weight(m, k)).sum();
                !y[k] || (degree <= inst.t_dl && power >= inst.p0)
            });
            if users_ok && beams_ok(&y) {
                let sub: Vec<bool> = (0..nb * nu).map(|i| g.adjacency()[i] && x[i / nu] && y[i % nu]).collect();
                let value = max_matching(nb, nu, &sub).size() as f64
                    + inst.epsilon_obj * x.iter().filter(|&&b| b).count() as f64;
                best = best.max(value);
            }
        }
    }
    best
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let mut mismatches = 0;
    let mut unproven = 0;
    let mut nontrivial = 0;
    let instances = 250;
    for seed in 0..instances {
        let mut rng = rng_from_seed(0xacc3_0000 + seed);
        let nb = rng.random_range(1..=8);
        let nu = rng.random_range(1..=6);
        let density = rng.random_range(0.2..0.9);
        let weights: Vec<f64> =
            (0..nb * nu).map(|_| if rng.random_bool(density) { rng.random::<f64>().powi(2) } else { 0.0 }).collect();
        let graph = BeamGraph::with_relative_threshold(nb, nu, weights, 0.05).expect("graph");
        let t_dl = rng.random_range(1..=nb);
        let p0 = rng.random_range(0.0..1.2);
        let inst = MilpInstance::new(graph, t_dl, p0).expect("instance");
        let sol = solve_milp(&inst, &MilpOptions::default()).expect("solve");
        let want = exhaustive_optimum(&inst);
        mismatches += usize::from((sol.objective - want).abs() > 1e-9);
        unproven += usize::from(!sol.proven_optimal);
        nontrivial += usize::from(sol.matching_size > 1);
    }
    let elapsed = start.elapsed();
    v.check(mismatches == 0, format!("{mismatches} mismatches over {instances} instances (M <= 8, K <= 6)"));
    v.check(unproven == 0, format!("{unproven} solves without an optimality proof"));
    v.note(format!("{nontrivial} instances with optimal matching above one"));
    v.check(elapsed <= Duration::from_secs(120), format!("{:.1} s", elapsed.as_secs_f64()));
    v
}

fn numerical_rank(h: &CMatrix) -> usize {
    if h.is_empty() {
        return 0;
    }
    let s = h.singular_values();
    let top = s.max();
    s.iter().filter(|&&x| x > 1e-8 * top && top > 0.0).count()
}

/// `h` restricted to the given beams and users.
fn restrict(h: &CMatrix, beams: &[usize], users: &[usize]) -> (CMatrix, Vec<bool>) {
    let sub = CMatrix::from_fn(beams.len(), users.len(), |r, c| h[(beams[r], users[c])]);
    let adj = (0..beams.len() * users.len()).map(|i| sub[(i / users.len(), i % users.len())].norm() > 0.0).collect();
    (sub, adj)
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    let graphs = 60;
    let mut checked = 0;
    let mut failures = 0;
    for seed in 0..graphs {
        let mut rng = rng_from_seed(0xacc4_0000 + seed);
        let nb = rng.random_range(2..=10);
        let nu = rng.random_range(2..=10);
        let density = rng.random_range(0.15..0.7);
        let adjacency: Vec<bool> = (0..nb * nu).map(|_| rng.random_bool(density)).collect();
        let g = complex_normal_matrix(&mut rng, nb, nu);
        let h = CMatrix::from_fn(nb, nu, |m, k| if adjacency[m * nu + k] { g[(m, k)] } else { Complex64::ZERO });
        let weights: Vec<f64> = (0..nb * nu).map(|i| h[(i / nu, i % nu)].norm_sqr()).collect();
        let graph = BeamGraph::from_adjacency(nb, nu, adjacency, weights).expect("graph");
        let inst = MilpInstance::new(graph, rng.random_range(1..=nb), rng.random_range(0.0..1.0)).expect("instance");
        let sol = solve_milp(&inst, &MilpOptions::default()).expect("solve");
        let mut selections = vec![(sol.selected_beams(), sol.selected_users())];
        // further random submatrices of the same graph
        for _ in 0..10 {
            let rb = rng.random_range(1..=nb);
            let ru = rng.random_range(1..=nu);
            let mut beams = sample(&mut rng, nb, rb).into_vec();
            let mut users = sample(&mut rng, nu, ru).into_vec();
            beams.sort_unstable();
            users.sort_unstable();
            selections.push((beams, users));
        }
        for (beams, users) in selections {
            let (sub, adj) = restrict(&h, &beams, &users);
            let matching = max_matching(beams.len(), users.len(), &adj).size();
            checked += 1;
            failures += usize::from(numerical_rank(&sub) != matching);
        }
    }
    v.check(failures == 0, format!("{failures} rank/matching disagreements over {checked} submatrices of {graphs} graphs"));
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let mut worst = 0.0f64;
    let mut rng = rng_from_seed(0xacc6);
    for _ in 0..100 {
        let m = rng.random_range(4..=32);
        let k = rng.random_range(1..=m / 2);
        let h = complex_normal_matrix(&mut rng, m, k);
        let (prec, _) = zf_precoder(&h).expect("well-conditioned channel");
        worst = worst.max(max_relative_interference(&(h.adjoint() * prec)));
    }
    v.check(worst < 1e-9, format!("worst max |b_kk'| / |b_kk| = {worst:.2e} over 100 realizations (K <= M/2)"));
    v
}

fn criterion_5_and_7(sh: &Shared) -> (Verdict, Verdict) {
    let (rows, elapsed) = sh.rates();
    let p = &sh.cfg.precoder;
    let mut c5 = Verdict::new();
    let mut cells: BTreeMap<(usize, RateMethod), Vec<&RateRow>> = BTreeMap::new();
    for r in rows {
        cells.entry((r.t_dl, r.method)).or_default().push(r);
    }
    let rates = |t: usize, m: RateMethod| -> Vec<f64> {
        let mut rs = cells.get(&(t, m)).cloned().unwrap_or_default();
        rs.sort_by_key(|r| r.trial);
        rs.iter().map(|r| r.sum_rate).collect()
    };
    let pairs = [
        (RateMethod::SparsifyTrueCov, RateMethod::SbfTrueCov, vec![8, 12, 16, 20, 24]),
        (RateMethod::SparsifyEstCov, RateMethod::SbfEstCov, vec![12, 16, 20]),
    ];
    for (sparse, sbf, t_set) in pairs {
        for t in t_set {
            let a = rates(t, sparse);
            let b = rates(t, sbf);
            let ok_count = a.len() >= 300 && a.len() == b.len();
            let (gap, threshold) = paired_gap(&a, &b);
            c5.check(
                ok_count && gap > threshold,
                format!(
                    "T_dl = {t:2}: {sparse} {:.2} vs {sbf} {:.2} bits/symbol, gap {gap:.2} > SEM {threshold:.3}, {} trials",
                    MeanSem::of(a.iter().copied()).mean,
                    MeanSem::of(b.iter().copied()).mean,
                    a.len()
                ),
            );
        }
    }
    let unproven = rows.iter().filter(|r| !r.milp_proven).count();
    c5.note(format!("{unproven} rows with an unproven MILP; M = {}, K = {}, T = {}", sh.cfg.model.antennas, p.users, p.coherence));
    c5.check(*elapsed <= Duration::from_secs(30 * 60), format!("sweep {:.0} s (excluding training)", elapsed.as_secs_f64()));

    let mut c7 = Verdict::new();
    let p_dl = 10f64.powf(p.snr_db / 10.0);
    let silent = rows.iter().filter(|r| r.k_served == 0).count();
    let worst = rows.iter().filter(|r| r.k_served > 0).map(|r| (r.tx_power - p_dl).abs()).fold(0.0, f64::max);
    c7.check(worst <= 1e-9, format!("max |tr(V P V^H) - P_dl| = {worst:.2e} over {} trials", rows.len() - silent));
    c7.check(silent == 0, format!("{silent} trials served nobody"));
    (c5, c7)
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    let trials = 600;
    let snrs_db = [20.0, 30.0, 40.0];
    for (label, t_dl, m) in [("T_dl = M' = 8", 8, 8), ("T_dl = 16 > M' = 8", 16, 8)] {
        for full in [false, true] {
            let mut mse = Vec::new();
            for (i, snr) in snrs_db.iter().enumerate() {
                let n0 = 10f64.powf(-snr / 10.0);
                let mut total = 0.0;
                for trial in 0..trials {
                    let mut rng = rng_from_seed(0xacc8_0000 + (trial as u64) * 8 + i as u64);
                    let (prior, sqrt) = if full {
                        let a = complex_normal_matrix(&mut rng, m, m);
                        let c: CMatrix = (&a * a.adjoint()).unscale(m as f64);
                        let l = c.clone().cholesky().expect("positive definite").l();
                        (ChannelPrior::Full(c), l)
                    } else {
                        let d: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..2.0)).collect();
                        let l = CMatrix::from_diagonal(&d.iter().map(|x| Complex64::new(x.sqrt(), 0.0)).collect::<Vec<_>>().into());
                        (ChannelPrior::Diagonal(d), l)
                    };
                    let h = sqrt * complex_normal_vector(&mut rng, m);
                    let psi = make_pilots(t_dl, m, 1.0, rng.random()).psi;
                    let noise = complex_normal_vector(&mut rng, t_dl).scale(n0.sqrt());
                    let y = &psi * &h + noise;
                    let est = lmmse_estimate(&psi, &prior, &y, n0).expect("estimate");
                    total += (est - h).norm_squared();
                }
                mse.push(total / trials as f64);
            }
            let kind = if full { "full" } else { "diagonal" };
            for (i, w) in mse.windows(2).enumerate() {
                let ratio = w[1] / w[0];
                v.check(
                    (0.06..=0.17).contains(&ratio),
                    format!("{label}, {kind} prior, {} -> {} dB: MSE ratio {ratio:.4}", snrs_db[i], snrs_db[i + 1]),
                );
            }
        }
    }
    v.note(format!("{trials} trials per point"));
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new();
    let spec = MlpSpec::new(5, vec![6, 7, 4]).expect("spec");
    let h = 1e-5;
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let params = MlpParams::glorot(&spec, 0x9c_0000 + seed);
        let mut rng = rng_from_seed(0x9c_1000 + seed);
        let x: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut t: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let sum: f64 = t.iter().sum();
        t.iter_mut().for_each(|p| *p /= sum);
        let analytic = backward(&params, &x, &t).expect("backward").to_flat();
        let base = params.to_flat();
        let loss_at = |i: usize, delta: f64| {
            let mut p = params.clone();
            let mut idx = 0;
            p.for_each_mut(|w| {
                if idx == i {
                    *w = base[i] + delta;
                }
                idx += 1;
            });
            loss_l1(&forward(&p, &x).expect("forward"), &t).expect("loss")
        };
        let numeric: Vec<f64> = (0..base.len()).map(|i| (loss_at(i, h) - loss_at(i, -h)) / (2.0 * h)).collect();
        let scale = analytic.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        let err = analytic.iter().zip(&numeric).fold(0.0f64, |a, (g, n)| a.max((g - n).abs()));
        worst = worst.max(err / scale);
    }
    v.check(worst < 1e-4, format!("max_i |g_i - fd_i| / max_i |g_i| = {worst:.2e} over 20 networks, step {h:e}"));
    v
}

fn criterion_10() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let cases = 1000;
    let mut worst = [0.0f64; 6];
    let names = [
        "softmax sum - 1",
        "toeplitzify idempotence",
        "B B^H - I",
        "beam-gain sum - trace",
        "eta outside [0, 1]",
        "1 - eta_M",
    ];
    let spec = GroupSparseAsfSpec::default();
    for case in 0..cases {
        let mut rng = rng_from_seed(0xacca_0000 + case);
        let m = rng.random_range(2..=16);
        let model = UlaModel::with_default_carriers(m, 4 * m).expect("model");

        let net = MlpSpec::new(m, vec![8, 4 * m]).expect("spec");
        let x: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let out = forward(&MlpParams::glorot(&net, rng.random()), &x).expect("forward");
        let neg = out.iter().any(|&p| p < 0.0);
        worst[0] = worst[0].max((out.iter().sum::<f64>() - 1.0).abs() + if neg { 1.0 } else { 0.0 });

        let n = rng.random_range(1..=2 * m);
        let snapshots = complex_normal_matrix(&mut rng, m, n);
        let once = toeplitzify(&(&snapshots * snapshots.adjoint())).expect("toeplitzify");
        let twice = toeplitzify(&once.to_matrix()).expect("toeplitzify");
        worst[1] = worst[1].max((once.first_column() - twice.first_column()).norm());

        let count = rng.random_range(1..=m);
        let beams = sample(&mut rng, m, count).into_vec();
        let b = beam_selection_matrix(m, &beams);
        worst[2] = worst[2].max((&b * b.adjoint() - CMatrix::identity(count, count)).norm());

        let a = sample_asf(&spec, &model, rng.random()).expect("asf");
        let e = sample_asf(&spec, &model, rng.random()).expect("asf");
        let truth = synth_cov(&model, &a, Carrier::Downlink).expect("cov");
        let est = synth_cov(&model, &e, Carrier::Downlink).expect("cov");
        let gains = circulant_gains(std::slice::from_ref(&truth)).expect("gains");
        worst[3] = worst[3].max((gains.raw_total(0) - truth.trace()).abs() / truth.trace());

        let eta = efficiency_profile(&truth, &est).expect("profile");
        worst[4] = worst[4].max(eta.iter().map(|&q| (-q).max(q - 1.0).max(0.0)).fold(0.0, f64::max));
        worst[5] = worst[5].max((1.0 - eta[m - 1]).abs());
    }
    for (name, w) in names.iter().zip(worst) {
        v.check(w < 1e-9, format!("{name}: worst {w:.2e}"));
    }
    let elapsed = start.elapsed();
    v.check(elapsed <= Duration::from_secs(60), format!("{cases} cases in {:.1} s", elapsed.as_secs_f64()));
    v
}

fn main() -> ExitCode {
    let requested: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |n: usize| requested.is_empty() || requested.contains(&n);
    let shared = Shared {
        cfg: ExperimentConfig::default(),
        mlp: OnceCell::new(),
        udct: OnceCell::new(),
        rates: OnceCell::new(),
    };
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    let mut report = |n: usize, title: &'static str, verdict: Verdict| {
        println!("criterion {n:2}: {} {title}", if verdict.pass { "PASS" } else { "FAIL" });
        for d in &verdict.details {
            println!("      {d}");
        }
        results.push((n, title, verdict));
    };
    if wanted(3) {
        report(3, "MILP matches exhaustive search", criterion_3());
    }
    if wanted(4) {
        report(4, "submatrix rank equals maximum matching", criterion_4());
    }
    if wanted(6) {
        report(6, "zero-forcing nulls interference", criterion_6());
    }
    if wanted(8) {
        report(8, "LMMSE error follows 1/SNR", criterion_8());
    }
    if wanted(9) {
        report(9, "backpropagation matches finite differences", criterion_9());
    }
    if wanted(10) {
        report(10, "structural invariants", criterion_10());
    }
    if wanted(1) {
        report(1, "MLP beats NNLS and l2 on UDCT distortion", criterion_1(&shared));
    }
    if wanted(2) {
        report(2, "distortion falls with more UL samples", criterion_2(&shared));
    }
    if wanted(5) || wanted(7) {
        let (c5, c7) = criterion_5_and_7(&shared);
        if wanted(5) {
            report(5, "sparsifying precoder beats statistical beamforming", c5);
        }
        if wanted(7) {
            report(7, "transmit power equals P_dl", c7);
        }
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
