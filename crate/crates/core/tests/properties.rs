//! Randomized invariants across modules.

use fddmimo_core::array::{sample_asf, synth_cov, toeplitzify, Carrier, GroupSparseAsfSpec, GroupWeights, UlaModel};
use fddmimo_core::experiment::{ul_observation, ExperimentConfig};
use fddmimo_core::linalg::{hermitian_eigen, CMatrix};
use fddmimo_core::link::{max_relative_interference, zf_precoder};
use fddmimo_core::milp::{assignment_feasible, max_matching, solve_milp, BeamGraph, MilpInstance, MilpOptions};
use fddmimo_core::nn::{forward, read_checkpoint, write_checkpoint, MlpParams, MlpSpec};
use fddmimo_core::precoder::{beam_selection_matrix, circulant_gains};
use fddmimo_core::rng::{complex_normal_matrix, rng_from_seed};
use fddmimo_core::udct::{estimate, kkt_residual, metric_nfd, metric_power_loss, nnls, NnlsOptions, UdctMethod, UdctOptions, UlDictionary};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn model(m: usize) -> UlaModel {
    UlaModel::with_default_carriers(m, 4 * m).unwrap()
}

fn asf_spec() -> impl Strategy<Value = GroupSparseAsfSpec> {
    (1usize..=4, 0.01f64..=2.0, any::<bool>()).prop_map(|(num_groups, max_width, equal)| GroupSparseAsfSpec {
        num_groups,
        max_width,
        weights: if equal { GroupWeights::Equal } else { GroupWeights::Random },
        ..Default::default()
    })
}

/// Largest matching by trying every beam-to-user assignment.
fn brute_matching(rows: usize, cols: usize, adj: &[bool], row: usize, used: &mut Vec<bool>) -> usize {
    if row == rows {
        return 0;
    }
    let mut best = brute_matching(rows, cols, adj, row + 1, used);
    for c in 0..cols {
        if adj[row * cols + c] && !used[c] {
            used[c] = true;
            best = best.max(1 + brute_matching(rows, cols, adj, row + 1, used));
            used[c] = false;
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_asfs_are_distributions(spec in asf_spec(), m in 2usize..=16, seed in any::<u64>()) {
        let asf = sample_asf(&spec, &model(m), seed).unwrap();
        prop_assert!(asf.weights().iter().all(|&w| w >= 0.0));
        prop_assert!((asf.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn covariances_are_unit_lead_and_psd(spec in asf_spec(), m in 2usize..=16, seed in any::<u64>(), dl in any::<bool>()) {
        let model = model(m);
        let carrier = if dl { Carrier::Downlink } else { Carrier::Uplink };
        let cov = synth_cov(&model, &sample_asf(&spec, &model, seed).unwrap(), carrier).unwrap();
        prop_assert!((cov.first_column()[0].re - 1.0).abs() < 1e-12);
        prop_assert!(cov.first_column()[0].im.abs() < 1e-12);
        let eig = hermitian_eigen(&cov.to_matrix());
        prop_assert!(eig.values.iter().all(|&l| l > -1e-9 * m as f64), "{:?}", eig.values);
    }

    #[test]
    fn toeplitzify_is_a_trace_preserving_projection(m in 1usize..=12, n in 1usize..=24, seed in any::<u64>()) {
        let x = complex_normal_matrix(&mut rng_from_seed(seed), m, n);
        let s = &x * x.adjoint();
        let t = toeplitzify(&s).unwrap();
        let trace: f64 = (0..m).map(|i| s[(i, i)].re).sum();
        prop_assert!((t.trace() - trace).abs() < 1e-10 * trace.max(1.0));
        let again = toeplitzify(&t.to_matrix()).unwrap();
        prop_assert!((again.first_column() - t.first_column()).norm() < 1e-12 * trace.max(1.0));
    }

    #[test]
    fn nnls_returns_nonnegative_stationary_points(rows in 2usize..=12, cols in 1usize..=10, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let a = DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
        let b = DVector::from_fn(rows, |_, _| rng.random_range(-1.0..1.0));
        let gram = a.transpose() * &a;
        let lipschitz = gram.symmetric_eigenvalues().max();
        let (x, report) = nnls(&a, &b, &gram, lipschitz, &NnlsOptions::default());
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        let grad = &gram * &x - a.transpose() * &b;
        prop_assert!(kkt_residual(&x, &grad) < 1e-6 * (1.0 + grad.amax()), "{report:?}");
    }

    #[test]
    fn every_estimator_returns_a_distribution(spec in asf_spec(), seed in any::<u64>(), n_over_m in 1usize..=4) {
        let model = model(8);
        let dict = UlDictionary::new(&model);
        let asf = sample_asf(&spec, &model, seed).unwrap();
        let sigma = ul_observation(&model, &asf, n_over_m, 20.0, seed ^ 1).unwrap();
        let params = MlpParams::glorot(&MlpSpec::for_array(8, 32), seed);
        let truth = synth_cov(&model, &asf, Carrier::Downlink).unwrap();
        for method in [UdctMethod::Nnls, UdctMethod::L2, UdctMethod::Mlp] {
            let est = estimate(method, &dict, Some(&params), &sigma, &UdctOptions::default()).unwrap();
            let w = est.asf_estimate.weights();
            prop_assert!(w.iter().all(|&v| v >= 0.0) && (w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!((est.dl_cov.first_column()[0].re - 1.0).abs() < 1e-9);
            let nfd = metric_nfd(&truth, &est.dl_cov).unwrap();
            let ple = metric_power_loss(&truth, &est.dl_cov).unwrap();
            prop_assert!(nfd >= 0.0 && nfd.is_finite());
            prop_assert!((0.0..=1.0).contains(&ple));
        }
        prop_assert_eq!(metric_nfd(&truth, &truth).unwrap(), 0.0);
    }

    #[test]
    fn beam_gains_sum_to_the_trace(spec in asf_spec(), m in 2usize..=16, seeds in prop::collection::vec(any::<u64>(), 1..5)) {
        let model = model(m);
        let covs: Vec<_> = seeds
            .iter()
            .map(|&s| synth_cov(&model, &sample_asf(&spec, &model, s).unwrap(), Carrier::Downlink).unwrap())
            .collect();
        let gains = circulant_gains(&covs).unwrap();
        for (k, c) in covs.iter().enumerate() {
            prop_assert!((gains.raw_total(k) - c.trace()).abs() < 1e-9 * c.trace());
        }
    }

    #[test]
    fn beam_selection_rows_are_orthonormal(m in 1usize..=32, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..32)) {
        let mut beams: Vec<usize> = picks.iter().map(|i| i.index(m)).collect();
        beams.sort_unstable();
        beams.dedup();
        let b = beam_selection_matrix(m, &beams);
        let n = beams.len();
        prop_assert!((&b * b.adjoint() - CMatrix::identity(n, n)).norm() < 1e-12 * n as f64);
    }

    #[test]
    fn matching_is_maximum(rows in 1usize..=6, cols in 1usize..=6, bits in any::<u64>()) {
        let adj: Vec<bool> = (0..rows * cols).map(|i| bits >> i & 1 == 1).collect();
        let matching = max_matching(rows, cols, &adj);
        let mut seen_r = vec![false; rows];
        let mut seen_c = vec![false; cols];
        for &(r, c) in &matching.pairs {
            prop_assert!(adj[r * cols + c] && !seen_r[r] && !seen_c[c]);
            seen_r[r] = true;
            seen_c[c] = true;
        }
        prop_assert_eq!(matching.size(), brute_matching(rows, cols, &adj, 0, &mut vec![false; cols]));
    }

    #[test]
    fn milp_solutions_are_feasible(nb in 1usize..=6, nu in 1usize..=5, seed in any::<u64>(), p0 in 0.0f64..1.0) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let weights: Vec<f64> = (0..nb * nu).map(|_| if rng.random_bool(0.5) { rng.random() } else { 0.0 }).collect();
        let graph = BeamGraph::with_relative_threshold(nb, nu, weights, 0.05).unwrap();
        let inst = MilpInstance::new(graph, rng.random_range(1..=nb), p0).unwrap();
        let sol = solve_milp(&inst, &MilpOptions::default()).unwrap();
        prop_assert!(assignment_feasible(&inst, &sol.x, &sol.y));
        let sub: Vec<bool> = (0..nb * nu).map(|i| inst.graph.adjacency()[i] && sol.x[i / nu] && sol.y[i % nu]).collect();
        prop_assert_eq!(sol.matching_size, max_matching(nb, nu, &sub).size());
    }

    #[test]
    fn zero_forcing_diagonalizes(m in 2usize..=16, seed in any::<u64>()) {
        let k = 1 + (seed as usize) % (m / 2).max(1);
        let h = complex_normal_matrix(&mut rng_from_seed(seed), m, k);
        let (v, _) = zf_precoder(&h).unwrap();
        prop_assert!(max_relative_interference(&(h.adjoint() * &v)) < 1e-9);
        for c in 0..k {
            prop_assert!((v.column(c).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn network_output_is_a_distribution(input in 1usize..=6, widths in prop::collection::vec(1usize..=8, 1..4), seed in any::<u64>(), scale in 0.0f64..50.0) {
        let spec = MlpSpec::new(input, widths).unwrap();
        let x: Vec<f64> = (0..input).map(|i| scale * ((i as f64 + 1.0) * 0.7).sin()).collect();
        let out = forward(&MlpParams::glorot(&spec, seed), &x).unwrap();
        prop_assert!(out.iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hidden_unit_permutation_leaves_output_unchanged(seed in any::<u64>(), shift in 1usize..6) {
        let spec = MlpSpec::new(3, vec![6, 5, 4]).unwrap();
        let p = MlpParams::glorot(&spec, seed);
        let mut q = p.clone();
        // relabel the units of the first hidden layer by a cyclic shift
        let perm: Vec<usize> = (0..6).map(|i| (i + shift) % 6).collect();
        q.layers[0].weights = DMatrix::from_fn(6, 3, |r, c| p.layers[0].weights[(perm[r], c)]);
        q.layers[0].bias = DVector::from_fn(6, |r, _| p.layers[0].bias[perm[r]]);
        q.layers[1].weights = DMatrix::from_fn(5, 6, |r, c| p.layers[1].weights[(r, perm[c])]);
        let x = [0.3, -1.2, 0.8];
        let a = forward(&p, &x).unwrap();
        let b = forward(&q, &x).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-14));
    }

    #[test]
    fn checkpoints_round_trip(input in 1usize..=5, widths in prop::collection::vec(1usize..=6, 1..4), seed in any::<u64>()) {
        let p = MlpParams::glorot(&MlpSpec::new(input, widths).unwrap(), seed);
        let mut bytes = Vec::new();
        write_checkpoint(&mut bytes, &p).unwrap();
        prop_assert_eq!(read_checkpoint(&mut bytes.as_slice()).unwrap(), p);
    }

    #[test]
    fn configs_round_trip(seed in any::<u64>(), users in 1usize..=16, samples in 1usize..=5000, lr in 0.0f64..2.0) {
        let mut cfg = ExperimentConfig { seed, ..Default::default() };
        cfg.precoder.users = users;
        cfg.dataset.samples = samples;
        cfg.training.learning_rate = lr;
        let text = cfg.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        prop_assert_eq!(back.to_toml().unwrap(), text);
        prop_assert_eq!(back, cfg);
    }
}
