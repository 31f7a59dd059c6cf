//! `fddsim`: dataset generation, MLP training, UDCT evaluation, rate sweeps
//! and standalone MILP solves.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fddmimo_core::experiment::{
    eval_udct, generate_dataset, rate_sweep, read_dataset, summarize_rates, summarize_udct, train_model,
    write_dataset, write_rate_csv, write_udct_csv, EvalMethod, ExperimentConfig,
};
use fddmimo_core::milp::{read_instance, solve_milp, write_solution, MilpOptions};
use fddmimo_core::nn::{read_checkpoint, write_checkpoint, write_loss_trace, MlpParams};
use fddmimo_core::udct::UdctMethod;

#[derive(Debug, Parser)]
#[command(name = "fddsim", version, about = "FDD massive MIMO covariance and precoding simulator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// TOML experiment configuration; built-in desk-scale defaults otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the effective configuration as TOML.
    ShowConfig,
    /// Generate the labeled training set (`dataset.udds`).
    GenDataset,
    /// Train the MLP (`model.fddn`, `loss.csv`).
    Train {
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Continue from this checkpoint instead of a fresh initialization.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Schedule position to resume at: the number of epochs already run.
        #[arg(long, default_value_t = 0, requires = "resume")]
        start_epoch: usize,
    },
    /// UDCT distortion metrics over methods and sampling ratios (`udct.csv`).
    EvalUdct {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Comma-separated subset of nnls, l2, mlp, truth.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<EvalMethod>>,
    },
    /// Sum rate of the sparsifying precoder and statistical beamforming
    /// over pilot dimensions (`rate.csv`).
    RateSweep {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Solve one MILP instance file and print the solution.
    SolveMilp {
        instance: PathBuf,
        /// Time limit in seconds.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
    },
}

fn load_config(g: &Global) -> Result<ExperimentConfig> {
    let mut cfg = match &g.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(o) = &g.out {
        cfg.out_dir = o.clone();
    }
    if g.threads.is_some() {
        cfg.threads = g.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_checkpoint(path: &Path) -> Result<MlpParams> {
    let f = File::open(path).with_context(|| format!("opening checkpoint {}", path.display()))?;
    Ok(read_checkpoint(&mut BufReader::new(f))?)
}

/// The checkpoint, when some requested rows need one.
fn checkpoint_if(needed: bool, explicit: Option<&PathBuf>, cfg: &ExperimentConfig) -> Result<Option<MlpParams>> {
    if !needed {
        return Ok(None);
    }
    let path = explicit.cloned().unwrap_or_else(|| cfg.out_dir.join("model.fddn"));
    let params = load_checkpoint(&path)?;
    let spec = cfg.mlp_spec();
    if params.spec() != spec {
        bail!("checkpoint {} does not fit M = {}, G = {}", path.display(), cfg.model.antennas, cfg.model.grid);
    }
    Ok(Some(params))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.global)?;
    let out = cfg.out_dir.clone();
    match cli.command {
        Command::ShowConfig => print!("{}", cfg.to_toml()?),
        Command::GenDataset => {
            let start = Instant::now();
            let data = generate_dataset(&cfg)?;
            let mut w = create(&out, "dataset.udds")?;
            write_dataset(&mut w, &data)?;
            w.flush()?;
            log::info!("{} samples in {:.1} s", data.samples.len(), start.elapsed().as_secs_f64());
        }
        Command::Train { dataset, resume, start_epoch } => {
            let path = dataset.unwrap_or_else(|| out.join("dataset.udds"));
            let f = File::open(&path).with_context(|| format!("opening dataset {}", path.display()))?;
            let data = read_dataset(&mut BufReader::new(f))?;
            let model = cfg.ula()?;
            if data.model.num_antennas() != model.num_antennas() || data.model.grid_size() != model.grid_size() {
                bail!(
                    "dataset is for M = {}, G = {} but the config has M = {}, G = {}",
                    data.model.num_antennas(),
                    data.model.grid_size(),
                    model.num_antennas(),
                    model.grid_size()
                );
            }
            let init = match resume {
                Some(ck) => Some(load_checkpoint(&ck)?),
                None => None,
            };
            let outcome = train_model(&cfg, &data, init, start_epoch)?;
            if let Some(last) = outcome.trace.last() {
                log::info!("epoch {}: train {:.4}, validation {:?}", last.epoch, last.train_loss, last.val_loss);
            }
            let mut w = create(&out, "model.fddn")?;
            write_checkpoint(&mut w, &outcome.params)?;
            w.flush()?;
            let mut w = create(&out, "loss.csv")?;
            writeln!(w, "{}", cfg.csv_comment()?)?;
            write_loss_trace(&mut w, &outcome.trace)?;
            w.flush()?;
        }
        Command::EvalUdct { checkpoint, methods } => {
            let mut cfg = cfg;
            if let Some(m) = methods {
                cfg.udct.methods = m;
            }
            let params = checkpoint_if(cfg.udct.methods.contains(&EvalMethod::Mlp), checkpoint.as_ref(), &cfg)?;
            let rows = eval_udct(&cfg, params.as_ref())?;
            let mut w = create(&out, "udct.csv")?;
            write_udct_csv(&mut w, &cfg, &rows)?;
            w.flush()?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "method,n_over_m,e_nfd_mean,e_nfd_sem,e_ple_mean,e_ple_sem")?;
            for s in summarize_udct(&rows) {
                writeln!(
                    stdout,
                    "{},{},{:.6},{:.6},{:.6},{:.6}",
                    s.method, s.n_over_m, s.e_nfd.mean, s.e_nfd.sem, s.e_ple.mean, s.e_ple.sem
                )?;
            }
        }
        Command::RateSweep { checkpoint } => {
            let p = &cfg.precoder;
            let needed = p.estimator == UdctMethod::Mlp && p.methods.iter().any(|m| m.uses_estimates());
            let params = checkpoint_if(needed, checkpoint.as_ref(), &cfg)?;
            let rows = rate_sweep(&cfg, params.as_ref())?;
            let mut w = create(&out, "rate.csv")?;
            write_rate_csv(&mut w, &cfg, &rows)?;
            w.flush()?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "method,t_dl,sum_rate_mean,sum_rate_sem,mean_served")?;
            for s in summarize_rates(&rows) {
                writeln!(stdout, "{},{},{:.6},{:.6},{:.3}", s.method, s.t_dl, s.sum_rate.mean, s.sum_rate.sem, s.mean_served)?;
            }
        }
        Command::SolveMilp { instance, time_limit } => {
            if !(time_limit > 0.0 && time_limit.is_finite()) {
                bail!("time limit must be positive, got {time_limit}");
            }
            let f = File::open(&instance).with_context(|| format!("opening {}", instance.display()))?;
            let inst = read_instance(BufReader::new(f))?;
            let opts = MilpOptions {
                time_limit: Some(std::time::Duration::from_secs_f64(time_limit)),
                ..MilpOptions::default()
            };
            let sol = solve_milp(&inst, &opts)?;
            write_solution(&mut io::stdout().lock(), &sol)?;
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
