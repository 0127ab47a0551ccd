//! `scalenet` command line: generate instances, build and verify systems,
//! demonstrate the adversarial converse, print analytic bounds, and run
//! Monte Carlo sweeps.
//!
//! Exit codes: 0 on success, 1 on usage or config errors, 2 when a build is
//! infeasible or a verification fails.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use scalenet::analysis;
use scalenet::builder::{self, Instance, System};
use scalenet::harness::{self, SweepConfig};
use scalenet::propagation::{self, DcParams, ModelKind, PropagationModel, RadioParams};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scalenet", version, about = "Multihop wireless scaling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModelArg {
    A,
    B,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::A => ModelKind::A,
            ModelArg::B => ModelKind::B,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Theorem,
    Explicit,
}

/// Radio and criterion parameters shared by build/verify/bounds.
#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Background noise power.
    #[arg(long, default_value_t = 1.0)]
    n0: f64,
    /// Packet size in bits per slot.
    #[arg(long = "w-bits", default_value_t = 1.0)]
    w_bits: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::B)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Theorem)]
    mode: ModeArg,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long = "D")]
    d: Option<f64>,
    #[arg(long = "P")]
    p: Option<f64>,
}

impl ParamArgs {
    /// Resolves `(C, D, P)` for an instance of the given size and exponent.
    fn resolve(&self, n: u64, gamma: f64) -> Result<(DcParams, f64)> {
        match self.mode {
            ModeArg::Explicit => {
                let c = self.c.ok_or_else(|| anyhow!("explicit mode needs --C"))?;
                let d = self.d.ok_or_else(|| anyhow!("explicit mode needs --D"))?;
                let p = self.p.ok_or_else(|| anyhow!("explicit mode needs --P"))?;
                Ok((DcParams::new(c, d), p))
            }
            ModeArg::Theorem => {
                let t = analysis::theorem_params(n, gamma, self.alpha, self.beta, self.n0)?;
                Ok((DcParams::new(t.c, t.d), t.p))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random instance and write it as JSON.
    Generate {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a system for an instance and write it as JSON.
    Build {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify compatibility and both success criteria of a built system.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Build the adversarial configuration and report its SINR against the bound.
    Adversarial {
        #[arg(long = "C")]
        c: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long)]
        m: usize,
    },
    /// Print the analytic bounds for one (n, gamma) point.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run a Monte Carlo sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
}

fn read_instance(path: &Path) -> Result<Instance> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&raw)?;
    Ok(Instance::from_json(value)?)
}

fn cmd_generate(n: u64, gamma: f64, seed: u64, out: &Path) -> Result<ExitCode> {
    let instance = builder::sample_instance(n, gamma, seed)?;
    let json = serde_json::to_string_pretty(&instance.to_json())?;
    std::fs::write(out, json).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "wrote instance: n = {n}, gamma = {gamma}, disk radius = {:.6}",
        instance.disk.radius
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(instance_path: &Path, params: &ParamArgs, out: &Path) -> Result<ExitCode> {
    let instance = read_instance(instance_path)?;
    let (dc, _power) = params.resolve(instance.n, instance.gamma)?;
    let outcome = builder::build(&instance, &dc, params.w_bits)?;
    println!("{}", serde_json::to_string_pretty(&outcome.report)?);
    match &outcome.system {
        Some(system) => {
            std::fs::write(out, serde_json::to_string_pretty(system)?)
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("infeasible: a cell intersected by some route holds no node");
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_verify(instance_path: &Path, system_path: &Path, params: &ParamArgs) -> Result<ExitCode> {
    let instance = read_instance(instance_path)?;
    let raw = std::fs::read_to_string(system_path)
        .with_context(|| format!("reading system {}", system_path.display()))?;
    let system: System = serde_json::from_str(&raw)?;
    let (dc, power) = params.resolve(instance.n, instance.gamma)?;

    let compatible = builder::verify_compatibility(&system);
    println!("compatibility: {}", if compatible { "pass" } else { "FAIL" });
    if !compatible {
        // The criteria checks presume one transmission per node per slot.
        return Ok(ExitCode::from(2));
    }

    let dc_verdict = builder::verify_dc_success(&system, &instance, &dc);
    for (i, ok) in dc_verdict.per_slot.iter().enumerate() {
        if !ok {
            println!("slot {}: DC fail", i + 1);
        }
    }
    println!(
        "distance criterion DC({:.4}, {:.4}): {}",
        dc.c,
        dc.d,
        if dc_verdict.ok { "pass" } else { "FAIL" }
    );

    let radio = RadioParams::new(power, params.n0, params.beta);
    let model = PropagationModel {
        kind: params.model.into(),
        alpha: params.alpha,
    };
    let sinr_verdict = builder::verify_sinr_success(&system, &instance, &radio, &model)?;
    let min_sinr = sinr_verdict
        .per_slot_min
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    println!("min slot SINR: {min_sinr:.6e} (threshold beta = {})", params.beta);
    for hop in sinr_verdict.failing.iter().take(10) {
        println!(
            "slot {}: hop {} -> {} SINR {:.6e} below beta",
            hop.slot, hop.tx, hop.rx, hop.sinr
        );
    }
    println!(
        "SINR criterion at P = {power:.6e}: {}",
        if sinr_verdict.ok { "pass" } else { "FAIL" }
    );

    if compatible && dc_verdict.ok && sinr_verdict.ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_adversarial(c: f64, d: f64, alpha: f64, beta: f64, m: usize) -> Result<ExitCode> {
    let dc = DcParams::new(c, d);
    let cfg = propagation::adversarial_config(&dc, m);
    assert!(propagation::dc_satisfied(&cfg, &dc));
    let model = PropagationModel {
        kind: ModelKind::B,
        alpha,
    };
    let exact = propagation::zero_noise_sinr(&cfg, &model)?;
    let bound = propagation::adversarial_sinr_bound(&dc, alpha, m);
    println!("interferers: {m}, rings: {}", propagation::adversarial_ring_counts(&dc, m).len());
    println!("zero-noise SINR (power cancels): {exact:.6e}");
    if bound.is_finite() {
        println!("closed-form SINR upper bound:   {bound:.6e}");
    } else {
        println!("closed-form SINR upper bound:   no bound (m < 63)");
    }
    if let Ok(threshold) = propagation::non_ensure_threshold(&dc, alpha) {
        println!("non-ensure threshold:           {threshold:.6e}");
    }
    println!(
        "beta = {beta}: SINR threshold {}",
        if exact < beta { "violated (criterion fails at every power)" } else { "met" }
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(n: u64, gamma: f64, params: &ParamArgs) -> Result<ExitCode> {
    let (dc, power) = params.resolve(n, gamma)?;
    println!("n = {n}, gamma = {gamma}, C = {:.6}, D = {:.6}, P = {power:.6e}", dc.c, dc.d);
    println!("load_bound:        {:.6e}", analysis::load_bound(n, gamma, dc.c));
    println!("txset_bound:       {:.6e}", analysis::txset_bound(n, gamma, dc.c, dc.d));
    println!(
        "throughput_floor:  {:.6e}",
        analysis::throughput_floor(n, gamma, dc.c, dc.d, params.w_bits)
    );
    println!(
        "growth_condition:  {:.6e}",
        analysis::growth_condition(n, gamma, dc.c)
    );
    println!(
        "gk_connectivity:   {:.6e}",
        analysis::gk_connectivity(n, gamma, dc.c)
    );
    println!(
        "constant identity: c_route * 18/pi = {:.6e} = c_thru = {:.6e}",
        analysis::C_ROUTE * 18.0 / std::f64::consts::PI,
        analysis::C_THROUGHPUT
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(
    config_path: &Path,
    workers: Option<usize>,
    trials: Option<u32>,
    out: &Path,
) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading config {}", config_path.display()))?;
    let mut config: SweepConfig = serde_json::from_str(&raw)?;
    if let Some(w) = workers {
        config.workers = w;
    }
    if let Some(t) = trials {
        config.trials = t;
    }
    let output = harness::run_sweep(&config)?;
    harness::write_outputs(&output, out)?;
    for cell in &output.summary.cells {
        println!(
            "gamma {:.3} n {:>7}: feasible {}/{}, dc {:.2}, sinr {:.2}, median lambda {}",
            cell.gamma,
            cell.n,
            cell.feasible,
            cell.trials,
            cell.dc_success_rate,
            cell.sinr_success_rate,
            cell.median_lambda
                .map(|l| format!("{l:.3e}"))
                .unwrap_or_else(|| "-".into())
        );
    }
    for g in &output.summary.gammas {
        println!(
            "gamma {:.3}: slope {}, ln-adjusted {}",
            g.gamma,
            g.slope_median_lambda
                .map(|s| format!("{s:.3}"))
                .unwrap_or_else(|| "-".into()),
            g.slope_median_lambda_lnadj
                .map(|s| format!("{s:.3}"))
                .unwrap_or_else(|| "-".into()),
        );
    }
    println!("wrote {} and {}", out.join("records.csv").display(), out.join("summary.json").display());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { n, gamma, seed, out } => cmd_generate(n, gamma, seed, &out),
        Command::Build { instance, params, out } => cmd_build(&instance, &params, &out),
        Command::Verify { instance, system, params } => cmd_verify(&instance, &system, &params),
        Command::Adversarial { c, d, alpha, beta, m } => cmd_adversarial(c, d, alpha, beta, m),
        Command::Bounds { n, gamma, params } => cmd_bounds(n, gamma, &params),
        Command::Sweep { config, workers, trials, out } => cmd_sweep(&config, workers, trials, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
