//! Experiment runner: deterministic Monte Carlo sweeps over `(gamma, n)`,
//! bound-vs-empirical comparisons, and plot-ready CSV/JSON output.
//!
//! Per-trial RNG streams are derived from the master seed by a documented
//! splitting rule (never sequential draws from one stream), so any worker
//! count produces byte-identical records.

use crate::analysis;
use crate::builder::{self, Instance};
use crate::geometry::Partition;
use crate::propagation::{DcParams, ModelKind, PropagationModel, RadioParams};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// How per-trial `(C, D, P)` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ParamMode {
    /// Derive from the scaling analysis for each `(gamma, n)`.
    Theorem,
    /// Fixed user-supplied values.
    Explicit { c: f64, d: f64, p: f64 },
}

/// Full description of one sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
    pub ns: Vec<u64>,
    pub trials: u32,
    pub alpha: f64,
    pub beta: f64,
    pub n0: f64,
    pub w_bits: f64,
    pub model: ModelKind,
    pub master_seed: u64,
    pub mode: ParamMode,
    /// Worker threads; 0 means the `SCALENET_WORKERS` env var or all cores.
    #[serde(default)]
    pub workers: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.gammas.is_empty() || self.ns.is_empty() {
            return Err(HarnessError::Config(
                "gamma and n lists must be non-empty".into(),
            ));
        }
        if self.trials < 1 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0 && self.n0 >= 0.0 && self.w_bits > 0.0) {
            return Err(HarnessError::Config(
                "alpha, beta, w_bits must be positive and n0 nonnegative".into(),
            ));
        }
        if let ParamMode::Explicit { c, d, p } = self.mode {
            if !(c > 0.0 && d > 0.0 && p > 0.0) {
                return Err(HarnessError::Config(
                    "explicit mode requires positive C, D, P".into(),
                ));
            }
        }
        if self.ns.iter().any(|&n| n < 2) {
            return Err(HarnessError::Config("every n must be at least 2".into()));
        }
        Ok(())
    }
}

/// One trial's measurements. Optional fields stay empty when the trial was
/// infeasible or its parameters were refused.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub gamma: f64,
    pub n: u64,
    pub trial: u32,
    pub seed: u64,
    pub feasible: bool,
    pub l: Option<u64>,
    pub s: Option<u64>,
    pub m: Option<u64>,
    pub p: Option<u64>,
    pub lambda: Option<f64>,
    pub dc_success: Option<bool>,
    pub sinr_success: Option<bool>,
    pub min_slot_sinr: Option<f64>,
    pub max_hop_length: Option<f64>,
    pub load_bound: Option<f64>,
    pub txset_bound: Option<f64>,
    pub throughput_floor: Option<f64>,
}

pub const CSV_HEADER: &str = "gamma,n,trial,seed,feasible,L,S,M,p,lambda,dc_success,sinr_success,min_slot_sinr,max_hop_length,load_bound,txset_bound,throughput_floor";

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_real(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn fmt_opt_int(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_opt_bool(x: Option<bool>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        [
            fmt_real(self.gamma),
            self.n.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.feasible.to_string(),
            fmt_opt_int(self.l),
            fmt_opt_int(self.s),
            fmt_opt_int(self.m),
            fmt_opt_int(self.p),
            fmt_opt_real(self.lambda),
            fmt_opt_bool(self.dc_success),
            fmt_opt_bool(self.sinr_success),
            fmt_opt_real(self.min_slot_sinr),
            fmt_opt_real(self.max_hop_length),
            fmt_opt_real(self.load_bound),
            fmt_opt_real(self.txset_bound),
            fmt_opt_real(self.throughput_floor),
        ]
        .join(",")
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seed-splitting rule recorded in sweep metadata.
pub const SEED_RULE: &str = "trial_seed = sm(sm(sm(sm(master) ^ (gamma_idx+1)*0xA24BAED4963EE407) ^ (n_idx+1)*0x9FB21C651E98DF25) ^ (trial+1)*0xD6E8FEB86659FD93) with sm = splitmix64";

pub fn derive_trial_seed(master: u64, gamma_idx: u64, n_idx: u64, trial: u64) -> u64 {
    let mut s = splitmix64(master);
    s = splitmix64(s ^ gamma_idx.wrapping_add(1).wrapping_mul(0xA24BAED4963EE407));
    s = splitmix64(s ^ n_idx.wrapping_add(1).wrapping_mul(0x9FB21C651E98DF25));
    s = splitmix64(s ^ trial.wrapping_add(1).wrapping_mul(0xD6E8FEB86659FD93));
    s
}

/// Aggregates for one `(gamma, n)` grid point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellSummary {
    pub gamma: f64,
    pub n: u64,
    pub trials: u32,
    pub feasible: u32,
    pub feasibility_rate: f64,
    pub dc_success_rate: f64,
    pub sinr_success_rate: f64,
    pub mean_lambda: Option<f64>,
    pub min_lambda: Option<f64>,
    pub median_lambda: Option<f64>,
    pub frac_l_within_bound: Option<f64>,
    pub frac_s_within_bound: Option<f64>,
    pub param_error: Option<String>,
    pub mean_wall_time_s: f64,
}

/// Per-gamma scaling fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaSummary {
    pub gamma: f64,
    /// Log-log slope of median lambda against n, over points with data.
    pub slope_median_lambda: Option<f64>,
    /// Same slope after multiplying lambda by sqrt(ln n).
    pub slope_median_lambda_lnadj: Option<f64>,
    /// Points (n, median lambda) that entered the fit.
    pub fit_points: Vec<(u64, f64)>,
    /// Set when a success rate decreases with n beyond noise; flagged only.
    pub monotonicity_flags: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub seed_rule: String,
    pub cells: Vec<CellSummary>,
    pub gammas: Vec<GammaSummary>,
    pub total_wall_time_s: f64,
}

/// Everything a sweep produces; `csv` is byte-deterministic for a fixed
/// master seed regardless of worker count.
pub struct SweepOutput {
    pub csv: String,
    pub summary: SweepSummary,
    pub records: Vec<ExperimentRecord>,
}

struct CellParams {
    dc: Option<DcParams>,
    power: f64,
    partition: Option<Arc<Partition>>,
    error: Option<String>,
}

fn cell_params(config: &SweepConfig, n: u64, gamma: f64) -> CellParams {
    let picked = match config.mode {
        ParamMode::Explicit { c, d, p } => Ok((c, d, p)),
        ParamMode::Theorem => {
            analysis::theorem_params(n, gamma, config.alpha, config.beta, config.n0)
                .map(|t| (t.c, t.d, t.p))
                .map_err(|e| e.to_string())
        }
    };
    match picked {
        Err(error) => CellParams {
            dc: None,
            power: 0.0,
            partition: None,
            error: Some(error),
        },
        Ok((c, d, p)) => {
            let probe = Instance {
                n,
                gamma,
                seed: 0,
                disk: crate::geometry::Disk::new((n as f64).powf(gamma)),
                nodes: vec![],
                sd_pairs: vec![],
            };
            match builder::route_partition(&probe, c) {
                Err(e) => CellParams {
                    dc: None,
                    power: 0.0,
                    partition: None,
                    error: Some(e.to_string()),
                },
                Ok(part) => CellParams {
                    dc: Some(DcParams::new(c, d)),
                    power: p,
                    partition: Some(Arc::new(part)),
                    error: None,
                },
            }
        }
    }
}

fn run_trial(
    config: &SweepConfig,
    params: &CellParams,
    gamma: f64,
    n: u64,
    trial: u32,
    seed: u64,
) -> ExperimentRecord {
    let mut rec = ExperimentRecord {
        gamma,
        n,
        trial,
        seed,
        feasible: false,
        l: None,
        s: None,
        m: None,
        p: None,
        lambda: None,
        dc_success: None,
        sinr_success: None,
        min_slot_sinr: None,
        max_hop_length: None,
        load_bound: None,
        txset_bound: None,
        throughput_floor: None,
    };
    let (Some(dc), Some(partition)) = (params.dc.as_ref(), params.partition.as_ref()) else {
        return rec;
    };
    rec.load_bound = Some(analysis::load_bound(n, gamma, dc.c));
    rec.txset_bound = Some(analysis::txset_bound(n, gamma, dc.c, dc.d));
    rec.throughput_floor = Some(analysis::throughput_floor(n, gamma, dc.c, dc.d, config.w_bits));

    let instance = match builder::sample_instance(n, gamma, seed) {
        Ok(i) => i,
        Err(_) => return rec,
    };
    let outcome = match builder::build_in(&instance, dc, config.w_bits, partition) {
        Ok(o) => o,
        Err(_) => return rec,
    };
    rec.feasible = outcome.report.feasible;
    rec.l = outcome.report.l;
    rec.s = Some(outcome.report.s);
    rec.m = Some(outcome.report.m);
    rec.p = outcome.report.p;
    rec.lambda = outcome.report.lambda;
    rec.max_hop_length = outcome.report.max_hop_length;
    if let Some(system) = &outcome.system {
        let dc_verdict = builder::verify_dc_success(system, &instance, dc);
        rec.dc_success = Some(dc_verdict.ok);
        let radio = RadioParams::new(params.power.max(f64::MIN_POSITIVE), config.n0, config.beta);
        let model = PropagationModel {
            kind: config.model,
            alpha: config.alpha,
        };
        if let Ok(sv) = builder::verify_sinr_success(system, &instance, &radio, &model) {
            rec.sinr_success = Some(sv.ok);
            let min = sv.per_slot_min.iter().copied().fold(f64::INFINITY, f64::min);
            if min.is_finite() {
                rec.min_slot_sinr = Some(min);
            }
        }
    }
    rec
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Runs the whole sweep. Trials execute in parallel up to the configured
/// worker count; records are ordered by `(gamma, n, trial)` regardless of
/// completion order.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput, HarnessError> {
    config.validate()?;
    let started = std::time::Instant::now();
    let workers = effective_workers(config.workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;

    let mut records: Vec<ExperimentRecord> = Vec::new();
    let mut cells: Vec<CellSummary> = Vec::new();
    for (gi, &gamma) in config.gammas.iter().enumerate() {
        for (ni, &n) in config.ns.iter().enumerate() {
            let cell_start = std::time::Instant::now();
            let params = cell_params(config, n, gamma);
            let trial_records: Vec<ExperimentRecord> = pool.install(|| {
                use rayon::prelude::*;
                (0..config.trials)
                    .into_par_iter()
                    .map(|trial| {
                        let seed =
                            derive_trial_seed(config.master_seed, gi as u64, ni as u64, trial as u64);
                        run_trial(config, &params, gamma, n, trial, seed)
                    })
                    .collect()
            });
            cells.push(summarize_cell(
                gamma,
                n,
                &trial_records,
                params.error.clone(),
                cell_start.elapsed().as_secs_f64() / config.trials.max(1) as f64,
            ));
            records.extend(trial_records);
        }
    }

    let gammas = config
        .gammas
        .iter()
        .map(|&gamma| summarize_gamma(gamma, &cells))
        .collect();

    let mut csv = String::with_capacity(64 * records.len() + 128);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for rec in &records {
        csv.push_str(&rec.csv_row());
        csv.push('\n');
    }

    let summary = SweepSummary {
        config: config.clone(),
        seed_rule: SEED_RULE.to_string(),
        cells,
        gammas,
        total_wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok(SweepOutput {
        csv,
        summary,
        records,
    })
}

fn effective_workers(configured: usize) -> usize {
    if configured > 0 {
        return configured;
    }
    std::env::var("SCALENET_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|v| v.get())
                .unwrap_or(1)
        })
}

fn summarize_cell(
    gamma: f64,
    n: u64,
    records: &[ExperimentRecord],
    param_error: Option<String>,
    mean_wall_time_s: f64,
) -> CellSummary {
    let trials = records.len() as u32;
    let feasible = records.iter().filter(|r| r.feasible).count() as u32;
    let mut lambdas: Vec<f64> = records.iter().filter_map(|r| r.lambda).collect();
    lambdas.sort_by(|a, b| a.total_cmp(b));
    let dc_ok = records.iter().filter(|r| r.dc_success == Some(true)).count();
    let sinr_ok = records.iter().filter(|r| r.sinr_success == Some(true)).count();
    let (mut l_ok, mut l_tot, mut s_ok, mut s_tot) = (0u32, 0u32, 0u32, 0u32);
    for r in records.iter().filter(|r| r.feasible) {
        if let (Some(l), Some(bound)) = (r.l, r.load_bound) {
            l_tot += 1;
            if (l as f64) <= bound {
                l_ok += 1;
            }
        }
        if let (Some(s), Some(bound)) = (r.s, r.txset_bound) {
            s_tot += 1;
            if (s as f64) <= bound {
                s_ok += 1;
            }
        }
    }
    let rate = |num: u32, den: u32| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    CellSummary {
        gamma,
        n,
        trials,
        feasible,
        feasibility_rate: rate(feasible, trials),
        dc_success_rate: rate(dc_ok as u32, feasible),
        sinr_success_rate: rate(sinr_ok as u32, feasible),
        mean_lambda: if lambdas.is_empty() {
            None
        } else {
            Some(lambdas.iter().sum::<f64>() / lambdas.len() as f64)
        },
        min_lambda: lambdas.first().copied(),
        median_lambda: if lambdas.is_empty() {
            None
        } else {
            Some(median(&lambdas))
        },
        frac_l_within_bound: if l_tot > 0 { Some(rate(l_ok, l_tot)) } else { None },
        frac_s_within_bound: if s_tot > 0 { Some(rate(s_ok, s_tot)) } else { None },
        param_error,
        mean_wall_time_s,
    }
}

fn summarize_gamma(gamma: f64, cells: &[CellSummary]) -> GammaSummary {
    let mine: Vec<&CellSummary> = cells.iter().filter(|c| c.gamma == gamma).collect();
    let fit_points: Vec<(u64, f64)> = mine
        .iter()
        .filter_map(|c| c.median_lambda.map(|l| (c.n, l)))
        .collect();
    let log_points: Vec<(f64, f64)> = fit_points
        .iter()
        .filter(|&&(_, l)| l > 0.0)
        .map(|&(n, l)| ((n as f64).ln(), l.ln()))
        .collect();
    let adj_points: Vec<(f64, f64)> = fit_points
        .iter()
        .filter(|&&(_, l)| l > 0.0)
        .map(|&(n, l)| {
            let nf = n as f64;
            (nf.ln(), (l * nf.ln().sqrt()).ln())
        })
        .collect();
    let mut monotonicity_flags = Vec::new();
    let mut prev: Option<(u64, f64)> = None;
    for c in &mine {
        if let Some((pn, pr)) = prev {
            // Allow three binomial standard errors of slack before flagging.
            let se = (pr * (1.0 - pr) / c.trials.max(1) as f64).sqrt();
            if c.feasibility_rate + 3.0 * se < pr {
                monotonicity_flags.push(format!(
                    "feasibility rate dropped from {pr:.3} at n={pn} to {:.3} at n={}",
                    c.feasibility_rate, c.n
                ));
            }
        }
        prev = Some((c.n, c.feasibility_rate));
    }
    GammaSummary {
        gamma,
        slope_median_lambda: least_squares_slope(&log_points),
        slope_median_lambda_lnadj: least_squares_slope(&adj_points),
        fit_points,
        monotonicity_flags,
    }
}

/// Writes `records.csv` and `summary.json` under `dir`.
pub fn write_outputs(output: &SweepOutput, dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("records.csv"), &output.csv)?;
    let json = serde_json::to_string_pretty(&output.summary)?;
    std::fs::write(dir.join("summary.json"), json)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(workers: usize) -> SweepConfig {
        SweepConfig {
            gammas: vec![0.0],
            ns: vec![8, 12],
            trials: 3,
            alpha: 3.0,
            beta: 1.0,
            n0: 1.0,
            w_bits: 1.0,
            model: ModelKind::B,
            master_seed: 99,
            mode: ParamMode::Explicit { c: 0.25, d: 1.0, p: 10.0 },
            workers,
        }
    }

    #[test]
    fn csv_is_deterministic_across_worker_counts() {
        let out1 = run_sweep(&tiny_config(1)).unwrap();
        let out4 = run_sweep(&tiny_config(4)).unwrap();
        assert_eq!(out1.csv, out4.csv);
        let again = run_sweep(&tiny_config(1)).unwrap();
        assert_eq!(out1.csv, again.csv);
    }

    #[test]
    fn rows_cover_the_whole_grid() {
        let out = run_sweep(&tiny_config(2)).unwrap();
        assert_eq!(out.records.len(), 2 * 3);
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 6);
        // Ordered by (gamma, n, trial).
        let mut keys: Vec<(u64, u32)> = out.records.iter().map(|r| (r.n, r.trial)).collect();
        let sorted = {
            let mut k = keys.clone();
            k.sort_unstable();
            k
        };
        assert_eq!(keys, sorted);
        keys.dedup();
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn lambda_times_period_is_w() {
        let mut config = tiny_config(2);
        config.w_bits = 2.5;
        let out = run_sweep(&config).unwrap();
        for rec in &out.records {
            if let (Some(lambda), Some(p)) = (rec.lambda, rec.p) {
                assert!((lambda * p as f64 - config.w_bits).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seed_rule_spreads_trials() {
        let a = derive_trial_seed(1, 0, 0, 0);
        let b = derive_trial_seed(1, 0, 0, 1);
        let c = derive_trial_seed(1, 0, 1, 0);
        let d = derive_trial_seed(1, 1, 0, 0);
        let e = derive_trial_seed(2, 0, 0, 0);
        let all = [a, b, c, d, e];
        let mut uniq = all.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), all.len());
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        let mut c = tiny_config(1);
        c.trials = 0;
        assert!(run_sweep(&c).is_err());
        let mut c = tiny_config(1);
        c.ns.clear();
        assert!(run_sweep(&c).is_err());
        let mut c = tiny_config(1);
        c.mode = ParamMode::Explicit { c: -1.0, d: 1.0, p: 1.0 };
        assert!(run_sweep(&c).is_err());
    }

    #[test]
    fn real_formatting_has_17_significant_digits() {
        assert_eq!(fmt_real(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_real(1.0 / 3.0), "3.3333333333333331e-1");
    }

    #[test]
    fn slope_fit_recovers_power_laws() {
        let points: Vec<(f64, f64)> = [200u64, 400, 800, 1600]
            .iter()
            .map(|&n| {
                let nf = n as f64;
                (nf.ln(), (3.0 / nf).ln())
            })
            .collect();
        let slope = least_squares_slope(&points).unwrap();
        assert!((slope + 1.0).abs() < 1e-12);
        assert!(least_squares_slope(&points[..1]).is_none());
    }

    fn synthetic_cell(n: u64, median_lambda: f64, feasibility: f64) -> CellSummary {
        CellSummary {
            gamma: 0.5,
            n,
            trials: 100,
            feasible: (feasibility * 100.0) as u32,
            feasibility_rate: feasibility,
            dc_success_rate: 1.0,
            sinr_success_rate: 1.0,
            mean_lambda: Some(median_lambda),
            min_lambda: Some(median_lambda),
            median_lambda: Some(median_lambda),
            frac_l_within_bound: Some(1.0),
            frac_s_within_bound: Some(1.0),
            param_error: None,
            mean_wall_time_s: 0.0,
        }
    }

    #[test]
    fn gamma_summary_fits_median_lambda_and_flags_rate_drops() {
        // lambda = 1/sqrt(n ln n): dividing out sqrt(ln n) leaves slope -1/2.
        let cells: Vec<CellSummary> = [100u64, 400, 1600, 6400]
            .iter()
            .map(|&n| {
                let nf = n as f64;
                synthetic_cell(n, 1.0 / (nf * nf.ln()).sqrt(), 1.0)
            })
            .collect();
        let g = summarize_gamma(0.5, &cells);
        assert!((g.slope_median_lambda_lnadj.unwrap() + 0.5).abs() < 1e-9);
        assert!(g.slope_median_lambda.unwrap() < -0.5);
        assert!(g.monotonicity_flags.is_empty());

        // A large feasibility drop gets flagged (but never fails the run).
        let cells = vec![synthetic_cell(100, 0.1, 0.9), synthetic_cell(200, 0.05, 0.3)];
        let g = summarize_gamma(0.5, &cells);
        assert_eq!(g.monotonicity_flags.len(), 1);
    }

    #[test]
    fn theorem_mode_refusal_is_recorded_not_fatal() {
        let config = SweepConfig {
            gammas: vec![0.5],
            ns: vec![64],
            trials: 2,
            alpha: 3.0,
            beta: 1.0,
            n0: 1.0,
            w_bits: 1.0,
            model: ModelKind::B,
            master_seed: 5,
            mode: ParamMode::Theorem,
            workers: 1,
        };
        let out = run_sweep(&config).unwrap();
        assert_eq!(out.records.len(), 2);
        assert!(out.records.iter().all(|r| !r.feasible));
        assert!(out.summary.cells[0].param_error.is_some());
    }
}
