//! Reproducible Monte Carlo experiment recipes with CSV output.
//!
//! Each recipe sweeps one knob, runs seeded trials in parallel at every
//! sweep point, and emits one CSV table: per-trial rows first, aggregate
//! rows (means, standard deviations, or quantiles) after. A single failed
//! trial never aborts a sweep; it becomes an explicit row with an error
//! status and empty metric cells. Reruns with the same config are
//! byte-identical, which is why wall-clock runtime stays out of the CSV.

use crate::bounds::{
    l2_upper_thm1, linf_upper_thm1, shah_l2_bound, yan_linf_bound, BoundInputs, BoundValue,
};
use crate::ensemble::{add_mle_barbell, add_mle_island_chain, ClipBounds, SubgraphFit};
use crate::error::{BtlError, Result};
use crate::estimators::{d_2, d_infinity, fit, fit_tree_closed_form, FitConfig};
use crate::graph::{self, BridgeSpec, ComparisonGraph, IslandParams};
use crate::model::{
    linear_theta, shifted_island_theta, simulate, BtlParameters, ComparisonData,
};
use crate::rng::mix_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

/// The four built-in experiment recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    /// Joint MLE vs stitched per-island MLEs on an island chain, sweeping
    /// the between-island shift.
    IslandAdditivity,
    /// Ratio of the spectral sup-norm bound to the common-neighbor bound on
    /// barbell graphs, sweeping the clique size.
    BarbellRatio,
    /// Edge-gap vs global-gap Euclidean bounds on banded graphs, sweeping n.
    BandedCompare,
    /// Closed-form path MLE error quantiles, sweeping comparisons per edge.
    PathLSweep,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 4] = [
        ExperimentId::IslandAdditivity,
        ExperimentId::BarbellRatio,
        ExperimentId::BandedCompare,
        ExperimentId::PathLSweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::IslandAdditivity => "island-additivity",
            ExperimentId::BarbellRatio => "barbell-ratio",
            ExperimentId::BandedCompare => "banded-compare",
            ExperimentId::PathLSweep => "path-L-sweep",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = BtlError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "island-additivity" => Ok(Self::IslandAdditivity),
            "barbell-ratio" => Ok(Self::BarbellRatio),
            "banded-compare" => Ok(Self::BandedCompare),
            "path-L-sweep" => Ok(Self::PathLSweep),
            other => Err(BtlError::Validation(format!("unknown experiment: {other}"))),
        }
    }
}

/// Band-width rule for the banded-graph recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandRule {
    /// `k = ceil(sqrt(n))`.
    Sqrt,
    /// `k = ceil(n / ln n)`.
    NOverLog,
}

impl BandRule {
    pub fn band_width(self, n: usize) -> usize {
        let nf = n as f64;
        match self {
            BandRule::Sqrt => nf.sqrt().ceil() as usize,
            BandRule::NOverLog => (nf / nf.ln()).ceil() as usize,
        }
    }
}

/// One experiment run: which recipe, how many trials per sweep point, the
/// master seed, and the sweep grid. Scale knobs default to desk-size values
/// far below the original figures; override them to go bigger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub trials: usize,
    pub seed: u64,
    /// Sweep grid; integer-valued knobs (clique size, n, L) are rounded.
    pub sweep: Vec<f64>,
    /// Problem size knob; meaning depends on the recipe.
    pub n: Option<usize>,
    pub comparisons_per_edge: Option<u64>,
    pub kappa: Option<f64>,
    pub band_rule: BandRule,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId, trials: usize, seed: u64, sweep: Vec<f64>) -> Result<Self> {
        if trials == 0 {
            return Err(BtlError::Validation("trials must be >= 1".into()));
        }
        if sweep.is_empty() {
            return Err(BtlError::Validation("sweep must be nonempty".into()));
        }
        if sweep.iter().any(|v| !v.is_finite()) {
            return Err(BtlError::Validation("sweep values must be finite".into()));
        }
        Ok(Self {
            id,
            trials,
            seed,
            sweep,
            n: None,
            comparisons_per_edge: None,
            kappa: None,
            band_rule: BandRule::Sqrt,
        })
    }

    /// Desk-scale default sweep for each recipe.
    pub fn default_sweep(id: ExperimentId) -> Vec<f64> {
        match id {
            ExperimentId::IslandAdditivity => vec![0.0, 1.0, 2.0, 3.0],
            ExperimentId::BarbellRatio => vec![50.0, 100.0, 200.0, 400.0],
            ExperimentId::BandedCompare => vec![50.0, 100.0, 200.0],
            ExperimentId::PathLSweep => vec![1e2, 1e3, 1e4, 1e5],
        }
    }

    fn trial_seed(&self, sweep_index: usize, trial: usize) -> u64 {
        mix_seed(mix_seed(self.seed, sweep_index as u64), trial as u64)
    }
}

/// One (sweep value, trial, estimator) outcome.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub sweep_value: f64,
    pub trial: usize,
    pub estimator: &'static str,
    /// "ok", or a short failure token ("failed", "mle-nonexistent", "na").
    pub status: &'static str,
    pub linf_error: Option<f64>,
    pub l2_error: Option<f64>,
    /// Named bound values attached to the row.
    pub bounds: Vec<(&'static str, BoundValue)>,
    /// Wall time of the trial. Deliberately never serialized: CSV output
    /// must be byte-identical across reruns.
    pub runtime_s: f64,
}

/// A finished CSV table: header plus rows, all cells pre-formatted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// 17 significant digits: round-trips f64 exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_else(|| "NA".into())
}

fn fmt_bound(v: BoundValue) -> String {
    fmt_opt(v.value())
}

/// Thread pool honoring the `BTLRANK_THREADS` cap.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("BTLRANK_THREADS") {
        let k: usize = raw
            .parse()
            .map_err(|_| BtlError::Validation(format!("BTLRANK_THREADS must be a positive integer, got {raw:?}")))?;
        if k == 0 {
            return Err(BtlError::Validation("BTLRANK_THREADS must be >= 1".into()));
        }
        builder = builder.num_threads(k);
    }
    builder
        .build()
        .map_err(|e| BtlError::Numerical(format!("thread pool: {e}")))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile of a sorted sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Fit tolerance for Monte Carlo trials; looser than the library default
/// because statistical error dominates well before 1e-8.
const TRIAL_GRAD_TOL: f64 = 1e-6;

/// Run the configured experiment and return its CSV table.
pub fn run(config: &ExperimentConfig) -> Result<CsvTable> {
    match config.id {
        ExperimentId::IslandAdditivity => run_island_additivity(config),
        ExperimentId::BarbellRatio => run_barbell_ratio(config),
        ExperimentId::BandedCompare => run_banded_compare(config),
        ExperimentId::PathLSweep => run_path_l_sweep(config),
    }
}

fn errors_vs_truth(theta_hat: &BtlParameters, truth: &BtlParameters) -> (f64, f64) {
    (
        d_infinity(theta_hat.theta(), truth.theta()),
        d_2(theta_hat.theta(), truth.theta()),
    )
}

/// Joint regularized MLE vs stitched per-island MLEs on an island chain.
///
/// Sweep knob: the shift `s` subtracted from each successive island's
/// scores. Defaults: 3 islands of 50 nodes overlapping in 5, 10 comparisons
/// per edge, within-chain spread 2.2.
pub fn run_island_additivity(config: &ExperimentConfig) -> Result<CsvTable> {
    let n_island = config.n.unwrap_or(50);
    let params = IslandParams::new(3, n_island, (n_island / 10).max(2))?;
    let l = config.comparisons_per_edge.unwrap_or(10);
    let kappa = config.kappa.unwrap_or(2.2);
    let g = graph::island(params)?;
    let pool = thread_pool()?;

    let mut records: Vec<TrialRecord> = Vec::new();
    for (si, &s) in config.sweep.iter().enumerate() {
        let truth = shifted_island_theta(params, kappa, s)?;
        let trial_records: Vec<Vec<TrialRecord>> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    island_trial(config, &g, params, &truth, l, s, si, trial)
                })
                .collect()
        });
        records.extend(trial_records.into_iter().flatten());
    }

    let header = vec![
        "shift".into(),
        "trial".into(),
        "estimator".into(),
        "status".into(),
        "linf_error".into(),
        "l2_error".into(),
    ];
    let mut rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                fmt_float(r.sweep_value),
                r.trial.to_string(),
                r.estimator.into(),
                r.status.into(),
                fmt_opt(r.linf_error),
                fmt_opt(r.l2_error),
            ]
        })
        .collect();
    for &s in &config.sweep {
        for est in ["joint", "add"] {
            let ok: Vec<f64> = records
                .iter()
                .filter(|r| r.sweep_value == s && r.estimator == est && r.status == "ok")
                .filter_map(|r| r.linf_error)
                .collect();
            for (stat, v) in [
                ("mean", (!ok.is_empty()).then(|| mean(&ok))),
                ("std", (!ok.is_empty()).then(|| std_dev(&ok))),
            ] {
                rows.push(vec![
                    fmt_float(s),
                    stat.into(),
                    est.into(),
                    "aggregate".into(),
                    fmt_opt(v),
                    "NA".into(),
                ]);
            }
        }
    }
    Ok(CsvTable { header, rows })
}

#[allow(clippy::too_many_arguments)]
fn island_trial(
    config: &ExperimentConfig,
    g: &ComparisonGraph,
    params: IslandParams,
    truth: &BtlParameters,
    l: u64,
    s: f64,
    sweep_index: usize,
    trial: usize,
) -> Vec<TrialRecord> {
    let started = Instant::now();
    let make = |estimator: &'static str, outcome: Result<BtlParameters>| match outcome {
        Ok(theta_hat) => {
            let (linf, l2) = errors_vs_truth(&theta_hat, truth);
            TrialRecord {
                sweep_value: s,
                trial,
                estimator,
                status: "ok",
                linf_error: Some(linf),
                l2_error: Some(l2),
                bounds: vec![],
                runtime_s: started.elapsed().as_secs_f64(),
            }
        }
        Err(_) => TrialRecord {
            sweep_value: s,
            trial,
            estimator,
            status: "failed",
            linf_error: None,
            l2_error: None,
            bounds: vec![],
            runtime_s: started.elapsed().as_secs_f64(),
        },
    };

    let seed = config.trial_seed(sweep_index, trial);
    let data = match simulate(g, truth, l, seed) {
        Ok(d) => d,
        Err(_) => {
            return vec![
                make("joint", Err(BtlError::Numerical("simulation failed".into()))),
                make("add", Err(BtlError::Numerical("simulation failed".into()))),
            ]
        }
    };
    let fit_cfg = FitConfig::auto().grad_tol(TRIAL_GRAD_TOL);

    let joint = fit(&data, &fit_cfg).map(|f| f.theta_hat);

    let add = (|| -> Result<BtlParameters> {
        let mut fits = Vec::with_capacity(params.k);
        for k in 0..params.k {
            let block: Vec<usize> = params.block(k).collect();
            let local = data.induced(&block)?;
            let f = fit(&local, &fit_cfg)?;
            fits.push(SubgraphFit::new(block, f.theta_hat.theta().to_vec(), l)?);
        }
        add_mle_island_chain(&fits, params)
    })();

    vec![make("joint", joint), make("add", add)]
}

/// Ratio of the spectral sup-norm bound to the common-neighbor bound on
/// barbell graphs with random bridges of density `3 ln(n_s) / n_s`.
///
/// Sweep knob: the clique size `n_s`. Also records the realized error of
/// the regularized MLE.
pub fn run_barbell_ratio(config: &ExperimentConfig) -> Result<CsvTable> {
    let l = config.comparisons_per_edge.unwrap_or(10);
    let kappa = config.kappa.unwrap_or(1.0);
    let pool = thread_pool()?;

    let mut records: Vec<TrialRecord> = Vec::new();
    for (si, &sv) in config.sweep.iter().enumerate() {
        let n_s = sv.round() as usize;
        if n_s < 3 {
            return Err(BtlError::Validation("barbell sweep needs clique size >= 3".into()));
        }
        let p = (3.0 * (n_s as f64).ln() / n_s as f64).min(1.0);
        let trial_records: Vec<TrialRecord> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|trial| barbell_trial(config, n_s, p, l, kappa, si, trial))
                .collect()
        });
        records.extend(trial_records);
    }

    let header = vec![
        "n_s".into(),
        "trial".into(),
        "estimator".into(),
        "status".into(),
        "linf_error".into(),
        "l2_error".into(),
        "linf_upper".into(),
        "yan_linf".into(),
        "bound_ratio".into(),
    ];
    let bound_of = |r: &TrialRecord, name: &str| {
        r.bounds
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, v)| v)
            .unwrap_or(BoundValue::NotApplicable)
    };
    let ratio_of = |r: &TrialRecord| {
        match (bound_of(r, "linf_upper").value(), bound_of(r, "yan_linf").value()) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        }
    };
    let mut rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                fmt_float(r.sweep_value),
                r.trial.to_string(),
                r.estimator.into(),
                r.status.into(),
                fmt_opt(r.linf_error),
                fmt_opt(r.l2_error),
                fmt_bound(bound_of(r, "linf_upper")),
                fmt_bound(bound_of(r, "yan_linf")),
                fmt_opt(ratio_of(r)),
            ]
        })
        .collect();
    for &sv in &config.sweep {
        let at_sv: Vec<&TrialRecord> =
            records.iter().filter(|r| r.sweep_value == sv).collect();
        let ratios: Vec<f64> = at_sv.iter().filter_map(|r| ratio_of(r)).collect();
        let realized: Vec<f64> = at_sv
            .iter()
            .filter(|r| r.status == "ok")
            .filter_map(|r| r.linf_error)
            .collect();
        rows.push(vec![
            fmt_float(sv),
            "mean".into(),
            "regularized".into(),
            "aggregate".into(),
            fmt_opt((!realized.is_empty()).then(|| mean(&realized))),
            "NA".into(),
            "NA".into(),
            "NA".into(),
            fmt_opt((!ratios.is_empty()).then(|| mean(&ratios))),
        ]);
    }
    Ok(CsvTable { header, rows })
}

fn barbell_trial(
    config: &ExperimentConfig,
    n_s: usize,
    p: f64,
    l: u64,
    kappa: f64,
    sweep_index: usize,
    trial: usize,
) -> TrialRecord {
    let started = Instant::now();
    let seed = config.trial_seed(sweep_index, trial);
    let sv = n_s as f64;
    let fail = |started: &Instant| TrialRecord {
        sweep_value: sv,
        trial,
        estimator: "regularized",
        status: "failed",
        linf_error: None,
        l2_error: None,
        bounds: vec![],
        runtime_s: started.elapsed().as_secs_f64(),
    };
    let outcome = (|| -> Result<TrialRecord> {
        let g = graph::barbell(n_s, n_s, &BridgeSpec::Density(p), mix_seed(seed, 1))?;
        let truth = linear_theta(2 * n_s, kappa)?;
        let inputs = BoundInputs::from_graph(&g, &truth, l)?;
        let upper = linf_upper_thm1(&inputs)?;
        let yan = yan_linf_bound(&inputs);
        let data = simulate(&g, &truth, l, mix_seed(seed, 2))?;
        let f = fit(&data, &FitConfig::auto().grad_tol(TRIAL_GRAD_TOL))?;
        let (linf, l2) = errors_vs_truth(&f.theta_hat, &truth);
        Ok(TrialRecord {
            sweep_value: sv,
            trial,
            estimator: "regularized",
            status: "ok",
            linf_error: Some(linf),
            l2_error: Some(l2),
            bounds: vec![("linf_upper", BoundValue::Value(upper)), ("yan_linf", yan)],
            runtime_s: started.elapsed().as_secs_f64(),
        })
    })();
    outcome.unwrap_or_else(|_| fail(&started))
}

/// Edge-gap vs global-gap Euclidean bounds on banded graphs with
/// `kappa = ln n` and equal-spaced scores.
///
/// Sweep knob: the node count `n`. The band width follows the configured
/// rule (`ceil(sqrt(n))` by default).
pub fn run_banded_compare(config: &ExperimentConfig) -> Result<CsvTable> {
    let l = config.comparisons_per_edge.unwrap_or(10);
    let pool = thread_pool()?;

    let header = vec![
        "n".into(),
        "trial".into(),
        "estimator".into(),
        "status".into(),
        "l2_error".into(),
        "l2_upper_kappa_e".into(),
        "l2_upper_kappa".into(),
        "shah_l2".into(),
    ];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (si, &sv) in config.sweep.iter().enumerate() {
        let n = sv.round() as usize;
        if n < 4 {
            return Err(BtlError::Validation("banded sweep needs n >= 4".into()));
        }
        let k = config.band_rule.band_width(n);
        let g = graph::banded(n, k)?;
        let kappa = config.kappa.unwrap_or((n as f64).ln());
        let truth = linear_theta(n, kappa)?;
        let inputs = BoundInputs::from_graph(&g, &truth, l)?;
        let upper_edge = l2_upper_thm1(&inputs)?;
        // Same formula with the global gap in place of the edge gap.
        let mut coarse = inputs.clone();
        coarse.kappa_e = coarse.kappa;
        let upper_global = l2_upper_thm1(&coarse)?;
        let shah = shah_l2_bound(&inputs)?;

        let trial_errs: Vec<Option<f64>> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed = config.trial_seed(si, trial);
                    simulate(&g, &truth, l, seed)
                        .and_then(|d| fit(&d, &FitConfig::auto().grad_tol(TRIAL_GRAD_TOL)))
                        .map(|f| d_2(f.theta_hat.theta(), truth.theta()))
                        .ok()
                })
                .collect()
        });
        for (trial, err) in trial_errs.iter().enumerate() {
            rows.push(vec![
                fmt_float(sv),
                trial.to_string(),
                "regularized".into(),
                if err.is_some() { "ok".into() } else { "failed".to_string() },
                fmt_opt(*err),
                fmt_float(upper_edge),
                fmt_float(upper_global),
                fmt_float(shah),
            ]);
        }
        let ok: Vec<f64> = trial_errs.iter().flatten().copied().collect();
        rows.push(vec![
            fmt_float(sv),
            "mean".into(),
            "regularized".into(),
            "aggregate".into(),
            fmt_opt((!ok.is_empty()).then(|| mean(&ok))),
            fmt_float(upper_edge),
            fmt_float(upper_global),
            fmt_float(shah),
        ]);
    }
    Ok(CsvTable { header, rows })
}

/// Closed-form path MLE error quantiles over a sweep of comparisons per
/// edge, with an equal-gap score vector of spread 6.9 on a 50-node path by
/// default.
pub fn run_path_l_sweep(config: &ExperimentConfig) -> Result<CsvTable> {
    let n = config.n.unwrap_or(50);
    let kappa = config.kappa.unwrap_or(6.9);
    let g = graph::path(n)?;
    let truth = linear_theta(n, kappa)?;
    let pool = thread_pool()?;

    let header = vec![
        "L".into(),
        "trial".into(),
        "estimator".into(),
        "status".into(),
        "linf_error".into(),
    ];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (si, &sv) in config.sweep.iter().enumerate() {
        let l = sv.round() as u64;
        if l == 0 {
            return Err(BtlError::Validation("L sweep values must be >= 1".into()));
        }
        let outcomes: Vec<Result<f64>> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed = config.trial_seed(si, trial);
                    let data = simulate(&g, &truth, l, seed)?;
                    let f = fit_tree_closed_form(&data)?;
                    Ok(d_infinity(f.theta_hat.theta(), truth.theta()))
                })
                .collect()
        });
        for (trial, outcome) in outcomes.iter().enumerate() {
            let (status, err) = match outcome {
                Ok(e) => ("ok", Some(*e)),
                Err(BtlError::MleNonexistent) => ("mle-nonexistent", None),
                Err(_) => ("failed", None),
            };
            rows.push(vec![
                fmt_float(sv),
                trial.to_string(),
                "closed-form".into(),
                status.into(),
                fmt_opt(err),
            ]);
        }
        let mut ok: Vec<f64> = outcomes.iter().filter_map(|o| o.as_ref().ok()).copied().collect();
        ok.sort_by(|a, b| a.total_cmp(b));
        for (stat, q) in [("q05", 0.05), ("q50", 0.5), ("q95", 0.95)] {
            rows.push(vec![
                fmt_float(sv),
                stat.into(),
                "closed-form".into(),
                "aggregate".into(),
                fmt_opt((!ok.is_empty()).then(|| quantile(&ok, q))),
            ]);
        }
    }
    Ok(CsvTable { header, rows })
}

/// Stitch two clique fits of a barbell via the bridge log-odds; exposed for
/// reuse by callers that build their own barbell pipelines.
pub fn fit_barbell_add_mle(
    data: &ComparisonData,
    n1: usize,
    fit_cfg: &FitConfig,
) -> Result<BtlParameters> {
    let g = data.graph();
    let n = g.n();
    if n1 == 0 || n1 >= n {
        return Err(BtlError::Validation("first clique size must be in 1..n".into()));
    }
    let left: Vec<usize> = (0..n1).collect();
    let right: Vec<usize> = (n1..n).collect();
    let bridge: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(i, j)| i < n1 && j >= n1)
        .collect();
    let f1 = fit(&data.induced(&left)?, fit_cfg)?;
    let f2 = fit(&data.induced(&right)?, fit_cfg)?;
    let s1 = SubgraphFit::new(left, f1.theta_hat.theta().to_vec(), data.comparisons_per_edge())?;
    let s2 = SubgraphFit::new(right, f2.theta_hat.theta().to_vec(), data.comparisons_per_edge())?;
    add_mle_barbell(&s1, &s2, data, &bridge, ClipBounds::default())
}
