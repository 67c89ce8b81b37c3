//! Impulse-response accuracy of differenced VARs, levels VARs and VECMs on
//! the four-variable design.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{self, DetSpec, Fitted, VarKind};
use crate::model::{self, IrfSet};
use crate::simulate::{self, DgpDraw, DgpShape, VarDynamics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Estimator {
    #[serde(rename = "DVAR")]
    Dvar,
    #[serde(rename = "LVAR")]
    Lvar,
    #[serde(rename = "VECM")]
    Vecm,
    /// Returns the true responses; used to test the harness itself.
    #[serde(rename = "oracle")]
    Oracle,
}

impl Estimator {
    pub fn label(&self) -> &'static str {
        match self {
            Estimator::Dvar => "DVAR",
            Estimator::Lvar => "LVAR",
            Estimator::Vecm => "VECM",
            Estimator::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub r: usize,
    pub q: usize,
    pub c: usize,
    #[serde(rename = "T_list")]
    pub t_list: Vec<usize>,
    pub lags_report: Vec<usize>,
    pub replications: usize,
    pub horizon: usize,
    pub estimators: Vec<Estimator>,
    /// Lags of the VAR fitted to first differences.
    pub dvar_lags: usize,
    /// Lags of the levels VAR.
    pub lvar_lags: usize,
    /// Levels lag order of the VECM (one fewer lagged difference).
    pub vecm_lags: usize,
    pub det_spec: DetSpec,
    pub burn_in: usize,
    pub seed: u64,
    pub redraw_dgp_per_run: bool,
    /// Fraction of replications that may fail (and be redrawn) per sample size.
    pub max_failure_fraction: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            r: 4,
            q: 3,
            c: 3,
            t_list: vec![100, 500, 1000, 5000],
            lags_report: vec![0, 4, 20, 40, 80],
            replications: 1000,
            horizon: model::DEFAULT_IRF_HORIZON,
            estimators: vec![Estimator::Dvar, Estimator::Lvar, Estimator::Vecm],
            dvar_lags: 2,
            lvar_lags: 2,
            vecm_lags: 2,
            det_spec: DetSpec::None,
            burn_in: simulate::DEFAULT_BURN_IN,
            seed: 2024,
            redraw_dgp_per_run: false,
            max_failure_fraction: 0.01,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        if self.t_list.is_empty() || self.estimators.is_empty() || self.lags_report.is_empty() {
            return Err(Error::InvalidConfig("T_list, estimators and lags_report must be non-empty".into()));
        }
        if let Some(&lag) = self.lags_report.iter().find(|&&l| l > self.horizon) {
            return Err(Error::InvalidConfig(format!("reported lag {lag} exceeds horizon {}", self.horizon)));
        }
        if !(0.0..=1.0).contains(&self.max_failure_fraction) {
            return Err(Error::InvalidConfig("max_failure_fraction must lie in [0, 1]".into()));
        }
        let shape = self.shape();
        if !(shape.r > shape.q && shape.q > 0 && shape.c < shape.r && shape.c + shape.q >= shape.r && shape.c > 0) {
            return Err(Error::InvalidConfig(format!(
                "invalid dimensions r={}, q={}, c={}",
                shape.r, shape.q, shape.c
            )));
        }
        Ok(())
    }

    pub fn shape(&self) -> DgpShape {
        DgpShape { r: self.r, q: self.q, c: self.c }
    }

    /// FNV-1a hash of the canonical JSON form.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    fn failure_cap(&self) -> usize {
        (self.max_failure_fraction * self.replications as f64).ceil() as usize
    }
}

/// Root mean squared error at one lag, pooled over replications and all
/// response/shock pairs.
pub fn rmse_at_lag(est: &[IrfSet], truth: &IrfSet, lag: usize) -> Result<f64> {
    if est.is_empty() {
        return Err(Error::EmptyInput("no replications".into()));
    }
    let target = truth
        .level_coeffs
        .get(lag)
        .ok_or_else(|| Error::InvalidConfig(format!("lag {lag} beyond the true responses")))?;
    let mut sum = 0.0;
    for irf in est {
        let h = irf
            .level_coeffs
            .get(lag)
            .ok_or_else(|| Error::InvalidConfig(format!("lag {lag} beyond an estimated response")))?;
        if h.shape() != target.shape() {
            return Err(Error::ShapeMismatch("estimated and true responses differ in shape".into()));
        }
        sum += (h - target).norm_squared();
    }
    Ok((sum / (est.len() * target.len()) as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEntry {
    pub rmse: f64,
    pub n_reps: usize,
    pub n_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McTable {
    pub seed: u64,
    pub config_digest: String,
    pub lags: Vec<usize>,
    pub estimators: Vec<Estimator>,
    pub t_list: Vec<usize>,
    #[serde(serialize_with = "entries_as_rows")]
    pub entries: BTreeMap<(usize, usize, Estimator), McEntry>,
}

fn entries_as_rows<S: serde::Serializer>(
    e: &BTreeMap<(usize, usize, Estimator), McEntry>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "T")]
        t: usize,
        lag: usize,
        estimator: Estimator,
        #[serde(flatten)]
        entry: McEntry,
    }
    s.collect_seq(e.iter().map(|(&(t, lag, estimator), &entry)| Row { t, lag, estimator, entry }))
}

impl McTable {
    pub fn rmse(&self, t: usize, lag: usize, est: Estimator) -> Option<f64> {
        self.entries.get(&(t, lag, est)).map(|e| e.rmse)
    }

    /// Columns `T, lag, estimator, rmse, n_reps, n_failures`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,lag,estimator,rmse,n_reps,n_failures\n");
        for (&(t, lag, est), e) in &self.entries {
            let _ = writeln!(out, "{t},{lag},{},{:.6},{},{}", est.label(), e.rmse, e.n_reps, e.n_failures);
        }
        out
    }

    /// One block per sample size with a row per lag and a column per estimator.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "RMSE of estimated level impulse responses (seed {}, config {})", self.seed, self.config_digest);
        out.push('\n');
        let mut header = String::from("| T | lags |");
        let mut rule = String::from("|---|---|");
        for e in &self.estimators {
            let _ = write!(header, " {} |", e.label());
            rule.push_str("---|");
        }
        let _ = writeln!(out, "{header}\n{rule}");
        for &t in &self.t_list {
            for &lag in &self.lags {
                let _ = write!(out, "| {t} | {lag} |");
                for &e in &self.estimators {
                    match self.entries.get(&(t, lag, e)) {
                        Some(v) => {
                            let _ = write!(out, " {:.2} |", v.rmse);
                        }
                        None => out.push_str(" - |"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Stream id for one replication attempt.
pub fn stream_id(attempt: u64, t_index: u64, rep: u64) -> u64 {
    (attempt << 48) | (t_index << 32) | rep
}

struct Truth {
    draw: DgpDraw,
    dynamics: VarDynamics,
    irf: IrfSet,
}

fn truth_for(cfg: &McConfig, seed: u64) -> Result<Truth> {
    let draw = simulate::draw_dgp_with(cfg.shape(), seed)?;
    simulate::dgp_to_spec(&draw)?;
    let dynamics = VarDynamics::from_draw(&draw);
    let irf = model::ar_level_irf(&draw.a_poly(), &draw.c0, cfg.horizon)?;
    Ok(Truth { draw, dynamics, irf })
}

fn per_rep_dgp_seed(seed: u64, rep: u64) -> u64 {
    seed.wrapping_add(rep.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn fit_irf(cfg: &McConfig, est: Estimator, y: &nalgebra::DMatrix<f64>, truth: &IrfSet) -> Result<IrfSet> {
    let fitted = match est {
        Estimator::Oracle => return Ok(truth.clone()),
        Estimator::Dvar => Fitted::Var(estimate::ols_var(y, cfg.dvar_lags, VarKind::Differences)?),
        Estimator::Lvar => Fitted::Var(estimate::ols_var(y, cfg.lvar_lags, VarKind::Levels)?),
        Estimator::Vecm => Fitted::Vecm(estimate::johansen_vecm(y, cfg.vecm_lags, cfg.c, cfg.det_spec)?),
    };
    let ident = estimate::identify_shocks(fitted.sigma(), cfg.q)?;
    estimate::irf_from_estimate(&fitted, &ident, cfg.horizon)
}

/// Squared errors for every (estimator, reported lag), plus the number of
/// failed attempts before success.
fn replication(cfg: &McConfig, shared: Option<&Truth>, t: usize, t_index: usize, rep: usize) -> Result<(Vec<f64>, usize)> {
    let mut failures = 0;
    let cap = cfg.failure_cap();
    for attempt in 0.. {
        let owned;
        let truth = match shared {
            Some(tr) => tr,
            None => {
                owned = truth_for(cfg, per_rep_dgp_seed(cfg.seed, stream_id(attempt, 0, rep as u64)))?;
                &owned
            }
        };
        let mut rng = simulate::stream_rng(cfg.seed, stream_id(attempt, t_index as u64, rep as u64));
        let outcome = simulate::simulate_factors_with_rng(&truth.dynamics, t, cfg.burn_in, &mut rng).and_then(|path| {
            let mut errs = Vec::with_capacity(cfg.estimators.len() * cfg.lags_report.len());
            for &est in &cfg.estimators {
                let irf = fit_irf(cfg, est, &path.f, &truth.irf)?;
                for &lag in &cfg.lags_report {
                    errs.push((&irf.level_coeffs[lag] - &truth.irf.level_coeffs[lag]).norm_squared());
                }
            }
            Ok(errs)
        });
        match outcome {
            Ok(errs) => return Ok((errs, failures)),
            Err(e) => {
                failures += 1;
                tracing::warn!(t, rep, attempt, error = %e, "replication failed; redrawing");
                if failures > cap {
                    return Err(Error::TooManyFailures { failures, cap });
                }
            }
        }
    }
    unreachable!("the attempt loop only exits by returning")
}

pub fn run_experiment(cfg: &McConfig) -> Result<McTable> {
    cfg.validate()?;
    let shared = if cfg.redraw_dgp_per_run { None } else { Some(truth_for(cfg, cfg.seed)?) };
    if let Some(tr) = &shared {
        tracing::info!(seed = tr.draw.seed, "design drawn once");
    }
    let n_cells = cfg.estimators.len() * cfg.lags_report.len();
    let cells = cfg.r * cfg.q;
    let cap = cfg.failure_cap();
    let mut entries = BTreeMap::new();
    for (t_index, &t) in cfg.t_list.iter().enumerate() {
        let results: Vec<Result<(Vec<f64>, usize)>> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| replication(cfg, shared.as_ref(), t, t_index, rep))
            .collect();
        let mut sums = vec![0.0; n_cells];
        let mut failures = 0;
        for res in results {
            let (errs, f) = res?;
            failures += f;
            for (s, e) in sums.iter_mut().zip(errs) {
                *s += e;
            }
        }
        if failures > cap {
            return Err(Error::TooManyFailures { failures, cap });
        }
        tracing::info!(t, failures, "sample size finished");
        for (ei, &est) in cfg.estimators.iter().enumerate() {
            for (li, &lag) in cfg.lags_report.iter().enumerate() {
                let sum = sums[ei * cfg.lags_report.len() + li];
                let rmse = (sum / (cfg.replications * cells) as f64).sqrt();
                entries.insert((t, lag, est), McEntry { rmse, n_reps: cfg.replications, n_failures: failures });
            }
        }
    }
    Ok(McTable {
        seed: cfg.seed,
        config_digest: cfg.digest(),
        lags: cfg.lags_report.clone(),
        estimators: cfg.estimators.clone(),
        t_list: cfg.t_list.clone(),
        entries,
    })
}
