//! One-parameter sweeps: witness time, backflow and Zeno rate per value.

use std::fmt::Write as _;

use rayon::prelude::*;

use pseudomode_core::nonmarkov::linspace;
use pseudomode_core::{blp_measure, effective_decay_rate, witness_trace, AmplitudeSolver, BlpOptions, ReservoirParams, TimeGrid};

use crate::error::{CliError, Result};
use crate::output::fmt_num;

pub const SWEEP_PARAMS: [&str; 5] = ["gamma1", "gamma2", "lambda1", "lambda2", "interval"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub base: ReservoirParams,
    pub horizon: f64,
    /// Zeno interval for the `zeno_rate` column; swept itself when
    /// `param == "interval"`.
    pub interval: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub survival_end: f64,
    pub first_window_end: Option<f64>,
    pub window_count: usize,
    pub blp_n: f64,
    pub zeno_rate: Option<f64>,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if !SWEEP_PARAMS.contains(&self.param.as_str()) {
            return Err(CliError::Validation(format!(
                "cannot sweep '{}' (expected one of {})",
                self.param,
                SWEEP_PARAMS.join(", ")
            )));
        }
        if self.steps == 0 {
            return Err(CliError::Validation("steps must be at least 1".into()));
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Validation("sweep bounds must be finite".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(CliError::Validation(format!("horizon must be positive (got {})", self.horizon)));
        }
        Ok(())
    }
}

fn row(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let (params, interval) = if spec.param == "interval" {
        (spec.base, Some(value))
    } else {
        (spec.base.with_param(&spec.param, value)?, spec.interval)
    };
    let grid = TimeGrid::default_for(&params, spec.horizon)?;
    let trace = witness_trace(&params, &grid)?;
    let solver = AmplitudeSolver::excited(&params, spec.horizon)?;
    let zeno_rate = interval.map(|t| effective_decay_rate(t, &params).map(|r| r.rate)).transpose()?;
    Ok(SweepRow {
        value,
        survival_end: solver.survival(spec.horizon),
        first_window_end: trace.first_window_end(),
        window_count: trace.windows.len(),
        blp_n: blp_measure(&params, &BlpOptions::default())?.n,
        zeno_rate,
    })
}

/// Rows in sweep order; values are evaluated in parallel.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    linspace(spec.from, spec.to, spec.steps)
        .par_iter()
        .map(|&v| row(spec, v))
        .collect()
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
    let mut s = format!("{param},survival_end,first_window_end,window_count,blp_n,zeno_rate\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_num(r.value),
            fmt_num(r.survival_end),
            opt(r.first_window_end),
            r.window_count,
            fmt_num(r.blp_n),
            opt(r.zeno_rate)
        );
    }
    s
}
