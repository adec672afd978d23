//! Scenario execution: compute everything first, then write files.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use pseudomode_core::integrate::Tolerances;
use pseudomode_core::quantifiers::WINDOW_TIME_TOL;
use pseudomode_core::{
    bell_xstate, concurrence_wootters, contour_scan, witness_threshold, witness_trace, zeno_witness_trace,
    ContourMap, MeasurementProtocol, WitnessTrace, ZenoSchedule,
};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::oracle::{run_oracle_suite, OracleReport};
use crate::output::{contour_csv, contour_matrix, trajectory_csv, windows_csv, Manifest, OutputDir, PlotScript};
use crate::scenario::{plan, Case, ScenarioPlan};

/// Default Markovian threshold for contour summaries.
pub const MARKOV_THRESHOLD: f64 = 1e-3;

/// Longest oracle horizon; longer runs are checked on their first part.
pub const ORACLE_HORIZON_CAP: f64 = 400.0;

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case: Case,
    pub trace: WitnessTrace,
    /// `|M₁|²`, or the stroboscopic survival `P_N(t)` for measured cases.
    pub survival: Vec<f64>,
    /// Wootters concurrence of the reconstructed X state.
    pub concurrence: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub plan: ScenarioPlan,
    pub cases: Vec<CaseResult>,
    pub contour: Option<ContourMap>,
    pub oracle: Vec<OracleReport>,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    pub fn case(&self, label: &str) -> Option<&CaseResult> {
        self.cases.iter().find(|c| c.case.label == label)
    }
}

pub fn file_stem(plan: &ScenarioPlan, label: &str) -> String {
    format!("{}_{}", plan.name, label)
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Validation(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn compute_case(case: &Case, points: Option<usize>) -> Result<CaseResult> {
    let grid = case.grid(points)?;
    let trace = match case.interval {
        None => witness_trace(&case.params, &grid)?,
        Some(t) => {
            let schedule = ZenoSchedule::new(t, case.horizon, &case.params)?;
            zeno_witness_trace(&MeasurementProtocol::Stroboscopic(schedule), &case.params, &grid)?
        }
    };
    let survival = trace.concurrence.clone();
    let concurrence = survival
        .par_iter()
        .map(|&s| Ok(concurrence_wootters(&bell_xstate(s)?.to_matrix())?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CaseResult {
        case: case.clone(),
        trace,
        survival,
        concurrence,
    })
}

fn expected_files(plan: &ScenarioPlan, oracle: bool) -> Vec<String> {
    let mut names = Vec::new();
    for c in &plan.cases {
        let stem = file_stem(plan, &c.label);
        names.push(format!("{stem}_trajectory.csv"));
        names.push(format!("{stem}_windows.csv"));
    }
    if plan.contour.is_some() {
        names.push(format!("{}_contour.csv", plan.name));
        names.push(format!("{}_contour.dat", plan.name));
    }
    if oracle {
        names.push(format!("{}_oracle.txt", plan.name));
    }
    names.push(format!("{}.gp", plan.name));
    names.push(format!("{}_manifest.txt", plan.name));
    names
}

fn manifest(cfg: &ScenarioConfig, out: &RunOutput) -> Manifest {
    let tol = Tolerances::default();
    let mut m = Manifest::default();
    m.push("scenario", out.plan.name);
    m.push("version", env!("CARGO_PKG_VERSION"));
    m.push(
        "timestamp",
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    );
    m.push("rtol", format!("{:e}", tol.rtol));
    m.push("atol", format!("{:e}", tol.atol));
    m.push("window_time_tol", format!("{WINDOW_TIME_TOL:e}"));
    m.push("witness_threshold", format!("{:.15}", witness_threshold()));
    m.push("workers", cfg.workers.map_or("auto".to_string(), |n| n.to_string()));
    m.push("oracle", cfg.oracle);
    for (i, r) in out.cases.iter().enumerate() {
        let c = &r.case;
        let key = |k: &str| format!("case.{i}.{k}");
        m.push(key("label"), &c.label);
        m.push(key("gamma1"), c.params.gamma1());
        m.push(key("gamma2"), c.params.gamma2());
        m.push(key("lambda1"), c.params.lambda1());
        m.push(key("lambda2"), c.params.lambda2());
        m.push(key("omega0"), c.params.omega0());
        m.push(key("horizon"), c.horizon);
        m.push(key("points"), r.trace.times.len());
        m.push(key("interval"), c.interval.map_or("none".to_string(), |t| t.to_string()));
        m.push(key("windows"), r.trace.windows.len());
        if let Some(end) = r.trace.first_window_end() {
            m.push(key("first_window_end"), format!("{end:.6}"));
        }
    }
    if let (Some(spec), Some(map)) = (&out.plan.contour, &out.contour) {
        m.push("contour.axis1", spec.axis1);
        m.push("contour.axis1_range", format!("{},{}", spec.axis1_range.0, spec.axis1_range.1));
        m.push("contour.axis2", spec.axis2);
        m.push("contour.axis2_range", format!("{},{}", spec.axis2_range.0, spec.axis2_range.1));
        m.push("contour.resolution", spec.resolution);
        m.push("contour.gamma1", spec.base.gamma1());
        m.push("contour.gamma2", spec.base.gamma2());
        m.push("contour.lambda1", spec.base.lambda1());
        m.push("contour.lambda2", spec.base.lambda2());
        m.push("contour.markov_threshold", format!("{MARKOV_THRESHOLD:e}"));
        m.push(
            "contour.markovian_cells",
            map.values.iter().filter(|&&n| n < MARKOV_THRESHOLD).count(),
        );
        m.push("contour.exhausted_cells", map.exhausted.iter().filter(|&&e| e).count());
    }
    m
}

fn compute(cfg: &ScenarioConfig, plan: ScenarioPlan) -> Result<RunOutput> {
    let cases = plan
        .cases
        .iter()
        .map(|c| compute_case(c, plan.points))
        .collect::<Result<Vec<_>>>()?;
    let contour = plan.contour.as_ref().map(contour_scan).transpose()?;
    let oracle = if cfg.oracle {
        let mut targets: Vec<_> = plan
            .cases
            .iter()
            .map(|c| (c.label.clone(), c.params, c.horizon.min(ORACLE_HORIZON_CAP)))
            .collect();
        if let Some(spec) = &plan.contour {
            targets.push(("contour_base".to_string(), spec.base, 50.0));
        }
        targets
            .iter()
            .map(|(label, p, h)| run_oracle_suite(label, p, *h))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(RunOutput {
        plan,
        cases,
        contour,
        oracle,
        files: Vec::new(),
    })
}

fn write_all(cfg: &ScenarioConfig, out: &RunOutput, dir: &mut OutputDir) -> Result<()> {
    let plan = &out.plan;
    let mut plot = PlotScript::new(plan.name.as_str());
    let threshold = witness_threshold();
    for r in &out.cases {
        let stem = file_stem(plan, &r.case.label);
        let traj = format!("{stem}_trajectory.csv");
        dir.write(&traj, &trajectory_csv(&r.trace, &r.survival, &r.concurrence))?;
        dir.write(&format!("{stem}_windows.csv"), &windows_csv(&r.trace.windows))?;
        plot.trajectory(&r.case.label, &traj, threshold);
    }
    if let Some(map) = &out.contour {
        dir.write(&format!("{}_contour.csv", plan.name), &contour_csv(map))?;
        let dat = format!("{}_contour.dat", plan.name);
        dir.write(&dat, &contour_matrix(map))?;
        plot.contour(&dat, map.axis1.name(), map.axis2.name());
    }
    if cfg.oracle {
        let text: String = out.oracle.iter().map(|r| r.to_string()).collect();
        dir.write(&format!("{}_oracle.txt", plan.name), &text)?;
    }
    dir.write(&format!("{}.gp", plan.name), &plot.render())?;
    dir.write(&format!("{}_manifest.txt", plan.name), &manifest(cfg, out).render())?;
    Ok(())
}

/// Plans, computes and writes one scenario. Returns an oracle failure error
/// (after writing the report) if any check fails.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput> {
    let plan = plan(cfg)?;
    let names = expected_files(&plan, cfg.oracle);
    // Fail fast on existing files before spending time on the computation.
    OutputDir::prepare(&cfg.out_dir, &names, cfg.force)?.rollback();
    let mut out = with_workers(cfg.workers, || compute(cfg, plan))??;

    let mut dir = OutputDir::prepare(&cfg.out_dir, &names, cfg.force)?;
    if let Err(e) = write_all(cfg, &out, &mut dir) {
        dir.rollback();
        return Err(e);
    }
    out.files = dir.into_files();
    let failed: Vec<String> = out
        .oracle
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}: {}", r.label, r.failures().join(", ")))
        .collect();
    if !failed.is_empty() {
        return Err(CliError::OracleFailed(failed.join("; ")));
    }
    Ok(out)
}
