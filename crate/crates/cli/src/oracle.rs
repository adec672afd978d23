//! Cross-checks between the residue, ODE and Lindblad routes.

use std::fmt;

use pseudomode_core::amplitude::ResidueAmplitude;
use pseudomode_core::{
    amplitude_ode, characteristic_cubic, evolve_master, Complex64, FourLevelState, PseudomodeState, ReservoirParams,
    TimeGrid,
};

use crate::error::Result;

/// Output points used for the oracle comparisons.
pub const ORACLE_POINTS: usize = 2001;

pub const RESIDUE_VS_ODE_TOL: f64 = 1e-8;
pub const SURVIVAL_TOL: f64 = 1e-6;
pub const CONSERVATION_TOL: f64 = 1e-6;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    Measured { max_deviation: f64, tolerance: f64 },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: CheckOutcome,
}

impl CheckResult {
    fn measured(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            outcome: CheckOutcome::Measured {
                max_deviation,
                tolerance,
            },
        }
    }

    pub fn passed(&self) -> bool {
        match self.outcome {
            CheckOutcome::Measured {
                max_deviation,
                tolerance,
            } => max_deviation <= tolerance,
            CheckOutcome::Skipped(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub label: String,
    pub params: ReservoirParams,
    pub horizon: f64,
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {} horizon={}", self.label, self.params, self.horizon)?;
        for c in &self.checks {
            match &c.outcome {
                CheckOutcome::Measured {
                    max_deviation,
                    tolerance,
                } => writeln!(
                    f,
                    "  {:<24} max_dev={:.3e} tol={:.0e} {}",
                    c.name,
                    max_deviation,
                    tolerance,
                    if c.passed() { "PASS" } else { "FAIL" }
                )?,
                CheckOutcome::Skipped(reason) => writeln!(f, "  {:<24} SKIPPED ({reason})", c.name)?,
            }
        }
        Ok(())
    }
}

fn max_by<I: Iterator<Item = f64>>(it: I) -> f64 {
    it.fold(0.0, f64::max)
}

/// Runs every check for one parameter set over `[0, horizon]`.
pub fn run_oracle_suite(label: &str, params: &ReservoirParams, horizon: f64) -> Result<OracleReport> {
    let grid = TimeGrid::uniform(horizon, ORACLE_POINTS)?;
    let one = Complex64::new(1.0, 0.0);
    let traj = amplitude_ode(&grid, params, one)?;
    let master = evolve_master(&grid, params, &FourLevelState::excited())?;
    let mut checks = Vec::new();

    let cubic = characteristic_cubic(params);
    if cubic.is_degenerate() {
        let reason = "degenerate characteristic roots; residue solver not applicable".to_string();
        checks.push(CheckResult {
            name: "residue_vs_ode",
            outcome: CheckOutcome::Skipped(reason.clone()),
        });
        checks.push(CheckResult {
            name: "residue_vs_lindblad",
            outcome: CheckOutcome::Skipped(reason),
        });
    } else {
        let residue = ResidueAmplitude::from_cubic(cubic, params, one)?;
        let times = grid.times();
        checks.push(CheckResult::measured(
            "residue_vs_ode",
            max_by(times.iter().zip(&traj.m1).map(|(t, m)| (residue.amplitude(*t) - m).norm())),
            RESIDUE_VS_ODE_TOL,
        ));
        checks.push(CheckResult::measured(
            "residue_vs_lindblad",
            max_by(
                times
                    .iter()
                    .zip(&master)
                    .map(|(t, s)| (residue.amplitude(*t).norm_sqr() - s.excited_population()).abs()),
            ),
            SURVIVAL_TOL,
        ));
    }
    checks.push(CheckResult::measured(
        "ode_vs_lindblad",
        max_by(traj.survival.iter().zip(&master).map(|(p, s)| (p - s.excited_population()).abs())),
        SURVIVAL_TOL,
    ));
    checks.push(CheckResult::measured(
        "population_conservation",
        traj.max_population_defect(),
        CONSERVATION_TOL,
    ));
    checks.push(CheckResult::measured(
        "conservation_rates",
        max_by((0..traj.len()).map(|k| {
            let state = PseudomodeState {
                m1: traj.m1[k],
                p1: traj.p1[k],
                p2: traj.p2[k],
            };
            let (direct, via_modes) = state.ground_population_rates(params);
            (direct - via_modes).abs()
        })),
        CONSERVATION_TOL,
    ));
    checks.push(CheckResult::measured(
        "lindblad_trace",
        max_by(master.iter().map(FourLevelState::trace_defect)),
        TRACE_TOL,
    ));
    checks.push(CheckResult::measured(
        "lindblad_positivity",
        max_by(master.iter().map(|s| (-s.min_eigenvalue()).max(0.0))),
        POSITIVITY_TOL,
    ));
    checks.push(CheckResult::measured(
        "lindblad_hermiticity",
        max_by(master.iter().map(FourLevelState::hermitian_defect)),
        HERMITIAN_TOL,
    ));

    Ok(OracleReport {
        label: label.to_string(),
        params: *params,
        horizon,
        checks,
    })
}
