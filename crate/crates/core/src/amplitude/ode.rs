use num_complex::Complex64;

use super::{AmplitudeTrajectory, PseudomodeState};
use crate::integrate::{integrate, Tolerances};
use crate::{ReservoirParams, Result, TimeGrid};

/// Atom amplitude, two pseudomode amplitudes and the two running loss
/// integrals `2λ_j ∫|P̄_j|²` (stored in the real part).
pub(crate) type ExtendedState = [Complex64; 5];

pub(crate) fn pseudomode_rhs(params: &ReservoirParams) -> impl Fn(f64, &ExtendedState) -> ExtendedState {
    let [g1, g2] = params.couplings();
    let [l1, l2] = params.lambdas();
    let minus_i = Complex64::new(0.0, -1.0);
    move |_t, y| {
        let [m, p1, p2, _, _] = *y;
        [
            minus_i * (p1 * g1 + p2 * g2),
            -p1 * l1 + minus_i * g1 * m,
            -p2 * l2 + minus_i * g2 * m,
            Complex64::new(2.0 * l1 * p1.norm_sqr(), 0.0),
            Complex64::new(2.0 * l2 * p2.norm_sqr(), 0.0),
        ]
    }
}

fn initial(m1_0: Complex64) -> ExtendedState {
    let zero = Complex64::new(0.0, 0.0);
    [m1_0, zero, zero, zero, zero]
}

/// Integrates the atom + two pseudomode equations on `grid` with the
/// adaptive Dormand–Prince pair (relative tolerance 1e-10).
pub fn amplitude_ode(grid: &TimeGrid, params: &ReservoirParams, m1_0: Complex64) -> Result<AmplitudeTrajectory> {
    let states = integrate(
        pseudomode_rhs(params),
        initial(m1_0),
        grid.times(),
        &Tolerances::default(),
    )?;
    let n = states.len();
    let mut traj = AmplitudeTrajectory {
        times: grid.times().to_vec(),
        m1: Vec::with_capacity(n),
        p1: Vec::with_capacity(n),
        p2: Vec::with_capacity(n),
        survival: Vec::with_capacity(n),
        loss1: Vec::with_capacity(n),
        loss2: Vec::with_capacity(n),
    };
    for y in states {
        traj.m1.push(y[0]);
        traj.p1.push(y[1]);
        traj.p2.push(y[2]);
        traj.survival.push(y[0].norm_sqr());
        traj.loss1.push(y[3].re);
        traj.loss2.push(y[4].re);
    }
    Ok(traj)
}

/// ODE-backed amplitude that can be queried at arbitrary times.
///
/// States are stored on a uniform checkpoint lattice; a query re-integrates
/// from the nearest checkpoint at or before the requested time.
#[derive(Debug, Clone)]
pub struct OdeAmplitude {
    params: ReservoirParams,
    spacing: f64,
    checkpoints: Vec<ExtendedState>,
}

impl OdeAmplitude {
    pub const CHECKPOINTS: usize = 4096;

    pub fn new(params: &ReservoirParams, m1_0: Complex64, horizon: f64) -> Result<Self> {
        let horizon = if horizon > 0.0 { horizon } else { 1.0 };
        let spacing = horizon / Self::CHECKPOINTS as f64;
        let times: Vec<f64> = (0..=Self::CHECKPOINTS).map(|k| k as f64 * spacing).collect();
        let checkpoints = integrate(pseudomode_rhs(params), initial(m1_0), &times, &Tolerances::default())?;
        Ok(Self {
            params: *params,
            spacing,
            checkpoints,
        })
    }

    pub fn state(&self, t: f64) -> PseudomodeState {
        let t = t.max(0.0);
        let idx = ((t / self.spacing).floor() as usize).min(self.checkpoints.len() - 1);
        let t0 = idx as f64 * self.spacing;
        let y0 = self.checkpoints[idx];
        let y = if t == t0 {
            y0
        } else {
            // Re-integration of a stable linear system over at most one
            // checkpoint interval (or the tail past the horizon).
            integrate(pseudomode_rhs(&self.params), y0, &[t0, t], &Tolerances::default())
                .expect("re-integration from a checkpoint stays within the step budget")[1]
        };
        PseudomodeState {
            m1: y[0],
            p1: y[1],
            p2: y[2],
        }
    }
}
