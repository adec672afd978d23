//! Stroboscopic projective measurements with a reservoir reset after each one.
//!
//! After `N` measurements spaced by `T` the survival (and the concurrence of
//! the Bell-type X state) is `P(T)^N = e^{-γ_z(T) N T}` with the effective rate
//! `γ_z(T) = -ln |M₁(T)|² / T`.

use rayon::prelude::*;

use crate::amplitude::AmplitudeSolver;
use crate::quantifiers::{witness_trace, windows_from_bound, WitnessTrace};
use crate::{leu, Error, ReservoirParams, Result, TimeGrid};

/// Survival below which the effective rate is reported as saturated.
pub const SURVIVAL_FLOOR: f64 = 1e-300;

/// Relative distance from an integer multiple of `T` treated as on-lattice.
const LATTICE_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub rate: f64,
    /// `|M₁(T)|²` fell below [`SURVIVAL_FLOOR`]; `rate` is the value at the
    /// floor.
    pub saturated: bool,
}

fn rate_from_survival(survival: f64, interval: f64) -> DecayRate {
    let saturated = survival < SURVIVAL_FLOOR;
    let s = survival.clamp(SURVIVAL_FLOOR, 1.0);
    DecayRate {
        rate: (-s.ln() / interval).max(0.0),
        saturated,
    }
}

/// `γ_z(T) = -ln|M₁(T)|² / T` (natural logarithm).
pub fn effective_decay_rate(interval: f64, params: &ReservoirParams) -> Result<DecayRate> {
    if !(interval > 0.0) || !interval.is_finite() {
        return Err(Error::InvalidSchedule(format!("interval must be positive (got {interval})")));
    }
    let solver = AmplitudeSolver::excited(params, interval)?;
    Ok(rate_from_survival(solver.survival(interval), interval))
}

/// Unmeasured long-time decay rate of `|M₁|²`.
pub fn asymptotic_decay_rate(params: &ReservoirParams) -> Result<f64> {
    match AmplitudeSolver::excited(params, 1.0)? {
        AmplitudeSolver::Residue(r) => Ok(r.asymptotic_rate()),
        // Degenerate roots: the slowest pole is still the largest real part.
        AmplitudeSolver::Ode(_) => {
            let roots = crate::characteristic_cubic(params).roots;
            Ok((-2.0 * roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)).max(0.0))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoSchedule {
    interval: f64,
    horizon: f64,
    survival_at_interval: f64,
    effective_rate: DecayRate,
}

impl ZenoSchedule {
    pub fn new(interval: f64, horizon: f64, params: &ReservoirParams) -> Result<Self> {
        if !(interval > 0.0) || !interval.is_finite() {
            return Err(Error::InvalidSchedule(format!("interval must be positive (got {interval})")));
        }
        if !(horizon >= interval) || !horizon.is_finite() {
            return Err(Error::InvalidSchedule(format!(
                "horizon {horizon} must be at least the interval {interval}"
            )));
        }
        let solver = AmplitudeSolver::excited(params, interval)?;
        let survival_at_interval = solver.survival(interval).clamp(0.0, 1.0);
        Ok(Self {
            interval,
            horizon,
            survival_at_interval,
            effective_rate: rate_from_survival(survival_at_interval, interval),
        })
    }

    pub fn interval(&self) -> f64 {
        self.interval
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn effective_rate(&self) -> DecayRate {
        self.effective_rate
    }

    /// `P(T) = |M₁(T)|²`.
    pub fn survival_at_interval(&self) -> f64 {
        self.survival_at_interval
    }

    /// Number of measurements up to the horizon.
    pub fn measurement_count(&self) -> u64 {
        self.split(self.horizon).0
    }

    /// `P(T)^N`.
    pub fn lattice_survival(&self, n: u64) -> f64 {
        self.survival_at_interval.powf(n as f64)
    }

    /// Completed measurements before `t` and the free-evolution time since
    /// the last one.
    fn split(&self, t: f64) -> (u64, f64) {
        let ratio = t / self.interval;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= LATTICE_SNAP * nearest.max(1.0) {
            (nearest as u64, 0.0)
        } else {
            let n = ratio.floor();
            (n as u64, t - n * self.interval)
        }
    }
}

/// Evaluates the stroboscopic concurrence with one amplitude solver reused
/// for the free evolution between measurements.
struct ZenoEvaluator<'a> {
    schedule: &'a ZenoSchedule,
    solver: AmplitudeSolver,
}

impl<'a> ZenoEvaluator<'a> {
    fn new(schedule: &'a ZenoSchedule, params: &ReservoirParams) -> Result<Self> {
        Ok(Self {
            schedule,
            solver: AmplitudeSolver::excited(params, schedule.interval)?,
        })
    }

    fn concurrence(&self, t: f64) -> f64 {
        let (n, rest) = self.schedule.split(t);
        let free = if rest == 0.0 { 1.0 } else { self.solver.survival(rest) };
        (self.schedule.lattice_survival(n) * free).clamp(0.0, 1.0)
    }
}

/// Concurrence at time `t` under the schedule. On the lattice `t = N T` this
/// is `|M₁(T)|^{2N}`; off the lattice the atom has evolved freely since the
/// last measurement.
pub fn zeno_concurrence(t: f64, schedule: &ZenoSchedule, params: &ReservoirParams) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    Ok(ZenoEvaluator::new(schedule, params)?.concurrence(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementProtocol {
    /// Reference run without measurements.
    Unmeasured,
    Stroboscopic(ZenoSchedule),
}

/// Witness trace under a measurement protocol.
///
/// Trace values on `grid` follow [`zeno_concurrence`]. Windows are taken from
/// the measurement record `N = 1, 2, …`: stretches of consecutive
/// measurements with `leu < 1`, with boundaries placed by linear
/// interpolation of the bound between neighbouring measurement times.
pub fn zeno_witness_trace(
    protocol: &MeasurementProtocol,
    params: &ReservoirParams,
    grid: &TimeGrid,
) -> Result<WitnessTrace> {
    let schedule = match protocol {
        MeasurementProtocol::Unmeasured => return witness_trace(params, grid),
        MeasurementProtocol::Stroboscopic(s) => s,
    };
    let eval = ZenoEvaluator::new(schedule, params)?;
    let concurrence: Vec<f64> = grid.times().par_iter().map(|&t| eval.concurrence(t)).collect();
    let mut trace = WitnessTrace::from_concurrence(grid.times().to_vec(), concurrence)?;

    let count = schedule.measurement_count();
    if count >= 1 {
        let lattice_times: Vec<f64> = (1..=count).map(|n| n as f64 * schedule.interval).collect();
        let lattice_leu: Vec<f64> = (1..=count)
            .map(|n| leu(schedule.lattice_survival(n).clamp(0.0, 1.0)))
            .collect::<Result<_>>()?;
        trace.windows = windows_from_bound(&lattice_times, &lattice_leu, None);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strong() -> ReservoirParams {
        ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap()
    }

    #[test]
    fn schedule_validation() {
        let p = strong();
        assert!(ZenoSchedule::new(0.0, 1.0, &p).is_err());
        assert!(ZenoSchedule::new(2.0, 1.0, &p).is_err());
        assert!(effective_decay_rate(-1.0, &p).is_err());
        let s = ZenoSchedule::new(0.1, 1.0, &p).unwrap();
        assert!(zeno_concurrence(-0.5, &s, &p).is_err());
        assert_eq!(s.measurement_count(), 10);
    }

    #[test]
    fn lattice_identities() {
        let p = strong();
        let s = ZenoSchedule::new(0.7, 100.0, &p).unwrap();
        assert_eq!(zeno_concurrence(0.0, &s, &p).unwrap(), 1.0);
        let direct = AmplitudeSolver::excited(&p, 1.0).unwrap().survival(0.7);
        assert_eq!(zeno_concurrence(0.7, &s, &p).unwrap(), direct.clamp(0.0, 1.0));
        assert_eq!(s.survival_at_interval(), direct.clamp(0.0, 1.0));
    }

    #[test]
    fn off_lattice_free_evolution() {
        let p = ReservoirParams::new(1.0, 1.0, 5.0, 5.0).unwrap();
        let s = ZenoSchedule::new(0.2, 2.0, &p).unwrap();
        let solver = AmplitudeSolver::excited(&p, 1.0).unwrap();
        let got = zeno_concurrence(0.5, &s, &p).unwrap();
        let want = s.survival_at_interval().powi(2) * solver.survival(0.1);
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn saturated_rate_is_flagged() {
        let p = ReservoirParams::new(2.0, 2.0, 50.0, 50.0).unwrap();
        let r = effective_decay_rate(400.0, &p).unwrap();
        assert!(r.saturated);
        assert!((r.rate - (-(SURVIVAL_FLOOR.ln())) / 400.0).abs() < 1e-12);
    }

    #[test]
    fn unmeasured_protocol_delegates() {
        let p = strong();
        let grid = TimeGrid::uniform(40.0, 401).unwrap();
        let a = zeno_witness_trace(&MeasurementProtocol::Unmeasured, &p, &grid).unwrap();
        let b = witness_trace(&p, &grid).unwrap();
        assert_eq!(a, b);
    }
}
