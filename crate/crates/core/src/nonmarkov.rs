//! Trace-distance (BLP) non-Markovianity of the single-atom channel and its
//! two-atom doubling, plus rectangular parameter scans of it.
//!
//! For the pair `|g⟩⟨g|`, `|e⟩⟨e|` the evolved trace distance is exactly
//! `|M₁(t)|²`, so the measure is the total rise of the survival probability.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitude::{amplitude_ode, AmplitudeSolver};
use crate::grid::{default_point_count, MAX_GRID_POINTS};
use crate::linalg::{hermitian_eigenvalues, validate_density, CMatrix, DENSITY_TOL};
use crate::roots::bisect_predicate;
use crate::two_qubit::single_atom_density;
use crate::{Error, ReservoirParams, Result, TimeGrid};

/// `½ Tr|ρ_A - ρ_B|`.
pub fn trace_distance(rho_a: &CMatrix, rho_b: &CMatrix) -> Result<f64> {
    if rho_a.shape() != rho_b.shape() {
        return Err(Error::DimensionMismatch(rho_a.nrows(), rho_b.nrows()));
    }
    validate_density(rho_a, DENSITY_TOL)?;
    validate_density(rho_b, DENSITY_TOL)?;
    let diff = rho_a - rho_b;
    let diff = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum::<f64>())
}

/// Single-atom states at time `t` evolved from `|g⟩⟨g|` and `|e⟩⟨e|`.
pub fn evolved_pair(solver: &AmplitudeSolver, t: f64) -> Result<(CMatrix, CMatrix)> {
    let zero = Complex64::new(0.0, 0.0);
    let to_dyn = |m: Matrix2<Complex64>| CMatrix::from_iterator(2, 2, m.iter().copied());
    let ground = single_atom_density(zero, Complex64::new(1.0, 0.0))?;
    let mut m1 = solver.amplitude(t);
    if m1.norm_sqr() > 1.0 {
        m1 /= m1.norm();
    }
    let excited = single_atom_density(m1, zero)?;
    Ok((to_dyn(ground), to_dyn(excited)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlpOptions {
    /// Initial integration horizon; doubled until the survival is negligible.
    pub horizon: f64,
    /// Upper bound for the automatic horizon extension.
    pub horizon_cap: f64,
    /// Survival treated as fully decayed.
    pub negligible_survival: f64,
    /// Grid density override; `None` uses the default grid rule.
    pub points_per_unit: Option<f64>,
}

impl Default for BlpOptions {
    fn default() -> Self {
        Self {
            horizon: 50.0,
            horizon_cap: 1e5,
            negligible_survival: 1e-6,
            points_per_unit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovResult {
    /// Single-atom measure.
    pub n1: f64,
    /// Two-atom measure, `2·n1`.
    pub n: f64,
    /// Intervals on which the trace distance grows.
    pub revival_intervals: Vec<(f64, f64)>,
    /// Horizon actually used.
    pub horizon: f64,
    /// The survival was not negligible at the horizon cap; `n` may be an
    /// underestimate.
    pub horizon_exhausted: bool,
}

impl NonMarkovResult {
    pub fn is_markovian(&self, threshold: f64) -> bool {
        self.n < threshold
    }
}

fn survival_at(params: &ReservoirParams, t: f64) -> Result<f64> {
    Ok(AmplitudeSolver::excited(params, t)?.survival(t))
}

/// BLP measure for the fixed pair `{|g⟩⟨g|, |e⟩⟨e|}`.
pub fn blp_measure(params: &ReservoirParams, opts: &BlpOptions) -> Result<NonMarkovResult> {
    if !(opts.horizon > 0.0) || !(opts.horizon_cap >= opts.horizon) {
        return Err(Error::InvalidGrid(format!(
            "horizon {} must be positive and not exceed the cap {}",
            opts.horizon, opts.horizon_cap
        )));
    }
    let mut horizon = opts.horizon;
    let mut exhausted = false;
    while survival_at(params, horizon)? >= opts.negligible_survival {
        if horizon >= opts.horizon_cap {
            exhausted = true;
            break;
        }
        horizon = (2.0 * horizon).min(opts.horizon_cap);
    }

    let points = match opts.points_per_unit {
        Some(ppu) => ((ppu * horizon).ceil() as usize + 1).clamp(2, MAX_GRID_POINTS),
        None => default_point_count(params, horizon),
    };
    let grid = TimeGrid::uniform(horizon, points)?;
    let solver = AmplitudeSolver::excited(params, horizon)?;

    let times = grid.times();
    let (survival, rate): (Vec<f64>, Vec<f64>) = match &solver {
        AmplitudeSolver::Residue(r) => times
            .par_iter()
            .map(|&t| {
                let m = r.amplitude(t);
                (m.norm_sqr(), 2.0 * (m.conj() * r.amplitude_derivative(t)).re)
            })
            .unzip(),
        AmplitudeSolver::Ode(_) => {
            let traj = amplitude_ode(&grid, params, Complex64::new(1.0, 0.0))?;
            (0..traj.len())
                .map(|k| {
                    let state = crate::PseudomodeState {
                        m1: traj.m1[k],
                        p1: traj.p1[k],
                        p2: traj.p2[k],
                    };
                    (traj.survival[k], state.survival_rate(params))
                })
                .unzip()
        }
    };

    let rising = |t: f64| solver.survival_rate(t, params) > 0.0;
    let mut intervals = Vec::new();
    let mut n1 = 0.0;
    let n = times.len();
    let mut k = 0;
    while k < n {
        if !(rate[k] > 0.0) {
            k += 1;
            continue;
        }
        let first = k;
        while k + 1 < n && rate[k + 1] > 0.0 {
            k += 1;
        }
        let last = k;
        let (t_start, d_start) = if first == 0 {
            (times[0], survival[0])
        } else {
            let t = bisect_predicate(rising, times[first - 1], times[first], 1e-12 * horizon.max(1.0));
            (t, solver.survival(t))
        };
        let (t_end, d_end) = if last + 1 == n {
            (times[last], survival[last])
        } else {
            let t = bisect_predicate(rising, times[last], times[last + 1], 1e-12 * horizon.max(1.0));
            (t, solver.survival(t))
        };
        let increment = d_end - d_start;
        if increment > 0.0 {
            n1 += increment;
            intervals.push((t_start, t_end));
        }
        k += 1;
    }

    Ok(NonMarkovResult {
        n1,
        n: 2.0 * n1,
        revival_intervals: intervals,
        horizon,
        horizon_exhausted: exhausted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContourAxis {
    Gamma1,
    Gamma2,
    Lambda1,
    Lambda2,
}

impl ContourAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gamma1 => "gamma1",
            Self::Gamma2 => "gamma2",
            Self::Lambda1 => "lambda1",
            Self::Lambda2 => "lambda2",
        }
    }

    fn is_rate_width(&self) -> bool {
        matches!(self, Self::Lambda1 | Self::Lambda2)
    }
}

impl fmt::Display for ContourAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContourAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma1" => Ok(Self::Gamma1),
            "gamma2" => Ok(Self::Gamma2),
            "lambda1" => Ok(Self::Lambda1),
            "lambda2" => Ok(Self::Lambda2),
            other => Err(Error::InvalidParams(format!("unknown contour axis '{other}'"))),
        }
    }
}

/// `n` equally spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|k| min + k as f64 * step).collect();
            v[n - 1] = max;
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub axis1: ContourAxis,
    pub axis1_range: (f64, f64),
    pub axis2: ContourAxis,
    pub axis2_range: (f64, f64),
    /// Samples per axis.
    pub resolution: usize,
    /// Parameters not on either axis.
    pub base: ReservoirParams,
    pub blp: BlpOptions,
}

impl ContourSpec {
    /// `γ₁ × γ₂` scan at `λ₁ = λ₂ = lambda`.
    pub fn gamma_plane(lambda: f64, range: (f64, f64), resolution: usize) -> Result<Self> {
        Ok(Self {
            axis1: ContourAxis::Gamma1,
            axis1_range: range,
            axis2: ContourAxis::Gamma2,
            axis2_range: range,
            resolution,
            base: ReservoirParams::new(1.0, 1.0, lambda, lambda)?,
            blp: BlpOptions::default(),
        })
    }

    fn validate(&self) -> Result<()> {
        if self.axis1 == self.axis2 {
            return Err(Error::InvalidParams("contour axes must differ".into()));
        }
        if self.resolution == 0 {
            return Err(Error::InvalidParams("contour resolution must be positive".into()));
        }
        for (axis, (lo, hi)) in [(self.axis1, self.axis1_range), (self.axis2, self.axis2_range)] {
            let lower_ok = if axis.is_rate_width() { lo > 0.0 } else { lo >= 0.0 };
            if !lower_ok || !(hi > lo) || !hi.is_finite() {
                return Err(Error::InvalidParams(format!("invalid range [{lo}, {hi}] for {axis}")));
            }
        }
        Ok(())
    }
}

/// Non-Markovianity `N` on a rectangular grid. `values` is row-major with
/// rows indexed by the second axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourMap {
    pub axis1: ContourAxis,
    pub axis2: ContourAxis,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Vec<f64>,
    pub values: Vec<f64>,
    /// Cells whose horizon extension hit the cap.
    pub exhausted: Vec<bool>,
}

impl ContourMap {
    pub fn get(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.axis1_values.len() + i1]
    }
}

/// Evaluates [`blp_measure`] on every cell of the grid in parallel.
pub fn contour_scan(spec: &ContourSpec) -> Result<ContourMap> {
    spec.validate()?;
    let xs = linspace(spec.axis1_range.0, spec.axis1_range.1, spec.resolution);
    let ys = linspace(spec.axis2_range.0, spec.axis2_range.1, spec.resolution);
    let cells: Vec<(usize, usize)> = (0..ys.len())
        .flat_map(|j| (0..xs.len()).map(move |i| (i, j)))
        .collect();
    let results: Vec<NonMarkovResult> = cells
        .par_iter()
        .map(|&(i, j)| {
            let p = spec
                .base
                .with_param(spec.axis1.name(), xs[i])?
                .with_param(spec.axis2.name(), ys[j])?;
            blp_measure(&p, &spec.blp)
        })
        .collect::<Result<_>>()?;
    Ok(ContourMap {
        axis1: spec.axis1,
        axis2: spec.axis2,
        values: results.iter().map(|r| r.n).collect(),
        exhausted: results.iter().map(|r| r.horizon_exhausted).collect(),
        axis1_values: xs,
        axis2_values: ys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, projector};

    #[test]
    fn trace_distance_basics() {
        let g = projector(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let e = projector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(trace_distance(&g, &g).unwrap().abs() < 1e-15);
        assert!((trace_distance(&g, &e).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&g, &e).unwrap() - trace_distance(&e, &g).unwrap()).abs() < 1e-15);
        let big = CMatrix::identity(4, 4) * c(0.25, 0.0);
        assert!(matches!(trace_distance(&g, &big), Err(Error::DimensionMismatch(2, 4))));
    }

    #[test]
    fn uncoupled_has_no_backflow() {
        let p = ReservoirParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let opts = BlpOptions {
            horizon_cap: 200.0,
            ..Default::default()
        };
        let r = blp_measure(&p, &opts).unwrap();
        assert_eq!(r.n, 0.0);
        assert!(r.revival_intervals.is_empty());
        assert!(r.horizon_exhausted);
    }

    #[test]
    fn doubling_and_intervals() {
        let p = ReservoirParams::new(1.0, 1.0, 0.3, 0.3).unwrap();
        let r = blp_measure(&p, &BlpOptions::default()).unwrap();
        assert_eq!(r.n, 2.0 * r.n1);
        assert!(!r.revival_intervals.is_empty());
        let solver = AmplitudeSolver::excited(&p, r.horizon).unwrap();
        let total: f64 = r
            .revival_intervals
            .iter()
            .map(|&(a, b)| {
                let d = solver.survival(b) - solver.survival(a);
                assert!(d > 0.0);
                d
            })
            .sum();
        assert!((total - r.n1).abs() < 1e-12);
    }

    #[test]
    fn contour_validation() {
        let mut spec = ContourSpec::gamma_plane(1.0, (0.1, 1.0), 3).unwrap();
        spec.axis2 = ContourAxis::Gamma1;
        assert!(contour_scan(&spec).is_err());
        let mut spec = ContourSpec::gamma_plane(1.0, (0.1, 1.0), 3).unwrap();
        spec.axis1 = ContourAxis::Lambda1;
        spec.axis1_range = (0.0, 1.0);
        assert!(contour_scan(&spec).is_err());
        assert!("lambda2".parse::<ContourAxis>().is_ok());
        assert!("omega".parse::<ContourAxis>().is_err());
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
