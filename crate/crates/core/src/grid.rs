use crate::{Error, ReservoirParams, Result};

/// Points per unit of the slowest timescale in a default grid.
pub const DEFAULT_POINTS_PER_TIMESCALE: f64 = 2000.0;

/// Hard cap on the number of points in any generated grid.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Strictly increasing sequence of times starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        match times.first() {
            None => return Err(Error::InvalidGrid("grid is empty".into())),
            Some(&t0) if t0 != 0.0 => {
                return Err(Error::InvalidGrid(format!("grid must start at 0 (got {t0})")));
            }
            _ => {}
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("grid contains non-finite times".into()));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "grid is not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(Self(times))
    }

    /// `points` equally spaced times on `[0, horizon]`.
    pub fn uniform(horizon: f64, points: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidGrid(format!("horizon must be positive (got {horizon})")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid("a uniform grid needs at least 2 points".into()));
        }
        if points > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{points} points exceeds the cap of {MAX_GRID_POINTS}"
            )));
        }
        let step = horizon / (points - 1) as f64;
        let mut times: Vec<f64> = (0..points).map(|k| k as f64 * step).collect();
        times[points - 1] = horizon;
        Ok(Self(times))
    }

    /// Uniform grid with 2000 points per slowest timescale of `params`,
    /// capped at [`MAX_GRID_POINTS`].
    pub fn default_for(params: &ReservoirParams, horizon: f64) -> Result<Self> {
        Self::uniform(horizon, default_point_count(params, horizon))
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.0.last().expect("grid is never empty")
    }
}

pub fn default_point_count(params: &ReservoirParams, horizon: f64) -> usize {
    let per_unit = DEFAULT_POINTS_PER_TIMESCALE / params.slowest_timescale();
    let n = (per_unit * horizon).ceil() as usize + 1;
    n.clamp(2, MAX_GRID_POINTS)
}

impl AsRef<[f64]> for TimeGrid {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
