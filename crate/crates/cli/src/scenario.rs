//! Named parameter sets and the per-run plan derived from a config.

use std::fmt;
use std::str::FromStr;

use pseudomode_core::{ContourAxis, ContourSpec, ReservoirParams, TimeGrid};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    /// Weak coupling `(λ₁,λ₂) = (5,5)` and the mixed bath `(5,0.01)`.
    Fig2a,
    /// Strong coupling `(0.01,0.01)`: collapse and revival.
    Fig2b,
    /// Non-Markovianity over the `γ₁ × γ₂` plane at `λ₁ = λ₂ = 1`.
    Fig3,
    /// Strong coupling without measurements.
    Fig4a,
    /// Strong coupling, measurements every `T = 10`.
    Fig4b,
    /// Strong coupling, measurements every `T = 0.01`.
    Fig4c,
    Custom,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 7] = [
        Self::Fig2a,
        Self::Fig2b,
        Self::Fig3,
        Self::Fig4a,
        Self::Fig4b,
        Self::Fig4c,
        Self::Custom,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::Fig3 => "fig3",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig4c => "fig4c",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|n| n.as_str()).collect();
                CliError::Validation(format!("unknown scenario '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// One trajectory to compute.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub label: String,
    pub params: ReservoirParams,
    pub horizon: f64,
    /// Zeno measurement interval; `None` is the unmeasured evolution.
    pub interval: Option<f64>,
    /// Preset grid size; `None` uses the default grid rule.
    pub points: Option<usize>,
}

impl Case {
    /// Grid for the case; `points` overrides the preset size.
    pub fn grid(&self, points: Option<usize>) -> Result<TimeGrid> {
        Ok(match points.or(self.points) {
            Some(n) => TimeGrid::uniform(self.horizon, n)?,
            None => TimeGrid::default_for(&self.params, self.horizon)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPlan {
    pub name: ScenarioName,
    pub cases: Vec<Case>,
    pub points: Option<usize>,
    pub contour: Option<ContourSpec>,
}

pub const STRONG_WIDTH: f64 = 0.01;
pub const WEAK_WIDTH: f64 = 5.0;
pub const CONTOUR_RANGE: (f64, f64) = (0.05, 1.0);
pub const CONTOUR_RESOLUTION: usize = 20;

fn params(l1: f64, l2: f64) -> ReservoirParams {
    ReservoirParams::new(1.0, 1.0, l1, l2).expect("preset parameters are valid")
}

fn case(label: &str, p: ReservoirParams, horizon: f64, interval: Option<f64>) -> Case {
    Case {
        label: label.to_string(),
        params: p,
        horizon,
        interval,
        points: None,
    }
}

fn presets(name: ScenarioName) -> Vec<Case> {
    let strong = params(STRONG_WIDTH, STRONG_WIDTH);
    match name {
        ScenarioName::Fig2a => vec![
            case("weak", params(WEAK_WIDTH, WEAK_WIDTH), 3.0, None),
            Case {
                points: Some(3001),
                ..case("mixed", params(WEAK_WIDTH, STRONG_WIDTH), 3.0, None)
            },
        ],
        ScenarioName::Fig2b => vec![case("strong", strong, 60.0, None)],
        ScenarioName::Fig3 => Vec::new(),
        ScenarioName::Fig4a => vec![case("unmeasured", strong, 60.0, None)],
        ScenarioName::Fig4b => vec![case("interval10", strong, 100.0, Some(10.0))],
        ScenarioName::Fig4c => vec![case("interval0p01", strong, 5000.0, Some(0.01))],
        ScenarioName::Custom => Vec::new(),
    }
}

fn custom_params(cfg: &ScenarioConfig) -> Result<ReservoirParams> {
    let o = &cfg.params;
    let require = |v: Option<f64>, k: &str| {
        v.ok_or_else(|| CliError::Validation(format!("scenario 'custom' requires '{k}'")))
    };
    Ok(ReservoirParams::with_omega0(
        require(o.gamma1, "gamma1")?,
        require(o.gamma2, "gamma2")?,
        require(o.lambda1, "lambda1")?,
        require(o.lambda2, "lambda2")?,
        o.omega0.unwrap_or(0.0),
    )?)
}

fn contour_requested(cfg: &ScenarioConfig) -> bool {
    let c = &cfg.contour;
    c.axis1.is_some() || c.axis2.is_some() || c.min.is_some() || c.max.is_some() || c.resolution.is_some()
}

/// Resolves a config into concrete cases. A horizon override applies to
/// every case.
pub fn plan(cfg: &ScenarioConfig) -> Result<ScenarioPlan> {
    if let Some(h) = cfg.horizon {
        if !(h > 0.0) || !h.is_finite() {
            return Err(CliError::Validation(format!("horizon must be positive (got {h})")));
        }
    }
    if let Some(n) = cfg.points {
        if n < 2 {
            return Err(CliError::Validation("points must be at least 2".into()));
        }
    }
    if cfg.workers == Some(0) {
        return Err(CliError::Validation("workers must be at least 1".into()));
    }
    if cfg.scenario != ScenarioName::Custom && !cfg.params.is_empty() {
        return Err(CliError::Validation(format!(
            "scenario '{}' fixes its parameters; overrides are only accepted by 'custom'",
            cfg.scenario
        )));
    }

    let (mut cases, base) = match cfg.scenario {
        ScenarioName::Custom => {
            let p = custom_params(cfg)?;
            let horizon = cfg.horizon.unwrap_or(20.0 * p.slowest_timescale().min(50.0));
            (vec![case("custom", p, horizon, cfg.interval)], p)
        }
        name => {
            if cfg.interval.is_some() {
                return Err(CliError::Validation(format!(
                    "scenario '{name}' fixes its measurement schedule"
                )));
            }
            (presets(name), params(1.0, 1.0))
        }
    };
    if let Some(h) = cfg.horizon {
        for c in &mut cases {
            c.horizon = h;
        }
    }
    for c in &cases {
        if let Some(t) = c.interval {
            if !(t > 0.0) || t > c.horizon {
                return Err(CliError::Validation(format!(
                    "interval {t} must be positive and not exceed the horizon {}",
                    c.horizon
                )));
            }
        }
    }

    let contour = if cfg.scenario == ScenarioName::Fig3 || contour_requested(cfg) {
        let o = &cfg.contour;
        let lo = o.min.unwrap_or(CONTOUR_RANGE.0);
        let hi = o.max.unwrap_or(CONTOUR_RANGE.1);
        let mut spec = ContourSpec::gamma_plane(1.0, (lo, hi), o.resolution.unwrap_or(CONTOUR_RESOLUTION))?;
        spec.base = base;
        spec.axis1 = o.axis1.unwrap_or(ContourAxis::Gamma1);
        spec.axis2 = o.axis2.unwrap_or(ContourAxis::Gamma2);
        Some(spec)
    } else {
        None
    };
    if cases.is_empty() && contour.is_none() {
        return Err(CliError::Validation(format!("scenario '{}' has nothing to run", cfg.scenario)));
    }
    Ok(ScenarioPlan {
        name: cfg.scenario,
        cases,
        points: cfg.points,
        contour,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ScenarioName::ALL {
            assert_eq!(n.as_str().parse::<ScenarioName>().unwrap(), n);
        }
        assert!("fig5".parse::<ScenarioName>().is_err());
    }

    #[test]
    fn presets_are_fixed() {
        let p = plan(&ScenarioConfig::new(ScenarioName::Fig2a)).unwrap();
        assert_eq!(p.cases.len(), 2);
        assert_eq!(p.cases[1].params.lambda2(), 0.01);
        let p = plan(&ScenarioConfig::new(ScenarioName::Fig4c)).unwrap();
        assert_eq!(p.cases[0].interval, Some(0.01));
        let p = plan(&ScenarioConfig::new(ScenarioName::Fig3)).unwrap();
        assert!(p.cases.is_empty());
        assert_eq!(p.contour.unwrap().resolution, CONTOUR_RESOLUTION);
    }

    #[test]
    fn custom_requires_all_rates() {
        let mut cfg = ScenarioConfig::new(ScenarioName::Custom);
        assert!(plan(&cfg).is_err());
        cfg.params.gamma1 = Some(0.0);
        cfg.params.gamma2 = Some(0.0);
        cfg.params.lambda1 = Some(1.0);
        assert!(plan(&cfg).is_err());
        cfg.params.lambda2 = Some(1.0);
        cfg.horizon = Some(5.0);
        let p = plan(&cfg).unwrap();
        assert_eq!(p.cases[0].horizon, 5.0);
        cfg.params.lambda2 = Some(-1.0);
        assert!(plan(&cfg).is_err());
    }

    #[test]
    fn named_rejects_overrides() {
        let mut cfg = ScenarioConfig::new(ScenarioName::Fig2b);
        cfg.params.gamma1 = Some(2.0);
        assert!(plan(&cfg).is_err());
        let mut cfg = ScenarioConfig::new(ScenarioName::Fig4b);
        cfg.interval = Some(1.0);
        assert!(plan(&cfg).is_err());
    }
}
