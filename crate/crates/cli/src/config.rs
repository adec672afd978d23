//! Flat `key = value` scenario configuration.
//!
//! ```text
//! # strong coupling, custom horizon
//! scenario = custom
//! gamma1 = 1
//! gamma2 = 1
//! lambda1 = 0.01
//! lambda2 = 0.01
//! horizon = 80
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pseudomode_core::ContourAxis;

use crate::error::{CliError, Result};
use crate::scenario::ScenarioName;

/// Physical parameters that named scenarios fix themselves.
pub const PHYSICAL_KEYS: [&str; 6] = ["gamma1", "gamma2", "lambda1", "lambda2", "omega0", "interval"];

const KNOWN_KEYS: [&str; 17] = [
    "scenario",
    "gamma1",
    "gamma2",
    "lambda1",
    "lambda2",
    "omega0",
    "interval",
    "horizon",
    "points",
    "out",
    "oracle",
    "workers",
    "contour_axis1",
    "contour_axis2",
    "contour_min",
    "contour_max",
    "contour_resolution",
];

/// Parses `key = value` lines. Blank lines and `#` comments are ignored;
/// unknown or repeated keys are errors.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config {
                line: line_no,
                message: format!("unknown key '{key}'"),
            });
        }
        if value.is_empty() {
            return Err(CliError::Config {
                line: line_no,
                message: format!("empty value for '{key}'"),
            });
        }
        if out.insert(key.clone(), (line_no, value)).is_some() {
            return Err(CliError::Config {
                line: line_no,
                message: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(out)
}

fn parse_value<T: FromStr>(key: &str, line: usize, value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::Config {
        line,
        message: format!("invalid value '{value}' for '{key}'"),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub omega0: Option<f64>,
}

impl ParamOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourOverrides {
    pub axis1: Option<ContourAxis>,
    pub axis2: Option<ContourAxis>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioName,
    pub params: ParamOverrides,
    /// Zeno measurement interval.
    pub interval: Option<f64>,
    pub horizon: Option<f64>,
    /// Exact number of grid points (overrides the default grid rule).
    pub points: Option<usize>,
    pub contour: ContourOverrides,
    pub out_dir: PathBuf,
    pub oracle: bool,
    pub workers: Option<usize>,
    pub force: bool,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioName) -> Self {
        Self {
            scenario,
            params: ParamOverrides::default(),
            interval: None,
            horizon: None,
            points: None,
            contour: ContourOverrides {
                axis1: None,
                axis2: None,
                min: None,
                max: None,
                resolution: None,
            },
            out_dir: PathBuf::from("out"),
            oracle: false,
            workers: None,
            force: false,
        }
    }

    /// Builds a config from file text. `scenario` may come from the text or
    /// from `fallback`; if both are present they must agree.
    pub fn from_text(text: &str, fallback: Option<ScenarioName>) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let from_file = match pairs.get("scenario") {
            Some((line, v)) => Some(parse_value::<ScenarioName>("scenario", *line, v)?),
            None => None,
        };
        let scenario = match (from_file, fallback) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Validation(format!(
                    "config selects scenario '{a}' but '{b}' was requested"
                )))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(CliError::Validation("no scenario given".into())),
        };
        let mut cfg = Self::new(scenario);
        for (key, (line, value)) in &pairs {
            let line = *line;
            match key.as_str() {
                "scenario" => {}
                "gamma1" => cfg.params.gamma1 = Some(parse_value(key, line, value)?),
                "gamma2" => cfg.params.gamma2 = Some(parse_value(key, line, value)?),
                "lambda1" => cfg.params.lambda1 = Some(parse_value(key, line, value)?),
                "lambda2" => cfg.params.lambda2 = Some(parse_value(key, line, value)?),
                "omega0" => cfg.params.omega0 = Some(parse_value(key, line, value)?),
                "interval" => cfg.interval = Some(parse_value(key, line, value)?),
                "horizon" => cfg.horizon = Some(parse_value(key, line, value)?),
                "points" => cfg.points = Some(parse_value(key, line, value)?),
                "out" => cfg.out_dir = PathBuf::from(value),
                "oracle" => cfg.oracle = parse_value(key, line, value)?,
                "workers" => cfg.workers = Some(parse_value(key, line, value)?),
                "contour_axis1" => cfg.contour.axis1 = Some(parse_value(key, line, value)?),
                "contour_axis2" => cfg.contour.axis2 = Some(parse_value(key, line, value)?),
                "contour_min" => cfg.contour.min = Some(parse_value(key, line, value)?),
                "contour_max" => cfg.contour.max = Some(parse_value(key, line, value)?),
                "contour_resolution" => cfg.contour.resolution = Some(parse_value(key, line, value)?),
                _ => unreachable!("keys are checked in parse_pairs"),
            }
        }
        if scenario != ScenarioName::Custom {
            if let Some(key) = PHYSICAL_KEYS.iter().find(|k| pairs.contains_key(**k)) {
                return Err(CliError::Validation(format!(
                    "scenario '{scenario}' fixes its parameters; '{key}' is only accepted by 'custom'"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path, fallback: Option<ScenarioName>) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_text(&text, fallback)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_values() {
        let cfg = ScenarioConfig::from_text(
            "# header\nscenario = custom\n gamma1 = 0.5  # trailing\ngamma2=1\nlambda1 = 2\nlambda2 = 3\n\nhorizon = 12\noracle = true\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.scenario, ScenarioName::Custom);
        assert_eq!(cfg.params.gamma1, Some(0.5));
        assert_eq!(cfg.params.lambda2, Some(3.0));
        assert_eq!(cfg.horizon, Some(12.0));
        assert!(cfg.oracle);
    }

    #[test]
    fn rejects_malformed_lines() {
        let err = ScenarioConfig::from_text("scenario = custom\ngamma1 0.5\n", None).unwrap_err();
        assert!(matches!(err, CliError::Config { line: 2, .. }));
        assert!(ScenarioConfig::from_text("scenario = custom\nfoo = 1\n", None).is_err());
        assert!(ScenarioConfig::from_text("scenario = custom\nhorizon = 1\nhorizon = 2\n", None).is_err());
        assert!(ScenarioConfig::from_text("scenario = custom\nhorizon = abc\n", None).is_err());
        assert!(ScenarioConfig::from_text("scenario = fig9\n", None).is_err());
    }

    #[test]
    fn named_scenarios_reject_physical_overrides() {
        assert!(ScenarioConfig::from_text("gamma1 = 2\n", Some(ScenarioName::Fig2a)).is_err());
        assert!(ScenarioConfig::from_text("interval = 2\n", Some(ScenarioName::Fig4c)).is_err());
        let ok = ScenarioConfig::from_text("horizon = 4\npoints = 101\n", Some(ScenarioName::Fig2a)).unwrap();
        assert_eq!(ok.points, Some(101));
    }

    #[test]
    fn scenario_must_agree() {
        assert!(ScenarioConfig::from_text("scenario = fig2a\n", Some(ScenarioName::Fig2b)).is_err());
        assert!(ScenarioConfig::from_text("horizon = 1\n", None).is_err());
    }
}
