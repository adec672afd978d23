//! CSV, matrix, plot-script and manifest emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pseudomode_core::{ContourMap, WitnessTrace, WitnessWindow};

use crate::error::{CliError, Result};

pub const TRAJECTORY_HEADER: &str = "t,survival,concurrence,leu,eur_lhs";
pub const WINDOWS_HEADER: &str = "window_index,t_start,t_end,min_leu";

/// Twelve significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    // Normalise -0 so that identical values always print identically.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn trajectory_csv(trace: &WitnessTrace, survival: &[f64], concurrence: &[f64]) -> String {
    let mut s = String::with_capacity(80 * trace.times.len());
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for k in 0..trace.times.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_num(trace.times[k]),
            fmt_num(survival[k]),
            fmt_num(concurrence[k]),
            fmt_num(trace.leu[k]),
            fmt_num(trace.eur_lhs[k]),
        );
    }
    s
}

pub fn windows_csv(windows: &[WitnessWindow]) -> String {
    let mut s = String::from(WINDOWS_HEADER);
    s.push('\n');
    for (i, w) in windows.iter().enumerate() {
        let _ = writeln!(s, "{i},{},{},{}", fmt_num(w.t_start), fmt_num(w.t_end), fmt_num(w.min_leu));
    }
    s
}

pub fn contour_csv(map: &ContourMap) -> String {
    let mut s = format!("{},{},n,horizon_exhausted\n", map.axis1, map.axis2);
    for (j, y) in map.axis2_values.iter().enumerate() {
        for (i, x) in map.axis1_values.iter().enumerate() {
            let k = j * map.axis1_values.len() + i;
            let _ = writeln!(
                s,
                "{},{},{},{}",
                fmt_num(*x),
                fmt_num(*y),
                fmt_num(map.values[k]),
                u8::from(map.exhausted[k])
            );
        }
    }
    s
}

/// Gnuplot "nonuniform matrix" layout: the first row holds the column count
/// followed by the first-axis values, every other row a second-axis value
/// followed by its `N` values.
pub fn contour_matrix(map: &ContourMap) -> String {
    let mut s = String::new();
    s.push_str(&map.axis1_values.len().to_string());
    for x in &map.axis1_values {
        s.push(' ');
        s.push_str(&fmt_num(*x));
    }
    s.push('\n');
    for (j, y) in map.axis2_values.iter().enumerate() {
        s.push_str(&fmt_num(*y));
        for i in 0..map.axis1_values.len() {
            s.push(' ');
            s.push_str(&fmt_num(map.get(i, j)));
        }
        s.push('\n');
    }
    s
}

/// Standalone gnuplot script over the emitted data files.
pub struct PlotScript {
    scenario: String,
    body: String,
}

impl PlotScript {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            body: String::new(),
        }
    }

    pub fn trajectory(&mut self, label: &str, csv: &str, threshold: f64) {
        let _ = write!(
            self.body,
            "set output '{scenario}_{label}.png'\n\
             set title '{label}'\n\
             set xlabel 't'\n\
             set datafile separator ','\n\
             plot '{csv}' using 1:3 with lines title 'concurrence', \\\n\
             \x20    '' using 1:4 with lines title 'LEU', \\\n\
             \x20    '' using 1:5 with lines dashtype 2 title 'EUR', \\\n\
             \x20    1 with lines lc rgb 'gray' notitle, \\\n\
             \x20    {threshold} with lines dashtype 3 lc rgb 'gray' title 'C*'\n\n",
            scenario = self.scenario,
        );
    }

    pub fn contour(&mut self, matrix_file: &str, axis1: &str, axis2: &str) {
        let _ = write!(
            self.body,
            "set output '{scenario}_contour.png'\n\
             set title 'non-Markovianity N'\n\
             set datafile separator whitespace\n\
             set xlabel '{axis1}'\n\
             set ylabel '{axis2}'\n\
             set view map\n\
             plot '{matrix_file}' nonuniform matrix with image notitle\n\n",
            scenario = self.scenario,
        );
    }

    pub fn render(&self) -> String {
        format!("set terminal pngcairo size 900,600\n\n{}", self.body)
    }
}

/// Files of one run. Existing files are only replaced with `force`; on
/// failure everything written so far is removed again.
pub struct OutputDir {
    dir: PathBuf,
    force: bool,
    written: Vec<PathBuf>,
    created_dir: bool,
}

impl OutputDir {
    pub fn prepare(dir: &Path, names: &[String], force: bool) -> Result<Self> {
        let created_dir = !dir.exists();
        if !force {
            for name in names {
                let path = dir.join(name);
                if path.exists() {
                    return Err(CliError::Exists(path));
                }
            }
        }
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            force,
            written: Vec::new(),
            created_dir,
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if !self.force && path.exists() {
            return Err(CliError::Exists(path));
        }
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_files(self) -> Vec<PathBuf> {
        self.written
    }

    /// Removes every file written by this run (and the directory if this run
    /// created it and it is now empty).
    pub fn rollback(self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// Flat `key = value` text.
#[derive(Debug, Default)]
pub struct Manifest(Vec<(String, String)>);

impl Manifest {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}
