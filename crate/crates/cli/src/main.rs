use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use pseudomode_cli::output::OutputDir;
use pseudomode_cli::run::{with_workers, ORACLE_HORIZON_CAP};
use pseudomode_cli::{
    plan, run_oracle_suite, run_scenario, run_sweep, sweep_csv, CliError, Result, ScenarioConfig, ScenarioName,
    SweepSpec,
};
use pseudomode_core::ReservoirParams;

#[derive(Parser)]
#[command(name = "pseudomode", version, about = "Pseudomode entanglement-witness scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario (fig2a, fig2b, fig3, fig4a, fig4b, fig4c, custom).
    Run {
        scenario: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the residue / ODE / Lindblad cross-checks.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Overwrite existing output files.
        #[arg(long)]
        force: bool,
    },
    /// Run the oracle suite and print the report.
    Check {
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
    },
    /// Sweep one parameter and write a summary CSV.
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Base parameters (`custom`-style keys); defaults to all rates 1.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
        #[arg(long)]
        interval: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        force: bool,
    },
}

fn load(scenario: Option<ScenarioName>, config: Option<&PathBuf>) -> Result<ScenarioConfig> {
    match config {
        Some(path) => ScenarioConfig::from_file(path, scenario),
        None => scenario
            .map(ScenarioConfig::new)
            .ok_or_else(|| CliError::Validation("no scenario given".into())),
    }
}

fn base_params(cfg: &ScenarioConfig) -> Result<ReservoirParams> {
    let d = ReservoirParams::default();
    let o = &cfg.params;
    Ok(ReservoirParams::with_omega0(
        o.gamma1.unwrap_or(d.gamma1()),
        o.gamma2.unwrap_or(d.gamma2()),
        o.lambda1.unwrap_or(d.lambda1()),
        o.lambda2.unwrap_or(d.lambda2()),
        o.omega0.unwrap_or(d.omega0()),
    )?)
}

fn cmd_run(
    scenario: &str,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    oracle: bool,
    workers: Option<usize>,
    force: bool,
) -> Result<()> {
    let name: ScenarioName = scenario.parse()?;
    let mut cfg = load(Some(name), config.as_ref())?;
    if let Some(dir) = out {
        cfg.out_dir = dir;
    }
    cfg.oracle |= oracle;
    cfg.workers = workers.or(cfg.workers);
    cfg.force = force;
    let result = run_scenario(&cfg);
    let output = match result {
        Ok(o) => o,
        Err(CliError::OracleFailed(msg)) => {
            eprintln!("oracle report written to {}", cfg.out_dir.display());
            return Err(CliError::OracleFailed(msg));
        }
        Err(e) => return Err(e),
    };
    for r in &output.cases {
        println!("{} {}: {} window(s)", output.plan.name, r.case.label, r.trace.windows.len());
        for (i, w) in r.trace.windows.iter().enumerate() {
            println!("  window {i}: [{:.4}, {:.4}] min_leu={:.4}", w.t_start, w.t_end, w.min_leu);
        }
    }
    if let Some(map) = &output.contour {
        let markovian = map.values.iter().filter(|&&n| n < pseudomode_cli::run::MARKOV_THRESHOLD).count();
        println!(
            "{} contour: {}x{} cells, {markovian} Markovian",
            output.plan.name,
            map.axis1_values.len(),
            map.axis2_values.len()
        );
    }
    for r in &output.oracle {
        print!("{r}");
    }
    for f in &output.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_check(scenario: Option<String>, config: Option<PathBuf>, horizon: f64) -> Result<()> {
    let name = scenario.map(|s| s.parse::<ScenarioName>()).transpose()?;
    let targets: Vec<(String, ReservoirParams, f64)> = match (name, &config) {
        (None, None) => vec![("default".into(), ReservoirParams::default(), horizon)],
        _ => {
            let cfg = load(name.or(Some(ScenarioName::Custom)), config.as_ref())?;
            let p = plan(&cfg)?;
            let mut t: Vec<_> = p
                .cases
                .iter()
                .map(|c| (c.label.clone(), c.params, c.horizon.min(ORACLE_HORIZON_CAP)))
                .collect();
            if let Some(spec) = &p.contour {
                t.push(("contour_base".into(), spec.base, horizon));
            }
            t
        }
    };
    let mut failed = Vec::new();
    for (label, params, h) in &targets {
        let report = run_oracle_suite(label, params, *h)?;
        print!("{report}");
        if !report.passed() {
            failed.push(format!("{label}: {}", report.failures().join(", ")));
        }
    }
    if failed.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::OracleFailed(failed.join("; ")))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    param: String,
    from: f64,
    to: f64,
    steps: usize,
    config: Option<PathBuf>,
    horizon: f64,
    interval: Option<f64>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    force: bool,
) -> Result<()> {
    let cfg = match &config {
        Some(path) => ScenarioConfig::from_file(path, Some(ScenarioName::Custom))?,
        None => ScenarioConfig::new(ScenarioName::Custom),
    };
    let spec = SweepSpec {
        param,
        from,
        to,
        steps,
        base: base_params(&cfg)?,
        horizon,
        interval: interval.or(cfg.interval),
    };
    let rows = with_workers(workers.or(cfg.workers), || run_sweep(&spec))??;
    let dir = out.unwrap_or(cfg.out_dir);
    let name = format!("sweep_{}.csv", spec.param);
    let mut files = OutputDir::prepare(&dir, std::slice::from_ref(&name), force)?;
    match files.write(&name, &sweep_csv(&spec.param, &rows)) {
        Ok(path) => println!("wrote {} ({} rows)", path.display(), rows.len()),
        Err(e) => {
            files.rollback();
            return Err(e);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Run {
            scenario,
            config,
            out,
            oracle,
            workers,
            force,
        } => cmd_run(&scenario, config, out, oracle, workers, force),
        Command::Check {
            scenario,
            config,
            horizon,
        } => cmd_check(scenario, config, horizon),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            config,
            horizon,
            interval,
            out,
            workers,
            force,
        } => cmd_sweep(param, from, to, steps, config, horizon, interval, out, workers, force),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
