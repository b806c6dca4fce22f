//! Command line front end: run scenarios from TOML configs or built-in
//! figure presets, sweep parameters, and emit CSV/peak-table data.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resfluor::config::Window;
use resfluor::pipeline;
use resfluor::presets;
use resfluor::Scenario;

#[derive(Parser)]
#[command(
    name = "resfluor",
    about = "Incoherent resonance-fluorescence spectra of a polar two-level emitter \
             under polychromatic driving",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a TOML configuration file.
    Run {
        /// Path to the configuration file.
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a built-in figure preset (fig1 .. fig10).
    Preset {
        /// Preset name; fig7 and fig10 carry parameter sweeps.
        name: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the parameter sweep declared in a configuration file.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Time-domain oracle spectrum for a reduced-scale configuration.
    Oracle {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Harmonic cutoff override.
    #[arg(long)]
    lmax: Option<usize>,
    /// Frequency grid step (units of gamma).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Window: hf, lf or a,b (units of gamma).
    #[arg(long)]
    window: Option<String>,
    /// Output path (derived companion files share the stem).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation-doubling tolerance; also enables the doubling loop.
    #[arg(long)]
    tol: Option<f64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut Scenario) -> resfluor::Result<()> {
        if let Some(l) = self.lmax {
            cfg.l_max = Some(l);
        }
        if let Some(s) = self.grid_step {
            cfg.grid_step = s;
        }
        if let Some(w) = &self.window {
            cfg.window = w.parse::<Window<f64>>()?;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(t) = self.tol {
            cfg.tolerances.truncation = t;
            cfg.tolerances.oracle = t.max(1e-12).min(1e-6);
            cfg.converge = true;
        }
        Ok(())
    }
}

fn load_config(path: &Path) -> resfluor::Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    Scenario::from_toml(&text)
}

fn out_path(cfg: &Scenario, fallback: &str) -> PathBuf {
    cfg.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{fallback}.csv")))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}{suffix}"))
}

fn run_single(cfg: &Scenario) -> resfluor::Result<()> {
    let result = pipeline::run_scenario(cfg)?;
    let out = out_path(cfg, cfg.scenario_name());
    pipeline::write_text(&out, &pipeline::series_to_csv(&result.series))?;
    let peaks_path = with_suffix(&out, ".peaks.txt");
    pipeline::write_text(
        &peaks_path,
        &pipeline::peaks_to_text(&result.peaks, cfg.scenario_name()),
    )?;
    eprintln!(
        "{}: {} points, l_max {}, steady residual {:.2e}, scan residual {:.2e}{}",
        cfg.scenario_name(),
        result.series.omega.len(),
        result.l_max,
        result.series.meta.residual_steady,
        result.series.meta.residual_max,
        result
            .series
            .meta
            .elapsed_secs
            .map(|s| format!(", {s:.2} s"))
            .unwrap_or_default()
    );
    println!("{}", out.display());
    println!("{}", peaks_path.display());
    Ok(())
}

fn run_sweep_cmd(cfg: &Scenario) -> resfluor::Result<()> {
    let sweep = pipeline::run_sweep(cfg)?;
    let out = out_path(cfg, &format!("{}-sweep", cfg.scenario_name()));
    pipeline::write_text(&out, &pipeline::sweep_to_csv(&sweep, cfg.scenario_name()))?;
    for (v, msg) in &sweep.failures {
        eprintln!("sweep value {v}: FAILED: {msg}");
    }
    eprintln!(
        "{}: {} sweep values, {} failed",
        cfg.scenario_name(),
        sweep.values.len(),
        sweep.failures.len()
    );
    println!("{}", out.display());
    if !sweep.failures.is_empty() {
        return Err(resfluor::Error::NoConvergence(format!(
            "{} sweep value(s) failed; partial results written to {}",
            sweep.failures.len(),
            out.display()
        )));
    }
    Ok(())
}

fn run_oracle_cmd(cfg: &Scenario) -> resfluor::Result<()> {
    let series = pipeline::run_oracle(cfg)?;
    let out = out_path(cfg, &format!("{}-oracle", cfg.scenario_name()));
    pipeline::write_text(&out, &pipeline::series_to_csv(&series))?;
    println!("{}", out.display());
    Ok(())
}

fn dispatch(cli: Cli) -> resfluor::Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            run_single(&cfg)
        }
        Command::Preset { name, overrides } => {
            let mut cfg = presets::preset::<f64>(&name)?;
            overrides.apply(&mut cfg)?;
            if cfg.sweep.is_some() {
                run_sweep_cmd(&cfg)
            } else {
                run_single(&cfg)
            }
        }
        Command::Sweep { config, overrides } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            run_sweep_cmd(&cfg)
        }
        Command::Oracle { config, overrides } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            run_oracle_cmd(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
