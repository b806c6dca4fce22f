//! End-to-end scenario orchestration and data emission.
//!
//! `run_scenario` wires the full chain model -> steady hierarchy ->
//! correlation system -> spectrum -> peaks; `run_sweep` repeats it over one
//! swept parameter with a shared frequency grid so series stay comparable.
//! Emitted CSV carries full round-trip precision (17 significant digits).

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::analysis::{find_peaks, PeakReport};
use crate::config::{ScenarioConfig, DEFAULT_PEAK_THRESHOLD};
use crate::error::{Error, Result};
use crate::floquet::{
    assemble_steady, converge_truncation, solve_steady, HarmonicState, Truncation,
};
use crate::model::{build_lattice, DriveComponent, FrequencyLattice};
use crate::oracle::{oracle_spectrum, OracleOptions};
use crate::regression::{CorrelationSystem, SeriesMeta, SpectrumSeries};
use crate::scalar::Real;

/// Everything a single scenario run produces.
#[derive(Debug)]
pub struct ScenarioResult<T: Real> {
    pub series: SpectrumSeries<T>,
    pub peaks: PeakReport<T>,
    pub state: HarmonicState<T>,
    pub lattice: FrequencyLattice<T>,
    pub l_max: usize,
}

/// Sweep output: one series per sweep value, on one common grid.
#[derive(Debug)]
pub struct SweepResult<T: Real> {
    pub values: Vec<T>,
    pub results: Vec<Option<ScenarioResult<T>>>,
    /// (sweep value, error message) for failed points.
    pub failures: Vec<(T, String)>,
}

impl<T: Real> SweepResult<T> {
    pub fn series(&self) -> impl Iterator<Item = (T, &SpectrumSeries<T>)> {
        self.values
            .iter()
            .zip(&self.results)
            .filter_map(|(&v, r)| r.as_ref().map(|r| (v, &r.series)))
    }
}

/// Steady state for a validated configuration, honoring the truncation
/// override and the optional doubling loop.
fn steady_state<T: Real>(
    cfg: &ScenarioConfig<T>,
    drives: &[DriveComponent<T>],
    lattice: &FrequencyLattice<T>,
) -> Result<(HarmonicState<T>, usize)> {
    let atom = cfg.atom()?;
    let start = cfg
        .l_max
        .map(Truncation::new)
        .unwrap_or_else(|| Truncation::default_for(lattice));
    if cfg.converge {
        converge_truncation(&atom, drives, lattice, start.l_max, cfg.tolerances.truncation)
    } else {
        let state = solve_steady(&assemble_steady(&atom, drives, lattice, start)?)?;
        Ok((state, start.l_max))
    }
}

/// Run the full pipeline for one configuration (ignores any sweep spec).
pub fn run_scenario<T: Real>(cfg: &ScenarioConfig<T>) -> Result<ScenarioResult<T>> {
    run_scenario_on_grid(cfg, None)
}

fn run_scenario_on_grid<T: Real>(
    cfg: &ScenarioConfig<T>,
    grid_override: Option<&[T]>,
) -> Result<ScenarioResult<T>> {
    let name = cfg.scenario_name().to_string();
    let wrap = |e: Error| e.with_context(&name);
    cfg.validate().map_err(wrap)?;
    let started = Instant::now();

    let atom = cfg.atom().map_err(wrap)?;
    let lattice = build_lattice(
        &atom,
        &cfg.drives,
        &cfg.hf(),
        &cfg.tolerances.lattice_options(),
    )
    .map_err(wrap)?;
    let drives = lattice.snapped_drives(&cfg.drives);

    let (state, l_max) = steady_state(cfg, &drives, &lattice).map_err(wrap)?;
    let sys = CorrelationSystem::build(&atom, &drives, &lattice, &state).map_err(wrap)?;

    let grid = match grid_override {
        Some(g) => g.to_vec(),
        None => cfg.window.grid(cfg.omega0, &drives, cfg.grid_step),
    };
    let mut series = sys.spectrum(&grid, &name).map_err(wrap)?;
    series.meta.l_max = l_max;
    series.meta.elapsed_secs = Some(started.elapsed().as_secs_f64());

    let peaks = peaks_or_empty(&series)?;
    Ok(ScenarioResult {
        series,
        peaks,
        state,
        lattice,
        l_max,
    })
}

/// Peak extraction that treats an all-zero spectrum as "no peaks" rather
/// than an error; genuine analysis errors still surface.
fn peaks_or_empty<T: Real>(series: &SpectrumSeries<T>) -> Result<PeakReport<T>> {
    match find_peaks(series, T::of(DEFAULT_PEAK_THRESHOLD)) {
        Ok(r) => Ok(r),
        Err(Error::EmptySpectrum) => Ok(PeakReport {
            peaks: Vec::new(),
            spacings: Vec::new(),
            rel_threshold: T::of(DEFAULT_PEAK_THRESHOLD),
        }),
        Err(e) => Err(e),
    }
}

/// Run the sweep declared in the configuration.
///
/// Every point runs on the union of the per-point windows so that series are
/// pointwise comparable; failures are collected without aborting the rest.
pub fn run_sweep<T: Real>(cfg: &ScenarioConfig<T>) -> Result<SweepResult<T>> {
    cfg.validate()?;
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| Error::Config("configuration has no [sweep] section".into()))?;
    let values = sweep.values();

    // union window across sweep values
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for &v in &values {
        let mut point = cfg.clone();
        for path in sweep.all_paths() {
            point.apply_path(path, v)?;
        }
        let (a, b) = point
            .window
            .bounds(point.omega0, &point.drives, point.grid_step);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let grid = crate::config::grid_between(lo, hi, cfg.grid_step);

    let mut results = Vec::with_capacity(values.len());
    let mut failures = Vec::new();
    for &v in &values {
        let mut point = cfg.clone();
        point.name = Some(format!(
            "{}@{}={}",
            cfg.scenario_name(),
            sweep.path,
            v
        ));
        for path in sweep.all_paths() {
            point.apply_path(path, v)?;
        }
        match run_scenario_on_grid(&point, Some(&grid)) {
            Ok(r) => results.push(Some(r)),
            Err(e) => {
                failures.push((v, e.to_string()));
                results.push(None);
            }
        }
    }
    Ok(SweepResult {
        values,
        results,
        failures,
    })
}

/// Time-domain oracle spectrum for a configuration (reduced-scale work).
pub fn run_oracle<T: Real>(cfg: &ScenarioConfig<T>) -> Result<SpectrumSeries<T>> {
    cfg.validate()?;
    let atom = cfg.atom()?;
    if cfg.omega0 / cfg.gamma > T::of(1000.0) {
        return Err(Error::Config(
            "the time-domain oracle is meant for reduced carriers (omega0 <= 1000 gamma); \
             use the harmonic solver for full-scale scenarios"
                .into(),
        ));
    }
    let lattice = build_lattice(
        &atom,
        &cfg.drives,
        &cfg.hf(),
        &cfg.tolerances.lattice_options(),
    )?;
    let drives = lattice.snapped_drives(&cfg.drives);
    let grid = cfg.window.grid(cfg.omega0, &drives, cfg.grid_step);
    let opts = OracleOptions {
        tol: cfg.tolerances.oracle,
        ..OracleOptions::default()
    };
    let mut series = oracle_spectrum(&atom, &drives, &lattice, &grid, &opts)?;
    series.meta.scenario = format!("{} (oracle)", cfg.scenario_name());
    Ok(series)
}

fn fmt_full<T: Real>(v: T) -> String {
    // 17 significant digits: lossless round trip for f64
    format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN))
}

/// Series CSV: comment header with scenario echo and residuals, then
/// `omega,s` rows at full precision.
pub fn series_to_csv<T: Real>(series: &SpectrumSeries<T>) -> String {
    let mut out = String::new();
    let m = &series.meta;
    let _ = writeln!(out, "# scenario: {}", m.scenario);
    let _ = writeln!(out, "# l_max: {}", m.l_max);
    let _ = writeln!(out, "# residual_steady: {:e}", m.residual_steady);
    let _ = writeln!(out, "# residual_max: {:e}", m.residual_max);
    out.push_str("omega,s\n");
    for (w, s) in series.omega.iter().zip(&series.s) {
        let _ = writeln!(out, "{},{}", fmt_full(*w), fmt_full(*s));
    }
    out
}

/// Parse a series CSV produced by [`series_to_csv`].
pub fn series_from_csv<T: Real>(text: &str) -> Result<SpectrumSeries<T>> {
    let mut meta = SeriesMeta::default();
    let mut omega = Vec::new();
    let mut s = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "omega,s" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                let v = v.trim();
                match k.trim() {
                    "scenario" => meta.scenario = v.to_string(),
                    "l_max" => meta.l_max = v.parse().unwrap_or(0),
                    "residual_steady" => meta.residual_steady = v.parse().unwrap_or(f64::NAN),
                    "residual_max" => meta.residual_max = v.parse().unwrap_or(f64::NAN),
                    _ => {}
                }
            }
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("bad csv row `{line}`")))?;
        let parse = |t: &str| -> Result<T> {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad number `{t}`: {e}")))
                .map(T::of)
        };
        omega.push(parse(a)?);
        s.push(parse(b)?);
    }
    if omega.is_empty() {
        return Err(Error::Config("csv contains no data rows".into()));
    }
    Ok(SpectrumSeries { omega, s, meta })
}

/// Long-format sweep CSV: `sweep_value,omega,s`.
pub fn sweep_to_csv<T: Real>(sweep: &SweepResult<T>, scenario: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# scenario: {scenario}");
    for (v, msg) in &sweep.failures {
        let _ = writeln!(out, "# failed: {} ({msg})", fmt_full(*v));
    }
    out.push_str("sweep_value,omega,s\n");
    for (v, series) in sweep.series() {
        for (w, s) in series.omega.iter().zip(&series.s) {
            let _ = writeln!(out, "{},{},{}", fmt_full(v), fmt_full(*w), fmt_full(*s));
        }
    }
    out
}

/// Peak report with a scenario echo header.
pub fn peaks_to_text<T: Real>(report: &PeakReport<T>, scenario: &str) -> String {
    format!("# scenario: {scenario}\n{}", report.to_table())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}
