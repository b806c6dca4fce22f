//! Scenario configuration: TOML-backed, with frequency windows, truncation
//! overrides, and sweep specifications.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AtomParams, DriveComponent, LatticeOptions};
use crate::scalar::Real;

/// Default spectral grid step (units of gamma).
pub const DEFAULT_GRID_STEP: f64 = 0.05;
/// Default relative threshold for peak extraction.
pub const DEFAULT_PEAK_THRESHOLD: f64 = 1e-3;

/// Frequency window selection.
///
/// `Hf` covers the fluorescence structure around the atomic transition:
/// omega0 +- 3.5 max_j max(rabi_j, |delta_a_j|). `Lf` covers the
/// low-frequency emission (0, 3 max_j rabi_j]. String forms: `hf`, `lf`,
/// `a,b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window<T: Real> {
    Hf,
    Lf,
    Custom(T, T),
}

impl<T: Real> Default for Window<T> {
    fn default() -> Self {
        Window::Hf
    }
}

impl<T: Real> FromStr for Window<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hf" => Ok(Window::Hf),
            "lf" => Ok(Window::Lf),
            other => {
                let parts: Vec<&str> = other.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Config(format!(
                        "window must be `hf`, `lf` or `a,b`, got `{other}`"
                    )));
                }
                let a = parts[0].trim().parse::<f64>().map_err(|e| {
                    Error::Config(format!("bad window bound `{}`: {e}", parts[0]))
                })?;
                let b = parts[1].trim().parse::<f64>().map_err(|e| {
                    Error::Config(format!("bad window bound `{}`: {e}", parts[1]))
                })?;
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::Config(format!("window bounds out of order: {a}, {b}")));
                }
                Ok(Window::Custom(T::of(a), T::of(b)))
            }
        }
    }
}

impl<T: Real> std::fmt::Display for Window<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::Hf => write!(f, "hf"),
            Window::Lf => write!(f, "lf"),
            Window::Custom(a, b) => write!(f, "{a},{b}"),
        }
    }
}

impl<T: Real> Serialize for Window<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de, T: Real> Deserialize<'de> for Window<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<T: Real> Window<T> {
    /// Window bounds for a drive set.
    pub fn bounds(&self, omega0: T, drives: &[DriveComponent<T>], step: T) -> (T, T) {
        match *self {
            Window::Custom(a, b) => (a, b),
            Window::Hf => {
                let m = drives
                    .iter()
                    .map(|d| d.rabi.max(d.delta_a.abs()))
                    .fold(T::one(), T::max);
                let w = T::of(3.5) * m;
                (omega0 - w, omega0 + w)
            }
            Window::Lf => {
                let m = drives.iter().map(|d| d.rabi).fold(T::one(), T::max);
                (step, T::of(3.0) * m)
            }
        }
    }

    /// Ascending uniform grid over the window.
    pub fn grid(&self, omega0: T, drives: &[DriveComponent<T>], step: T) -> Vec<T> {
        let (from, to) = self.bounds(omega0, drives, step);
        grid_between(from, to, step)
    }
}

/// Uniform grid [from, to] with spacing `step` (endpoints within roundoff).
pub fn grid_between<T: Real>(from: T, to: T, step: T) -> Vec<T> {
    let count = ((to - from) / step + T::of(1.0 + 1e-9))
        .floor()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    (0..count)
        .map(|k| from + step * T::from_usize(k).unwrap())
        .collect()
}

/// Numerical knobs exposed in configuration files.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances<T: Real> {
    /// Relative tolerance for the frequency-lattice rational snapping.
    pub lattice_rel: T,
    /// Bound on the lattice integers.
    pub max_integer: u64,
    /// Max-norm tolerance of the truncation-doubling loop.
    pub truncation: T,
    /// Local error tolerance of the time-domain oracle integrator.
    pub oracle: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let lat = LatticeOptions::<T>::default();
        Tolerances {
            lattice_rel: lat.rel_tol,
            max_integer: lat.max_integer,
            truncation: T::of(1e-8),
            oracle: T::of(1e-10),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn lattice_options(&self) -> LatticeOptions<T> {
        LatticeOptions {
            rel_tol: self.lattice_rel,
            max_integer: self.max_integer,
        }
    }
}

/// Sweep of one scalar parameter (plus optional linked parameters receiving
/// the same value), `start : step : stop` inclusive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec<T: Real> {
    /// Parameter path, e.g. `drives.1.delta_a` or `omega0`.
    pub path: String,
    /// Additional paths driven to the same value at every sweep point.
    #[serde(default)]
    pub linked: Vec<String>,
    pub start: T,
    pub step: T,
    pub stop: T,
}

impl<T: Real> SweepSpec<T> {
    pub fn values(&self) -> Vec<T> {
        grid_between(self.start, self.stop, self.step)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > T::zero()) || !self.step.is_finite() {
            return Err(Error::Config(format!(
                "sweep step must be > 0, got {}",
                self.step
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.stop < self.start {
            return Err(Error::Config(format!(
                "bad sweep bounds {}..{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn all_paths(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.path.as_str()).chain(self.linked.iter().map(|s| s.as_str()))
    }
}

/// Full scenario description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: serde::Serialize",
    deserialize = "T: serde::de::DeserializeOwned"
))]
pub struct ScenarioConfig<T: Real> {
    #[serde(default)]
    pub name: Option<String>,
    /// Radiative damping constant; the frequency unit. Defaults to 1.
    #[serde(default = "one_t")]
    pub gamma: T,
    pub omega0: T,
    pub drives: Vec<DriveComponent<T>>,
    /// Indices of the near-resonant components averaged into the carrier.
    /// Defaults to the single highest-frequency drive.
    #[serde(default)]
    pub hf_indices: Vec<usize>,
    #[serde(default)]
    pub window: Window<T>,
    #[serde(default = "default_step")]
    pub grid_step: T,
    /// Fixed harmonic cutoff; when absent the lattice default is used.
    #[serde(default)]
    pub l_max: Option<usize>,
    /// Run the truncation-doubling loop instead of a fixed cutoff.
    #[serde(default)]
    pub converge: bool,
    #[serde(default)]
    pub tolerances: Tolerances<T>,
    #[serde(default)]
    pub sweep: Option<SweepSpec<T>>,
    /// Default output path for emitted data.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn one_t<T: Real>() -> T {
    T::one()
}

fn default_step<T: Real>() -> T {
    T::of(DEFAULT_GRID_STEP)
}

impl<T: Real> ScenarioConfig<T> {
    pub fn atom(&self) -> Result<AtomParams<T>> {
        AtomParams::new(self.omega0, self.gamma)
    }

    /// Effective high-frequency index set.
    pub fn hf(&self) -> Vec<usize> {
        if !self.hf_indices.is_empty() {
            return self.hf_indices.clone();
        }
        let mut best = 0usize;
        for (i, d) in self.drives.iter().enumerate() {
            if d.omega > self.drives[best].omega {
                best = i;
            }
        }
        vec![best]
    }

    pub fn scenario_name(&self) -> &str {
        self.name.as_deref().unwrap_or("scenario")
    }

    pub fn validate(&self) -> Result<()> {
        self.atom()?.validate()?;
        if self.drives.is_empty() {
            return Err(Error::Config("at least one drive required".into()));
        }
        for d in &self.drives {
            d.validate()?;
        }
        for &i in &self.hf_indices {
            if i >= self.drives.len() {
                return Err(Error::Config(format!("hf index {i} out of range")));
            }
        }
        if !(self.grid_step > T::zero()) || !self.grid_step.is_finite() {
            return Err(Error::Config(format!(
                "grid step must be > 0, got {}",
                self.grid_step
            )));
        }
        if let Some(sw) = &self.sweep {
            sw.validate()?;
            for p in sw.all_paths() {
                parse_path(p, self.drives.len())?;
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self>
    where
        T: serde::de::DeserializeOwned,
    {
        let cfg: ScenarioConfig<T> =
            toml::from_str(text).map_err(|e| Error::Config(format!("toml parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String
    where
        T: serde::Serialize,
    {
        toml::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Set one scalar parameter through its sweep path.
    pub fn apply_path(&mut self, path: &str, value: T) -> Result<()> {
        match parse_path(path, self.drives.len())? {
            Target::Omega0 => self.omega0 = value,
            Target::Drive(i, field) => {
                let d = &mut self.drives[i];
                match field {
                    DriveField::Omega => d.omega = value,
                    DriveField::Phi => d.phi = value,
                    DriveField::Rabi => d.rabi = value,
                    DriveField::DeltaA => d.delta_a = value,
                    DriveField::DeltaS => d.delta_s = value,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum DriveField {
    Omega,
    Phi,
    Rabi,
    DeltaA,
    DeltaS,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Omega0,
    Drive(usize, DriveField),
}

/// Parse `omega0` or `drives.<index>.<field>` (also `drives[<index>].<field>`).
fn parse_path(path: &str, n_drives: usize) -> Result<Target> {
    let p = path.trim();
    if p == "omega0" {
        return Ok(Target::Omega0);
    }
    let norm = p.replace('[', ".").replace(']', "");
    let parts: Vec<&str> = norm.split('.').filter(|s| !s.is_empty()).collect();
    if parts.len() == 3 && parts[0] == "drives" {
        let idx: usize = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad drive index in `{path}`")))?;
        if idx >= n_drives {
            return Err(Error::Config(format!(
                "drive index {idx} out of range in `{path}`"
            )));
        }
        let field = match parts[2] {
            "omega" => DriveField::Omega,
            "phi" => DriveField::Phi,
            "rabi" => DriveField::Rabi,
            "delta_a" => DriveField::DeltaA,
            "delta_s" => DriveField::DeltaS,
            other => {
                return Err(Error::Config(format!(
                    "unknown drive field `{other}` in `{path}`"
                )))
            }
        };
        return Ok(Target::Drive(idx, field));
    }
    Err(Error::Config(format!(
        "cannot parse sweep path `{path}` (expected `omega0` or `drives.<i>.<field>`)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4_TOML: &str = r#"
name = "fig4"
omega0 = 5000.0
hf_indices = [0]
window = "hf"

[[drives]]
omega = 5000.0
rabi = 20.0
delta_a = 20.0

[[drives]]
omega = 20.0
rabi = 2.0
delta_a = 2.0
"#;

    #[test]
    fn toml_round_trip() {
        let cfg: ScenarioConfig<f64> = ScenarioConfig::from_toml(FIG4_TOML).unwrap();
        assert_eq!(cfg.gamma, 1.0);
        assert_eq!(cfg.drives.len(), 2);
        assert_eq!(cfg.drives[0].phi, 0.0);
        assert_eq!(cfg.drives[1].delta_a, 2.0);
        let text = cfg.to_toml();
        let back: ScenarioConfig<f64> = ScenarioConfig::from_toml(&text).unwrap();
        assert_eq!(back.drives, cfg.drives);
        assert_eq!(back.window, cfg.window);
    }

    #[test]
    fn window_parsing() {
        assert_eq!("hf".parse::<Window<f64>>().unwrap(), Window::Hf);
        assert_eq!("lf".parse::<Window<f64>>().unwrap(), Window::Lf);
        assert_eq!(
            "4930, 5070".parse::<Window<f64>>().unwrap(),
            Window::Custom(4930.0, 5070.0)
        );
        assert!("5070,4930".parse::<Window<f64>>().is_err());
        assert!("xyz".parse::<Window<f64>>().is_err());
    }

    #[test]
    fn hf_window_uses_largest_coupling() {
        let cfg: ScenarioConfig<f64> = ScenarioConfig::from_toml(FIG4_TOML).unwrap();
        let (a, b) = cfg.window.bounds(5000.0, &cfg.drives, 0.05);
        assert_eq!(a, 5000.0 - 70.0);
        assert_eq!(b, 5000.0 + 70.0);
        let g = cfg.window.grid(5000.0, &cfg.drives, 0.05);
        assert_eq!(g.len(), 2801);
        assert_eq!(g[0], 4930.0);
    }

    #[test]
    fn sweep_paths_and_values() {
        let mut cfg: ScenarioConfig<f64> = ScenarioConfig::from_toml(FIG4_TOML).unwrap();
        cfg.apply_path("drives.1.delta_a", 7.0).unwrap();
        assert_eq!(cfg.drives[1].delta_a, 7.0);
        cfg.apply_path("drives[0].rabi", 15.0).unwrap();
        assert_eq!(cfg.drives[0].rabi, 15.0);
        cfg.apply_path("omega0", 4000.0).unwrap();
        assert_eq!(cfg.omega0, 4000.0);
        assert!(cfg.apply_path("drives.5.rabi", 1.0).is_err());
        assert!(cfg.apply_path("nonsense", 1.0).is_err());

        let sw = SweepSpec::<f64> {
            path: "drives.1.delta_a".into(),
            linked: vec![],
            start: 0.0,
            step: 1.0,
            stop: 40.0,
        };
        assert_eq!(sw.values().len(), 41);
        assert_eq!(*sw.values().last().unwrap(), 40.0);
    }

    #[test]
    fn zero_step_sweep_is_config_error() {
        let mut cfg: ScenarioConfig<f64> = ScenarioConfig::from_toml(FIG4_TOML).unwrap();
        cfg.sweep = Some(SweepSpec {
            path: "drives.1.delta_a".into(),
            linked: vec![],
            start: 0.0,
            step: 0.0,
            stop: 40.0,
        });
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn default_hf_selection_takes_highest_tone() {
        let mut cfg: ScenarioConfig<f64> = ScenarioConfig::from_toml(FIG4_TOML).unwrap();
        cfg.hf_indices.clear();
        assert_eq!(cfg.hf(), vec![0]);
    }
}
