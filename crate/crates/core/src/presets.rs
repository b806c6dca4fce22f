//! Built-in demonstration scenarios, one per bundled figure of the survey
//! the crate ships with, plus reduced-carrier analogs for oracle work.
//!
//! All parameters are in units of gamma = 1. The bichromatic family drives a
//! resonant high-frequency tone plus a low-frequency tone at the Rabi
//! frequency; the trichromatic family drives a symmetrically detuned pair
//! plus the low-frequency tone.

use crate::config::{ScenarioConfig, SweepSpec, Tolerances, Window};
use crate::error::{Error, Result};
use crate::model::DriveComponent;
use crate::scalar::Real;

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 10] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
];

fn drive<T: Real>(omega: f64, rabi: f64, delta_a: f64) -> DriveComponent<T> {
    DriveComponent {
        omega: T::of(omega),
        phi: T::zero(),
        rabi: T::of(rabi),
        delta_a: T::of(delta_a),
        delta_s: T::zero(),
    }
}

fn base<T: Real>(name: &str, drives: Vec<DriveComponent<T>>, hf: Vec<usize>) -> ScenarioConfig<T> {
    ScenarioConfig {
        name: Some(name.to_string()),
        gamma: T::one(),
        omega0: T::of(5000.0),
        drives,
        hf_indices: hf,
        window: Window::Hf,
        grid_step: T::of(crate::config::DEFAULT_GRID_STEP),
        l_max: None,
        converge: false,
        tolerances: Tolerances::default(),
        sweep: None,
        out: None,
    }
}

/// Bichromatic family: resonant tone (rabi 20, asymmetry `da1`) plus a
/// low-frequency tone at omega = 20 with amplitude knobs `r2`, `da2`.
fn bichromatic<T: Real>(name: &str, da1: f64, r2: f64, da2: f64) -> ScenarioConfig<T> {
    base(
        name,
        vec![drive(5000.0, 20.0, da1), drive(20.0, r2, da2)],
        vec![0],
    )
}

/// Trichromatic family: pair at 5000 -+ 20 (rabi 20 each) plus the
/// low-frequency tone at 20.
fn trichromatic<T: Real>(name: &str, da12: f64, r3: f64, da3: f64) -> ScenarioConfig<T> {
    base(
        name,
        vec![
            drive(4980.0, 20.0, da12),
            drive(5020.0, 20.0, da12),
            drive(20.0, r3, da3),
        ],
        vec![0, 1],
    )
}

/// Figure preset by name.
pub fn preset<T: Real>(name: &str) -> Result<ScenarioConfig<T>> {
    let cfg = match name {
        // monochromatic resonant drive: the plain fluorescence triplet
        "fig1" => base("fig1", vec![drive(5000.0, 20.0, 0.0)], vec![0]),
        // same drive on a polar system: high-frequency window barely moves
        "fig2" => base("fig2", vec![drive(5000.0, 20.0, 20.0)], vec![0]),
        // polar monochromatic, low-frequency window: peak near the Rabi
        // frequency
        "fig3" => {
            let mut c = base("fig3", vec![drive(5000.0, 20.0, 20.0)], vec![0]);
            c.window = Window::Lf;
            c
        }
        // weak low-frequency tone splits the central peak
        "fig4" => bichromatic("fig4", 20.0, 2.0, 2.0),
        // deeper splitting: doublet plus two side triplets
        "fig5" => bichromatic("fig5", 20.0, 6.0, 6.0),
        // strong low-frequency tone: equidistant nine-peak spectrum
        "fig6" => bichromatic("fig6", 20.0, 40.0, 40.0),
        // sweep of the low-frequency amplitude, rabi and asymmetry locked
        "fig7" => {
            let mut c = bichromatic("fig7", 20.0, 0.0, 0.0);
            c.sweep = Some(SweepSpec {
                path: "drives.1.delta_a".into(),
                linked: vec!["drives.1.rabi".into()],
                start: T::zero(),
                step: T::one(),
                stop: T::of(40.0),
            });
            c
        }
        // non-polar trichromatic comb
        "fig8" => trichromatic("fig8", 0.0, 20.0, 0.0),
        // polar pair, no low-frequency tone: low-frequency comb
        "fig9" => {
            let mut c = trichromatic("fig9", 20.0, 0.0, 0.0);
            c.window = Window::Lf;
            c
        }
        // transistor sweep: low-frequency asymmetry throttles the comb
        "fig10" => {
            let mut c = trichromatic("fig10", 20.0, 20.0, 0.0);
            c.sweep = Some(SweepSpec {
                path: "drives.2.delta_a".into(),
                linked: vec![],
                start: T::zero(),
                step: T::of(2.0),
                stop: T::of(40.0),
            });
            c
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}` (expected {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(cfg)
}

/// Reduced-carrier analog (omega0 = 200 gamma) for time-domain validation;
/// available for `fig1`, `fig4` and `fig8`. Amplitude ratios are preserved
/// at half scale so that gamma << rabi << omega0 still holds.
pub fn reduced_analog<T: Real>(name: &str) -> Result<ScenarioConfig<T>> {
    let mut cfg = match name {
        "fig1" => base("fig1-reduced", vec![drive(200.0, 10.0, 0.0)], vec![0]),
        "fig4" => base(
            "fig4-reduced",
            vec![drive(200.0, 10.0, 10.0), drive(10.0, 1.0, 1.0)],
            vec![0],
        ),
        "fig8" => base(
            "fig8-reduced",
            vec![
                drive(190.0, 10.0, 0.0),
                drive(210.0, 10.0, 0.0),
                drive(10.0, 10.0, 0.0),
            ],
            vec![0, 1],
        ),
        other => {
            return Err(Error::Config(format!(
                "no reduced analog for `{other}` (have fig1, fig4, fig8)"
            )))
        }
    };
    cfg.omega0 = T::of(200.0);
    Ok(cfg)
}
