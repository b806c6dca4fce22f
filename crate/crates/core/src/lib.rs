//! Incoherent resonance-fluorescence spectra of a polar two-level emitter
//! driven by a commensurable polychromatic field.
//!
//! A polar emitter (permanent dipole moments unequal between ground and
//! excited state) driven by several phase-locked tones radiates both near
//! its transition frequency and at low frequencies of the order of the Rabi
//! frequency. This crate computes the incoherent part of that spectrum two
//! independent ways:
//!
//! * [`floquet`] + [`regression`] — the production path: expand the
//!   rotating-frame Bloch equations in harmonics of the fundamental lattice
//!   frequency, solve the truncated steady hierarchy, then scan the
//!   Laplace-domain correlation system `(a0 + z I) y = rhs` along
//!   `z = -i (omega - omega_s)`, one banded factorization per grid point
//!   (with an eigendecomposition resolvent as a cross-check path);
//! * [`oracle`] — the ground truth: direct adaptive integration of the
//!   lab-frame Bloch equations with every drive oscillation explicit, the
//!   quantum regression theorem for two-time correlators, and a windowed
//!   Fourier integral. Used at reduced carrier frequencies to validate the
//!   harmonic machinery end to end.
//!
//! All frequencies are measured in units of the radiative damping constant
//! gamma. Scenario configuration, figure presets and CSV emission live in
//! [`config`], [`presets`] and [`pipeline`].
//!
//! Everything numerical is generic over the real scalar type through
//! [`scalar::Real`]; the aliases below fix the production types at `f64`.

pub mod analysis;
pub mod config;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod pipeline;
pub mod presets;
pub mod regression;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Complex double — the production scalar.
pub type C64 = scalar::C<f64>;
/// Scenario configuration at production precision.
pub type Scenario = config::ScenarioConfig<f64>;
/// Spectrum series at production precision.
pub type Spectrum = regression::SpectrumSeries<f64>;
/// Harmonic steady state at production precision.
pub type Steady = floquet::HarmonicState<f64>;
/// Peak report at production precision.
pub type Peaks = analysis::PeakReport<f64>;
