//! Two-time correlation system in the Laplace domain and the incoherent
//! spectrum.
//!
//! By the quantum regression theorem the subtracted correlators obey the same
//! hierarchy as the single-time amplitudes, minus the spontaneous-emission
//! inhomogeneity. Laplace transforming in the delay gives, per shift z,
//!
//! ```text
//! (a0 + z I) ybar = rhs(X),
//! ```
//!
//! where a0 is the negated generator (identical off-diagonal stencil to the
//! steady matrix) and the right-hand side is built from steady-state harmonic
//! convolutions. The incoherent spectrum is the real part of the zero-order
//! Y1 component along the contour z = -i (omega - omega_s):
//!
//! ```text
//! S_inc(omega) = (Gamma / pi) Re ybar_1^(0)(z),   z = -i (omega - omega_s),
//! ```
//!
//! with the proportionality constant fixed to one.

use nalgebra::RealField;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::floquet::{HarmonicState, Stencil, Truncation};
use crate::linalg::banded::BandLu;
use crate::linalg::resolvent::ResolventEigen;
use crate::linalg::sparse::CsrMatrix;
use crate::linalg::ShiftedSolver;
use crate::model::{AtomParams, DriveComponent, FrequencyLattice};
use crate::scalar::{cre, czero, Real, C};

/// Residual contract for the per-shift solves, relative to ||rhs||_inf.
pub const CORRELATION_RESIDUAL_TOL: f64 = 1e-10;

/// Frequency series of incoherent spectral density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSeries<T: Real> {
    /// Frequency grid (units of gamma), ascending.
    pub omega: Vec<T>,
    /// Incoherent spectral density, arbitrary units with the proportionality
    /// constant fixed to 1.
    pub s: Vec<T>,
    pub meta: SeriesMeta,
}

/// Provenance of a computed series.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub scenario: String,
    pub l_max: usize,
    /// Relative residual of the steady solve feeding the right-hand side.
    pub residual_steady: f64,
    /// Worst relative residual over all shifted solves of the scan.
    pub residual_max: f64,
    /// Wall-clock seconds; diagnostic only, never serialized into data files.
    #[serde(skip)]
    pub elapsed_secs: Option<f64>,
}

impl<T: Real> SpectrumSeries<T> {
    pub fn max_value(&self) -> T {
        self.s.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min_value(&self) -> T {
        self.s.iter().copied().fold(T::infinity(), T::min)
    }

    /// Numerical positivity: min(s) >= -floor * max(s).
    pub fn positivity_violation(&self, floor: T) -> Option<(T, T)> {
        let mx = self.max_value();
        let mn = self.min_value();
        (mn < -floor * mx.max(T::zero())).then_some((mn, mx))
    }
}

/// Right-hand sides of the Laplace hierarchy from the steady amplitudes:
/// the delay-zero values of the subtracted correlators, harmonic by harmonic.
pub fn build_rhs<T: Real>(state: &HarmonicState<T>) -> Vec<C<T>> {
    let trunc = Truncation::new(state.l_max);
    let lm = state.l_max as i64;
    let half = cre(T::of(0.5));
    let mut rhs = vec![czero(); trunc.dim()];
    for l in -lm..=lm {
        // Y1: 1/2 delta_{l,0} + x3(l) - sum_r x1(l-r) x2(r)
        let mut y1 = if l == 0 { half } else { czero() };
        y1 += state.get(2, l);
        // Y2: -sum_r x2(l-r) x2(r)
        let mut y2 = czero();
        // Y3: -x2(l)/2 - sum_r x3(r) x2(l-r)
        let mut y3 = -half * state.get(1, l);
        for r in -lm..=lm {
            let lr = l - r;
            if lr.unsigned_abs() as usize > state.l_max {
                continue;
            }
            y1 -= state.get(0, lr) * state.get(1, r);
            y2 -= state.get(1, lr) * state.get(1, r);
            y3 -= state.get(2, r) * state.get(1, lr);
        }
        rhs[trunc.index(0, l)] = y1;
        rhs[trunc.index(1, l)] = y2;
        rhs[trunc.index(2, l)] = y3;
    }
    rhs
}

/// Laplace-domain correlation system over one steady state.
#[derive(Debug)]
pub struct CorrelationSystem<T: Real> {
    solver: ShiftedSolver<T>,
    pub rhs: Vec<C<T>>,
    pub trunc: Truncation,
    pub omega_s: T,
    pub gamma: T,
    /// Relative residual of the steady solve that produced the state.
    pub residual_steady: f64,
    probe: usize,
}

impl<T: Real> CorrelationSystem<T> {
    /// Assemble a0 (negated generator, no inhomogeneity) and the correlator
    /// right-hand side for a converged steady state.
    pub fn build(
        atom: &AtomParams<T>,
        drives: &[DriveComponent<T>],
        lattice: &FrequencyLattice<T>,
        state: &HarmonicState<T>,
    ) -> Result<Self> {
        let trunc = Truncation::new(state.l_max);
        let stencil = Stencil::generator(atom, drives, lattice);
        let a0 = stencil.assemble(trunc, -T::one());
        let rhs = build_rhs(state);
        let probe = trunc.index(0, 0);
        Ok(CorrelationSystem {
            solver: ShiftedSolver::new(a0),
            rhs,
            trunc,
            omega_s: lattice.omega_s,
            gamma: atom.gamma,
            residual_steady: 0.0,
            probe,
        })
    }

    /// The z-independent matrix a0.
    pub fn a0(&self) -> &CsrMatrix<T> {
        self.solver.matrix()
    }

    pub fn workspace(&self) -> BandLu<T> {
        self.solver.workspace()
    }

    /// Solve (a0 + z I) y = rhs and return the zero-order Y1 component
    /// together with the achieved relative residual.
    pub fn solve_correlation(&self, z: C<T>, ws: &mut BandLu<T>) -> Result<(C<T>, T)> {
        let (y, res) = self
            .solver
            .solve(z, &self.rhs, ws, T::of(CORRELATION_RESIDUAL_TOL))?;
        Ok((y[self.probe], res))
    }

    /// Contour shift for a physical frequency.
    pub fn shift_for(&self, omega: T) -> C<T> {
        C::new(T::zero(), -(omega - self.omega_s))
    }

    /// Scan the incoherent spectrum over a frequency grid, one banded
    /// factorization per point.
    pub fn spectrum(&self, omega_grid: &[T], scenario: &str) -> Result<SpectrumSeries<T>> {
        let mut ws = self.workspace();
        let inv_pi = self.gamma / T::PI();
        let mut s = Vec::with_capacity(omega_grid.len());
        let mut worst = T::zero();
        for &w in omega_grid {
            let (y, res) = self
                .solve_correlation(self.shift_for(w), &mut ws)
                .map_err(|e| e.with_context(&format!("spectrum at omega = {w}")))?;
            worst = worst.max(res);
            s.push(inv_pi * y.re);
        }
        Ok(SpectrumSeries {
            omega: omega_grid.to_vec(),
            s,
            meta: SeriesMeta {
                scenario: scenario.to_string(),
                l_max: self.trunc.l_max,
                residual_steady: self.residual_steady,
                residual_max: worst.to_f64().unwrap_or(f64::NAN),
                elapsed_secs: None,
            },
        })
    }

    /// Raw complex scan values (pre-`Re`), for symmetry diagnostics.
    pub fn scan_complex(&self, omega_grid: &[T]) -> Result<Vec<C<T>>> {
        let mut ws = self.workspace();
        omega_grid
            .iter()
            .map(|&w| Ok(self.solve_correlation(self.shift_for(w), &mut ws)?.0))
            .collect()
    }
}

impl<T: Real + RealField> CorrelationSystem<T> {
    /// Accelerated scan path: one dense eigendecomposition of a0, then every
    /// shift is a rational-function evaluation. Cross-validates the per-shift
    /// factorizations; intended for moderate dimensions.
    pub fn resolvent(&self) -> Result<ResolventEigen<T>> {
        ResolventEigen::new(self.solver.matrix(), &self.rhs, self.probe)
    }

    /// Spectrum through the eigendecomposition path.
    pub fn spectrum_via_eigen(
        &self,
        resolvent: &ResolventEigen<T>,
        omega_grid: &[T],
        scenario: &str,
    ) -> SpectrumSeries<T> {
        let inv_pi = self.gamma / T::PI();
        let s = omega_grid
            .iter()
            .map(|&w| inv_pi * resolvent.eval(self.shift_for(w)).re)
            .collect();
        SpectrumSeries {
            omega: omega_grid.to_vec(),
            s,
            meta: SeriesMeta {
                scenario: format!("{scenario} (eigen path)"),
                l_max: self.trunc.l_max,
                residual_steady: self.residual_steady,
                residual_max: f64::NAN,
                elapsed_secs: None,
            },
        }
    }
}

/// Integrated intensity identity: gamma * (the Y1 rhs at l = 0), which the
/// full-window integral of the spectrum must reproduce.
pub fn total_incoherent_intensity<T: Real>(gamma: T, state: &HarmonicState<T>) -> T {
    let rhs = build_rhs(state);
    let trunc = Truncation::new(state.l_max);
    gamma * rhs[trunc.index(0, 0)].re
}
