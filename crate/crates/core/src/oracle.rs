//! Ground-truth time-domain integrator.
//!
//! Integrates the driven Bloch equations in the lab frame with every
//! cos(omega_j t + phi_j) term explicit (no rotating-wave reduction), then
//! propagates the subtracted two-time correlators forward in the delay via
//! the quantum regression theorem and Fourier-integrates the windowed
//! correlation to a spectrum. Brutally direct and deliberately independent
//! of the harmonic-balance machinery it validates; runs at reduced carrier
//! frequencies where full non-RWA integration stays cheap.

use crate::error::{Error, Result};
use crate::model::{AtomParams, DriveComponent, FrequencyLattice};
use crate::ode::{integrate_sampled, OdeOptions};
use crate::regression::{SeriesMeta, SpectrumSeries};
use crate::scalar::{cre, czero, Real, C};

/// Sampled solution of the driven Bloch equations.
#[derive(Debug, Clone)]
pub struct BlochTrajectory<T: Real> {
    /// Uniform sample times (units of 1/gamma).
    pub t: Vec<T>,
    /// <S->(t); <S+> is its conjugate pointwise.
    pub sm: Vec<C<T>>,
    /// <Sz>(t).
    pub sz: Vec<T>,
    /// Sample spacing.
    pub dt: T,
}

impl<T: Real> BlochTrajectory<T> {
    pub fn sp(&self, k: usize) -> C<T> {
        self.sm[k].conj()
    }

    /// Index of the sample nearest to `t0`.
    pub fn nearest_index(&self, t0: T) -> usize {
        let raw = ((t0 - self.t[0]) / self.dt).round();
        let k = raw.to_usize().unwrap_or(0);
        k.min(self.t.len() - 1)
    }

    /// Largest violation of |sz| <= 1/2 and |sm| <= 1/2 over the samples.
    pub fn bound_error(&self) -> T {
        let half = T::of(0.5);
        let mut err = T::zero();
        for k in 0..self.t.len() {
            err = err.max(self.sz[k].abs() - half);
            err = err.max(self.sm[k].norm() - half);
        }
        err
    }
}

/// Two-time correlator samples Y_i(t0, t0 + tau), lab frame, coherent part
/// subtracted. Y1 is the emission correlator the spectrum integrates.
#[derive(Debug, Clone)]
pub struct TwoTimeGrid<T: Real> {
    pub t0: Vec<T>,
    pub tau: Vec<T>,
    /// y1[i][k] = Y1(t0_i, t0_i + tau_k); same layout for y2, y3.
    pub y1: Vec<Vec<C<T>>>,
    pub y2: Vec<Vec<C<T>>>,
    pub y3: Vec<Vec<C<T>>>,
}

/// Initial condition for [`integrate_bloch`].
#[derive(Debug, Clone, Copy)]
pub enum BlochInit<T: Real> {
    /// Ground state (0, 0, -1/2) — the globally attracting region's natural
    /// starting point for steady-state work.
    Ground,
    /// Bare excited state (0, 0, +1/2).
    Excited,
    State { sm: C<T>, sz: T },
}

fn drive_sums<T: Real>(drives: &[DriveComponent<T>], t: T) -> (T, T) {
    let mut rabi = T::zero();
    let mut asym = T::zero();
    for d in drives {
        let c = (d.omega * t + d.phi).cos();
        rabi += d.rabi * c;
        asym += d.delta_a * c;
    }
    (rabi, asym)
}

/// Fastest tone present, including the transition frequency itself.
fn max_tone<T: Real>(atom: &AtomParams<T>, drives: &[DriveComponent<T>]) -> T {
    drives
        .iter()
        .map(|d| d.omega)
        .fold(atom.omega0, T::max)
}

/// Uniform sample spacing resolving the fastest tone with >= 48 points.
fn sample_dt<T: Real>(atom: &AtomParams<T>, drives: &[DriveComponent<T>]) -> T {
    T::of(2.0) * T::PI() / max_tone(atom, drives) / T::of(48.0)
}

/// Integrate the lab-frame Bloch equations from t = 0 to `t_end` with local
/// tolerance `tol`, sampling densely enough for the fastest tone.
pub fn integrate_bloch<T: Real>(
    atom: &AtomParams<T>,
    drives: &[DriveComponent<T>],
    t_end: T,
    tol: T,
    init: BlochInit<T>,
) -> Result<BlochTrajectory<T>> {
    atom.validate()?;
    if !(tol >= T::of(1e-12) && tol <= T::of(1e-6)) {
        return Err(Error::Config(format!(
            "integrator tolerance {tol:e} outside [1e-12, 1e-6]"
        )));
    }
    let (sm0, sz0) = match init {
        BlochInit::Ground => (czero(), -T::of(0.5)),
        BlochInit::Excited => (czero(), T::of(0.5)),
        BlochInit::State { sm, sz } => (sm, sz),
    };

    let dt = sample_dt(atom, drives);
    let n = (t_end / dt).ceil().to_usize().unwrap_or(0).max(1);
    let samples: Vec<T> = (0..=n).map(|k| T::from_usize(k).unwrap() * dt).collect();

    let gamma = atom.gamma;
    let omega0 = atom.omega0;
    let half = T::of(0.5);
    let rhs = move |t: T, y: &[C<T>; 2]| -> [C<T>; 2] {
        let (rabi, asym) = drive_sums(drives, t);
        let sm = y[0];
        let sz = y[1];
        let dsm = C::new(-gamma * half, -(omega0 + asym)) * sm
            + C::new(T::zero(), T::of(2.0) * rabi) * sz;
        // d<Sz> = -Gamma (<Sz> + 1/2) - i rabi (<S+> - <S->)
        let dsz = cre(-gamma) * (sz + cre(half))
            - C::new(T::zero(), rabi) * (sm.conj() - sm);
        [dsm, dsz]
    };

    let mut traj = BlochTrajectory {
        t: Vec::with_capacity(samples.len()),
        sm: Vec::with_capacity(samples.len()),
        sz: Vec::with_capacity(samples.len()),
        dt,
    };
    integrate_sampled(
        rhs,
        T::zero(),
        [sm0, cre(sz0)],
        &samples,
        &OdeOptions::with_tol(tol),
        |_, t, y| {
            traj.t.push(t);
            traj.sm.push(y[0]);
            traj.sz.push(y[1].re);
        },
    )?;
    Ok(traj)
}

/// Propagate the subtracted correlators from each `t0` out to `tau_max`.
///
/// Initial values come from the operator identities at equal times
/// (S+ S- = 1/2 + Sz, S+ S+ = 0, S+ Sz = -S+/2); the delay evolution uses
/// the homogeneous Bloch generator per the regression theorem — the
/// spontaneous inhomogeneity cancels in the coherent subtraction.
pub fn correlate<T: Real>(
    atom: &AtomParams<T>,
    drives: &[DriveComponent<T>],
    traj: &BlochTrajectory<T>,
    t0_set: &[T],
    tau_max: T,
    tol: T,
) -> Result<TwoTimeGrid<T>> {
    let steady_from = T::of(30.0) / atom.gamma;
    for &t0 in t0_set {
        if t0 < steady_from {
            return Err(Error::Config(format!(
                "t0 = {t0} is inside the transient (need t0 >= {steady_from})"
            )));
        }
    }

    let dt = traj.dt;
    let ntau = (tau_max / dt).ceil().to_usize().unwrap_or(1).max(1);
    let tau: Vec<T> = (0..=ntau).map(|k| T::from_usize(k).unwrap() * dt).collect();

    let gamma = atom.gamma;
    let omega0 = atom.omega0;
    let half = T::of(0.5);

    let mut grid = TwoTimeGrid {
        t0: t0_set.to_vec(),
        tau: tau.clone(),
        y1: Vec::with_capacity(t0_set.len()),
        y2: Vec::with_capacity(t0_set.len()),
        y3: Vec::with_capacity(t0_set.len()),
    };

    for &t0 in t0_set {
        let k0 = traj.nearest_index(t0);
        if (traj.t[k0] - t0).abs() > dt {
            return Err(Error::Config(format!(
                "t0 = {t0} outside the integrated trajectory"
            )));
        }
        let t0s = traj.t[k0];
        let sm = traj.sm[k0];
        let sp = sm.conj();
        let sz = traj.sz[k0];

        let u0: [C<T>; 3] = [
            cre(half + sz - sm.norm_sqr()), // <S+S-> - |<S->|^2
            -sp * sp,                       // <S+S+> - <S+>^2 = -<S+>^2
            -sp * (cre(half + sz)),         // <S+Sz> - <S+><Sz> = -<S+>(1/2 + <Sz>)
        ];

        let rhs = move |tau_t: T, u: &[C<T>; 3]| -> [C<T>; 3] {
            let (rabi, asym) = drive_sums(drives, t0s + tau_t);
            let rot = omega0 + asym;
            [
                C::new(-gamma * half, -rot) * u[0] + C::new(T::zero(), T::of(2.0) * rabi) * u[2],
                C::new(-gamma * half, rot) * u[1] - C::new(T::zero(), T::of(2.0) * rabi) * u[2],
                cre(-gamma) * u[2] - C::new(T::zero(), rabi) * (u[1] - u[0]),
            ]
        };

        let mut r1 = Vec::with_capacity(tau.len());
        let mut r2 = Vec::with_capacity(tau.len());
        let mut r3 = Vec::with_capacity(tau.len());
        integrate_sampled(rhs, T::zero(), u0, &tau, &OdeOptions::with_tol(tol), |_, _, u| {
            r1.push(u[0]);
            r2.push(u[1]);
            r3.push(u[2]);
        })?;
        grid.y1.push(r1);
        grid.y2.push(r2);
        grid.y3.push(r3);
    }
    Ok(grid)
}

/// Windowed Fourier transform of the averaged correlator:
/// S(omega) = (gamma / pi) Re < integral_0^tau_max Y1(t0, t0+tau) e^{i omega tau} d tau >_t0.
///
/// Plain truncation at tau_max is the windowing; Y1 decays at least as fast
/// as e^{-gamma tau / 2}, so tau_max >= 12/gamma keeps the tail below the
/// comparison tolerances used anywhere in this crate.
pub fn spectrum_td<T: Real>(
    grid: &TwoTimeGrid<T>,
    omega_grid: &[T],
    gamma: T,
) -> SpectrumSeries<T> {
    let ntau = grid.tau.len();
    let n_t0 = grid.t0.len();
    let inv = T::one() / T::from_usize(n_t0).unwrap();
    // t0-average first: the Fourier integral commutes with the average
    let mut ubar = vec![czero::<T>(); ntau];
    for row in &grid.y1 {
        for (a, &v) in ubar.iter_mut().zip(row) {
            *a += v * cre(inv);
        }
    }
    let dt = grid.tau[1] - grid.tau[0];
    let pref = gamma / T::PI();
    let s: Vec<T> = omega_grid
        .iter()
        .map(|&w| {
            // trapezoid with phase recurrence e^{i w tau_k}
            let rot = C::new((w * dt).cos(), (w * dt).sin());
            let mut phase = cre(T::one());
            let mut acc = czero::<T>();
            for (k, &u) in ubar.iter().enumerate() {
                let wgt = if k == 0 || k == ntau - 1 {
                    T::of(0.5)
                } else {
                    T::one()
                };
                acc += u * phase * cre(wgt);
                phase *= rot;
            }
            pref * (acc * cre(dt)).re
        })
        .collect();
    SpectrumSeries {
        omega: omega_grid.to_vec(),
        s,
        meta: SeriesMeta {
            scenario: "time-domain oracle".into(),
            l_max: 0,
            residual_steady: f64::NAN,
            residual_max: f64::NAN,
            elapsed_secs: None,
        },
    }
}

/// Knobs for the end-to-end oracle run. Times are in units of 1/gamma.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions<T: Real> {
    pub tol: T,
    /// Settling time before correlators start (>= 30 required downstream).
    pub settle: T,
    /// Number of t0 phases across one fundamental period.
    pub n_t0: usize,
    pub tau_max: T,
}

impl<T: Real> Default for OracleOptions<T> {
    fn default() -> Self {
        OracleOptions {
            tol: T::of(1e-10),
            settle: T::of(40.0),
            n_t0: 16,
            tau_max: T::of(14.0),
        }
    }
}

/// Full oracle pipeline: settle, sample one fundamental period of t0 phases,
/// correlate, Fourier integrate.
pub fn oracle_spectrum<T: Real>(
    atom: &AtomParams<T>,
    drives: &[DriveComponent<T>],
    lattice: &FrequencyLattice<T>,
    omega_grid: &[T],
    opts: &OracleOptions<T>,
) -> Result<SpectrumSeries<T>> {
    let settle = opts.settle / atom.gamma;
    let tau_max = opts.tau_max / atom.gamma;
    let period = lattice.period();
    let traj = integrate_bloch(
        atom,
        drives,
        settle + period + traj_pad(lattice),
        opts.tol,
        BlochInit::Ground,
    )?;
    let t0s = t0_phases(&traj, settle, period, opts.n_t0);
    let grid = correlate(atom, drives, &traj, &t0s, tau_max, opts.tol)?;
    let mut series = spectrum_td(&grid, omega_grid, atom.gamma);
    series.meta.scenario = "oracle".into();
    Ok(series)
}

fn traj_pad<T: Real>(lattice: &FrequencyLattice<T>) -> T {
    lattice.period() * T::of(0.05)
}

/// Sample times snapped onto the trajectory grid, evenly covering one period.
pub fn t0_phases<T: Real>(
    traj: &BlochTrajectory<T>,
    settle: T,
    period: T,
    n_t0: usize,
) -> Vec<T> {
    (0..n_t0)
        .map(|k| {
            let want = settle + period * T::from_usize(k).unwrap() / T::from_usize(n_t0).unwrap();
            traj.t[traj.nearest_index(want)]
        })
        .collect()
}

/// Time-averaged inversion over one fundamental period after settling:
/// the oracle's value of the l = 0 inversion harmonic.
pub fn steady_inversion_average<T: Real>(
    atom: &AtomParams<T>,
    drives: &[DriveComponent<T>],
    settle: T,
    period: T,
    nsamples: usize,
    tol: T,
) -> Result<T> {
    let gamma = atom.gamma;
    let omega0 = atom.omega0;
    let half = T::of(0.5);
    let rhs = move |t: T, y: &[C<T>; 2]| -> [C<T>; 2] {
        let (rabi, asym) = drive_sums(drives, t);
        [
            C::new(-gamma * half, -(omega0 + asym)) * y[0]
                + C::new(T::zero(), T::of(2.0) * rabi) * y[1],
            cre(-gamma) * (y[1] + cre(half)) - C::new(T::zero(), rabi) * (y[0].conj() - y[0]),
        ]
    };
    // uniform samples over exactly one period; the mean of n equispaced
    // samples of a smooth periodic function converges spectrally
    let mut samples: Vec<T> = vec![settle];
    samples.extend(
        (0..nsamples)
            .map(|k| settle + period * T::from_usize(k).unwrap() / T::from_usize(nsamples).unwrap()),
    );
    let mut acc = T::zero();
    let mut count = 0usize;
    integrate_sampled(
        rhs,
        T::zero(),
        [czero(), cre(-half)],
        &samples,
        &OdeOptions::with_tol(tol),
        |si, _, y| {
            if si >= 1 {
                acc += y[1].re;
                count += 1;
            }
        },
    )?;
    Ok(acc / T::from_usize(count).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom() -> AtomParams<f64> {
        AtomParams::new(200.0, 1.0).unwrap()
    }

    fn no_drive() -> Vec<DriveComponent<f64>> {
        vec![DriveComponent {
            omega: 200.0,
            phi: 0.0,
            rabi: 0.0,
            delta_a: 0.0,
            delta_s: 0.0,
        }]
    }

    #[test]
    fn spontaneous_decay_from_excited_state() {
        let traj =
            integrate_bloch(&atom(), &no_drive(), 5.0, 1e-11, BlochInit::Excited).unwrap();
        for k in (0..traj.t.len()).step_by(500) {
            let expect = -0.5 + (-traj.t[k]).exp();
            assert!(
                (traj.sz[k] - expect).abs() < 1e-9,
                "t = {}: sz = {} vs {expect}",
                traj.t[k],
                traj.sz[k]
            );
            assert!(traj.sm[k].norm() < 1e-12);
        }
    }

    #[test]
    fn ground_state_is_a_fixed_point() {
        let traj = integrate_bloch(&atom(), &no_drive(), 2.0, 1e-10, BlochInit::Ground).unwrap();
        let last = traj.t.len() - 1;
        assert!((traj.sz[last] + 0.5).abs() < 1e-12);
        assert!(traj.sm[last].norm() < 1e-12);
        assert!(traj.bound_error() < 1e-9);
    }

    #[test]
    fn undriven_correlators_vanish_in_ground_state() {
        let traj = integrate_bloch(&atom(), &no_drive(), 32.0, 1e-10, BlochInit::Ground).unwrap();
        let grid = correlate(&atom(), &no_drive(), &traj, &[31.0], 3.0, 1e-10).unwrap();
        assert!(grid.y1[0].iter().all(|v| v.norm() < 1e-10));
        assert!(grid.y2[0].iter().all(|v| v.norm() < 1e-10));
        assert!(grid.y3[0].iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn equal_time_correlator_identity_and_decay() {
        let a = atom();
        let drives = vec![DriveComponent {
            omega: 200.0,
            phi: 0.0,
            rabi: 10.0,
            delta_a: 0.0,
            delta_s: 0.0,
        }];
        let traj = integrate_bloch(&a, &drives, 36.0, 1e-10, BlochInit::Ground).unwrap();
        let t0 = 35.0;
        let grid = correlate(&a, &drives, &traj, &[t0], 10.0, 1e-10).unwrap();
        let k0 = traj.nearest_index(t0);
        let expect = 0.5 + traj.sz[k0] - traj.sm[k0].norm_sqr();
        let got = grid.y1[0][0];
        assert!((got.re - expect).abs() < 1e-10);
        assert!(got.im.abs() < 1e-12);
        assert!(got.re >= -1e-8);

        // decay bound: |Y1(tau_max)| <= ~|Y1(0)| e^{-gamma tau / 2}
        let tail = grid.y1[0].last().unwrap().norm();
        let bound = (got.norm() + 0.05) * (-0.5 * 10.0f64).exp() * 1.5;
        assert!(tail <= bound, "tail {tail:e} vs bound {bound:e}");
    }

    #[test]
    fn trajectory_is_periodic_after_transient() {
        let a = atom();
        let drives = vec![DriveComponent {
            omega: 200.0,
            phi: 0.0,
            rabi: 10.0,
            delta_a: 0.0,
            delta_s: 0.0,
        }];
        // fundamental period = drive period here
        let period = 2.0 * std::f64::consts::PI / 200.0;
        let traj = integrate_bloch(&a, &drives, 40.0 + 2.0 * period, 1e-11, BlochInit::Ground)
            .unwrap();
        let k1 = traj.nearest_index(40.0);
        let k2 = traj.nearest_index(40.0 + period);
        // sample grid divides the period exactly (48 samples per cycle)
        assert!((traj.t[k2] - traj.t[k1] - period).abs() < 1e-9);
        assert!((traj.sz[k1] - traj.sz[k2]).abs() < 1e-6);
        assert!((traj.sm[k1] - traj.sm[k2]).norm() < 1e-6);
    }

    #[test]
    fn undriven_spectrum_is_zero() {
        let a = atom();
        let traj = integrate_bloch(&a, &no_drive(), 32.0, 1e-10, BlochInit::Ground).unwrap();
        let grid = correlate(&a, &no_drive(), &traj, &[31.0], 12.5, 1e-10).unwrap();
        let omegas: Vec<f64> = (0..50).map(|k| 195.0 + 0.2 * k as f64).collect();
        let series = spectrum_td(&grid, &omegas, 1.0);
        assert!(series.s.iter().all(|&v| v.abs() < 1e-9));
    }

    #[test]
    fn out_of_tolerance_inputs_rejected() {
        assert!(integrate_bloch(&atom(), &no_drive(), 1.0, 1e-5, BlochInit::Ground).is_err());
        let traj = integrate_bloch(&atom(), &no_drive(), 2.0, 1e-10, BlochInit::Ground).unwrap();
        // t0 inside the transient
        assert!(correlate(&atom(), &no_drive(), &traj, &[1.0], 1.0, 1e-10).is_err());
    }
}
