//! Dormand–Prince 5(4) adaptive integrator over small complex state vectors.
//!
//! Good enough for the driven Bloch systems integrated here: non-stiff,
//! oscillatory, dimensions 2–3. Steps are clipped to land exactly on the
//! requested sample times, so output grids are uniform without interpolation.

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        OdeOptions {
            rtol: T::of(1e-10),
            atol: T::of(1e-12),
            max_steps: 200_000_000,
        }
    }
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        OdeOptions {
            rtol: tol,
            atol: tol * T::of(1e-2),
            ..Default::default()
        }
    }
}

#[inline]
fn axpy<T: Real, const N: usize>(y: &[C<T>; N], h: T, ks: &[&[C<T>; N]], cs: &[T]) -> [C<T>; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(cs) {
        let hc = h * c;
        for i in 0..N {
            out[i] += k[i] * hc;
        }
    }
    out
}

/// Integrate dy/dt = rhs(t, y) from `t0`, recording the state at every
/// requested sample time (ascending, first >= t0). Returns the state at the
/// final sample.
pub fn integrate_sampled<T: Real, const N: usize>(
    rhs: impl Fn(T, &[C<T>; N]) -> [C<T>; N],
    t0: T,
    y0: [C<T>; N],
    samples: &[T],
    opts: &OdeOptions<T>,
    mut on_sample: impl FnMut(usize, T, &[C<T>; N]),
) -> Result<[C<T>; N]> {
    // Dormand–Prince tableau
    let a21 = T::of(1.0 / 5.0);
    let a3 = [T::of(3.0 / 40.0), T::of(9.0 / 40.0)];
    let a4 = [T::of(44.0 / 45.0), T::of(-56.0 / 15.0), T::of(32.0 / 9.0)];
    let a5 = [
        T::of(19372.0 / 6561.0),
        T::of(-25360.0 / 2187.0),
        T::of(64448.0 / 6561.0),
        T::of(-212.0 / 729.0),
    ];
    let a6 = [
        T::of(9017.0 / 3168.0),
        T::of(-355.0 / 33.0),
        T::of(46732.0 / 5247.0),
        T::of(49.0 / 176.0),
        T::of(-5103.0 / 18656.0),
    ];
    let b = [
        T::of(35.0 / 384.0),
        T::zero(),
        T::of(500.0 / 1113.0),
        T::of(125.0 / 192.0),
        T::of(-2187.0 / 6784.0),
        T::of(11.0 / 84.0),
    ];
    let e = [
        T::of(71.0 / 57600.0),
        T::zero(),
        T::of(-71.0 / 16695.0),
        T::of(71.0 / 1920.0),
        T::of(-17253.0 / 339200.0),
        T::of(22.0 / 525.0),
        T::of(-1.0 / 40.0),
    ];
    let (c2, c3, c4, c5) = (
        T::of(0.2),
        T::of(0.3),
        T::of(0.8),
        T::of(8.0 / 9.0),
    );

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);

    // initial step from the scale of y and f
    let err_scale = |v: &[C<T>; N], w: &[C<T>; N]| -> T {
        let mut acc = T::zero();
        for i in 0..N {
            let sc = opts.atol + opts.rtol * v[i].norm().max(w[i].norm());
            acc = acc.max(sc);
        }
        acc
    };
    let fnorm = k1.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let ynorm = y.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let mut h = (T::of(1e-2) * (ynorm + T::of(1e-3)) / (fnorm + T::of(1e-3)))
        .min(T::of(1e-2))
        .max(T::of(1e-8));
    let _ = err_scale;

    let mut steps = 0usize;
    for (si, &ts) in samples.iter().enumerate() {
        if ts < t - T::epsilon() {
            return Err(Error::Config("sample times must be ascending".into()));
        }
        while t < ts {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::NoConvergence(format!(
                    "integrator exceeded {} steps",
                    opts.max_steps
                )));
            }
            let hs = h.min(ts - t);
            let underflow = T::epsilon() * t.abs().max(T::one()) * T::of(64.0);
            if hs < underflow {
                // step is pure roundoff: snap to the sample time
                if ts - t < underflow {
                    break;
                }
                return Err(Error::StepUnderflow {
                    t: t.to_f64().unwrap_or(f64::NAN),
                });
            }

            let y2 = axpy(&y, hs, &[&k1], &[a21]);
            let k2 = rhs(t + c2 * hs, &y2);
            let y3 = axpy(&y, hs, &[&k1, &k2], &a3);
            let k3 = rhs(t + c3 * hs, &y3);
            let y4 = axpy(&y, hs, &[&k1, &k2, &k3], &a4);
            let k4 = rhs(t + c4 * hs, &y4);
            let y5 = axpy(&y, hs, &[&k1, &k2, &k3, &k4], &a5);
            let k5 = rhs(t + c5 * hs, &y5);
            let y6 = axpy(&y, hs, &[&k1, &k2, &k3, &k4, &k5], &a6);
            let k6 = rhs(t + hs, &y6);
            let ynew = axpy(&y, hs, &[&k1, &k2, &k3, &k4, &k5, &k6], &b);
            let k7 = rhs(t + hs, &ynew);

            // embedded error estimate
            let mut errsq = T::zero();
            for i in 0..N {
                let mut de = czero::<T>();
                for (k, &ce) in [&k1, &k2, &k3, &k4, &k5, &k6, &k7].iter().zip(&e) {
                    de += k[i] * (hs * ce);
                }
                let sc = opts.atol + opts.rtol * y[i].norm().max(ynew[i].norm());
                let r = de.norm() / sc;
                errsq = errsq + r * r;
            }
            let err = (errsq / T::from_usize(N).unwrap()).sqrt();

            if err <= T::one() {
                t = t + hs;
                y = ynew;
                k1 = k7; // first-same-as-last
                let grow = if err == T::zero() {
                    T::of(5.0)
                } else {
                    (T::of(0.9) * err.powf(T::of(-0.2))).min(T::of(5.0))
                };
                h = (hs * grow).max(h * T::of(0.2));
            } else {
                h = hs * (T::of(0.9) * err.powf(T::of(-0.2))).max(T::of(0.2));
            }
        }
        t = ts;
        on_sample(si, ts, &y);
    }
    Ok(y)
}
