//! Peak extraction and integral checks on computed spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::SpectrumSeries;
use crate::scalar::Real;

/// One spectral peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak<T: Real> {
    /// Refined position (units of gamma).
    pub position: T,
    /// Refined height (spectral density units).
    pub height: T,
    /// Full width at half maximum (units of gamma).
    pub fwhm: T,
    /// False when the left half-height crossing is shared with a neighbour
    /// (unresolved doublet) or runs off the grid.
    pub left_resolved: bool,
    pub right_resolved: bool,
}

/// Ordered peak list with spacing statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakReport<T: Real> {
    /// Peaks in ascending position order.
    pub peaks: Vec<Peak<T>>,
    /// Successive position differences.
    pub spacings: Vec<T>,
    /// Threshold used, relative to the global maximum.
    pub rel_threshold: T,
}

impl<T: Real> PeakReport<T> {
    /// Tallest peak, if any.
    pub fn tallest(&self) -> Option<&Peak<T>> {
        self.peaks
            .iter()
            .max_by(|a, b| a.height.partial_cmp(&b.height).unwrap())
    }

    /// Peak nearest to a target position.
    pub fn nearest(&self, position: T) -> Option<&Peak<T>> {
        self.peaks.iter().min_by(|a, b| {
            (a.position - position)
                .abs()
                .partial_cmp(&(b.position - position).abs())
                .unwrap()
        })
    }

    /// Tabular text serialization.
    pub fn to_table(&self) -> String {
        let mut out = String::from("position height fwhm left_resolved right_resolved\n");
        for p in &self.peaks {
            out.push_str(&format!(
                "{:.10e} {:.10e} {:.10e} {} {}\n",
                p.position.to_f64().unwrap_or(f64::NAN),
                p.height.to_f64().unwrap_or(f64::NAN),
                p.fwhm.to_f64().unwrap_or(f64::NAN),
                p.left_resolved,
                p.right_resolved
            ));
        }
        out
    }
}

/// Locate local maxima above `rel_threshold` times the global maximum,
/// refine positions by a parabolic fit through the three surrounding samples,
/// and measure FWHM by linear interpolation of the half-height crossings.
/// Shared crossings (the valley between two peaks stays above half height)
/// are flagged rather than treated as errors.
pub fn find_peaks<T: Real>(series: &SpectrumSeries<T>, rel_threshold: T) -> Result<PeakReport<T>> {
    if !(rel_threshold > T::zero() && rel_threshold < T::one()) {
        return Err(Error::Config(format!(
            "rel_threshold must be in (0, 1), got {rel_threshold}"
        )));
    }
    let s = &series.s;
    let w = &series.omega;
    let n = s.len();
    if n < 3 {
        return Err(Error::EmptySpectrum);
    }
    let smax = series.max_value();
    if !(smax > T::zero()) {
        return Err(Error::EmptySpectrum);
    }
    let floor = rel_threshold * smax;

    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(s[i] >= floor && s[i] > s[i - 1] && s[i] >= s[i + 1]) {
            continue;
        }
        // parabolic refinement through (i-1, i, i+1)
        let (ym, y0, yp) = (s[i - 1], s[i], s[i + 1]);
        let denom = ym - T::of(2.0) * y0 + yp;
        let (dx, height) = if denom < T::zero() {
            let d = T::of(0.5) * (ym - yp) / denom;
            (d, y0 - T::of(0.25) * (ym - yp) * d)
        } else {
            (T::zero(), y0)
        };
        let h = w[i + 1] - w[i];
        let position = w[i] + dx * h;

        let half = height * T::of(0.5);
        let (left, left_resolved) = walk_half(s, w, i, half, -1);
        let (right, right_resolved) = walk_half(s, w, i, half, 1);
        let fwhm = match (left_resolved, right_resolved) {
            (true, true) => right - left,
            (true, false) => T::of(2.0) * (position - left),
            (false, true) => T::of(2.0) * (right - position),
            (false, false) => right - left, // span between valleys
        };
        peaks.push(Peak {
            position,
            height,
            fwhm: fwhm.max(T::min_positive_value()),
            left_resolved,
            right_resolved,
        });
    }
    let spacings = peaks
        .windows(2)
        .map(|p| p[1].position - p[0].position)
        .collect();
    Ok(PeakReport {
        peaks,
        spacings,
        rel_threshold,
    })
}

/// Walk from sample `i` in `dir` until the series crosses `half`; returns the
/// interpolated crossing and whether it was found before the series turned
/// back up (shared crossing) or the grid ended.
fn walk_half<T: Real>(s: &[T], w: &[T], i: usize, half: T, dir: isize) -> (T, bool) {
    let n = s.len() as isize;
    let mut k = i as isize;
    loop {
        let next = k + dir;
        if next < 0 || next >= n {
            return (w[k as usize], false);
        }
        let (ku, kn) = (k as usize, next as usize);
        if s[kn] <= half {
            // crossing between k and next
            let t = (s[ku] - half) / (s[ku] - s[kn]);
            return (w[ku] + (w[kn] - w[ku]) * t, true);
        }
        if s[kn] > s[ku] && s[ku] < half + (s[i] - half) {
            // series rising again before reaching half height: shared crossing
            return (w[ku], false);
        }
        k = next;
    }
}

/// Trapezoidal integral of the series over its grid.
pub fn integrated_intensity<T: Real>(series: &SpectrumSeries<T>) -> T {
    let s = &series.s;
    let w = &series.omega;
    let mut acc = T::zero();
    for k in 1..s.len() {
        acc += (s[k] + s[k - 1]) * T::of(0.5) * (w[k] - w[k - 1]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::SeriesMeta;

    fn series(omega: Vec<f64>, s: Vec<f64>) -> SpectrumSeries<f64> {
        SpectrumSeries {
            omega,
            s,
            meta: SeriesMeta::default(),
        }
    }

    fn lorentzian(center: f64, height: f64, fwhm: f64) -> impl Fn(f64) -> f64 {
        move |w: f64| {
            let x = (w - center) / (fwhm / 2.0);
            height / (1.0 + x * x)
        }
    }

    #[test]
    fn single_lorentzian_position_and_width() {
        let f = lorentzian(17.3, 2.0, 1.0);
        let omega: Vec<f64> = (0..800).map(|k| 0.05 * k as f64).collect();
        let s: Vec<f64> = omega.iter().map(|&w| f(w)).collect();
        let report = find_peaks(&series(omega, s), 1e-3).unwrap();
        assert_eq!(report.peaks.len(), 1);
        let p = &report.peaks[0];
        assert!((p.position - 17.3).abs() < 0.01, "position {}", p.position);
        assert!((p.fwhm - 1.0).abs() < 0.02, "fwhm {}", p.fwhm);
        assert!((p.height - 2.0).abs() < 0.01);
        assert!(p.left_resolved && p.right_resolved);
    }

    #[test]
    fn zero_series_is_empty_spectrum() {
        let omega: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let s = vec![0.0; 100];
        assert!(matches!(
            find_peaks(&series(omega, s), 1e-3),
            Err(Error::EmptySpectrum)
        ));
    }

    #[test]
    fn triplet_is_found_with_spacings() {
        let f1 = lorentzian(-20.0, 1.0, 1.5);
        let f2 = lorentzian(0.0, 3.0, 1.0);
        let f3 = lorentzian(20.0, 1.0, 1.5);
        let omega: Vec<f64> = (0..1400).map(|k| -35.0 + 0.05 * k as f64).collect();
        let s: Vec<f64> = omega.iter().map(|&w| f1(w) + f2(w) + f3(w)).collect();
        let report = find_peaks(&series(omega, s), 1e-2).unwrap();
        assert_eq!(report.peaks.len(), 3);
        assert!((report.spacings[0] - 20.0).abs() < 0.1);
        assert!((report.spacings[1] - 20.0).abs() < 0.1);
        let ratio = report.peaks[0].height / report.peaks[1].height;
        assert!((ratio - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn unresolved_doublet_is_flagged_not_fatal() {
        // two close peaks whose valley stays above half height
        let f1 = lorentzian(0.0, 1.0, 2.0);
        let f2 = lorentzian(1.4, 1.0, 2.0);
        let omega: Vec<f64> = (0..600).map(|k| -7.0 + 0.025 * k as f64).collect();
        let s: Vec<f64> = omega.iter().map(|&w| f1(w) + f2(w)).collect();
        let report = find_peaks(&series(omega, s), 1e-2).unwrap();
        assert_eq!(report.peaks.len(), 2);
        assert!(!report.peaks[0].right_resolved);
        assert!(!report.peaks[1].left_resolved);
        assert!(report.peaks.iter().all(|p| p.fwhm > 0.0));
    }

    #[test]
    fn rescaling_leaves_positions_and_widths() {
        let f = lorentzian(5.0, 1.0, 0.8);
        let omega: Vec<f64> = (0..400).map(|k| 0.05 * k as f64).collect();
        let s1: Vec<f64> = omega.iter().map(|&w| f(w)).collect();
        let s2: Vec<f64> = s1.iter().map(|v| v * 7.5).collect();
        let r1 = find_peaks(&series(omega.clone(), s1), 1e-3).unwrap();
        let r2 = find_peaks(&series(omega, s2), 1e-3).unwrap();
        assert_eq!(r1.peaks.len(), r2.peaks.len());
        for (a, b) in r1.peaks.iter().zip(&r2.peaks) {
            assert!((a.position - b.position).abs() < 1e-12);
            assert!((a.fwhm - b.fwhm).abs() < 1e-12);
            assert!((b.height / a.height - 7.5).abs() < 1e-9);
        }
    }

    #[test]
    fn lorentzian_integral_closed_form() {
        // integral of h / (1 + (2(w-c)/G)^2) over all w = pi h G / 2
        let (h, g) = (2.0, 1.0);
        let f = lorentzian(0.0, h, g);
        let omega: Vec<f64> = (0..40000).map(|k| -100.0 + 0.005 * k as f64).collect();
        let s: Vec<f64> = omega.iter().map(|&w| f(w)).collect();
        let integral = integrated_intensity(&series(omega, s));
        let expect = std::f64::consts::PI * h * g / 2.0;
        assert!(
            ((integral - expect) / expect).abs() < 0.01,
            "{integral} vs {expect}"
        );
    }

    #[test]
    fn zero_series_integrates_to_zero() {
        let omega: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let s = vec![0.0; 10];
        assert_eq!(integrated_intensity(&series(omega, s)), 0.0);
    }

    #[test]
    fn positions_stable_under_grid_refinement() {
        let f1 = lorentzian(3.0, 1.0, 0.9);
        let f2 = lorentzian(8.5, 0.6, 1.2);
        for step in [0.05, 0.025] {
            let n = (12.0 / step) as usize;
            let omega: Vec<f64> = (0..n).map(|k| step * k as f64).collect();
            let s: Vec<f64> = omega.iter().map(|&w| f1(w) + f2(w)).collect();
            let r = find_peaks(&series(omega, s), 1e-3).unwrap();
            assert!((r.peaks[0].position - 3.0).abs() < 0.05);
            assert!((r.peaks[1].position - 8.5).abs() < 0.05);
        }
    }
}
