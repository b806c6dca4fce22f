//! Physical parameter set: atom, drive tones, optional dipole front-end, and
//! the commensurable frequency lattice everything downstream is indexed by.
//!
//! All frequencies are expressed in units of the radiative damping constant
//! gamma, which therefore defaults to 1 in configurations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Two-level emitter parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams<T: Real> {
    /// Transition frequency omega_0 (units of gamma).
    pub omega0: T,
    /// Radiative damping constant; sets the frequency unit. Must be > 0.
    pub gamma: T,
}

impl<T: Real> AtomParams<T> {
    pub fn new(omega0: T, gamma: T) -> Result<Self> {
        let a = AtomParams { omega0, gamma };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            return Err(Error::Config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(self.omega0 > T::zero()) || !self.omega0.is_finite() {
            return Err(Error::Config(format!(
                "omega0 must be > 0, got {}",
                self.omega0
            )));
        }
        Ok(())
    }
}

/// One tone of the driving field in canonical scalar form.
///
/// `delta_s` is parsed and stored for completeness but never enters the
/// dynamics: the symmetric dipole projection only multiplies the identity
/// operator, which drops out of every commutator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveComponent<T: Real> {
    /// Carrier frequency omega_j (units of gamma), > 0.
    pub omega: T,
    /// Phase phi_j in radians.
    #[serde(default = "zero_t")]
    pub phi: T,
    /// Rabi frequency of the tone, >= 0 by convention (see
    /// [`DriveComponent::from_dipoles`] for the sign absorption).
    pub rabi: T,
    /// Asymmetry (symmetry-violation) parameter delta_a_j.
    #[serde(default = "zero_t")]
    pub delta_a: T,
    /// Symmetric projection delta_s_j; stored, never used in the dynamics.
    #[serde(default = "zero_t")]
    pub delta_s: T,
}

fn zero_t<T: Real>() -> T {
    T::zero()
}

impl<T: Real> DriveComponent<T> {
    pub fn new(omega: T, phi: T, rabi: T, delta_a: T) -> Result<Self> {
        let d = DriveComponent {
            omega,
            phi,
            rabi,
            delta_a,
            delta_s: T::zero(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero()) || !self.omega.is_finite() {
            return Err(Error::Config(format!(
                "drive frequency must be > 0, got {}",
                self.omega
            )));
        }
        if self.rabi < T::zero() || !self.rabi.is_finite() {
            return Err(Error::Config(format!(
                "rabi frequency must be >= 0, got {}",
                self.rabi
            )));
        }
        for (name, v) in [
            ("phi", self.phi),
            ("delta_a", self.delta_a),
            ("delta_s", self.delta_s),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Build a drive component from dipole matrix elements and a field
    /// amplitude vector. A negative raw Rabi projection is normalized
    /// positive by shifting the phase by pi.
    pub fn from_dipoles(
        omega: T,
        phi: T,
        field: [T; 3],
        dipoles: &DipoleSet<T>,
        hbar: T,
    ) -> Result<Self> {
        let (rabi, delta_a, delta_s) = reduce_dipoles(dipoles, field, hbar);
        let (rabi, phi) = if rabi < T::zero() {
            (-rabi, phi + T::PI())
        } else {
            (rabi, phi)
        };
        let mut d = DriveComponent::new(omega, phi, rabi, delta_a)?;
        d.delta_s = delta_s;
        Ok(d)
    }
}

/// Electric-dipole matrix elements of the two-level system (real 3-vectors in
/// consistent units). A polar system has `d00 != d11`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleSet<T: Real> {
    pub d00: [T; 3],
    pub d11: [T; 3],
    pub d10: [T; 3],
}

fn dot3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Scalar reduction of the vector model:
/// rabi = -E.d10/hbar, delta_a = E.(d00-d11)/hbar, delta_s = E.(d00+d11)/hbar.
///
/// The raw signed values are returned; phase normalization is the caller's
/// business (see [`DriveComponent::from_dipoles`]).
pub fn reduce_dipoles<T: Real>(dipoles: &DipoleSet<T>, field: [T; 3], hbar: T) -> (T, T, T) {
    let inv = hbar.recip();
    let rabi = -dot3(field, dipoles.d10) * inv;
    let diff = [
        dipoles.d00[0] - dipoles.d11[0],
        dipoles.d00[1] - dipoles.d11[1],
        dipoles.d00[2] - dipoles.d11[2],
    ];
    let sum = [
        dipoles.d00[0] + dipoles.d11[0],
        dipoles.d00[1] + dipoles.d11[1],
        dipoles.d00[2] + dipoles.d11[2],
    ];
    (rabi, dot3(field, diff) * inv, dot3(field, sum) * inv)
}

/// Commensurable frequency lattice: fundamental nu, carrier omega_s = p nu,
/// tone integers n_j with omega_j = n_j nu, and the detuning
/// delta = omega0 - omega_s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyLattice<T: Real> {
    pub nu: T,
    pub p: u64,
    pub n: Vec<u64>,
    pub omega_s: T,
    pub delta: T,
}

/// Knobs for the rational-snapping search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LatticeOptions<T: Real> {
    /// Relative tolerance for accepting a rational frequency ratio.
    ///
    /// Frequencies entered as decimals are exact rationals in binary floating
    /// point up to ~1e-16 relative, so the default has ample slack for real
    /// inputs. It is deliberately far below 1e-9: a generic irrational ratio r
    /// admits continued-fraction convergents with error ~ 1/q^2, and the
    /// largest denominator surviving the integer bound would otherwise let an
    /// accidental convergent pass as commensurable (5000/pi is approximated
    /// to 8e-10 by 837155/526, for example).
    pub rel_tol: T,
    /// Upper bound on the lattice integers p and n_j.
    pub max_integer: u64,
}

impl<T: Real> Default for LatticeOptions<T> {
    fn default() -> Self {
        LatticeOptions {
            rel_tol: T::of(1e-11),
            max_integer: 1_000_000,
        }
    }
}

/// Best rational approximation num/den to x (> 0) with den bounded, by
/// continued-fraction convergents. Returns None if the tolerance cannot be
/// met within the bound.
fn rational_approx<T: Real>(x: T, rel_tol: T, max_den: u64) -> Option<(u64, u64)> {
    debug_assert!(x > T::zero());
    let (mut h0, mut h1) = (1u64, x.floor().to_u64()?);
    let (mut k0, mut k1) = (0u64, 1u64);
    let mut frac = x.fract();
    for _ in 0..64 {
        let approx = T::from_u64(h1)? / T::from_u64(k1)?;
        if ((approx - x) / x).abs() <= rel_tol {
            return Some((h1, k1));
        }
        if frac == T::zero() {
            break;
        }
        let inv = frac.recip();
        let a = inv.floor();
        frac = inv.fract();
        let a_u = a.to_u64()?;
        let h2 = a_u.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a_u.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    let approx = T::from_u64(h1)? / T::from_u64(k1)?;
    (((approx - x) / x).abs() <= rel_tol).then_some((h1, k1))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_checked(a: u64, b: u64, cap: u64) -> Option<u64> {
    let g = gcd(a, b);
    let l = (a / g).checked_mul(b)?;
    (l <= cap).then_some(l)
}

/// Construct the frequency lattice.
///
/// `hf_indices` names the near-resonant drive components; the carrier
/// omega_s is their mean. The fundamental nu is detected by rational
/// snapping of every frequency ratio against the smallest member of
/// {omega_s, omega_1, ..., omega_N}.
pub fn build_lattice<T: Real>(
    atom: &AtomParams<T>,
    drives: &[DriveComponent<T>],
    hf_indices: &[usize],
    opts: &LatticeOptions<T>,
) -> Result<FrequencyLattice<T>> {
    atom.validate()?;
    if drives.is_empty() {
        return Err(Error::Config("at least one drive component required".into()));
    }
    for d in drives {
        d.validate()?;
    }
    if hf_indices.is_empty() {
        return Err(Error::Config(
            "hf_indices must select at least one high-frequency component".into(),
        ));
    }
    for &i in hf_indices {
        if i >= drives.len() {
            return Err(Error::Config(format!(
                "hf index {i} out of range (have {} drives)",
                drives.len()
            )));
        }
    }

    let count = T::from_usize(hf_indices.len()).unwrap();
    let omega_s_raw = hf_indices
        .iter()
        .map(|&i| drives[i].omega)
        .fold(T::zero(), |a, b| a + b)
        / count;

    // freqs[0] is the carrier; the rest follow drive order.
    let mut freqs = Vec::with_capacity(drives.len() + 1);
    freqs.push(omega_s_raw);
    freqs.extend(drives.iter().map(|d| d.omega));

    let f_min = freqs.iter().copied().fold(T::infinity(), T::min);
    let mut q = 1u64;
    let mut ratios = Vec::with_capacity(freqs.len());
    for &f in &freqs {
        let r = f / f_min;
        let (_, den) = rational_approx(r, opts.rel_tol, opts.max_integer).ok_or_else(|| {
            Error::IncommensurableFrequencies(format!(
                "frequency ratio {r} admits no rational approximation with denominator <= {} at rel tol {:e}",
                opts.max_integer, opts.rel_tol
            ))
        })?;
        q = lcm_checked(q, den, opts.max_integer).ok_or_else(|| {
            Error::IncommensurableFrequencies(format!(
                "common denominator exceeds the integer bound {}",
                opts.max_integer
            ))
        })?;
        ratios.push(r);
    }

    let qt = T::from_u64(q).unwrap();
    let mut ints = Vec::with_capacity(ratios.len());
    for (&r, &f) in ratios.iter().zip(&freqs) {
        let m = (r * qt).round();
        let m_u = m.to_u64().filter(|&v| v >= 1).ok_or_else(|| {
            Error::IncommensurableFrequencies(format!("non-positive lattice integer for {f}"))
        })?;
        if m_u > opts.max_integer {
            return Err(Error::IncommensurableFrequencies(format!(
                "lattice integer {m_u} exceeds the bound {}",
                opts.max_integer
            )));
        }
        if ((m / qt - r) / r).abs() > opts.rel_tol {
            return Err(Error::IncommensurableFrequencies(format!(
                "frequency {f} misses the lattice by more than rel tol {:e}",
                opts.rel_tol
            )));
        }
        ints.push(m_u);
    }

    // Least-squares fundamental: minimizes sum (omega_i - n_i nu)^2, then
    // every frequency is replaced by its exact multiple of nu.
    let mut num = T::zero();
    let mut den = T::zero();
    for (&m, &f) in ints.iter().zip(&freqs) {
        let mt = T::from_u64(m).unwrap();
        num = num + mt * f;
        den = den + mt * mt;
    }
    let nu = num / den;

    let p = ints[0];
    let n = ints[1..].to_vec();
    let omega_s = T::from_u64(p).unwrap() * nu;
    Ok(FrequencyLattice {
        nu,
        p,
        n,
        omega_s,
        delta: atom.omega0 - omega_s,
    })
}

impl<T: Real> FrequencyLattice<T> {
    /// Drives with carrier frequencies replaced by exact lattice multiples.
    pub fn snapped_drives(&self, drives: &[DriveComponent<T>]) -> Vec<DriveComponent<T>> {
        assert_eq!(drives.len(), self.n.len());
        drives
            .iter()
            .zip(&self.n)
            .map(|(d, &m)| DriveComponent {
                omega: T::from_u64(m).unwrap() * self.nu,
                ..*d
            })
            .collect()
    }

    /// One fundamental period 2 pi / nu.
    pub fn period(&self) -> T {
        T::of(2.0) * T::PI() / self.nu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(omega0: f64) -> AtomParams<f64> {
        AtomParams::new(omega0, 1.0).unwrap()
    }

    fn drive(omega: f64) -> DriveComponent<f64> {
        DriveComponent::new(omega, 0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn bichromatic_lattice_integers() {
        // carrier at 5000, low tone at 20: nu = 20, p = 250, n = (250, 1)
        let lat = build_lattice(
            &atom(5000.0),
            &[drive(5000.0), drive(20.0)],
            &[0],
            &LatticeOptions::default(),
        )
        .unwrap();
        assert_eq!(lat.p, 250);
        assert_eq!(lat.n, vec![250, 1]);
        assert!((lat.nu - 20.0).abs() < 1e-12);
        assert_eq!(lat.delta, 0.0);
        assert_eq!(lat.omega_s, 250.0 * lat.nu);
    }

    #[test]
    fn trichromatic_lattice_integers() {
        // symmetric detuned pair around 5000 plus low tone at 20
        let lat = build_lattice(
            &atom(5000.0),
            &[drive(4980.0), drive(5020.0), drive(20.0)],
            &[0, 1],
            &LatticeOptions::default(),
        )
        .unwrap();
        assert_eq!(lat.p, 250);
        assert_eq!(lat.n, vec![249, 251, 1]);
        assert!((lat.nu - 20.0).abs() < 1e-12);
    }

    #[test]
    fn irrational_ratio_is_rejected() {
        let err = build_lattice(
            &atom(5000.0),
            &[drive(5000.0), drive(std::f64::consts::PI)],
            &[0],
            &LatticeOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::IncommensurableFrequencies(_)));
    }

    #[test]
    fn snapping_is_exact_bit_for_bit() {
        let drives = [drive(4980.000000001), drive(5020.0), drive(19.999999999)];
        let opts = LatticeOptions {
            rel_tol: 1e-9,
            ..LatticeOptions::default()
        };
        let lat = build_lattice(&atom(5000.0), &drives, &[0, 1], &opts).unwrap();
        let snapped = lat.snapped_drives(&drives);
        for (d, &m) in snapped.iter().zip(&lat.n) {
            assert_eq!(d.omega, m as f64 * lat.nu);
        }
        assert_eq!(lat.omega_s, lat.p as f64 * lat.nu);

        // sub-ulp fuzz is absorbed at the default tolerance too
        let drives = [drive(4980.0 + 3e-12), drive(5020.0), drive(20.0 - 1e-13)];
        let lat = build_lattice(&atom(5000.0), &drives, &[0, 1], &LatticeOptions::default())
            .unwrap();
        let snapped = lat.snapped_drives(&drives);
        for (d, &m) in snapped.iter().zip(&lat.n) {
            assert_eq!(d.omega, m as f64 * lat.nu);
        }
        assert_eq!(lat.omega_s, lat.p as f64 * lat.nu);
    }

    #[test]
    fn dipole_reduction_matches_dot_products() {
        let dip = DipoleSet {
            d00: [10.0, 0.0, 0.0],
            d11: [-10.0, 0.0, 0.0],
            d10: [-20.0, 0.0, 0.0],
        };
        let (rabi, da, ds) = reduce_dipoles(&dip, [1.0, 0.0, 0.0], 1.0);
        assert_eq!(rabi, 20.0);
        assert_eq!(da, 20.0);
        assert_eq!(ds, 0.0);
    }

    #[test]
    fn orthogonal_field_reduces_to_zero_couplings() {
        let dip = DipoleSet {
            d00: [1.0, 0.0, 0.0],
            d11: [2.0, 0.0, 0.0],
            d10: [3.0, 0.0, 0.0],
        };
        let (rabi, da, ds) = reduce_dipoles(&dip, [0.0, 1.0, 0.0], 1.0);
        assert_eq!((rabi, da), (0.0, 0.0));
        assert_eq!(ds, 0.0);
    }

    #[test]
    fn nonpolar_always_has_zero_delta_a() {
        let dip = DipoleSet {
            d00: [0.3, -0.1, 2.0],
            d11: [0.3, -0.1, 2.0],
            d10: [1.0, 1.0, 0.0],
        };
        for field in [[1.0, 0.0, 0.0], [0.4, -2.0, 0.9]] {
            let (_, da, _) = reduce_dipoles(&dip, field, 1.0);
            assert_eq!(da, 0.0);
        }
    }

    #[test]
    fn negative_rabi_absorbed_into_phase() {
        let dip = DipoleSet {
            d00: [0.0; 3],
            d11: [0.0; 3],
            d10: [5.0, 0.0, 0.0], // raw rabi = -5 for E = e_x
        };
        let d =
            DriveComponent::from_dipoles(100.0, 0.25, [1.0, 0.0, 0.0], &dip, 1.0).unwrap();
        assert_eq!(d.rabi, 5.0);
        assert!((d.phi - (0.25 + std::f64::consts::PI)).abs() < 1e-15);
    }
}
