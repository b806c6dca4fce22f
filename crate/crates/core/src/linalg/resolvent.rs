//! Resolvent evaluation through one dense non-Hermitian eigendecomposition.
//!
//! For a fixed matrix A, probe row e and right-hand side r, the scan value
//! e^T (A + z I)^-1 r is a rational function sum_k c_k / (lambda_k + z). One
//! Schur decomposition plus triangular eigenvector extraction yields all
//! (lambda_k, c_k) at once; evaluating any shift afterwards is O(n). This is
//! the cross-validation partner of the per-shift banded path.

use nalgebra::{DMatrix, RealField};

use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::scalar::{czero, Real, C};

/// Pole expansion of e^T (A + z I)^-1 r.
#[derive(Debug, Clone)]
pub struct ResolventEigen<T: Real> {
    terms: Vec<(C<T>, C<T>)>, // (lambda_k, c_k)
}

impl<T: Real + RealField> ResolventEigen<T> {
    pub fn new(a: &CsrMatrix<T>, rhs: &[C<T>], probe: usize) -> Result<Self> {
        let n = a.dim();
        assert_eq!(rhs.len(), n);
        assert!(probe < n);

        let mut m = DMatrix::<C<T>>::zeros(n, n);
        for (r, c, v) in a.entries() {
            m[(r, c)] += v;
        }
        let scale = m
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), num_traits::Float::max);
        let unit_scale = num_traits::Float::max(scale, T::one());

        let schur = m
            .try_schur(<T as Real>::of(1e-15) * unit_scale, 50 * n.max(20))
            .ok_or_else(|| Error::NoConvergence("schur iteration stalled".into()))?;
        let (q, t) = schur.unpack();

        // Eigenvectors of the triangular factor by back-substitution; column k
        // is supported on rows 0..=k with unit trailing entry before
        // normalization (LAPACK ztrevc scheme, small denominators clamped).
        let small = <T as Real>::of(64.0) * T::epsilon() * unit_scale;
        let mut w = vec![czero::<T>(); n * n]; // column-major upper triangular
        for k in 0..n {
            let lambda = t[(k, k)];
            w[k * n + k] = C::new(T::one(), T::zero());
            for i in (0..k).rev() {
                let mut s = czero::<T>();
                for j in (i + 1)..=k {
                    s += t[(i, j)] * w[k * n + j];
                }
                let mut d = t[(i, i)] - lambda;
                if Float::max(Float::abs(d.re), Float::abs(d.im)) < small {
                    d = C::new(small, T::zero());
                }
                w[k * n + i] = -s / d;
            }
            // normalize the column to unit max-magnitude; the a_k * b_k
            // product below is invariant under this diagonal rescaling
            let mx = (0..=k)
                .map(|i| w[k * n + i].norm())
                .fold(T::zero(), Float::max);
            let inv = C::new(Float::recip(mx), T::zero());
            for i in 0..=k {
                w[k * n + i] *= inv;
            }
        }

        // a_k = (e_probe^T Q W)_k
        let mut a_row = vec![czero::<T>(); n];
        for k in 0..n {
            let mut acc = czero();
            for i in 0..=k {
                acc += q[(probe, i)] * w[k * n + i];
            }
            a_row[k] = acc;
        }

        // b = W^-1 Q^H rhs (W upper triangular)
        let mut g = vec![czero::<T>(); n];
        for i in 0..n {
            let mut acc = czero();
            for r in 0..n {
                acc += q[(r, i)].conj() * rhs[r];
            }
            g[i] = acc;
        }
        for k in (0..n).rev() {
            let mut acc = g[k];
            for j in (k + 1)..n {
                acc -= w[j * n + k] * g[j];
            }
            g[k] = acc / w[k * n + k];
        }

        let terms = (0..n).map(|k| (t[(k, k)], a_row[k] * g[k])).collect();
        Ok(ResolventEigen { terms })
    }

    /// Evaluate e^T (A + z I)^-1 r.
    pub fn eval(&self, z: C<T>) -> C<T> {
        let mut acc = czero();
        for &(lambda, c) in &self.terms {
            acc += c / (lambda + z);
        }
        acc
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = C<T>> + '_ {
        self.terms.iter().map(|&(l, _)| l)
    }
}

use num_traits::Float;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::DenseLu;
    use crate::scalar::cre;

    #[test]
    fn matches_direct_solve_on_random_matrix() {
        let n = 24;
        let mut s: u64 = 0x2545f4914f6cdd1d;
        let mut rng = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut tr = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || rng() > 0.2 {
                    let mut v = C::new(rng(), rng());
                    if i == j {
                        v += C::new(-2.0 - 0.1 * i as f64, 3.0 * rng());
                    }
                    tr.push((i, j, v));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, &tr);
        let rhs: Vec<C<f64>> = (0..n).map(|_| C::new(rng(), rng())).collect();
        let probe = 3;
        let res = ResolventEigen::new(&a, &rhs, probe).unwrap();

        for &zim in &[0.0, 0.5, -3.0, 17.0] {
            let z = C::new(0.0, zim);
            let mut dense = a.to_dense();
            for i in 0..n {
                dense[i * n + i] += z;
            }
            let lu = DenseLu::factor(dense, n).unwrap();
            let mut x = rhs.clone();
            lu.solve_in_place(&mut x);
            let direct = x[probe];
            let viaeig = res.eval(z);
            assert!(
                (direct - viaeig).norm() < 1e-9 * (1.0 + direct.norm()),
                "z = {z}: direct {direct} vs eigen {viaeig}"
            );
        }
    }

    #[test]
    fn diagonal_matrix_poles_are_exact() {
        let tr = vec![(0, 0, C::new(-1.0, 2.0)), (1, 1, C::new(-3.0, -1.0))];
        let a = CsrMatrix::from_triplets(2, &tr);
        let res = ResolventEigen::new(&a, &[cre(1.0), cre(1.0)], 0).unwrap();
        let z = C::new(0.7, 0.1);
        let expect = (C::new(-1.0, 2.0) + z).finv();
        assert!((res.eval(z) - expect).norm() < 1e-13);
    }
}
