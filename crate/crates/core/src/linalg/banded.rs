//! Row-major banded LU with partial pivoting for complex matrices.
//!
//! Storage follows the LAPACK band convention adapted to rows: a matrix with
//! `kl` subdiagonals and `ku` superdiagonals is factored in place inside a
//! window of `2*kl + ku + 1` entries per row, the extra `kl` superdiagonals
//! holding pivoting fill. The diagonal shift `A + z I` reuses one immutable
//! template, so a frequency scan pays only an O(n * kl * (kl + ku)) refactor
//! per grid point.

use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::scalar::{czero, Real, C};

/// Band template of a fixed matrix, ready for repeated shifted factorizations.
#[derive(Debug, Clone)]
pub struct BandTemplate<T: Real> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row window width 2*kl + ku + 1; entry (i, j) lives at i*w + (j - i + kl).
    w: usize,
    base: Vec<C<T>>,
    /// Largest entry magnitude, used to scale the singularity threshold.
    scale: T,
}

/// LU factors produced by [`BandTemplate::factor`]; reusable workspace.
#[derive(Debug, Clone)]
pub struct BandLu<T: Real> {
    n: usize,
    kl: usize,
    w: usize,
    data: Vec<C<T>>,
    ipiv: Vec<usize>,
}

impl<T: Real> BandTemplate<T> {
    /// Capture the band structure of `m`. Entries outside the stated band are
    /// rejected by debug assertion; callers compute (kl, ku) from the pattern.
    pub fn from_csr(m: &CsrMatrix<T>, kl: usize, ku: usize) -> Self {
        let n = m.dim();
        let kl = kl.min(n.saturating_sub(1));
        let ku = ku.min(n.saturating_sub(1));
        let w = 2 * kl + ku + 1;
        let mut base = vec![czero(); n * w];
        let mut scale = T::zero();
        for (r, c, v) in m.entries() {
            debug_assert!(c + kl >= r && c <= r + ku, "entry outside declared band");
            base[r * w + (c + kl - r)] += v;
            scale = scale.max(v.norm());
        }
        BandTemplate {
            n,
            kl,
            ku,
            w,
            base,
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Fresh workspace sized for this template.
    pub fn workspace(&self) -> BandLu<T> {
        BandLu {
            n: self.n,
            kl: self.kl,
            w: self.w,
            data: vec![czero(); self.n * self.w],
            ipiv: vec![0; self.n],
        }
    }

    /// Factor A + z I into `lu`.
    pub fn factor(&self, z: C<T>, lu: &mut BandLu<T>) -> Result<()> {
        let (n, kl, ku, w) = (self.n, self.kl, self.ku, self.w);
        debug_assert_eq!(lu.data.len(), self.base.len());
        lu.data.copy_from_slice(&self.base);
        for i in 0..n {
            lu.data[i * w + kl] += z;
        }

        let tiny = (self.scale + z.norm()).max(T::one()) * T::epsilon() * T::of(16.0);
        let data = &mut lu.data;

        for j in 0..n {
            // pivot search among rows j ..= j+kl at column j
            let rmax = (j + kl).min(n - 1);
            let mut piv = j;
            let mut best = data[j * w + kl].norm();
            for r in (j + 1)..=rmax {
                let mag = data[r * w + (j + kl - r)].norm();
                if mag > best {
                    best = mag;
                    piv = r;
                }
            }
            if !(best > tiny) {
                return Err(Error::SingularSystem(format!(
                    "zero pivot at column {j} (|p| = {best:e})"
                )));
            }
            lu.ipiv[j] = piv;
            let cend = (j + kl + ku).min(n - 1);
            let seg = cend - j; // columns j+1 ..= cend have `seg` entries
            if piv != j {
                // swap the [j, cend] segments of rows j and piv
                for c in j..=cend {
                    data.swap(j * w + (c + kl - j), piv * w + (c + kl - piv));
                }
            }
            let pivot = data[j * w + kl];
            let inv_p = pivot.finv();
            for r in (j + 1)..=rmax {
                let lead = r * w + (j + kl - r);
                let m = data[lead] * inv_p;
                data[lead] = m;
                if seg == 0 || m == czero() {
                    continue;
                }
                let (head, tail) = data.split_at_mut(r * w);
                let prow = &head[j * w + kl + 1..j * w + kl + 1 + seg];
                let trow = &mut tail[(j + kl - r) + 1..(j + kl - r) + 1 + seg];
                for (t, p) in trow.iter_mut().zip(prow) {
                    *t -= m * *p;
                }
            }
        }
        Ok(())
    }
}

impl<T: Real> BandLu<T> {
    /// Solve (A + z I) x = b in place.
    pub fn solve_in_place(&self, b: &mut [C<T>]) {
        let (n, kl, w) = (self.n, self.kl, self.w);
        assert_eq!(b.len(), n);
        let ukw = w - kl - 1; // kl + ku: width of U above the diagonal
        for j in 0..n {
            let piv = self.ipiv[j];
            if piv != j {
                b.swap(j, piv);
            }
            let bj = b[j];
            let rmax = (j + kl).min(n - 1);
            for r in (j + 1)..=rmax {
                b[r] -= self.data[r * w + (j + kl - r)] * bj;
            }
        }
        for i in (0..n).rev() {
            let cend = (i + ukw).min(n - 1);
            let mut acc = b[i];
            let row = &self.data[i * w + kl..i * w + kl + (cend - i) + 1];
            for (p, &x) in row[1..].iter().zip(&b[i + 1..=cend]) {
                acc -= p * x;
            }
            b[i] = acc * row[0].finv();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::DenseLu;
    use crate::scalar::cre;
    use proptest::prelude::*;

    fn solve_both(
        n: usize,
        kl: usize,
        ku: usize,
        entries: &[(usize, usize, C<f64>)],
        z: C<f64>,
        b: &[C<f64>],
    ) -> (Vec<C<f64>>, Vec<C<f64>>) {
        let csr = CsrMatrix::from_triplets(n, entries);
        let tpl = BandTemplate::from_csr(&csr, kl, ku);
        let mut lu = tpl.workspace();
        tpl.factor(z, &mut lu).unwrap();
        let mut x = b.to_vec();
        lu.solve_in_place(&mut x);

        let mut dense = csr.to_dense();
        for i in 0..n {
            dense[i * n + i] += z;
        }
        let dlu = DenseLu::factor(dense, n).unwrap();
        let mut xd = b.to_vec();
        dlu.solve_in_place(&mut xd);
        (x, xd)
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let n = 12;
        let mut tr = Vec::new();
        for i in 0..n {
            tr.push((i, i, C::new(3.0 + i as f64 * 0.1, 0.4)));
            if i + 1 < n {
                tr.push((i, i + 1, C::new(1.0, -0.3)));
                tr.push((i + 1, i, C::new(-0.7, 0.2)));
            }
        }
        let b: Vec<C<f64>> = (0..n).map(|i| C::new(i as f64, 1.0 - i as f64)).collect();
        let (x, xd) = solve_both(n, 1, 1, &tr, C::new(0.3, -2.0), &b);
        for (a, d) in x.iter().zip(&xd) {
            assert!((a - d).norm() < 1e-11, "band vs dense mismatch");
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let n = 3;
        let tr = vec![(0, 0, cre(1.0)), (1, 1, cre(1.0))]; // row 2 empty
        let csr = CsrMatrix::from_triplets(n, &tr);
        let tpl = BandTemplate::from_csr(&csr, 1, 1);
        let mut lu = tpl.workspace();
        assert!(matches!(
            tpl.factor(czero(), &mut lu),
            Err(Error::SingularSystem(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        /// Pivoted band solves agree with dense LU on random banded systems.
        #[test]
        fn random_banded_agrees_with_dense(
            n in 2usize..24,
            kl in 0usize..4,
            ku in 0usize..4,
            seed in any::<u64>(),
        ) {
            let mut s = seed | 1;
            let mut rng = move || {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let mut tr = Vec::new();
            for i in 0..n {
                // strong diagonal keeps the test matrices comfortably regular
                tr.push((i, i, C::new(4.0 + rng(), rng())));
                for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                    if j != i {
                        tr.push((i, j, C::new(rng(), rng())));
                    }
                }
            }
            let b: Vec<C<f64>> = (0..n).map(|_| C::new(rng(), rng())).collect();
            let (x, xd) = solve_both(n, kl, ku, &tr, C::new(rng(), rng()), &b);
            for (a, d) in x.iter().zip(&xd) {
                prop_assert!((a - d).norm() < 1e-9);
            }
        }
    }
}
