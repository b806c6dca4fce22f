//! Dense complex LU with partial pivoting. Fallback path for small systems
//! and the reference the banded solver is tested against.

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

#[derive(Debug, Clone)]
pub struct DenseLu<T: Real> {
    n: usize,
    data: Vec<C<T>>, // row-major, L below diagonal (unit), U on and above
    ipiv: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    /// Factor a row-major n x n matrix (consumed).
    pub fn factor(mut data: Vec<C<T>>, n: usize) -> Result<Self> {
        assert_eq!(data.len(), n * n);
        let scale = data
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), T::max)
            .max(T::one());
        let tiny = scale * T::epsilon() * T::of(16.0);
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let mut piv = j;
            let mut best = data[j * n + j].norm();
            for r in (j + 1)..n {
                let mag = data[r * n + j].norm();
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
            ipiv[j] = piv;
            if piv != j {
                for c in 0..n {
                    data.swap(j * n + c, piv * n + c);
                }
            }
            let inv_p = data[j * n + j].finv();
            for r in (j + 1)..n {
                let m = data[r * n + j] * inv_p;
                data[r * n + j] = m;
                if m == czero() {
                    continue;
                }
                let (head, tail) = data.split_at_mut(r * n);
                let prow = &head[j * n + j + 1..j * n + n];
                let trow = &mut tail[j + 1..n];
                for (t, p) in trow.iter_mut().zip(prow) {
                    *t -= m * *p;
                }
            }
        }
        Ok(DenseLu { n, data, ipiv })
    }

    pub fn solve_in_place(&self, b: &mut [C<T>]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for j in 0..n {
            if self.ipiv[j] != j {
                b.swap(j, self.ipiv[j]);
            }
            let bj = b[j];
            for r in (j + 1)..n {
                b[r] -= self.data[r * n + j] * bj;
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for c in (i + 1)..n {
                acc -= self.data[i * n + c] * b[c];
            }
            b[i] = acc * self.data[i * n + i].finv();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cre;

    #[test]
    fn solves_known_system() {
        // [[2, 1], [1, 3]] x = [5, 10] -> x = [1, 3]
        let data = vec![cre(2.0), cre(1.0), cre(1.0), cre(3.0)];
        let lu = DenseLu::factor(data, 2).unwrap();
        let mut b = vec![cre(5.0), cre(10.0)];
        lu.solve_in_place(&mut b);
        assert!((b[0] - cre(1.0)).norm() < 1e-14);
        assert!((b[1] - cre(3.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_identity_with_shift() {
        let n = 4;
        let mut data = vec![czero(); n * n];
        for i in 0..n {
            data[i * n + i] = C::new(0.0, 1.0);
        }
        let lu = DenseLu::factor(data, n).unwrap();
        let mut b = vec![cre(1.0); n];
        lu.solve_in_place(&mut b);
        for x in b {
            assert!((x - C::new(0.0, -1.0)).norm() < 1e-14);
        }
    }
}
