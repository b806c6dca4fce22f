//! Minimal square complex CSR matrix, built from triplets.

use crate::scalar::{czero, Real, C};

/// Compressed-sparse-row square matrix over complex scalars.
#[derive(Debug, Clone)]
pub struct CsrMatrix<T: Real> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C<T>>,
}

impl<T: Real> CsrMatrix<T> {
    /// Build from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, C<T>)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_unstable_by_key(|&k| (triplets[k].0, triplets[k].1));

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<C<T>> = Vec::with_capacity(triplets.len());

        for &k in &order {
            let (r, c, v) = triplets[k];
            debug_assert!(r < n && c < n);
            if let (Some(&lc), Some(lv)) = (col_idx.last(), values.last_mut()) {
                if row_ptr[r + 1] > 0 && lc == c && col_idx.len() == row_ptr[r + 1] {
                    *lv += v;
                    continue;
                }
            }
            // close out rows up to r
            col_idx.push(c);
            values.push(v);
            row_ptr[r + 1] = col_idx.len();
        }
        // make row_ptr cumulative over empty rows
        for r in 1..=n {
            if row_ptr[r] < row_ptr[r - 1] {
                row_ptr[r] = row_ptr[r - 1];
            }
        }
        CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterate the stored entries of one row as (col, value) pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C<T>)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.col_idx[lo..hi]
            .iter()
            .zip(&self.values[lo..hi])
            .map(|(&c, &v)| (c, v))
    }

    /// All stored entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C<T>)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// y = A x.
    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![czero(); self.n];
        for r in 0..self.n {
            let mut acc = czero();
            for (c, v) in self.row(r) {
                acc += v * x[c];
            }
            y[r] = acc;
        }
        y
    }

    /// Infinity norm of A x - b.
    pub fn residual_inf(&self, x: &[C<T>], b: &[C<T>]) -> T {
        let ax = self.matvec(x);
        ax.iter()
            .zip(b)
            .map(|(a, bb)| (a - bb).norm())
            .fold(T::zero(), T::max)
    }

    /// Symmetric permutation B = P A P^T where `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> CsrMatrix<T> {
        assert_eq!(order.len(), self.n);
        let mut inv = vec![0usize; self.n];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let triplets: Vec<(usize, usize, C<T>)> = self
            .entries()
            .map(|(r, c, v)| (inv[r], inv[c], v))
            .collect();
        CsrMatrix::from_triplets(self.n, &triplets)
    }

    /// Dense row-major copy (small systems and tests).
    pub fn to_dense(&self) -> Vec<C<T>> {
        let mut d = vec![czero(); self.n * self.n];
        for (r, c, v) in self.entries() {
            d[r * self.n + c] += v;
        }
        d
    }

    /// Undirected adjacency of the symmetrized pattern, without self loops.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (r, c, _) in self.entries() {
            if r != c {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cre;

    #[test]
    fn triplets_merge_duplicates() {
        let t = vec![
            (0, 0, cre(1.0)),
            (0, 0, cre(2.0)),
            (1, 0, cre(5.0)),
            (0, 2, cre(3.0)),
            (2, 2, cre(4.0)),
        ];
        let m = CsrMatrix::from_triplets(3, &t);
        assert_eq!(m.nnz(), 4);
        let d = m.to_dense();
        assert_eq!(d[0].re, 3.0);
        assert_eq!(d[2].re, 3.0);
        assert_eq!(d[3].re, 5.0);
        assert_eq!(d[8].re, 4.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let t = vec![
            (0, 1, C::new(1.0, -1.0)),
            (1, 0, cre(2.0)),
            (1, 1, C::new(0.0, 3.0)),
        ];
        let m = CsrMatrix::from_triplets(2, &t);
        let x = vec![cre(1.0), C::new(0.0, 1.0)];
        let y = m.matvec(&x);
        assert!((y[0] - C::new(1.0, 1.0)).norm() < 1e-15);
        assert!((y[1] - C::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn permutation_is_similarity() {
        let t = vec![
            (0, 1, cre(1.0)),
            (1, 2, cre(2.0)),
            (2, 0, cre(3.0)),
            (0, 0, cre(4.0)),
        ];
        let m = CsrMatrix::from_triplets(3, &t);
        let order = vec![2usize, 0, 1]; // order[new] = old
        let p = m.permuted(&order);
        // entry old (0,1) -> new (1,2)
        let d = p.to_dense();
        assert_eq!(d[1 * 3 + 2].re, 1.0);
        assert_eq!(d[1 * 3 + 1].re, 4.0);
    }
}
