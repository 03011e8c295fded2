//! Symmetric sparse matrices in compressed sparse row form.
//!
//! Both triangles are stored explicitly: matrix-vector products run as one
//! forward row sweep, and principal submatrices drop out without
//! re-symmetrization. All construction paths are order-deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::fp;

/// Abstract symmetric operator, implemented by assembled matrices and by the
/// Schwarz preconditioners.
pub trait LinearOp {
    fn dim(&self) -> usize;

    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y);
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Builds from (row, col, value) triplets, summing duplicates. Callers
    /// must supply both triangles; symmetry is their contract (checkable with
    /// [`SparseSym::symmetry_error`]).
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        for &(r, c, _) in &triplets {
            assert!(r < n && c < n, "triplet index out of range");
        }
        // Stable sort keeps duplicate summation order reproducible.
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut next_row = 0usize;
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                while next_row <= r {
                    row_ptr[next_row] = col_idx.len();
                    next_row += 1;
                }
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        while next_row <= n {
            row_ptr[next_row] = col_idx.len();
            next_row += 1;
        }
        SparseSym { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    /// Entry lookup by binary search within the row.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates all stored entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals.iter()).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Largest |a_ij - a_ji| over the stored pattern.
    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, j, v) in self.entries() {
            worst = fp::max(worst, fp::abs(v - self.get(j, i)));
        }
        worst
    }

    /// a*A + b*B entrywise over the merged pattern. Panics on dimension
    /// mismatch.
    pub fn linear_combination(a: f64, ma: &SparseSym, b: f64, mb: &SparseSym) -> SparseSym {
        assert_eq!(ma.n, mb.n, "linear_combination dimension mismatch");
        let n = ma.n;
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(ma.nnz() + mb.nnz());
        let mut values = Vec::with_capacity(ma.nnz() + mb.nnz());
        for i in 0..n {
            let (ca, va) = ma.row(i);
            let (cb, vb) = mb.row(i);
            let (mut p, mut q) = (0usize, 0usize);
            while p < ca.len() || q < cb.len() {
                let (j, v) = if q >= cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    let e = (ca[p], a * va[p]);
                    p += 1;
                    e
                } else if p >= ca.len() || cb[q] < ca[p] {
                    let e = (cb[q], b * vb[q]);
                    q += 1;
                    e
                } else {
                    let e = (ca[p], a * va[p] + b * vb[q]);
                    p += 1;
                    q += 1;
                    e
                };
                col_idx.push(j);
                values.push(v);
            }
            row_ptr[i + 1] = col_idx.len();
        }
        SparseSym { n, row_ptr, col_idx, values }
    }

    /// Principal submatrix over `keep` (sorted, strictly increasing original
    /// indices), renumbered 0..keep.len().
    pub fn principal_submatrix(&self, keep: &[usize]) -> SparseSym {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]), "keep must be sorted");
        let m = keep.len();
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut row_ptr = vec![0usize; m + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            let (cols, vals) = self.row(old_i);
            for (&j, &v) in cols.iter().zip(vals) {
                if map[j] != usize::MAX {
                    col_idx.push(map[j]);
                    values.push(v);
                }
            }
            row_ptr[new_i + 1] = col_idx.len();
        }
        SparseSym { n: m, row_ptr, col_idx, values }
    }
}

impl LinearOp for SparseSym {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut s = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                s += v * x[j];
            }
            y[i] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_duplicates_and_close_empty_rows() {
        let m = SparseSym::from_triplets(
            4,
            vec![(0, 0, 1.0), (0, 0, 2.0), (2, 1, -1.0), (2, 3, 4.0), (1, 2, -1.0), (3, 2, 4.0)],
        );
        assert_eq!(m.nnz(), 5);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(2, 1), -1.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.row(1).0, &[2]);
        assert_eq!(m.row(3).0, &[2]);
    }

    #[test]
    fn apply_matches_dense_arithmetic() {
        // [[2,-1,0],[-1,2,-1],[0,-1,2]] * [1,2,3]
        let mut t = Vec::new();
        for i in 0..3usize {
            t.push((i, i, 2.0));
            if i + 1 < 3 {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let m = SparseSym::from_triplets(3, t);
        assert_eq!(m.apply(&[1.0, 2.0, 3.0]), vec![0.0, 0.0, 4.0]);
        assert_eq!(m.symmetry_error(), 0.0);
    }

    #[test]
    fn linear_combination_merges_patterns() {
        let a = SparseSym::from_triplets(2, vec![(0, 0, 1.0), (1, 1, 1.0)]);
        let b = SparseSym::from_triplets(2, vec![(0, 1, 3.0), (1, 0, 3.0), (1, 1, 1.0)]);
        let c = SparseSym::linear_combination(2.0, &a, 0.5, &b);
        assert_eq!(c.get(0, 0), 2.0);
        assert_eq!(c.get(0, 1), 1.5);
        assert_eq!(c.get(1, 1), 2.5);
    }

    #[test]
    fn principal_submatrix_renumbers() {
        let mut t = Vec::new();
        for i in 0..4usize {
            t.push((i, i, (i + 1) as f64));
        }
        t.push((0, 3, 7.0));
        t.push((3, 0, 7.0));
        let m = SparseSym::from_triplets(4, t);
        let s = m.principal_submatrix(&[0, 3]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.get(0, 0), 1.0);
        assert_eq!(s.get(1, 1), 4.0);
        assert_eq!(s.get(0, 1), 7.0);
    }
}
