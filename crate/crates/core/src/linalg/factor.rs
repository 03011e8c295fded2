//! Direct solver for sparse symmetric positive definite systems.
//!
//! The matrix is permuted with reverse Cuthill-McKee to shrink its envelope
//! and then factorized as L*D*L^T inside that envelope (the envelope is
//! closed under this factorization, so no symbolic fill analysis is needed).
//! On the strip-shaped and grid-shaped systems this solver sees, the RCM
//! envelope stays close to the true fill.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::sparse::{LinearOp, SparseSym};

/// Fill-reducing ordering: returns `order` with `order[k]` = original index
/// placed at position k. Deterministic: ties break on the smaller index, and
/// each connected component is seeded from a pseudo-peripheral vertex found
/// by two breadth-first sweeps.
pub fn reverse_cuthill_mckee(a: &SparseSym) -> Vec<usize> {
    let n = a.dim();
    let deg: Vec<usize> = (0..n)
        .map(|i| a.row(i).0.iter().filter(|&&j| j != i).count())
        .collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut nbuf: Vec<(usize, usize)> = Vec::new();
    while order.len() < n {
        let mut start = usize::MAX;
        for i in 0..n {
            if !visited[i] && (start == usize::MAX || deg[i] < deg[start]) {
                start = i;
            }
        }
        for _ in 0..2 {
            start = farthest_min_degree(a, &deg, start);
        }
        let base = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = base;
        while head < order.len() {
            let u = order[head];
            head += 1;
            nbuf.clear();
            for &v in a.row(u).0 {
                if v != u && !visited[v] {
                    nbuf.push((deg[v], v));
                }
            }
            nbuf.sort_unstable();
            for &(_, v) in &nbuf {
                if !visited[v] {
                    visited[v] = true;
                    order.push(v);
                }
            }
        }
        order[base..].reverse();
    }
    order
}

/// BFS from `start`; returns the minimum-degree vertex of the last level.
fn farthest_min_degree(a: &SparseSym, deg: &[usize], start: usize) -> usize {
    let n = a.dim();
    let mut seen = vec![false; n];
    let mut level: Vec<usize> = vec![start];
    seen[start] = true;
    let mut last = level.clone();
    while !level.is_empty() {
        last = level.clone();
        let mut next = Vec::new();
        for &u in &level {
            for &v in a.row(u).0 {
                if v != u && !seen[v] {
                    seen[v] = true;
                    next.push(v);
                }
            }
        }
        level = next;
    }
    let mut best = last[0];
    for &v in &last {
        if deg[v] < deg[best] || (deg[v] == deg[best] && v < best) {
            best = v;
        }
    }
    best
}

/// Envelope LDL^T factor with its permutation.
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    perm: Vec<usize>,
    first: Vec<usize>,
    row_start: Vec<usize>,
    low: Vec<f64>,
    diag: Vec<f64>,
}

impl Factorization {
    /// Factorizes with the RCM ordering. Fails with
    /// [`Error::NotPositiveDefinite`] (reporting the original row index) on a
    /// nonpositive pivot.
    pub fn new(a: &SparseSym) -> Result<Self> {
        Self::with_perm(a, reverse_cuthill_mckee(a))
    }

    /// Factorizes with a caller-supplied ordering (`perm[k]` = original index
    /// at position k).
    pub fn with_perm(a: &SparseSym, perm: Vec<usize>) -> Result<Self> {
        let n = a.dim();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut iperm = vec![usize::MAX; n];
        for (k, &o) in perm.iter().enumerate() {
            iperm[o] = k;
        }
        // Envelope extents of the permuted lower triangle.
        let mut first: Vec<usize> = (0..n).collect();
        for pi in 0..n {
            for &oj in a.row(perm[pi]).0 {
                let pj = iperm[oj];
                if pj < first[pi] {
                    first[pi] = pj;
                }
            }
        }
        let mut row_start = vec![0usize; n + 1];
        for i in 0..n {
            row_start[i + 1] = row_start[i] + (i - first[i]);
        }
        let mut low = vec![0.0; row_start[n]];
        let mut diag = vec![0.0; n];
        for pi in 0..n {
            let (cols, vals) = a.row(perm[pi]);
            for (&oj, &v) in cols.iter().zip(vals) {
                let pj = iperm[oj];
                if pj == pi {
                    diag[pi] = v;
                } else if pj < pi {
                    low[row_start[pi] + (pj - first[pi])] = v;
                }
            }
        }
        // In-place LDL^T sweep over envelope rows.
        for i in 0..n {
            let fi = first[i];
            let ri = row_start[i];
            for j in fi..i {
                let fj = first[j];
                let k0 = if fi > fj { fi } else { fj };
                let mut s = low[ri + (j - fi)];
                let ia = ri + (k0 - fi);
                let ja = row_start[j] + (k0 - fj);
                for t in 0..(j - k0) {
                    s -= low[ia + t] * diag[k0 + t] * low[ja + t];
                }
                low[ri + (j - fi)] = s / diag[j];
            }
            let mut d = diag[i];
            for (t, k) in (fi..i).enumerate() {
                let l = low[ri + t];
                d -= l * l * diag[k];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { row: perm[i] });
            }
            diag[i] = d;
        }
        Ok(Factorization { n, perm, first, row_start, low, diag })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored strictly-lower entries (envelope size).
    pub fn profile(&self) -> usize {
        self.low.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            y[i] = b[self.perm[i]];
        }
        self.solve_permuted(&mut y);
        let mut x = vec![0.0; self.n];
        for i in 0..self.n {
            x[self.perm[i]] = y[i];
        }
        x
    }

    /// Forward/diagonal/backward sweeps on an already permuted right-hand
    /// side, in place.
    fn solve_permuted(&self, y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.row_start[i];
            let mut s = y[i];
            for t in 0..(i - fi) {
                s -= self.low[ri + t] * y[fi + t];
            }
            y[i] = s;
        }
        for i in 0..n {
            y[i] /= self.diag[i];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.row_start[i];
            let xi = y[i];
            for t in 0..(i - fi) {
                y[fi + t] -= self.low[ri + t] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::LinearOp;

    fn dense_to_sparse(n: usize, a: &[f64]) -> SparseSym {
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if a[i * n + j] != 0.0 {
                    t.push((i, j, a[i * n + j]));
                }
            }
        }
        SparseSym::from_triplets(n, t)
    }

    #[test]
    fn one_by_one() {
        let a = SparseSym::from_triplets(1, vec![(0, 0, 4.0)]);
        let f = Factorization::new(&a).unwrap();
        assert_eq!(f.solve(&[2.0]), vec![0.5]);
    }

    #[test]
    fn diagonal_solve() {
        let a = SparseSym::from_triplets(2, vec![(0, 0, 2.0), (1, 1, 8.0)]);
        let f = Factorization::new(&a).unwrap();
        assert_eq!(f.solve(&[2.0, 8.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn nonpositive_pivot_reports_original_row() {
        // Row 1 makes the matrix indefinite.
        let a = dense_to_sparse(2, &[1.0, 2.0, 2.0, 1.0]);
        match Factorization::new(&a) {
            Err(Error::NotPositiveDefinite { row }) => assert!(row < 2),
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn random_spd_solve_residual_small() {
        // B = A^T A + n*I over a deterministic pseudo-random dense A.
        let n = 40;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a: Vec<f64> = (0..n * n).map(|_| next()).collect();
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { n as f64 } else { 0.0 };
                for k in 0..n {
                    s += a[k * n + i] * a[k * n + j];
                }
                b[i * n + j] = s;
            }
        }
        let m = dense_to_sparse(n, &b);
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let f = Factorization::new(&m).unwrap();
        let x = f.solve(&rhs);
        let r = m.apply(&x);
        let err: f64 = r.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let nb: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err <= 1e-10 * nb, "residual {err} vs {nb}");
    }

    #[test]
    fn rcm_shrinks_grid_envelope() {
        // 2D 5-point Laplacian on a 10x30 grid, natural (wide) ordering.
        let (nx, ny) = (30usize, 10usize);
        let idx = |x: usize, y: usize| y * nx + x;
        let mut t = Vec::new();
        for y in 0..ny {
            for x in 0..nx {
                t.push((idx(x, y), idx(x, y), 4.0));
                if x + 1 < nx {
                    t.push((idx(x, y), idx(x + 1, y), -1.0));
                    t.push((idx(x + 1, y), idx(x, y), -1.0));
                }
                if y + 1 < ny {
                    t.push((idx(x, y), idx(x, y + 1), -1.0));
                    t.push((idx(x, y + 1), idx(x, y), -1.0));
                }
            }
        }
        let a = SparseSym::from_triplets(nx * ny, t);
        let natural = Factorization::with_perm(&a, (0..nx * ny).collect()).unwrap();
        let rcm = Factorization::new(&a).unwrap();
        assert!(
            rcm.profile() < natural.profile(),
            "rcm {} natural {}",
            rcm.profile(),
            natural.profile()
        );
        // and it still solves correctly
        let rhs = vec![1.0; nx * ny];
        let x = rcm.solve(&rhs);
        let r = a.apply(&x);
        let err: f64 = r.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9);
    }
}
