//! Dense eigenvalue reference path.
//!
//! Small systems are materialized as dense matrices, reduced to tridiagonal
//! form by Householder similarity transforms, and their extreme eigenvalues
//! located by Sturm-count bisection. This route shares no code with the
//! assembly or Krylov side beyond the final tridiagonal bisection, so it
//! serves as an independent check on the solver's condition-number
//! estimates.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;
use crate::linalg::sparse::{LinearOp, SparseSym};

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct DenseMat {
    n: usize,
    a: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(n: usize) -> Self {
        DenseMat { n, a: vec![0.0; n * n] }
    }

    pub fn from_sparse(s: &SparseSym) -> Self {
        let mut m = DenseMat::zeros(s.dim());
        for (i, j, v) in s.entries() {
            m.a[i * s.dim() + j] = v;
        }
        m
    }

    /// Materializes any linear operator column by column with unit-vector
    /// applies.
    pub fn from_operator(op: &dyn LinearOp) -> Self {
        let n = op.dim();
        let mut m = DenseMat::zeros(n);
        let mut e = vec![0.0; n];
        let mut y = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            op.apply_into(&e, &mut y);
            e[j] = 0.0;
            for i in 0..n {
                m.a[i * n + j] = y[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    /// `(A + A^T) / 2`; used to scrub roundoff asymmetry before
    /// tridiagonalization, which assumes exact symmetry.
    pub fn symmetrized(&self) -> Self {
        let n = self.n;
        let mut m = DenseMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = 0.5 * (self.a[i * n + j] + self.a[j * n + i]);
            }
        }
        m
    }

    pub fn matmul(&self, other: &DenseMat) -> DenseMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut c = DenseMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c.a[i * n + j] += aik * other.a[k * n + j];
                }
            }
        }
        c
    }

    pub fn transpose(&self) -> DenseMat {
        let n = self.n;
        let mut t = DenseMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.a[j * n + i] = self.a[i * n + j];
            }
        }
        t
    }

    pub fn cholesky_lower(&self) -> Result<DenseMat> {
        let n = self.n;
        let mut l = DenseMat::zeros(n);
        for j in 0..n {
            let mut d = self.a[j * n + j];
            for k in 0..j {
                d -= l.a[j * n + k] * l.a[j * n + k];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { row: j });
            }
            let dj = fp::sqrt(d);
            l.a[j * n + j] = dj;
            for i in j + 1..n {
                let mut s = self.a[i * n + j];
                for k in 0..j {
                    s -= l.a[i * n + k] * l.a[j * n + k];
                }
                l.a[i * n + j] = s / dj;
            }
        }
        Ok(l)
    }

    /// Solves `L x = b` in place for lower-triangular `self`.
    fn forward_solve(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.a[i * n + k] * b[k];
            }
            b[i] = s / self.a[i * n + i];
        }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form; returns
/// `(diag, off)` with `off.len() == n - 1`. Only the lower triangle of the
/// input is referenced.
pub fn tridiagonalize(m: &DenseMat) -> (Vec<f64>, Vec<f64>) {
    let n = m.n;
    let mut a = m.a.clone();
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i;
        if l > 1 {
            let mut scale = 0.0;
            for k in 0..l {
                scale += fp::abs(a[i * n + k]);
            }
            if scale == 0.0 {
                e[i] = a[i * n + l - 1];
                continue;
            }
            let mut h = 0.0;
            for k in 0..l {
                a[i * n + k] /= scale;
                h += a[i * n + k] * a[i * n + k];
            }
            let f = a[i * n + l - 1];
            let g = if f >= 0.0 { -fp::sqrt(h) } else { fp::sqrt(h) };
            e[i] = scale * g;
            h -= f * g;
            a[i * n + l - 1] = f - g;
            let mut fsum = 0.0;
            for j in 0..l {
                let mut g = 0.0;
                for k in 0..=j {
                    g += a[j * n + k] * a[i * n + k];
                }
                for k in j + 1..l {
                    g += a[k * n + j] * a[i * n + k];
                }
                e[j] = g / h;
                fsum += e[j] * a[i * n + j];
            }
            let hh = fsum / (h + h);
            for j in 0..l {
                let f = a[i * n + j];
                let g = e[j] - hh * f;
                e[j] = g;
                for k in 0..=j {
                    a[j * n + k] -= f * e[k] + g * a[i * n + k];
                }
            }
        } else {
            e[i] = a[i * n];
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let off: Vec<f64> = (1..n).map(|i| e[i]).collect();
    (diag, off)
}

/// Sturm count: number of eigenvalues of the tridiagonal `(d, e)` below `x`.
fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let sub = if i > 0 { e[i - 1] * e[i - 1] / q } else { 0.0 };
        q = d[i] - x - sub;
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest `x` in `[lo, hi]` with at least `k` eigenvalues below it.
fn bisect_kth(d: &[f64], e: &[f64], mut lo: f64, mut hi: f64, k: usize) -> f64 {
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if count_below(d, e, mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * fp::max(fp::abs(lo), fp::abs(hi)) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Extreme eigenvalues `(min, max)` of a symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e.len() == d.len() - 1`), by Sturm
/// bisection inside the Gershgorin bracket.
pub fn tridiag_extreme_eigs(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    assert!(n > 0);
    assert_eq!(e.len(), n - 1);
    if n == 1 {
        return (d[0], d[0]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { fp::abs(e[i - 1]) } else { 0.0 }
            + if i + 1 < n { fp::abs(e[i]) } else { 0.0 };
        lo = fp::min(lo, d[i] - r);
        hi = fp::max(hi, d[i] + r);
    }
    let pad = 1e-12 * (1.0 + fp::abs(lo) + fp::abs(hi));
    lo -= pad;
    hi += pad;
    (bisect_kth(d, e, lo, hi, 1), bisect_kth(d, e, lo, hi, n))
}

/// Extreme eigenvalues `(min, max)` of `A` or, with a mass matrix, of the
/// pencil `A x = lambda B x` (reduced through the Cholesky factor of `B`).
pub fn dense_spectrum(a: &DenseMat, b: Option<&DenseMat>) -> Result<(f64, f64)> {
    let c = match b {
        None => a.clone(),
        Some(b) => {
            let lmat = b.cholesky_lower()?;
            let n = a.n;
            // W = L^-1 A, column by column.
            let mut w = DenseMat::zeros(n);
            let mut col = vec![0.0; n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = a.a[i * n + j];
                }
                lmat.forward_solve(&mut col);
                for i in 0..n {
                    w.a[i * n + j] = col[i];
                }
            }
            // C = W L^-T computed as (L^-1 W^T)^T.
            let wt = w.transpose();
            let mut c = DenseMat::zeros(n);
            for j in 0..n {
                for i in 0..n {
                    col[i] = wt.a[i * n + j];
                }
                lmat.forward_solve(&mut col);
                for i in 0..n {
                    c.a[j * n + i] = col[i];
                }
            }
            c.symmetrized()
        }
    };
    let (d, e) = tridiagonalize(&c);
    Ok(tridiag_extreme_eigs(&d, &e))
}

/// Extreme eigenvalues `(min, max)` of the preconditioned operator `P K`,
/// computed as the spectrum of `L^T K L` with `P = L L^T`. Both operators
/// are materialized densely, so this is a reference path for small systems
/// only.
pub fn preconditioned_spectrum(k: &dyn LinearOp, p: &dyn LinearOp) -> Result<(f64, f64)> {
    if k.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: p.dim() });
    }
    let kd = DenseMat::from_operator(k).symmetrized();
    let pd = DenseMat::from_operator(p).symmetrized();
    let lmat = pd.cholesky_lower()?;
    let s = lmat.transpose().matmul(&kd.matmul(&lmat)).symmetrized();
    let (d, e) = tridiagonalize(&s);
    Ok(tridiag_extreme_eigs(&d, &e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::factor::Factorization;

    struct FactorOp(Factorization);
    impl LinearOp for FactorOp {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn apply_into(&self, x: &[f64], y: &mut [f64]) {
            y.copy_from_slice(&self.0.solve(x));
        }
    }

    #[test]
    fn two_by_two_known_eigenvalues() {
        let mut a = DenseMat::zeros(2);
        a.set(0, 0, 2.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(1, 1, 2.0);
        let (lo, hi) = dense_spectrum(&a, None).unwrap();
        assert!((lo - 1.0).abs() < 1e-12, "lo {lo}");
        assert!((hi - 3.0).abs() < 1e-12, "hi {hi}");
    }

    #[test]
    fn reflector_built_matrix_has_planted_spectrum() {
        // A = Q diag(1,2,5) Q^T with Q = I - 2 v v^T / (v^T v): exactly
        // orthogonal, so the spectrum is exactly {1, 2, 5}.
        let v = [1.0, 2.0, -1.0];
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let lam = [1.0, 2.0, 5.0];
        let mut q = DenseMat::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                q.set(i, j, id - 2.0 * v[i] * v[j] / vv);
            }
        }
        let mut a = DenseMat::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += q.at(i, k) * lam[k] * q.at(j, k);
                }
                a.set(i, j, s);
            }
        }
        let (lo, hi) = dense_spectrum(&a, None).unwrap();
        assert!((lo - 1.0).abs() < 1e-10, "lo {lo}");
        assert!((hi - 5.0).abs() < 1e-10, "hi {hi}");
    }

    #[test]
    fn tridiagonal_laplacian_matches_analytic_extremes() {
        let n = 20;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let (lo, hi) = tridiag_extreme_eigs(&d, &e);
        let theta = core::f64::consts::PI / (n as f64 + 1.0);
        let lo_exact = 2.0 - 2.0 * theta.cos();
        let hi_exact = 2.0 - 2.0 * ((n as f64) * theta).cos();
        assert!((lo - lo_exact).abs() < 1e-10, "lo {lo} vs {lo_exact}");
        assert!((hi - hi_exact).abs() < 1e-10, "hi {hi} vs {hi_exact}");
    }

    #[test]
    fn generalized_with_identity_mass_matches_standard() {
        let s = SparseSym::from_triplets(
            3,
            vec![
                (0, 0, 4.0),
                (1, 1, 3.0),
                (2, 2, 5.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 2, -1.0),
                (2, 1, -1.0),
            ],
        );
        let a = DenseMat::from_sparse(&s);
        let mut id = DenseMat::zeros(3);
        for i in 0..3 {
            id.set(i, i, 1.0);
        }
        let (l1, h1) = dense_spectrum(&a, None).unwrap();
        let (l2, h2) = dense_spectrum(&a, Some(&id)).unwrap();
        assert!((l1 - l2).abs() < 1e-12);
        assert!((h1 - h2).abs() < 1e-12);
    }

    #[test]
    fn generalized_diagonal_pair() {
        let mut a = DenseMat::zeros(2);
        a.set(0, 0, 2.0);
        a.set(1, 1, 8.0);
        let mut b = DenseMat::zeros(2);
        b.set(0, 0, 1.0);
        b.set(1, 1, 2.0);
        let (lo, hi) = dense_spectrum(&a, Some(&b)).unwrap();
        assert!((lo - 2.0).abs() < 1e-12, "lo {lo}");
        assert!((hi - 4.0).abs() < 1e-12, "hi {hi}");
    }

    #[test]
    fn exactly_preconditioned_operator_has_unit_spectrum() {
        let n = 15;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 3.0 + (i as f64) * 0.5));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let k = SparseSym::from_triplets(n, t);
        let p = FactorOp(Factorization::new(&k).unwrap());
        let (lo, hi) = preconditioned_spectrum(&k, &p).unwrap();
        assert!((lo - 1.0).abs() < 1e-9, "lo {lo}");
        assert!((hi - 1.0).abs() < 1e-9, "hi {hi}");
    }
}
