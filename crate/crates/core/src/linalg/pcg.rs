//! Preconditioned conjugate gradients with condition-number harvesting.
//!
//! The recurrence coefficients define a Lanczos tridiagonal matrix whose
//! extreme eigenvalues estimate the extreme eigenvalues of the
//! preconditioned operator, so every solve doubles as a condition-number
//! probe at no extra cost.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;
use crate::linalg::dense::tridiag_extreme_eigs;
use crate::linalg::sparse::LinearOp;

#[derive(Debug, Clone)]
pub struct PcgOptions {
    /// Relative tolerance on the preconditioned residual norm
    /// `|z_k| / |z_0|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Optional near-null-space vector to project out of the iteration
    /// (normalized internally). Used for pure-Neumann systems whose kernel
    /// is the constant vector.
    pub deflate: Option<Vec<f64>>,
}

impl Default for PcgOptions {
    fn default() -> Self {
        PcgOptions { tol: 1e-6, max_iter: 1000, deflate: None }
    }
}

#[derive(Debug, Clone)]
pub struct SolveStats {
    pub iterations: usize,
    /// `|z_k| / |z_0|` after each iteration.
    pub rel_residuals: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Extreme-eigenvalue ratio of the Lanczos tridiagonal; 1.0 when fewer
    /// than two iterations ran.
    pub k2_estimate: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    fp::sqrt(dot(a, a))
}

/// Condition-number estimate from CG coefficients: builds the Lanczos
/// tridiagonal from `alphas` (length k) and `betas` (length k-1) and returns
/// the ratio of its extreme eigenvalues.
pub fn lanczos_condition(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    if k < 2 {
        return 1.0;
    }
    let mut diag = vec![0.0; k];
    let mut off = vec![0.0; k - 1];
    diag[0] = 1.0 / alphas[0];
    for i in 1..k {
        diag[i] = 1.0 / alphas[i] + betas[i - 1] / alphas[i - 1];
        off[i - 1] = fp::sqrt(betas[i - 1]) / alphas[i - 1];
    }
    let (lo, hi) = tridiag_extreme_eigs(&diag, &off);
    hi / lo
}

/// Solves `a * x = b` from the zero initial guess. `m` applies the
/// preconditioner (identity when `None`). Errors with
/// [`Error::Breakdown`] if the operator or preconditioner loses positive
/// definiteness on the Krylov space and [`Error::MaxIterations`] when the
/// tolerance is not reached.
pub fn pcg(
    a: &dyn LinearOp,
    b: &[f64],
    m: Option<&dyn LinearOp>,
    opts: &PcgOptions,
) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    let deflate = opts.deflate.as_ref().map(|v| {
        assert_eq!(v.len(), n, "deflation vector length");
        let nv = norm2(v);
        let mut u = v.clone();
        if nv > 0.0 {
            for x in u.iter_mut() {
                *x /= nv;
            }
        }
        u
    });
    let project = |w: &mut [f64]| {
        if let Some(u) = &deflate {
            let c = dot(u, w);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
    };

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    project(&mut r);
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    let apply_m = |r: &[f64], z: &mut [f64]| match m {
        Some(op) => op.apply_into(r, z),
        None => z.copy_from_slice(r),
    };
    apply_m(&r, &mut z);
    project(&mut z);
    let z0 = norm2(&z);
    let done = |iterations, rel_residuals, alphas: Vec<f64>, betas: Vec<f64>, x| {
        let k2_estimate = lanczos_condition(&alphas, &betas);
        Ok((x, SolveStats { iterations, rel_residuals, alphas, betas, k2_estimate }))
    };
    if z0 == 0.0 {
        return done(0, Vec::new(), Vec::new(), Vec::new(), x);
    }
    let mut rho = dot(&r, &z);
    if !(rho > 0.0) {
        return Err(Error::Breakdown { iteration: 0 });
    }
    let mut p = z.clone();
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut rel_residuals = Vec::new();
    for k in 1..=opts.max_iter {
        a.apply_into(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::Breakdown { iteration: k });
        }
        let alpha = rho / pq;
        alphas.push(alpha);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        project(&mut r);
        apply_m(&r, &mut z);
        project(&mut z);
        let rel = norm2(&z) / z0;
        rel_residuals.push(rel);
        if rel <= opts.tol {
            return done(k, rel_residuals, alphas, betas, x);
        }
        if k == opts.max_iter {
            return Err(Error::MaxIterations { iterations: k, rel_residual: rel });
        }
        let rho_next = dot(&r, &z);
        if !(rho_next > 0.0) {
            return Err(Error::Breakdown { iteration: k });
        }
        let beta = rho_next / rho;
        betas.push(beta);
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        rho = rho_next;
    }
    unreachable!("loop exits by return");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::factor::Factorization;
    use crate::linalg::sparse::SparseSym;

    struct Identity(usize);
    impl LinearOp for Identity {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply_into(&self, x: &[f64], y: &mut [f64]) {
            y.copy_from_slice(x);
        }
    }

    struct FactorOp(Factorization);
    impl LinearOp for FactorOp {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn apply_into(&self, x: &[f64], y: &mut [f64]) {
            y.copy_from_slice(&self.0.solve(x));
        }
    }

    fn diag(vals: &[f64]) -> SparseSym {
        SparseSym::from_triplets(
            vals.len(),
            vals.iter().enumerate().map(|(i, &v)| (i, i, v)).collect(),
        )
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let a = Identity(7);
        let b: Vec<f64> = (0..7).map(|i| (i as f64) - 2.5).collect();
        let (x, stats) = pcg(&a, &b, None, &PcgOptions::default()).unwrap();
        assert_eq!(stats.iterations, 1);
        assert_eq!(stats.k2_estimate, 1.0);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-14);
        }
    }

    #[test]
    fn two_distinct_eigenvalues_converge_in_two_iterations() {
        let a = diag(&[1.0, 1.0, 1e4, 1e4]);
        let b = vec![1.0, 2.0, 3.0, 4.0];
        let opts = PcgOptions { tol: 1e-12, ..Default::default() };
        let (x, stats) = pcg(&a, &b, None, &opts).unwrap();
        assert_eq!(stats.iterations, 2);
        assert!((x[0] - 1.0).abs() < 1e-10);
        assert!((x[2] - 3e-4).abs() < 1e-12);
    }

    #[test]
    fn lanczos_estimate_matches_known_spectrum() {
        let vals: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let a = diag(&vals);
        let b = vec![1.0; 100];
        let opts = PcgOptions { tol: 1e-12, max_iter: 500, ..Default::default() };
        let (_, stats) = pcg(&a, &b, None, &opts).unwrap();
        assert!(
            (stats.k2_estimate - 100.0).abs() / 100.0 < 0.01,
            "k2 {}",
            stats.k2_estimate
        );
    }

    #[test]
    fn exact_preconditioner_converges_in_one_iteration() {
        let vals: Vec<f64> = (1..=30).map(|i| 1.0 + (i as f64) * 0.7).collect();
        let a = diag(&vals);
        let m = FactorOp(Factorization::new(&a).unwrap());
        let b: Vec<f64> = (0..30).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let (x, stats) = pcg(&a, &b, Some(&m), &PcgOptions::default()).unwrap();
        assert_eq!(stats.iterations, 1);
        for i in 0..30 {
            assert!((x[i] - b[i] / vals[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn deflation_solves_singular_laplacian_in_complement() {
        // Path-graph Laplacian: singular with the constant null vector.
        let n = 12;
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i, 1.0));
            t.push((i + 1, i + 1, 1.0));
            t.push((i, i + 1, -1.0));
            t.push((i + 1, i, -1.0));
        }
        let a = SparseSym::from_triplets(n, t);
        let mut b: Vec<f64> = (0..n).map(|i| (i as f64) - 3.0).collect();
        let mean = b.iter().sum::<f64>() / n as f64;
        for v in b.iter_mut() {
            *v -= mean;
        }
        let opts = PcgOptions {
            tol: 1e-12,
            max_iter: 200,
            deflate: Some(vec![1.0; n]),
        };
        let (x, _) = pcg(&a, &b, None, &opts).unwrap();
        let xsum: f64 = x.iter().sum();
        assert!(xsum.abs() < 1e-10, "solution mean {xsum}");
        let r = a.apply(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-9);
        }
    }

    #[test]
    fn max_iterations_reported_with_residual() {
        let vals: Vec<f64> = (1..=50).map(|i| i as f64).collect();
        let a = diag(&vals);
        let b = vec![1.0; 50];
        let opts = PcgOptions { tol: 1e-14, max_iter: 3, ..Default::default() };
        match pcg(&a, &b, None, &opts) {
            Err(Error::MaxIterations { iterations: 3, rel_residual }) => {
                assert!(rel_residual > 0.0)
            }
            other => panic!("expected MaxIterations, got {other:?}"),
        }
    }
}
