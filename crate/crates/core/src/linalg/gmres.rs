//! Restarted GMRES with optional ILU(0) right preconditioning.

use super::ilu::{ilu0, Ilu0};
use super::{lu_solve, relative_residual, LinearSolveReport, SolverError};
use crate::fem::CsrMatrix;

#[derive(Debug, Clone)]
pub struct GmresOptions {
    pub tol: f64,
    pub restart: usize,
    pub max_iters: usize,
    pub use_ilu0: bool,
    /// On breakdown or stagnation, retry with the direct solver.
    pub fallback_to_lu: bool,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-10, restart: 50, max_iters: 2000, use_ilu0: true, fallback_to_lu: false }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Right-preconditioned restarted GMRES. Never returns a silent wrong
/// answer: the report carries the recomputed residual and a converged flag,
/// and non-convergence without fallback is an error.
pub fn gmres_solve(
    a: &CsrMatrix,
    b: &[f64],
    opts: &GmresOptions,
) -> Result<(Vec<f64>, LinearSolveReport), SolverError> {
    if opts.tol <= 0.0 {
        return Err(SolverError::Internal("gmres tolerance must be positive".into()));
    }
    let n = a.nrows();
    if b.len() != n || a.ncols() != n {
        return Err(SolverError::Dimension { nrows: a.nrows(), ncols: a.ncols(), rhs: b.len() });
    }
    let precond: Option<Ilu0> = if opts.use_ilu0 {
        match ilu0(a) {
            Ok(p) => Some(p),
            Err(_) if opts.fallback_to_lu => {
                let (x, mut report) = lu_solve(a, b)?;
                report.method = "gmres+lu-fallback";
                return Ok((x, report));
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let apply_m = |r: &[f64]| -> Vec<f64> {
        match &precond {
            Some(p) => p.apply(r),
            None => r.to_vec(),
        }
    };

    let bnorm = norm2(b).max(f64::MIN_POSITIVE);
    let mut x = vec![0.0; n];
    let mut total_iters = 0usize;
    let mut breakdown = false;

    'outer: while total_iters < opts.max_iters {
        let ax = a.matvec_alloc(&x);
        let r0: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r0);
        if beta / bnorm <= opts.tol {
            break;
        }
        let m = opts.restart;
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        v.push(r0.iter().map(|&val| val / beta).collect());
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut k_used = 0;

        for k in 0..m {
            if total_iters >= opts.max_iters {
                break;
            }
            total_iters += 1;
            let z = apply_m(&v[k]);
            let mut w = a.matvec_alloc(&z);
            if w.iter().any(|val| !val.is_finite()) {
                breakdown = true;
                break 'outer;
            }
            // Modified Gram-Schmidt.
            for i in 0..=k {
                let hik: f64 = w.iter().zip(&v[i]).map(|(a, b)| a * b).sum();
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= hik * vj;
                }
            }
            let hnext = norm2(&w);
            h[k + 1][k] = hnext;
            // Givens rotations to keep the least-squares problem triangular.
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = (h[k][k] * h[k][k] + hnext * hnext).sqrt();
            if denom == 0.0 {
                breakdown = true;
                k_used = k;
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = hnext / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;

            let rel = g[k + 1].abs() / bnorm;
            if hnext <= 1e-14 * beta || rel <= opts.tol {
                break;
            }
            v.push(w.iter().map(|&val| val / hnext).collect());
        }

        // Back-substitute y from the triangular system, x += M^{-1} (V y).
        if k_used == 0 {
            breakdown = true;
            break;
        }
        let mut y = vec![0.0f64; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut dz = vec![0.0f64; n];
        for (j, yj) in y.iter().enumerate() {
            for (d, vj) in dz.iter_mut().zip(&v[j]) {
                *d += yj * vj;
            }
        }
        let dx = apply_m(&dz);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        let rel = g[k_used].abs() / bnorm;
        if rel <= opts.tol {
            break;
        }
    }

    let residual = relative_residual(a, &x, b);
    let converged = residual.is_finite() && residual <= opts.tol;
    if (!converged || breakdown) && opts.fallback_to_lu {
        let (x, mut report) = lu_solve(a, b)?;
        report.method = "gmres+lu-fallback";
        report.iterations = total_iters;
        return Ok((x, report));
    }
    let report = LinearSolveReport {
        method: "gmres",
        factorizations: usize::from(opts.use_ilu0),
        iterations: total_iters,
        residual,
        converged,
        breakdown,
    };
    if !converged {
        return Err(SolverError::DidNotConverge { residual, report });
    }
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::relative_residual;

    fn tridiag_spd(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, &mut t)
    }

    #[test]
    fn spd_tridiagonal_converges_to_tolerance() {
        let a = tridiag_spd(100);
        let b: Vec<f64> = (0..100).map(|i| (0.3 * i as f64).cos()).collect();
        let opts = GmresOptions { tol: 1e-10, ..Default::default() };
        let (x, report) = gmres_solve(&a, &b, &opts).unwrap();
        assert!(report.converged);
        let recomputed = relative_residual(&a, &x, &b);
        assert!(recomputed <= 1e-10, "residual {recomputed:e}");
        assert!((report.residual - recomputed).abs() <= 1e-13);
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let mut t = (0..8).map(|i| (i, i, 1.0)).collect::<Vec<_>>();
        let a = CsrMatrix::from_triplets(8, 8, &mut t);
        let b = vec![1.0; 8];
        let opts = GmresOptions { use_ilu0: false, ..Default::default() };
        let (x, report) = gmres_solve(&a, &b, &opts).unwrap();
        assert_eq!(report.iterations, 1);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_row_never_silently_succeeds() {
        let mut t = vec![(0, 0, 1.0)];
        let a = CsrMatrix::from_triplets(2, 2, &mut t);
        let b = vec![1.0, 1.0];
        let result = gmres_solve(&a, &b, &GmresOptions { use_ilu0: false, max_iters: 50, ..Default::default() });
        match result {
            Err(SolverError::DidNotConverge { report, .. }) => assert!(!report.converged),
            Err(SolverError::Singular { .. }) => {}
            Ok(_) => panic!("singular system reported as solved"),
            Err(other) => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gmres_without_preconditioner_matches_lu() {
        let a = crate::linalg::tests::random_dd_matrix(60, 11);
        let b: Vec<f64> = (0..60).map(|i| (i as f64).sin()).collect();
        let opts = GmresOptions { use_ilu0: false, tol: 1e-12, ..Default::default() };
        let (xg, _) = gmres_solve(&a, &b, &opts).unwrap();
        let (xl, _) = crate::linalg::lu_solve(&a, &b).unwrap();
        for i in 0..60 {
            assert!((xg[i] - xl[i]).abs() < 1e-9);
        }
    }
}
