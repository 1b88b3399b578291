//! Incomplete LU factorization with zero fill-in, used to precondition GMRES.

use super::SolverError;
use crate::fem::CsrMatrix;

/// ILU(0): L and U share the sparsity pattern of A. Stored as a single CSR
/// copy where entries left of the diagonal belong to L (unit diagonal) and
/// the rest to U.
pub struct Ilu0 {
    factors: CsrMatrix,
    diag_pos: Vec<usize>,
}

pub fn ilu0(a: &CsrMatrix) -> Result<Ilu0, SolverError> {
    let n = a.nrows();
    let mut f = a.clone();
    let mut diag_pos = vec![usize::MAX; n];
    for i in 0..n {
        let start = f.row_ptr()[i];
        let end = f.row_ptr()[i + 1];
        for k in start..end {
            if f.col_idx()[k] == i {
                diag_pos[i] = k;
            }
        }
        if diag_pos[i] == usize::MAX {
            return Err(SolverError::Singular { index: i });
        }
    }
    for i in 0..n {
        let row_start = f.row_ptr()[i];
        let row_end = f.row_ptr()[i + 1];
        for kk in row_start..row_end {
            let k = f.col_idx()[kk];
            if k >= i {
                break;
            }
            let pivot = f.values()[diag_pos[k]];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(SolverError::Singular { index: k });
            }
            let factor = f.values()[kk] / pivot;
            f.values_mut()[kk] = factor;
            // Subtract factor * U-part of row k from row i, pattern-restricted.
            let (k_start, k_end) = (f.row_ptr()[k], f.row_ptr()[k + 1]);
            let mut pos = kk + 1;
            for kj in k_start..k_end {
                let j = f.col_idx()[kj];
                if j <= k {
                    continue;
                }
                while pos < row_end && f.col_idx()[pos] < j {
                    pos += 1;
                }
                if pos < row_end && f.col_idx()[pos] == j {
                    let update = factor * f.values()[kj];
                    f.values_mut()[pos] -= update;
                }
            }
        }
        if f.values()[diag_pos[i]] == 0.0 {
            return Err(SolverError::Singular { index: i });
        }
    }
    Ok(Ilu0 { factors: f, diag_pos })
}

impl Ilu0 {
    /// Applies the preconditioner: solves L U z = r.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        let n = self.factors.nrows();
        let mut z = r.to_vec();
        // Forward: L z = r (unit diagonal).
        for i in 0..n {
            let (cols, vals) = self.factors.row(i);
            let mut s = z[i];
            for (&j, &v) in cols.iter().zip(vals) {
                if j >= i {
                    break;
                }
                s -= v * z[j];
            }
            z[i] = s;
        }
        // Backward: U z = z.
        for i in (0..n).rev() {
            let (cols, vals) = self.factors.row(i);
            let mut s = z[i];
            for (&j, &v) in cols.iter().zip(vals).rev() {
                if j <= i {
                    break;
                }
                s -= v * z[j];
            }
            z[i] = s / self.factors.values()[self.diag_pos[i]];
        }
        z
    }
}
