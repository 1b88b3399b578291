//! Compressed sparse row matrices with reusable patterns.
//!
//! Assembly builds a pattern once from triplets (explicit zeros are kept),
//! then Newton iterations refill the values in place.

use super::FemError;

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets, summing duplicates.
    /// Entries with value 0 are kept to fix the sparsity pattern.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &mut Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in triplets.iter() {
            debug_assert!(i < nrows && j < ncols);
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { nrows, ncols, row_ptr, col_idx, vals }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.vals
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.vals[r])
    }

    pub fn row_mut(&mut self, i: usize) -> (&[usize], &mut [f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &mut self.vals[r])
    }

    /// Zeroes all stored values, keeping the pattern.
    pub fn fill_zero(&mut self) {
        self.vals.fill(0.0);
    }

    fn pos(&self, i: usize, j: usize) -> Option<usize> {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].binary_search(&j).ok().map(|k| r.start + k)
    }

    /// Stored value at (i, j), or 0 when outside the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pos(i, j).map_or(0.0, |p| self.vals[p])
    }

    /// Adds into an entry that must exist in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) -> Result<(), FemError> {
        match self.pos(i, j) {
            Some(p) => {
                self.vals[p] += v;
                Ok(())
            }
            None => Err(FemError::MissingEntry { row: i, col: j }),
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for i in 0..self.nrows {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.col_idx[k]];
            }
            y[i] = s;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec(x, &mut y);
        y
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                triplets.push((self.col_idx[k], i, self.vals[k]));
            }
        }
        CsrMatrix::from_triplets(self.ncols, self.nrows, &mut triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[i][self.col_idx[k]] = self.vals[k];
            }
        }
        d
    }

    /// Max absolute entrywise difference; patterns need not match.
    pub fn max_abs_diff(&self, other: &CsrMatrix) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = 0.0f64;
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m = m.max((self.vals[k] - other.get(i, self.col_idx[k])).abs());
            }
            let (cols, vals) = other.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if self.pos(i, j).is_none() {
                    m = m.max(v.abs());
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triplets_merge_duplicates() {
        let mut t = vec![(0, 1, 1.0), (1, 0, 2.0), (0, 1, 0.5), (0, 0, 0.0)];
        let m = CsrMatrix::from_triplets(2, 2, &mut t);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 1), 1.5);
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(1, 1), 0.0); // absent
    }

    #[test]
    fn matvec_matches_dense() {
        let mut t = vec![(0, 0, 2.0), (0, 2, -1.0), (1, 1, 3.0), (2, 0, 1.0), (2, 2, 4.0)];
        let m = CsrMatrix::from_triplets(3, 3, &mut t);
        let y = m.matvec_alloc(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![-1.0, 6.0, 13.0]);
    }

    proptest! {
        /// Transposing twice restores the matrix exactly.
        #[test]
        fn transpose_involution(entries in proptest::collection::vec((0usize..8, 0usize..6, -5.0f64..5.0), 1..40)) {
            let mut t = entries.clone();
            let m = CsrMatrix::from_triplets(8, 6, &mut t);
            let mtt = m.transpose().transpose();
            prop_assert!(m.max_abs_diff(&mtt) == 0.0);
        }
    }
}
