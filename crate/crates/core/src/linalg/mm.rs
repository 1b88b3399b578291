//! MatrixMarket coordinate export for offline debugging of assembled systems.

use crate::fem::CsrMatrix;
use std::io::{self, Write};

pub fn write_matrix_market(a: &CsrMatrix, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}
