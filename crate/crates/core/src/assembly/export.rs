use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::linalg::CsrMatrix;
use crate::Real;

/// Coordinate-format Matrix Market text of `a` (1-based indices).
pub fn write_matrix_market<T: Real, W: Write>(a: &CsrMatrix<T>, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v.to_f64_lossy())?;
    }
    Ok(())
}

pub fn export_matrix_market<T: Real>(a: &CsrMatrix<T>, path: &Path) -> Result<()> {
    let f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_matrix_market(a, f)
}
