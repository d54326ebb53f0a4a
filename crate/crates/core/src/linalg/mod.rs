//! Dense and sparse linear algebra used by element construction and the solvers.

mod banded;
mod cg;
mod dense;
mod ordering;
mod sparse;

pub use banded::BandedLu;
pub use cg::{conjugate_gradient, CgReport};
pub use dense::{numerical_rank, DenseMatrix, Lu};
pub use ordering::reverse_cuthill_mckee;
pub use sparse::CsrMatrix;
