//! Global assembly and solution of the Poisson problem in primal and mixed form.

pub mod dofmap;
pub mod errors;
pub mod exact;
pub mod export;
pub mod mixed;
pub mod primal;
pub mod solve;

pub use dofmap::{mixed_dofmap, primal_dofmap, MixedDofMap, PrimalDofMap};
pub use errors::{
    convergence_rates, mixed_errors, primal_errors, write_cell_errors, write_cell_errors_csv,
    MixedErrors, PrimalErrors,
};
pub use exact::ExactSolution;
pub use export::{export_matrix_market, write_matrix_market};
pub use mixed::{assemble_mixed, mixed_quad_degree, solve_mixed, MixedAssembly, MixedSolution};
pub use primal::{
    assemble_primal, primal_quad_degree, MIN_QUAD_DEGREE, solve_primal, Field, PrimalAssembly, PrimalSolution,
};
pub use solve::{solve, SolveMethod, SolveReport, SolverOptions, SparseSystem, SystemKind};
