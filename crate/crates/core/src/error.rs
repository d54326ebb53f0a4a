use thiserror::Error;

/// Errors raised by geometry, element construction, meshing and solvers.
#[derive(Debug, Error)]
pub enum FemError {
    #[error("coincident points: a line needs two distinct points")]
    CoincidentPoints,

    #[error("edges {0} and {1} are adjacent; a pair line needs nonadjacent edges")]
    AdjacentEdges(usize, usize),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("nonconforming mesh: {0}")]
    NonconformingMesh(String),

    #[error("cell {cell} is inverted (clockwise vertex loop)")]
    InvertedCell { cell: usize },

    #[error("cell {cell} is degenerate: {reason}")]
    DegenerateCell { cell: usize, reason: String },

    #[error("cell {cell}: {source}")]
    Cell {
        cell: usize,
        #[source]
        source: Box<FemError>,
    },

    #[error("empty Voronoi cell for seed {seed}")]
    EmptyVoronoiCell { seed: usize },

    #[error("collapsing short edges breaks convexity of cell {cell}")]
    CollapseBreaksConvexity { cell: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("singular linear system (condition estimate {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("node selection infeasible: {0}")]
    SelectionInfeasible(String),

    #[error("iterative solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("singular factorization at row {row}")]
    SingularFactorization { row: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl FemError {
    pub(crate) fn in_cell(self, cell: usize) -> FemError {
        match self {
            e @ (FemError::Cell { .. }
            | FemError::InvertedCell { .. }
            | FemError::DegenerateCell { .. }) => e,
            e => FemError::Cell {
                cell,
                source: Box::new(e),
            },
        }
    }

    /// True for failures of the numerical algorithms, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            FemError::SingularSystem { .. }
                | FemError::NonConvergence { .. }
                | FemError::SingularFactorization { .. }
        ) || matches!(self, FemError::Cell { source, .. } if source.is_numerical())
    }
}

pub type Result<T> = std::result::Result<T, FemError>;
