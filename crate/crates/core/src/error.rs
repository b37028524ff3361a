use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spatial dimension must be 1, 2 or 3 (got {0})")]
    InvalidDimension(usize),
    #[error("polynomial degree must be at least 1 (got {0})")]
    InvalidDegree(usize),
    #[error("number of elimination levels must be at least 1 (got {0})")]
    InvalidLevels(usize),
    #[error("space is too large: {0}")]
    TooLarge(String),
    #[error("dof {dof:?} is outside the space ({dofs_per_dim} basis functions per dimension)")]
    DofOutOfRange { dof: Vec<usize>, dofs_per_dim: usize },
    #[error("element {elem:?} is outside the mesh ({elems_per_dim} elements per dimension)")]
    ElementOutOfRange { elem: Vec<usize>, elems_per_dim: usize },
    #[error("level {level} is outside 0..={levels}")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("evaluation point {x} lies outside the knot range [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },
    #[error("pivot breakdown at interior row {row} of a level-{level} front: |pivot| = {pivot:e} < {threshold:e}")]
    PivotBreakdown {
        level: usize,
        row: usize,
        pivot: f64,
        threshold: f64,
    },
    #[error("dof {dof} of a child front is neither interior nor interface of its level-{level} parent")]
    IndexMismatch { level: usize, dof: usize },
    #[error("degenerate scaling fit: {0}")]
    DegenerateFit(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
