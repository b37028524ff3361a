//! Multi-frontal direct solver for linear systems from structured
//! tensor-product B-spline finite elements.
//!
//! The crate covers the whole pipeline: spline spaces and their cluster
//! hierarchy ([`space`]), basis evaluation and frontal matrix assembly
//! ([`basis`], [`assembly`]), the elimination tree ([`tree`]), the
//! multi-frontal factorization with exact FLOP and factor-memory counters
//! ([`solver`]) and closed-form cost predictors with scaling fits
//! ([`cost`]). The [`cli`] module backs the `mfs` binary.
//!
//! ```
//! use mfs::{build_space, solve, Continuity};
//!
//! let space = build_space(1, 2, Continuity::C0, 2).unwrap();
//! let (solution, cost) = solve(&space).unwrap();
//! assert_eq!(solution.values.len(), 9);
//! assert!(solution.residual_norm < 1e-12);
//! assert!(cost.total_flops > 0);
//! ```

pub mod assembly;
pub mod basis;
pub mod cli;
pub mod cost;
mod dense;
pub mod error;
pub mod solver;
pub mod space;
pub mod sparse;
pub mod tree;

pub use assembly::{build_front, element_matrix, Assembler, ElementMatrix, Front};
pub use basis::{eval_basis_1d, gauss_legendre, BasisEval1d, KnotVector};
pub use cost::{
    compare, fit_scaling, predict_qr, predict_total, schur_cost_model, Comparison, CostRecord,
    Prediction, ScalingFit,
};
pub use error::{Error, Result};
pub use solver::{
    back_substitute, merge, schur_eliminate, solve, solve_with, FactoredFront, Solution,
    SolveOptions,
};
pub use space::{
    build_space, classify_level, dof_support, Cluster, Continuity, DofSupport, MultiIndex,
    SplineSpace,
};
pub use tree::{build_tree, schedule, EliminationTree, NodeId, Schedule};
