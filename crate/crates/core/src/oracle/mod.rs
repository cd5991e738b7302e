//! Brute-force reference computations on explicitly written-out modules.
//!
//! Everything here is exponential or dense on purpose of being obviously
//! correct, and refuses inputs beyond fixed budgets.

mod grid;
mod hom;
pub mod linalg;

use thiserror::Error;

pub use grid::{module_from_graphcode, module_from_presentation, DimensionFunction, GridModule, RankInvariant};
pub use hom::{are_isomorphic, hom_space, is_interval_decomposable_bruteforce, Morphism};

/// Largest grid on which modules are written out.
pub const MAX_GRID_POINTS: usize = 1 << 16;
/// Largest sum of pointwise dimensions of a written-out module.
pub const MAX_TOTAL_DIMENSION: usize = 4096;
/// Largest number of point pairs for the rank invariant.
pub const MAX_RANK_PAIRS: usize = 1 << 24;
/// Largest number of unknowns in the commuting-square system.
pub const MAX_HOM_UNKNOWNS: usize = 4096;
/// Largest hom space enumerated by the isomorphism test.
pub const MAX_HOM_DIMENSION: usize = 20;
/// Largest endomorphism space enumerated when searching for idempotents.
pub const MAX_END_DIMENSION: usize = 16;
/// Largest total dimension accepted by the exhaustive decomposition.
pub const MAX_SPLIT_DIMENSION: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} is {actual}, above the limit of {limit}")]
    BudgetExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("grids differ: {left:?} vs {right:?}")]
    ExtentMismatch { left: (u32, u32), right: (u32, u32) },
}
