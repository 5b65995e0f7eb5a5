//! Stable models of ground normal logic programs through their extended
//! dependency graph (EDG).
//!
//! The pipeline is: [`parse_program`], reduce to a kernel program with
//! [`to_kernel`], build the EDG with [`build_edg`], then either search for
//! admissible colorings ([`solve_colorings`]) or combine local models of
//! completed cycles ([`solve_by_decomposition`]). Kernel models are lifted
//! back with [`reconstruct_model`]. The [`oracle`] module is the reference
//! semantics everything is tested against.

pub mod analysis;
pub mod coloring;
pub mod graph;
pub mod kernel;
pub mod oracle;
pub mod parser;
pub mod program;

pub use analysis::{
    check_necessary_condition, decompose, is_call_consistent, is_stratified, solve_by_decomposition, DecomposeError,
    DecomposeOptions, ExistenceStatus, ExistenceVerdict,
};
pub use coloring::{
    coloring_to_interpretation, interpretation_to_coloring, is_admissible, propagate, solve_colorings, Color,
    Coloring, ColoringError, Heuristic, SolveOptions,
};
pub use graph::{build_dg, build_edg, enumerate_cycles, to_dot, CycleError, Dg, DotOptions, Edg};
pub use kernel::{reconstruct_model, to_kernel, KernelError, KernelOptions, KernelProgram, TransformLog};
pub use oracle::{enumerate_stable_brute, is_stable, OracleError};
pub use parser::{parse_program, SyntaxError};
pub use program::{sort_models, AtomId, Interpretation, Program};

use thiserror::Error;

/// Any failure of the library entry points.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Cycles(#[from] CycleError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl Error {
    /// Resource caps, as opposed to malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Kernel(KernelError::UnfoldBudgetExceeded { .. })
                | Error::Cycles(_)
                | Error::Decompose(DecomposeError::Cycles(_) | DecomposeError::DecompositionBudgetExceeded { .. } | DecomposeError::Local(_))
                | Error::Oracle(_)
        )
    }
}
