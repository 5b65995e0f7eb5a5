//! Dependency graphs of a program: the atom-level [`Dg`] and the rule-level
//! extended dependency graph [`Edg`], cycle enumeration over negative edges,
//! and DOT rendering.

mod cycles;
mod dg;
mod dot;
mod edg;

pub use cycles::{enumerate_cycles, find_handles, CycleError, CycleInfo, Handle, HandleKind, Parity, DEFAULT_CYCLE_CAP};
pub use dg::{build_dg, Dg};
pub use dot::{to_dot, DotGraph, DotOptions};
pub use edg::{build_edg, Edg, Edge, Vertex, VertexId};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        }
    }
}
