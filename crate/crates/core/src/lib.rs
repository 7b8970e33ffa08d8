//! Exact determinant bounds and extremal constructions for sparse and
//! structured 0/1 matrices, together with an exact leaf-rank solver for
//! small graphs.

pub mod constructions;
pub mod cop;
pub mod graph;
pub mod io;
pub mod leafrank;
pub mod linalg;
pub mod path;
pub mod search;
pub mod verify;

pub use linalg::{BoundValue, ExactMatrix};
