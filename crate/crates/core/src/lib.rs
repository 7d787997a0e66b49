//! Multi-clique-width toolkit: multi-k-expressions, solvers for Hamiltonian
//! Cycle, Edge Dominating Set and Max Cut driven by an expression, a Max Cut
//! lower-bound instance generator, and brute-force oracles.

pub mod eds;
pub mod expr;
pub mod graph;
pub mod hamcycle;
pub mod label;
pub mod lbgen;
pub mod maxcut;

pub use label::{Label, LabelSet};
