//! Lower-bound instance generator: compiles a Multicolored Independent Set
//! instance into a Max Cut instance `(G*, b)` together with a linear
//! multi-expression of `G*` using `2k + 33` labels, where `k` is the order of
//! the set family encoding the parts.

pub mod audit;
pub mod expression;
pub mod gadgets;
pub mod instance;
pub mod mis;
pub mod names;
pub mod params;

pub use audit::{audit_gadgets, AuditItem, AuditReport};
pub use expression::{build_expression, label_budget, ExpressionStyle};
pub use gadgets::{make_f, make_fprime, make_h, make_hif, make_t, Gadget};
pub use instance::{build_instance, GadgetKind, LbInstance, OuterGadget, VertexRole};
pub use mis::MisInstance;
pub use params::ReductionParams;

use thiserror::Error;

use crate::expr::ExprError;
use crate::graph::GraphError;
use crate::label::Label;

/// Default cap on the predicted vertex count of a generated instance.
pub const DEFAULT_MAX_VERTICES: u128 = 5_000_000;

#[derive(Debug, Error)]
pub enum LbError {
    #[error("MIS input line {line}: {reason}")]
    MisFormat { line: usize, reason: String },
    #[error("invalid MIS instance: {0}")]
    InvalidMis(String),
    #[error("parts of size 1 make the instance trivial")]
    TrivialInstance,
    #[error("instance has no edges, so every choice is independent")]
    NoEdges,
    #[error("{parts} parts do not match a set family (k = {k}); pad the instance first")]
    NotPadded { parts: usize, k: usize },
    #[error("C and D overrides must be positive")]
    InvalidOverride,
    #[error("instance would have {predicted} vertices, above the cap of {cap}")]
    InstanceTooLarge { predicted: u128, cap: u128 },
    #[error("expression needs {needed} labels, more than supported")]
    TooManyLabels { needed: Label },
    #[error("{what} has size {size}, above the cap of {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Generator settings shared by the graph and expression builders.
#[derive(Clone, Debug)]
pub struct LbOptions {
    pub c_override: Option<u128>,
    pub d_override: Option<u128>,
    pub max_vertices: u128,
    pub style: ExpressionStyle,
}

impl Default for LbOptions {
    fn default() -> Self {
        LbOptions {
            c_override: None,
            d_override: None,
            max_vertices: DEFAULT_MAX_VERTICES,
            style: ExpressionStyle::Irredundant,
        }
    }
}
