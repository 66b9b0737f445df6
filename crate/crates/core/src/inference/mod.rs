//! Event algebra and exact conditioning over joint distributions.
//!
//! Events are evaluated extensionally: an [`EventExpr`] picks out cells of
//! the outcome table and a probability is the sum of those cells. Every
//! conditional, including each factor of a chain-rule expansion, is a
//! ratio of such sums over the full joint table.

mod event;
mod ops;
mod pitfall;

pub use event::{Atom, Descriptor, EventExpr};
pub use ops::{
    chain_factorize, conditional, conditional_name, odds_update, probability, recondition,
    FactorizationStep, OddsReport, Reconditioning,
};
pub use pitfall::{
    build_pitfall_table, check_symmetry, CellDefect, MarginalViolation, PitfallTable,
    SymmetryReport,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("conditioning on `{0}`, which has probability zero")]
    ZeroProbability(String),
    #[error("atom `{atom}` refers to names, which regime {regime} does not model")]
    NotModeled { atom: String, regime: String },
    #[error(transparent)]
    Arithmetic(#[from] crate::ratfunc::RatFuncError),
}
