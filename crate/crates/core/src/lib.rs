//! Exact probabilistic inference over the sample spaces of two-child
//! families, where each child is described by gender and, optionally, by
//! whether she (or he) carries one particular name of prevalence `r`.

pub mod ratfunc;

pub use ratfunc::{Polynomial, RatFuncError, Rational, RationalFunction};
pub mod samplespace;

pub use samplespace::{
    build_distribution, CellTable, Child, FamilyOutcome, Gender, JointDistribution, NameClass,
    Regime, RegimeKind, Slot,
};
pub mod inference;

pub use inference::{Atom, Descriptor, EventExpr, InferenceError};
pub mod querylang;
pub mod montecarlo;
