//! Exact arithmetic over the rationals, univariate polynomials in `r`, and
//! rational functions of `r`.
//!
//! Every probability in the crate is a [`RationalFunction`]. Nothing here
//! touches floating point; decimal strings are renderings of exact values.

mod func;
mod parse;
mod poly;
mod rational;

pub use func::RationalFunction;
pub use poly::Polynomial;
pub use rational::{parse_rational, round_half_even, to_decimal, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at r = {0}")]
    Pole(String),
    #[error("cannot parse `{input}`: {message} (at byte {offset})")]
    Parse {
        input: String,
        message: String,
        offset: usize,
    },
}
