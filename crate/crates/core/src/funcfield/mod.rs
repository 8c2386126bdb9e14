//! Sparse multivariate polynomials, rational functions and group actions by
//! substitution over a coefficient field K.

mod action;
pub mod linalg;
mod poly;
mod ratfunc;
mod varset;

use thiserror::Error;

pub use action::GroupAction;
pub use poly::{set_term_cap, term_cap, Mono, MultiPoly, TermJson, DEFAULT_TERM_CAP};
pub use ratfunc::{monomial, RatFunc, RatFuncJson};
pub use varset::VarSet;

use crate::groups::GroupError;
use crate::scalars::ScalarError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuncError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("substitution produced a zero denominator")]
    ZeroDenominator,
    #[error("resource limit: {terms} terms exceed the term cap {cap}")]
    TermCap { terms: usize, cap: usize },
    #[error("operands use different variable sets ({0} vs {1})")]
    MixedVarSets(String, String),
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("action law violated: {0}")]
    ActionLaw(String),
    #[error("singular matrix")]
    Singular,
    #[error("not affine in the designated variables")]
    NotAffine,
    #[error("malformed polynomial data: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl FuncError {
    pub fn is_resource(&self) -> bool {
        matches!(self, FuncError::TermCap { .. })
    }
}
