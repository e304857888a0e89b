//! Finite standard models: frames with partial function spaces, the
//! valuation function, validity, and the tautology oracle.
//!
//! `D_o` is `{T, F}`; `D_(ab)` holds every total function when `a = o` and
//! every partial or total function otherwise. `Q` denotes identity and
//! `iota` the unique member selector.

mod eval;
mod frame;
mod taut;
mod validity;

use thiserror::Error;

use crate::syntax::{Const, Var};
use crate::types::Type;

pub use eval::{build_model, valuate, Assignment, Evaluator, Model};
pub use frame::{default_labels, Frame, PartialValue, Value, DEFAULT_CAP};
pub use taut::{tautologous, Prop, Skeleton, MAX_ATOMS};
pub use validity::{
    counter_model_over, counterexample, counterexample_with, entailment_counterexample,
    find_assignment, is_valid_in_model, sweep_validity, sweep_validity_with, CounterModel,
    Interpretations, SweepOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("the set of individuals is empty")]
    EmptyBase,
    #[error("duplicate individual {0:?}")]
    DuplicateLabel(String),
    #[error("domain of type {ty} has {cardinality} elements, over the cap of {cap}")]
    CapExceeded {
        ty: Type,
        cardinality: u128,
        cap: usize,
    },
    #[error("value for {0} is not in the domain of its type")]
    OutsideDomain(Const),
    #[error("{0} is a logical constant and cannot be interpreted")]
    LogicalConstant(Const),
    #[error("no value for constant {0}")]
    Uninterpreted(Const),
    #[error("no value for variable {0}")]
    UnboundVariable(Var),
    #[error("wff contains folded abbreviations; expand it first")]
    NotCore,
    #[error("expected a wff of type o, found type {0}")]
    NotBoolean(Type),
    #[error("too many assignments to enumerate")]
    SearchSpace,
}
