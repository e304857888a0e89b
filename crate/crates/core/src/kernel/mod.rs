//! The proof kernel: axiom instances, the two primitive rules, proof
//! checking (plain and from hypotheses), proof-emitting tactics and the
//! trusted derived rules of extended mode.
//!
//! Every judgement is made on core wffs. Justifications carry explicit
//! parameters; the checker recomputes each step and demands structural
//! identity with the claimed wff.

mod axiom;
mod check;
mod proof;
mod rules;
mod tactics;

pub use axiom::{instantiate, instantiate_axiom, AxiomInstance, Schema};
pub use check::{check_proof, KernelConfig, Mode, Mutation, TrustedStep, Verdict};
pub use proof::{Derived, Justification, Proof, Section, Step, StepRef};
pub use rules::{
    apply_beta, apply_r1, apply_r2, check_binders, Dir, HypothesisContext, OccurrencePath,
};
pub use tactics::{tactic_lemma1, tactic_odefined};

use thiserror::Error;

use crate::abbrev::fold;
use crate::syntax::{print_wff, Var, Wff};
use crate::types::Type;

fn show(w: &Wff) -> String {
    print_wff(&fold(w))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{schema}: parameter {what} must have {expected}, found type {found}")]
    ParameterType {
        schema: Schema,
        what: &'static str,
        expected: String,
        found: Type,
    },
    #[error("{0}: the type parameter may not be o")]
    BoolForbidden(Schema),
    #[error("{schema}: {} is not free for {var} in {}", show(.term), show(.body))]
    NotFreeFor {
        schema: Schema,
        term: Wff,
        var: Var,
        body: Wff,
    },
    #[error("{} is not a primitive constant", show(.0))]
    NotPrimitive(Wff),

    #[error("path {0} does not resolve")]
    BadPath(OccurrencePath),
    #[error("at {path}: expected {}, found {}", show(.expected), show(.found))]
    OccurrenceMismatch {
        path: OccurrencePath,
        expected: Wff,
        found: Wff,
    },
    #[error("{} is not a quasi-equation", show(.0))]
    NotQuasiEquality(Wff),
    #[error("{} does not have type o", show(.0))]
    NotBoolean(Wff),
    #[error("{} is not an implication", show(.0))]
    NotImplication(Wff),
    #[error("antecedent {} does not match minor premise {}", show(.antecedent), show(.minor))]
    AntecedentMismatch { antecedent: Wff, minor: Wff },
    #[error("{} is not a definedness assertion", show(.0))]
    NotDefinedness(Wff),
    #[error("{} is not a beta-redex", show(.0))]
    NotRedex(Wff),
    #[error("occurrence lies under a binder of {binder}, which is free in hypothesis {} and in the equation", .hypothesis + 1)]
    BinderRestriction { binder: Var, hypothesis: usize },

    #[error("premise {} is not an earlier step", .0 + 1)]
    ForwardReference(usize),
    #[error("hypotheses may not be used in the theorem section")]
    HypothesisInTheoremSection,
    #[error("theorem imports may not be used in the theorem section")]
    NestedTheoremImport,
    #[error("no hypothesis {}", .0 + 1)]
    NoSuchHypothesis(usize),
    #[error("no theorem step {}", .0 + 1)]
    NoSuchTheorem(usize),
    #[error("extended-mode rule in kernel mode")]
    ExtendedInKernelMode,
    #[error("justification yields {}, but the step claims {}", show(.expected), show(.found))]
    StepMismatch { expected: Wff, found: Wff },
    #[error("conclusion {} differs from the last step {}", show(.conclusion), show(.last))]
    ConclusionMismatch { conclusion: Wff, last: Wff },
    #[error("the main section is empty")]
    EmptyProof,
    #[error("premise should be {}, found {}", show(.expected), show(.found))]
    PremiseMismatch { expected: Wff, found: Wff },
    #[error("{} is not a universal statement", show(.0))]
    NotUniversal(Wff),
    #[error("{var} is free in hypothesis {}", .hypothesis + 1)]
    FreeInHypothesis { var: Var, hypothesis: usize },
    #[error("not tautologous")]
    NotTautologous,
    #[error("propositional skeleton has {0} atoms, too many to check")]
    TooManyAtoms(usize),
    #[error("sub-proof hypotheses must be the current hypotheses plus the discharged one")]
    DeductionHypotheses,
    #[error("sub-proof rejected: {0}")]
    SubproofRejected(String),
    #[error("{} does not have type o", show(.0))]
    TacticPrecondition(Wff),
}
