use std::fmt;
use std::sync::Arc;

use crate::syntax::{Var, Wff};

use super::axiom::AxiomInstance;
use super::rules::OccurrencePath;

/// Why a step holds. Step indices are 0-based and refer to earlier steps
/// of the same section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomInstance),
    /// A member of the hypothesis list.
    Hyp(usize),
    /// A step of the theorem section.
    Theorem(usize),
    R1 {
        eq: usize,
        target: usize,
        path: OccurrencePath,
    },
    R2 {
        minor: usize,
        major: usize,
    },
    /// Admissible rules, accepted only in extended mode.
    Derived(Derived),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derived {
    R1Prime {
        eq: usize,
        target: usize,
        path: OccurrencePath,
    },
    R2Prime {
        minor: usize,
        major: usize,
    },
    /// Replace the redex `[\x B] A` at `path` in `target` by `S(x, A, B)`,
    /// given `def(A)`.
    Beta {
        defined: usize,
        target: usize,
        path: OccurrencePath,
    },
    /// From `def(A)` and `forall x B`, infer `S(x, A, B)`.
    UnivInst {
        defined: usize,
        forall: usize,
        term: Wff,
    },
    /// From `P`, infer `forall x P` when `x` is free in no hypothesis.
    UnivGen {
        premise: usize,
        var: Var,
    },
    /// Any wff whose implication from the premises is tautologous.
    Taut {
        premises: Vec<usize>,
    },
    /// From a proof of `P` from `H + {H0}`, infer `H0 => P`.
    Deduction {
        subproof: Arc<Proof>,
        hypothesis: Wff,
    },
}

impl Derived {
    pub fn name(&self) -> &'static str {
        match self {
            Derived::R1Prime { .. } => "R1'",
            Derived::R2Prime { .. } => "R2'",
            Derived::Beta { .. } => "beta",
            Derived::UnivInst { .. } => "uinst",
            Derived::UnivGen { .. } => "ugen",
            Derived::Taut { .. } => "taut",
            Derived::Deduction { .. } => "deduction",
        }
    }

    /// Indices of the premise steps.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Derived::R1Prime { eq, target, .. } => vec![*eq, *target],
            Derived::R2Prime { minor, major } => vec![*minor, *major],
            Derived::Beta {
                defined, target, ..
            } => vec![*defined, *target],
            Derived::UnivInst {
                defined, forall, ..
            } => vec![*defined, *forall],
            Derived::UnivGen { premise, .. } => vec![*premise],
            Derived::Taut { premises } => premises.clone(),
            Derived::Deduction { .. } => vec![],
        }
    }
}

impl Justification {
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::R1 { eq, target, .. } => vec![*eq, *target],
            Justification::R2 { minor, major } => vec![*minor, *major],
            Justification::Derived(d) => d.premises(),
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub wff: Wff,
    pub just: Justification,
}

impl Step {
    pub fn new(wff: Wff, just: Justification) -> Step {
        Step { wff, just }
    }
}

/// A proof of `conclusion` from `hypotheses`: a theorem section (a plain
/// proof, no hypotheses) and a main section ending with the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub theorem_section: Vec<Step>,
    pub main_section: Vec<Step>,
    pub hypotheses: Vec<Wff>,
    pub conclusion: Wff,
}

impl Proof {
    /// A plain proof: no hypotheses, no theorem section.
    pub fn plain(steps: Vec<Step>) -> Proof {
        let conclusion = steps.last().map(|s| s.wff.clone()).expect("nonempty proof");
        Proof {
            theorem_section: Vec::new(),
            main_section: steps,
            hypotheses: Vec::new(),
            conclusion,
        }
    }

    pub fn len(&self) -> usize {
        self.theorem_section.len() + self.main_section.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Theorem,
    Main,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepRef {
    pub section: Section,
    pub index: usize,
}

impl StepRef {
    pub fn main(index: usize) -> StepRef {
        StepRef {
            section: Section::Main,
            index,
        }
    }

    pub fn theorem(index: usize) -> StepRef {
        StepRef {
            section: Section::Theorem,
            index,
        }
    }
}

impl fmt::Display for StepRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.section {
            Section::Theorem => write!(f, "theorem step {}", self.index + 1),
            Section::Main => write!(f, "step {}", self.index + 1),
        }
    }
}
