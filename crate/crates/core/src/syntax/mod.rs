//! Type symbols, signatures and wffs, with the ASCII surface grammar.
//!
//! Surface tokens: `\x_t. A` (abstraction), juxtaposition or `[A B]` for
//! application, `T`, `F`, `~`, `/\`, `\/`, `=>`, `=`, `/=`, `~=`,
//! `forall x_t. A`, `exists x_t. A`, `exists1 x_t. A`, `I x_t. A`,
//! `def(A)`, `undef(A)`, `bot_t`, `Q_t`, `iota_t`, and the connective
//! constants `(~)`, `(/\)`, `(\/)`, `(=>)`.
//!
//! Precedence, loosest first: binders, `=>` (right associative), `\/`,
//! `/\`, the equalities `=`, `/=`, `~=`, prefix `~`, application.

mod parse;
mod print;
mod wff;

use std::collections::BTreeMap;

use thiserror::Error;

pub use parse::{parse_wff, parse_wff_lenient, ParseError, ParseErrorKind};
pub use print::print_wff;
pub use wff::{
    infer_type, is_variable_base, recheck_type, Abbrev, Const, ConstKind, Name, TypeError, Var,
    Wff, WffKind, VARIABLE_BASES,
};

pub use crate::types::{parse_type, Type, TypeParseError};

/// Names that the surface grammar reserves.
pub const RESERVED: [&str; 11] = [
    "T", "F", "I", "Q", "iota", "bot", "def", "undef", "forall", "exists", "exists1",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("{0:?} belongs to the variable lexicon and cannot name a constant")]
    VariableName(String),
    #[error("{0:?} is reserved")]
    Reserved(String),
    #[error("{0:?} is not an identifier")]
    BadIdentifier(String),
    #[error("constant {name:?} already declared at type {existing}")]
    Redeclared { name: String, existing: Type },
}

/// The nonlogical constants of a theory. `Q` and `iota` are implicit at
/// every admissible type and cannot be declared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<String, Type>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn declare(&mut self, name: &str, ty: Type) -> Result<(), SignatureError> {
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric());
        if !ok {
            return Err(SignatureError::BadIdentifier(name.to_string()));
        }
        if is_variable_base(name) {
            return Err(SignatureError::VariableName(name.to_string()));
        }
        if RESERVED.contains(&name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        match self.consts.get(name) {
            Some(existing) if *existing == ty => Ok(()),
            Some(existing) => Err(SignatureError::Redeclared {
                name: name.to_string(),
                existing: existing.clone(),
            }),
            None => {
                self.consts.insert(name.to_string(), ty);
                Ok(())
            }
        }
    }

    pub fn with(mut self, name: &str, ty: Type) -> Result<Signature, SignatureError> {
        self.declare(name, ty)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.consts.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<Const> {
        self.get(name).map(|t| Const::nonlogical(name, t.clone()))
    }

    pub fn constants(&self) -> impl Iterator<Item = Const> + '_ {
        self.consts
            .iter()
            .map(|(n, t)| Const::nonlogical(n, t.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_rejects_lexicon_and_reserved_names() {
        let mut sig = Signature::new();
        assert!(sig.declare("c", Type::Ind).is_ok());
        assert!(sig.declare("c", Type::Ind).is_ok());
        assert!(matches!(
            sig.declare("c", Type::Bool),
            Err(SignatureError::Redeclared { .. })
        ));
        assert!(matches!(
            sig.declare("x", Type::Ind),
            Err(SignatureError::VariableName(_))
        ));
        assert!(matches!(
            sig.declare("Q", Type::Ind),
            Err(SignatureError::Reserved(_))
        ));
        assert!(matches!(
            sig.declare("a_b", Type::Ind),
            Err(SignatureError::BadIdentifier(_))
        ));
    }
}
