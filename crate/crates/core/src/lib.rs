//! Simple type theory with undefinedness: syntax, substitution, the
//! definitional layer, a proof kernel and a finite-model semantics.

pub mod abbrev;
pub mod gen;
pub mod kernel;
pub mod par;
pub mod selfcheck;
pub mod semantics;
pub mod soundness;
pub mod subst;
pub mod syntax;
pub mod types;
