//! Propositional skeletons and truth tables.

use crate::abbrev::{build as b, expand, fold, view};
use crate::syntax::Wff;

/// Truth tables wider than this are not attempted.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop {
    Atom(usize),
    Const(bool),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, row: u64) -> bool {
        match self {
            Prop::Atom(i) => row >> i & 1 == 1,
            Prop::Const(b) => *b,
            Prop::Not(a) => !a.eval(row),
            Prop::And(a, b) => a.eval(row) && b.eval(row),
            Prop::Or(a, b) => a.eval(row) || b.eval(row),
            Prop::Implies(a, b) => !a.eval(row) || b.eval(row),
            Prop::Iff(a, b) => a.eval(row) == b.eval(row),
        }
    }
}

/// The connective structure of a wff of type `o`. Atoms are the maximal
/// subwffs of the core form not headed by a connective; they are kept in
/// folded form for display.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub atoms: Vec<Wff>,
    pub formula: Prop,
    /// An equation between wffs of type `o` was read as equivalence.
    pub uses_equivalence: bool,
}

impl Skeleton {
    pub fn of(w: &Wff) -> Skeleton {
        let mut s = Skeleton {
            atoms: Vec::new(),
            formula: Prop::Const(true),
            uses_equivalence: false,
        };
        let mut cores = Vec::new();
        // work on the core form so every spelling of a connective is seen;
        // def, exists, /= and friends are connective-headed underneath
        let (t, f) = (b::truth(), b::falsity());
        s.formula = s.build(&expand(w), &t, &f, &mut cores);
        s
    }

    fn build(&mut self, w: &Wff, t: &Wff, f: &Wff, cores: &mut Vec<Wff>) -> Prop {
        let bx = |p| Box::new(p);
        if w == t {
            return Prop::Const(true);
        }
        if w == f {
            return Prop::Const(false);
        }
        if let Some(a) = view::not(w) {
            return Prop::Not(bx(self.build(a, t, f, cores)));
        }
        type View = fn(&Wff) -> Option<(&Wff, &Wff)>;
        type Ctor = fn(Box<Prop>, Box<Prop>) -> Prop;
        let binaries: [(View, Ctor); 3] = [
            (view::and, Prop::And),
            (view::or, Prop::Or),
            (view::implies, Prop::Implies),
        ];
        for (view, ctor) in binaries {
            if let Some((a, c)) = view(w) {
                return ctor(
                    bx(self.build(a, t, f, cores)),
                    bx(self.build(c, t, f, cores)),
                );
            }
        }
        if let Some((l, r)) = w.as_equation() {
            if l.ty().is_bool() {
                self.uses_equivalence = true;
                return Prop::Iff(
                    bx(self.build(l, t, f, cores)),
                    bx(self.build(r, t, f, cores)),
                );
            }
        }
        let i = match cores.iter().position(|c| c == w) {
            Some(i) => i,
            None => {
                cores.push(w.clone());
                self.atoms.push(fold(w));
                cores.len() - 1
            }
        };
        Prop::Atom(i)
    }

    /// `None` when there are too many atoms to tabulate.
    pub fn is_tautology(&self) -> Option<bool> {
        if self.atoms.len() > MAX_ATOMS {
            return None;
        }
        Some((0..1u64 << self.atoms.len()).all(|row| self.formula.eval(row)))
    }
}

/// True iff every truth assignment to the skeleton's atoms makes `w`
/// true. Accepts folded or core wffs of type `o`.
pub fn tautologous(w: &Wff) -> bool {
    w.ty().is_bool() && Skeleton::of(w).is_tautology() == Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_wff, Signature};
    use crate::types::Type;

    fn w(s: &str) -> Wff {
        let sig = Signature::new().with("p", Type::pred(Type::Ind)).unwrap();
        parse_wff(s, &sig).unwrap()
    }

    #[test]
    fn examples() {
        assert!(tautologous(&w("x_o \\/ ~x_o")));
        assert!(!tautologous(&w("x_o")));
        assert!(tautologous(&w("T")));
        assert!(!tautologous(&w("F")));
        assert!(tautologous(&w("[x_o = y_o] => [y_o = x_o]")));
        assert!(tautologous(&w("[x_o /\\ y_o] => [x_o /\\ y_o]")));
    }

    #[test]
    fn atoms_are_maximal_and_shared() {
        let s = Skeleton::of(&w("p x_i \\/ ~[p x_i]"));
        assert_eq!(s.atoms.len(), 1);
        assert_eq!(s.is_tautology(), Some(true));
        assert!(!s.uses_equivalence);
        // quantifier bodies are opaque
        assert!(!tautologous(&w("forall x_o. x_o \\/ ~x_o")));
        assert!(!tautologous(&w("def(x_o)")));
        assert!(tautologous(&w("def(x_o) \\/ undef(x_o)")));
        assert!(tautologous(&w("[exists x_i. p x] = ~forall x_i. ~[p x]")));
    }

    #[test]
    fn core_input_is_folded() {
        assert!(tautologous(&expand(&w("[x_o => y_o] \\/ [y_o => x_o]"))));
        assert!(Skeleton::of(&w("x_o /= y_o \\/ T")).uses_equivalence);
    }

    #[test]
    fn disequation_negates_its_equation() {
        assert!(tautologous(&w("x_i = y_i \\/ ~[x_i = y_i]")));
        assert!(tautologous(&w("x_i /= y_i => ~[x_i = y_i]")));
        assert!(!Skeleton::of(&w("x_i /= y_i")).uses_equivalence);
    }
}
