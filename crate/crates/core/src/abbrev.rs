//! The definitional layer: every abbreviation stands for a core wff built
//! from variables, `Q`, `iota`, nonlogical constants, application and
//! abstraction.
//!
//! Bound variables introduced by an expansion (`y` in `exists1`, `x` in
//! `def`) are chosen with [`fresh_variable`] against every variable
//! occurring in the *expanded* operand, so `expand` is compositional:
//! expanding operands first and then the node gives the same wff.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::subst::fresh_variable;
use crate::syntax::{Abbrev, ConstKind, TypeError, Var, Wff, WffKind};
use crate::types::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbbrevName {
    Equals,
    True,
    False,
    Forall,
    AndConst,
    And,
    ImpliesConst,
    Implies,
    NotConst,
    Not,
    OrConst,
    Or,
    Exists,
    ExistsUnique,
    NotEquals,
    IsDefined,
    IsUndefined,
    QuasiEquals,
    DefiniteDescription,
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbbrevArg {
    Wff(Wff),
    Var(Var),
    Type(Type),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbbrevError {
    #[error("{name:?} expects {expected}")]
    Arity {
        name: AbbrevName,
        expected: &'static str,
    },
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Builds the folded node for `name`. `Equals` has no folded node and
/// yields `Q A B` directly.
pub fn make_abbrev(name: AbbrevName, args: &[AbbrevArg]) -> Result<Wff, AbbrevError> {
    use AbbrevArg as A;
    use AbbrevName as N;
    let arity = |expected| AbbrevError::Arity { name, expected };
    let node = match (name, args) {
        (N::Equals, [A::Wff(a), A::Wff(b)]) => return Ok(Wff::equals(a.clone(), b.clone())?),
        (N::True, []) => Abbrev::True,
        (N::False, []) => Abbrev::False,
        (N::AndConst, []) => Abbrev::AndConst,
        (N::ImpliesConst, []) => Abbrev::ImpliesConst,
        (N::NotConst, []) => Abbrev::NotConst,
        (N::OrConst, []) => Abbrev::OrConst,
        (N::Forall, [A::Var(x), A::Wff(a)]) => Abbrev::Forall(x.clone(), a.clone()),
        (N::Exists, [A::Var(x), A::Wff(a)]) => Abbrev::Exists(x.clone(), a.clone()),
        (N::ExistsUnique, [A::Var(x), A::Wff(a)]) => Abbrev::ExistsUnique(x.clone(), a.clone()),
        (N::DefiniteDescription, [A::Var(x), A::Wff(a)]) => {
            Abbrev::Description(x.clone(), a.clone())
        }
        (N::And, [A::Wff(a), A::Wff(b)]) => Abbrev::And(a.clone(), b.clone()),
        (N::Implies, [A::Wff(a), A::Wff(b)]) => Abbrev::Implies(a.clone(), b.clone()),
        (N::Or, [A::Wff(a), A::Wff(b)]) => Abbrev::Or(a.clone(), b.clone()),
        (N::NotEquals, [A::Wff(a), A::Wff(b)]) => Abbrev::NotEquals(a.clone(), b.clone()),
        (N::QuasiEquals, [A::Wff(a), A::Wff(b)]) => Abbrev::QuasiEquals(a.clone(), b.clone()),
        (N::Not, [A::Wff(a)]) => Abbrev::Not(a.clone()),
        (N::IsDefined, [A::Wff(a)]) => Abbrev::IsDefined(a.clone()),
        (N::IsUndefined, [A::Wff(a)]) => Abbrev::IsUndefined(a.clone()),
        (N::Bottom, [A::Type(t)]) => Abbrev::Bottom(t.clone()),
        (N::Equals | N::And | N::Implies | N::Or | N::NotEquals | N::QuasiEquals, _) => {
            return Err(arity("two wffs"))
        }
        (N::Forall | N::Exists | N::ExistsUnique | N::DefiniteDescription, _) => {
            return Err(arity("a variable and a wff"))
        }
        (N::Not | N::IsDefined | N::IsUndefined, _) => return Err(arity("one wff")),
        (N::Bottom, _) => return Err(arity("one type")),
        _ => return Err(arity("no arguments")),
    };
    Ok(Wff::abbr(node)?)
}

/// Core constructors. Arguments must already be core wffs of the right
/// types; results are core.
pub mod build {
    use super::*;

    fn o() -> Type {
        Type::Bool
    }

    fn ooo() -> Type {
        Type::fun(Type::fun(Type::Bool, Type::Bool), Type::Bool)
    }

    fn cached(cell: &'static OnceLock<Wff>, f: impl FnOnce() -> Wff) -> Wff {
        cell.get_or_init(f).clone()
    }

    pub fn equals(a: Wff, b: Wff) -> Wff {
        Wff::equals(a, b).expect("equal operand types")
    }

    /// `T`: `[Q_ooo = Q_ooo]`.
    pub fn truth() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || equals(Wff::q(&o()), Wff::q(&o())))
    }

    /// `F`: `[\x_o T] = [\x_o x_o]`.
    pub fn falsity() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || {
            let x = Var::new("x", o());
            equals(
                Wff::abs(x.clone(), truth()),
                Wff::abs(x.clone(), Wff::var(x)),
            )
        })
    }

    /// `forall x A`: `[\y_a T] = [\x A]` with the literal variable `y_a`.
    pub fn forall(x: &Var, a: Wff) -> Wff {
        let y = Var::new("y", x.ty().clone());
        equals(Wff::abs(y, truth()), Wff::abs(x.clone(), a))
    }

    /// `and_ooo`: `\x_o \y_o [[\g_ooo [g T T]] = [\g_ooo [g x y]]]`.
    pub fn and_const() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || {
            let x = Var::new("x", o());
            let y = Var::new("y", o());
            let g = Var::new("g", ooo());
            let gtt = Wff::app2_ok(Wff::var(g.clone()), truth(), truth());
            let gxy = Wff::app2_ok(
                Wff::var(g.clone()),
                Wff::var(x.clone()),
                Wff::var(y.clone()),
            );
            let body = equals(Wff::abs(g.clone(), gtt), Wff::abs(g, gxy));
            Wff::abs(x, Wff::abs(y, body))
        })
    }

    pub fn and(a: Wff, b: Wff) -> Wff {
        Wff::app2_ok(and_const(), a, b)
    }

    /// `implies_ooo`: `\x_o \y_o [x = [x and y]]`.
    pub fn implies_const() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || {
            let x = Var::new("x", o());
            let y = Var::new("y", o());
            let body = equals(
                Wff::var(x.clone()),
                and(Wff::var(x.clone()), Wff::var(y.clone())),
            );
            Wff::abs(x, Wff::abs(y, body))
        })
    }

    pub fn implies(a: Wff, b: Wff) -> Wff {
        Wff::app2_ok(implies_const(), a, b)
    }

    /// `not_oo`: `[Q_ooo F]`.
    pub fn not_const() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || Wff::app_ok(Wff::q(&o()), falsity()))
    }

    pub fn not(a: Wff) -> Wff {
        Wff::app_ok(not_const(), a)
    }

    /// `or_ooo`: `\x_o \y_o ~[[~x] and [~y]]`.
    pub fn or_const() -> Wff {
        static C: OnceLock<Wff> = OnceLock::new();
        cached(&C, || {
            let x = Var::new("x", o());
            let y = Var::new("y", o());
            let body = not(and(not(Wff::var(x.clone())), not(Wff::var(y.clone()))));
            Wff::abs(x, Wff::abs(y, body))
        })
    }

    pub fn or(a: Wff, b: Wff) -> Wff {
        Wff::app2_ok(or_const(), a, b)
    }

    /// `exists x A`: `~[forall x ~A]`.
    pub fn exists(x: &Var, a: Wff) -> Wff {
        not(forall(x, not(a)))
    }

    /// The bound variable used by `exists1 x A`.
    pub fn exists_unique_witness(x: &Var, a: &Wff) -> Var {
        let mut avoid = a.occurring_vars();
        avoid.insert(x.clone());
        fresh_variable(x.ty(), &avoid)
    }

    /// `exists1 x A`: `exists y [[\x A] = Q y]`, `y` not occurring in `A`.
    pub fn exists_unique(x: &Var, a: Wff) -> Wff {
        let y = exists_unique_witness(x, &a);
        let qy = Wff::app_ok(Wff::q(x.ty()), Wff::var(y.clone()));
        exists(&y, equals(Wff::abs(x.clone(), a), qy))
    }

    pub fn not_equals(a: Wff, b: Wff) -> Wff {
        not(equals(a, b))
    }

    /// The bound variable used by `def(A)`.
    pub fn defined_witness(a: &Wff) -> Var {
        fresh_variable(a.ty(), &a.occurring_vars())
    }

    /// `def(A)`: `exists x [x = A]`, `x` not occurring in `A`.
    pub fn defined(a: Wff) -> Wff {
        let x = defined_witness(&a);
        exists(&x, equals(Wff::var(x.clone()), a))
    }

    pub fn undefined(a: Wff) -> Wff {
        not(defined(a))
    }

    /// `A ~= B`: `[def(A) or def(B)] => [A = B]`.
    pub fn quasi_equals(a: Wff, b: Wff) -> Wff {
        implies(or(defined(a.clone()), defined(b.clone())), equals(a, b))
    }

    /// `I x A`: `iota [\x A]`; `x` must not have type `o`.
    pub fn description(x: &Var, a: Wff) -> Result<Wff, TypeError> {
        Ok(Wff::app_ok(Wff::iota(x.ty())?, Wff::abs(x.clone(), a)))
    }

    /// `bot_a`: `I x_a [x_a /= x_a]`.
    pub fn bottom(t: &Type) -> Result<Wff, TypeError> {
        let x = Var::new("x", t.clone());
        description(&x, not_equals(Wff::var(x.clone()), Wff::var(x.clone())))
    }
}

/// Rewrites every folded node to its core wff.
pub fn expand(w: &Wff) -> Wff {
    if w.is_core() {
        return w.clone();
    }
    match w.kind() {
        WffKind::Var(_) | WffKind::Const(_) => w.clone(),
        WffKind::App(f, a) => Wff::app_ok(expand(f), expand(a)),
        WffKind::Abs(x, b) => Wff::abs(x.clone(), expand(b)),
        WffKind::Abbr(ab) => expand_node(ab),
    }
}

fn expand_node(ab: &Abbrev) -> Wff {
    use build as b;
    match ab {
        Abbrev::True => b::truth(),
        Abbrev::False => b::falsity(),
        Abbrev::AndConst => b::and_const(),
        Abbrev::ImpliesConst => b::implies_const(),
        Abbrev::NotConst => b::not_const(),
        Abbrev::OrConst => b::or_const(),
        Abbrev::Forall(x, a) => b::forall(x, expand(a)),
        Abbrev::And(l, r) => b::and(expand(l), expand(r)),
        Abbrev::Implies(l, r) => b::implies(expand(l), expand(r)),
        Abbrev::Not(a) => b::not(expand(a)),
        Abbrev::Or(l, r) => b::or(expand(l), expand(r)),
        Abbrev::Exists(x, a) => b::exists(x, expand(a)),
        Abbrev::ExistsUnique(x, a) => b::exists_unique(x, expand(a)),
        Abbrev::NotEquals(l, r) => b::not_equals(expand(l), expand(r)),
        Abbrev::IsDefined(a) => b::defined(expand(a)),
        Abbrev::IsUndefined(a) => b::undefined(expand(a)),
        Abbrev::QuasiEquals(l, r) => b::quasi_equals(expand(l), expand(r)),
        Abbrev::Description(x, a) => {
            b::description(x, expand(a)).expect("checked when the node was built")
        }
        Abbrev::Bottom(t) => b::bottom(t).expect("checked when the node was built"),
    }
}

/// Structural recognizers over core wffs, the inverse of [`build`].
pub mod view {
    use super::*;

    fn binary<'a>(w: &'a Wff, head: &Wff) -> Option<(&'a Wff, &'a Wff)> {
        let (fa, b) = w.as_app()?;
        let (f, a) = fa.as_app()?;
        (f == head).then_some((a, b))
    }

    pub fn implies(w: &Wff) -> Option<(&Wff, &Wff)> {
        binary(w, &build::implies_const())
    }

    pub fn and(w: &Wff) -> Option<(&Wff, &Wff)> {
        binary(w, &build::and_const())
    }

    pub fn or(w: &Wff) -> Option<(&Wff, &Wff)> {
        binary(w, &build::or_const())
    }

    pub fn not(w: &Wff) -> Option<&Wff> {
        let (f, a) = w.as_app()?;
        (*f == build::not_const()).then_some(a)
    }

    /// `forall x A`, returning `(x, A)`.
    pub fn forall(w: &Wff) -> Option<(&Var, &Wff)> {
        let (l, r) = w.as_equation()?;
        let (y, t) = l.as_abs()?;
        let (x, a) = r.as_abs()?;
        (y.name().base() == "y"
            && y.name().index() == 0
            && y.ty() == x.ty()
            && *t == build::truth())
        .then_some((x, a))
    }

    /// `A ~= B`, returning `(A, B)` when `w` is exactly the canonical
    /// expansion.
    pub fn quasi_equals(w: &Wff) -> Option<(&Wff, &Wff)> {
        let (_, eq) = implies(w)?;
        let (a, b) = eq.as_equation()?;
        (*w == build::quasi_equals(a.clone(), b.clone())).then_some((a, b))
    }

    /// `def(A)`, returning `A` when `w` is exactly the canonical expansion.
    pub fn defined(w: &Wff) -> Option<&Wff> {
        let inner = not(w)?;
        let (x, body) = forall(inner)?;
        let (xv, a) = not(body)?.as_equation()?;
        (xv.as_var() == Some(x) && *w == build::defined(a.clone())).then_some(a)
    }
}

fn is_named(v: &Var, base: &str) -> bool {
    v.name().base() == base && v.name().index() == 0
}

/// Best-effort folding of a core wff for display. A folded node is only
/// produced when re-expanding it gives back exactly the same core wff, so
/// `expand(fold(w)) == w` always holds.
pub fn fold(core: &Wff) -> Wff {
    if core.is_closed() {
        for (k, ab) in [
            (build::truth(), Abbrev::True),
            (build::falsity(), Abbrev::False),
            (build::and_const(), Abbrev::AndConst),
            (build::implies_const(), Abbrev::ImpliesConst),
            (build::not_const(), Abbrev::NotConst),
            (build::or_const(), Abbrev::OrConst),
        ] {
            if *core == k {
                return Wff::abbr_ok(ab);
            }
        }
    }
    let node = match core.kind() {
        WffKind::Var(_) | WffKind::Const(_) => return core.clone(),
        WffKind::App(f, a) => Wff::app_ok(fold(f), fold(a)),
        WffKind::Abs(x, b) => Wff::abs(x.clone(), fold(b)),
        WffKind::Abbr(_) => return core.clone(),
    };
    let mut current = node;
    while let Some(next) = upgrade(&current) {
        if expand(&next) != *core {
            break;
        }
        current = next;
    }
    current
}

/// `A` when `w` displays a negation of `A`.
fn negated(w: &Wff) -> Option<Wff> {
    match w.as_abbr()? {
        Abbrev::Not(a) => Some(a.clone()),
        Abbrev::NotEquals(a, b) => Wff::equals(a.clone(), b.clone()).ok(),
        Abbrev::IsUndefined(a) => Wff::abbr(Abbrev::IsDefined(a.clone())).ok(),
        _ => None,
    }
}

fn upgrade(w: &Wff) -> Option<Wff> {
    let ab = match w.kind() {
        WffKind::App(f, b) => match f.kind() {
            WffKind::Abbr(Abbrev::NotConst) => Abbrev::Not(b.clone()),
            WffKind::App(g, a) => match g.kind() {
                WffKind::Abbr(Abbrev::AndConst) => Abbrev::And(a.clone(), b.clone()),
                WffKind::Abbr(Abbrev::OrConst) => Abbrev::Or(a.clone(), b.clone()),
                WffKind::Abbr(Abbrev::ImpliesConst) => Abbrev::Implies(a.clone(), b.clone()),
                WffKind::Const(c) if c.kind() == ConstKind::Equality => {
                    let (y, t) = a.as_abs()?;
                    let (x, body) = b.as_abs()?;
                    if !is_named(y, "y") || !matches!(t.as_abbr(), Some(Abbrev::True)) {
                        return None;
                    }
                    Abbrev::Forall(x.clone(), body.clone())
                }
                _ => return None,
            },
            WffKind::Const(c) if c.kind() == ConstKind::Selector => {
                let (x, body) = b.as_abs()?;
                Abbrev::Description(x.clone(), body.clone())
            }
            _ => return None,
        },
        WffKind::Abbr(ab) => match ab {
            Abbrev::Not(a) => match a.kind() {
                WffKind::Abbr(Abbrev::Forall(x, body)) => Abbrev::Exists(x.clone(), negated(body)?),
                WffKind::Abbr(Abbrev::IsDefined(inner)) => Abbrev::IsUndefined(inner.clone()),
                _ => {
                    let (l, r) = a.as_equation()?;
                    Abbrev::NotEquals(l.clone(), r.clone())
                }
            },
            Abbrev::Exists(y, body) => {
                let (l, r) = body.as_equation()?;
                if l.as_var() == Some(y) {
                    Abbrev::IsDefined(r.clone())
                } else {
                    let (x, a) = l.as_abs()?;
                    let (_, yv) = r.as_app()?;
                    if yv.as_var() != Some(y) {
                        return None;
                    }
                    Abbrev::ExistsUnique(x.clone(), a.clone())
                }
            }
            Abbrev::Implies(l, r) => {
                let Some(Abbrev::Or(dl, dr)) = l.as_abbr() else {
                    return None;
                };
                let (Some(Abbrev::IsDefined(a)), Some(Abbrev::IsDefined(b))) =
                    (dl.as_abbr(), dr.as_abbr())
                else {
                    return None;
                };
                let (ea, eb) = r.as_equation()?;
                if ea != a || eb != b {
                    return None;
                }
                Abbrev::QuasiEquals(a.clone(), b.clone())
            }
            Abbrev::Description(x, body) => {
                let Some(Abbrev::NotEquals(l, r)) = body.as_abbr() else {
                    return None;
                };
                if !is_named(x, "x") || l.as_var() != Some(x) || r.as_var() != Some(x) {
                    return None;
                }
                Abbrev::Bottom(x.ty().clone())
            }
            _ => return None,
        },
        _ => return None,
    };
    Wff::abbr(ab).ok()
}

/// Variables bound by expansions of folded nodes never escape, so folded
/// and expanded forms have the same free variables.
pub fn same_free_vars(w: &Wff) -> bool {
    let a: BTreeSet<_> = w.free_vars().iter().collect();
    let e = expand(w);
    let b: BTreeSet<_> = e.free_vars().iter().collect();
    a == b
}
