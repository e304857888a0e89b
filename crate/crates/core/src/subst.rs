//! Free variables, the "free for" side condition, and substitution
//! `S^x_A B`. Capture is an error; nothing is ever renamed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{Abbrev, Var, Wff, WffKind};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("cannot substitute a wff of type {found} for {var}")]
    TypeMismatch { var: Var, found: Type },
    #[error("substituting for {var} would capture {captured} under its binder")]
    Capture { var: Var, captured: Var },
}

pub fn free_vars(w: &Wff) -> BTreeSet<Var> {
    w.free_vars().iter().cloned().collect()
}

fn check_type(a: &Wff, x: &Var) -> Result<(), SubstError> {
    if a.ty() == x.ty() {
        Ok(())
    } else {
        Err(SubstError::TypeMismatch {
            var: x.clone(),
            found: a.ty().clone(),
        })
    }
}

/// The first binder on the way to a free occurrence of `x` in `b` that
/// binds a free variable of `a`.
fn capturing_binder(a: &Wff, x: &Var, b: &Wff) -> Option<Var> {
    if !b.has_free(x) {
        return None;
    }
    let under = |y: &Var, body: &Wff| {
        if a.has_free(y) {
            Some(y.clone())
        } else {
            capturing_binder(a, x, body)
        }
    };
    match b.kind() {
        WffKind::Var(_) | WffKind::Const(_) => None,
        WffKind::App(f, c) => capturing_binder(a, x, f).or_else(|| capturing_binder(a, x, c)),
        // b has x free, so the binder is not x
        WffKind::Abs(y, body) => under(y, body),
        WffKind::Abbr(ab) => match ab.binder() {
            Some(y) => under(y, ab.operands()[0]),
            None => ab
                .operands()
                .into_iter()
                .find_map(|op| capturing_binder(a, x, op)),
        },
    }
}

/// True iff no free occurrence of `x` in `b` lies within the scope of a
/// binder of a variable free in `a`.
pub fn is_free_for(a: &Wff, x: &Var, b: &Wff) -> Result<bool, SubstError> {
    check_type(a, x)?;
    Ok(capturing_binder(a, x, b).is_none())
}

/// `S^x_a b`: replaces every free occurrence of `x` in `b` by `a`.
pub fn substitute(a: &Wff, x: &Var, b: &Wff) -> Result<Wff, SubstError> {
    check_type(a, x)?;
    if let Some(captured) = capturing_binder(a, x, b) {
        return Err(SubstError::Capture {
            var: x.clone(),
            captured,
        });
    }
    Ok(subst_unchecked(a, x, b))
}

pub(crate) fn subst_unchecked(a: &Wff, x: &Var, b: &Wff) -> Wff {
    if !b.has_free(x) {
        return b.clone();
    }
    match b.kind() {
        WffKind::Var(_) => a.clone(),
        WffKind::Const(_) => b.clone(),
        WffKind::App(f, c) => Wff::app_ok(subst_unchecked(a, x, f), subst_unchecked(a, x, c)),
        WffKind::Abs(y, body) => Wff::abs(y.clone(), subst_unchecked(a, x, body)),
        WffKind::Abbr(ab) => {
            let mapped: Result<Abbrev, std::convert::Infallible> =
                ab.map_operands(|op| Ok(subst_unchecked(a, x, op)));
            Wff::abbr_ok(mapped.unwrap_or_else(|e| match e {}))
        }
    }
}

/// Candidate variables of one type in the fixed order
/// `x, y, z, f, g, h, x^1, y^1, ...`.
pub fn variable_enumeration(ty: &Type) -> impl Iterator<Item = Var> + '_ {
    const ORDER: [&str; 6] = ["x", "y", "z", "f", "g", "h"];
    (0u32..).flat_map(move |idx| ORDER.iter().map(move |b| Var::indexed(b, idx, ty.clone())))
}

/// The first variable of type `ty` in the fixed enumeration that is not in
/// `avoid`.
pub fn fresh_variable(ty: &Type, avoid: &BTreeSet<Var>) -> Var {
    variable_enumeration(ty)
        .find(|v| !avoid.contains(v))
        .expect("enumeration is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_wff, Const, Signature};
    use proptest::prelude::*;

    fn i() -> Type {
        Type::Ind
    }
    fn v(n: &str) -> Var {
        Var::new(n, i())
    }
    fn w(n: &str) -> Wff {
        Wff::var(v(n))
    }

    #[test]
    fn free_vars_examples() {
        let x = v("x");
        let f = Var::new("f", Type::pred(i()));
        assert!(free_vars(&Wff::abs(x.clone(), Wff::var(x.clone()))).is_empty());
        let fx = Wff::app(Wff::var(f.clone()), w("x")).unwrap();
        assert_eq!(free_vars(&fx), [f.clone(), x.clone()].into_iter().collect());
        assert_eq!(
            free_vars(&Wff::abs(x, fx)),
            [f].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn free_for_examples() {
        let b = Wff::abs(v("y"), w("x"));
        assert!(!is_free_for(&w("y"), &v("x"), &b).unwrap());
        assert!(is_free_for(&w("z"), &v("x"), &b).unwrap());
        // vacuous when x is not free
        let b = Wff::abs(v("y"), w("z"));
        assert!(is_free_for(&w("y"), &v("x"), &b).unwrap());
        let e = is_free_for(&Wff::var(Var::new("y", Type::Bool)), &v("x"), &b).unwrap_err();
        assert!(matches!(e, SubstError::TypeMismatch { .. }));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&w("y"), &v("x"), &w("x")).unwrap(), w("y"));
        let bound = Wff::abs(v("x"), w("x"));
        assert_eq!(substitute(&w("y"), &v("x"), &bound).unwrap(), bound);
        let c = Wff::constant(Const::nonlogical("c", i()));
        let f = Wff::var(Var::new("f", Type::pred(i())));
        let fx = Wff::app(f.clone(), w("x")).unwrap();
        assert_eq!(
            substitute(&c, &v("x"), &fx).unwrap(),
            Wff::app(f, c).unwrap()
        );
        let e = substitute(&w("y"), &v("x"), &Wff::abs(v("y"), w("x"))).unwrap_err();
        assert_eq!(
            e,
            SubstError::Capture {
                var: v("x"),
                captured: v("y")
            }
        );
    }

    #[test]
    fn substitution_through_folded_binders() {
        let sig = Signature::new();
        let b = parse_wff("forall y_i. x_i = y_i", &sig).unwrap();
        assert!(substitute(&w("y"), &v("x"), &b).is_err());
        let r = substitute(&w("z"), &v("x"), &b).unwrap();
        assert_eq!(r, parse_wff("forall y_i. z_i = y_i", &sig).unwrap());
        let shadow = parse_wff("exists x_i. x_i = y_i", &sig).unwrap();
        assert_eq!(substitute(&w("z"), &v("x"), &shadow).unwrap(), shadow);
    }

    #[test]
    fn fresh_examples() {
        assert_eq!(fresh_variable(&i(), &BTreeSet::new()), v("x"));
        assert_eq!(
            fresh_variable(&i(), &[v("x")].into_iter().collect()),
            v("y")
        );
        let o = Type::Bool;
        let avoid = ["x", "y", "z", "f", "g", "h"]
            .iter()
            .map(|n| Var::new(n, o.clone()))
            .collect();
        assert_eq!(fresh_variable(&o, &avoid), Var::indexed("x", 1, o.clone()));
        // other types do not block
        assert_eq!(
            fresh_variable(&o, &[v("x")].into_iter().collect()),
            Var::new("x", o)
        );
    }

    fn arb_wff() -> impl Strategy<Value = Wff> {
        let leaf = prop_oneof![
            Just(w("x")),
            Just(w("y")),
            Just(w("z")),
            Just(Wff::constant(Const::nonlogical("c", i())))
        ];
        // individuals only, built with a unary function variable and binders
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Wff::app(
                    Wff::var(Var::new("g", Type::fun(i(), i()))),
                    a
                )
                .unwrap()),
                (prop_oneof![Just("x"), Just("y"), Just("z")], inner).prop_map(|(n, b)| {
                    // \n. b applied to n keeps the type at i
                    Wff::app(Wff::abs(v(n), b), w(n)).unwrap()
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn identity_substitution(b in arb_wff(), n in prop_oneof![Just("x"), Just("y")]) {
            prop_assert_eq!(substitute(&w(n), &v(n), &b).unwrap(), b);
        }

        #[test]
        fn vacuous_substitution(b in arb_wff(), a in arb_wff()) {
            let x = v("h");
            prop_assert_eq!(substitute(&a, &x, &b).unwrap(), b);
        }

        #[test]
        fn free_vars_of_substitution(b in arb_wff(), a in arb_wff(), n in prop_oneof![Just("x"), Just("y"), Just("z")]) {
            let x = v(n);
            if let Ok(r) = substitute(&a, &x, &b) {
                let mut bound = free_vars(&b);
                bound.remove(&x);
                bound.extend(free_vars(&a));
                let got = free_vars(&r);
                prop_assert!(got.is_subset(&bound));
                if b.has_free(&x) {
                    prop_assert_eq!(got, bound);
                }
            }
        }

        #[test]
        fn fresh_is_fresh_and_stable(names in proptest::collection::btree_set(0u32..20, 0..15)) {
            let avoid: BTreeSet<Var> = names.iter().map(|k| variable_enumeration(&i()).nth(*k as usize).unwrap()).collect();
            let f = fresh_variable(&i(), &avoid);
            prop_assert!(!avoid.contains(&f));
            prop_assert_eq!(f, fresh_variable(&i(), &avoid));
        }
    }
}
