use std::fmt;

use crate::abbrev::{build as b, expand};
use crate::subst::{is_free_for, subst_unchecked};
use crate::syntax::{Var, Wff};
use crate::types::Type;

use super::KernelError;

/// Axiom schema names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    A12,
    A13,
}

impl Schema {
    pub const ALL: [Schema; 13] = [
        Schema::A1,
        Schema::A2,
        Schema::A3,
        Schema::A4,
        Schema::A5,
        Schema::A6,
        Schema::A7,
        Schema::A8,
        Schema::A9,
        Schema::A10,
        Schema::A11,
        Schema::A12,
        Schema::A13,
    ];

    pub fn name(self) -> &'static str {
        [
            "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13",
        ][self as usize]
    }

    pub fn parse(s: &str) -> Option<Schema> {
        Schema::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A schema together with explicit parameters. Wff parameters may be
/// folded; they are expanded before the instance is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomInstance {
    /// `[g_oo T /\ g_oo F] = forall x_o [g_oo x_o]`
    A1,
    /// `[x_a = y_a] => [h_(oa) x_a = h_(oa) y_a]`
    A2 { alpha: Type },
    /// `[f_(ab) = g_(ab)] = forall x_b [f_(ab) x_b ~= g_(ab) x_b]`
    A3 { alpha: Type, beta: Type },
    /// `def(A) => [[\x B] A ~= S(x, A, B)]`, `A` free for `x` in `B`
    A4 { x: Var, b: Wff, a: Wff },
    /// `def(x)`
    A5 { x: Var },
    /// `def(c)` for a primitive constant `c`
    A6 { c: Wff },
    /// `def(\x B)`
    A7 { x: Var, b: Wff },
    /// `def(A_(ob) B_b)`
    A8 { a: Wff, b: Wff },
    /// `[undef(A_(ob)) \/ undef(B_b)] => ~[A B]`
    A9 { a: Wff, b: Wff },
    /// `[undef(A_(ab)) \/ undef(B_b)] => undef(A B)`, `a != o`
    A10 { a: Wff, b: Wff },
    /// `def(A) => [def(B) => [[A ~= B] ~= [A = B]]]`
    A11 { a: Wff, b: Wff },
    /// `exists1 x A => [def(I x A) /\ S(x, I x A, A)]`, `a != o`
    A12 { x: Var, a: Wff },
    /// `~[exists1 x A] => undef(I x A)`, `a != o`
    A13 { x: Var, a: Wff },
}

impl AxiomInstance {
    pub fn schema(&self) -> Schema {
        match self {
            AxiomInstance::A1 => Schema::A1,
            AxiomInstance::A2 { .. } => Schema::A2,
            AxiomInstance::A3 { .. } => Schema::A3,
            AxiomInstance::A4 { .. } => Schema::A4,
            AxiomInstance::A5 { .. } => Schema::A5,
            AxiomInstance::A6 { .. } => Schema::A6,
            AxiomInstance::A7 { .. } => Schema::A7,
            AxiomInstance::A8 { .. } => Schema::A8,
            AxiomInstance::A9 { .. } => Schema::A9,
            AxiomInstance::A10 { .. } => Schema::A10,
            AxiomInstance::A11 { .. } => Schema::A11,
            AxiomInstance::A12 { .. } => Schema::A12,
            AxiomInstance::A13 { .. } => Schema::A13,
        }
    }
}

fn var(name: &str, ty: Type) -> Wff {
    Wff::var(Var::new(name, ty))
}

fn app(f: &Wff, a: &Wff) -> Wff {
    Wff::app(f.clone(), a.clone()).expect("checked types")
}

fn same_type(
    schema: Schema,
    what: &'static str,
    expected: &Type,
    w: &Wff,
) -> Result<(), KernelError> {
    if w.ty() == expected {
        Ok(())
    } else {
        Err(KernelError::ParameterType {
            schema,
            what,
            expected: expected.to_string(),
            found: w.ty().clone(),
        })
    }
}

fn not_bool(schema: Schema, ty: &Type) -> Result<(), KernelError> {
    if ty.is_bool() {
        Err(KernelError::BoolForbidden(schema))
    } else {
        Ok(())
    }
}

/// Splits the type of `a` as `(alpha beta)` and checks `b : beta`.
fn application(schema: Schema, a: &Wff, b: &Wff) -> Result<Type, KernelError> {
    let Some((alpha, beta)) = a.ty().as_fun() else {
        return Err(KernelError::ParameterType {
            schema,
            what: "A",
            expected: "a function type".into(),
            found: a.ty().clone(),
        });
    };
    same_type(schema, "B", beta, b)?;
    Ok(alpha.clone())
}

/// The core wff of an axiom instance. With `drop_a9_negation`, the
/// consequent of A9 is left un-negated (a deliberately unsound variant
/// used to test that soundness checks can fail).
pub fn instantiate(inst: &AxiomInstance, drop_a9_negation: bool) -> Result<Wff, KernelError> {
    let schema = inst.schema();
    let o = Type::Bool;
    let w = match inst {
        AxiomInstance::A1 => {
            let g = var("g", Type::pred(o.clone()));
            let x = Var::new("x", o.clone());
            b::equals(
                b::and(app(&g, &b::truth()), app(&g, &b::falsity())),
                b::forall(&x, app(&g, &Wff::var(x.clone()))),
            )
        }
        AxiomInstance::A2 { alpha } => {
            let x = var("x", alpha.clone());
            let y = var("y", alpha.clone());
            let h = var("h", Type::pred(alpha.clone()));
            b::implies(
                b::equals(x.clone(), y.clone()),
                b::equals(app(&h, &x), app(&h, &y)),
            )
        }
        AxiomInstance::A3 { alpha, beta } => {
            let fty = Type::fun(alpha.clone(), beta.clone());
            let f = var("f", fty.clone());
            let g = var("g", fty);
            let x = Var::new("x", beta.clone());
            let xv = Wff::var(x.clone());
            b::equals(
                b::equals(f.clone(), g.clone()),
                b::forall(&x, b::quasi_equals(app(&f, &xv), app(&g, &xv))),
            )
        }
        AxiomInstance::A4 { x, b: body, a } => {
            let (body, a) = (expand(body), expand(a));
            same_type(schema, "A", x.ty(), &a)?;
            if !is_free_for(&a, x, &body).expect("types checked") {
                return Err(KernelError::NotFreeFor {
                    schema,
                    term: a,
                    var: x.clone(),
                    body,
                });
            }
            let redex = app(&Wff::abs(x.clone(), body.clone()), &a);
            b::implies(
                b::defined(a.clone()),
                b::quasi_equals(redex, subst_unchecked(&a, x, &body)),
            )
        }
        AxiomInstance::A5 { x } => b::defined(Wff::var(x.clone())),
        AxiomInstance::A6 { c } => {
            if c.as_const().is_none() {
                return Err(KernelError::NotPrimitive(c.clone()));
            }
            b::defined(c.clone())
        }
        AxiomInstance::A7 { x, b: body } => b::defined(Wff::abs(x.clone(), expand(body))),
        AxiomInstance::A8 { a, b: arg } => {
            let (a, arg) = (expand(a), expand(arg));
            let alpha = application(schema, &a, &arg)?;
            if !alpha.is_bool() {
                return Err(KernelError::ParameterType {
                    schema,
                    what: "A",
                    expected: "a predicate type (o b)".into(),
                    found: a.ty().clone(),
                });
            }
            b::defined(app(&a, &arg))
        }
        AxiomInstance::A9 { a, b: arg } => {
            let (a, arg) = (expand(a), expand(arg));
            let alpha = application(schema, &a, &arg)?;
            if !alpha.is_bool() {
                return Err(KernelError::ParameterType {
                    schema,
                    what: "A",
                    expected: "a predicate type (o b)".into(),
                    found: a.ty().clone(),
                });
            }
            let ab = app(&a, &arg);
            let consequent = if drop_a9_negation { ab } else { b::not(ab) };
            b::implies(b::or(b::undefined(a), b::undefined(arg)), consequent)
        }
        AxiomInstance::A10 { a, b: arg } => {
            let (a, arg) = (expand(a), expand(arg));
            let alpha = application(schema, &a, &arg)?;
            not_bool(schema, &alpha)?;
            let ab = app(&a, &arg);
            b::implies(b::or(b::undefined(a), b::undefined(arg)), b::undefined(ab))
        }
        AxiomInstance::A11 { a, b: other } => {
            let (a, other) = (expand(a), expand(other));
            same_type(schema, "B", a.ty(), &other)?;
            b::implies(
                b::defined(a.clone()),
                b::implies(
                    b::defined(other.clone()),
                    b::quasi_equals(
                        b::quasi_equals(a.clone(), other.clone()),
                        b::equals(a, other),
                    ),
                ),
            )
        }
        AxiomInstance::A12 { x, a } => {
            let a = expand(a);
            same_type(schema, "A", &o, &a)?;
            not_bool(schema, x.ty())?;
            let desc = b::description(x, a.clone()).expect("not at type o");
            if !is_free_for(&desc, x, &a).expect("same type") {
                return Err(KernelError::NotFreeFor {
                    schema,
                    term: desc,
                    var: x.clone(),
                    body: a,
                });
            }
            let inst = subst_unchecked(&desc, x, &a);
            b::implies(b::exists_unique(x, a), b::and(b::defined(desc), inst))
        }
        AxiomInstance::A13 { x, a } => {
            let a = expand(a);
            same_type(schema, "A", &o, &a)?;
            not_bool(schema, x.ty())?;
            let desc = b::description(x, a.clone()).expect("not at type o");
            b::implies(b::not(b::exists_unique(x, a)), b::undefined(desc))
        }
    };
    Ok(w)
}

/// The instance of `inst`, checking every side condition.
pub fn instantiate_axiom(inst: &AxiomInstance) -> Result<Wff, KernelError> {
    instantiate(inst, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_wff, Const, Signature};

    fn sig() -> Signature {
        Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("p", Type::pred(Type::Ind))
            .unwrap()
    }

    fn p(s: &str) -> Wff {
        parse_wff(s, &sig()).unwrap()
    }

    fn e(s: &str) -> Wff {
        expand(&p(s))
    }

    fn xi() -> Var {
        Var::new("x", Type::Ind)
    }

    #[test]
    fn a5_is_definedness_of_a_variable() {
        let w = instantiate_axiom(&AxiomInstance::A5 { x: xi() }).unwrap();
        assert_eq!(w, e("def(x_i)"));
    }

    #[test]
    fn a4_example() {
        let w = instantiate_axiom(&AxiomInstance::A4 {
            x: xi(),
            b: p("x_i"),
            a: p("c"),
        })
        .unwrap();
        assert_eq!(w, e("def(c) => [[\\x_i. x_i] c ~= c]"));
    }

    #[test]
    fn a4_requires_free_for() {
        let r = instantiate_axiom(&AxiomInstance::A4 {
            x: xi(),
            b: p("\\y_i. x_i"),
            a: p("y_i"),
        });
        assert!(matches!(r, Err(KernelError::NotFreeFor { .. })));
    }

    #[test]
    fn bool_restrictions() {
        let xo = Var::new("x", Type::Bool);
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A12 {
                x: xo.clone(),
                a: p("x_o")
            }),
            Err(KernelError::BoolForbidden(Schema::A12))
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A13 { x: xo, a: p("x_o") }),
            Err(KernelError::BoolForbidden(Schema::A13))
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A10 {
                a: p("p"),
                b: p("c")
            }),
            Err(KernelError::BoolForbidden(Schema::A10))
        );
    }

    #[test]
    fn a6_rejects_bottom() {
        assert!(matches!(
            instantiate_axiom(&AxiomInstance::A6 { c: p("bot_i") }),
            Err(KernelError::NotPrimitive(_))
        ));
        assert!(matches!(
            instantiate_axiom(&AxiomInstance::A6 { c: e("bot_i") }),
            Err(KernelError::NotPrimitive(_))
        ));
        let q = Wff::constant(Const::equality(&Type::Ind));
        assert!(instantiate_axiom(&AxiomInstance::A6 { c: q }).is_ok());
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A6 { c: p("c") }).unwrap(),
            e("def(c)")
        );
    }

    #[test]
    fn printed_forms() {
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A1).unwrap(),
            e("[g_(oo) T /\\ g_(oo) F] = forall x_o. g_(oo) x_o")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A2 { alpha: Type::Ind }).unwrap(),
            e("[x_i = y_i] => [h_(oi) x_i = h_(oi) y_i]")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A3 {
                alpha: Type::Ind,
                beta: Type::Bool
            })
            .unwrap(),
            e("[f_(io) = g_(io)] = forall x_o. f_(io) x_o ~= g_(io) x_o")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A9 {
                a: p("p"),
                b: p("bot_i")
            })
            .unwrap(),
            e("[undef(p) \\/ undef(bot_i)] => ~[p bot_i]")
        );
        assert_eq!(
            instantiate(
                &AxiomInstance::A9 {
                    a: p("p"),
                    b: p("bot_i")
                },
                true
            )
            .unwrap(),
            e("[undef(p) \\/ undef(bot_i)] => p bot_i")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A11 {
                a: p("c"),
                b: p("bot_i")
            })
            .unwrap(),
            e("def(c) => def(bot_i) => [[c ~= bot_i] ~= [c = bot_i]]")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A12 {
                x: xi(),
                a: p("p x_i")
            })
            .unwrap(),
            e("[exists1 x_i. p x_i] => [def(I x_i. p x_i) /\\ p [I x_i. p x_i]]")
        );
        assert_eq!(
            instantiate_axiom(&AxiomInstance::A13 {
                x: xi(),
                a: p("p x_i")
            })
            .unwrap(),
            e("~[exists1 x_i. p x_i] => undef(I x_i. p x_i)")
        );
    }

    #[test]
    fn parameter_types_are_checked() {
        assert!(matches!(
            instantiate_axiom(&AxiomInstance::A8 {
                a: p("p"),
                b: p("T")
            }),
            Err(KernelError::ParameterType { .. })
        ));
        assert!(matches!(
            instantiate_axiom(&AxiomInstance::A11 {
                a: p("c"),
                b: p("T")
            }),
            Err(KernelError::ParameterType { .. })
        ));
    }

    #[test]
    fn identical_parameters_give_identical_instances() {
        let i = AxiomInstance::A12 {
            x: xi(),
            a: p("x_i = c"),
        };
        assert_eq!(
            instantiate_axiom(&i).unwrap(),
            instantiate_axiom(&i.clone()).unwrap()
        );
    }
}
