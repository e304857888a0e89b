//! Proof-emitting tactics for the constructive metatheorems. Their output
//! goes through the kernel like any other proof.

use std::collections::BTreeSet;

use crate::abbrev::{build as b, expand, view};
use crate::subst::fresh_variable;
use crate::syntax::{Wff, WffKind};

use super::axiom::{instantiate_axiom, AxiomInstance};
use super::proof::{Justification, Proof, Step};
use super::rules::OccurrencePath;
use super::KernelError;

fn axiom_step(inst: AxiomInstance) -> Step {
    let w = instantiate_axiom(&inst).expect("tactic builds a legal instance");
    Step::new(w, Justification::Axiom(inst))
}

/// A one-step proof of `def(A)` for `A` of type `o`.
pub fn tactic_odefined(a: &Wff) -> Result<Proof, KernelError> {
    let a = expand(a);
    if !a.ty().is_bool() {
        return Err(KernelError::TacticPrecondition(a));
    }
    let inst = match a.kind() {
        WffKind::Var(x) => AxiomInstance::A5 { x: x.clone() },
        WffKind::Const(_) => AxiomInstance::A6 { c: a.clone() },
        WffKind::App(f, arg) => AxiomInstance::A8 {
            a: f.clone(),
            b: arg.clone(),
        },
        WffKind::Abs(..) | WffKind::Abbr(_) => unreachable!("core wff of type o"),
    };
    Ok(Proof::plain(vec![axiom_step(inst)]))
}

/// A proof of `A ~= A`.
///
/// With `R = [\x A] x`, the A4 instance at `x` gives `R ~= A`; R1 then
/// rewrites each occurrence of `R` in that quasi-equation by `A`. `x` is
/// chosen so that `def(R)` and `def(A)` share their witness, which makes
/// the rewritten wff literally `A ~= A`.
pub fn tactic_lemma1(a: &Wff) -> Proof {
    let a = expand(a);
    let mut avoid: BTreeSet<_> = a.occurring_vars();
    let witness = fresh_variable(a.ty(), &avoid);
    avoid.insert(witness);
    let x = fresh_variable(a.ty(), &avoid);

    let mut steps = vec![
        axiom_step(AxiomInstance::A5 { x: x.clone() }),
        axiom_step(AxiomInstance::A4 {
            x: x.clone(),
            b: a.clone(),
            a: Wff::var(x.clone()),
        }),
    ];
    let (_, eq) = view::implies(&steps[1].wff).expect("A4 is an implication");
    let eq = eq.clone();
    steps.push(Step::new(
        eq.clone(),
        Justification::R2 { minor: 0, major: 1 },
    ));
    let (redex, _) = view::quasi_equals(&eq).expect("A4 consequent");
    let redex = redex.clone();

    let mut current = eq;
    while let Some(path) = OccurrencePath::find_all(&current, &redex)
        .into_iter()
        .next()
    {
        current = path.replace(&current, &a).expect("resolved path");
        let target = steps.len() - 1;
        steps.push(Step::new(
            current.clone(),
            Justification::R1 {
                eq: 2,
                target,
                path,
            },
        ));
    }
    debug_assert_eq!(current, b::quasi_equals(a.clone(), a));
    Proof::plain(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_proof, KernelConfig, Verdict};
    use crate::syntax::{parse_wff, Signature};
    use crate::types::Type;

    fn p(s: &str) -> Wff {
        let sig = Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("p", Type::Bool)
            .unwrap()
            .with("r", Type::fun(Type::Bool, Type::Ind))
            .unwrap();
        parse_wff(s, &sig).unwrap()
    }

    fn accepted(proof: &Proof) -> bool {
        matches!(
            check_proof(proof, KernelConfig::kernel()),
            Verdict::Accepted { .. }
        )
    }

    #[test]
    fn odefined_cases() {
        let pr = tactic_odefined(&p("x_o")).unwrap();
        assert_eq!(pr.main_section.len(), 1);
        assert!(matches!(
            pr.main_section[0].just,
            Justification::Axiom(AxiomInstance::A5 { .. })
        ));
        let pr = tactic_odefined(&p("r c")).unwrap();
        assert!(matches!(
            pr.main_section[0].just,
            Justification::Axiom(AxiomInstance::A8 { .. })
        ));
        assert!(accepted(&pr));
        assert!(accepted(&tactic_odefined(&p("p")).unwrap()));
        assert!(accepted(&tactic_odefined(&p("x_i = c")).unwrap()));
        assert!(tactic_odefined(&p("Q_(ooo)")).is_err());
    }

    #[test]
    fn lemma1_constant() {
        let pr = tactic_lemma1(&p("c"));
        assert!(accepted(&pr));
        assert_eq!(pr.conclusion, b::quasi_equals(p("c"), p("c")));
        assert_eq!(pr.main_section.len(), 5);
    }

    #[test]
    fn lemma1_fresh_variable() {
        let a = p("x_i");
        let pr = tactic_lemma1(&a);
        let AxiomInstance::A5 { x } = (match &pr.main_section[0].just {
            Justification::Axiom(i) => i.clone(),
            _ => unreachable!(),
        }) else {
            panic!()
        };
        assert!(!a.occurring_vars().contains(&x));
        assert!(accepted(&pr));
    }

    #[test]
    fn lemma1_bottom_and_lambdas() {
        for s in [
            "bot_i",
            "\\y_i. r y",
            "I x_i. x = c",
            "p /\\ p",
            "\\f_(ii). f x_i",
        ] {
            let a = p(s);
            let pr = tactic_lemma1(&a);
            assert!(accepted(&pr), "{s}");
            assert_eq!(
                pr.conclusion,
                b::quasi_equals(expand(&a), expand(&a)),
                "{s}"
            );
        }
    }
}
