use crate::abbrev::{build as b, expand, view};
use crate::semantics::Skeleton;
use crate::subst::substitute;
use crate::syntax::Wff;

use super::axiom::instantiate;
use super::proof::{Derived, Justification, Proof, Section, Step, StepRef};
use super::rules::{apply_beta, apply_r1, apply_r2};
use super::KernelError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    /// Only axioms, hypotheses, theorem imports, R1 and R2.
    #[default]
    Kernel,
    /// Also the admissible derived rules, which are trusted.
    Extended,
}

/// Deliberately unsound variants, for testing that the soundness suite
/// can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// A9 concludes `A B` instead of `~[A B]`.
    DropA9Negation,
    /// R1 ignores the restriction on binders of hypothesis variables.
    R1BinderRestrictionOff,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KernelConfig {
    pub mode: Mode,
    pub mutation: Option<Mutation>,
}

impl KernelConfig {
    pub fn kernel() -> KernelConfig {
        KernelConfig::default()
    }

    pub fn extended() -> KernelConfig {
        KernelConfig {
            mode: Mode::Extended,
            mutation: None,
        }
    }

    pub fn with_mutation(self, m: Mutation) -> KernelConfig {
        KernelConfig {
            mutation: Some(m),
            ..self
        }
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }
}

/// A step accepted on the strength of a derived rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustedStep {
    pub at: StepRef,
    pub rule: &'static str,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted {
        trusted: Vec<TrustedStep>,
    },
    Rejected {
        at: Option<StepRef>,
        reason: KernelError,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

struct Ctx<'p> {
    config: KernelConfig,
    section: Section,
    /// Expanded hypotheses; `None` in the theorem section.
    hyps: Option<&'p [Wff]>,
    theorems: &'p [Wff],
}

impl Ctx<'_> {
    fn r1_hyps(&self) -> Option<&[Wff]> {
        if self.config.mutated(Mutation::R1BinderRestrictionOff) {
            None
        } else {
            self.hyps
        }
    }
}

fn premise(done: &[Wff], k: usize) -> Result<&Wff, KernelError> {
    done.get(k).ok_or(KernelError::ForwardReference(k))
}

/// Checks every step and the conclusion. Rejection is a verdict, not an
/// error.
pub fn check_proof(proof: &Proof, config: KernelConfig) -> Verdict {
    match check_inner(proof, config) {
        Ok(trusted) => Verdict::Accepted { trusted },
        Err((at, reason)) => Verdict::Rejected { at, reason },
    }
}

type Rejection = (Option<StepRef>, KernelError);

fn check_inner(proof: &Proof, config: KernelConfig) -> Result<Vec<TrustedStep>, Rejection> {
    if proof.main_section.is_empty() {
        return Err((None, KernelError::EmptyProof));
    }
    let mut trusted = Vec::new();
    let theorems = check_section(
        &proof.theorem_section,
        &Ctx {
            config,
            section: Section::Theorem,
            hyps: None,
            theorems: &[],
        },
        &mut trusted,
    )?;
    let hyps: Vec<Wff> = proof.hypotheses.iter().map(expand).collect();
    if let Some(h) = hyps.iter().find(|h| !h.ty().is_bool()) {
        return Err((None, KernelError::NotBoolean(h.clone())));
    }
    let main = check_section(
        &proof.main_section,
        &Ctx {
            config,
            section: Section::Main,
            hyps: Some(&hyps),
            theorems: &theorems,
        },
        &mut trusted,
    )?;
    let last = main.last().expect("nonempty");
    let conclusion = expand(&proof.conclusion);
    if *last != conclusion {
        let at = StepRef::main(main.len() - 1);
        return Err((
            Some(at),
            KernelError::ConclusionMismatch {
                conclusion,
                last: last.clone(),
            },
        ));
    }
    Ok(trusted)
}

fn check_section(
    steps: &[Step],
    ctx: &Ctx<'_>,
    trusted: &mut Vec<TrustedStep>,
) -> Result<Vec<Wff>, Rejection> {
    let mut done: Vec<Wff> = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let at = StepRef {
            section: ctx.section,
            index: i,
        };
        let claimed = expand(&step.wff);
        let fail = |e| (Some(at), e);
        if !claimed.ty().is_bool() {
            return Err(fail(KernelError::NotBoolean(claimed)));
        }
        let expected = match justify(&step.just, &claimed, &done, ctx) {
            Ok((w, note)) => {
                if let Justification::Derived(d) = &step.just {
                    trusted.push(TrustedStep {
                        at,
                        rule: d.name(),
                        note,
                    });
                }
                w
            }
            Err(e) => return Err(fail(e)),
        };
        if expected != claimed {
            return Err(fail(KernelError::StepMismatch {
                expected,
                found: claimed,
            }));
        }
        done.push(claimed);
    }
    Ok(done)
}

fn justify(
    just: &Justification,
    claimed: &Wff,
    done: &[Wff],
    ctx: &Ctx<'_>,
) -> Result<(Wff, Option<String>), KernelError> {
    let w = match just {
        Justification::Axiom(inst) => {
            instantiate(inst, ctx.config.mutated(Mutation::DropA9Negation))?
        }
        Justification::Hyp(k) => {
            let hyps = ctx.hyps.ok_or(KernelError::HypothesisInTheoremSection)?;
            hyps.get(*k)
                .cloned()
                .ok_or(KernelError::NoSuchHypothesis(*k))?
        }
        Justification::Theorem(k) => {
            if ctx.section == Section::Theorem {
                return Err(KernelError::NestedTheoremImport);
            }
            ctx.theorems
                .get(*k)
                .cloned()
                .ok_or(KernelError::NoSuchTheorem(*k))?
        }
        Justification::R1 { eq, target, path } => apply_r1(
            premise(done, *eq)?,
            premise(done, *target)?,
            path,
            ctx.r1_hyps(),
        )?,
        Justification::R2 { minor, major } => {
            apply_r2(premise(done, *minor)?, premise(done, *major)?)?
        }
        Justification::Derived(d) => {
            if ctx.config.mode == Mode::Kernel {
                return Err(KernelError::ExtendedInKernelMode);
            }
            return derived(d, claimed, done, ctx);
        }
    };
    Ok((w, None))
}

fn derived(
    d: &Derived,
    claimed: &Wff,
    done: &[Wff],
    ctx: &Ctx<'_>,
) -> Result<(Wff, Option<String>), KernelError> {
    let hyps = ctx.hyps.unwrap_or(&[]);
    let w = match d {
        Derived::R1Prime { eq, target, path } => apply_r1(
            premise(done, *eq)?,
            premise(done, *target)?,
            path,
            ctx.r1_hyps(),
        )?,
        Derived::R2Prime { minor, major } => {
            apply_r2(premise(done, *minor)?, premise(done, *major)?)?
        }
        Derived::Beta {
            defined,
            target,
            path,
        } => apply_beta(
            premise(done, *defined)?,
            premise(done, *target)?,
            path,
            ctx.r1_hyps(),
        )?,
        Derived::UnivInst {
            defined,
            forall,
            term,
        } => {
            let a = expand(term);
            let def = premise(done, *defined)?;
            let defined_term =
                view::defined(def).ok_or_else(|| KernelError::NotDefinedness(def.clone()))?;
            if *defined_term != a {
                return Err(KernelError::PremiseMismatch {
                    expected: b::defined(a),
                    found: def.clone(),
                });
            }
            let all = premise(done, *forall)?;
            let (x, body) =
                view::forall(all).ok_or_else(|| KernelError::NotUniversal(all.clone()))?;
            substitute(&a, x, body).map_err(|_| KernelError::NotFreeFor {
                schema: super::Schema::A4,
                term: a.clone(),
                var: x.clone(),
                body: body.clone(),
            })?
        }
        Derived::UnivGen { premise: p, var } => {
            if let Some(k) = hyps.iter().position(|h| h.has_free(var)) {
                return Err(KernelError::FreeInHypothesis {
                    var: var.clone(),
                    hypothesis: k,
                });
            }
            b::forall(var, premise(done, *p)?.clone())
        }
        Derived::Taut { premises } => {
            let mut ps = Vec::with_capacity(premises.len());
            for k in premises {
                ps.push(premise(done, *k)?.clone());
            }
            let formula = match ps.into_iter().reduce(b::and) {
                Some(conj) => b::implies(conj, claimed.clone()),
                None => claimed.clone(),
            };
            let sk = Skeleton::of(&formula);
            match sk.is_tautology() {
                Some(true) => {}
                Some(false) => return Err(KernelError::NotTautologous),
                None => return Err(KernelError::TooManyAtoms(sk.atoms.len())),
            }
            let note = sk
                .uses_equivalence
                .then(|| "equation between truth values read as equivalence".to_string());
            return Ok((claimed.clone(), note));
        }
        Derived::Deduction {
            subproof,
            hypothesis,
        } => {
            let h0 = expand(hypothesis);
            let have: Vec<Wff> = subproof.hypotheses.iter().map(expand).collect();
            let covers = |xs: &[Wff], ys: &[Wff]| ys.iter().all(|y| xs.contains(y));
            let want: Vec<Wff> = hyps.iter().cloned().chain([h0.clone()]).collect();
            if !covers(&want, &have) || !covers(&have, &want) {
                return Err(KernelError::DeductionHypotheses);
            }
            let verdict = check_proof(subproof, ctx.config);
            let n = match verdict {
                Verdict::Accepted { trusted } => trusted.len(),
                Verdict::Rejected { at, reason } => {
                    return Err(KernelError::SubproofRejected(match at {
                        Some(at) => format!("{at}: {reason}"),
                        None => reason.to_string(),
                    }))
                }
            };
            let note = (n > 0).then(|| format!("sub-proof relies on {n} trusted step(s)"));
            return Ok((b::implies(h0, expand(&subproof.conclusion)), note));
        }
    };
    Ok((w, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{AxiomInstance, OccurrencePath};
    use crate::syntax::{parse_wff, Signature, Var};
    use crate::types::Type;
    use std::sync::Arc;

    fn sig() -> Signature {
        Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("p", Type::pred(Type::Ind))
            .unwrap()
            .with("q", Type::Bool)
            .unwrap()
    }

    fn e(s: &str) -> Wff {
        expand(&parse_wff(s, &sig()).unwrap())
    }

    fn x_i() -> Var {
        Var::new("x", Type::Ind)
    }

    fn ax(inst: AxiomInstance) -> Step {
        let w = crate::kernel::instantiate_axiom(&inst).unwrap();
        Step::new(w, Justification::Axiom(inst))
    }

    fn with_hyps(hyps: &[&str], steps: Vec<Step>) -> Proof {
        let mut p = Proof::plain(steps);
        p.hypotheses = hyps.iter().map(|h| e(h)).collect();
        p
    }

    fn rejected_at(v: &Verdict) -> Option<(Option<StepRef>, &KernelError)> {
        match v {
            Verdict::Rejected { at, reason } => Some((*at, reason)),
            _ => None,
        }
    }

    #[test]
    fn single_axiom_step() {
        let p = Proof::plain(vec![ax(AxiomInstance::A5 { x: x_i() })]);
        assert_eq!(
            check_proof(&p, KernelConfig::kernel()),
            Verdict::Accepted { trusted: vec![] }
        );
    }

    #[test]
    fn forward_reference_rejected() {
        let a5 = ax(AxiomInstance::A5 { x: x_i() });
        let r2 = Step::new(e("T"), Justification::R2 { minor: 0, major: 2 });
        let p = Proof::plain(vec![a5, r2]);
        let v = check_proof(&p, KernelConfig::kernel());
        assert_eq!(
            rejected_at(&v),
            Some((Some(StepRef::main(1)), &KernelError::ForwardReference(2)))
        );
    }

    #[test]
    fn hypothesis_steps() {
        let p = with_hyps(&["q"], vec![Step::new(e("q"), Justification::Hyp(0))]);
        assert!(check_proof(&p, KernelConfig::kernel()).is_accepted());
        let p = with_hyps(&["q"], vec![Step::new(e("q"), Justification::Hyp(1))]);
        assert!(!check_proof(&p, KernelConfig::kernel()).is_accepted());
        // hypotheses are unavailable in the theorem section
        let mut p = with_hyps(&["q"], vec![Step::new(e("q"), Justification::Theorem(0))]);
        p.theorem_section = vec![Step::new(e("q"), Justification::Hyp(0))];
        let v = check_proof(&p, KernelConfig::kernel());
        assert_eq!(
            rejected_at(&v),
            Some((
                Some(StepRef::theorem(0)),
                &KernelError::HypothesisInTheoremSection
            ))
        );
    }

    #[test]
    fn theorem_import() {
        let mut p = with_hyps(
            &["q"],
            vec![Step::new(e("def(x_i)"), Justification::Theorem(0))],
        );
        p.theorem_section = vec![ax(AxiomInstance::A5 { x: x_i() })];
        assert!(check_proof(&p, KernelConfig::kernel()).is_accepted());
    }

    #[test]
    fn claimed_wff_must_match() {
        let mut s = ax(AxiomInstance::A5 { x: x_i() });
        s.wff = e("def(c)");
        let v = check_proof(&Proof::plain(vec![s]), KernelConfig::kernel());
        assert!(matches!(
            rejected_at(&v),
            Some((_, KernelError::StepMismatch { .. }))
        ));
    }

    #[test]
    fn conclusion_must_be_last_step() {
        let mut p = Proof::plain(vec![ax(AxiomInstance::A5 { x: x_i() })]);
        p.conclusion = e("q");
        let v = check_proof(&p, KernelConfig::kernel());
        assert!(matches!(
            rejected_at(&v),
            Some((_, KernelError::ConclusionMismatch { .. }))
        ));
    }

    #[test]
    fn folded_claims_are_expanded() {
        let inst = AxiomInstance::A5 { x: x_i() };
        let folded = parse_wff("def(x_i)", &sig()).unwrap();
        let p = Proof::plain(vec![Step::new(folded, Justification::Axiom(inst))]);
        assert!(check_proof(&p, KernelConfig::kernel()).is_accepted());
    }

    fn derived(d: Derived, w: &str) -> Step {
        Step::new(e(w), Justification::Derived(d))
    }

    #[test]
    fn derived_rules_need_extended_mode() {
        let p = with_hyps(
            &["q"],
            vec![
                Step::new(e("q"), Justification::Hyp(0)),
                derived(Derived::Taut { premises: vec![0] }, "q \\/ p c"),
            ],
        );
        let v = check_proof(&p, KernelConfig::kernel());
        assert_eq!(
            v,
            Verdict::Rejected {
                at: Some(StepRef::main(1)),
                reason: KernelError::ExtendedInKernelMode,
            }
        );
        assert_eq!(
            KernelError::ExtendedInKernelMode.to_string(),
            "extended-mode rule in kernel mode"
        );
        let Verdict::Accepted { trusted } = check_proof(&p, KernelConfig::extended()) else {
            panic!()
        };
        assert_eq!(trusted.len(), 1);
        assert_eq!(trusted[0].rule, "taut");
    }

    #[test]
    fn taut_examples() {
        let steps = vec![
            Step::new(e("q"), Justification::Hyp(0)),
            Step::new(e("p c"), Justification::Hyp(1)),
            derived(
                Derived::Taut {
                    premises: vec![0, 1],
                },
                "q /\\ p c",
            ),
        ];
        let p = with_hyps(&["q", "p c"], steps.clone());
        assert!(check_proof(&p, KernelConfig::extended()).is_accepted());
        let mut bad = steps;
        bad[2] = derived(Derived::Taut { premises: vec![0] }, "q /\\ p c");
        let p = with_hyps(&["q", "p c"], bad);
        let v = check_proof(&p, KernelConfig::extended());
        assert!(matches!(
            rejected_at(&v),
            Some((_, KernelError::NotTautologous))
        ));
        let p = Proof::plain(vec![derived(
            Derived::Taut { premises: vec![] },
            "q \\/ ~q",
        )]);
        assert!(check_proof(&p, KernelConfig::extended()).is_accepted());
    }

    #[test]
    fn univ_gen_and_inst() {
        let steps = vec![
            ax(AxiomInstance::A5 { x: x_i() }),
            derived(
                Derived::UnivGen {
                    premise: 0,
                    var: x_i(),
                },
                "forall x_i. def(x_i)",
            ),
            ax(AxiomInstance::A6 { c: e("c") }),
            derived(
                Derived::UnivInst {
                    defined: 2,
                    forall: 1,
                    term: e("c"),
                },
                // S(x, c, def(x)) keeps def(x)'s witness y, so it is not
                // the canonical def(c)
                "~forall y_i. ~[y_i = c]",
            ),
        ];
        let p = Proof::plain(steps.clone());
        assert!(check_proof(&p, KernelConfig::extended()).is_accepted());
        // x free in a hypothesis blocks generalisation
        let p = with_hyps(&["p x_i"], steps);
        let v = check_proof(&p, KernelConfig::extended());
        assert!(matches!(
            rejected_at(&v),
            Some((_, KernelError::FreeInHypothesis { hypothesis: 0, .. }))
        ));
    }

    #[test]
    fn deduction_discharges() {
        let sub = with_hyps(&["q"], vec![Step::new(e("q"), Justification::Hyp(0))]);
        let d = Derived::Deduction {
            subproof: Arc::new(sub.clone()),
            hypothesis: e("q"),
        };
        let p = Proof::plain(vec![derived(d, "q => q")]);
        assert!(check_proof(&p, KernelConfig::extended()).is_accepted());
        // the sub-proof must use exactly H plus the discharged hypothesis
        let d = Derived::Deduction {
            subproof: Arc::new(sub),
            hypothesis: e("p c"),
        };
        let p = Proof::plain(vec![derived(d, "p c => q")]);
        let v = check_proof(&p, KernelConfig::extended());
        assert!(matches!(
            rejected_at(&v),
            Some((_, KernelError::DeductionHypotheses))
        ));
    }

    // Rewriting a variable under a binder of the same variable while that
    // variable is free in a hypothesis: unsound, and rejected unless the
    // restriction is switched off.
    fn binder_capture_proof() -> Proof {
        let hyp = Step::new(e("x_i ~= c"), Justification::Hyp(0));
        let a3 = ax(AxiomInstance::A3 {
            alpha: Type::Ind,
            beta: Type::Ind,
        });
        let occ = OccurrencePath::find_all(&a3.wff, &e("x_i"));
        let path = occ[0].clone();
        let w = path.replace(&a3.wff, &e("c")).unwrap();
        let r1 = Step::new(
            w,
            Justification::R1 {
                eq: 0,
                target: 1,
                path,
            },
        );
        with_hyps(&["x_i ~= c"], vec![hyp, a3, r1])
    }

    #[test]
    fn binder_restriction_and_its_mutation() {
        let p = binder_capture_proof();
        let v = check_proof(&p, KernelConfig::kernel());
        assert!(matches!(
            rejected_at(&v),
            Some((Some(at), KernelError::BinderRestriction { hypothesis: 0, .. })) if at == StepRef::main(2)
        ));
        let mutant = KernelConfig::kernel().with_mutation(Mutation::R1BinderRestrictionOff);
        assert!(check_proof(&p, mutant).is_accepted());
    }

    #[test]
    fn a9_mutation_changes_the_instance() {
        let inst = AxiomInstance::A9 {
            a: e("p"),
            b: e("c"),
        };
        let honest = instantiate(&inst, false).unwrap();
        let p = Proof::plain(vec![Step::new(honest, Justification::Axiom(inst))]);
        assert!(check_proof(&p, KernelConfig::kernel()).is_accepted());
        let mutant = KernelConfig::kernel().with_mutation(Mutation::DropA9Negation);
        assert!(!check_proof(&p, mutant).is_accepted());
    }

    #[test]
    fn rechecking_is_deterministic() {
        let p = binder_capture_proof();
        let a = check_proof(&p, KernelConfig::kernel());
        assert_eq!(a, check_proof(&p, KernelConfig::kernel()));
    }
}
