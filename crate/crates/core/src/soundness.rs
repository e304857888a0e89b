//! Desk-scale soundness: axiom instances valid in small standard models,
//! R1/R2 preserving validity model by model, and accepted proofs from
//! hypotheses entailing their conclusions.

use std::fmt;
use std::sync::Arc;

use crate::abbrev::{expand, fold};
use crate::gen::default_signature;
use crate::kernel::{
    apply_r1, apply_r2, check_proof, instantiate, tactic_lemma1, tactic_odefined, AxiomInstance,
    Justification, KernelConfig, Mutation, OccurrencePath, Proof, Schema, Step, Verdict,
};
use crate::par::{self, Exec};
use crate::semantics::{
    counter_model_over, entailment_counterexample, is_valid_in_model, Assignment, Frame,
    Interpretations, Model, SemError, DEFAULT_CAP,
};
use crate::syntax::{parse_wff, print_wff, Const, Signature, Var, Wff};
use crate::types::{parse_type, Type};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Numbers of individuals to try.
    pub bases: Vec<usize>,
    pub cap: usize,
    pub mutation: Option<Mutation>,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            bases: vec![1, 2],
            cap: DEFAULT_CAP,
            mutation: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCase {
    pub instance: AxiomInstance,
}

#[derive(Debug, Clone)]
pub enum RuleCase {
    R1 {
        eq: Wff,
        target: Wff,
        path: OccurrencePath,
    },
    R2 {
        minor: Wff,
        major: Wff,
    },
}

impl RuleCase {
    fn premises(&self) -> [&Wff; 2] {
        match self {
            RuleCase::R1 { eq, target, .. } => [eq, target],
            RuleCase::R2 { minor, major } => [minor, major],
        }
    }

    fn conclusion(&self) -> Result<Wff, String> {
        match self {
            RuleCase::R1 { eq, target, path } => apply_r1(eq, target, path, None),
            RuleCase::R2 { minor, major } => apply_r2(minor, major),
        }
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct ProofCase {
    pub label: String,
    pub proof: Proof,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub axioms: Vec<AxiomCase>,
    pub rules: Vec<RuleCase>,
    pub proofs: Vec<ProofCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Axiom,
    R1,
    R2,
    Proof,
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryKind::Axiom => "axiom",
            EntryKind::R1 => "R1",
            EntryKind::R2 => "R2",
            EntryKind::Proof => "proof",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A counter-model, described.
    Fail(String),
    /// The case could not be evaluated (cap, malformed instance).
    Error(String),
    /// The premises are valid in no model tried: nothing was tested.
    Vacuous,
    /// The kernel rejected the proof; soundness says nothing about it.
    Rejected(String),
}

impl Status {
    pub fn is_failure(&self) -> bool {
        matches!(self, Status::Fail(_) | Status::Error(_))
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub kind: EntryKind,
    pub label: String,
    pub status: Status,
    /// Models examined (for rules: models where the premises hold).
    pub models: u64,
}

#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub entries: Vec<Entry>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status.is_failure())
    }

    pub fn count(&self, kind: EntryKind, pred: impl Fn(&Status) -> bool) -> usize {
        self.entries
            .iter()
            .filter(|e| e.kind == kind && pred(&e.status))
            .count()
    }
}

pub fn show(w: &Wff) -> String {
    print_wff(&fold(w))
}

/// `A4 {x := x_i; B := ...; A := ...}`.
pub fn describe_instance(inst: &AxiomInstance) -> String {
    let params: Vec<(&str, String)> = match inst {
        AxiomInstance::A1 => vec![],
        AxiomInstance::A2 { alpha } => vec![("alpha", alpha.to_string())],
        AxiomInstance::A3 { alpha, beta } => {
            vec![("alpha", alpha.to_string()), ("beta", beta.to_string())]
        }
        AxiomInstance::A4 { x, b, a } => vec![("x", x.to_string()), ("B", show(b)), ("A", show(a))],
        AxiomInstance::A5 { x } => vec![("x", x.to_string())],
        AxiomInstance::A6 { c } => vec![("c", show(c))],
        AxiomInstance::A7 { x, b } => vec![("x", x.to_string()), ("B", show(b))],
        AxiomInstance::A8 { a, b }
        | AxiomInstance::A9 { a, b }
        | AxiomInstance::A10 { a, b }
        | AxiomInstance::A11 { a, b } => vec![("A", show(a)), ("B", show(b))],
        AxiomInstance::A12 { x, a } | AxiomInstance::A13 { x, a } => {
            vec![("x", x.to_string()), ("A", show(a))]
        }
    };
    if params.is_empty() {
        return inst.schema().to_string();
    }
    let body: Vec<String> = params.iter().map(|(k, v)| format!("{k} := {v}")).collect();
    format!("{} {{{}}}", inst.schema(), body.join("; "))
}

fn describe_counter(model: &Model, phi: &Assignment) -> String {
    let frame = model.frame();
    let mut parts = vec![format!("|D_i| = {}", frame.base_size())];
    for (c, v) in model.constants() {
        parts.push(format!("{} = {}", c.name(), frame.display(v, c.ty())));
    }
    for (x, v) in phi.iter() {
        parts.push(format!("{x} = {}", frame.display(v, x.ty())));
    }
    parts.join(", ")
}

fn constants_of<'a>(ws: impl IntoIterator<Item = &'a Wff>) -> Vec<Const> {
    let mut cs: Vec<Const> = ws
        .into_iter()
        .flat_map(|w| w.nonlogical_constants())
        .collect();
    cs.sort();
    cs.dedup();
    cs
}

/// Every model over the configured bases interpreting `constants`.
fn models(config: &SuiteConfig, constants: &[Const]) -> Result<Vec<Interpretations>, SemError> {
    config
        .bases
        .iter()
        .map(|&n| {
            let frame = Arc::new(Frame::with_size(n, config.cap)?);
            Interpretations::new(frame, constants.to_vec())
        })
        .collect()
}

pub fn check_soundness_suite(catalog: &Catalog, config: &SuiteConfig) -> SoundnessReport {
    let mut entries = Vec::new();
    for case in &catalog.axioms {
        entries.push(axiom_entry(case, config));
    }
    for case in &catalog.rules {
        entries.push(rule_entry(case, config));
    }
    for case in &catalog.proofs {
        entries.push(proof_entry(case, config));
    }
    SoundnessReport { entries }
}

fn axiom_entry(case: &AxiomCase, config: &SuiteConfig) -> Entry {
    let label = describe_instance(&case.instance);
    let entry = |status, models| Entry {
        kind: EntryKind::Axiom,
        label: label.clone(),
        status,
        models,
    };
    let drop_negation = config.mutation == Some(Mutation::DropA9Negation);
    let w = match instantiate(&case.instance, drop_negation) {
        Ok(w) => w,
        Err(e) => return entry(Status::Error(e.to_string()), 0),
    };
    let counted = models(config, &constants_of([&w]))
        .map(|ms| ms.iter().map(Interpretations::len).sum::<u64>());
    match (
        counter_model_over(config.exec, &w, &config.bases, config.cap),
        counted,
    ) {
        (Ok(None), Ok(n)) => entry(Status::Pass, n),
        (Ok(Some(cm)), Ok(n)) => {
            entry(Status::Fail(describe_counter(&cm.model, &cm.assignment)), n)
        }
        (Err(e), _) | (_, Err(e)) => entry(Status::Error(e.to_string()), 0),
    }
}

fn rule_entry(case: &RuleCase, config: &SuiteConfig) -> Entry {
    let (kind, label) = match case {
        RuleCase::R1 { eq, target, path } => (
            EntryKind::R1,
            format!("{} in {} at {path}", show(eq), show(target)),
        ),
        RuleCase::R2 { minor, major } => {
            (EntryKind::R2, format!("{} ; {}", show(minor), show(major)))
        }
    };
    let entry = |status, models| Entry {
        kind,
        label: label.clone(),
        status,
        models,
    };
    let conclusion = match case.conclusion() {
        Ok(c) => c,
        Err(e) => return entry(Status::Error(e), 0),
    };
    let [p1, p2] = case.premises();
    let interps = match models(config, &constants_of([p1, p2, &conclusion])) {
        Ok(i) => i,
        Err(e) => return entry(Status::Error(e.to_string()), 0),
    };
    let mut premise_models = 0;
    for interp in &interps {
        // per model: None when the premises fail, Some(Ok(true)) when the
        // conclusion is preserved
        let outcomes = par::map(config.exec, interp.len() as usize, |i| {
            let m = interp.model(i as u64);
            let premises = is_valid_in_model(&m, p1)? && is_valid_in_model(&m, p2)?;
            if !premises {
                return Ok(None);
            }
            Ok(Some(
                crate::semantics::counterexample(&m, &conclusion)?
                    .map(|phi| describe_counter(&m, &phi)),
            ))
        });
        for o in outcomes {
            match o {
                Err(e) => return entry(Status::Error(SemError::to_string(&e)), premise_models),
                Ok(None) => {}
                Ok(Some(None)) => premise_models += 1,
                Ok(Some(Some(cm))) => return entry(Status::Fail(cm), premise_models + 1),
            }
        }
    }
    if premise_models == 0 {
        entry(Status::Vacuous, 0)
    } else {
        entry(Status::Pass, premise_models)
    }
}

fn proof_entry(case: &ProofCase, config: &SuiteConfig) -> Entry {
    let entry = |status, models| Entry {
        kind: EntryKind::Proof,
        label: case.label.clone(),
        status,
        models,
    };
    let mut kc = KernelConfig::kernel();
    kc.mutation = config.mutation;
    if let Verdict::Rejected { at, reason } = check_proof(&case.proof, kc) {
        let at = at.map(|a| format!("{a}: ")).unwrap_or_default();
        return entry(Status::Rejected(format!("{at}{reason}")), 0);
    }
    let hyps: Vec<Wff> = case.proof.hypotheses.iter().map(expand).collect();
    let conclusion = expand(&case.proof.conclusion);
    let interps = match models(config, &constants_of(hyps.iter().chain([&conclusion]))) {
        Ok(i) => i,
        Err(e) => return entry(Status::Error(e.to_string()), 0),
    };
    let mut seen = 0;
    for interp in &interps {
        let found = par::find_first(
            config.exec,
            interp.len(),
            || (),
            |_, i| {
                let m = interp.model(i);
                match entailment_counterexample(&m, &hyps, &conclusion) {
                    Ok(None) => None,
                    Ok(Some(phi)) => Some(Ok(describe_counter(&m, &phi))),
                    Err(e) => Some(Err(e)),
                }
            },
        );
        match found {
            None => seen += interp.len(),
            Some(Ok(cm)) => return entry(Status::Fail(cm), seen),
            Some(Err(e)) => return entry(Status::Error(e.to_string()), seen),
        }
    }
    entry(Status::Pass, seen)
}

// ---------------------------------------------------------------------
// The standard catalog

fn sig() -> Signature {
    default_signature()
}

fn w(s: &str) -> Wff {
    parse_wff(s, &sig()).unwrap_or_else(|e| panic!("catalog wff {s:?}: {e}"))
}

fn e(s: &str) -> Wff {
    expand(&w(s))
}

fn t(s: &str) -> Type {
    parse_type(s).expect("catalog type")
}

fn v(name: &str, ty: &str) -> Var {
    Var::new(name, t(ty))
}

/// At least three instances of every schema except A1, which is a single
/// wff. Types come from `o, i, oi, ii, oo, o(oi)`; parameters include
/// undefined and abstraction-containing wffs.
pub fn axiom_catalog() -> Vec<AxiomCase> {
    use AxiomInstance as I;
    let mut out = vec![I::A1];
    for a in ["i", "o", "oi", "ii", "oo"] {
        out.push(I::A2 { alpha: t(a) });
    }
    for (a, b) in [("i", "i"), ("o", "i"), ("o", "o"), ("i", "oi"), ("oi", "o")] {
        out.push(I::A3 {
            alpha: t(a),
            beta: t(b),
        });
    }
    out.extend([
        I::A4 {
            x: v("x", "i"),
            b: w("p x_i"),
            a: w("c"),
        },
        I::A4 {
            x: v("x", "i"),
            b: w("r x_i = x_i"),
            a: w("bot_i"),
        },
        I::A4 {
            x: v("x", "oi"),
            b: w("x_(oi) c"),
            a: w("\\y_i. p y_i"),
        },
        I::A4 {
            x: v("x", "o"),
            b: w("x_o /\\ q"),
            a: w("y_o"),
        },
        I::A4 {
            x: v("x", "i"),
            b: w("\\y_i. r x_i"),
            a: w("r c"),
        },
        I::A4 {
            x: v("y", "i"),
            b: w("forall x_i. x_i = y_i"),
            a: w("I z_i. p z_i"),
        },
    ]);
    for (x, ty) in [
        ("x", "i"),
        ("x", "o"),
        ("f", "oi"),
        ("g", "ii"),
        ("h", "o(oi)"),
    ] {
        out.push(I::A5 { x: v(x, ty) });
    }
    for c in ["c", "p", "q", "s", "Q_i", "iota_i", "Q_o"] {
        out.push(I::A6 { c: w(c) });
    }
    out.extend([
        I::A7 {
            x: v("x", "i"),
            b: w("bot_i"),
        },
        I::A7 {
            x: v("x", "i"),
            b: w("p x_i"),
        },
        I::A7 {
            x: v("x", "o"),
            b: w("r c"),
        },
        I::A7 {
            x: v("y", "oi"),
            b: w("I z_i. y_(oi) z_i"),
        },
    ]);
    out.extend([
        I::A8 {
            a: w("p"),
            b: w("bot_i"),
        },
        I::A8 {
            a: w("p"),
            b: w("c"),
        },
        I::A8 {
            a: w("s"),
            b: w("\\x_i. x_i = c"),
        },
        I::A8 {
            a: w("\\x_i. r x_i = c"),
            b: w("I y_i. p y_i"),
        },
        I::A8 {
            a: w("bot_(oi)"),
            b: w("d"),
        },
    ]);
    out.extend([
        I::A9 {
            a: w("p"),
            b: w("bot_i"),
        },
        I::A9 {
            a: w("bot_(oi)"),
            b: w("c"),
        },
        I::A9 {
            a: w("s"),
            b: w("bot_(oi)"),
        },
        I::A9 {
            a: w("p"),
            b: w("r c"),
        },
        I::A9 {
            a: w("\\x_o. x_o"),
            b: w("q"),
        },
    ]);
    out.extend([
        I::A10 {
            a: w("r"),
            b: w("bot_i"),
        },
        I::A10 {
            a: w("bot_(ii)"),
            b: w("c"),
        },
        I::A10 {
            a: w("\\x_i. bot_i"),
            b: w("c"),
        },
        I::A10 {
            a: w("\\x_(oi). I y_i. x_(oi) y_i"),
            b: w("p"),
        },
        I::A10 {
            a: w("r"),
            b: w("r d"),
        },
    ]);
    out.extend([
        I::A11 {
            a: w("c"),
            b: w("d"),
        },
        I::A11 {
            a: w("x_i"),
            b: w("bot_i"),
        },
        I::A11 {
            a: w("r c"),
            b: w("d"),
        },
        I::A11 {
            a: w("p"),
            b: w("\\x_i. x_i = c"),
        },
        I::A11 {
            a: w("q"),
            b: w("x_o"),
        },
    ]);
    out.extend([
        I::A12 {
            x: v("x", "i"),
            a: w("x_i = c"),
        },
        I::A12 {
            x: v("x", "i"),
            a: w("p x_i"),
        },
        I::A12 {
            x: v("x", "oi"),
            a: w("x_(oi) = p"),
        },
        I::A12 {
            x: v("y", "i"),
            a: w("r y_i = y_i"),
        },
    ]);
    out.extend([
        I::A13 {
            x: v("x", "i"),
            a: w("x_i /= x_i"),
        },
        I::A13 {
            x: v("x", "i"),
            a: w("p x_i"),
        },
        I::A13 {
            x: v("x", "oi"),
            a: w("x_(oi) c"),
        },
        I::A13 {
            x: v("x", "ii"),
            a: w("x_(ii) c = d"),
        },
    ]);
    out.into_iter()
        .map(|instance| AxiomCase { instance })
        .collect()
}

/// R1 cases: each quasi-equation applied at every occurrence of its left
/// side in each target containing it. R2 cases: `A` and `A => B` for pairs
/// drawn from a pool of wffs.
pub fn rule_catalog() -> Vec<RuleCase> {
    let eqs = [
        "c ~= d",
        "r c ~= d",
        "[\\x_i. x_i] c ~= c",
        "bot_i ~= r c",
        "q ~= T",
        "p ~= [\\x_i. x_i = c]",
        "x_i ~= c",
    ];
    let targets = [
        "p c /\\ p c",
        "def(c)",
        "r c = d \\/ q",
        "forall y_i. p c => p y_i",
        "p [r c]",
        "c = [I y_i. y_i = c]",
        "q => p [[\\x_i. x_i] c]",
        "undef(bot_i) /\\ q",
        "p x_i",
        "exists y_i. p y_i",
        "forall x_i. p x_i",
    ];
    let mut out = Vec::new();
    for eq in eqs {
        let eq = e(eq);
        let (lhs, _) = crate::abbrev::view::quasi_equals(&eq).expect("catalog quasi-equation");
        for target in targets {
            let target = e(target);
            for path in OccurrencePath::find_all(&target, lhs) {
                out.push(RuleCase::R1 {
                    eq: eq.clone(),
                    target: target.clone(),
                    path,
                });
            }
        }
    }
    let pool = [
        "q",
        "p c",
        "c = d",
        "def(r c)",
        "q \\/ ~q",
        "p d",
        "r c = c",
        "exists x_i. p x_i",
        "~q",
        "x_i = c",
    ];
    for a in pool {
        for b in pool {
            if a != b {
                out.push(RuleCase::R2 {
                    minor: e(a),
                    major: e(&format!("[{a}] => [{b}]")),
                });
            }
        }
    }
    out
}

fn step(wff: Wff, just: Justification) -> Step {
    Step::new(wff, just)
}

fn axiom(inst: AxiomInstance) -> Step {
    let wff = instantiate(&inst, false).expect("catalog axiom");
    step(wff, Justification::Axiom(inst))
}

fn from_hyps(hyps: &[&str], steps: Vec<Step>) -> Proof {
    let mut p = Proof::plain(steps);
    p.hypotheses = hyps.iter().map(|h| e(h)).collect();
    p
}

fn r1(
    eq: usize,
    target: usize,
    steps: &[Step],
    pick: impl Fn(Vec<OccurrencePath>) -> OccurrencePath,
) -> Step {
    let (lhs, rhs) = crate::abbrev::view::quasi_equals(&steps[eq].wff).expect("equation step");
    let path = pick(OccurrencePath::find_all(&steps[target].wff, lhs));
    let wff = path
        .replace(&steps[target].wff, rhs)
        .expect("resolved path");
    step(wff, Justification::R1 { eq, target, path })
}

/// The rewrite that condition 3 exists to forbid: `x_i` replaced by `c`
/// under a binder of `x_i` while `x_i ~= c` is a hypothesis.
/// `x ~= witness` rewritten into A3 under its binder for `x`. Over `i` the
/// capture is harmless when there is a single individual, so the catalog
/// also carries the `o` version.
pub fn binder_capture_proof(ty: Type, witness: &str) -> Proof {
    let hyp = format!("x_{ty} ~= {witness}");
    let mut steps = vec![
        step(e(&hyp), Justification::Hyp(0)),
        axiom(AxiomInstance::A3 {
            alpha: ty.clone(),
            beta: ty,
        }),
    ];
    // the last occurrence sits in the equation [f x = g x]
    steps.push(r1(0, 1, &steps, |mut occ| occ.pop().expect("occurs")));
    from_hyps(&[hyp.as_str()], steps)
}

/// Kernel proofs, plain and from hypotheses.
pub fn proof_catalog() -> Vec<ProofCase> {
    let mut out = Vec::new();
    let mut push = |label: &str, proof: Proof| {
        out.push(ProofCase {
            label: label.to_string(),
            proof,
        })
    };

    push(
        "hypothesis",
        from_hyps(&["q"], vec![step(e("q"), Justification::Hyp(0))]),
    );

    let mut s = vec![
        step(e("p c"), Justification::Hyp(0)),
        step(e("c ~= d"), Justification::Hyp(1)),
    ];
    s.push(r1(1, 0, &s, |mut o| o.remove(0)));
    push("rewrite a hypothesis", from_hyps(&["p c", "c ~= d"], s));

    let mut s = vec![
        step(e("x_i ~= c"), Justification::Hyp(0)),
        step(e("p x_i"), Justification::Hyp(1)),
    ];
    s.push(r1(0, 1, &s, |mut o| o.remove(0)));
    push(
        "free occurrence of a hypothesis variable",
        from_hyps(&["x_i ~= c", "p x_i"], s),
    );

    let mut s = vec![
        step(e("x_i ~= c"), Justification::Hyp(0)),
        axiom(AxiomInstance::A7 {
            x: v("y", "i"),
            b: w("r x_i"),
        }),
    ];
    s.push(r1(0, 1, &s, |mut o| o.remove(0)));
    push(
        "rewrite under an unrelated binder",
        from_hyps(&["x_i ~= c"], s),
    );

    push("binder capture", binder_capture_proof(Type::Ind, "c"));
    push("binder capture at o", binder_capture_proof(Type::Bool, "T"));

    let s = vec![
        step(e("q"), Justification::Hyp(0)),
        step(e("q => p c"), Justification::Hyp(1)),
        step(e("p c"), Justification::R2 { minor: 0, major: 1 }),
    ];
    push(
        "modus ponens from hypotheses",
        from_hyps(&["q", "q => p c"], s),
    );

    let lemma = tactic_lemma1(&w("c"));
    let mut p = from_hyps(
        &["p x_i"],
        vec![step(
            lemma.conclusion.clone(),
            Justification::Theorem(lemma.main_section.len() - 1),
        )],
    );
    p.theorem_section = lemma.main_section;
    push("theorem import", p);

    let s = vec![
        axiom(AxiomInstance::A5 { x: v("x", "i") }),
        axiom(AxiomInstance::A4 {
            x: v("x", "i"),
            b: w("p x_i"),
            a: w("x_i"),
        }),
        step(
            e("[\\x_i. p x_i] x_i ~= p x_i"),
            Justification::R2 { minor: 0, major: 1 },
        ),
    ];
    push("A4 then R2", Proof::plain(s));

    for a in ["c", "bot_i", "\\x_i. r x_i", "I x_i. p x_i", "q /\\ p c"] {
        push(&format!("lemma 1 for {a}"), tactic_lemma1(&w(a)));
    }
    for a in ["p bot_i", "q", "x_o", "s p"] {
        push(
            &format!("definedness of {a}"),
            tactic_odefined(&w(a)).expect("type o"),
        );
    }
    out
}

pub fn standard_catalog() -> Catalog {
    Catalog {
        axioms: axiom_catalog(),
        rules: rule_catalog(),
        proofs: proof_catalog(),
    }
}

/// Per schema, how many catalog instances there are.
pub fn schema_counts(cases: &[AxiomCase]) -> Vec<(Schema, usize)> {
    Schema::ALL
        .iter()
        .map(|s| {
            (
                *s,
                cases.iter().filter(|c| c.instance.schema() == *s).count(),
            )
        })
        .collect()
}
