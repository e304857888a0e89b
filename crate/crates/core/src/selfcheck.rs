//! The acceptance battery: eight numbered checks over the kernel and the
//! semantics, each reporting pass/fail with a one-line detail.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::abbrev::{build as b, expand};
use crate::gen::{default_signature, propositional_formulas, random_model, WffGen};
use crate::kernel::Schema;
use crate::kernel::{check_proof, tactic_lemma1, tactic_odefined, KernelConfig, Mutation, Verdict};
use crate::par::{self, Exec};
use crate::semantics::{
    find_assignment, tautologous, Evaluator, Frame, Interpretations, Model, PartialValue, Value,
    DEFAULT_CAP,
};
use crate::soundness::{
    axiom_catalog, check_soundness_suite, proof_catalog, rule_catalog, schema_counts, Catalog,
    EntryKind, SoundnessReport, Status, SuiteConfig,
};
use crate::syntax::{parse_wff, print_wff, Const, Var, Wff};
use crate::types::Type;

#[derive(Debug, Clone)]
pub struct SelfcheckConfig {
    /// Numbers of individuals for the model sweeps.
    pub bases: Vec<usize>,
    pub cap: usize,
    /// Run the soundness checks against a deliberately broken kernel.
    pub mutation: Option<Mutation>,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SelfcheckConfig {
    fn default() -> SelfcheckConfig {
        SelfcheckConfig {
            bases: vec![1, 2],
            cap: DEFAULT_CAP,
            mutation: None,
            seed: 0x5eed,
            exec: Exec::default(),
        }
    }
}

impl SelfcheckConfig {
    fn suite(&self, mutation: Option<Mutation>) -> SuiteConfig {
        SuiteConfig {
            bases: self.bases.clone(),
            cap: self.cap,
            mutation,
            exec: self.exec,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "axiom validity sweep"),
    (2, "rule preservation"),
    (3, "type-o totality"),
    (4, "constructive tactics"),
    (5, "undefinedness semantics"),
    (6, "tautology oracle agreement"),
    (7, "parser round trip"),
    (8, "mutation sensitivity"),
];

pub fn run_selfcheck(config: &SelfcheckConfig) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, config))
        .collect()
}

pub fn run_criterion(id: u8, config: &SelfcheckConfig) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => axiom_sweep(config),
        2 => rule_preservation(config),
        3 => totality(config),
        4 => tactics(),
        5 => undefinedness(config),
        6 => tautology_agreement(config),
        7 => round_trip(config),
        8 => mutation_sensitivity(config),
        _ => (false, format!("no criterion {id}")),
    };
    let name = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map_or("unknown", |(_, n)| n);
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn first_failure(r: &SoundnessReport) -> String {
    match r.failures().next() {
        Some(e) => match &e.status {
            Status::Fail(cm) => format!("{} {}: counter-model {cm}", e.kind, e.label),
            Status::Error(msg) => format!("{} {}: {msg}", e.kind, e.label),
            _ => unreachable!("failures are Fail or Error"),
        },
        None => String::new(),
    }
}

const AXIOM_TIME_LIMIT: Duration = Duration::from_secs(60);

fn axiom_sweep(config: &SelfcheckConfig) -> (bool, String) {
    let start = Instant::now();
    let axioms = axiom_catalog();
    let thin: Vec<String> = schema_counts(&axioms)
        .into_iter()
        .filter(|(s, n)| *n < if *s == Schema::A1 { 1 } else { 3 })
        .map(|(s, n)| format!("{s} has {n}"))
        .collect();
    let catalog = Catalog {
        axioms,
        ..Catalog::default()
    };
    let report = check_soundness_suite(&catalog, &config.suite(config.mutation));
    let elapsed = start.elapsed();
    let models: u64 = report.entries.iter().map(|e| e.models).sum();
    let n = report.entries.len();
    if !thin.is_empty() {
        return (false, format!("catalog too thin: {}", thin.join(", ")));
    }
    if !report.passed() {
        let k = report.failures().count();
        return (
            false,
            format!(
                "{k} of {n} instances fail; first: {}",
                first_failure(&report)
            ),
        );
    }
    let within = elapsed <= AXIOM_TIME_LIMIT;
    (
        within,
        format!(
            "{n} instances valid in {models} instance-models (bases {:?}) in {:.1}s{}",
            config.bases,
            elapsed.as_secs_f64(),
            if within { "" } else { ", over the 60s budget" }
        ),
    )
}

fn rule_preservation(config: &SelfcheckConfig) -> (bool, String) {
    let catalog = Catalog {
        rules: rule_catalog(),
        proofs: proof_catalog(),
        ..Catalog::default()
    };
    let report = check_soundness_suite(&catalog, &config.suite(config.mutation));
    let tested = |k| report.count(k, |s| *s == Status::Pass);
    let (r1, r2) = (tested(EntryKind::R1), tested(EntryKind::R2));
    let proofs = tested(EntryKind::Proof);
    if !report.passed() {
        return (false, format!("first failure: {}", first_failure(&report)));
    }
    let enough = r1 >= 20 && r2 >= 20;
    (
        enough,
        format!(
            "{r1} R1 and {r2} R2 applications preserve validity (premises valid in some model); \
             {proofs} accepted proofs entail their conclusions"
        ),
    )
}

fn totality(config: &SelfcheckConfig) -> (bool, String) {
    const COUNT: usize = 500;
    let model = random_model(config.seed, 2, config.cap);
    let mut gen = WffGen::core(config.seed);
    let wffs: Vec<Wff> = (0..COUNT).map(|_| gen.wff(&Type::Bool, 5)).collect();
    let results = par::map(config.exec, wffs.len(), |i| {
        find_assignment(&model, &wffs[i], PartialValue::is_defined).map(|r| r.map(|(phi, _)| phi))
    });
    let mut assignments = 0usize;
    for (w, r) in wffs.iter().zip(results) {
        match r {
            Ok(None) => {
                assignments += w
                    .free_vars()
                    .iter()
                    .map(|x| model.frame().cardinality(x.ty()) as usize)
                    .product::<usize>()
            }
            Ok(Some(phi)) => {
                return (false, format!("{} undefined under {phi:?}", print_wff(w)));
            }
            Err(e) => return (false, format!("{}: {e}", print_wff(w))),
        }
    }
    (
        true,
        format!("{COUNT} core wffs defined under all {assignments} assignments"),
    )
}

/// Twenty wffs; the type-o ones also feed the definedness tactic.
pub fn tactic_catalog() -> Vec<Wff> {
    let sig = default_signature();
    [
        "c",
        "x_i",
        "bot_i",
        "r c",
        "r bot_i",
        "\\x_i. r x_i",
        "I x_i. p x_i",
        "p",
        "s",
        "bot_(oi)",
        "q",
        "x_o",
        "p c",
        "p bot_i",
        "s p",
        "c = d",
        "q /\\ p c",
        "forall x_i. p x_i",
        "def(bot_i)",
        "[\\x_i. p x_i] c",
    ]
    .iter()
    .map(|s| expand(&parse_wff(s, &sig).expect("static catalog")))
    .collect()
}

fn tactics() -> (bool, String) {
    let mut checked = 0;
    for a in tactic_catalog() {
        let mut proofs = vec![("lemma 1", tactic_lemma1(&a))];
        if a.ty().is_bool() {
            match tactic_odefined(&a) {
                Ok(p) => proofs.push(("definedness", p)),
                Err(e) => return (false, e.to_string()),
            }
        }
        for (name, p) in proofs {
            if let Verdict::Rejected { at, reason } = check_proof(&p, KernelConfig::kernel()) {
                let at = at.map(|a| a.to_string()).unwrap_or_default();
                return (
                    false,
                    format!("{name} for {}: {at}: {reason}", print_wff(&a)),
                );
            }
            checked += 1;
        }
    }
    (
        true,
        format!("{checked} tactic proofs accepted by the kernel"),
    )
}

fn undefinedness(config: &SelfcheckConfig) -> (bool, String) {
    let i = Type::Ind;
    let oi = Type::pred(i.clone());
    let bot = b::bottom(&i).expect("bot_i");
    let def_bot = b::defined(bot.clone());
    let undef_bot = b::undefined(bot.clone());
    let f = Var::new("f", oi.clone());
    let f_bot = Wff::app(Wff::var(f.clone()), bot.clone()).expect("typed");
    let sig = default_signature();
    // the individual, truth-value and predicate constants
    let constants: Vec<Const> = sig
        .constants()
        .filter(|c| c.ty().as_fun().is_none() || *c.ty() == oi)
        .collect();
    let mut models = 0u64;
    for &n in &config.bases {
        let frame = match Frame::with_size(n, config.cap) {
            Ok(f) => Arc::new(f),
            Err(e) => return (false, e.to_string()),
        };
        let interps = match Interpretations::new(frame.clone(), constants.clone()) {
            Ok(i) => i,
            Err(e) => return (false, e.to_string()),
        };
        for m in interps.iter() {
            models += 1;
            let mut ev = Evaluator::new(&m);
            let check = |ev: &mut Evaluator, w: &Wff, want: PartialValue| -> Result<(), String> {
                match ev.valuate(w) {
                    Ok(v) if v == want => Ok(()),
                    Ok(v) => Err(format!("{} is {v:?} at |D_i| = {n}", print_wff(w))),
                    Err(e) => Err(e.to_string()),
                }
            };
            let basic = check(&mut ev, &bot, PartialValue::Undefined)
                .and_then(|_| check(&mut ev, &def_bot, PartialValue::Defined(Value::F)))
                .and_then(|_| check(&mut ev, &undef_bot, PartialValue::Defined(Value::T)));
            if let Err(e) = basic {
                return (false, e);
            }
            let fs = frame.domain(&oi).expect("small");
            for g in fs.iter() {
                ev.set_bindings(std::slice::from_ref(&f), [g.clone()]);
                if let Err(e) = check(&mut ev, &f_bot, PartialValue::Defined(Value::F)) {
                    return (false, e);
                }
            }
        }
    }
    (
        true,
        format!("bot_i undefined, def/undef F/T, f bot_i F for every f, in {models} models"),
    )
}

/// Connective budget for the exhaustive propositional enumeration.
pub const TAUT_CONNECTIVES: usize = 4;

fn tautology_agreement(config: &SelfcheckConfig) -> (bool, String) {
    let o = Type::Bool;
    let atoms: Vec<Wff> = ["x", "y", "z"]
        .iter()
        .map(|n| Wff::var(Var::new(n, o.clone())))
        .collect();
    let mut family: Vec<Wff> = propositional_formulas(&atoms, TAUT_CONNECTIVES)
        .into_iter()
        .flatten()
        .collect();
    // constants as leaves, smaller budget
    let mut leaves = atoms[..2].to_vec();
    leaves.push(b::truth());
    leaves.push(b::falsity());
    let surface_tf = |w: &Wff| crate::abbrev::fold(w);
    let leaves: Vec<Wff> = leaves.iter().map(surface_tf).collect();
    family.extend(propositional_formulas(&leaves, 2).into_iter().flatten());

    let frame = match Frame::with_size(1, config.cap) {
        Ok(f) => Arc::new(f),
        Err(e) => return (false, e.to_string()),
    };
    let model = Model::new(frame);
    let results = par::map_init(
        config.exec,
        family.len(),
        || Evaluator::new(&model),
        |ev, k| {
            let w = &family[k];
            let oracle = tautologous(w);
            let valid = ev.counterexample(&expand(w)).map(|c| c.is_none());
            (oracle, valid)
        },
    );
    let mut tautologies = 0;
    for (w, (oracle, valid)) in family.iter().zip(results) {
        match valid {
            Ok(v) if v == oracle => tautologies += usize::from(v),
            Ok(v) => {
                return (
                    false,
                    format!("{}: oracle says {oracle}, model says {v}", print_wff(w)),
                )
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    (
        true,
        format!(
            "{} formulas (<= {TAUT_CONNECTIVES} connectives over 3 atoms, plus T/F leaves), {tautologies} tautologies, exact agreement",
            family.len()
        ),
    )
}

fn round_trip(config: &SelfcheckConfig) -> (bool, String) {
    const COUNT: usize = 500;
    let mut gen = WffGen::surface(config.seed ^ 0x9e37);
    let sig = gen.signature().clone();
    let universe = crate::gen::type_universe();
    for k in 0..COUNT {
        let ty = universe[k % universe.len()].clone();
        let w = gen.wff(&ty, 5);
        let text = print_wff(&w);
        match parse_wff(&text, &sig) {
            Ok(back) if back == w => {}
            Ok(back) => {
                return (false, format!("{text} reparsed as {}", print_wff(&back)));
            }
            Err(e) => return (false, format!("{text}: {e}")),
        }
    }
    (true, format!("{COUNT} generated wffs reparse identically"))
}

fn mutation_sensitivity(config: &SelfcheckConfig) -> (bool, String) {
    let a9 = Catalog {
        axioms: axiom_catalog(),
        ..Catalog::default()
    };
    let r1 = Catalog {
        proofs: proof_catalog(),
        ..Catalog::default()
    };
    let a9_report = check_soundness_suite(&a9, &config.suite(Some(Mutation::DropA9Negation)));
    let r1_report =
        check_soundness_suite(&r1, &config.suite(Some(Mutation::R1BinderRestrictionOff)));
    let (na9, nr1) = (a9_report.failures().count(), r1_report.failures().count());
    (
        na9 > 0 && nr1 > 0,
        format!(
            "A9 mutation: {}; R1 mutation: {}",
            failing(na9),
            failing(nr1)
        ),
    )
}

fn failing(n: usize) -> String {
    format!("{n} failing {}", if n == 1 { "entry" } else { "entries" })
}

/// Parses a `--mutate` argument.
pub fn parse_mutation(s: &str) -> Option<Mutation> {
    match s {
        "A9" | "a9" => Some(Mutation::DropA9Negation),
        "R1" | "r1" => Some(Mutation::R1BinderRestrictionOff),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tactic_catalog_has_twenty() {
        let c = tactic_catalog();
        assert_eq!(c.len(), 20);
        assert!(c.iter().filter(|w| w.ty().is_bool()).count() >= 8);
    }

    #[test]
    fn quick_criteria_pass() {
        let cfg = SelfcheckConfig::default();
        for id in [4, 5, 7] {
            let r = run_criterion(id, &cfg);
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn mutation_names() {
        assert_eq!(parse_mutation("A9"), Some(Mutation::DropA9Negation));
        assert_eq!(parse_mutation("R1"), Some(Mutation::R1BinderRestrictionOff));
        assert_eq!(parse_mutation("A3"), None);
    }
}
