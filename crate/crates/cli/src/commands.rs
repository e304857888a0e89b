//! The subcommands. Each returns the text for stdout together with the
//! machine report; errors map to exit code 2 in `main`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use qu0_core::abbrev::{expand, fold};
use qu0_core::kernel::{
    check_proof, tactic_lemma1, tactic_odefined, KernelConfig, Proof, Section, StepRef, Verdict,
};
use qu0_core::selfcheck::{parse_mutation, run_criterion, SelfcheckConfig, CRITERIA};
use qu0_core::semantics::{
    sweep_validity, valuate, Assignment, PartialValue, SweepOutcome, DEFAULT_CAP,
};
use qu0_core::syntax::{parse_wff_lenient, print_wff, Signature, Wff};

use crate::error::CliError;
use crate::model::{describe_constants, ModelFile};
use crate::report::{
    Binding, CounterModelReport, CriterionReport, EvalReport, Location, ProofReport, Report,
    TacticReport, TrustedReport, ValidityReport,
};
use crate::script::{parse_script, render_script, ScriptProof};

#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub report: Report,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The signature declared by an optional script.
fn script_signature(script: Option<&Path>) -> Result<Signature, CliError> {
    match script {
        Some(p) => Ok(parse_script(&read(p)?)?.signature),
        None => Ok(Signature::new()),
    }
}

fn parse_wff(text: &str, sig: &mut Signature) -> Result<Wff, CliError> {
    parse_wff_lenient(text, sig).map_err(|source| CliError::Wff {
        text: text.to_string(),
        source,
    })
}

fn show(w: &Wff) -> String {
    print_wff(&fold(&expand(w)))
}

// ---- check ----

fn section_name(s: Section) -> &'static str {
    match s {
        Section::Theorem => "theorem",
        Section::Main => "main",
    }
}

/// Where a step reference points in the script. Theorem-section steps
/// are reported at the imported proof's line.
fn locate(file: &str, sp: &ScriptProof, all: &[ScriptProof], at: StepRef) -> Location {
    let mut loc = Location {
        file: Some(file.to_string()),
        proof: Some(sp.label.clone()),
        step: Some(at.index + 1),
        section: Some(section_name(at.section)),
        line: None,
    };
    match at.section {
        Section::Main => loc.line = sp.step_lines.get(at.index).copied(),
        Section::Theorem => {
            if let Some(imp) = sp
                .imports
                .iter()
                .find(|i| (i.offset..i.offset + i.len).contains(&at.index))
            {
                if let Some(src) = all.iter().find(|p| p.label == imp.label) {
                    loc.line = src.step_lines.get(at.index - imp.offset).copied();
                }
            }
        }
    }
    loc
}

pub fn run_check(path: &Path, extended: bool) -> Result<Outcome, CliError> {
    let file = path.display().to_string();
    let script = parse_script(&read(path)?)?;
    let config = if extended {
        KernelConfig::extended()
    } else {
        KernelConfig::kernel()
    };
    let mut report = Report::new("check");
    let mut text = String::new();
    let mut proofs = Vec::new();
    for sp in &script.proofs {
        let verdict = check_proof(&sp.proof, config);
        let mut pr = ProofReport {
            label: sp.label.clone(),
            line: sp.line,
            accepted: verdict.is_accepted(),
            trusted: Vec::new(),
        };
        match verdict {
            Verdict::Accepted { trusted } => {
                let _ = writeln!(text, "proof {}: accepted", sp.label);
                for t in trusted {
                    let note = t
                        .note
                        .as_deref()
                        .map(|n| format!(" ({n})"))
                        .unwrap_or_default();
                    let _ = writeln!(text, "  trusted {} at {}{note}", t.rule, t.at);
                    pr.trusted.push(TrustedReport {
                        section: section_name(t.at.section),
                        step: t.at.index + 1,
                        rule: t.rule,
                        note: t.note,
                    });
                }
            }
            Verdict::Rejected { at, reason } => {
                let loc = match at {
                    Some(at) => locate(&file, sp, &script.proofs, at),
                    None => Location {
                        file: Some(file.clone()),
                        line: Some(sp.line),
                        proof: Some(sp.label.clone()),
                        ..Location::default()
                    },
                };
                let place = match (at, loc.line) {
                    (Some(at), Some(line)) => format!(" at {at} (line {line})"),
                    (Some(at), None) => format!(" at {at}"),
                    (None, _) => String::new(),
                };
                let _ = writeln!(text, "proof {}: rejected{place}: {reason}", sp.label);
                report.fail(loc, format!("proof {}: {reason}", sp.label));
            }
        }
        proofs.push(pr);
    }
    let accepted = proofs.iter().filter(|p| p.accepted).count();
    let _ = writeln!(text, "{accepted} of {} proofs accepted", proofs.len());
    report.proofs = Some(proofs);
    Ok(Outcome { text, report })
}

// ---- eval ----

pub fn run_eval(
    model_path: &Path,
    wff_text: &str,
    script: Option<&Path>,
    cap: Option<usize>,
) -> Result<Outcome, CliError> {
    let mf = ModelFile::from_json(&read(model_path)?)?;
    let mut sig = script_signature(script)?;
    mf.declare_types(&mut sig)?;
    let w = parse_wff(wff_text, &mut sig)?;
    if let Some(x) = w.free_vars().first() {
        return Err(CliError::Usage(format!(
            "eval needs a closed wff; {x} is free"
        )));
    }
    let model = mf.build(&sig, cap)?;
    let core = expand(&w);
    let v = valuate(&model, &Assignment::new(), &core)?;
    let (line, value) = match &v {
        PartialValue::Defined(d) if w.ty().is_bool() => {
            let s = model.frame().display(d, w.ty());
            (s.clone(), Some(s))
        }
        PartialValue::Defined(d) => {
            let s = model.frame().display(d, w.ty());
            (format!("defined: {s}"), Some(s))
        }
        PartialValue::Undefined => ("undefined".to_string(), None),
    };
    let mut report = Report::new("eval");
    report.eval = Some(EvalReport {
        wff: show(&w),
        ty: w.ty().to_string(),
        defined: v.is_defined(),
        value,
    });
    Ok(Outcome {
        text: line + "\n",
        report,
    })
}

// ---- validity ----

pub fn run_validity(
    wff_text: &str,
    max_base: usize,
    script: Option<&Path>,
    cap: Option<usize>,
) -> Result<Outcome, CliError> {
    if max_base == 0 {
        return Err(CliError::Usage("--max-base must be at least 1".into()));
    }
    let mut sig = script_signature(script)?;
    let w = parse_wff(wff_text, &mut sig)?;
    let core = expand(&w);
    let outcome = sweep_validity(&core, max_base, cap.unwrap_or(DEFAULT_CAP))?;
    let mut report = Report::new("validity");
    let mut v = ValidityReport {
        wff: show(&w),
        max_base,
        valid: true,
        counter_model: None,
    };
    let text = match outcome {
        SweepOutcome::ValidUpTo(n) => {
            format!("valid in every standard model with 1 to {n} individuals\n")
        }
        SweepOutcome::CounterModel(cm) => {
            let frame = cm.model.frame();
            let constants: Vec<Binding> = describe_constants(&cm.model)
                .into_iter()
                .map(|(c, value)| Binding {
                    name: c.name().to_string(),
                    ty: c.ty().to_string(),
                    value,
                })
                .collect();
            let assignment: Vec<Binding> = cm
                .assignment
                .iter()
                .map(|(x, d)| Binding {
                    name: x.to_string(),
                    ty: x.ty().to_string(),
                    value: frame.display(d, x.ty()),
                })
                .collect();
            let mut t = format!(
                "counter-model with {} individual(s) {{{}}}\n",
                frame.base_size(),
                frame.labels().join(", ")
            );
            for b in &constants {
                let _ = writeln!(t, "  {}_{} = {}", b.name, annotate(&b.ty), b.value);
            }
            for b in &assignment {
                let _ = writeln!(t, "  {} = {}", b.name, b.value);
            }
            report.fail(
                Location::default(),
                format!("counter-model with {} individual(s)", frame.base_size()),
            );
            v.valid = false;
            v.counter_model = Some(CounterModelReport {
                base: frame.labels().to_vec(),
                constants,
                assignment,
            });
            t
        }
    };
    report.validity = Some(v);
    Ok(Outcome { text, report })
}

fn annotate(ty: &str) -> String {
    if ty.len() == 1 {
        ty.to_string()
    } else {
        format!("({ty})")
    }
}

// ---- selfcheck ----

#[derive(Debug, Clone, Default)]
pub struct SelfcheckArgs {
    pub mutate: Option<String>,
    pub iota_base: Option<usize>,
    pub cap: Option<usize>,
    /// Criterion ids to run; all when empty.
    pub only: Vec<u8>,
}

pub fn run_selfcheck(args: &SelfcheckArgs) -> Result<Outcome, CliError> {
    let mut config = SelfcheckConfig::default();
    if let Some(m) = &args.mutate {
        config.mutation = Some(
            parse_mutation(m)
                .ok_or_else(|| CliError::Usage(format!("unknown mutation {m:?}; use A9 or R1")))?,
        );
    }
    if let Some(n) = args.iota_base {
        if n == 0 {
            return Err(CliError::Usage("--iota-base must be at least 1".into()));
        }
        config.bases = vec![n];
    }
    if let Some(c) = args.cap {
        config.cap = c;
    }
    let ids: Vec<u8> = if args.only.is_empty() {
        CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        for id in &args.only {
            if !CRITERIA.iter().any(|(k, _)| k == id) {
                return Err(CliError::Usage(format!("no criterion {id}")));
            }
        }
        args.only.clone()
    };
    let start = Instant::now();
    let mut report = Report::new("selfcheck");
    let mut text = String::new();
    let mut rows = Vec::new();
    for id in ids {
        let r = run_criterion(id, &config);
        let secs = r.elapsed.as_secs_f64();
        let mark = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "{mark} [{}] {:<28} {secs:>6.1}s  {}",
            r.id, r.name, r.detail
        );
        if !r.passed {
            report.fail(
                Location::default(),
                format!("criterion {} ({}): {}", r.id, r.name, r.detail),
            );
        }
        rows.push(CriterionReport {
            id: r.id,
            name: r.name,
            passed: r.passed,
            detail: r.detail,
            seconds: secs,
        });
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(
        text,
        "{passed} of {} criteria passed in {:.1}s",
        rows.len(),
        start.elapsed().as_secs_f64()
    );
    report.criteria = Some(rows);
    Ok(Outcome { text, report })
}

// ---- tactic ----

pub fn run_tactic(
    tactic: &str,
    wff_text: &str,
    script: Option<&Path>,
    emit: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut sig = script_signature(script)?;
    let w = parse_wff(wff_text, &mut sig)?;
    let proof: Proof = match tactic {
        "lemma1" => tactic_lemma1(&w),
        "odefined" => tactic_odefined(&w).map_err(|e| CliError::Usage(e.to_string()))?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown tactic {other:?}; use lemma1 or odefined"
            )))
        }
    };
    let verdict = check_proof(&proof, KernelConfig::kernel());
    let rendered = render_script(tactic, &[(tactic.to_string(), proof.clone())]);
    let mut report = Report::new("tactic");
    let mut text = String::new();
    match emit {
        Some(p) => fs::write(p, &rendered).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        })?,
        None => text.push_str(&rendered),
    }
    match &verdict {
        Verdict::Accepted { .. } => {
            let _ = writeln!(text, "# kernel check: accepted");
        }
        Verdict::Rejected { reason, .. } => {
            let _ = writeln!(text, "# kernel check: rejected: {reason}");
            report.fail(
                Location::default(),
                format!("tactic proof rejected: {reason}"),
            );
        }
    }
    report.tactic = Some(TacticReport {
        tactic: tactic.to_string(),
        wff: show(&w),
        steps: proof.len(),
        accepted: verdict.is_accepted(),
    });
    Ok(Outcome { text, report })
}
