//! The line-oriented proof-script format.
//!
//! ```text
//! theory demo
//! const c : i
//! proof refl : "c ~= c"
//! 1. "def(x_i)"  axiom A5 {x := x_i}
//! ...
//! qed 5
//! ```
//!
//! Step numbers and step references are 1-based. `thm L.k` imports step
//! `k` of the earlier plain proof `L` into the theorem section.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use qu0_core::abbrev::fold;
use qu0_core::kernel::{
    AxiomInstance, Derived, Justification, OccurrencePath, Proof, Schema, Step,
};
use qu0_core::syntax::{parse_type, parse_wff, print_wff, Const, Signature, Type, Var, Wff};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Script {
    pub theory: Option<String>,
    pub signature: Signature,
    pub proofs: Vec<ScriptProof>,
}

impl Script {
    pub fn proof(&self, label: &str) -> Option<&ScriptProof> {
        self.proofs.iter().find(|p| p.label == label)
    }
}

/// A theorem-section block copied from an earlier proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub label: String,
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct ScriptProof {
    pub label: String,
    pub line: usize,
    pub proof: Proof,
    /// Source line of each main-section step.
    pub step_lines: Vec<usize>,
    pub imports: Vec<Import>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Semi,
    Colon,
    Assign,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Word(w)) => format!("{w:?}"),
        Some(Tok::Str(s)) => format!("\"{s}\""),
        Some(Tok::LBrace) => "'{'".into(),
        Some(Tok::RBrace) => "'}'".into(),
        Some(Tok::LBrack) => "'['".into(),
        Some(Tok::RBrack) => "']'".into(),
        Some(Tok::Semi) => "';'".into(),
        Some(Tok::Colon) => "':'".into(),
        Some(Tok::Assign) => "':='".into(),
    }
}

fn lex(line: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '#' => break,
            c if c.is_whitespace() => {}
            '"' => {
                let start = i + 1;
                let end = loop {
                    match chars.next() {
                        Some((j, '"')) => break j,
                        Some(_) => {}
                        None => return Err("unterminated string".into()),
                    }
                };
                out.push(Tok::Str(line[start..end].to_string()));
            }
            '{' => out.push(Tok::LBrace),
            '}' => out.push(Tok::RBrace),
            '[' => out.push(Tok::LBrack),
            ']' => out.push(Tok::RBrack),
            ';' => out.push(Tok::Semi),
            ':' => {
                if chars.peek().map(|&(_, c)| c) == Some('=') {
                    chars.next();
                    out.push(Tok::Assign);
                } else {
                    out.push(Tok::Colon);
                }
            }
            _ => {
                let mut end = line.len();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_whitespace() || "{}[];:\"#".contains(d) {
                        end = j;
                        break;
                    }
                    chars.next();
                }
                out.push(Tok::Word(line[i..end].to_string()));
            }
        }
    }
    Ok(out)
}

struct Line<'s> {
    no: usize,
    toks: Vec<Tok>,
    pos: usize,
    sig: &'s Signature,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::script(self.no, msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn unexpected(&self, wanted: &str) -> CliError {
        self.err(format!(
            "expected {wanted}, found {}",
            describe(self.toks.get(self.pos))
        ))
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), CliError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn word(&mut self, wanted: &str) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), CliError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("'{kw}'"))),
        }
    }

    fn string(&mut self, wanted: &str) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// A quoted wff, or a single unquoted token.
    fn wff(&mut self) -> Result<Wff, CliError> {
        let text = match self.peek() {
            Some(Tok::Str(s) | Tok::Word(s)) => s.clone(),
            _ => return Err(self.unexpected("a wff")),
        };
        self.pos += 1;
        self.parse_wff(&text)
    }

    fn parse_wff(&self, text: &str) -> Result<Wff, CliError> {
        parse_wff(text, self.sig).map_err(|e| self.err(format!("wff {text:?} {e}")))
    }

    fn var(&mut self) -> Result<Var, CliError> {
        let w = self.wff()?;
        w.as_var()
            .cloned()
            .ok_or_else(|| self.err(format!("{} is not a variable", print_wff(&w))))
    }

    fn number(&mut self, wanted: &str) -> Result<usize, CliError> {
        let w = self.word(wanted)?;
        parse_index(&w)
            .ok_or_else(|| self.err(format!("{wanted} must be a positive number, found {w:?}")))
    }

    fn step_ref(&mut self) -> Result<usize, CliError> {
        Ok(self.number("a step number")? - 1)
    }

    fn path(&mut self) -> Result<OccurrencePath, CliError> {
        self.keyword("at")?;
        let w = self.word("an occurrence path")?;
        w.parse().map_err(|e: String| self.err(e))
    }

    fn end(&self) -> Result<(), CliError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            t => Err(self.err(format!("unexpected {} at end of line", describe(t)))),
        }
    }
}

fn parse_index(s: &str) -> Option<usize> {
    s.parse().ok().filter(|&n| n >= 1)
}

struct Open {
    label: String,
    line: usize,
    hypotheses: Vec<Wff>,
    conclusion: Wff,
    steps: Vec<Step>,
    step_lines: Vec<usize>,
    theorem: Vec<Step>,
    imports: Vec<Import>,
}

pub fn parse_script(text: &str) -> Result<Script, CliError> {
    let mut script = Script {
        theory: None,
        signature: Signature::new(),
        proofs: Vec::new(),
    };
    let mut open: Option<Open> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks = lex(raw).map_err(|m| CliError::script(no, m))?;
        if toks.is_empty() {
            continue;
        }
        let mut l = Line {
            no,
            toks,
            pos: 0,
            sig: &script.signature,
        };
        let head = l.word("a declaration, proof or step")?;
        match open.as_mut() {
            None => match head.as_str() {
                "theory" => {
                    let name = l.word("a theory name")?;
                    l.end()?;
                    if script.theory.replace(name).is_some() {
                        return Err(l.err("theory declared twice"));
                    }
                }
                "const" => {
                    let name = l.word("a constant name")?;
                    l.expect(Tok::Colon, "':'")?;
                    let ty_text = l.word("a type")?;
                    l.end()?;
                    let ty = parse_type(&ty_text)
                        .map_err(|e| l.err(format!("type {ty_text:?}: {e}")))?;
                    script
                        .signature
                        .declare(&name, ty)
                        .map_err(|e| CliError::script(no, e.to_string()))?;
                }
                "proof" => {
                    let header = proof_header(&mut l)?;
                    if script.proof(&header.label).is_some() {
                        return Err(l.err(format!("proof {:?} defined twice", header.label)));
                    }
                    open = Some(header);
                }
                other => return Err(l.err(format!("unknown declaration {other:?}"))),
            },
            Some(p) => {
                if head == "qed" {
                    let n = l.number("the last step number")?;
                    l.end()?;
                    if n != p.steps.len() {
                        return Err(l.err(format!(
                            "qed {n}, but the proof has {} steps",
                            p.steps.len()
                        )));
                    }
                    let p = open.take().expect("open proof");
                    script.proofs.push(close(p));
                    continue;
                }
                let expected = p.steps.len() + 1;
                match head.strip_suffix('.').and_then(parse_index) {
                    Some(n) if n == expected => {}
                    _ => {
                        return Err(
                            l.err(format!("expected step {expected}. or qed, found {head:?}"))
                        )
                    }
                }
                let wff = l.string("the step's wff in quotes")?;
                let wff = l.parse_wff(&wff)?;
                let just = justification(&mut l, p, &script.proofs)?;
                l.end()?;
                p.steps.push(Step::new(wff, just));
                p.step_lines.push(no);
            }
        }
    }
    if let Some(p) = open {
        return Err(CliError::script(
            p.line,
            format!("proof {:?} has no qed", p.label),
        ));
    }
    Ok(script)
}

fn proof_header(l: &mut Line<'_>) -> Result<Open, CliError> {
    let label = l.word("a proof label")?;
    let mut hypotheses = Vec::new();
    if l.peek() == Some(&Tok::LBrack) {
        l.pos += 1;
        l.keyword("hyps")?;
        l.expect(Tok::Colon, "':'")?;
        loop {
            let h = l.string("a hypothesis in quotes")?;
            hypotheses.push(l.parse_wff(&h)?);
            match l.next() {
                Some(Tok::Semi) => {}
                Some(Tok::RBrack) => break,
                _ => {
                    l.pos -= 1;
                    return Err(l.unexpected("';' or ']'"));
                }
            }
        }
    }
    l.expect(Tok::Colon, "':'")?;
    let c = l.string("the conclusion in quotes")?;
    let conclusion = l.parse_wff(&c)?;
    l.end()?;
    Ok(Open {
        label,
        line: l.no,
        hypotheses,
        conclusion,
        steps: Vec::new(),
        step_lines: Vec::new(),
        theorem: Vec::new(),
        imports: Vec::new(),
    })
}

fn close(p: Open) -> ScriptProof {
    ScriptProof {
        label: p.label,
        line: p.line,
        proof: Proof {
            theorem_section: p.theorem,
            main_section: p.steps,
            hypotheses: p.hypotheses,
            conclusion: p.conclusion,
        },
        step_lines: p.step_lines,
        imports: p.imports,
    }
}

fn justification(
    l: &mut Line<'_>,
    p: &mut Open,
    done: &[ScriptProof],
) -> Result<Justification, CliError> {
    let kind = l.word("a justification")?;
    Ok(match kind.as_str() {
        "axiom" => Justification::Axiom(axiom(l)?),
        "hyp" => Justification::Hyp(l.number("a hypothesis number")? - 1),
        "thm" => {
            let r = l.word("<label>.<step>")?;
            let (label, k) = r
                .rsplit_once('.')
                .and_then(|(a, k)| Some((a, parse_index(k)?)))
                .ok_or_else(|| l.err(format!("expected <label>.<step>, found {r:?}")))?;
            Justification::Theorem(import(l, p, done, label, k)?)
        }
        "R1" => Justification::R1 {
            eq: l.step_ref()?,
            target: l.step_ref()?,
            path: l.path()?,
        },
        "R2" => Justification::R2 {
            minor: l.step_ref()?,
            major: l.step_ref()?,
        },
        "derived" => Justification::Derived(derived(l, done)?),
        other => return Err(l.err(format!("unknown justification {other:?}"))),
    })
}

/// Index in the theorem section of step `k` of proof `label`, copying
/// that proof's steps in on first use.
fn import(
    l: &Line<'_>,
    p: &mut Open,
    done: &[ScriptProof],
    label: &str,
    k: usize,
) -> Result<usize, CliError> {
    let src = done
        .iter()
        .find(|q| q.label == label)
        .ok_or_else(|| l.err(format!("no earlier proof {label:?}")))?;
    if !src.proof.hypotheses.is_empty() || !src.proof.theorem_section.is_empty() {
        return Err(l.err(format!(
            "proof {label:?} has hypotheses or imports; only plain proofs can be imported"
        )));
    }
    let steps = &src.proof.main_section;
    if k > steps.len() {
        return Err(l.err(format!("proof {label:?} has only {} steps", steps.len())));
    }
    let offset = match p.imports.iter().find(|i| i.label == label) {
        Some(i) => i.offset,
        None => {
            let offset = p.theorem.len();
            p.theorem.extend(steps.iter().map(|s| shift(s, offset)));
            p.imports.push(Import {
                label: label.to_string(),
                offset,
                len: steps.len(),
            });
            offset
        }
    };
    Ok(offset + k - 1)
}

/// The step with every premise index moved up by `by`.
fn shift(s: &Step, by: usize) -> Step {
    let just = match &s.just {
        Justification::R1 { eq, target, path } => Justification::R1 {
            eq: eq + by,
            target: target + by,
            path: path.clone(),
        },
        Justification::R2 { minor, major } => Justification::R2 {
            minor: minor + by,
            major: major + by,
        },
        Justification::Derived(d) => Justification::Derived(match d {
            Derived::R1Prime { eq, target, path } => Derived::R1Prime {
                eq: eq + by,
                target: target + by,
                path: path.clone(),
            },
            Derived::R2Prime { minor, major } => Derived::R2Prime {
                minor: minor + by,
                major: major + by,
            },
            Derived::Beta {
                defined,
                target,
                path,
            } => Derived::Beta {
                defined: defined + by,
                target: target + by,
                path: path.clone(),
            },
            Derived::UnivInst {
                defined,
                forall,
                term,
            } => Derived::UnivInst {
                defined: defined + by,
                forall: forall + by,
                term: term.clone(),
            },
            Derived::UnivGen { premise, var } => Derived::UnivGen {
                premise: premise + by,
                var: var.clone(),
            },
            Derived::Taut { premises } => Derived::Taut {
                premises: premises.iter().map(|k| k + by).collect(),
            },
            Derived::Deduction { .. } => d.clone(),
        }),
        other => other.clone(),
    };
    Step::new(s.wff.clone(), just)
}

fn derived(l: &mut Line<'_>, done: &[ScriptProof]) -> Result<Derived, CliError> {
    let rule = l.word("a derived rule")?;
    Ok(match rule.as_str() {
        "R1'" => Derived::R1Prime {
            eq: l.step_ref()?,
            target: l.step_ref()?,
            path: l.path()?,
        },
        "R2'" => Derived::R2Prime {
            minor: l.step_ref()?,
            major: l.step_ref()?,
        },
        "beta" => Derived::Beta {
            defined: l.step_ref()?,
            target: l.step_ref()?,
            path: l.path()?,
        },
        "uinst" => {
            let defined = l.step_ref()?;
            let forall = l.step_ref()?;
            l.keyword("with")?;
            Derived::UnivInst {
                defined,
                forall,
                term: l.wff()?,
            }
        }
        "ugen" => Derived::UnivGen {
            premise: l.step_ref()?,
            var: l.var()?,
        },
        "taut" => {
            let mut premises = Vec::new();
            while l.peek().is_some() {
                premises.push(l.step_ref()?);
            }
            Derived::Taut { premises }
        }
        "deduction" => {
            let label = l.word("a sub-proof label")?;
            let sub = done
                .iter()
                .find(|q| q.label == label)
                .ok_or_else(|| l.err(format!("no earlier proof {label:?}")))?;
            Derived::Deduction {
                subproof: Arc::new(sub.proof.clone()),
                hypothesis: l.wff()?,
            }
        }
        other => return Err(l.err(format!("unknown derived rule {other:?}"))),
    })
}

fn axiom(l: &mut Line<'_>) -> Result<AxiomInstance, CliError> {
    let name = l.word("an axiom schema A1..A13")?;
    let schema =
        Schema::parse(&name).ok_or_else(|| l.err(format!("unknown axiom schema {name:?}")))?;
    let mut params: HashMap<String, (usize, Tok)> = HashMap::new();
    if l.peek() == Some(&Tok::LBrace) {
        l.pos += 1;
        while l.peek() != Some(&Tok::RBrace) {
            let key = l.word("a parameter name")?;
            l.expect(Tok::Assign, "':='")?;
            let at = l.pos;
            match l.next() {
                Some(v @ (Tok::Word(_) | Tok::Str(_))) => {
                    if params.insert(key.clone(), (at, v)).is_some() {
                        return Err(l.err(format!("parameter {key} given twice")));
                    }
                }
                _ => {
                    l.pos -= 1;
                    return Err(l.unexpected("a parameter value"));
                }
            }
            match l.peek() {
                Some(Tok::Semi) => l.pos += 1,
                Some(Tok::RBrace) => {}
                _ => return Err(l.unexpected("';' or '}'")),
            }
        }
        l.pos += 1;
    }
    let wanted: &[&str] = match schema {
        Schema::A1 => &[],
        Schema::A2 => &["alpha"],
        Schema::A3 => &["alpha", "beta"],
        Schema::A4 => &["x", "B", "A"],
        Schema::A5 => &["x"],
        Schema::A6 => &["c"],
        Schema::A7 => &["x", "B"],
        Schema::A8 | Schema::A9 | Schema::A10 | Schema::A11 => &["A", "B"],
        Schema::A12 | Schema::A13 => &["x", "A"],
    };
    let mut keys: BTreeSet<&str> = params.keys().map(String::as_str).collect();
    for w in wanted {
        if !keys.remove(w) {
            return Err(l.err(format!("{schema} needs parameter {w}")));
        }
    }
    if let Some(extra) = keys.into_iter().next() {
        return Err(l.err(format!("{schema} has no parameter {extra}")));
    }
    let text = |k: &str| match &params[k].1 {
        Tok::Word(s) | Tok::Str(s) => s.clone(),
        _ => unreachable!("checked above"),
    };
    let ty = |k: &str| -> Result<Type, CliError> {
        let t = text(k);
        parse_type(&t).map_err(|e| l.err(format!("type {t:?}: {e}")))
    };
    let wff = |k: &str| l.parse_wff(&text(k));
    let var = |k: &str| -> Result<Var, CliError> {
        let w = wff(k)?;
        w.as_var().cloned().ok_or_else(|| {
            l.err(format!(
                "parameter {k} must be a variable, found {}",
                print_wff(&w)
            ))
        })
    };
    Ok(match schema {
        Schema::A1 => AxiomInstance::A1,
        Schema::A2 => AxiomInstance::A2 {
            alpha: ty("alpha")?,
        },
        Schema::A3 => AxiomInstance::A3 {
            alpha: ty("alpha")?,
            beta: ty("beta")?,
        },
        Schema::A4 => AxiomInstance::A4 {
            x: var("x")?,
            b: wff("B")?,
            a: wff("A")?,
        },
        Schema::A5 => AxiomInstance::A5 { x: var("x")? },
        Schema::A6 => AxiomInstance::A6 { c: wff("c")? },
        Schema::A7 => AxiomInstance::A7 {
            x: var("x")?,
            b: wff("B")?,
        },
        Schema::A8 => AxiomInstance::A8 {
            a: wff("A")?,
            b: wff("B")?,
        },
        Schema::A9 => AxiomInstance::A9 {
            a: wff("A")?,
            b: wff("B")?,
        },
        Schema::A10 => AxiomInstance::A10 {
            a: wff("A")?,
            b: wff("B")?,
        },
        Schema::A11 => AxiomInstance::A11 {
            a: wff("A")?,
            b: wff("B")?,
        },
        Schema::A12 => AxiomInstance::A12 {
            x: var("x")?,
            a: wff("A")?,
        },
        Schema::A13 => AxiomInstance::A13 {
            x: var("x")?,
            a: wff("A")?,
        },
    })
}

// ---- printing ----

fn show(w: &Wff) -> String {
    print_wff(&fold(w))
}

fn quoted(w: &Wff) -> String {
    format!("\"{}\"", show(w))
}

fn axiom_text(inst: &AxiomInstance) -> String {
    let var = |x: &Var| print_wff(&Wff::var(x.clone()));
    let params: Vec<String> = match inst {
        AxiomInstance::A1 => vec![],
        AxiomInstance::A2 { alpha } => vec![format!("alpha := {alpha}")],
        AxiomInstance::A3 { alpha, beta } => {
            vec![format!("alpha := {alpha}"), format!("beta := {beta}")]
        }
        AxiomInstance::A4 { x, b, a } => vec![
            format!("x := {}", var(x)),
            format!("B := {}", quoted(b)),
            format!("A := {}", quoted(a)),
        ],
        AxiomInstance::A5 { x } => vec![format!("x := {}", var(x))],
        AxiomInstance::A6 { c } => vec![format!("c := {}", quoted(c))],
        AxiomInstance::A7 { x, b } => {
            vec![format!("x := {}", var(x)), format!("B := {}", quoted(b))]
        }
        AxiomInstance::A8 { a, b }
        | AxiomInstance::A9 { a, b }
        | AxiomInstance::A10 { a, b }
        | AxiomInstance::A11 { a, b } => {
            vec![format!("A := {}", quoted(a)), format!("B := {}", quoted(b))]
        }
        AxiomInstance::A12 { x, a } | AxiomInstance::A13 { x, a } => {
            vec![format!("x := {}", var(x)), format!("A := {}", quoted(a))]
        }
    };
    if params.is_empty() {
        format!("axiom {}", inst.schema())
    } else {
        format!("axiom {} {{{}}}", inst.schema(), params.join("; "))
    }
}

fn collect_constants(p: &Proof, out: &mut BTreeSet<Const>) {
    let steps = p.theorem_section.iter().chain(&p.main_section);
    for w in steps
        .map(|s| &s.wff)
        .chain(&p.hypotheses)
        .chain([&p.conclusion])
    {
        out.extend(w.nonlogical_constants());
    }
    for s in p.theorem_section.iter().chain(&p.main_section) {
        if let Justification::Derived(d) = &s.just {
            match d {
                Derived::UnivInst { term, .. } => out.extend(term.nonlogical_constants()),
                Derived::Deduction {
                    subproof,
                    hypothesis,
                } => {
                    out.extend(hypothesis.nonlogical_constants());
                    collect_constants(subproof, out);
                }
                _ => {}
            }
        }
    }
}

/// Renders proofs as a script that [`parse_script`] reads back into the
/// same proofs. Theorem sections and deduction sub-proofs become separate
/// auxiliary proofs.
pub fn render_script(theory: &str, proofs: &[(String, Proof)]) -> String {
    let mut consts = BTreeSet::new();
    for (_, p) in proofs {
        collect_constants(p, &mut consts);
    }
    let mut out = format!("theory {theory}\n");
    for c in &consts {
        let _ = writeln!(out, "const {} : {}", c.name(), c.ty());
    }
    let mut used = BTreeSet::new();
    for (label, p) in proofs {
        render_proof(label, p, &mut out, &mut used);
    }
    out
}

fn fresh_label(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut label = base.to_string();
    let mut n = 1;
    while used.contains(&label) {
        n += 1;
        label = format!("{base}{n}");
    }
    used.insert(label.clone());
    label
}

fn render_proof(label: &str, p: &Proof, out: &mut String, used: &mut BTreeSet<String>) -> String {
    // auxiliary proofs first, so the references resolve
    let thm_label = (!p.theorem_section.is_empty()).then(|| {
        let steps = p.theorem_section.clone();
        let aux = Proof {
            theorem_section: Vec::new(),
            conclusion: steps.last().expect("nonempty").wff.clone(),
            main_section: steps,
            hypotheses: Vec::new(),
        };
        render_proof(&format!("{label}_theorems"), &aux, out, used)
    });
    let mut subs = HashMap::new();
    for (i, s) in p.main_section.iter().enumerate() {
        if let Justification::Derived(Derived::Deduction { subproof, .. }) = &s.just {
            let l = render_proof(&format!("{label}_sub"), subproof, out, used);
            subs.insert(i, l);
        }
    }
    let label = fresh_label(label, used);
    let _ = write!(out, "\nproof {label}");
    if !p.hypotheses.is_empty() {
        let hs: Vec<String> = p.hypotheses.iter().map(quoted).collect();
        let _ = write!(out, " [hyps: {}]", hs.join("; "));
    }
    let _ = writeln!(out, " : {}", quoted(&p.conclusion));
    let n = |k: &usize| k + 1;
    for (i, s) in p.main_section.iter().enumerate() {
        let just = match &s.just {
            Justification::Axiom(inst) => axiom_text(inst),
            Justification::Hyp(k) => format!("hyp {}", n(k)),
            Justification::Theorem(k) => {
                format!(
                    "thm {}.{}",
                    thm_label.as_deref().expect("theorem section"),
                    n(k)
                )
            }
            Justification::R1 { eq, target, path } => {
                format!("R1 {} {} at {path}", n(eq), n(target))
            }
            Justification::R2 { minor, major } => format!("R2 {} {}", n(minor), n(major)),
            Justification::Derived(d) => {
                let body = match d {
                    Derived::R1Prime { eq, target, path } => {
                        format!("{} {} at {path}", n(eq), n(target))
                    }
                    Derived::R2Prime { minor, major } => format!("{} {}", n(minor), n(major)),
                    Derived::Beta {
                        defined,
                        target,
                        path,
                    } => format!("{} {} at {path}", n(defined), n(target)),
                    Derived::UnivInst {
                        defined,
                        forall,
                        term,
                    } => format!("{} {} with {}", n(defined), n(forall), quoted(term)),
                    Derived::UnivGen { premise, var } => {
                        format!("{} {}", n(premise), print_wff(&Wff::var(var.clone())))
                    }
                    Derived::Taut { premises } => {
                        let ks: Vec<String> = premises.iter().map(|k| n(k).to_string()).collect();
                        ks.join(" ")
                    }
                    Derived::Deduction { hypothesis, .. } => {
                        format!("{} {}", subs[&i], quoted(hypothesis))
                    }
                };
                format!("derived {} {}", d.name(), body)
                    .trim_end()
                    .to_string()
            }
        };
        let _ = writeln!(out, "{}. {}  {}", i + 1, quoted(&s.wff), just);
    }
    let _ = writeln!(out, "qed {}", p.main_section.len());
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use qu0_core::abbrev::expand;

    const LEMMA: &str = r#"
theory demo
# a comment
const c : i

proof refl : "c ~= c"
1. "def(x_i)"  axiom A5 {x := x_i}
2. "def(x_i) => [[\y_i. c] x_i ~= c]"  axiom A4 {x := y_i; B := "c"; A := x_i}
qed 2
"#;

    #[test]
    fn lexes_words_strings_and_punctuation() {
        let t = lex(r#"2. "a b" axiom A4 {x := x_i; B := "c"} # tail"#).unwrap();
        assert_eq!(t[0], Tok::Word("2.".into()));
        assert_eq!(t[1], Tok::Str("a b".into()));
        assert!(t.contains(&Tok::Assign) && t.contains(&Tok::Semi));
        assert_eq!(t.last(), Some(&Tok::RBrace));
        assert!(lex("\"open").is_err());
    }

    #[test]
    fn parses_a_small_script() {
        let s = parse_script(LEMMA).unwrap();
        assert_eq!(s.theory.as_deref(), Some("demo"));
        assert_eq!(s.proofs.len(), 1);
        let p = &s.proofs[0];
        assert_eq!(p.label, "refl");
        assert_eq!(p.step_lines, vec![7, 8]);
        assert!(matches!(
            &p.proof.main_section[1].just,
            Justification::Axiom(AxiomInstance::A4 { .. })
        ));
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "const c : i\nproof p : \"c\"\n1. \"c\" axiom A5 {y := x_i}\nqed 1\n";
        let e = parse_script(bad).unwrap_err();
        assert_eq!(e.line(), Some(3));
        assert!(e.to_string().contains("A5 needs parameter x"), "{e}");

        let e = parse_script("proof p : \"T\"\n2. \"T\" hyp 1\nqed 1\n").unwrap_err();
        assert_eq!(e.line(), Some(2));
        let e = parse_script("proof p : \"T\"\n1. \"T\" hyp 1\n").unwrap_err();
        assert!(e.to_string().contains("no qed"));
        let e = parse_script("proof p : \"T\"\n1. \"T\" hyp 1\nqed 3\n").unwrap_err();
        assert!(e.to_string().contains("qed 3"));
        let e = parse_script("proof p : \"k_i = k_i\"\n").unwrap_err();
        assert_eq!(e.line(), Some(1));
    }

    #[test]
    fn theorem_imports_build_the_theorem_section() {
        let text = r#"
proof a : "def(x_i)"
1. "def(x_i)" axiom A5 {x := x_i}
qed 1
proof b [hyps: "y_o"] : "def(x_i)"
1. "y_o" hyp 1
2. "def(x_i)" thm a.1
qed 2
"#;
        let s = parse_script(text).unwrap();
        let b = s.proof("b").unwrap();
        assert_eq!(b.proof.theorem_section.len(), 1);
        assert_eq!(b.proof.main_section[1].just, Justification::Theorem(0));
        assert_eq!(
            b.imports,
            vec![Import {
                label: "a".into(),
                offset: 0,
                len: 1
            }]
        );
        assert!(parse_script("proof b : \"T\"\n1. \"T\" thm zz.1\nqed 1\n").is_err());
    }

    #[test]
    fn render_then_parse_is_identity() {
        let s = parse_script(LEMMA).unwrap();
        let p = &s.proofs[0];
        let text = render_script("demo", &[(p.label.clone(), p.proof.clone())]);
        let again = parse_script(&text).unwrap();
        let q = &again.proofs[0].proof;
        let canon =
            |pr: &Proof| -> Vec<Wff> { pr.main_section.iter().map(|s| expand(&s.wff)).collect() };
        assert_eq!(canon(q), canon(&p.proof));
        assert_eq!(q.main_section.len(), 2);
        assert_eq!(
            q.main_section.iter().map(|s| &s.just).collect::<Vec<_>>(),
            p.proof
                .main_section
                .iter()
                .map(|s| &s.just)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn derived_rules_parse() {
        let text = r#"
proof t [hyps: "x_o"; "y_o"] : "x_o /\ y_o"
1. "x_o" hyp 1
2. "y_o" hyp 2
3. "x_o /\ y_o" derived taut 1 2
qed 3
proof u : "x_o => [x_o \/ y_o]"
1. "x_o => [x_o \/ y_o]" derived taut
qed 1
"#;
        let s = parse_script(text).unwrap();
        assert!(matches!(
            &s.proofs[0].proof.main_section[2].just,
            Justification::Derived(Derived::Taut { premises }) if premises == &vec![0, 1]
        ));
    }
}
