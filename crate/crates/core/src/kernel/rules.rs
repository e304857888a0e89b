use std::fmt;
use std::str::FromStr;

use crate::abbrev::view;
use crate::syntax::{Var, Wff, WffKind};

use super::KernelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    /// Function part of an application.
    Fun,
    /// Argument part of an application.
    Arg,
    /// Body of an abstraction. Binder occurrences have no address.
    Body,
}

/// Address of one subtree, from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OccurrencePath(pub Vec<Dir>);

impl OccurrencePath {
    pub fn root() -> OccurrencePath {
        OccurrencePath(Vec::new())
    }

    pub fn child(&self, d: Dir) -> OccurrencePath {
        let mut v = self.0.clone();
        v.push(d);
        OccurrencePath(v)
    }

    /// The subtree at this path, if it exists.
    pub fn resolve<'w>(&self, w: &'w Wff) -> Option<&'w Wff> {
        self.0.iter().try_fold(w, |cur, d| match (d, cur.kind()) {
            (Dir::Fun, WffKind::App(f, _)) => Some(f),
            (Dir::Arg, WffKind::App(_, a)) => Some(a),
            (Dir::Body, WffKind::Abs(_, b)) => Some(b),
            _ => None,
        })
    }

    /// Binders passed on the way down.
    pub fn binders<'w>(&self, w: &'w Wff) -> Vec<&'w Var> {
        let mut out = Vec::new();
        let mut cur = w;
        for d in &self.0 {
            cur = match (d, cur.kind()) {
                (Dir::Fun, WffKind::App(f, _)) => f,
                (Dir::Arg, WffKind::App(_, a)) => a,
                (Dir::Body, WffKind::Abs(x, b)) => {
                    out.push(x);
                    b
                }
                _ => break,
            };
        }
        out
    }

    /// `w` with the subtree at this path replaced by `new`, which must
    /// have the same type.
    pub fn replace(&self, w: &Wff, new: &Wff) -> Option<Wff> {
        fn go(w: &Wff, path: &[Dir], new: &Wff) -> Option<Wff> {
            let Some((d, rest)) = path.split_first() else {
                return (w.ty() == new.ty()).then(|| new.clone());
            };
            match (d, w.kind()) {
                (Dir::Fun, WffKind::App(f, a)) => Some(Wff::app_ok(go(f, rest, new)?, a.clone())),
                (Dir::Arg, WffKind::App(f, a)) => Some(Wff::app_ok(f.clone(), go(a, rest, new)?)),
                (Dir::Body, WffKind::Abs(x, b)) => Some(Wff::abs(x.clone(), go(b, rest, new)?)),
                _ => None,
            }
        }
        go(w, &self.0, new)
    }

    /// Every path at which `sub` occurs in `w`, in preorder.
    pub fn find_all(w: &Wff, sub: &Wff) -> Vec<OccurrencePath> {
        fn go(w: &Wff, sub: &Wff, here: &mut Vec<Dir>, out: &mut Vec<OccurrencePath>) {
            if w == sub {
                out.push(OccurrencePath(here.clone()));
            }
            let mut visit = |d, c: &Wff| {
                here.push(d);
                go(c, sub, here, out);
                here.pop();
            };
            match w.kind() {
                WffKind::App(f, a) => {
                    visit(Dir::Fun, f);
                    visit(Dir::Arg, a);
                }
                WffKind::Abs(_, b) => visit(Dir::Body, b),
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(w, sub, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let names: Vec<&str> = self
            .0
            .iter()
            .map(|d| match d {
                Dir::Fun => "fun",
                Dir::Arg => "arg",
                Dir::Body => "body",
            })
            .collect();
        f.write_str(&names.join("."))
    }
}

impl FromStr for OccurrencePath {
    type Err = String;

    fn from_str(s: &str) -> Result<OccurrencePath, String> {
        if s == "root" {
            return Ok(OccurrencePath::root());
        }
        s.split('.')
            .map(|p| match p {
                "fun" => Ok(Dir::Fun),
                "arg" => Ok(Dir::Arg),
                "body" => Ok(Dir::Body),
                other => Err(format!("unknown path step {other:?}")),
            })
            .collect::<Result<_, _>>()
            .map(OccurrencePath)
    }
}

/// Hypotheses whose free variables restrict R1 (condition 3 of a proof
/// from hypotheses). `None` for a plain proof.
pub type HypothesisContext<'a> = Option<&'a [Wff]>;

/// The restriction shared by R1 in the main section and derived rules:
/// the occurrence may not lie inside `\x E` where `x` is free in a
/// hypothesis and free in `guard`.
pub fn check_binders(
    target: &Wff,
    path: &OccurrencePath,
    guard: &Wff,
    hyps: HypothesisContext<'_>,
) -> Result<(), KernelError> {
    let Some(hyps) = hyps else { return Ok(()) };
    for x in path.binders(target) {
        if !guard.has_free(x) {
            continue;
        }
        if let Some(k) = hyps.iter().position(|h| h.has_free(x)) {
            return Err(KernelError::BinderRestriction {
                binder: x.clone(),
                hypothesis: k,
            });
        }
    }
    Ok(())
}

/// Locates the occurrence at `path` and checks it is `expected`.
fn occurrence<'w>(
    target: &'w Wff,
    path: &OccurrencePath,
    expected: &Wff,
) -> Result<&'w Wff, KernelError> {
    let sub = path
        .resolve(target)
        .ok_or_else(|| KernelError::BadPath(path.clone()))?;
    if sub != expected {
        return Err(KernelError::OccurrenceMismatch {
            path: path.clone(),
            expected: expected.clone(),
            found: sub.clone(),
        });
    }
    Ok(sub)
}

/// R1: from `A ~= B` and `C`, replace the occurrence of `A` at `path` in
/// `C` by `B`.
pub fn apply_r1(
    eq: &Wff,
    target: &Wff,
    path: &OccurrencePath,
    hyps: HypothesisContext<'_>,
) -> Result<Wff, KernelError> {
    let (a, b) = view::quasi_equals(eq).ok_or_else(|| KernelError::NotQuasiEquality(eq.clone()))?;
    if !target.ty().is_bool() {
        return Err(KernelError::NotBoolean(target.clone()));
    }
    occurrence(target, path, a)?;
    check_binders(target, path, eq, hyps)?;
    Ok(path
        .replace(target, b)
        .expect("resolved path with equal types"))
}

/// R2: from `A` and `A => B`, infer `B`.
pub fn apply_r2(minor: &Wff, major: &Wff) -> Result<Wff, KernelError> {
    let (a, b) = view::implies(major).ok_or_else(|| KernelError::NotImplication(major.clone()))?;
    if a != minor {
        return Err(KernelError::AntecedentMismatch {
            antecedent: a.clone(),
            minor: minor.clone(),
        });
    }
    Ok(b.clone())
}

/// The beta-reduction rule: replace the redex `[\x B] A` at `path` by
/// `S(x, A, B)`, given `def(A)` as `defined`.
pub fn apply_beta(
    defined: &Wff,
    target: &Wff,
    path: &OccurrencePath,
    hyps: HypothesisContext<'_>,
) -> Result<Wff, KernelError> {
    let a = view::defined(defined).ok_or_else(|| KernelError::NotDefinedness(defined.clone()))?;
    let redex = path
        .resolve(target)
        .ok_or_else(|| KernelError::BadPath(path.clone()))?;
    let Some((f, arg)) = redex.as_app() else {
        return Err(KernelError::NotRedex(redex.clone()));
    };
    let Some((x, body)) = f.as_abs() else {
        return Err(KernelError::NotRedex(redex.clone()));
    };
    if arg != a {
        return Err(KernelError::OccurrenceMismatch {
            path: path.child(Dir::Arg),
            expected: a.clone(),
            found: arg.clone(),
        });
    }
    let reduct = crate::subst::substitute(a, x, body).map_err(|_| KernelError::NotFreeFor {
        schema: super::Schema::A4,
        term: a.clone(),
        var: x.clone(),
        body: body.clone(),
    })?;
    check_binders(target, path, redex, hyps)?;
    Ok(path.replace(target, &reduct).expect("same type"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abbrev::expand;
    use crate::syntax::{parse_wff, Signature};
    use crate::types::Type;

    fn sig() -> Signature {
        Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("d", Type::Ind)
            .unwrap()
            .with("p", Type::pred(Type::Ind))
            .unwrap()
    }

    fn e(s: &str) -> Wff {
        expand(&parse_wff(s, &sig()).unwrap())
    }

    fn path(s: &str) -> OccurrencePath {
        s.parse().unwrap()
    }

    #[test]
    fn path_round_trip() {
        for s in ["root", "fun", "fun.arg.body", "arg.arg"] {
            assert_eq!(path(s).to_string(), s);
        }
        assert!("fun.bind".parse::<OccurrencePath>().is_err());
    }

    #[test]
    fn r1_replaces_one_occurrence() {
        let eq = e("c ~= d");
        let target = e("def(c)");
        let occ = OccurrencePath::find_all(&target, &e("c"));
        assert_eq!(occ.len(), 1);
        let r = apply_r1(&eq, &target, &occ[0], None).unwrap();
        // the bound variable of def is fixed by the operand, so the result
        // is canonical def(d)
        assert_eq!(r, e("def(d)"));

        let target = e("p c /\\ p c");
        let occ = OccurrencePath::find_all(&target, &e("c"));
        assert_eq!(occ.len(), 2);
        let r = apply_r1(&eq, &target, &occ[1], None).unwrap();
        assert_eq!(r, e("p c /\\ p d"));
    }

    #[test]
    fn r1_with_reflexive_premise_is_identity() {
        let eq = e("c ~= c");
        let target = e("p c => p c");
        for occ in OccurrencePath::find_all(&target, &e("c")) {
            assert_eq!(apply_r1(&eq, &target, &occ, None).unwrap(), target);
        }
    }

    #[test]
    fn r1_errors() {
        let target = e("p c");
        assert!(matches!(
            apply_r1(&e("c = d"), &target, &path("arg"), None),
            Err(KernelError::NotQuasiEquality(_))
        ));
        assert!(matches!(
            apply_r1(&e("c ~= d"), &target, &path("fun"), None),
            Err(KernelError::OccurrenceMismatch { .. })
        ));
        assert!(matches!(
            apply_r1(&e("c ~= d"), &target, &path("body"), None),
            Err(KernelError::BadPath(_))
        ));
    }

    #[test]
    fn condition_three() {
        let eq = e("x_i ~= c");
        let target = e("forall x_i. p x_i");
        let occ = OccurrencePath::find_all(&target, &e("x_i"));
        assert_eq!(occ.len(), 1);
        let hyps = [e("x_i ~= c")];
        let err = apply_r1(&eq, &target, &occ[0], Some(&hyps)).unwrap_err();
        assert_eq!(
            err,
            KernelError::BinderRestriction {
                binder: Var::new("x", Type::Ind),
                hypothesis: 0
            }
        );
        // without hypotheses, or with a hypothesis not mentioning x, it goes through
        assert!(apply_r1(&eq, &target, &occ[0], None).is_ok());
        assert!(apply_r1(&eq, &target, &occ[0], Some(&[e("p c")])).is_ok());
    }

    #[test]
    fn r2_examples() {
        assert_eq!(apply_r2(&e("T"), &e("T => T")).unwrap(), e("T"));
        assert!(matches!(
            apply_r2(&e("F"), &e("T => T")),
            Err(KernelError::AntecedentMismatch { .. })
        ));
        assert!(matches!(
            apply_r2(&e("T"), &e("T /\\ T")),
            Err(KernelError::NotImplication(_))
        ));
        let major = e("def(x_i) => [[\\x_i. x_i] x_i ~= x_i]");
        assert_eq!(
            apply_r2(&e("def(x_i)"), &major).unwrap(),
            e("[\\x_i. x_i] x_i ~= x_i")
        );
    }

    #[test]
    fn beta_rule() {
        let target = e("p [[\\x_i. x_i] c]");
        let r = apply_beta(&e("def(c)"), &target, &path("arg"), None).unwrap();
        assert_eq!(r, e("p c"));
        assert!(apply_beta(&e("def(d)"), &target, &path("arg"), None).is_err());
        assert!(matches!(
            apply_beta(&e("def(c)"), &target, &path("fun"), None),
            Err(KernelError::NotRedex(_))
        ));
    }
}
