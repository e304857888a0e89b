use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::types::Type;

/// Base names of the variable lexicon.
pub const VARIABLE_BASES: [&str; 6] = ["f", "g", "h", "x", "y", "z"];

pub fn is_variable_base(name: &str) -> bool {
    VARIABLE_BASES.contains(&name)
}

/// A variable name: one of the lexicon bases with an optional positive
/// superscript (`x`, `x^1`, ...).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    base: Arc<str>,
    index: u32,
}

impl Name {
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> u32 {
        self.index
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            f.write_str(&self.base)
        } else {
            write!(f, "{}^{}", self.base, self.index)
        }
    }
}

/// A typed variable. Two variables are the same iff name and type agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Name,
    ty: Type,
}

impl Var {
    /// Panics if `base` is not one of `f g h x y z`.
    pub fn new(base: &str, ty: Type) -> Var {
        Var::indexed(base, 0, ty)
    }

    pub fn indexed(base: &str, index: u32, ty: Type) -> Var {
        Var::try_indexed(base, index, ty)
            .unwrap_or_else(|| panic!("{base:?} is not a variable base name"))
    }

    pub fn try_indexed(base: &str, index: u32, ty: Type) -> Option<Var> {
        is_variable_base(base).then(|| Var {
            name: Name {
                base: Arc::from(base),
                index,
            },
            ty,
        })
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.name, self.ty.annotation())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstKind {
    /// `Q_(oaa)`, interpreted as the identity relation.
    Equality,
    /// `iota_(a(oa))` for `a != o`, interpreted as the unique member selector.
    Selector,
    Nonlogical,
}

/// A primitive constant. Logical constants carry the full type, i.e.
/// `Q` at `i` has type `oii`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Const {
    name: Arc<str>,
    ty: Type,
    kind: ConstKind,
}

impl Const {
    pub fn nonlogical(name: &str, ty: Type) -> Const {
        Const {
            name: Arc::from(name),
            ty,
            kind: ConstKind::Nonlogical,
        }
    }

    /// `Q` comparing elements of `ty`.
    pub fn equality(ty: &Type) -> Const {
        Const {
            name: Arc::from("Q"),
            ty: ty.equality(),
            kind: ConstKind::Equality,
        }
    }

    /// `iota` selecting from predicates over `ty`; `None` at `o`.
    pub fn selector(ty: &Type) -> Option<Const> {
        (!ty.is_bool()).then(|| Const {
            name: Arc::from("iota"),
            ty: ty.selector(),
            kind: ConstKind::Selector,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn kind(&self) -> ConstKind {
        self.kind
    }

    pub fn is_logical(&self) -> bool {
        self.kind != ConstKind::Nonlogical
    }

    /// For logical constants, the type they are indexed by (`a` in `Q_a`).
    pub fn index_type(&self) -> Option<&Type> {
        match self.kind {
            ConstKind::Equality => self.ty.as_fun().map(|(_, d)| d),
            ConstKind::Selector => self.ty.as_fun().map(|(c, _)| c),
            ConstKind::Nonlogical => None,
        }
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index_type() {
            Some(t) => write!(f, "{}_{}", self.name, t.annotation()),
            None => write!(f, "{}_{}", self.name, self.ty.annotation()),
        }
    }
}

impl fmt::Debug for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A folded abbreviation node. These live only in the surface layer;
/// `abbrev::expand` rewrites them away. `A = B` has no node of its own:
/// its expansion `Q A B` is already a primitive application.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Abbrev {
    True,
    False,
    Forall(Var, Wff),
    AndConst,
    And(Wff, Wff),
    ImpliesConst,
    Implies(Wff, Wff),
    NotConst,
    Not(Wff),
    OrConst,
    Or(Wff, Wff),
    Exists(Var, Wff),
    ExistsUnique(Var, Wff),
    NotEquals(Wff, Wff),
    IsDefined(Wff),
    IsUndefined(Wff),
    QuasiEquals(Wff, Wff),
    Description(Var, Wff),
    Bottom(Type),
}

impl Abbrev {
    /// The variable bound by this node, if any.
    pub fn binder(&self) -> Option<&Var> {
        match self {
            Abbrev::Forall(x, _)
            | Abbrev::Exists(x, _)
            | Abbrev::ExistsUnique(x, _)
            | Abbrev::Description(x, _) => Some(x),
            _ => None,
        }
    }

    /// Wff operands in left-to-right order.
    pub fn operands(&self) -> Vec<&Wff> {
        use Abbrev::*;
        match self {
            True | False | AndConst | ImpliesConst | NotConst | OrConst | Bottom(_) => vec![],
            Forall(_, a) | Exists(_, a) | ExistsUnique(_, a) | Description(_, a) => vec![a],
            Not(a) | IsDefined(a) | IsUndefined(a) => vec![a],
            And(a, b) | Implies(a, b) | Or(a, b) | NotEquals(a, b) | QuasiEquals(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Rebuilds the node with each operand mapped through `f`.
    pub fn map_operands<E>(&self, mut f: impl FnMut(&Wff) -> Result<Wff, E>) -> Result<Abbrev, E> {
        use Abbrev::*;
        Ok(match self {
            True => True,
            False => False,
            AndConst => AndConst,
            ImpliesConst => ImpliesConst,
            NotConst => NotConst,
            OrConst => OrConst,
            Bottom(t) => Bottom(t.clone()),
            Forall(x, a) => Forall(x.clone(), f(a)?),
            Exists(x, a) => Exists(x.clone(), f(a)?),
            ExistsUnique(x, a) => ExistsUnique(x.clone(), f(a)?),
            Description(x, a) => Description(x.clone(), f(a)?),
            Not(a) => Not(f(a)?),
            IsDefined(a) => IsDefined(f(a)?),
            IsUndefined(a) => IsUndefined(f(a)?),
            And(a, b) => And(f(a)?, f(b)?),
            Implies(a, b) => Implies(f(a)?, f(b)?),
            Or(a, b) => Or(f(a)?, f(b)?),
            NotEquals(a, b) => NotEquals(f(a)?, f(b)?),
            QuasiEquals(a, b) => QuasiEquals(f(a)?, f(b)?),
        })
    }

    fn infer(&self) -> Result<Type, TypeError> {
        use Abbrev::*;
        let o = Type::Bool;
        let ooo = Type::fun(Type::fun(Type::Bool, Type::Bool), Type::Bool);
        let need_bool = |w: &Wff, what: &'static str| {
            if w.ty().is_bool() {
                Ok(())
            } else {
                Err(TypeError::NotBoolean {
                    context: what,
                    found: w.ty().clone(),
                })
            }
        };
        let same = |a: &Wff, b: &Wff| {
            if a.ty() == b.ty() {
                Ok(())
            } else {
                Err(TypeError::Mismatch {
                    left: a.ty().clone(),
                    right: b.ty().clone(),
                })
            }
        };
        Ok(match self {
            True | False => o,
            AndConst | ImpliesConst | OrConst => ooo,
            NotConst => Type::fun(Type::Bool, Type::Bool),
            Forall(_, a) | Exists(_, a) | ExistsUnique(_, a) => {
                need_bool(a, "quantifier body")?;
                o
            }
            Not(a) => {
                need_bool(a, "negation")?;
                o
            }
            And(a, b) | Implies(a, b) | Or(a, b) => {
                need_bool(a, "connective operand")?;
                need_bool(b, "connective operand")?;
                o
            }
            NotEquals(a, b) | QuasiEquals(a, b) => {
                same(a, b)?;
                o
            }
            IsDefined(_) | IsUndefined(_) => o,
            Description(x, a) => {
                need_bool(a, "description body")?;
                if x.ty().is_bool() {
                    return Err(TypeError::DescriptionAtBool);
                }
                x.ty().clone()
            }
            Bottom(t) => {
                if t.is_bool() {
                    return Err(TypeError::BottomAtBool);
                }
                t.clone()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("cannot apply a wff of type {fun} to an argument of type {arg}")]
    ApplicationMismatch { fun: Type, arg: Type },
    #[error("{context} must have type o, found {found}")]
    NotBoolean { context: &'static str, found: Type },
    #[error("operands have different types {left} and {right}")]
    Mismatch { left: Type, right: Type },
    #[error("iota at type o(oo) is not a primitive constant")]
    SelectorAtBool,
    #[error("definite description over type o is not available")]
    DescriptionAtBool,
    #[error("bot is only defined at types other than o")]
    BottomAtBool,
    #[error("{0} is annotated with type {1} but bound at type {2}")]
    BinderMismatch(String, Type, Type),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum WffKind {
    Var(Var),
    Const(Const),
    App(Wff, Wff),
    Abs(Var, Wff),
    Abbr(Abbrev),
}

struct Node {
    kind: WffKind,
    ty: Type,
    free: Arc<[Var]>,
    core: bool,
}

/// A well-formed formula. Construction type-checks, so every `Wff` value
/// has a unique type. Equality is strict structural identity; there is
/// no implicit alpha-conversion.
#[derive(Clone)]
pub struct Wff(Arc<Node>);

impl PartialEq for Wff {
    fn eq(&self, other: &Wff) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.ty == other.0.ty && self.0.kind == other.0.kind)
    }
}

impl Eq for Wff {}

impl Hash for Wff {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

fn merge(a: &Arc<[Var]>, b: &Arc<[Var]>) -> Arc<[Var]> {
    if b.iter().all(|v| a.binary_search(v).is_ok()) {
        return a.clone();
    }
    if a.iter().all(|v| b.binary_search(v).is_ok()) {
        return b.clone();
    }
    let set: BTreeSet<&Var> = a.iter().chain(b.iter()).collect();
    set.into_iter().cloned().collect()
}

fn remove(a: &Arc<[Var]>, x: &Var) -> Arc<[Var]> {
    if a.binary_search(x).is_err() {
        return a.clone();
    }
    a.iter().filter(|v| *v != x).cloned().collect()
}

impl Wff {
    fn mk(kind: WffKind, ty: Type) -> Wff {
        let (free, core) = match &kind {
            WffKind::Var(v) => (Arc::from(vec![v.clone()]), true),
            WffKind::Const(_) => (Arc::from(Vec::new()), true),
            WffKind::App(f, a) => (merge(&f.0.free, &a.0.free), f.0.core && a.0.core),
            WffKind::Abs(x, b) => (remove(&b.0.free, x), b.0.core),
            WffKind::Abbr(ab) => {
                let mut free: Arc<[Var]> = Arc::from(Vec::new());
                for w in ab.operands() {
                    free = merge(&free, &w.0.free);
                }
                if let Some(x) = ab.binder() {
                    free = remove(&free, x);
                }
                (free, false)
            }
        };
        Wff(Arc::new(Node {
            kind,
            ty,
            free,
            core,
        }))
    }

    pub fn var(v: Var) -> Wff {
        let ty = v.ty().clone();
        Wff::mk(WffKind::Var(v), ty)
    }

    pub fn constant(c: Const) -> Wff {
        let ty = c.ty().clone();
        Wff::mk(WffKind::Const(c), ty)
    }

    /// `Q` at `ty`, of type `o ty ty`.
    pub fn q(ty: &Type) -> Wff {
        Wff::constant(Const::equality(ty))
    }

    /// `iota` at `ty`; fails at `o`.
    pub fn iota(ty: &Type) -> Result<Wff, TypeError> {
        Const::selector(ty)
            .map(Wff::constant)
            .ok_or(TypeError::SelectorAtBool)
    }

    pub fn app(f: Wff, a: Wff) -> Result<Wff, TypeError> {
        match f.ty().as_fun() {
            Some((cod, dom)) if dom == a.ty() => {
                let ty = cod.clone();
                Ok(Wff::mk(WffKind::App(f, a), ty))
            }
            _ => Err(TypeError::ApplicationMismatch {
                fun: f.ty().clone(),
                arg: a.ty().clone(),
            }),
        }
    }

    /// Application for internally constructed wffs known to be well typed.
    pub(crate) fn app_ok(f: Wff, a: Wff) -> Wff {
        Wff::app(f, a).expect("internally constructed application is well typed")
    }

    pub(crate) fn app2_ok(f: Wff, a: Wff, b: Wff) -> Wff {
        Wff::app_ok(Wff::app_ok(f, a), b)
    }

    pub fn abs(x: Var, body: Wff) -> Wff {
        let ty = Type::fun(body.ty().clone(), x.ty().clone());
        Wff::mk(WffKind::Abs(x, body), ty)
    }

    /// `[Q_a A B]`, i.e. `A = B`.
    pub fn equals(a: Wff, b: Wff) -> Result<Wff, TypeError> {
        if a.ty() != b.ty() {
            return Err(TypeError::Mismatch {
                left: a.ty().clone(),
                right: b.ty().clone(),
            });
        }
        Ok(Wff::app2_ok(Wff::q(a.ty()), a, b))
    }

    pub fn abbr(ab: Abbrev) -> Result<Wff, TypeError> {
        let ty = ab.infer()?;
        Ok(Wff::mk(WffKind::Abbr(ab), ty))
    }

    pub(crate) fn abbr_ok(ab: Abbrev) -> Wff {
        Wff::abbr(ab).expect("internally constructed abbreviation is well typed")
    }

    pub fn kind(&self) -> &WffKind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    /// Free variables, sorted and without duplicates.
    pub fn free_vars(&self) -> &[Var] {
        &self.0.free
    }

    pub fn has_free(&self, x: &Var) -> bool {
        self.0.free.binary_search(x).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.0.free.is_empty()
    }

    /// True iff no folded abbreviation node occurs anywhere.
    pub fn is_core(&self) -> bool {
        self.0.core
    }

    pub fn ptr_eq(&self, other: &Wff) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Stable address for memo tables; valid while this value is alive.
    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.kind() {
            WffKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self.kind() {
            WffKind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Wff, &Wff)> {
        match self.kind() {
            WffKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn as_abs(&self) -> Option<(&Var, &Wff)> {
        match self.kind() {
            WffKind::Abs(x, b) => Some((x, b)),
            _ => None,
        }
    }

    pub fn as_abbr(&self) -> Option<&Abbrev> {
        match self.kind() {
            WffKind::Abbr(a) => Some(a),
            _ => None,
        }
    }

    /// Matches `Q_a A B`.
    pub fn as_equation(&self) -> Option<(&Wff, &Wff)> {
        let (fa, b) = self.as_app()?;
        let (q, a) = fa.as_app()?;
        match q.as_const()?.kind() {
            ConstKind::Equality => Some((a, b)),
            _ => None,
        }
    }

    /// Every variable occurring in the wff, free or bound, including binder
    /// occurrences.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self.kind() {
            WffKind::Var(v) => {
                out.insert(v.clone());
            }
            WffKind::Const(_) => {}
            WffKind::App(f, a) => {
                f.collect_vars(out);
                a.collect_vars(out);
            }
            WffKind::Abs(x, b) => {
                out.insert(x.clone());
                b.collect_vars(out);
            }
            WffKind::Abbr(ab) => {
                if let Some(x) = ab.binder() {
                    out.insert(x.clone());
                }
                if let Abbrev::Bottom(t) = ab {
                    out.insert(Var::new("x", t.clone()));
                }
                for w in ab.operands() {
                    w.collect_vars(out);
                }
            }
        }
    }

    /// Nonlogical constants occurring in the wff.
    pub fn nonlogical_constants(&self) -> BTreeSet<Const> {
        let mut out = BTreeSet::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts(&self, out: &mut BTreeSet<Const>) {
        match self.kind() {
            WffKind::Var(_) => {}
            WffKind::Const(c) => {
                if !c.is_logical() {
                    out.insert(c.clone());
                }
            }
            WffKind::App(f, a) => {
                f.collect_consts(out);
                a.collect_consts(out);
            }
            WffKind::Abs(_, b) => b.collect_consts(out),
            WffKind::Abbr(ab) => {
                for w in ab.operands() {
                    w.collect_consts(out);
                }
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.kind() {
            WffKind::Var(_) | WffKind::Const(_) => 1,
            WffKind::App(f, a) => 1 + f.size() + a.size(),
            WffKind::Abs(_, b) => 1 + b.size(),
            WffKind::Abbr(ab) => 1 + ab.operands().iter().map(|w| w.size()).sum::<usize>(),
        }
    }
}

/// The type of a wff. Construction already checked it; this is the cached
/// result.
pub fn infer_type(w: &Wff) -> &Type {
    w.ty()
}

/// Re-derives the type from the leaves up, ignoring cached types, and
/// confirms it agrees with the cache.
pub fn recheck_type(w: &Wff) -> Result<Type, TypeError> {
    let ty = match w.kind() {
        WffKind::Var(v) => v.ty().clone(),
        WffKind::Const(c) => c.ty().clone(),
        WffKind::App(f, a) => {
            let ft = recheck_type(f)?;
            let at = recheck_type(a)?;
            match ft.as_fun() {
                Some((cod, dom)) if *dom == at => cod.clone(),
                _ => return Err(TypeError::ApplicationMismatch { fun: ft, arg: at }),
            }
        }
        WffKind::Abs(x, b) => Type::fun(recheck_type(b)?, x.ty().clone()),
        WffKind::Abbr(ab) => {
            for op in ab.operands() {
                recheck_type(op)?;
            }
            ab.infer()?
        }
    };
    debug_assert_eq!(&ty, w.ty());
    Ok(ty)
}

impl fmt::Debug for Wff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_wff(self))
    }
}

impl fmt::Display for Wff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_wff(self))
    }
}
