//! Seeded random wffs for the property batteries, plus the exhaustive
//! propositional enumeration.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semantics::{Frame, Model};
use crate::syntax::{Abbrev, Signature, Var, Wff};
use crate::types::{parse_type, Type};

/// Types the generator may produce. All have small domains over two
/// individuals, so generated wffs stay evaluable.
pub fn type_universe() -> Vec<Type> {
    [
        "i", "o", "oi", "ii", "oo", "io", "(oo)o", "(oi)i", "(ii)i", "o(oi)", "i(oi)", "o(ii)",
    ]
    .iter()
    .map(|s| parse_type(s).expect("static type"))
    .collect()
}

/// Signature used by generated wffs.
pub fn default_signature() -> Signature {
    let mut sig = Signature::new();
    for (name, ty) in [
        ("c", "i"),
        ("d", "i"),
        ("p", "oi"),
        ("r", "ii"),
        ("q", "o"),
        ("s", "o(oi)"),
    ] {
        sig.declare(name, parse_type(ty).expect("static type"))
            .expect("static signature");
    }
    sig
}

/// A model over `base` individuals with every constant of the default
/// signature interpreted by a seeded choice.
pub fn random_model(seed: u64, base: usize, cap: usize) -> Model {
    let frame = Arc::new(Frame::with_size(base, cap).expect("nonempty base"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Model::new(frame.clone());
    for c in default_signature().constants() {
        let d = frame.domain(c.ty()).expect("signature types are small");
        let v = d[rng.gen_range(0..d.len())].clone();
        m.interpret(c, v).expect("from the domain");
    }
    m
}

#[derive(Debug, Clone)]
pub struct WffGen {
    rng: ChaCha8Rng,
    sig: Signature,
    universe: Vec<Type>,
    surface: bool,
    max_free: usize,
}

impl WffGen {
    /// Core wffs only.
    pub fn core(seed: u64) -> WffGen {
        WffGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sig: default_signature(),
            universe: type_universe(),
            surface: false,
            max_free: 3,
        }
    }

    /// Wffs that may also contain folded abbreviation nodes.
    pub fn surface(seed: u64) -> WffGen {
        WffGen {
            surface: true,
            ..WffGen::core(seed)
        }
    }

    pub fn with_signature(mut self, sig: Signature) -> WffGen {
        self.sig = sig;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A wff of type `ty` with at most `depth` levels of constructors
    /// above the leaves and at most three distinct free variables.
    pub fn wff(&mut self, ty: &Type, depth: usize) -> Wff {
        loop {
            let w = self.gen(ty, depth, &[]);
            if w.free_vars().len() <= self.max_free {
                return w;
            }
        }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).expect("nonempty choice").clone()
    }

    fn small_type(&mut self) -> Type {
        let u = self.universe.clone();
        let small: Vec<Type> = u.into_iter().filter(|t| t.to_string().len() <= 2).collect();
        self.pick(&small)
    }

    fn leaf(&mut self, ty: &Type, bound: &[Var]) -> Wff {
        let mut options: Vec<Wff> = bound
            .iter()
            .filter(|v| v.ty() == ty)
            .map(|v| Wff::var(v.clone()))
            .collect();
        options.extend(
            self.sig
                .constants()
                .filter(|c| c.ty() == ty)
                .map(Wff::constant),
        );
        if let Some((cod, dom)) = ty.as_fun() {
            if let Some((o, a)) = cod.as_fun() {
                if o.is_bool() && a == dom {
                    options.push(Wff::q(a));
                }
            }
            if let Some((o, a)) = dom.as_fun() {
                if o.is_bool() && a == cod {
                    if let Ok(i) = Wff::iota(cod) {
                        options.push(i);
                    }
                }
            }
        }
        if self.surface {
            if ty.is_bool() {
                options.push(Wff::abbr(Abbrev::True).expect("T"));
                options.push(Wff::abbr(Abbrev::False).expect("F"));
            } else {
                options.push(Wff::abbr(Abbrev::Bottom(ty.clone())).expect("bot"));
            }
        }
        // free variables from a short list keep assignment spaces small
        for base in ["x", "y", "z"] {
            options.push(Wff::var(Var::new(base, ty.clone())));
        }
        self.pick(&options)
    }

    fn binder(&mut self, ty: &Type) -> Var {
        let base = self.pick(&["x", "y", "z", "f", "g", "h"]);
        Var::new(base, ty.clone())
    }

    fn gen(&mut self, ty: &Type, depth: usize, bound: &[Var]) -> Wff {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.leaf(ty, bound);
        }
        let d = depth - 1;
        let choice = self.rng.gen_range(0..if self.surface { 10 } else { 5 });
        match choice {
            // application with an argument type keeping the function in range
            0 | 1 => {
                let args: Vec<Type> = self
                    .universe
                    .iter()
                    .filter(|b| self.universe.contains(&Type::fun(ty.clone(), (*b).clone())))
                    .cloned()
                    .collect();
                if args.is_empty() {
                    return self.leaf(ty, bound);
                }
                let b = self.pick(&args);
                let f = self.gen(&Type::fun(ty.clone(), b.clone()), d, bound);
                let a = self.gen(&b, d, bound);
                Wff::app(f, a).expect("typed by construction")
            }
            2 => match ty.as_fun() {
                Some((cod, dom)) => {
                    let x = self.binder(dom);
                    let mut inner = bound.to_vec();
                    inner.push(x.clone());
                    let body = self.gen(cod, d, &inner);
                    Wff::abs(x, body)
                }
                None if ty.is_bool() => self.equation(d, bound),
                None => self.leaf(ty, bound),
            },
            3 => {
                if ty.is_bool() {
                    self.equation(d, bound)
                } else {
                    let x = Var::new("x", ty.clone());
                    let mut inner = bound.to_vec();
                    inner.push(x.clone());
                    let body = self.gen(&Type::Bool, d, &inner);
                    if self.surface {
                        Wff::abbr(Abbrev::Description(x, body)).expect("description")
                    } else {
                        let pred = Wff::abs(x, body);
                        Wff::app(Wff::iota(ty).expect("non-o"), pred).expect("typed")
                    }
                }
            }
            4 => self.leaf(ty, bound),
            _ => self.surface_node(ty, d, bound),
        }
    }

    fn equation(&mut self, d: usize, bound: &[Var]) -> Wff {
        let t = self.small_type();
        let a = self.gen(&t, d, bound);
        let b = self.gen(&t, d, bound);
        Wff::equals(a, b).expect("same type")
    }

    fn surface_node(&mut self, ty: &Type, d: usize, bound: &[Var]) -> Wff {
        if !ty.is_bool() {
            return self.gen(ty, d, bound);
        }
        let o = Type::Bool;
        let node = match self.rng.gen_range(0..11) {
            0 => Abbrev::Not(self.gen(&o, d, bound)),
            1 => Abbrev::And(self.gen(&o, d, bound), self.gen(&o, d, bound)),
            2 => Abbrev::Or(self.gen(&o, d, bound), self.gen(&o, d, bound)),
            3 => Abbrev::Implies(self.gen(&o, d, bound), self.gen(&o, d, bound)),
            k @ 4..=6 => {
                let t = self.small_type();
                let x = self.binder(&t);
                let mut inner = bound.to_vec();
                inner.push(x.clone());
                let body = self.gen(&o, d, &inner);
                match k {
                    4 => Abbrev::Forall(x, body),
                    5 => Abbrev::Exists(x, body),
                    _ => Abbrev::ExistsUnique(x, body),
                }
            }
            k @ 7..=8 => {
                let t = self.small_type();
                let a = self.gen(&t, d, bound);
                if k == 7 {
                    Abbrev::IsDefined(a)
                } else {
                    Abbrev::IsUndefined(a)
                }
            }
            k => {
                let t = self.small_type();
                let a = self.gen(&t, d, bound);
                let b = self.gen(&t, d, bound);
                if k == 9 {
                    Abbrev::QuasiEquals(a, b)
                } else {
                    Abbrev::NotEquals(a, b)
                }
            }
        };
        Wff::abbr(node).expect("typed by construction")
    }
}

/// Propositional connectives of the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 5] = [
        Connective::Not,
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
    ];
}

/// Every surface wff built from `leaves` with at most `max_connectives`
/// occurrences of `~`, `/\`, `\/`, `=>` and `=` (at type o), grouped by
/// connective count. Shared subterms share nodes.
pub fn propositional_formulas(leaves: &[Wff], max_connectives: usize) -> Vec<Vec<Wff>> {
    let mut by_size: Vec<Vec<Wff>> = vec![leaves.to_vec()];
    for n in 1..=max_connectives {
        let mut out = Vec::new();
        for a in &by_size[n - 1] {
            out.push(Wff::abbr(Abbrev::Not(a.clone())).expect("type o"));
        }
        for k in 0..n {
            let (ls, rs) = (&by_size[k], &by_size[n - 1 - k]);
            for c in &Connective::ALL[1..] {
                for a in ls {
                    for b in rs {
                        let (a, b) = (a.clone(), b.clone());
                        out.push(match c {
                            Connective::And => Wff::abbr(Abbrev::And(a, b)).expect("type o"),
                            Connective::Or => Wff::abbr(Abbrev::Or(a, b)).expect("type o"),
                            Connective::Implies => {
                                Wff::abbr(Abbrev::Implies(a, b)).expect("type o")
                            }
                            _ => Wff::equals(a, b).expect("type o"),
                        });
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size
}
