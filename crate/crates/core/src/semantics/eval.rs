use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::frame::{Frame, PartialValue, Value};
use super::SemError;
use crate::syntax::{Const, ConstKind, Var, Wff, WffKind};
use crate::types::Type;

/// A frame plus an interpretation of nonlogical constants. `Q` and `iota`
/// are fixed by the frame and never stored.
#[derive(Debug, Clone)]
pub struct Model {
    frame: Arc<Frame>,
    constants: BTreeMap<Const, Value>,
}

impl Model {
    pub fn new(frame: Arc<Frame>) -> Model {
        Model {
            frame,
            constants: BTreeMap::new(),
        }
    }

    /// Interprets `c`; the value must lie in the domain of its type.
    pub fn interpret(&mut self, c: Const, v: Value) -> Result<(), SemError> {
        if c.is_logical() {
            return Err(SemError::LogicalConstant(c));
        }
        if !self.frame.contains(c.ty(), &v) {
            return Err(SemError::OutsideDomain(c));
        }
        self.constants.insert(c, v);
        Ok(())
    }

    pub fn with(mut self, c: Const, v: Value) -> Result<Model, SemError> {
        self.interpret(c, v)?;
        Ok(self)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn constant(&self, c: &Const) -> Option<&Value> {
        self.constants.get(c)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Const, &Value)> {
        self.constants.iter()
    }
}

/// Builds a model over the given labels, checking every constant value
/// against its domain.
pub fn build_model<S: AsRef<str>>(
    base_labels: &[S],
    constant_values: impl IntoIterator<Item = (Const, Value)>,
    cap: usize,
) -> Result<Model, SemError> {
    let mut m = Model::new(Arc::new(Frame::new(base_labels, cap)?));
    for (c, v) in constant_values {
        m.interpret(c, v)?;
    }
    Ok(m)
}

/// Values for variables. Updating a binding replaces exactly that one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, Value>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn bind(&mut self, x: Var, d: Value) {
        self.0.insert(x, d);
    }

    pub fn with(mut self, x: Var, d: Value) -> Assignment {
        self.bind(x, d);
        self
    }

    pub fn get(&self, x: &Var) -> Option<&Value> {
        self.0.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Value)> {
        self.0.iter()
    }
}

/// `V^M_phi(w)` for a core wff.
pub fn valuate(model: &Model, phi: &Assignment, w: &Wff) -> Result<PartialValue, SemError> {
    let mut ev = Evaluator::new(model);
    ev.set_assignment(phi);
    ev.valuate(w)
}

/// Reusable evaluation state for one model: the current assignment,
/// cached domains and the values of closed subterms.
/// Largest binder domain over which a closed abstraction in function
/// position is tabulated rather than beta-bound.
const TABULATE_LIMIT: u128 = 64;

pub struct Evaluator<'m> {
    model: &'m Model,
    env: Vec<(Var, Value)>,
    base: usize,
    domains: HashMap<Type, Arc<[Value]>>,
    logical: HashMap<Const, Option<Value>>,
    memo: HashMap<usize, (Wff, Option<Value>)>,
}

type Args<'w> = Vec<(Value, &'w Type)>;

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Evaluator<'m> {
        Evaluator {
            model,
            env: Vec::new(),
            base: 0,
            domains: HashMap::new(),
            logical: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn set_assignment(&mut self, phi: &Assignment) {
        self.env.clear();
        self.env
            .extend(phi.iter().map(|(x, d)| (x.clone(), d.clone())));
        self.base = self.env.len();
    }

    /// Replaces the assignment with `vars[k] := values[k]`.
    pub fn set_bindings(&mut self, vars: &[Var], values: impl IntoIterator<Item = Value>) {
        self.env.clear();
        self.env.extend(vars.iter().cloned().zip(values));
        self.base = self.env.len();
    }

    pub fn domain(&mut self, ty: &Type) -> Result<Arc<[Value]>, SemError> {
        if let Some(d) = self.domains.get(ty) {
            return Ok(d.clone());
        }
        let d = self.model.frame.domain(ty)?;
        self.domains.insert(ty.clone(), d.clone());
        Ok(d)
    }

    pub fn valuate(&mut self, w: &Wff) -> Result<PartialValue, SemError> {
        if !w.is_core() {
            return Err(SemError::NotCore);
        }
        debug_assert_eq!(self.env.len(), self.base);
        Ok(self.eval(w)?.into())
    }

    fn lookup(&self, x: &Var) -> Result<Value, SemError> {
        self.env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, d)| d.clone())
            .ok_or_else(|| SemError::UnboundVariable(x.clone()))
    }

    fn eval(&mut self, w: &Wff) -> Result<Option<Value>, SemError> {
        match w.kind() {
            WffKind::Var(x) => self.lookup(x).map(Some),
            WffKind::Const(c) => self.constant(c),
            WffKind::Abs(..) | WffKind::App(..) if w.is_closed() => {
                if let Some((_, v)) = self.memo.get(&w.addr()) {
                    return Ok(v.clone());
                }
                let v = self.eval_compound(w)?;
                self.memo.insert(w.addr(), (w.clone(), v.clone()));
                Ok(v)
            }
            WffKind::Abs(..) | WffKind::App(..) => self.eval_compound(w),
            WffKind::Abbr(_) => Err(SemError::NotCore),
        }
    }

    fn eval_compound(&mut self, w: &Wff) -> Result<Option<Value>, SemError> {
        match w.kind() {
            WffKind::Abs(x, b) => self.abstraction(x, b).map(Some),
            _ => {
                let v = self.spine(w, Vec::new())?;
                // an improper application of type o is false
                Ok(v.or_else(|| w.ty().is_bool().then_some(Value::F)))
            }
        }
    }

    fn abstraction(&mut self, x: &Var, body: &Wff) -> Result<Value, SemError> {
        let dom = self.domain(x.ty())?;
        let mut graph = Vec::with_capacity(dom.len());
        for d in dom.iter() {
            self.env.push((x.clone(), d.clone()));
            let r = self.eval(body);
            self.env.pop();
            graph.push(r?);
        }
        Ok(Value::Fun(graph.into()))
    }

    /// Applies `w` to `args`, which are stacked with the first argument
    /// last. `None` means undefined somewhere along the spine.
    fn spine<'w>(&mut self, w: &'w Wff, mut args: Args<'w>) -> Result<Option<Value>, SemError> {
        match w.kind() {
            WffKind::App(f, a) => match self.eval(a)? {
                Some(v) => {
                    args.push((v, a.ty()));
                    self.spine(f, args)
                }
                None => Ok(None),
            },
            // closed functions with small binder domains (the connectives,
            // mostly) are tabulated once and then looked up
            WffKind::Abs(x, _)
                if !args.is_empty()
                    && w.is_closed()
                    && self.model.frame.cardinality(x.ty()) <= TABULATE_LIMIT =>
            {
                match self.eval(w)? {
                    Some(head) => self.apply(head, args),
                    None => Ok(None),
                }
            }
            // a beta-redex: bind instead of tabulating the abstraction
            WffKind::Abs(x, b) if !args.is_empty() => {
                let (v, _) = args.pop().expect("nonempty");
                self.env.push((x.clone(), v));
                let r = if args.is_empty() {
                    self.eval(b)
                } else {
                    self.spine(b, args)
                };
                self.env.pop();
                r
            }
            WffKind::Const(c) if c.kind() == ConstKind::Equality && args.len() >= 2 => {
                let (l, _) = args.pop().expect("two args");
                let (r, _) = args.pop().expect("two args");
                self.apply(Value::Bool(l == r), args)
            }
            WffKind::Const(c) if c.kind() == ConstKind::Selector && !args.is_empty() => {
                let (p, _) = args.pop().expect("one arg");
                let ty = c.index_type().expect("selector has an index type").clone();
                match self.select(&p, &ty)? {
                    Some(v) => self.apply(v, args),
                    None => Ok(None),
                }
            }
            _ => match self.eval(w)? {
                Some(head) => self.apply(head, args),
                None => Ok(None),
            },
        }
    }

    fn apply(&mut self, mut head: Value, mut args: Args<'_>) -> Result<Option<Value>, SemError> {
        while let Some((a, ty)) = args.pop() {
            let Value::Fun(g) = &head else {
                panic!("application of a non-function value");
            };
            let k = self.model.frame.rank(&a, ty);
            match &g[k] {
                Some(v) => head = v.clone(),
                None => return Ok(None),
            }
        }
        Ok(Some(head))
    }

    /// The unique member selector on `D_ty`.
    fn select(&mut self, pred: &Value, ty: &Type) -> Result<Option<Value>, SemError> {
        let g = pred.graph().expect("predicate graph");
        let mut hits = g
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, Some(Value::Bool(true))));
        let (Some((k, _)), None) = (hits.next(), hits.next()) else {
            return Ok(None);
        };
        Ok(Some(self.domain(ty)?[k].clone()))
    }

    fn constant(&mut self, c: &Const) -> Result<Option<Value>, SemError> {
        match c.kind() {
            ConstKind::Nonlogical => self
                .model
                .constant(c)
                .cloned()
                .map(Some)
                .ok_or_else(|| SemError::Uninterpreted(c.clone())),
            _ => {
                if let Some(v) = self.logical.get(c) {
                    return Ok(v.clone());
                }
                let ty = c
                    .index_type()
                    .expect("logical constants are indexed")
                    .clone();
                let dom = self.domain(&ty)?;
                let v = if c.kind() == ConstKind::Equality {
                    let rows = dom.iter().map(|x| {
                        let row: Arc<[_]> = dom.iter().map(|y| Some(Value::Bool(x == y))).collect();
                        Some(Value::Fun(row))
                    });
                    Value::Fun(rows.collect())
                } else {
                    let preds = self.domain(&Type::pred(ty.clone()))?;
                    let mut graph = Vec::with_capacity(preds.len());
                    for p in preds.iter() {
                        graph.push(self.select(p, &ty)?);
                    }
                    Value::Fun(graph.into())
                };
                self.logical.insert(c.clone(), Some(v.clone()));
                Ok(Some(v))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abbrev::expand;
    use crate::semantics::frame::DEFAULT_CAP;
    use crate::syntax::{parse_wff, Signature};

    fn sig() -> Signature {
        Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("p", Type::pred(Type::Ind))
            .unwrap()
            .with("k", Type::fun(Type::Ind, Type::Ind))
            .unwrap()
    }

    fn w(s: &str) -> Wff {
        expand(&parse_wff(s, &sig()).unwrap())
    }

    fn model() -> Model {
        let c = |n: &str| sig().constant(n).unwrap();
        build_model(
            &["a", "b"],
            [
                (c("c"), Value::Ind(1)),
                (
                    c("p"),
                    Value::Fun(vec![Some(Value::T), Some(Value::F)].into()),
                ),
                // k a = b, k b undefined
                (c("k"), Value::Fun(vec![Some(Value::Ind(1)), None].into())),
            ],
            DEFAULT_CAP,
        )
        .unwrap()
    }

    fn val(s: &str) -> PartialValue {
        valuate(&model(), &Assignment::new(), &w(s)).unwrap()
    }

    fn b(v: bool) -> PartialValue {
        PartialValue::Defined(Value::Bool(v))
    }

    #[test]
    fn truth_values() {
        assert_eq!(val("T"), b(true));
        assert_eq!(val("F"), b(false));
    }

    #[test]
    fn connective_tables() {
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let phi = Assignment::new()
                .with(Var::new("x", Type::Bool), Value::Bool(x))
                .with(Var::new("y", Type::Bool), Value::Bool(y));
            let v = |s: &str| valuate(&model(), &phi, &w(s)).unwrap();
            assert_eq!(v("x_o /\\ y_o"), b(x && y));
            assert_eq!(v("x_o \\/ y_o"), b(x || y));
            assert_eq!(v("x_o => y_o"), b(!x || y));
            assert_eq!(v("~x_o"), b(!x));
            assert_eq!(v("x_o = y_o"), b(x == y));
        }
    }

    #[test]
    fn bottom_is_undefined() {
        assert_eq!(val("bot_i"), PartialValue::Undefined);
        assert_eq!(val("def(bot_i)"), b(false));
        assert_eq!(val("undef(bot_i)"), b(true));
        assert_eq!(val("p bot_i"), b(false));
        assert_eq!(val("~[p bot_i]"), b(true));
        assert_eq!(val("k bot_i"), PartialValue::Undefined);
        assert_eq!(val("bot_i ~= bot_i"), b(true));
        assert_eq!(val("bot_i = bot_i"), b(false));
    }

    #[test]
    fn partial_functions() {
        // k b is undefined, k a = b
        assert_eq!(val("k c"), PartialValue::Undefined);
        assert_eq!(val("def(k [k c])"), b(false));
        assert_eq!(val("k [I x_i. p x]"), PartialValue::Defined(Value::Ind(1)));
        assert_eq!(val("[\\x_i. k x] c"), PartialValue::Undefined);
        assert_eq!(val("def(\\x_i. k x)"), b(true));
    }

    #[test]
    fn description_selects_singletons() {
        assert_eq!(val("I x_i. x = c"), PartialValue::Defined(Value::Ind(1)));
        assert_eq!(val("I x_i. x = x"), PartialValue::Undefined);
        assert_eq!(val("exists1 x_i. p x"), b(true));
        assert_eq!(val("exists1 x_i. x = x"), b(false));
    }

    #[test]
    fn quantifiers() {
        assert_eq!(val("forall x_i. x = x"), b(true));
        assert_eq!(val("forall x_i. p x"), b(false));
        assert_eq!(val("exists x_i. p x"), b(true));
        assert_eq!(val("forall f_(ii). def(f c) \\/ undef(f c)"), b(true));
        assert_eq!(val("exists f_(ii). def(f c)"), b(true));
        assert_eq!(val("forall f_(ii). def(f c)"), b(false));
    }

    #[test]
    fn equality_is_identity() {
        let m = model();
        let mut ev = Evaluator::new(&m);
        let q = Wff::q(&Type::Ind);
        let Some(Value::Fun(rows)) = ev.eval(&q).unwrap() else {
            panic!()
        };
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref().unwrap().graph().unwrap().to_vec();
            for (j, e) in row.iter().enumerate() {
                assert_eq!(e, &Some(Value::Bool(i == j)));
            }
        }
    }

    #[test]
    fn errors() {
        let m = model();
        assert!(matches!(
            valuate(&m, &Assignment::new(), &w("x_i = c")),
            Err(SemError::UnboundVariable(_))
        ));
        let folded = parse_wff("T", &sig()).unwrap();
        assert_eq!(
            valuate(&m, &Assignment::new(), &folded),
            Err(SemError::NotCore)
        );
        let small = build_model(&["a", "b"], [], 10).unwrap();
        assert!(matches!(
            valuate(&small, &Assignment::new(), &w("forall f_(o(oi)). T")),
            Err(SemError::CapExceeded {
                cardinality: 16,
                ..
            })
        ));
        let mut m2 = Model::new(m.frame_arc().clone());
        assert_eq!(
            m2.interpret(sig().constant("c").unwrap(), Value::Ind(5)),
            Err(SemError::OutsideDomain(sig().constant("c").unwrap()))
        );
    }
}
