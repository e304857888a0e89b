use std::sync::Arc;

use super::eval::{Assignment, Evaluator, Model};
use super::frame::{Frame, PartialValue, Value};
use super::SemError;
use crate::par::{self, Exec};
use crate::syntax::{Const, Var, Wff};

/// Mixed-radix decoding of `index` into one element per domain.
fn decode(domains: &[Arc<[Value]>], mut index: u64) -> impl Iterator<Item = Value> + '_ {
    domains.iter().map(move |d| {
        let n = d.len() as u64;
        let v = d[(index % n) as usize].clone();
        index /= n;
        v
    })
}

fn product_size(domains: &[Arc<[Value]>]) -> Result<u64, SemError> {
    domains
        .iter()
        .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64))
        .ok_or(SemError::SearchSpace)
}

fn check_bool(w: &Wff) -> Result<(), SemError> {
    if w.ty().is_bool() {
        Ok(())
    } else {
        Err(SemError::NotBoolean(w.ty().clone()))
    }
}

/// The first assignment (in enumeration order) over the free variables of
/// `w` under which `w` is not true, if any.
pub fn counterexample_with(
    exec: Exec,
    model: &Model,
    w: &Wff,
) -> Result<Option<Assignment>, SemError> {
    check_bool(w)?;
    if !w.is_core() {
        return Err(SemError::NotCore);
    }
    let vars: Vec<Var> = w.free_vars().to_vec();
    let domains = vars
        .iter()
        .map(|x| model.frame().domain(x.ty()))
        .collect::<Result<Vec<_>, _>>()?;
    let total = product_size(&domains)?;
    let found = par::find_first(
        exec,
        total,
        || Evaluator::new(model),
        |ev, i| {
            ev.set_bindings(&vars, decode(&domains, i));
            match ev.valuate(w) {
                Ok(PartialValue::Defined(Value::Bool(true))) => None,
                Ok(_) => Some(Ok(i)),
                Err(e) => Some(Err(e)),
            }
        },
    );
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(i)) => {
            let mut phi = Assignment::new();
            for (x, d) in vars.iter().zip(decode(&domains, i)) {
                phi.bind(x.clone(), d);
            }
            Ok(Some(phi))
        }
    }
}

impl Evaluator<'_> {
    /// Sequential counterexample search reusing this evaluator's caches;
    /// cheaper than [`counterexample`] when many small wffs are checked
    /// against one model.
    pub fn counterexample(&mut self, w: &Wff) -> Result<Option<Assignment>, SemError> {
        check_bool(w)?;
        if !w.is_core() {
            return Err(SemError::NotCore);
        }
        let vars: Vec<Var> = w.free_vars().to_vec();
        let domains = vars
            .iter()
            .map(|x| self.domain(x.ty()))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..product_size(&domains)? {
            self.set_bindings(&vars, decode(&domains, i));
            if self.valuate(w)? != PartialValue::Defined(Value::T) {
                let mut phi = Assignment::new();
                for (x, d) in vars.iter().zip(decode(&domains, i)) {
                    phi.bind(x.clone(), d);
                }
                return Ok(Some(phi));
            }
        }
        Ok(None)
    }
}

pub fn counterexample(model: &Model, w: &Wff) -> Result<Option<Assignment>, SemError> {
    counterexample_with(Exec::default(), model, w)
}

/// `M |= w`: true under every assignment.
pub fn is_valid_in_model(model: &Model, w: &Wff) -> Result<bool, SemError> {
    Ok(counterexample(model, w)?.is_none())
}

/// Every interpretation of `constants` over `frame`, in a fixed order.
pub struct Interpretations {
    frame: Arc<Frame>,
    constants: Vec<Const>,
    domains: Vec<Arc<[Value]>>,
    total: u64,
}

impl Interpretations {
    pub fn new(frame: Arc<Frame>, constants: Vec<Const>) -> Result<Interpretations, SemError> {
        let domains = constants
            .iter()
            .map(|c| frame.domain(c.ty()))
            .collect::<Result<Vec<_>, _>>()?;
        let total = product_size(&domains)?;
        Ok(Interpretations {
            frame,
            constants,
            domains,
            total,
        })
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn model(&self, index: u64) -> Model {
        let mut m = Model::new(self.frame.clone());
        for (c, v) in self.constants.iter().zip(decode(&self.domains, index)) {
            m.interpret(c.clone(), v)
                .expect("enumerated from the domain");
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Model> + '_ {
        (0..self.total).map(|i| self.model(i))
    }
}

/// A model and assignment falsifying a wff.
#[derive(Debug, Clone)]
pub struct CounterModel {
    pub model: Model,
    pub assignment: Assignment,
}

#[derive(Debug, Clone)]
pub enum SweepOutcome {
    /// True in every model with `1..=bound` individuals.
    ValidUpTo(usize),
    CounterModel(Box<CounterModel>),
}

/// Checks `w` in every standard model with `1..=max_base` individuals and
/// every interpretation of its nonlogical constants. Reports the first
/// counter-model in enumeration order.
pub fn sweep_validity_with(
    exec: Exec,
    w: &Wff,
    max_base: usize,
    cap: usize,
) -> Result<SweepOutcome, SemError> {
    let bases: Vec<usize> = (1..=max_base).collect();
    Ok(match counter_model_over(exec, w, &bases, cap)? {
        Some(cm) => SweepOutcome::CounterModel(Box::new(cm)),
        None => SweepOutcome::ValidUpTo(max_base),
    })
}

/// The first counter-model to `w` over frames with the given numbers of
/// individuals, trying every interpretation of its nonlogical constants.
pub fn counter_model_over(
    exec: Exec,
    w: &Wff,
    bases: &[usize],
    cap: usize,
) -> Result<Option<CounterModel>, SemError> {
    check_bool(w)?;
    let constants: Vec<Const> = w.nonlogical_constants().into_iter().collect();
    for &n in bases {
        let frame = Arc::new(Frame::with_size(n, cap)?);
        let interps = Interpretations::new(frame, constants.clone())?;
        // parallelise across interpretations, or inside the only one
        let inner = if interps.len() == 1 {
            exec
        } else {
            Exec::Sequential
        };
        let found = par::find_first(
            exec,
            interps.len(),
            || (),
            |_, i| {
                let m = interps.model(i);
                match counterexample_with(inner, &m, w) {
                    Ok(None) => None,
                    Ok(Some(phi)) => Some(Ok(CounterModel {
                        model: m,
                        assignment: phi,
                    })),
                    Err(e) => Some(Err(e)),
                }
            },
        );
        match found {
            None => {}
            Some(Ok(cm)) => return Ok(Some(cm)),
            Some(Err(e)) => return Err(e),
        }
    }
    Ok(None)
}

pub fn sweep_validity(w: &Wff, max_base: usize, cap: usize) -> Result<SweepOutcome, SemError> {
    sweep_validity_with(Exec::default(), w, max_base, cap)
}

/// Valuates `w` under every assignment to its free variables, returning
/// the first assignment for which `pred` fails.
pub fn find_assignment(
    model: &Model,
    w: &Wff,
    mut pred: impl FnMut(&PartialValue) -> bool,
) -> Result<Option<(Assignment, PartialValue)>, SemError> {
    let vars: Vec<Var> = w.free_vars().to_vec();
    let domains = vars
        .iter()
        .map(|x| model.frame().domain(x.ty()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ev = Evaluator::new(model);
    for i in 0..product_size(&domains)? {
        ev.set_bindings(&vars, decode(&domains, i));
        let v = ev.valuate(w)?;
        if !pred(&v) {
            let mut phi = Assignment::new();
            for (x, d) in vars.iter().zip(decode(&domains, i)) {
                phi.bind(x.clone(), d);
            }
            return Ok(Some((phi, v)));
        }
    }
    Ok(None)
}

/// Entailment checked assignment by assignment: whenever every member of
/// `hyps` is true, so is `conclusion`. Returns the first falsifying
/// assignment over the free variables of all of them.
pub fn entailment_counterexample(
    model: &Model,
    hyps: &[Wff],
    conclusion: &Wff,
) -> Result<Option<Assignment>, SemError> {
    check_bool(conclusion)?;
    let mut vars: Vec<Var> = conclusion.free_vars().to_vec();
    for h in hyps {
        check_bool(h)?;
        vars.extend(h.free_vars().iter().cloned());
    }
    vars.sort();
    vars.dedup();
    let domains = vars
        .iter()
        .map(|x| model.frame().domain(x.ty()))
        .collect::<Result<Vec<_>, _>>()?;
    let truth = |ev: &mut Evaluator, w: &Wff| -> Result<bool, SemError> {
        Ok(ev.valuate(w)? == PartialValue::Defined(Value::T))
    };
    let mut ev = Evaluator::new(model);
    for i in 0..product_size(&domains)? {
        ev.set_bindings(&vars, decode(&domains, i));
        let mut holds = true;
        for h in hyps {
            if !truth(&mut ev, h)? {
                holds = false;
                break;
            }
        }
        if holds && !truth(&mut ev, conclusion)? {
            let mut phi = Assignment::new();
            for (x, d) in vars.iter().zip(decode(&domains, i)) {
                phi.bind(x.clone(), d);
            }
            return Ok(Some(phi));
        }
    }
    Ok(None)
}
