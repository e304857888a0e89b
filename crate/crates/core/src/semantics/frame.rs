use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use super::SemError;
use crate::types::Type;

/// Default bound on the size of any single domain.
pub const DEFAULT_CAP: usize = 5000;

/// An element of some domain. Functions are explicit graphs indexed by
/// the rank of the argument in its domain; a `None` entry means the
/// function is undefined there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Ind(u32),
    Bool(bool),
    Fun(Arc<[Option<Value>]>),
}

impl Value {
    pub const T: Value = Value::Bool(true);
    pub const F: Value = Value::Bool(false);

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<&[Option<Value>]> {
        match self {
            Value::Fun(g) => Some(g),
            _ => None,
        }
    }
}

/// Either an element of the domain of the wff's type, or undefined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PartialValue {
    Defined(Value),
    Undefined,
}

impl PartialValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, PartialValue::Defined(_))
    }

    pub fn value(&self) -> Option<&Value> {
        match self {
            PartialValue::Defined(v) => Some(v),
            PartialValue::Undefined => None,
        }
    }
}

impl From<Option<Value>> for PartialValue {
    fn from(v: Option<Value>) -> PartialValue {
        v.map_or(PartialValue::Undefined, PartialValue::Defined)
    }
}

/// A full standard frame over a finite set of individuals. Domains are
/// enumerated on demand, in rank order, and cached.
#[derive(Debug)]
pub struct Frame {
    labels: Vec<String>,
    cap: usize,
    domains: RwLock<HashMap<Type, Arc<[Value]>>>,
}

impl Frame {
    pub fn new<S: AsRef<str>>(labels: &[S], cap: usize) -> Result<Frame, SemError> {
        if labels.is_empty() {
            return Err(SemError::EmptyBase);
        }
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SemError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Frame {
            labels,
            cap,
            domains: RwLock::default(),
        })
    }

    /// A frame with `n` individuals labelled `a`, `b`, ...
    pub fn with_size(n: usize, cap: usize) -> Result<Frame, SemError> {
        Frame::new(&default_labels(n), cap)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base_size(&self) -> usize {
        self.labels.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn label_index(&self, label: &str) -> Option<u32> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
    }

    /// `|D_t|`, saturating.
    pub fn cardinality(&self, ty: &Type) -> u128 {
        match ty {
            Type::Ind => self.labels.len() as u128,
            Type::Bool => 2,
            Type::Fun(a, b) => {
                let slots = self.cardinality(a) + u128::from(!a.is_bool());
                let n = self.cardinality(b);
                match u32::try_from(n) {
                    Ok(n) => slots.checked_pow(n).unwrap_or(u128::MAX),
                    Err(_) => u128::MAX,
                }
            }
        }
    }

    /// Every element of `D_t`; element `k` has rank `k`.
    pub fn domain(&self, ty: &Type) -> Result<Arc<[Value]>, SemError> {
        if let Some(d) = self.domains.read().expect("domain cache").get(ty) {
            return Ok(d.clone());
        }
        let cardinality = self.cardinality(ty);
        if cardinality > self.cap as u128 {
            return Err(SemError::CapExceeded {
                ty: ty.clone(),
                cardinality,
                cap: self.cap,
            });
        }
        let values: Arc<[Value]> = match ty {
            Type::Ind => (0..self.labels.len() as u32).map(Value::Ind).collect(),
            Type::Bool => [Value::F, Value::T].into(),
            Type::Fun(a, b) => {
                let options: Vec<Option<Value>> = {
                    let da = self.domain(a)?;
                    let total = da.iter().cloned().map(Some);
                    if a.is_bool() {
                        total.collect()
                    } else {
                        std::iter::once(None).chain(total).collect()
                    }
                };
                let slots = self.domain(b)?.len();
                let k = options.len();
                (0..cardinality as usize)
                    .map(|mut r| {
                        let graph: Arc<[Option<Value>]> = (0..slots)
                            .map(|_| {
                                let o = options[r % k].clone();
                                r /= k;
                                o
                            })
                            .collect();
                        Value::Fun(graph)
                    })
                    .collect()
            }
        };
        self.domains
            .write()
            .expect("domain cache")
            .insert(ty.clone(), values.clone());
        Ok(values)
    }

    /// Position of `v` in the enumeration of `D_t`. The domain of `t` must
    /// already be within the cap.
    pub fn rank(&self, v: &Value, ty: &Type) -> usize {
        match (v, ty) {
            (Value::Ind(i), _) => *i as usize,
            (Value::Bool(b), _) => usize::from(*b),
            (Value::Fun(g), Type::Fun(a, _)) => {
                let total = !a.is_bool();
                let k = self.cardinality(a) as usize + usize::from(total);
                g.iter().rev().fold(0, |r, e| {
                    let code = match e {
                        None => 0,
                        Some(x) => self.rank(x, a) + usize::from(total),
                    };
                    r * k + code
                })
            }
            (Value::Fun(_), _) => panic!("function value at non-function type {ty}"),
        }
    }

    /// Whether `v` is an element of `D_t`.
    pub fn contains(&self, ty: &Type, v: &Value) -> bool {
        match (ty, v) {
            (Type::Ind, Value::Ind(i)) => (*i as usize) < self.labels.len(),
            (Type::Bool, Value::Bool(_)) => true,
            (Type::Fun(a, b), Value::Fun(g)) => {
                self.cardinality(b) == g.len() as u128
                    && g.iter().all(|e| match e {
                        None => !a.is_bool(),
                        Some(x) => self.contains(a, x),
                    })
            }
            _ => false,
        }
    }

    /// Human-readable rendering: labels, `T`/`F`, and graphs as
    /// `{arg -> val, ...}` listing only defined entries.
    pub fn display(&self, v: &Value, ty: &Type) -> String {
        let mut out = String::new();
        self.write_value(&mut out, v, ty);
        out
    }

    fn write_value(&self, out: &mut String, v: &Value, ty: &Type) {
        match (v, ty) {
            (Value::Ind(i), _) => out.push_str(&self.labels[*i as usize]),
            (Value::Bool(b), _) => out.push(if *b { 'T' } else { 'F' }),
            (Value::Fun(g), Type::Fun(a, b)) => {
                let args = self.domain(b).ok();
                out.push('{');
                let mut first = true;
                for (i, e) in g.iter().enumerate() {
                    let Some(val) = e else { continue };
                    if !first {
                        out.push_str(", ");
                    }
                    first = false;
                    match &args {
                        Some(d) => self.write_value(out, &d[i], b),
                        None => {
                            let _ = write!(out, "#{i}");
                        }
                    }
                    out.push_str(" -> ");
                    self.write_value(out, val, a);
                }
                out.push('}');
            }
            (Value::Fun(_), _) => out.push('?'),
        }
    }
}

/// `a`, `b`, ..., `z`, `a1`, `b1`, ...
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            match i / 26 {
                0 => c.to_string(),
                k => format!("{c}{k}"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    // Independent count: a function space D_b -> D_a has one slot per
    // argument, each slot holding an element of D_a or (when a != o) a
    // gap, so we count graphs by brute-force listing tuples.
    fn brute_count(base: usize, ty: &Type) -> usize {
        match ty {
            Type::Ind => base,
            Type::Bool => 2,
            Type::Fun(a, b) => {
                let per_slot = brute_count(base, a) + usize::from(!a.is_bool());
                let slots = brute_count(base, b);
                let mut tuples = vec![vec![]];
                for _ in 0..slots {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|p: Vec<usize>| {
                            (0..per_slot).map(move |c| {
                                let mut q = p.clone();
                                q.push(c);
                                q
                            })
                        })
                        .collect();
                }
                tuples.len()
            }
        }
    }

    #[test]
    fn domain_sizes() {
        let two = Frame::with_size(2, DEFAULT_CAP).unwrap();
        assert_eq!(two.domain(&t("i")).unwrap().len(), 2);
        assert_eq!(two.domain(&t("ii")).unwrap().len(), 9);
        assert_eq!(two.domain(&t("oi")).unwrap().len(), 4);
        let one = Frame::with_size(1, DEFAULT_CAP).unwrap();
        assert_eq!(one.domain(&t("ii")).unwrap().len(), 2);
        for s in ["o", "oo", "ooo", "io", "iii", "o(oi)", "(ii)i", "i(oi)"] {
            for (n, f) in [(1, &one), (2, &two)] {
                assert_eq!(
                    f.domain(&t(s)).unwrap().len(),
                    brute_count(n, &t(s)),
                    "{s} at {n}"
                );
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = Frame::with_size(2, 10).unwrap();
        assert_eq!(
            f.domain(&t("o(oi)")),
            Err(SemError::CapExceeded {
                ty: t("o(oi)"),
                cardinality: 16,
                cap: 10
            })
        );
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Frame::new::<&str>(&[], 10).unwrap_err(),
            SemError::EmptyBase
        );
        assert_eq!(
            Frame::new(&["a", "a"], 10).unwrap_err(),
            SemError::DuplicateLabel("a".into())
        );
    }

    #[test]
    fn predicate_domains_are_total() {
        let f = Frame::with_size(2, DEFAULT_CAP).unwrap();
        for s in ["oi", "o(ii)", "o(oi)", "oo"] {
            for v in f.domain(&t(s)).unwrap().iter() {
                assert!(v.graph().unwrap().iter().all(Option::is_some));
            }
        }
        // and partial graphs do occur elsewhere
        assert!(f
            .domain(&t("ii"))
            .unwrap()
            .iter()
            .any(|v| v.graph().unwrap().contains(&None)));
    }

    #[test]
    fn ranks_match_enumeration() {
        let f = Frame::with_size(2, DEFAULT_CAP).unwrap();
        for s in ["i", "o", "ii", "oi", "(ii)i", "o(oi)", "i(oi)", "ooi"] {
            let ty = t(s);
            let d = f.domain(&ty).unwrap();
            for (k, v) in d.iter().enumerate() {
                assert_eq!(f.rank(v, &ty), k, "{s}");
                assert!(f.contains(&ty, v));
            }
            let mut sorted: Vec<_> = d.iter().collect();
            sorted.dedup();
            assert_eq!(sorted.len(), d.len());
        }
    }

    #[test]
    fn display_graphs() {
        let f = Frame::with_size(2, DEFAULT_CAP).unwrap();
        let ty = t("ii");
        let v = Value::Fun(vec![Some(Value::Ind(1)), None].into());
        assert_eq!(f.display(&v, &ty), "{a -> b}");
        assert_eq!(f.display(&Value::T, &Type::Bool), "T");
    }

    #[test]
    fn labels() {
        assert_eq!(default_labels(3), ["a", "b", "c"]);
        assert_eq!(default_labels(28)[27], "b1");
    }
}
