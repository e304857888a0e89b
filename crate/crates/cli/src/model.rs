//! Model files: JSON documents describing one finite standard model.
//!
//! ```json
//! { "base": ["a", "b"],
//!   "types": { "c": "i", "p": "oi" },
//!   "constants": { "c": "a", "p": { "entries": [["a", "T"], ["b", "F"]] } },
//!   "cap": 5000 }
//! ```
//!
//! A value term is a base label, `"T"`/`"F"`, or a graph object whose
//! entries pair argument terms with value terms. Arguments missing from a
//! graph are undefined there, which only functions into non-`o` types
//! allow. `types` is optional: constants may instead be typed by the wff or
//! script that uses them.

use std::collections::BTreeMap;
use std::sync::Arc;

use qu0_core::semantics::{Frame, Model, Value, DEFAULT_CAP};
use qu0_core::syntax::{parse_type, Const, Signature, Type};
use serde::Deserialize;
use serde_json::Value as Json;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub base: Vec<String>,
    #[serde(default)]
    pub constants: BTreeMap<String, Json>,
    #[serde(default)]
    pub types: BTreeMap<String, String>,
    pub cap: Option<usize>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<ModelFile, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Adds the declared constant types to `sig`.
    pub fn declare_types(&self, sig: &mut Signature) -> Result<(), CliError> {
        for (name, t) in &self.types {
            let ty = parse_type(t).map_err(|e| CliError::Model(format!("type of {name}: {e}")))?;
            match sig.get(name) {
                Some(old) if *old == ty => {}
                Some(old) => {
                    return Err(CliError::Model(format!(
                        "{name} has type {ty} here but {old} elsewhere"
                    )))
                }
                None => sig
                    .declare(name, ty)
                    .map_err(|e| CliError::Model(e.to_string()))?,
            }
        }
        Ok(())
    }

    /// The model, interpreting every constant of `sig` that has a value.
    /// `cap` overrides the file's cap.
    pub fn build(&self, sig: &Signature, cap: Option<usize>) -> Result<Model, CliError> {
        let cap = cap.or(self.cap).unwrap_or(DEFAULT_CAP);
        let frame = Arc::new(Frame::new(&self.base, cap)?);
        let mut model = Model::new(frame.clone());
        for (name, term) in &self.constants {
            // constants no wff mentions have no known type
            let Some(c) = sig.constant(name) else {
                continue;
            };
            let v =
                value(&frame, term, c.ty()).map_err(|m| CliError::Model(format!("{name}: {m}")))?;
            model.interpret(c, v)?;
        }
        Ok(model)
    }
}

/// The element of `D_ty` denoted by `term`.
pub fn value(frame: &Frame, term: &Json, ty: &Type) -> Result<Value, String> {
    match ty {
        Type::Ind => {
            let label = term
                .as_str()
                .ok_or_else(|| format!("expected a label, found {term}"))?;
            frame
                .label_index(label)
                .map(Value::Ind)
                .ok_or_else(|| format!("{label:?} is not in the base"))
        }
        Type::Bool => match term {
            Json::String(s) if s == "T" => Ok(Value::T),
            Json::String(s) if s == "F" => Ok(Value::F),
            Json::Bool(b) => Ok(Value::Bool(*b)),
            _ => Err(format!("expected \"T\" or \"F\", found {term}")),
        },
        Type::Fun(cod, dom) => {
            let entries = term
                .get("entries")
                .and_then(Json::as_array)
                .ok_or_else(|| {
                    format!("expected {{\"entries\": [...]}} for type {ty}, found {term}")
                })?;
            let args = frame.domain(dom).map_err(|e| e.to_string())?;
            let mut graph: Vec<Option<Value>> = vec![None; args.len()];
            for e in entries {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| format!("graph entry {e} is not an [argument, value] pair"))?;
                let a = value(frame, &pair[0], dom)?;
                let v = value(frame, &pair[1], cod)?;
                let slot = &mut graph[frame.rank(&a, dom)];
                match slot {
                    Some(old) if *old != v => {
                        return Err(format!("two values for argument {}", pair[0]))
                    }
                    _ => *slot = Some(v),
                }
            }
            if cod.is_bool() && graph.iter().any(Option::is_none) {
                return Err(format!("functions of type {ty} must be total"));
            }
            Ok(Value::Fun(graph.into()))
        }
    }
}

/// `name = element` lines for the interpreted constants, sorted by name.
pub fn describe_constants(model: &Model) -> Vec<(Const, String)> {
    let mut out: Vec<(Const, String)> = model
        .constants()
        .map(|(c, v)| (c.clone(), model.frame().display(v, c.ty())))
        .collect();
    out.sort_by(|a, b| a.0.name().cmp(b.0.name()));
    out
}
