//! Type symbols: `i` (individuals), `o` (truth values) and `(ab)`, the
//! type of functions from `b` to `a`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A type symbol.
///
/// `Fun(codomain, domain)` is the Church-style `(αβ)`: functions from the
/// domain to the codomain. Application associates to the left, so
/// `oii` means `((oi)i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Ind,
    Bool,
    Fun(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn fun(codomain: Type, domain: Type) -> Type {
        Type::Fun(Arc::new(codomain), Arc::new(domain))
    }

    /// `o` followed by `arg`: the predicate type `(o arg)`.
    pub fn pred(arg: Type) -> Type {
        Type::fun(Type::Bool, arg)
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Type::Bool)
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Type::Fun(..))
    }

    /// Splits a function type into `(codomain, domain)`.
    pub fn as_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Fun(c, d) => Some((c, d)),
            _ => None,
        }
    }

    /// Type of `Q` at this type: `o a a`.
    pub fn equality(&self) -> Type {
        Type::fun(Type::pred(self.clone()), self.clone())
    }

    /// Type of `iota` at this type: `a (o a)`.
    pub fn selector(&self) -> Type {
        Type::fun(self.clone(), Type::pred(self.clone()))
    }

    fn write_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Ind => f.write_str("i"),
            Type::Bool => f.write_str("o"),
            Type::Fun(c, d) => {
                c.write_inner(f)?;
                if d.is_fun() {
                    write!(f, "({})", d)
                } else {
                    d.write_inner(f)
                }
            }
        }
    }

    /// The form used after `_` in annotations: bare for base types,
    /// parenthesized otherwise.
    pub fn annotation(&self) -> String {
        if self.is_fun() {
            format!("({})", self)
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Type {
    /// Left-associated shorthand: `((oi)i)` prints as `oii`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_inner(f)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeParseError {
    #[error("empty type")]
    Empty,
    #[error("unbalanced parentheses at offset {0}")]
    Unbalanced(usize),
    #[error("unexpected character {1:?} at offset {0}")]
    Stray(usize, char),
}

/// Parses a type symbol over `i`, `o`, `(`, `)`; whitespace is ignored.
pub fn parse_type(text: &str) -> Result<Type, TypeParseError> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut pos = 0;
    let ty = parse_seq(&chars, &mut pos, 0)?;
    match chars.get(pos) {
        None => ty.ok_or(TypeParseError::Empty),
        Some(&(off, ')')) => Err(TypeParseError::Unbalanced(off)),
        Some(&(off, c)) => Err(TypeParseError::Stray(off, c)),
    }
}

fn parse_seq(
    chars: &[(usize, char)],
    pos: &mut usize,
    depth: usize,
) -> Result<Option<Type>, TypeParseError> {
    let mut acc: Option<Type> = None;
    while let Some(&(off, c)) = chars.get(*pos) {
        let next = match c {
            'i' => Type::Ind,
            'o' => Type::Bool,
            '(' => {
                *pos += 1;
                let inner = parse_seq(chars, pos, depth + 1)?;
                match chars.get(*pos) {
                    Some(&(_, ')')) => {}
                    _ => return Err(TypeParseError::Unbalanced(off)),
                }
                inner.ok_or(TypeParseError::Empty)?
            }
            ')' if depth > 0 => return Ok(acc),
            ')' => return Err(TypeParseError::Unbalanced(off)),
            other => return Err(TypeParseError::Stray(off, other)),
        };
        *pos += 1;
        acc = Some(match acc {
            None => next,
            Some(f) => Type::fun(f, next),
        });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_base_and_arrow() {
        assert_eq!(parse_type("o").unwrap(), Type::Bool);
        assert_eq!(
            parse_type("(oi)").unwrap(),
            Type::fun(Type::Bool, Type::Ind)
        );
        assert_eq!(
            parse_type("oii").unwrap(),
            Type::fun(Type::fun(Type::Bool, Type::Ind), Type::Ind)
        );
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_type(""), Err(TypeParseError::Empty));
        assert_eq!(parse_type("  "), Err(TypeParseError::Empty));
        assert!(matches!(
            parse_type("(oi"),
            Err(TypeParseError::Unbalanced(_))
        ));
        assert!(matches!(
            parse_type("oi)"),
            Err(TypeParseError::Unbalanced(_))
        ));
        assert!(matches!(parse_type("()"), Err(TypeParseError::Empty)));
        assert!(matches!(
            parse_type("ox"),
            Err(TypeParseError::Stray(1, 'x'))
        ));
    }

    #[test]
    fn left_association_over_all_three_letter_words() {
        for w in ["iii", "iio", "ioi", "ioo", "oii", "oio", "ooi", "ooo"] {
            let c: Vec<char> = w.chars().collect();
            let bracketed = format!("(({}{}){})", c[0], c[1], c[2]);
            assert_eq!(parse_type(w).unwrap(), parse_type(&bracketed).unwrap());
        }
    }

    #[test]
    fn prints_shorthand() {
        let t = parse_type("o(oi)").unwrap();
        assert_eq!(t.to_string(), "o(oi)");
        assert_eq!(t.annotation(), "(o(oi))");
        assert_eq!(Type::Ind.equality().to_string(), "oii");
        assert_eq!(Type::Ind.selector().to_string(), "i(oi)");
    }

    fn arb_type() -> impl Strategy<Value = Type> {
        let leaf = prop_oneof![Just(Type::Ind), Just(Type::Bool)];
        leaf.prop_recursive(5, 32, 2, |inner| {
            (inner.clone(), inner).prop_map(|(c, d)| Type::fun(c, d))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_type()) {
            prop_assert_eq!(parse_type(&t.to_string()).unwrap(), t.clone());
            prop_assert_eq!(parse_type(&t.annotation()).unwrap(), t);
        }
    }
}
