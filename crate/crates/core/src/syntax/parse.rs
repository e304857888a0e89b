use std::fmt;

use thiserror::Error;

use super::wff::{is_variable_base, Abbrev, Const, TypeError, Var, Wff};
use super::Signature;
use crate::types::{parse_type, Type, TypeParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    BadChar(char),
    #[error("bad type annotation: {0}")]
    Annotation(TypeParseError),
    #[error("compound type annotations must be parenthesized")]
    UnparenthesizedType,
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unknown constant {0:?}")]
    UnknownConstant(String),
    #[error("constant {name:?} has type {declared}, annotated {annotated}")]
    ConstantAnnotation {
        name: String,
        declared: Type,
        annotated: Type,
    },
    #[error("variable {0:?} needs a type annotation (it is not bound here)")]
    Untyped(String),
    #[error("{0} requires a type annotation")]
    MissingAnnotation(&'static str),
    #[error("binder {0:?} must be a variable")]
    BadBinder(String),
    #[error("{0}")]
    Type(TypeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident {
        name: String,
        sup: u32,
        ann: Option<Type>,
    },
    LBrack,
    RBrack,
    LParen,
    RParen,
    Dot,
    Lambda,
    Not,
    And,
    Or,
    Implies,
    Eq,
    Neq,
    QuasiEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident { name, .. } => return write!(f, "identifier {name:?}"),
            Tok::LBrack => "'['",
            Tok::RBrack => "']'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Dot => "'.'",
            Tok::Lambda => "'\\'",
            Tok::Not => "'~'",
            Tok::And => "'/\\'",
            Tok::Or => "'\\/'",
            Tok::Implies => "'=>'",
            Tok::Eq => "'='",
            Tok::Neq => "'/='",
            Tok::QuasiEq => "'~='",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn err(offset: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { offset, kind }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if c.is_ascii_alphabetic() {
            while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            let name = text[start..i].to_string();
            let mut sup = 0;
            if i < b.len() && b[i] == b'^' {
                let s = i + 1;
                let mut j = s;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                sup = text[s..j]
                    .parse::<u32>()
                    .ok()
                    .filter(|n| *n > 0)
                    .ok_or_else(|| err(i, ParseErrorKind::BadChar('^')))?;
                i = j;
            }
            let mut ann = None;
            if i < b.len() && b[i] == b'_' {
                i += 1;
                match b.get(i) {
                    Some(b'i') | Some(b'o') => {
                        ann = Some(if b[i] == b'i' { Type::Ind } else { Type::Bool });
                        i += 1;
                        if i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                            return Err(err(i, ParseErrorKind::UnparenthesizedType));
                        }
                    }
                    Some(b'(') => {
                        let s = i;
                        let mut depth = 0usize;
                        loop {
                            match b.get(i) {
                                Some(b'(') => depth += 1,
                                Some(b')') => {
                                    depth -= 1;
                                    if depth == 0 {
                                        i += 1;
                                        break;
                                    }
                                }
                                Some(_) => {}
                                None => {
                                    return Err(err(
                                        s,
                                        ParseErrorKind::Annotation(TypeParseError::Unbalanced(0)),
                                    ))
                                }
                            }
                            i += 1;
                        }
                        ann = Some(
                            parse_type(&text[s..i])
                                .map_err(|e| err(s, ParseErrorKind::Annotation(e)))?,
                        );
                    }
                    _ => {
                        return Err(err(i, ParseErrorKind::Annotation(TypeParseError::Empty)));
                    }
                }
            }
            Tok::Ident { name, sup, ann }
        } else if two("/\\") {
            i += 2;
            Tok::And
        } else if two("\\/") {
            i += 2;
            Tok::Or
        } else if two("=>") {
            i += 2;
            Tok::Implies
        } else if two("/=") {
            i += 2;
            Tok::Neq
        } else if two("~=") {
            i += 2;
            Tok::QuasiEq
        } else {
            i += 1;
            match c {
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '.' => Tok::Dot,
                '\\' => Tok::Lambda,
                '~' => Tok::Not,
                '=' => Tok::Eq,
                other => return Err(err(start, ParseErrorKind::BadChar(other))),
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a mut Signature,
    lenient: bool,
    binders: Vec<Var>,
}

/// Parses a surface wff. Every constant must be declared in `sig` (or be
/// logical); abbreviations stay folded.
pub fn parse_wff(text: &str, sig: &Signature) -> Result<Wff, ParseError> {
    let mut scratch = sig.clone();
    Parser::new(text, &mut scratch, false)?.run()
}

/// Like [`parse_wff`], but an annotated identifier that is not yet
/// declared is added to `sig` at its annotated type.
pub fn parse_wff_lenient(text: &str, sig: &mut Signature) -> Result<Wff, ParseError> {
    Parser::new(text, sig, true)?.run()
}

type PResult = Result<Wff, ParseError>;

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a mut Signature, lenient: bool) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
            lenient,
            binders: Vec::new(),
        })
    }

    fn run(mut self) -> PResult {
        let w = self.expr0()?;
        self.expect(Tok::Eof, "end of input")?;
        Ok(w)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(err(
            self.offset(),
            ParseErrorKind::Unexpected {
                expected,
                found: self.peek().to_string(),
            },
        ))
    }

    fn expect(&mut self, t: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn typed(&self, offset: usize, r: Result<Wff, TypeError>) -> PResult {
        r.map_err(|e| err(offset, ParseErrorKind::Type(e)))
    }

    fn binder_keyword(&self) -> Option<&'static str> {
        match self.peek() {
            Tok::Lambda => Some("lambda"),
            Tok::Ident {
                name,
                sup: 0,
                ann: None,
            } => match name.as_str() {
                "forall" => Some("forall"),
                "exists" => Some("exists"),
                "exists1" => Some("exists1"),
                "I" => Some("I"),
                _ => None,
            },
            _ => None,
        }
    }

    fn expr0(&mut self) -> PResult {
        match self.binder_keyword() {
            Some(kw) => self.binder(kw),
            None => self.expr1(),
        }
    }

    fn binder(&mut self, kw: &'static str) -> PResult {
        let start = self.offset();
        self.bump();
        let (off, tok) = self.bump();
        let x = match tok {
            Tok::Ident {
                name,
                sup,
                ann: Some(ty),
            } if is_variable_base(&name) => Var::indexed(&name, sup, ty),
            Tok::Ident {
                name, ann: None, ..
            } if is_variable_base(&name) => {
                return Err(err(
                    off,
                    ParseErrorKind::MissingAnnotation("a bound variable"),
                ))
            }
            other => return Err(err(off, ParseErrorKind::BadBinder(other.to_string()))),
        };
        self.expect(Tok::Dot, "'.' after bound variable")?;
        self.binders.push(x.clone());
        let body = self.expr0();
        self.binders.pop();
        let body = body?;
        let r = match kw {
            "lambda" => Ok(Wff::abs(x, body)),
            "forall" => Wff::abbr(Abbrev::Forall(x, body)),
            "exists" => Wff::abbr(Abbrev::Exists(x, body)),
            "exists1" => Wff::abbr(Abbrev::ExistsUnique(x, body)),
            _ => Wff::abbr(Abbrev::Description(x, body)),
        };
        self.typed(start, r)
    }

    fn expr1(&mut self) -> PResult {
        let lhs = self.expr2()?;
        if *self.peek() == Tok::Implies {
            let off = self.offset();
            self.bump();
            let rhs = self.rhs(Self::expr1)?;
            return self.typed(off, Wff::abbr(Abbrev::Implies(lhs, rhs)));
        }
        Ok(lhs)
    }

    /// Right operands may start with a binder, which then extends as far
    /// right as possible.
    fn rhs(&mut self, next: fn(&mut Self) -> PResult) -> PResult {
        match self.binder_keyword() {
            Some(kw) => self.binder(kw),
            None => next(self),
        }
    }

    fn expr2(&mut self) -> PResult {
        let mut lhs = self.expr3()?;
        while *self.peek() == Tok::Or {
            let off = self.offset();
            self.bump();
            let rhs = self.rhs(Self::expr3)?;
            lhs = self.typed(off, Wff::abbr(Abbrev::Or(lhs, rhs)))?;
        }
        Ok(lhs)
    }

    fn expr3(&mut self) -> PResult {
        let mut lhs = self.expr4()?;
        while *self.peek() == Tok::And {
            let off = self.offset();
            self.bump();
            let rhs = self.rhs(Self::expr4)?;
            lhs = self.typed(off, Wff::abbr(Abbrev::And(lhs, rhs)))?;
        }
        Ok(lhs)
    }

    fn expr4(&mut self) -> PResult {
        let lhs = self.expr5()?;
        let op = self.peek().clone();
        if matches!(op, Tok::Eq | Tok::Neq | Tok::QuasiEq) {
            let off = self.offset();
            self.bump();
            let rhs = self.rhs(Self::expr5)?;
            let r = match op {
                Tok::Eq => Wff::equals(lhs, rhs),
                Tok::Neq => Wff::abbr(Abbrev::NotEquals(lhs, rhs)),
                _ => Wff::abbr(Abbrev::QuasiEquals(lhs, rhs)),
            };
            return self.typed(off, r);
        }
        Ok(lhs)
    }

    fn expr5(&mut self) -> PResult {
        if *self.peek() == Tok::Not {
            let off = self.offset();
            self.bump();
            let a = self.rhs(Self::expr5)?;
            return self.typed(off, Wff::abbr(Abbrev::Not(a)));
        }
        self.application()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LBrack | Tok::LParen => true,
            Tok::Ident {
                name,
                sup: 0,
                ann: None,
            } => !matches!(name.as_str(), "forall" | "exists" | "exists1" | "I"),
            Tok::Ident { .. } => true,
            _ => false,
        }
    }

    fn application(&mut self) -> PResult {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let off = self.offset();
            let a = self.atom()?;
            f = self.typed(off, Wff::app(f, a))?;
        }
        Ok(f)
    }

    fn connective_const(&self) -> Option<Abbrev> {
        let next = self.toks.get(self.pos + 1).map(|t| &t.1);
        let close = self.toks.get(self.pos + 2).map(|t| &t.1);
        if *self.peek() != Tok::LParen || close != Some(&Tok::RParen) {
            return None;
        }
        match next {
            Some(Tok::Not) => Some(Abbrev::NotConst),
            Some(Tok::And) => Some(Abbrev::AndConst),
            Some(Tok::Or) => Some(Abbrev::OrConst),
            Some(Tok::Implies) => Some(Abbrev::ImpliesConst),
            _ => None,
        }
    }

    fn atom(&mut self) -> PResult {
        if let Some(c) = self.connective_const() {
            let off = self.offset();
            self.pos += 3;
            return self.typed(off, Wff::abbr(c));
        }
        let off = self.offset();
        match self.bump().1 {
            Tok::LBrack => {
                let w = self.expr0()?;
                self.expect(Tok::RBrack, "']'")?;
                Ok(w)
            }
            Tok::LParen => {
                let w = self.expr0()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(w)
            }
            Tok::Ident { name, sup, ann } => self.ident(off, name, sup, ann),
            other => {
                self.pos -= 1;
                let _ = other;
                self.unexpected("a wff")
            }
        }
    }

    fn ident(&mut self, off: usize, name: String, sup: u32, ann: Option<Type>) -> PResult {
        if is_variable_base(&name) {
            return match ann {
                Some(ty) => Ok(Wff::var(Var::indexed(&name, sup, ty))),
                None => self
                    .binders
                    .iter()
                    .rev()
                    .find(|b| b.name().base() == name && b.name().index() == sup)
                    .map(|b| Wff::var(b.clone()))
                    .ok_or_else(|| {
                        let shown = if sup == 0 {
                            name.clone()
                        } else {
                            format!("{name}^{sup}")
                        };
                        err(off, ParseErrorKind::Untyped(shown))
                    }),
            };
        }
        if sup != 0 {
            return Err(err(off, ParseErrorKind::BadChar('^')));
        }
        match (name.as_str(), ann) {
            ("T", None) => Ok(Wff::abbr_ok(Abbrev::True)),
            ("F", None) => Ok(Wff::abbr_ok(Abbrev::False)),
            ("def", None) | ("undef", None) => {
                self.expect(Tok::LParen, "'(' after def/undef")?;
                let a = self.expr0()?;
                self.expect(Tok::RParen, "')'")?;
                let ab = if name == "def" {
                    Abbrev::IsDefined(a)
                } else {
                    Abbrev::IsUndefined(a)
                };
                self.typed(off, Wff::abbr(ab))
            }
            ("Q", Some(t)) => Ok(Wff::q(&t)),
            ("iota", Some(t)) => self.typed(off, Wff::iota(&t)),
            ("bot", Some(t)) => self.typed(off, Wff::abbr(Abbrev::Bottom(t))),
            ("Q", None) | ("iota", None) | ("bot", None) => Err(err(
                off,
                ParseErrorKind::MissingAnnotation("a logical constant"),
            )),
            (kw @ ("forall" | "exists" | "exists1" | "I"), _) => Err(err(
                off,
                ParseErrorKind::Unexpected {
                    expected: "a wff",
                    found: format!("binder {kw:?} (bracket it)"),
                },
            )),
            (_, ann) => match (self.sig.get(&name).cloned(), ann) {
                (Some(declared), Some(annotated)) if declared != annotated => Err(err(
                    off,
                    ParseErrorKind::ConstantAnnotation {
                        name,
                        declared,
                        annotated,
                    },
                )),
                (Some(declared), _) => Ok(Wff::constant(Const::nonlogical(&name, declared))),
                (None, Some(annotated)) if self.lenient => {
                    self.sig
                        .declare(&name, annotated.clone())
                        .map_err(|_| err(off, ParseErrorKind::UnknownConstant(name.clone())))?;
                    Ok(Wff::constant(Const::nonlogical(&name, annotated)))
                }
                (None, _) => Err(err(off, ParseErrorKind::UnknownConstant(name))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::WffKind;

    fn sig() -> Signature {
        Signature::new()
            .with("c", Type::Ind)
            .unwrap()
            .with("p", Type::pred(Type::Ind))
            .unwrap()
    }

    fn p(s: &str) -> Wff {
        parse_wff(s, &sig()).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn atomic_variable() {
        assert_eq!(p("x_i"), Wff::var(Var::new("x", Type::Ind)));
    }

    #[test]
    fn equality_is_q_application() {
        let x = Wff::var(Var::new("x", Type::Ind));
        let y = Wff::var(Var::new("y", Type::Ind));
        let expected = Wff::app(Wff::app(Wff::q(&Type::Ind), x).unwrap(), y).unwrap();
        assert_eq!(p("x_i = y_i"), expected);
        assert_eq!(p("Q_i x_i y_i"), expected);
    }

    #[test]
    fn identity_abstraction() {
        let x = Var::new("x", Type::Ind);
        let w = p("\\x_i. x_i");
        assert_eq!(w, Wff::abs(x.clone(), Wff::var(x.clone())));
        assert_eq!(p("\\x_i. x"), w);
        assert_eq!(w.ty().to_string(), "ii");
    }

    #[test]
    fn bound_shorthand_resolves_innermost() {
        let w = p("\\x_i. \\x_o. x");
        let (_, inner) = w.as_abs().unwrap();
        let (_, body) = inner.as_abs().unwrap();
        assert_eq!(body.ty(), &Type::Bool);
    }

    #[test]
    fn precedence() {
        let w = p("~x_o /\\ y_o \\/ z_o => x_o");
        let Some(Abbrev::Implies(l, _)) = w.as_abbr() else {
            panic!("{w:?}")
        };
        let Some(Abbrev::Or(a, _)) = l.as_abbr() else {
            panic!()
        };
        let Some(Abbrev::And(n, _)) = a.as_abbr() else {
            panic!()
        };
        assert!(matches!(n.as_abbr(), Some(Abbrev::Not(_))));
        // => is right associative
        let w = p("x_o => y_o => z_o");
        let Some(Abbrev::Implies(_, r)) = w.as_abbr() else {
            panic!()
        };
        assert!(matches!(r.as_abbr(), Some(Abbrev::Implies(..))));
    }

    #[test]
    fn binder_on_the_right_extends() {
        let w = p("x_o /\\ forall y_i. p y /\\ T");
        let Some(Abbrev::And(_, r)) = w.as_abbr() else {
            panic!()
        };
        let Some(Abbrev::Forall(_, body)) = r.as_abbr() else {
            panic!()
        };
        assert!(matches!(body.as_abbr(), Some(Abbrev::And(..))));
    }

    #[test]
    fn constants_with_and_without_annotation() {
        assert_eq!(p("c"), p("c_i"));
        let e = parse_wff("c_o", &sig()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ConstantAnnotation { .. }));
        let e = parse_wff("d_i", &sig()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownConstant(_)));
        let mut s = sig();
        let w = parse_wff_lenient("d_i = c", &mut s).unwrap();
        assert!(w.is_closed());
        assert_eq!(s.get("d"), Some(&Type::Ind));
    }

    #[test]
    fn connective_constants_and_keywords() {
        assert!(matches!(p("(/\\)").as_abbr(), Some(Abbrev::AndConst)));
        assert!(matches!(p("(~) T").kind(), WffKind::App(..)));
        assert!(matches!(p("bot_i").as_abbr(), Some(Abbrev::Bottom(_))));
        assert!(matches!(p("def(c)").as_abbr(), Some(Abbrev::IsDefined(_))));
        assert_eq!(p("iota_i").ty().to_string(), "i(oi)");
        assert_eq!(p("I x_i. p x").ty(), &Type::Ind);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_wff("p x_o", &sig()).unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(matches!(e.kind, ParseErrorKind::Type(_)));
        let e = parse_wff("iota_o", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Type(TypeError::SelectorAtBool));
        let e = parse_wff("x", &sig()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Untyped(_)));
        let e = parse_wff("x_oi", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnparenthesizedType);
        let e = parse_wff("[x_o", &sig()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));
        let e = parse_wff("x_o $", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadChar('$'));
        assert!(parse_wff("bot_o", &sig()).is_err());
    }
}
