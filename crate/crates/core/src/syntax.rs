//! Parser for the canonical constructor-term notation used to persist
//! transformers, variables and relaxers, e.g.
//! `Concat(ConstStr("{"),Concat(SubStr(AbsPos(0),AbsPos(-1)),ConstStr("}")))`.
//!
//! ```text
//! term   := ident [ "(" term { "," term } ")" ] | string | int | "#" int
//! string := '"' { char | '\"' | '\\' | '\n' | '\t' | '\r' | '\u{' hex '}' } '"'
//! int    := [ "-" ] digit { digit }
//! ```
//!
//! Whitespace between tokens is ignored. Columns in errors are 1-based
//! character offsets.

use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::pattern::VarId;
use crate::transform::{Atomic, Position, StringExpr, StringTransformer, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct SyntaxError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Term {
    App {
        name: String,
        args: Vec<Term>,
        column: usize,
    },
    Str(String, usize),
    Int(i64, usize),
    Input(usize, usize),
}

impl Term {
    fn column(&self) -> usize {
        match self {
            Term::App { column, .. }
            | Term::Str(_, column)
            | Term::Int(_, column)
            | Term::Input(_, column) => *column,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            column: self.column(),
            message: message.into(),
        }
    }

    /// Destructures an application with exactly `arity` arguments.
    pub(crate) fn app(&self, arity: usize) -> Result<(&str, &[Term]), SyntaxError> {
        match self {
            Term::App { name, args, .. } if args.len() == arity => Ok((name, args)),
            Term::App { name, args, .. } => Err(self.error(format!(
                "{name} expects {arity} argument(s), found {}",
                args.len()
            ))),
            _ => Err(self.error("expected a constructor")),
        }
    }

    pub(crate) fn name(&self) -> Option<&str> {
        match self {
            Term::App { name, .. } => Some(name),
            _ => None,
        }
    }

    fn int(&self) -> Result<i64, SyntaxError> {
        match self {
            Term::Int(v, _) => Ok(*v),
            _ => Err(self.error("expected an integer")),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        self.skip_ws();
        let column = self.pos + 1;
        match self.peek() {
            Some('"') => Ok(Term::Str(self.string()?, column)),
            Some('#') => {
                self.pos += 1;
                let n = self.integer()?;
                if n < 0 {
                    return self.err("input index must be non-negative");
                }
                Ok(Term::Input(n as usize, column))
            }
            Some(c) if c == '-' || c.is_ascii_digit() => Ok(Term::Int(self.integer()?, column)),
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.skip_ws();
                let mut args = Vec::new();
                if self.peek() == Some('(') {
                    self.pos += 1;
                    loop {
                        args.push(self.term()?);
                        self.skip_ws();
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return self.err("expected ',' or ')'"),
                        }
                    }
                }
                Ok(Term::App { name, args, column })
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<i64, SyntaxError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("malformed integer")
        })
    }

    fn string(&mut self) -> Result<String, SyntaxError> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.err("unterminated string"),
                Some('"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    self.pos += 1;
                    let c = match self.peek() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('u') => {
                            self.pos += 1;
                            self.expect('{')?;
                            let start = self.pos;
                            while self.peek().is_some_and(|c| c.is_ascii_hexdigit()) {
                                self.pos += 1;
                            }
                            let hex: String = self.chars[start..self.pos].iter().collect();
                            let c = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                            match (c, self.peek()) {
                                (Some(c), Some('}')) => c,
                                _ => return self.err("malformed unicode escape"),
                            }
                        }
                        _ => return self.err("unknown escape"),
                    };
                    self.pos += 1;
                    out.push(c);
                }
                Some(c) => {
                    self.pos += 1;
                    out.push(c);
                }
            }
        }
    }

    fn finish(mut self, term: Term) -> Result<Term, SyntaxError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return self.err("trailing input");
        }
        Ok(term)
    }
}

pub(crate) fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.finish(t)
}

pub(crate) fn var_from_term(t: &Term) -> Result<VarId, SyntaxError> {
    let name = t.name().ok_or_else(|| t.error("expected a variable"))?;
    match name {
        "Top" => {
            t.app(0)?;
            Ok(VarId::Top)
        }
        "LVar" => Ok(VarId::left(var_from_term(&t.app(1)?.1[0])?)),
        "RVar" => Ok(VarId::right(var_from_term(&t.app(1)?.1[0])?)),
        "BVar" => {
            let (_, a) = t.app(2)?;
            Ok(VarId::binary(var_from_term(&a[0])?, var_from_term(&a[1])?))
        }
        _ => {
            t.app(0)?;
            name.strip_prefix('v')
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|n| *n > 0)
                .map(VarId::Base)
                .ok_or_else(|| t.error(format!("unknown variable '{name}'")))
        }
    }
}

fn token_from_term(t: &Term) -> Result<Token, SyntaxError> {
    match t {
        Term::Str(s, _) if !s.is_empty() => Ok(Token::Literal(s.clone())),
        Term::App { name, args, .. } if name == "Number" && args.is_empty() => Ok(Token::Number),
        _ => Err(t.error("expected a token")),
    }
}

fn position_from_term(t: &Term) -> Result<Position, SyntaxError> {
    match t.name() {
        Some("AbsPos") => Ok(Position::Abs(t.app(1)?.1[0].int()?)),
        Some("RelPos") => {
            let (_, a) = t.app(3)?;
            let occurrence = a[1].int()?;
            if occurrence == 0 {
                return Err(a[1].error("occurrence must be non-zero"));
            }
            Ok(Position::Rel {
                token: token_from_term(&a[0])?,
                occurrence,
                offset: a[2].int()?,
            })
        }
        _ => Err(t.error("expected AbsPos or RelPos")),
    }
}

fn atomic_from_term(t: &Term) -> Result<Atomic, SyntaxError> {
    match t {
        Term::App { name, args, .. } if name == "ConstStr" => match args.as_slice() {
            [Term::Str(s, _)] => Ok(Atomic::Const(s.clone())),
            _ => Err(t.error("ConstStr expects one string")),
        },
        Term::App { name, args, .. } if name == "SubStr" => match args.as_slice() {
            [p1, p2] => Ok(Atomic::substr(
                position_from_term(p1)?,
                position_from_term(p2)?,
            )),
            [Term::Input(i, _), p1, p2] => Ok(Atomic::SubStr {
                input: *i,
                start: position_from_term(p1)?,
                end: position_from_term(p2)?,
            }),
            _ => Err(t.error("SubStr expects two positions")),
        },
        _ => Err(t.error("expected ConstStr or SubStr")),
    }
}

fn expr_from_term(t: &Term) -> Result<StringExpr, SyntaxError> {
    if t.name() == Some("Concat") {
        let (_, a) = t.app(2)?;
        Ok(StringExpr::Concat(
            atomic_from_term(&a[0])?,
            Arc::new(expr_from_term(&a[1])?),
        ))
    } else {
        Ok(StringExpr::Atom(atomic_from_term(t)?))
    }
}

impl FromStr for VarId {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        var_from_term(&parse_term(s)?)
    }
}

impl FromStr for Position {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        position_from_term(&parse_term(s)?)
    }
}

impl FromStr for StringExpr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        expr_from_term(&parse_term(s)?)
    }
}

impl FromStr for StringTransformer {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(StringTransformer::new(s.parse()?))
    }
}
