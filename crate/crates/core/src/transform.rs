//! The string-transformation language: constant strings and substrings of
//! the input, delimited by absolute or token-relative positions, joined by a
//! right-leaning concatenation spine.
//!
//! Positions index characters (not bytes) and substrings are inclusive on both
//! ends, so the empty string is not a substring expression.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A token recognized by relative positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    /// A fixed character sequence; occurrences never overlap.
    Literal(String),
    /// A maximal run of ASCII digits.
    Number,
}

impl Token {
    pub fn literal(s: impl Into<String>) -> Self {
        Token::Literal(s.into())
    }

    /// Inclusive character spans of the token in `x`, left to right.
    pub fn occurrences(&self, x: &[char]) -> Vec<(usize, usize)> {
        let mut spans = Vec::new();
        match self {
            Token::Literal(lit) => {
                let needle: Vec<char> = lit.chars().collect();
                if needle.is_empty() {
                    return spans;
                }
                let mut i = 0;
                while i + needle.len() <= x.len() {
                    if x[i..i + needle.len()] == needle[..] {
                        spans.push((i, i + needle.len() - 1));
                        i += needle.len();
                    } else {
                        i += 1;
                    }
                }
            }
            Token::Number => {
                let mut i = 0;
                while i < x.len() {
                    if x[i].is_ascii_digit() {
                        let start = i;
                        while i < x.len() && x[i].is_ascii_digit() {
                            i += 1;
                        }
                        spans.push((start, i - 1));
                    } else {
                        i += 1;
                    }
                }
            }
        }
        spans
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Literal(s) => write_quoted(f, s),
            Token::Number => f.write_str("Number"),
        }
    }
}

/// Non-overlapping, left-to-right spans of `t` in `x`, as inclusive character
/// index pairs.
pub fn token_occurrences(t: &Token, x: &str) -> Vec<(usize, usize)> {
    let chars: Vec<char> = x.chars().collect();
    t.occurrences(&chars)
}

/// The tokens available to relative positions during synthesis.
///
/// The set is fixed once synthesis starts; evaluation only needs the token
/// stored in each position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenSet {
    tokens: Vec<Token>,
}

impl TokenSet {
    pub fn new(tokens: Vec<Token>) -> Self {
        let mut tokens = tokens;
        tokens.sort();
        tokens.dedup();
        Self { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn with(mut self, token: Token) -> Self {
        self.tokens.push(token);
        Self::new(self.tokens)
    }
}

impl Default for TokenSet {
    /// Brackets, parentheses, `^`, `_` and numbers.
    fn default() -> Self {
        let mut tokens: Vec<Token> = ["{", "}", "(", ")", "^", "_"]
            .into_iter()
            .map(Token::literal)
            .collect();
        tokens.push(Token::Number);
        Self::new(tokens)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("absolute position {index} is outside a string of length {len}")]
    OutOfRange { index: i64, len: usize },
    #[error("token {token} has fewer than {needed} occurrences")]
    MissingOccurrence { token: Token, needed: u64 },
    #[error("relative position resolves to {index}, outside a string of length {len}")]
    RelativeOutOfRange { index: i64, len: usize },
    #[error("substring start {start} is after its end {end}")]
    InvertedSpan { start: usize, end: usize },
    #[error("input {0} is not available")]
    MissingInput(usize),
}

/// Resolves a possibly negative index against a string length; `-1` is the
/// last character.
pub fn normalize_index(k: i64, len: usize) -> Option<usize> {
    let len = len as i64;
    let idx = if k >= 0 { k } else { len + k };
    (0..len).contains(&idx).then_some(idx as usize)
}

/// A position expression evaluating to a character index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Abs(i64),
    /// Start of the `occurrence`-th match of `token` (negative counts from the
    /// end, `-1` being the last) plus `offset`.
    Rel {
        token: Token,
        occurrence: i64,
        offset: i64,
    },
}

impl Position {
    pub fn rel(token: Token, occurrence: i64, offset: i64) -> Self {
        debug_assert!(occurrence != 0);
        Position::Rel {
            token,
            occurrence,
            offset,
        }
    }

    pub fn eval(&self, x: &[char]) -> Result<usize, TransformError> {
        match self {
            Position::Abs(k) => normalize_index(*k, x.len()).ok_or(TransformError::OutOfRange {
                index: *k,
                len: x.len(),
            }),
            Position::Rel {
                token,
                occurrence,
                offset,
            } => {
                let spans = token.occurrences(x);
                let n = spans.len() as i64;
                let idx = if *occurrence > 0 {
                    occurrence - 1
                } else {
                    n + occurrence
                };
                if *occurrence == 0 || idx < 0 || idx >= n {
                    return Err(TransformError::MissingOccurrence {
                        token: token.clone(),
                        needed: occurrence.unsigned_abs(),
                    });
                }
                let at = spans[idx as usize].0 as i64 + offset;
                if at < 0 || at >= x.len() as i64 {
                    return Err(TransformError::RelativeOutOfRange {
                        index: at,
                        len: x.len(),
                    });
                }
                Ok(at as usize)
            }
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Abs(k) => write!(f, "AbsPos({k})"),
            Position::Rel {
                token,
                occurrence,
                offset,
            } => write!(f, "RelPos({token},{occurrence},{offset})"),
        }
    }
}

pub fn eval_position(p: &Position, x: &str) -> Result<usize, TransformError> {
    let chars: Vec<char> = x.chars().collect();
    p.eval(&chars)
}

/// An expression without concatenation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atomic {
    Const(String),
    /// Inclusive substring of input `input` (0 for single-input transformers).
    SubStr {
        input: usize,
        start: Position,
        end: Position,
    },
}

impl Atomic {
    pub fn constant(s: impl Into<String>) -> Self {
        Atomic::Const(s.into())
    }

    pub fn substr(start: Position, end: Position) -> Self {
        Atomic::SubStr {
            input: 0,
            start,
            end,
        }
    }

    fn eval_into(&self, inputs: &[Vec<char>], out: &mut String) -> Result<(), TransformError> {
        match self {
            Atomic::Const(s) => out.push_str(s),
            Atomic::SubStr { input, start, end } => {
                let x = inputs
                    .get(*input)
                    .ok_or(TransformError::MissingInput(*input))?;
                let i1 = start.eval(x)?;
                let i2 = end.eval(x)?;
                if i1 > i2 {
                    return Err(TransformError::InvertedSpan { start: i1, end: i2 });
                }
                out.extend(&x[i1..=i2]);
            }
        }
        Ok(())
    }
}

impl fmt::Display for Atomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atomic::Const(s) => {
                f.write_str("ConstStr(")?;
                write_quoted(f, s)?;
                f.write_str(")")
            }
            Atomic::SubStr {
                input: 0,
                start,
                end,
            } => write!(f, "SubStr({start},{end})"),
            Atomic::SubStr { input, start, end } => write!(f, "SubStr(#{input},{start},{end})"),
        }
    }
}

/// Right-leaning concatenation of atomic expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StringExpr {
    Atom(Atomic),
    Concat(Atomic, Arc<StringExpr>),
}

impl StringExpr {
    /// Builds the spine from a non-empty list of atoms.
    pub fn from_atoms(atoms: Vec<Atomic>) -> Option<Self> {
        let mut iter = atoms.into_iter().rev();
        let mut expr = StringExpr::Atom(iter.next()?);
        for a in iter {
            expr = StringExpr::Concat(a, Arc::new(expr));
        }
        Some(expr)
    }

    pub fn atoms(&self) -> Vec<&Atomic> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                StringExpr::Atom(a) => {
                    out.push(a);
                    return out;
                }
                StringExpr::Concat(a, rest) => {
                    out.push(a);
                    cur = rest;
                }
            }
        }
    }
}

impl fmt::Display for StringExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringExpr::Atom(a) => write!(f, "{a}"),
            StringExpr::Concat(a, rest) => write!(f, "Concat({a},{rest})"),
        }
    }
}

/// A single-parameter string function `fun x => body`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StringTransformer {
    body: StringExpr,
}

impl StringTransformer {
    pub fn new(body: StringExpr) -> Self {
        Self { body }
    }

    pub fn body(&self) -> &StringExpr {
        &self.body
    }

    /// The identity `SubStr(AbsPos(0),AbsPos(-1))`.
    pub fn identity() -> Self {
        Self::new(StringExpr::Atom(Atomic::substr(
            Position::Abs(0),
            Position::Abs(-1),
        )))
    }

    pub fn eval(&self, x: &str) -> Result<String, TransformError> {
        self.eval_inputs(&[x])
    }

    /// Evaluates with several inputs; `SubStr(#i, ..)` reads input `i`.
    pub fn eval_inputs(&self, inputs: &[&str]) -> Result<String, TransformError> {
        let inputs: Vec<Vec<char>> = inputs.iter().map(|s| s.chars().collect()).collect();
        let mut out = String::new();
        for atom in self.body.atoms() {
            atom.eval_into(&inputs, &mut out)?;
        }
        Ok(out)
    }
}

impl From<StringExpr> for StringTransformer {
    fn from(body: StringExpr) -> Self {
        Self::new(body)
    }
}

impl fmt::Display for StringTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

pub fn eval_transformer(t: &StringTransformer, x: &str) -> Result<String, TransformError> {
    t.eval(x)
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c if c.is_control() => write!(f, "\\u{{{:x}}}", c as u32)?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}
