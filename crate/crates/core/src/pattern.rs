//! Matchers, error patterns, equation patterns and variable bindings.
//!
//! An error pattern is matched token-by-token against a tokenized error
//! message. An equation pattern is an alternating sequence of literal strings
//! and variables; its literals act as delimiters that split an equation into
//! the substrings bound to the variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Identifier of a pattern variable.
///
/// Base variables are produced by error-pattern synthesis. The composite forms
/// only appear after relaxation and record which subpattern they replaced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Base(u32),
    /// The single variable of the fully relaxed pattern.
    Top,
    Left(Box<VarId>),
    Right(Box<VarId>),
    Binary(Box<VarId>, Box<VarId>),
}

impl VarId {
    pub fn base(index: u32) -> Self {
        VarId::Base(index)
    }

    pub fn left(inner: VarId) -> Self {
        VarId::Left(Box::new(inner))
    }

    pub fn right(inner: VarId) -> Self {
        VarId::Right(Box::new(inner))
    }

    pub fn binary(first: VarId, second: VarId) -> Self {
        VarId::Binary(Box::new(first), Box::new(second))
    }

    pub fn is_composite(&self) -> bool {
        !matches!(self, VarId::Base(_))
    }

    /// Base indices referenced by this identifier, left to right.
    pub fn base_indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_bases(&mut out);
        out
    }

    fn collect_bases(&self, out: &mut Vec<u32>) {
        match self {
            VarId::Base(i) => out.push(*i),
            VarId::Top => {}
            VarId::Left(v) | VarId::Right(v) => v.collect_bases(out),
            VarId::Binary(a, b) => {
                a.collect_bases(out);
                b.collect_bases(out);
            }
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Base(i) => write!(f, "v{i}"),
            VarId::Top => f.write_str("Top"),
            VarId::Left(v) => write!(f, "LVar({v})"),
            VarId::Right(v) => write!(f, "RVar({v})"),
            VarId::Binary(a, b) => write!(f, "BVar({a},{b})"),
        }
    }
}

/// One element of a pattern: a literal string or a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Matcher {
    Str(String),
    Var(VarId),
}

impl Matcher {
    pub fn str(s: impl Into<String>) -> Self {
        Matcher::Str(s.into())
    }

    pub fn var(v: VarId) -> Self {
        Matcher::Var(v)
    }

    pub fn as_var(&self) -> Option<&VarId> {
        match self {
            Matcher::Var(v) => Some(v),
            Matcher::Str(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Matcher::Str(s) => Some(s),
            Matcher::Var(_) => None,
        }
    }
}

impl fmt::Display for Matcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matcher::Str(s) => write!(f, "{s:?}"),
            Matcher::Var(v) => write!(f, "{v}"),
        }
    }
}

fn fmt_matchers(matchers: &[Matcher], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("[")?;
    for (i, m) in matchers.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{m}")?;
    }
    f.write_str("]")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("error message is empty")]
    EmptyMessage,
    #[error("string matchers must be non-empty")]
    EmptyStringMatcher,
    #[error("error pattern must contain at least one matcher")]
    EmptyErrorPattern,
    #[error("variable {0} occurs more than once")]
    DuplicateVariable(VarId),
    #[error("string and variable matchers must alternate (at matcher {0})")]
    NotAlternating(usize),
    #[error("variable {0} is unbound")]
    UnboundVariable(VarId),
    #[error("binding of {0} is empty")]
    EmptyBindingValue(VarId),
    #[error("pattern generation produced adjacent variables {0} and {1}")]
    AdjacentVariables(VarId, VarId),
    #[error("generated pattern does not split the equation back into its bindings")]
    AmbiguousSplit,
}

/// Mapping from variables to the strings they are bound to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Bindings(BTreeMap<VarId, String>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &VarId) -> Option<&str> {
        self.0.get(v).map(String::as_str)
    }

    pub fn insert(&mut self, v: VarId, value: impl Into<String>) -> Option<String> {
        self.0.insert(v, value.into())
    }

    pub fn contains(&self, v: &VarId) -> bool {
        self.0.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &str)> {
        self.0.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.0.keys()
    }

    /// Keeps only the entries whose variable is in `vars`.
    pub fn restricted_to(&self, vars: &BTreeSet<VarId>) -> Bindings {
        Bindings(
            self.0
                .iter()
                .filter(|(k, _)| vars.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }
}

impl<S: Into<String>> FromIterator<(VarId, S)> for Bindings {
    fn from_iter<I: IntoIterator<Item = (VarId, S)>>(iter: I) -> Self {
        Bindings(iter.into_iter().map(|(k, v)| (k, v.into())).collect())
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} ↦ {v:?}")?;
        }
        f.write_str("}")
    }
}

/// A tokenized error message.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErrorMessage {
    tokens: Vec<String>,
}

impl ErrorMessage {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for ErrorMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

impl std::str::FromStr for ErrorMessage {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        tokenize_message(s)
    }
}

/// Splits an error message at whitespace. Commas and other punctuation stay
/// attached to their tokens so that compiler messages survive unchanged.
pub fn tokenize_message(text: &str) -> Result<ErrorMessage, PatternError> {
    let tokens: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
    if tokens.is_empty() {
        return Err(PatternError::EmptyMessage);
    }
    Ok(ErrorMessage { tokens })
}

fn check_strings_and_unique_vars(matchers: &[Matcher]) -> Result<(), PatternError> {
    let mut seen = BTreeSet::new();
    for m in matchers {
        match m {
            Matcher::Str(s) if s.is_empty() => return Err(PatternError::EmptyStringMatcher),
            Matcher::Var(v) if !seen.insert(v) => {
                return Err(PatternError::DuplicateVariable(v.clone()))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Token-level template for error messages.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ErrorPattern {
    matchers: Vec<Matcher>,
}

impl ErrorPattern {
    pub fn new(matchers: Vec<Matcher>) -> Result<Self, PatternError> {
        if matchers.is_empty() {
            return Err(PatternError::EmptyErrorPattern);
        }
        check_strings_and_unique_vars(&matchers)?;
        Ok(Self { matchers })
    }

    pub fn matchers(&self) -> &[Matcher] {
        &self.matchers
    }

    pub fn len(&self) -> usize {
        self.matchers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchers.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &VarId> {
        self.matchers.iter().filter_map(Matcher::as_var)
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matchers(&self.matchers, f)
    }
}

/// Matches an error message against an error pattern token by token.
pub fn match_error_pattern(ep: &ErrorPattern, msg: &ErrorMessage) -> Option<Bindings> {
    if ep.matchers.len() != msg.tokens.len() {
        return None;
    }
    let mut bindings = Bindings::new();
    for (m, token) in ep.matchers.iter().zip(&msg.tokens) {
        match m {
            Matcher::Str(s) if s != token => return None,
            Matcher::Str(_) => {}
            Matcher::Var(v) => {
                bindings.insert(v.clone(), token.clone());
            }
        }
    }
    Some(bindings)
}

/// Alternating template of literal strings and variables over equation text.
///
/// A variable may occur more than once when pattern generation found several
/// occurrences of its bound string; all of its occurrences must then bind the
/// same text.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquationPattern {
    matchers: Vec<Matcher>,
}

impl EquationPattern {
    pub fn new(matchers: Vec<Matcher>) -> Result<Self, PatternError> {
        for (i, pair) in matchers.windows(2).enumerate() {
            let same_kind = matches!(
                (&pair[0], &pair[1]),
                (Matcher::Str(_), Matcher::Str(_)) | (Matcher::Var(_), Matcher::Var(_))
            );
            if same_kind {
                return Err(PatternError::NotAlternating(i + 1));
            }
        }
        if matchers
            .iter()
            .any(|m| matches!(m, Matcher::Str(s) if s.is_empty()))
        {
            return Err(PatternError::EmptyStringMatcher);
        }
        Ok(Self { matchers })
    }

    /// The pattern consisting of the single `Top` variable, which matches any
    /// non-empty string.
    pub fn top() -> Self {
        Self {
            matchers: vec![Matcher::Var(VarId::Top)],
        }
    }

    pub fn matchers(&self) -> &[Matcher] {
        &self.matchers
    }

    pub fn len(&self) -> usize {
        self.matchers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchers.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.matchers.iter().all(|m| matches!(m, Matcher::Str(_)))
    }

    /// Distinct variables of the pattern.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.matchers
            .iter()
            .filter_map(Matcher::as_var)
            .cloned()
            .collect()
    }
}

impl fmt::Display for EquationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matchers(&self.matchers, f)
    }
}

/// Why an equation pattern failed to match; `matcher` is the index of the
/// matcher at which matching broke down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct MatchFailure {
    pub matcher: usize,
}

fn next_boundary(s: &str, pos: usize) -> Option<usize> {
    s[pos..].chars().next().map(|c| pos + c.len_utf8())
}

fn bind(bindings: &mut Bindings, v: &VarId, value: &str, index: usize) -> Result<(), MatchFailure> {
    match bindings.get(v) {
        Some(prev) if prev != value => Err(MatchFailure { matcher: index }),
        Some(_) => Ok(()),
        None => {
            bindings.insert(v.clone(), value);
            Ok(())
        }
    }
}

pub(crate) fn try_match_equation(p: &EquationPattern, eq: &str) -> Result<Bindings, MatchFailure> {
    let matchers = &p.matchers;
    let mut bindings = Bindings::new();
    let mut pos = 0usize;
    let mut pending: Option<(usize, &VarId)> = None;
    for (i, m) in matchers.iter().enumerate() {
        match m {
            Matcher::Var(v) => pending = Some((i, v)),
            Matcher::Str(s) => match pending.take() {
                None => {
                    if !eq[pos..].starts_with(s.as_str()) {
                        return Err(MatchFailure { matcher: i });
                    }
                    pos += s.len();
                }
                Some((vi, v)) => {
                    let from = next_boundary(eq, pos).ok_or(MatchFailure { matcher: i })?;
                    let found = if i + 1 == matchers.len() {
                        // the final literal is anchored at the end of the text
                        (eq.ends_with(s.as_str()) && eq.len() - s.len() >= from)
                            .then(|| eq.len() - s.len())
                    } else {
                        eq[from..].find(s.as_str()).map(|off| from + off)
                    };
                    let at = found.ok_or(MatchFailure { matcher: i })?;
                    bind(&mut bindings, v, &eq[pos..at], vi)?;
                    pos = at + s.len();
                }
            },
        }
    }
    if let Some((vi, v)) = pending {
        if pos >= eq.len() {
            return Err(MatchFailure { matcher: vi });
        }
        bind(&mut bindings, v, &eq[pos..], vi)?;
        pos = eq.len();
    }
    if pos != eq.len() {
        return Err(MatchFailure {
            matcher: matchers.len().saturating_sub(1),
        });
    }
    Ok(bindings)
}

/// Matches an equation against an equation pattern.
///
/// Literals are located left to right taking the leftmost occurrence after
/// the previous one (with at least one character for the variable in
/// between); a trailing literal must end the text. Every variable binds a
/// non-empty substring.
pub fn match_equation_pattern(p: &EquationPattern, eq: &str) -> Option<Bindings> {
    try_match_equation(p, eq).ok()
}

/// Replaces each variable of `p` with its bound string.
pub fn instantiate(p: &EquationPattern, b: &Bindings) -> Result<String, PatternError> {
    let mut out = String::new();
    for m in &p.matchers {
        match m {
            Matcher::Str(s) => out.push_str(s),
            Matcher::Var(v) => out.push_str(
                b.get(v)
                    .ok_or_else(|| PatternError::UnboundVariable(v.clone()))?,
            ),
        }
    }
    Ok(out)
}

/// Builds an equation pattern from `eq` by substituting every occurrence of
/// each bound string with its variable.
///
/// Longer values are substituted first (ties by variable order); occurrences
/// overlapping an already substituted region are skipped. Bound strings that
/// do not occur in `eq` contribute nothing. The result is checked to split
/// `eq` back into the same bindings.
pub fn generate_pattern(eq: &str, b: &Bindings) -> Result<EquationPattern, PatternError> {
    let mut order: Vec<(&VarId, &str)> = b.iter().collect();
    for (v, s) in &order {
        if s.is_empty() {
            return Err(PatternError::EmptyBindingValue((*v).clone()));
        }
    }
    order.sort_by(|(va, sa), (vb, sb)| {
        sb.chars()
            .count()
            .cmp(&sa.chars().count())
            .then_with(|| va.cmp(vb))
    });

    let mut regions: Vec<(usize, usize, &VarId)> = Vec::new();
    for (v, s) in order {
        let mut i = 0;
        while let Some(off) = eq[i..].find(s) {
            let start = i + off;
            let end = start + s.len();
            if regions.iter().any(|&(a, z, _)| start < z && a < end) {
                i = next_boundary(eq, start).expect("match start is inside the text");
            } else {
                regions.push((start, end, v));
                i = end;
            }
        }
    }
    regions.sort_by_key(|&(start, _, _)| start);

    let mut matchers = Vec::new();
    let mut pos = 0;
    let mut prev_var: Option<&VarId> = None;
    for (start, end, v) in regions {
        if start > pos {
            matchers.push(Matcher::Str(eq[pos..start].to_owned()));
        } else if let Some(prev) = prev_var {
            return Err(PatternError::AdjacentVariables(prev.clone(), v.clone()));
        }
        matchers.push(Matcher::Var(v.clone()));
        prev_var = Some(v);
        pos = end;
    }
    if pos < eq.len() {
        matchers.push(Matcher::Str(eq[pos..].to_owned()));
    }
    let pattern = EquationPattern::new(matchers)?;

    let used = pattern.variables();
    match match_equation_pattern(&pattern, eq) {
        Some(found) if found == b.restricted_to(&used) => Ok(pattern),
        _ => Err(PatternError::AmbiguousSplit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId::base(i)
    }

    fn s(x: &str) -> Matcher {
        Matcher::str(x)
    }

    fn var(i: u32) -> Matcher {
        Matcher::Var(v(i))
    }

    fn eqp(ms: Vec<Matcher>) -> EquationPattern {
        EquationPattern::new(ms).unwrap()
    }

    fn binds(pairs: &[(u32, &str)]) -> Bindings {
        pairs.iter().map(|&(i, x)| (v(i), x)).collect()
    }

    #[test]
    fn tokenize_splits_on_whitespace_only() {
        assert_eq!(
            tokenize_message("superscript 10").unwrap().tokens(),
            ["superscript", "10"]
        );
        assert_eq!(
            tokenize_message("Missing } inserted").unwrap().tokens(),
            ["Missing", "}", "inserted"]
        );
        assert_eq!(tokenize_message("x").unwrap().tokens(), ["x"]);
        assert_eq!(
            tokenize_message("Extra },  or\tforgotten $")
                .unwrap()
                .tokens(),
            ["Extra", "},", "or", "forgotten", "$"]
        );
        assert_eq!(tokenize_message("  \n "), Err(PatternError::EmptyMessage));
    }

    #[test]
    fn error_pattern_matching() {
        let ep = ErrorPattern::new(vec![s("superscript"), var(1)]).unwrap();
        let msg = tokenize_message("superscript 123").unwrap();
        assert_eq!(match_error_pattern(&ep, &msg), Some(binds(&[(1, "123")])));
        let msg = tokenize_message("subscript 123").unwrap();
        assert_eq!(match_error_pattern(&ep, &msg), None);

        let ep = ErrorPattern::new(vec![var(1), var(2)]).unwrap();
        assert_eq!(
            match_error_pattern(&ep, &tokenize_message("a").unwrap()),
            None
        );
    }

    #[test]
    fn error_pattern_invariants() {
        assert_eq!(
            ErrorPattern::new(vec![]),
            Err(PatternError::EmptyErrorPattern)
        );
        assert_eq!(
            ErrorPattern::new(vec![var(1), var(1)]),
            Err(PatternError::DuplicateVariable(v(1)))
        );
        assert_eq!(
            ErrorPattern::new(vec![s("")]),
            Err(PatternError::EmptyStringMatcher)
        );
    }

    #[test]
    fn equation_pattern_rejects_adjacent_kinds() {
        assert_eq!(
            EquationPattern::new(vec![var(1), var(2)]),
            Err(PatternError::NotAlternating(1))
        );
        assert_eq!(
            EquationPattern::new(vec![s("a"), var(1), s("b"), s("c")]),
            Err(PatternError::NotAlternating(3))
        );
    }

    #[test]
    fn equation_matching_examples() {
        let p = eqp(vec![var(1), s("foo"), var(2)]);
        assert_eq!(
            match_equation_pattern(&p, "(foo)"),
            Some(binds(&[(1, "("), (2, ")")]))
        );

        let p2 = eqp(vec![s("$y^"), var(1), s("+x$")]);
        assert_eq!(
            match_equation_pattern(&p2, "$y^123+x$"),
            Some(binds(&[(1, "123")]))
        );

        let c = eqp(vec![s("$x^{10}$")]);
        assert_eq!(
            match_equation_pattern(&c, "$x^{10}$"),
            Some(Bindings::new())
        );
        assert_eq!(match_equation_pattern(&c, "$x^{10}$ "), None);

        let p = eqp(vec![s("a"), var(1), s("a")]);
        assert_eq!(match_equation_pattern(&p, "aba"), Some(binds(&[(1, "b")])));
    }

    /// Every way of splitting `eq` into the pattern's shape, by exhaustive
    /// enumeration of variable extents.
    fn all_splits(p: &EquationPattern, eq: &str) -> Vec<Bindings> {
        fn go(ms: &[Matcher], eq: &str, acc: Bindings, out: &mut Vec<Bindings>) {
            match ms.split_first() {
                None => {
                    if eq.is_empty() {
                        out.push(acc)
                    }
                }
                Some((Matcher::Str(s), rest)) => {
                    if let Some(tail) = eq.strip_prefix(s.as_str()) {
                        go(rest, tail, acc, out)
                    }
                }
                Some((Matcher::Var(v), rest)) => {
                    for (cut, _) in eq.char_indices().skip(1).chain([(eq.len(), ' ')]) {
                        if cut == 0 {
                            continue;
                        }
                        let mut next = acc.clone();
                        match next.get(v) {
                            Some(prev) if prev != &eq[..cut] => continue,
                            _ => {
                                next.insert(v.clone(), &eq[..cut]);
                            }
                        }
                        go(rest, &eq[cut..], next, out)
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(p.matchers(), eq, Bindings::new(), &mut out);
        out
    }

    #[test]
    fn aba_split_is_unique_by_enumeration() {
        let p = eqp(vec![s("a"), var(1), s("a")]);
        assert_eq!(all_splits(&p, "aba"), vec![binds(&[(1, "b")])]);
    }

    #[test]
    fn duplicate_variables_must_agree() {
        let p = eqp(vec![s("a"), var(1), s("b"), var(1), s("c")]);
        assert_eq!(
            match_equation_pattern(&p, "aXbXc"),
            Some(binds(&[(1, "X")]))
        );
        assert_eq!(match_equation_pattern(&p, "aXbYc"), None);
    }

    #[test]
    fn instantiation() {
        let p2 = eqp(vec![s("$y^"), var(1), s("+x$")]);
        assert_eq!(
            instantiate(&p2, &binds(&[(1, "123")])).unwrap(),
            "$y^123+x$"
        );
        assert_eq!(
            instantiate(&p2, &binds(&[(1, "{123}")])).unwrap(),
            "$y^{123}+x$"
        );
        assert_eq!(
            instantiate(&eqp(vec![s("k")]), &Bindings::new()).unwrap(),
            "k"
        );
        assert_eq!(
            instantiate(&p2, &Bindings::new()),
            Err(PatternError::UnboundVariable(v(1)))
        );
    }

    #[test]
    fn generation_examples() {
        assert_eq!(
            generate_pattern("$y^123+x$", &binds(&[(1, "123")])).unwrap(),
            eqp(vec![s("$y^"), var(1), s("+x$")])
        );
        assert_eq!(
            generate_pattern("$x^10$", &binds(&[(1, "10")])).unwrap(),
            eqp(vec![s("$x^"), var(1), s("$")])
        );
        assert_eq!(
            generate_pattern("abc", &Bindings::new()).unwrap(),
            eqp(vec![s("abc")])
        );
        assert_eq!(
            generate_pattern("${1,2,3$", &binds(&[(1, "}")])).unwrap(),
            eqp(vec![s("${1,2,3$")])
        );
    }

    /// Independent substitution oracle: replace occurrences by scanning the
    /// string once per binding, longest first, on a character-tagged copy.
    fn substitution_oracle(eq: &str, b: &[(u32, &str)]) -> Vec<Matcher> {
        let chars: Vec<char> = eq.chars().collect();
        let mut tag: Vec<Option<(u32, usize)>> = vec![None; chars.len()];
        let mut order = b.to_vec();
        order.sort_by(|x, y| {
            y.1.chars()
                .count()
                .cmp(&x.1.chars().count())
                .then(x.0.cmp(&y.0))
        });
        let mut region = 0usize;
        for (id, val) in order {
            let needle: Vec<char> = val.chars().collect();
            let mut i = 0;
            while i + needle.len() <= chars.len() {
                let free = tag[i..i + needle.len()].iter().all(Option::is_none);
                if free && chars[i..i + needle.len()] == needle[..] {
                    for t in &mut tag[i..i + needle.len()] {
                        *t = Some((id, region));
                    }
                    region += 1;
                    i += needle.len();
                } else {
                    i += 1;
                }
            }
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            match tag[i] {
                Some((id, r)) => {
                    while i < chars.len() && tag[i] == Some((id, r)) {
                        i += 1;
                    }
                    out.push(var(id));
                }
                None => {
                    let mut lit = String::new();
                    while i < chars.len() && tag[i].is_none() {
                        lit.push(chars[i]);
                        i += 1;
                    }
                    out.push(Matcher::Str(lit));
                }
            }
        }
        out
    }

    #[test]
    fn duplicate_occurrences_share_one_variable() {
        let expected = substitution_oracle("aXbXc", &[(1, "X")]);
        assert_eq!(expected, vec![s("a"), var(1), s("b"), var(1), s("c")]);
        assert_eq!(
            generate_pattern("aXbXc", &binds(&[(1, "X")]))
                .unwrap()
                .matchers(),
            &expected[..]
        );
    }

    #[test]
    fn longer_values_are_substituted_first() {
        let b = [(1, "1"), (2, "10")];
        let expected = substitution_oracle("x^10+1", &b);
        assert_eq!(expected, vec![s("x^"), var(2), s("+"), var(1)]);
        assert_eq!(
            generate_pattern("x^10+1", &binds(&b)).unwrap().matchers(),
            &expected[..]
        );
    }

    #[test]
    fn generation_failures() {
        assert_eq!(
            generate_pattern("ab", &binds(&[(1, "a"), (2, "b")])),
            Err(PatternError::AdjacentVariables(v(1), v(2)))
        );
        assert_eq!(
            generate_pattern("ab", &binds(&[(1, "")])),
            Err(PatternError::EmptyBindingValue(v(1)))
        );
        // v1's value contains the delimiter that follows it
        assert_eq!(
            generate_pattern("p=b=q=r", &binds(&[(1, "b=q"), (2, "r")])),
            Err(PatternError::AmbiguousSplit)
        );
    }

    #[test]
    fn final_literal_is_anchored() {
        let p = eqp(vec![s("$x^"), var(1), s("$")]);
        assert_eq!(
            match_equation_pattern(&p, "$x^{1$2}$"),
            Some(binds(&[(1, "{1$2}")]))
        );
    }

    #[test]
    fn var_id_display() {
        let id = VarId::right(VarId::binary(v(4), v(6)));
        assert_eq!(id.to_string(), "RVar(BVar(v4,v6))");
        assert_eq!(id.base_indices(), vec![4, 6]);
        assert!(id.is_composite());
    }
}
