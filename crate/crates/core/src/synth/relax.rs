//! Lazy pattern relaxation and relaxers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::pattern::{try_match_equation, EquationPattern, Matcher, VarId};
use crate::syntax::{parse_term, var_from_term, SyntaxError, Term};

/// A recorded relaxation step, replayed on patterns at application time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relaxer {
    Id(VarId),
    Left(Box<Relaxer>),
    Right(Box<Relaxer>),
    Binary(Box<Relaxer>, Box<Relaxer>),
    /// Replaces the whole pattern with a single variable.
    Top,
}

impl Relaxer {
    pub fn id(index: u32) -> Self {
        Relaxer::Id(VarId::base(index))
    }

    pub fn left(inner: Relaxer) -> Self {
        Relaxer::Left(Box::new(inner))
    }

    pub fn right(inner: Relaxer) -> Self {
        Relaxer::Right(Box::new(inner))
    }

    pub fn binary(first: Relaxer, second: Relaxer) -> Self {
        Relaxer::Binary(Box::new(first), Box::new(second))
    }

    /// The composite variable this relaxer introduces.
    pub fn variable(&self) -> VarId {
        match self {
            Relaxer::Id(v) => v.clone(),
            Relaxer::Left(r) => VarId::left(r.variable()),
            Relaxer::Right(r) => VarId::right(r.variable()),
            Relaxer::Binary(a, b) => VarId::binary(a.variable(), b.variable()),
            Relaxer::Top => VarId::Top,
        }
    }

    /// Inverse of [`Relaxer::variable`].
    pub fn from_variable(v: &VarId) -> Relaxer {
        match v {
            VarId::Base(_) => Relaxer::Id(v.clone()),
            VarId::Top => Relaxer::Top,
            VarId::Left(inner) => Relaxer::left(Relaxer::from_variable(inner)),
            VarId::Right(inner) => Relaxer::right(Relaxer::from_variable(inner)),
            VarId::Binary(a, b) => {
                Relaxer::binary(Relaxer::from_variable(a), Relaxer::from_variable(b))
            }
        }
    }
}

impl fmt::Display for Relaxer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relaxer::Id(v) => write!(f, "id({v})"),
            Relaxer::Left(r) => write!(f, "LRelax({r})"),
            Relaxer::Right(r) => write!(f, "RRelax({r})"),
            Relaxer::Binary(a, b) => write!(f, "BRelax({a},{b})"),
            Relaxer::Top => f.write_str("TopRelax"),
        }
    }
}

fn relaxer_from_term(t: &Term) -> Result<Relaxer, SyntaxError> {
    match t.name() {
        Some("id") => {
            let v = var_from_term(&t.app(1)?.1[0])?;
            match v {
                VarId::Base(_) => Ok(Relaxer::Id(v)),
                _ => Err(t.error("id expects a base variable")),
            }
        }
        Some("LRelax") => Ok(Relaxer::left(relaxer_from_term(&t.app(1)?.1[0])?)),
        Some("RRelax") => Ok(Relaxer::right(relaxer_from_term(&t.app(1)?.1[0])?)),
        Some("BRelax") => {
            let (_, a) = t.app(2)?;
            Ok(Relaxer::binary(
                relaxer_from_term(&a[0])?,
                relaxer_from_term(&a[1])?,
            ))
        }
        Some("TopRelax") => {
            t.app(0)?;
            Ok(Relaxer::Top)
        }
        _ => Err(t.error("expected a relaxer")),
    }
}

impl FromStr for Relaxer {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        relaxer_from_term(&parse_term(s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelaxError {
    #[error("relaxer {0} does not apply to the pattern")]
    InapplicableRelaxer(Relaxer),
}

fn position_of(m: &[Matcher], v: &VarId) -> Option<usize> {
    m.iter().position(|x| x.as_var() == Some(v))
}

fn relax_one(m: &mut Vec<Matcher>, r: &Relaxer) -> Result<VarId, RelaxError> {
    let inapplicable = || RelaxError::InapplicableRelaxer(r.clone());
    match r {
        Relaxer::Id(v) => position_of(m, v)
            .map(|_| v.clone())
            .ok_or_else(inapplicable),
        Relaxer::Left(inner) => {
            let v = relax_one(m, inner)?;
            let i = position_of(m, &v).ok_or_else(inapplicable)?;
            let merged = VarId::left(v);
            match i {
                0 => m[0] = Matcher::Var(merged.clone()),
                1 => {
                    m.splice(0..2, [Matcher::Var(merged.clone())]);
                }
                _ => return Err(inapplicable()),
            }
            Ok(merged)
        }
        Relaxer::Right(inner) => {
            let v = relax_one(m, inner)?;
            let i = position_of(m, &v).ok_or_else(inapplicable)?;
            let merged = VarId::right(v);
            let last = m.len() - 1;
            if i == last {
                m[i] = Matcher::Var(merged.clone());
            } else if i + 1 == last {
                m.splice(i..=last, [Matcher::Var(merged.clone())]);
            } else {
                return Err(inapplicable());
            }
            Ok(merged)
        }
        Relaxer::Binary(a, b) => {
            let va = relax_one(m, a)?;
            let vb = relax_one(m, b)?;
            let i = (0..m.len().saturating_sub(2))
                .find(|&i| {
                    m[i].as_var() == Some(&va)
                        && m[i + 1].as_str().is_some()
                        && m[i + 2].as_var() == Some(&vb)
                })
                .ok_or_else(inapplicable)?;
            let merged = VarId::binary(va, vb);
            m.splice(i..i + 3, [Matcher::Var(merged.clone())]);
            Ok(merged)
        }
        Relaxer::Top => {
            m.clear();
            m.push(Matcher::Var(VarId::Top));
            Ok(VarId::Top)
        }
    }
}

/// Replays `relaxers` on `p`, replacing the designated subpatterns with
/// composite variables.
///
/// `LRelax` absorbs the leading literal and `RRelax` the trailing one; when
/// the variable already starts (ends) the pattern it is only renamed.
pub fn apply_relaxers(
    p: &EquationPattern,
    relaxers: &BTreeSet<Relaxer>,
) -> Result<EquationPattern, RelaxError> {
    if relaxers.contains(&Relaxer::Top) {
        return Ok(EquationPattern::top());
    }
    let mut m = p.matchers().to_vec();
    for r in relaxers {
        relax_one(&mut m, r)?;
    }
    Ok(EquationPattern::new(m).expect("relaxation keeps patterns alternating"))
}

fn blamed_literal(m: &[Matcher], fix: &str, failed_at: usize) -> usize {
    if let Some(i) = m
        .iter()
        .position(|x| x.as_str().is_some_and(|s| !fix.contains(s)))
    {
        return i;
    }
    if m[failed_at].as_str().is_some() {
        failed_at
    } else if failed_at + 1 < m.len() {
        failed_at + 1
    } else {
        failed_at - 1
    }
}

/// Generalizes `p` step by step until it matches `fix`.
///
/// Each step picks the leftmost literal that does not occur in `fix` (or,
/// failing that, the literal where matching broke down) and merges it with
/// its neighbouring variables. A pattern without variables becomes `[Top]`.
/// The result matches any non-empty `fix`.
pub fn relax_pattern(p: &EquationPattern, fix: &str) -> EquationPattern {
    let mut m = p.matchers().to_vec();
    loop {
        let pattern =
            EquationPattern::new(m.clone()).expect("relaxation keeps patterns alternating");
        let failed_at = match try_match_equation(&pattern, fix) {
            Ok(_) => return pattern,
            Err(e) => e.matcher,
        };
        if pattern.is_constant() {
            return EquationPattern::top();
        }
        if m.iter().all(|x| x.as_var().is_some()) {
            // only an empty `fix` gets here; nothing is left to relax
            return pattern;
        }
        let b = blamed_literal(&m, fix, failed_at);
        let var_at = |i: usize| {
            m[i].as_var()
                .expect("literals alternate with variables")
                .clone()
        };
        if b == 0 {
            let v = var_at(1);
            m.splice(0..2, [Matcher::Var(VarId::left(v))]);
        } else if b + 1 == m.len() {
            let v = var_at(b - 1);
            m.splice(b - 1..=b, [Matcher::Var(VarId::right(v))]);
        } else {
            let merged = VarId::binary(var_at(b - 1), var_at(b + 1));
            m.splice(b - 1..=b + 1, [Matcher::Var(merged)]);
        }
    }
}

/// Relaxers recording how `p` was obtained: one per composite variable.
pub fn relaxers_of(p: &EquationPattern) -> BTreeSet<Relaxer> {
    p.variables()
        .iter()
        .filter(|v| v.is_composite())
        .map(Relaxer::from_variable)
        .collect()
}
