//! Rule synthesis from (equation, error, fix) examples and rule application.

mod relax;
mod rule;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::pattern::{
    generate_pattern, instantiate, match_equation_pattern, match_error_pattern, tokenize_message,
    Bindings, EquationPattern, ErrorMessage, ErrorPattern, Matcher, PatternError, VarId,
};
use crate::transform::{TokenSet, TransformError};
use crate::vsa::{gen_string, intersect, Vsa};

pub use relax::{apply_relaxers, relax_pattern, relaxers_of, RelaxError, Relaxer};
pub use rule::{Rule, RuleVsa, Transformer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("equation is empty")]
    EmptyEquation,
    #[error("fix is empty")]
    EmptyFix,
    #[error("fix is identical to the equation")]
    Unchanged,
    #[error("error message: {0}")]
    Message(#[from] PatternError),
}

/// A training example: an erroneous equation, its error message and the fix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Example {
    pub eq: String,
    pub err: ErrorMessage,
    pub fix: String,
}

impl Example {
    pub fn new(eq: &str, err: &str, fix: &str) -> Result<Self, ExampleError> {
        let err = tokenize_message(err)?;
        Self::from_parts(eq.to_owned(), err, fix.to_owned())
    }

    pub fn from_parts(eq: String, err: ErrorMessage, fix: String) -> Result<Self, ExampleError> {
        if eq.is_empty() {
            return Err(ExampleError::EmptyEquation);
        }
        if fix.is_empty() {
            return Err(ExampleError::EmptyFix);
        }
        if eq == fix {
            return Err(ExampleError::Unchanged);
        }
        Ok(Self { eq, err, fix })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("no examples given")]
    NoExamples,
    #[error("example {index}: error message has {found} tokens, expected {expected}")]
    TokenCountMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("example {0}: error message does not match the error pattern")]
    ErrorMismatch(usize),
    #[error("example {index}: {source}")]
    Pattern { index: usize, source: PatternError },
    #[error("example {index}: {source}")]
    Relax { index: usize, source: RelaxError },
    #[error("example {0}: relaxed pattern does not match the equation and the fix")]
    Unmatched(usize),
    #[error("inconsistent examples for variable {0}")]
    Inconsistent(VarId),
    #[error("no candidate rule reproduces every example")]
    NoConsistentRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("example {0}: error message does not match the error pattern")]
    ErrorMismatch(usize),
    #[error("example {index}: {source}")]
    Pattern { index: usize, source: PatternError },
    #[error("example {0}: equation pattern does not match the fix")]
    Unmatched(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("error message does not match the error pattern")]
    ErrorMismatch,
    #[error("cannot build an equation pattern: {0}")]
    Pattern(PatternError),
    #[error(transparent)]
    Relax(RelaxError),
    #[error("relaxed pattern does not match the equation")]
    EquationMismatch,
    #[error("no transformer for variable {0}")]
    MissingTransformer(VarId),
    #[error("transformer for {var} failed: {source}")]
    Transform { var: VarId, source: TransformError },
    #[error("cannot instantiate the pattern: {0}")]
    Instantiate(PatternError),
}

impl ApplyError {
    /// The step (1 to 4) of rule application that failed.
    pub fn step(&self) -> u8 {
        match self {
            ApplyError::ErrorMismatch => 1,
            ApplyError::Pattern(_) | ApplyError::Relax(_) => 2,
            ApplyError::EquationMismatch
            | ApplyError::MissingTransformer(_)
            | ApplyError::Transform { .. } => 3,
            ApplyError::Instantiate(_) => 4,
        }
    }
}

/// Synthesizes the error pattern shared by `examples`.
///
/// Token `i` becomes a fresh variable when, in any example, it occurs in the
/// equation or the fix, or when the examples disagree on it; otherwise it
/// stays a literal. Variables are numbered from 1, left to right.
pub fn synth_error_pattern(examples: &[Example]) -> Result<ErrorPattern, SynthError> {
    let first = examples.first().ok_or(SynthError::NoExamples)?;
    let n = first.err.len();
    for (index, ex) in examples.iter().enumerate() {
        if ex.err.len() != n {
            return Err(SynthError::TokenCountMismatch {
                index,
                expected: n,
                found: ex.err.len(),
            });
        }
    }
    let mut next = 1;
    let matchers = (0..n)
        .map(|i| {
            let token = &first.err.tokens()[i];
            let variable = examples.iter().any(|ex| {
                let t = &ex.err.tokens()[i];
                t != token || ex.eq.contains(t.as_str()) || ex.fix.contains(t.as_str())
            });
            if variable {
                next += 1;
                Matcher::var(VarId::base(next - 1))
            } else {
                Matcher::str(token.clone())
            }
        })
        .collect();
    Ok(ErrorPattern::new(matchers).expect("tokens are non-empty and variables fresh"))
}

fn error_bindings(ep: &ErrorPattern, ex: &Example) -> Option<Bindings> {
    match_error_pattern(ep, &ex.err)
}

/// String examples for each variable of the unrelaxed equation patterns.
pub fn extract_string_examples(
    examples: &[Example],
    ep: &ErrorPattern,
) -> Result<BTreeMap<VarId, Vec<(String, String)>>, ExtractError> {
    let mut out: BTreeMap<VarId, Vec<(String, String)>> = BTreeMap::new();
    for (index, ex) in examples.iter().enumerate() {
        let sigma = error_bindings(ep, ex).ok_or(ExtractError::ErrorMismatch(index))?;
        let p = generate_pattern(&ex.eq, &sigma)
            .map_err(|source| ExtractError::Pattern { index, source })?;
        let outputs = match_equation_pattern(&p, &ex.fix).ok_or(ExtractError::Unmatched(index))?;
        let inputs = match_equation_pattern(&p, &ex.eq).ok_or(ExtractError::Unmatched(index))?;
        for (v, input) in inputs.iter() {
            let output = outputs
                .get(v)
                .expect("same pattern binds the same variables");
            out.entry(v.clone())
                .or_default()
                .push((input.to_owned(), output.to_owned()));
        }
    }
    Ok(out)
}

/// Relaxers needed for every example, inherited from one example to the next.
pub fn synth_relaxers(
    examples: &[Example],
    ep: &ErrorPattern,
) -> Result<BTreeSet<Relaxer>, SynthError> {
    let mut relaxers = BTreeSet::new();
    for (index, ex) in examples.iter().enumerate() {
        let p = relaxed_pattern(ep, ex, &relaxers, index)?;
        if match_equation_pattern(&p, &ex.fix).is_none() {
            relaxers = relaxers_of(&relax_pattern(&p, &ex.fix));
        }
    }
    Ok(relaxers)
}

fn relaxed_pattern(
    ep: &ErrorPattern,
    ex: &Example,
    relaxers: &BTreeSet<Relaxer>,
    index: usize,
) -> Result<EquationPattern, SynthError> {
    let sigma = error_bindings(ep, ex).ok_or(SynthError::ErrorMismatch(index))?;
    let p =
        generate_pattern(&ex.eq, &sigma).map_err(|source| SynthError::Pattern { index, source })?;
    apply_relaxers(&p, relaxers).map_err(|source| SynthError::Relax { index, source })
}

/// Builds the version space of all rules consistent with `examples`.
pub fn synth_rule_vsa(examples: &[Example], tokens: &TokenSet) -> Result<RuleVsa, SynthError> {
    let ep = synth_error_pattern(examples)?;
    let relaxers = synth_relaxers(examples, &ep)?;
    let mut transformers: BTreeMap<VarId, Vsa> = BTreeMap::new();
    for (index, ex) in examples.iter().enumerate() {
        let p = relaxed_pattern(&ep, ex, &relaxers, index)?;
        let inputs = match_equation_pattern(&p, &ex.eq).ok_or(SynthError::Unmatched(index))?;
        let outputs = match_equation_pattern(&p, &ex.fix).ok_or(SynthError::Unmatched(index))?;
        for (v, input) in inputs.iter() {
            let output = outputs
                .get(v)
                .expect("same pattern binds the same variables");
            let vsa = gen_string(&[input], output, tokens);
            let merged = match transformers.get(v) {
                None => vsa,
                Some(prev) => {
                    intersect(prev, &vsa).ok_or_else(|| SynthError::Inconsistent(v.clone()))?
                }
            };
            transformers.insert(v.clone(), merged);
        }
    }
    Ok(RuleVsa {
        error_pattern: ep,
        relaxers,
        transformers,
    })
}

/// The `k` best rules consistent with `examples`, best first.
pub fn synth_rule(examples: &[Example], k: usize) -> Result<Vec<Rule>, SynthError> {
    synth_rule_with(examples, k, &TokenSet::default())
}

pub fn synth_rule_with(
    examples: &[Example],
    k: usize,
    tokens: &TokenSet,
) -> Result<Vec<Rule>, SynthError> {
    let vsa = synth_rule_vsa(examples, tokens)?;
    let rules: Vec<Rule> = vsa
        .topk(k)
        .into_iter()
        .filter(|r| {
            examples
                .iter()
                .all(|ex| apply_rule(r, &ex.eq, &ex.err).as_deref() == Ok(ex.fix.as_str()))
        })
        .collect();
    if rules.is_empty() {
        return Err(SynthError::NoConsistentRule);
    }
    Ok(rules)
}

/// Re-synthesizes an entry's rules with one more example.
pub fn refine_rule(
    entry_examples: &[Example],
    new_example: &Example,
    k: usize,
) -> Result<Vec<Rule>, SynthError> {
    let mut all = entry_examples.to_vec();
    all.push(new_example.clone());
    synth_rule(&all, k)
}

/// Intermediate values of a rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Application {
    /// Bindings from matching the error pattern.
    pub error_bindings: Bindings,
    /// Equation pattern after relaxation.
    pub pattern: EquationPattern,
    /// Bindings from matching the pattern against the equation.
    pub inputs: Bindings,
    /// Transformed bindings.
    pub outputs: Bindings,
    pub fix: String,
}

/// Applies `rule` and records every intermediate step.
pub fn apply_rule_traced(
    rule: &Rule,
    eq: &str,
    err: &ErrorMessage,
) -> Result<Application, ApplyError> {
    let error_bindings =
        match_error_pattern(&rule.error_pattern, err).ok_or(ApplyError::ErrorMismatch)?;
    let p = generate_pattern(eq, &error_bindings).map_err(ApplyError::Pattern)?;
    let pattern = apply_relaxers(&p, &rule.relaxers).map_err(ApplyError::Relax)?;
    let inputs = match_equation_pattern(&pattern, eq).ok_or(ApplyError::EquationMismatch)?;
    let mut outputs = Bindings::new();
    for (v, input) in inputs.iter() {
        let t = rule
            .transformer
            .get(v)
            .ok_or_else(|| ApplyError::MissingTransformer(v.clone()))?;
        let output = t.eval(input).map_err(|source| ApplyError::Transform {
            var: v.clone(),
            source,
        })?;
        if output.is_empty() {
            return Err(ApplyError::Instantiate(PatternError::EmptyBindingValue(
                v.clone(),
            )));
        }
        outputs.insert(v.clone(), output);
    }
    let fix = instantiate(&pattern, &outputs).map_err(ApplyError::Instantiate)?;
    Ok(Application {
        error_bindings,
        pattern,
        inputs,
        outputs,
        fix,
    })
}

/// Applies `rule` to an equation and its error message.
pub fn apply_rule(rule: &Rule, eq: &str, err: &ErrorMessage) -> Result<String, ApplyError> {
    apply_rule_traced(rule, eq, err).map(|a| a.fix)
}
