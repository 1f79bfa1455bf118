//! Synthesis of fix rules for LaTeX equation compilation errors.
//!
//! A rule pairs an error-message pattern with a relaxed equation pattern and
//! one string transformer per pattern variable. Rules are learned from
//! (equation, error, fix) examples and stored in a [`library::RuleLibrary`].

pub mod library;
pub mod pattern;
pub mod syntax;
pub mod synth;
pub mod transform;
pub mod vsa;

pub use pattern::{
    Bindings, EquationPattern, ErrorMessage, ErrorPattern, Matcher, PatternError, VarId,
};
pub use syntax::SyntaxError;
pub use synth::{
    apply_rule, synth_rule, ApplyError, Example, Relaxer, Rule, SynthError, Transformer,
};
pub use transform::{Atomic, Position, StringExpr, StringTransformer, Token, TokenSet};
