//! TOML example files and benchmark corpora.
//!
//! An examples file lists training triples:
//!
//! ```toml
//! [[example]]
//! eq = '$x^10$'
//! err = 'superscript 10'
//! fix = '$x^{10}$'
//! ```
//!
//! A corpus groups training examples with one held-out test case:
//!
//! ```toml
//! version = 1
//!
//! [[group]]
//! id = "superscript"
//! examples = [
//!   { eq = '$x^10$', err = 'superscript 10', fix = '$x^{10}$' },
//! ]
//! test = { eq = '$f^(k)$', err = 'superscript (k)', fix = '$f^{(k)}$' }
//! ```
//!
//! Error messages are tokenized on whitespace when loaded.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use eqfix::synth::{Example, ExampleError};
use serde::Deserialize;
use thiserror::Error;

pub const CORPUS_VERSION: u64 = 1;

/// The corpus shipped with the tool.
pub const BUNDLED_CORPUS: &str = include_str!("../corpus/mini.toml");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported corpus version {0}")]
    Version(u64),
    #[error("{location}: {source}")]
    Example {
        location: String,
        source: ExampleError,
    },
    #[error("group {0}: no training examples")]
    EmptyGroup(String),
    #[error("duplicate group id {0}")]
    DuplicateGroup(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleGroup {
    pub id: String,
    /// Training examples, shortest equation first.
    pub examples: Vec<Example>,
    pub test: Example,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExample {
    eq: String,
    err: String,
    fix: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExamples {
    #[serde(default)]
    example: Vec<RawExample>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    id: String,
    examples: Vec<RawExample>,
    test: RawExample,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    version: u64,
    #[serde(default)]
    group: Vec<RawGroup>,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CorpusError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map_or((1, 1), |span| line_column(text, span.start));
        CorpusError::Parse {
            line,
            column,
            message: e.message().to_owned(),
        }
    })
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })
}

fn convert(raw: RawExample, location: impl FnOnce() -> String) -> Result<Example, CorpusError> {
    Example::new(&raw.eq, &raw.err, &raw.fix).map_err(|source| CorpusError::Example {
        location: location(),
        source,
    })
}

fn sort_by_length(examples: &mut [Example]) {
    examples.sort_by_key(|e| e.eq.chars().count());
}

/// Parses an examples file, keeping the order of the file.
pub fn parse_examples(text: &str) -> Result<Vec<Example>, CorpusError> {
    let raw: RawExamples = parse(text)?;
    raw.example
        .into_iter()
        .enumerate()
        .map(|(i, x)| convert(x, || format!("example {}", i + 1)))
        .collect()
}

pub fn load_examples(path: &Path) -> Result<Vec<Example>, CorpusError> {
    parse_examples(&read(path)?)
}

pub fn parse_corpus(text: &str) -> Result<Vec<ExampleGroup>, CorpusError> {
    let raw: RawCorpus = parse(text)?;
    if raw.version != CORPUS_VERSION {
        return Err(CorpusError::Version(raw.version));
    }
    let mut seen = BTreeSet::new();
    let mut groups = Vec::with_capacity(raw.group.len());
    for g in raw.group {
        if !seen.insert(g.id.clone()) {
            return Err(CorpusError::DuplicateGroup(g.id));
        }
        if g.examples.is_empty() {
            return Err(CorpusError::EmptyGroup(g.id));
        }
        let mut examples = g
            .examples
            .into_iter()
            .enumerate()
            .map(|(i, x)| convert(x, || format!("group {}, example {}", g.id, i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        sort_by_length(&mut examples);
        let test = convert(g.test, || format!("group {}, test", g.id))?;
        groups.push(ExampleGroup {
            id: g.id,
            examples,
            test,
        });
    }
    Ok(groups)
}

pub fn load_corpus(path: &Path) -> Result<Vec<ExampleGroup>, CorpusError> {
    parse_corpus(&read(path)?)
}
