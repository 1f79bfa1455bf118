//! The rule library: learned rules with their training examples, persisted
//! as JSON.
//!
//! File layout (version 1):
//!
//! ```json
//! {
//!   "format": "eqfix-library",
//!   "version": 1,
//!   "k": 10,
//!   "next_id": 3,
//!   "next_revision": 5,
//!   "entries": [{
//!     "id": 1, "revision": 4, "created": 1700000000, "updated": 1700000100,
//!     "examples": [{ "eq": "$x^10$", "err": "superscript 10", "fix": "$x^{10}$" }],
//!     "rules": [{
//!       "error_pattern": [{ "str": "superscript" }, { "var": "v1" }],
//!       "relaxers": [],
//!       "transformer": { "v1": "Concat(ConstStr(\"{\"),...)" }
//!     }]
//!   }]
//! }
//! ```
//!
//! Variables, relaxers and transformers use the canonical term notation.
//! `revision` increases every time an entry is created or refined and
//! decides which entries are tried first.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{
    match_error_pattern, tokenize_message, ErrorMessage, ErrorPattern, Matcher, VarId,
};
use crate::synth::{apply_rule, refine_rule, synth_rule, Example, Relaxer, Rule, SynthError};
use crate::transform::StringTransformer;

pub const FORMAT_NAME: &str = "eqfix-library";
pub const FORMAT_VERSION: u64 = 1;
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported library version {0}")]
    Version(u64),
    #[error("invalid library: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEntry {
    pub id: u64,
    pub revision: u64,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub updated: u64,
    pub rules: Vec<Rule>,
    pub examples: Vec<Example>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainOutcome {
    pub entry_id: u64,
    pub refined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suggestion {
    pub entry_id: u64,
    pub fix: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleLibrary {
    k: usize,
    next_id: u64,
    next_revision: u64,
    entries: Vec<RuleEntry>,
}

impl Default for RuleLibrary {
    fn default() -> Self {
        Self::new(DEFAULT_K)
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RuleLibrary {
    /// # Panics
    ///
    /// If `k` is zero.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Self {
            k,
            next_id: 1,
            next_revision: 1,
            entries: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set_k(&mut self, k: usize) {
        assert!(k >= 1, "k must be positive");
        self.k = k;
    }

    pub fn entries(&self) -> &[RuleEntry] {
        &self.entries
    }

    pub fn entry(&self, id: u64) -> Option<&RuleEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    fn bump_revision(&mut self) -> u64 {
        let r = self.next_revision;
        self.next_revision += 1;
        r
    }

    /// Refines the oldest entry that stays consistent with `examples`, or
    /// adds a new entry.
    pub fn train(&mut self, examples: &[Example]) -> Result<TrainOutcome, SynthError> {
        if examples.is_empty() {
            return Err(SynthError::NoExamples);
        }
        for i in 0..self.entries.len() {
            let mut all = self.entries[i].examples.clone();
            all.extend_from_slice(&examples[..examples.len() - 1]);
            if let Ok(rules) = refine_rule(&all, &examples[examples.len() - 1], self.k) {
                let revision = self.bump_revision();
                let entry = &mut self.entries[i];
                entry.rules = rules;
                entry.examples.extend_from_slice(examples);
                entry.revision = revision;
                entry.updated = now();
                return Ok(TrainOutcome {
                    entry_id: entry.id,
                    refined: true,
                });
            }
        }
        let rules = synth_rule(examples, self.k)?;
        let id = self.next_id;
        self.next_id += 1;
        let revision = self.bump_revision();
        let t = now();
        self.entries.push(RuleEntry {
            id,
            revision,
            created: t,
            updated: t,
            rules,
            examples: examples.to_vec(),
        });
        Ok(TrainOutcome {
            entry_id: id,
            refined: false,
        })
    }

    /// Rules whose error pattern matches `err`: most recently trained entries
    /// first, then by rank within the entry.
    pub fn find_applicable(&self, err: &ErrorMessage) -> Vec<(u64, &Rule)> {
        let mut entries: Vec<&RuleEntry> = self.entries.iter().collect();
        entries.sort_by(|a, b| b.revision.cmp(&a.revision).then(a.id.cmp(&b.id)));
        entries
            .into_iter()
            .flat_map(|e| e.rules.iter().map(move |r| (e.id, r)))
            .filter(|(_, r)| match_error_pattern(&r.error_pattern, err).is_some())
            .collect()
    }

    /// Distinct fixes from the applicable rules, in rule order.
    pub fn suggest_fixes(&self, eq: &str, err: &ErrorMessage, limit: usize) -> Vec<Suggestion> {
        let mut out: Vec<Suggestion> = Vec::new();
        for (entry_id, rule) in self.find_applicable(err) {
            if out.len() >= limit {
                break;
            }
            if let Ok(fix) = apply_rule(rule, eq, err) {
                if out.iter().all(|s| s.fix != fix) {
                    out.push(Suggestion { entry_id, fix });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let file = LibraryFile {
            format: FORMAT_NAME.to_owned(),
            version: FORMAT_VERSION,
            k: self.k,
            next_id: self.next_id,
            next_revision: self.next_revision,
            entries: self.entries.iter().map(EntryFile::from).collect(),
        };
        serde_json::to_string_pretty(&file).expect("library serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LibraryError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(format_error)?;
        if value.get("format").and_then(|f| f.as_str()) != Some(FORMAT_NAME) {
            return Err(LibraryError::Invalid(format!(
                "missing \"format\": \"{FORMAT_NAME}\""
            )));
        }
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(FORMAT_VERSION) => {}
            Some(other) => return Err(LibraryError::Version(other)),
            None => return Err(LibraryError::Invalid("missing version".into())),
        }
        let file: LibraryFile = serde_json::from_str(text).map_err(format_error)?;
        if file.k == 0 {
            return Err(LibraryError::Invalid("k must be positive".into()));
        }
        let entries = file
            .entries
            .into_iter()
            .map(RuleEntry::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        let mut ids = BTreeSet::new();
        for e in &entries {
            if !ids.insert(e.id) {
                return Err(LibraryError::Invalid(format!(
                    "duplicate entry id {}",
                    e.id
                )));
            }
            if e.id >= file.next_id || e.revision >= file.next_revision {
                return Err(LibraryError::Invalid(format!(
                    "entry {} is ahead of the library counters",
                    e.id
                )));
            }
        }
        Ok(Self {
            k: file.k,
            next_id: file.next_id,
            next_revision: file.next_revision,
            entries,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), LibraryError> {
        fs::write(path, self.to_json() + "\n").map_err(|source| LibraryError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LibraryError> {
        let text = fs::read_to_string(path).map_err(|source| LibraryError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }
}

fn format_error(e: serde_json::Error) -> LibraryError {
    LibraryError::Format {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryFile {
    format: String,
    version: u64,
    k: usize,
    next_id: u64,
    next_revision: u64,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    id: u64,
    revision: u64,
    created: u64,
    updated: u64,
    examples: Vec<ExampleFile>,
    rules: Vec<RuleFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleFile {
    eq: String,
    err: String,
    fix: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    error_pattern: Vec<MatcherFile>,
    relaxers: Vec<String>,
    transformer: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MatcherFile {
    Str(String),
    Var(String),
}

fn invalid(context: &str, e: impl std::fmt::Display) -> LibraryError {
    LibraryError::Invalid(format!("{context}: {e}"))
}

impl From<&RuleEntry> for EntryFile {
    fn from(e: &RuleEntry) -> Self {
        Self {
            id: e.id,
            revision: e.revision,
            created: e.created,
            updated: e.updated,
            examples: e
                .examples
                .iter()
                .map(|x| ExampleFile {
                    eq: x.eq.clone(),
                    err: x.err.to_string(),
                    fix: x.fix.clone(),
                })
                .collect(),
            rules: e.rules.iter().map(RuleFile::from).collect(),
        }
    }
}

impl From<&Rule> for RuleFile {
    fn from(r: &Rule) -> Self {
        Self {
            error_pattern: r
                .error_pattern
                .matchers()
                .iter()
                .map(|m| match m {
                    Matcher::Str(s) => MatcherFile::Str(s.clone()),
                    Matcher::Var(v) => MatcherFile::Var(v.to_string()),
                })
                .collect(),
            relaxers: r.relaxers.iter().map(|x| x.to_string()).collect(),
            transformer: r
                .transformer
                .iter()
                .map(|(v, t)| (v.to_string(), t.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<EntryFile> for RuleEntry {
    type Error = LibraryError;

    fn try_from(e: EntryFile) -> Result<Self, LibraryError> {
        let examples = e
            .examples
            .into_iter()
            .map(|x| {
                let err = tokenize_message(&x.err).map_err(|err| invalid("example", err))?;
                Example::from_parts(x.eq, err, x.fix).map_err(|err| invalid("example", err))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rules = e
            .rules
            .into_iter()
            .map(Rule::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        if rules.is_empty() {
            return Err(LibraryError::Invalid(format!(
                "entry {} has no rules",
                e.id
            )));
        }
        Ok(Self {
            id: e.id,
            revision: e.revision,
            created: e.created,
            updated: e.updated,
            rules,
            examples,
        })
    }
}

impl TryFrom<RuleFile> for Rule {
    type Error = LibraryError;

    fn try_from(r: RuleFile) -> Result<Self, LibraryError> {
        let matchers = r
            .error_pattern
            .into_iter()
            .map(|m| match m {
                MatcherFile::Str(s) => Ok(Matcher::Str(s)),
                MatcherFile::Var(v) => v
                    .parse::<VarId>()
                    .map(Matcher::Var)
                    .map_err(|e| invalid("variable", e)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let error_pattern = ErrorPattern::new(matchers).map_err(|e| invalid("error pattern", e))?;
        let relaxers = r
            .relaxers
            .iter()
            .map(|s| s.parse::<Relaxer>().map_err(|e| invalid("relaxer", e)))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let transformer = r
            .transformer
            .iter()
            .map(|(v, t)| {
                let v = v.parse::<VarId>().map_err(|e| invalid("variable", e))?;
                let t = t
                    .parse::<StringTransformer>()
                    .map_err(|e| invalid("transformer", e))?;
                Ok((v, t))
            })
            .collect::<Result<_, LibraryError>>()?;
        Ok(Rule {
            error_pattern,
            relaxers,
            transformer,
        })
    }
}
