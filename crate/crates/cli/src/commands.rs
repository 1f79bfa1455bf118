//! The `train`, `fix` and `bench` commands.
//!
//! Each command returns the process exit code; `Err` means the input could
//! not be read and maps to [`EXIT_INPUT`].

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use eqfix::library::RuleLibrary;
use eqfix::pattern::tokenize_message;

use crate::bench::{render_table, run_bench, Config};
use crate::corpus::{load_corpus, load_examples, parse_corpus, BUNDLED_CORPUS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNSOLVED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

pub struct TrainOptions {
    pub library: PathBuf,
    pub examples: PathBuf,
    pub top_k: Option<usize>,
}

pub struct FixOptions {
    pub library: PathBuf,
    pub eq: String,
    pub err: String,
    pub limit: usize,
    pub yes: bool,
}

pub struct BenchOptions {
    pub corpus: Option<PathBuf>,
    pub configs: Vec<Config>,
    pub top_k: usize,
    pub out: Option<PathBuf>,
}

fn load_library(path: &Path) -> Result<RuleLibrary> {
    RuleLibrary::load(path).with_context(|| format!("cannot load library {}", path.display()))
}

pub fn train(opts: &TrainOptions, out: &mut dyn Write) -> Result<u8> {
    if opts.top_k == Some(0) {
        bail!("--top-k must be at least 1");
    }
    let mut lib = if opts.library.exists() {
        load_library(&opts.library)?
    } else {
        RuleLibrary::default()
    };
    if let Some(k) = opts.top_k {
        lib.set_k(k);
    }
    let examples = load_examples(&opts.examples)
        .with_context(|| format!("cannot read examples {}", opts.examples.display()))?;
    if examples.is_empty() {
        bail!("{}: no examples", opts.examples.display());
    }
    match lib.train(&examples) {
        Ok(outcome) => {
            lib.save(&opts.library)?;
            let kind = if outcome.refined {
                "refined entry"
            } else {
                "new entry"
            };
            let rules = lib.entry(outcome.entry_id).map_or(0, |e| e.rules.len());
            writeln!(out, "{kind} {} ({rules} rules)", outcome.entry_id)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(out, "cannot synthesize a rule: {e}")?;
            Ok(EXIT_UNSOLVED)
        }
    }
}

/// Suggests fixes; without `yes`, asks on `prompt` and reads answers from
/// `input` until one is accepted. The accepted fix goes to `out`.
pub fn fix(
    opts: &FixOptions,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    prompt: &mut dyn Write,
) -> Result<u8> {
    if opts.limit == 0 {
        bail!("--limit must be at least 1");
    }
    let lib = load_library(&opts.library)?;
    let err = tokenize_message(&opts.err).context("invalid error message")?;
    if lib.find_applicable(&err).is_empty() {
        writeln!(prompt, "no applicable rules for this error message")?;
        return Ok(EXIT_UNSOLVED);
    }
    let suggestions = lib.suggest_fixes(&opts.eq, &err, opts.limit);
    if suggestions.is_empty() {
        writeln!(prompt, "no applicable rule produced a fix")?;
        return Ok(EXIT_UNSOLVED);
    }
    if opts.yes {
        writeln!(out, "{}", suggestions[0].fix)?;
        return Ok(EXIT_OK);
    }
    let n = suggestions.len();
    for (i, s) in suggestions.iter().enumerate() {
        write!(prompt, "[{}/{n}] {}\naccept? [y/N] ", i + 1, s.fix)?;
        prompt.flush()?;
        let mut answer = String::new();
        if input.read_line(&mut answer)? == 0 {
            writeln!(prompt)?;
            break;
        }
        if matches!(answer.trim().to_ascii_lowercase().as_str(), "y" | "yes") {
            writeln!(out, "{}", s.fix)?;
            return Ok(EXIT_OK);
        }
    }
    writeln!(prompt, "all suggested results are rejected")?;
    Ok(EXIT_UNSOLVED)
}

pub fn bench(opts: &BenchOptions, out: &mut dyn Write) -> Result<u8> {
    if opts.top_k == 0 {
        bail!("--top-k must be at least 1");
    }
    let groups = match &opts.corpus {
        Some(path) => {
            load_corpus(path).with_context(|| format!("cannot read corpus {}", path.display()))?
        }
        None => parse_corpus(BUNDLED_CORPUS).context("bundled corpus")?,
    };
    let report = run_bench(&groups, &opts.configs, opts.top_k);
    write!(out, "{}", render_table(&report))?;
    if let Some(path) = &opts.out {
        std::fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(EXIT_OK)
}
