//! Benchmark over a corpus: synthesize from the shortest examples of each
//! group and try the ranked rules on the held-out case.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use eqfix::synth::{apply_rule, synth_rule};
use serde::Serialize;

use crate::corpus::ExampleGroup;

pub const REPORT_FORMAT: &str = "eqfix-bench";
pub const REPORT_VERSION: u64 = 1;

/// How many training examples of each group are used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Config {
    /// The `n` shortest examples.
    First(usize),
    All,
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Config::First(n) => write!(f, "C{n}"),
            Config::All => f.write_str("C-all"),
        }
    }
}

impl FromStr for Config {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "all" || lower == "c-all" {
            return Ok(Config::All);
        }
        lower
            .strip_prefix('c')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(Config::First)
            .ok_or_else(|| format!("unknown configuration '{s}' (expected c1, c2, ... or all)"))
    }
}

impl Serialize for Config {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupResult {
    pub id: String,
    pub training_examples: usize,
    pub solved: bool,
    /// Rules tried on the test case, up to and including the first success.
    pub attempts: usize,
    pub synthesis_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigResult {
    pub config: Config,
    pub solved: usize,
    pub total: usize,
    pub mean_synthesis_ms: f64,
    pub groups: Vec<GroupResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub format: &'static str,
    pub version: u64,
    pub k: usize,
    pub configs: Vec<ConfigResult>,
}

impl BenchReport {
    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> BenchReport {
        let mut r = self.clone();
        for c in &mut r.configs {
            c.mean_synthesis_ms = 0.0;
            for g in &mut c.groups {
                g.synthesis_ms = 0.0;
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_group(group: &ExampleGroup, config: Config, k: usize) -> GroupResult {
    let n = match config {
        Config::First(n) => n.min(group.examples.len()),
        Config::All => group.examples.len(),
    };
    let training = &group.examples[..n];
    let started = Instant::now();
    let synthesized = synth_rule(training, k);
    let synthesis_ms = started.elapsed().as_secs_f64() * 1000.0;
    let test = &group.test;
    let (solved, attempts, error) = match synthesized {
        Err(e) => (false, 0, Some(e.to_string())),
        Ok(rules) => {
            let hit = rules
                .iter()
                .position(|r| apply_rule(r, &test.eq, &test.err).as_deref() == Ok(&test.fix));
            match hit {
                Some(i) => (true, i + 1, None),
                None => (false, rules.len().min(k), None),
            }
        }
    };
    GroupResult {
        id: group.id.clone(),
        training_examples: n,
        solved,
        attempts,
        synthesis_ms,
        error,
    }
}

pub fn run_bench(groups: &[ExampleGroup], configs: &[Config], k: usize) -> BenchReport {
    let configs = configs
        .iter()
        .map(|&config| {
            let results: Vec<GroupResult> =
                groups.iter().map(|g| run_group(g, config, k)).collect();
            let total = results.len();
            let mean_synthesis_ms = if total == 0 {
                0.0
            } else {
                results.iter().map(|g| g.synthesis_ms).sum::<f64>() / total as f64
            };
            ConfigResult {
                config,
                solved: results.iter().filter(|g| g.solved).count(),
                total,
                mean_synthesis_ms,
                groups: results,
            }
        })
        .collect();
    BenchReport {
        format: REPORT_FORMAT,
        version: REPORT_VERSION,
        k,
        configs,
    }
}

/// Plain-text summary with one line per group and configuration.
pub fn render_table(report: &BenchReport) -> String {
    let mut out = String::new();
    for c in &report.configs {
        out.push_str(&format!(
            "{}: {}/{} solved, mean synthesis {:.1} ms\n",
            c.config, c.solved, c.total, c.mean_synthesis_ms
        ));
        for g in &c.groups {
            let status = if g.solved { "solved" } else { "unsolved" };
            out.push_str(&format!(
                "  {:<24} {:<8} attempts {:>2}  {:>8.1} ms",
                g.id, status, g.attempts, g.synthesis_ms
            ));
            if let Some(e) = &g.error {
                out.push_str(&format!("  ({e})"));
            }
            out.push('\n');
        }
    }
    out
}
