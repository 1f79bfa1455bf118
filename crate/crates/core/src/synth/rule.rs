use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::pattern::{ErrorPattern, VarId};
use crate::synth::relax::Relaxer;
use crate::transform::StringTransformer;
use crate::vsa::{enumerate_topk, score_transformer, Score, Vsa};

/// One string transformer per pattern variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformer(BTreeMap<VarId, StringTransformer>);

impl Transformer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &VarId) -> Option<&StringTransformer> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: VarId, t: StringTransformer) {
        self.0.insert(v, t);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &StringTransformer)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn score(&self) -> Score {
        self.0.values().map(score_transformer).sum()
    }
}

impl FromIterator<(VarId, StringTransformer)> for Transformer {
    fn from_iter<I: IntoIterator<Item = (VarId, StringTransformer)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// A fixing rule: error pattern, relaxers and transformer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub error_pattern: ErrorPattern,
    pub relaxers: BTreeSet<Relaxer>,
    pub transformer: Transformer,
}

impl Rule {
    pub fn score(&self) -> Score {
        self.transformer.score()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.error_pattern)?;
        for (i, r) in self.relaxers.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")?;
        for (v, t) in self.transformer.iter() {
            write!(f, " {v} -> {t}")?;
        }
        Ok(())
    }
}

/// A set of rules sharing an error pattern and relaxers, with one version
/// space per variable.
#[derive(Clone, Debug)]
pub struct RuleVsa {
    pub error_pattern: ErrorPattern,
    pub relaxers: BTreeSet<Relaxer>,
    pub transformers: BTreeMap<VarId, Vsa>,
}

impl RuleVsa {
    /// The `k` best rules, ranked by summed transformer score.
    pub fn topk(&self, k: usize) -> Vec<Rule> {
        let mut partial: Vec<(Score, Vec<(VarId, StringTransformer)>)> =
            vec![(Score::default(), Vec::new())];
        for (v, vsa) in &self.transformers {
            let options = enumerate_topk(vsa, k);
            let mut next = Vec::with_capacity(partial.len() * options.len());
            for (score, chosen) in &partial {
                for (s, t) in &options {
                    let mut chosen = chosen.clone();
                    chosen.push((v.clone(), t.clone()));
                    next.push((*score + *s, chosen));
                }
            }
            next.sort();
            next.truncate(k);
            partial = next;
        }
        partial
            .into_iter()
            .map(|(_, chosen)| Rule {
                error_pattern: self.error_pattern.clone(),
                relaxers: self.relaxers.clone(),
                transformer: chosen.into_iter().collect(),
            })
            .collect()
    }
}
