//! Version-space representation of string-transformer sets.
//!
//! [`gen_string`] builds a DAG whose denotation is every transformer that maps
//! the inputs to a given output; [`intersect`] combines the DAGs of several
//! examples and [`enumerate_topk`] extracts the best-ranked members.
//!
//! Programs are ranked by [`Score`] (lower is better), then by the derived
//! structural order of the expression, which makes every ranking total and
//! deterministic.

use std::collections::HashMap;
use std::ops::Add;
use std::sync::Arc;

use crate::transform::{Atomic, Position, StringExpr, StringTransformer, TokenSet};

/// A set of atomic expressions with an explicit representation of positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomicVsa {
    Const(String),
    /// Every `SubStr(#input, p1, p2)` with `p1 ∈ starts` and `p2 ∈ ends`.
    SubStr {
        input: usize,
        starts: Arc<[Position]>,
        ends: Arc<[Position]>,
    },
}

/// A node of the version space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StringVsa {
    Union(Vec<Vsa>),
    Atom(AtomicVsa),
    /// Every `Concat(F, S)` with `F` drawn from `head` and `S` from `tail`.
    Concat {
        head: Arc<[AtomicVsa]>,
        tail: Vsa,
    },
}

pub type Vsa = Arc<StringVsa>;

fn key(v: &Vsa) -> usize {
    Arc::as_ptr(v) as usize
}

/// Ranking key of a program; lower is better.
///
/// `size` charges a fixed amount per substring and a small base plus a
/// per-character amount per constant, so a program built from pieces of the
/// input beats one that spells the same text out, while single inserted
/// characters stay constants. `positions` prefers the ends of the input,
/// then first/last token occurrences, then other relative positions, and
/// absolute positions away from the ends last. `constant_chars` breaks the
/// remaining ties in favour of substrings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score {
    pub size: u32,
    pub positions: u32,
    pub constant_chars: u32,
}

const SUBSTR_COST: u32 = 6;
const CONST_BASE_COST: u32 = 1;
const CONST_CHAR_COST: u32 = 4;
const FAR_ABSPOS_COST: u32 = 5;

impl Add for Score {
    type Output = Score;

    fn add(self, rhs: Score) -> Score {
        Score {
            size: self.size + rhs.size,
            positions: self.positions + rhs.positions,
            constant_chars: self.constant_chars + rhs.constant_chars,
        }
    }
}

impl std::iter::Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::default(), Add::add)
    }
}

pub fn position_cost(p: &Position) -> u32 {
    match p {
        Position::Abs(k) => {
            let from_end = if *k >= 0 { *k } else { -k - 1 };
            match from_end {
                0 => 0,
                1 => 1,
                _ => FAR_ABSPOS_COST,
            }
        }
        Position::Rel {
            occurrence, offset, ..
        } => 2 + u32::from(*offset != 0) + u32::from(occurrence.abs() != 1),
    }
}

pub fn score_atomic(a: &Atomic) -> Score {
    match a {
        Atomic::Const(s) => {
            let n = s.chars().count() as u32;
            Score {
                size: CONST_BASE_COST + CONST_CHAR_COST * n,
                positions: 0,
                constant_chars: n,
            }
        }
        Atomic::SubStr { start, end, .. } => Score {
            size: SUBSTR_COST,
            positions: position_cost(start) + position_cost(end),
            constant_chars: 0,
        },
    }
}

pub fn score_expr(e: &StringExpr) -> Score {
    e.atoms().into_iter().map(score_atomic).sum()
}

pub fn score_transformer(t: &StringTransformer) -> Score {
    score_expr(t.body())
}

/// All position expressions that evaluate to `k` on `x`: the absolute index,
/// its negative twin, and token-relative positions with offsets in −1..=1.
pub fn gen_pos(x: &str, k: usize, tokens: &TokenSet) -> Vec<Position> {
    let chars: Vec<char> = x.chars().collect();
    gen_pos_chars(&chars, k, tokens)
}

fn gen_pos_chars(x: &[char], k: usize, tokens: &TokenSet) -> Vec<Position> {
    assert!(
        k < x.len(),
        "position {k} outside input of length {}",
        x.len()
    );
    let len = x.len() as i64;
    let k = k as i64;
    let mut out = vec![Position::Abs(k), Position::Abs(k - len)];
    for token in tokens.tokens() {
        let spans = token.occurrences(x);
        let n = spans.len() as i64;
        for (idx, &(start, _)) in spans.iter().enumerate() {
            let offset = k - start as i64;
            if (-1..=1).contains(&offset) {
                let idx = idx as i64;
                out.push(Position::rel(token.clone(), idx + 1, offset));
                out.push(Position::rel(token.clone(), idx - n, offset));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One `SubStr` node per occurrence of `s` in `x`.
pub fn gen_substr(x: &str, s: &str, tokens: &TokenSet) -> Vec<AtomicVsa> {
    let x: Vec<char> = x.chars().collect();
    let s: Vec<char> = s.chars().collect();
    gen_substr_chars(&x, 0, &s, tokens)
}

fn gen_substr_chars(x: &[char], input: usize, s: &[char], tokens: &TokenSet) -> Vec<AtomicVsa> {
    assert!(!s.is_empty(), "substring target must be non-empty");
    if s.len() > x.len() {
        return Vec::new();
    }
    (0..=x.len() - s.len())
        .filter(|&k| x[k..k + s.len()] == *s)
        .map(|k| AtomicVsa::SubStr {
            input,
            starts: gen_pos_chars(x, k, tokens).into(),
            ends: gen_pos_chars(x, k + s.len() - 1, tokens).into(),
        })
        .collect()
}

/// `ConstStr(s)` plus every substring expression over the inputs that yields `s`.
pub fn gen_atomic(inputs: &[&str], s: &str, tokens: &TokenSet) -> Vec<AtomicVsa> {
    let inputs: Vec<Vec<char>> = inputs.iter().map(|x| x.chars().collect()).collect();
    let s: Vec<char> = s.chars().collect();
    gen_atomic_chars(&inputs, &s, tokens)
}

fn gen_atomic_chars(inputs: &[Vec<char>], s: &[char], tokens: &TokenSet) -> Vec<AtomicVsa> {
    let mut out = vec![AtomicVsa::Const(s.iter().collect())];
    for (i, x) in inputs.iter().enumerate() {
        out.extend(gen_substr_chars(x, i, s, tokens));
    }
    out
}

/// Every transformer that maps `inputs` to `s`.
///
/// Nodes are shared per suffix of `s`, so the DAG has O(len(s)²) join nodes.
///
/// # Panics
///
/// If `s` is empty; no transformer produces the empty string.
pub fn gen_string(inputs: &[&str], s: &str, tokens: &TokenSet) -> Vsa {
    let inputs: Vec<Vec<char>> = inputs.iter().map(|x| x.chars().collect()).collect();
    let s: Vec<char> = s.chars().collect();
    assert!(!s.is_empty(), "output string must be non-empty");
    let n = s.len();
    let mut suffix: Vec<Option<Vsa>> = vec![None; n + 1];
    for i in (0..n).rev() {
        let mut children: Vec<Vsa> = gen_atomic_chars(&inputs, &s[i..], tokens)
            .into_iter()
            .map(|a| Arc::new(StringVsa::Atom(a)))
            .collect();
        for j in i + 1..n {
            let head: Arc<[AtomicVsa]> = gen_atomic_chars(&inputs, &s[i..j], tokens).into();
            let tail = suffix[j].clone().expect("suffix built");
            children.push(Arc::new(StringVsa::Concat { head, tail }));
        }
        suffix[i] = Some(Arc::new(StringVsa::Union(children)));
    }
    suffix[0].take().expect("non-empty output")
}

fn intersect_positions(a: &[Position], b: &[Position]) -> Vec<Position> {
    a.iter().filter(|p| b.contains(p)).cloned().collect()
}

pub fn intersect_atomic(a: &AtomicVsa, b: &AtomicVsa) -> Option<AtomicVsa> {
    match (a, b) {
        (AtomicVsa::Const(x), AtomicVsa::Const(y)) => (x == y).then(|| a.clone()),
        (
            AtomicVsa::SubStr {
                input: i1,
                starts: s1,
                ends: e1,
            },
            AtomicVsa::SubStr {
                input: i2,
                starts: s2,
                ends: e2,
            },
        ) if i1 == i2 => {
            let starts = intersect_positions(s1, s2);
            let ends = intersect_positions(e1, e2);
            (!starts.is_empty() && !ends.is_empty()).then(|| AtomicVsa::SubStr {
                input: *i1,
                starts: starts.into(),
                ends: ends.into(),
            })
        }
        _ => None,
    }
}

/// The version space of programs in both `a` and `b`; `None` when no
/// program is consistent with both.
pub fn intersect(a: &Vsa, b: &Vsa) -> Option<Vsa> {
    let mut memo = HashMap::new();
    intersect_memo(a, b, &mut memo)
}

fn union_of(children: Vec<Vsa>) -> Option<Vsa> {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match &*c {
            StringVsa::Union(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(c),
        }
    }
    match flat.len() {
        0 => None,
        1 => flat.pop(),
        _ => Some(Arc::new(StringVsa::Union(flat))),
    }
}

fn intersect_memo(
    a: &Vsa,
    b: &Vsa,
    memo: &mut HashMap<(usize, usize), Option<Vsa>>,
) -> Option<Vsa> {
    if let Some(hit) = memo.get(&(key(a), key(b))) {
        return hit.clone();
    }
    let result = match (&**a, &**b) {
        (StringVsa::Union(xs), _) => union_of(
            xs.iter()
                .filter_map(|x| intersect_memo(x, b, memo))
                .collect(),
        ),
        (_, StringVsa::Union(ys)) => union_of(
            ys.iter()
                .filter_map(|y| intersect_memo(a, y, memo))
                .collect(),
        ),
        (StringVsa::Atom(x), StringVsa::Atom(y)) => {
            intersect_atomic(x, y).map(|a| Arc::new(StringVsa::Atom(a)))
        }
        (StringVsa::Concat { head: h1, tail: t1 }, StringVsa::Concat { head: h2, tail: t2 }) => {
            let head: Vec<AtomicVsa> = h1
                .iter()
                .flat_map(|x| h2.iter().filter_map(move |y| intersect_atomic(x, y)))
                .collect();
            if head.is_empty() {
                None
            } else {
                intersect_memo(t1, t2, memo).map(|tail| {
                    Arc::new(StringVsa::Concat {
                        head: head.into(),
                        tail,
                    })
                })
            }
        }
        _ => None,
    };
    memo.insert((key(a), key(b)), result.clone());
    result
}

/// Number of programs in `v` (saturating).
pub fn vsa_size(v: &Vsa) -> u128 {
    fn atomic_size(a: &AtomicVsa) -> u128 {
        match a {
            AtomicVsa::Const(_) => 1,
            AtomicVsa::SubStr { starts, ends, .. } => {
                (starts.len() as u128).saturating_mul(ends.len() as u128)
            }
        }
    }
    fn go(v: &Vsa, memo: &mut HashMap<usize, u128>) -> u128 {
        if let Some(&n) = memo.get(&key(v)) {
            return n;
        }
        let n = match &**v {
            StringVsa::Atom(a) => atomic_size(a),
            StringVsa::Union(xs) => xs
                .iter()
                .fold(0u128, |acc, x| acc.saturating_add(go(x, memo))),
            StringVsa::Concat { head, tail } => head
                .iter()
                .map(atomic_size)
                .fold(0u128, u128::saturating_add)
                .saturating_mul(go(tail, memo)),
        };
        memo.insert(key(v), n);
        n
    }
    go(v, &mut HashMap::new())
}

fn atomic_contains(a: &AtomicVsa, e: &Atomic) -> bool {
    match (a, e) {
        (AtomicVsa::Const(x), Atomic::Const(y)) => x == y,
        (
            AtomicVsa::SubStr {
                input,
                starts,
                ends,
            },
            Atomic::SubStr {
                input: i,
                start,
                end,
            },
        ) => input == i && starts.contains(start) && ends.contains(end),
        _ => false,
    }
}

fn expr_contains(v: &StringVsa, e: &StringExpr) -> bool {
    match (v, e) {
        (StringVsa::Union(xs), _) => xs.iter().any(|x| expr_contains(x, e)),
        (StringVsa::Atom(a), StringExpr::Atom(f)) => atomic_contains(a, f),
        (StringVsa::Concat { head, tail }, StringExpr::Concat(f, rest)) => {
            head.iter().any(|a| atomic_contains(a, f)) && expr_contains(tail, rest)
        }
        _ => false,
    }
}

/// Membership test.
pub fn vsa_contains(v: &Vsa, t: &StringTransformer) -> bool {
    expr_contains(v, t.body())
}

fn expand_atomic(a: &AtomicVsa) -> Vec<Atomic> {
    match a {
        AtomicVsa::Const(s) => vec![Atomic::Const(s.clone())],
        AtomicVsa::SubStr {
            input,
            starts,
            ends,
        } => starts
            .iter()
            .flat_map(|p1| {
                ends.iter().map(move |p2| Atomic::SubStr {
                    input: *input,
                    start: p1.clone(),
                    end: p2.clone(),
                })
            })
            .collect(),
    }
}

/// Every program of `v`, or `None` if there are more than `limit`.
pub fn enumerate_all(v: &Vsa, limit: usize) -> Option<Vec<StringTransformer>> {
    if vsa_size(v) > limit as u128 {
        return None;
    }
    fn go(v: &StringVsa) -> Vec<Arc<StringExpr>> {
        match v {
            StringVsa::Union(xs) => xs.iter().flat_map(|x| go(x)).collect(),
            StringVsa::Atom(a) => expand_atomic(a)
                .into_iter()
                .map(|f| Arc::new(StringExpr::Atom(f)))
                .collect(),
            StringVsa::Concat { head, tail } => {
                let tails = go(tail);
                head.iter()
                    .flat_map(expand_atomic)
                    .flat_map(|f| {
                        tails
                            .iter()
                            .map(move |t| Arc::new(StringExpr::Concat(f.clone(), t.clone())))
                    })
                    .collect()
            }
        }
    }
    Some(
        go(v)
            .into_iter()
            .map(|e| StringTransformer::new((*e).clone()))
            .collect(),
    )
}

type RankedExprs = Arc<Vec<(Score, Arc<StringExpr>)>>;

fn truncate_sorted<T: Ord>(mut items: Vec<T>, k: usize) -> Vec<T> {
    items.sort();
    items.dedup();
    items.truncate(k);
    items
}

fn topk_atomic(set: &[AtomicVsa], k: usize) -> Vec<(Score, Atomic)> {
    let mut out = Vec::new();
    for a in set {
        match a {
            AtomicVsa::Const(_) => {
                let f = expand_atomic(a).remove(0);
                out.push((score_atomic(&f), f));
            }
            AtomicVsa::SubStr {
                input,
                starts,
                ends,
            } => {
                let best_starts =
                    truncate_sorted(starts.iter().map(|p| (position_cost(p), p)).collect(), k);
                let best_ends =
                    truncate_sorted(ends.iter().map(|p| (position_cost(p), p)).collect(), k);
                for (_, p1) in &best_starts {
                    for (_, p2) in &best_ends {
                        let f = Atomic::SubStr {
                            input: *input,
                            start: (*p1).clone(),
                            end: (*p2).clone(),
                        };
                        out.push((score_atomic(&f), f));
                    }
                }
            }
        }
    }
    truncate_sorted(out, k)
}

fn topk_memo(v: &Vsa, k: usize, memo: &mut HashMap<usize, RankedExprs>) -> RankedExprs {
    if let Some(hit) = memo.get(&key(v)) {
        return hit.clone();
    }
    let ranked: Vec<(Score, Arc<StringExpr>)> = match &**v {
        StringVsa::Atom(a) => topk_atomic(std::slice::from_ref(a), k)
            .into_iter()
            .map(|(s, f)| (s, Arc::new(StringExpr::Atom(f))))
            .collect(),
        StringVsa::Union(xs) => {
            let mut all = Vec::new();
            for x in xs {
                all.extend(topk_memo(x, k, memo).iter().cloned());
            }
            truncate_sorted(all, k)
        }
        StringVsa::Concat { head, tail } => {
            let heads = topk_atomic(head, k);
            let tails = topk_memo(tail, k, memo);
            let mut all = Vec::with_capacity(heads.len() * tails.len());
            for (hs, h) in &heads {
                for (ts, t) in tails.iter() {
                    all.push((
                        *hs + *ts,
                        Arc::new(StringExpr::Concat(h.clone(), t.clone())),
                    ));
                }
            }
            truncate_sorted(all, k)
        }
    };
    let ranked = Arc::new(ranked);
    memo.insert(key(v), ranked.clone());
    ranked
}

/// The `k` best programs of `v` in rank order, with their scores.
///
/// Scores are additive over the concatenation spine and ties fall back to
/// a lexicographic structural order, so the k best of a join are always
/// among the joins of the k best of its parts.
pub fn enumerate_topk(v: &Vsa, k: usize) -> Vec<(Score, StringTransformer)> {
    if k == 0 {
        return Vec::new();
    }
    topk_memo(v, k, &mut HashMap::new())
        .iter()
        .map(|(s, e)| (*s, StringTransformer::new((**e).clone())))
        .collect()
}
