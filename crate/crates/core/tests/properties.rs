use std::collections::BTreeSet;

use eqfix::pattern::{
    generate_pattern, instantiate, match_equation_pattern, match_error_pattern, tokenize_message,
    Bindings, EquationPattern, ErrorPattern, Matcher, VarId,
};
use eqfix::synth::{apply_relaxers, apply_rule, relax_pattern, relaxers_of, synth_rule, Example};
use eqfix::transform::{eval_position, Atomic, Position, StringExpr, StringTransformer, TokenSet};
use eqfix::vsa::{
    enumerate_all, enumerate_topk, gen_pos, gen_string, intersect, vsa_contains, vsa_size,
};
use proptest::prelude::*;

fn text(max: usize) -> impl Strategy<Value = String> {
    proptest::string::string_regex(&format!("[ab_^{{}}01]{{1,{max}}}")).unwrap()
}

/// An alternating pattern with distinct variables and the bindings used to
/// build an equation from it.
fn pattern_and_bindings() -> impl Strategy<Value = (EquationPattern, Bindings)> {
    (
        any::<bool>(),
        proptest::collection::vec((text(3), text(3)), 1..4),
        proptest::option::of(text(3)),
    )
        .prop_map(|(lead, parts, tail)| {
            let mut m = Vec::new();
            let mut b = Bindings::new();
            for (i, (lit, val)) in parts.into_iter().enumerate() {
                if lead || i > 0 {
                    m.push(Matcher::str(lit));
                }
                let v = VarId::base(i as u32 + 1);
                b.insert(v.clone(), val);
                m.push(Matcher::var(v));
            }
            if let Some(t) = tail {
                m.push(Matcher::str(t));
            }
            (EquationPattern::new(m).unwrap(), b)
        })
}

fn alternates(p: &EquationPattern) -> bool {
    p.matchers()
        .windows(2)
        .all(|w| w[0].as_var().is_none() || w[1].as_var().is_none())
        && p.matchers().iter().all(|m| m.as_str() != Some(""))
}

proptest! {
    #[test]
    fn match_then_instantiate_restores_the_equation((p, b) in pattern_and_bindings()) {
        let eq = instantiate(&p, &b).unwrap();
        let found = match_equation_pattern(&p, &eq);
        prop_assert!(found.is_some());
        prop_assert_eq!(instantiate(&p, &found.unwrap()).unwrap(), eq);
    }

    #[test]
    fn generated_patterns_split_back(eq in text(10), picks in proptest::collection::vec((0usize..10, 1usize..4), 1..3)) {
        let chars: Vec<char> = eq.chars().collect();
        let b: Bindings = picks
            .iter()
            .enumerate()
            .map(|(i, &(start, len))| {
                let start = start % chars.len();
                let end = (start + len).min(chars.len());
                let value: String = chars[start..end].iter().collect();
                (VarId::base(i as u32 + 1), value)
            })
            .collect();
        if let Ok(p) = generate_pattern(&eq, &b) {
            prop_assert!(alternates(&p));
            let found = match_equation_pattern(&p, &eq).unwrap();
            for v in p.variables() {
                prop_assert_eq!(found.get(&v), b.get(&v));
            }
        }
    }

    #[test]
    fn tokens_survive_rejoining(words in proptest::collection::vec("[a-z}{\\\\]{1,5}", 1..6), gaps in proptest::collection::vec("[ \t\n]{1,3}", 6)) {
        let mut raw = String::new();
        for (w, g) in words.iter().zip(&gaps) {
            raw.push_str(w);
            raw.push_str(g);
        }
        let msg = tokenize_message(&raw).unwrap();
        prop_assert!(msg.tokens().iter().all(|t| !t.is_empty()));
        prop_assert_eq!(msg.tokens(), &words[..]);
        let again = tokenize_message(&msg.tokens().join(" ")).unwrap();
        prop_assert_eq!(again, msg.clone());
        let ep = ErrorPattern::new(vec![Matcher::var(VarId::base(1))]).unwrap();
        prop_assert_eq!(match_error_pattern(&ep, &msg), match_error_pattern(&ep, &msg));
    }

    #[test]
    fn identity_and_constants(x in text(10), c in text(4)) {
        prop_assert_eq!(StringTransformer::identity().eval(&x).unwrap(), x.clone());
        let t = StringTransformer::new(StringExpr::Atom(Atomic::constant(c.clone())));
        prop_assert_eq!(t.eval(&x).unwrap(), c);
    }

    #[test]
    fn absolute_positions_have_negative_twins(x in text(10), k in 0usize..10) {
        let len = x.chars().count();
        let k = k % len;
        prop_assert_eq!(
            eval_position(&Position::Abs(k as i64), &x),
            eval_position(&Position::Abs(k as i64 - len as i64), &x)
        );
        for p in gen_pos(&x, k, &TokenSet::default()) {
            prop_assert_eq!(eval_position(&p, &x), Ok(k));
        }
    }

    #[test]
    fn concatenation_evaluates_piecewise(x in text(8), spans in proptest::collection::vec((0usize..8, 0usize..8, text(2), any::<bool>()), 1..4)) {
        let len = x.chars().count() as i64;
        let atoms: Vec<Atomic> = spans
            .into_iter()
            .map(|(a, b, c, konst)| {
                if konst {
                    Atomic::constant(c)
                } else {
                    let (a, b) = ((a as i64) % len, (b as i64) % len);
                    Atomic::substr(Position::Abs(a.min(b)), Position::Abs(a.max(b)))
                }
            })
            .collect();
        let piecewise: String = atoms
            .iter()
            .map(|a| StringTransformer::new(StringExpr::Atom(a.clone())).eval(&x).unwrap())
            .collect();
        let whole = StringTransformer::new(StringExpr::from_atoms(atoms).unwrap());
        prop_assert_eq!(whole.eval(&x).unwrap(), piecewise);
    }

    #[test]
    fn relaxation_reaches_a_match((p, _) in pattern_and_bindings(), fix in text(10)) {
        let relaxed = relax_pattern(&p, &fix);
        prop_assert!(match_equation_pattern(&relaxed, &fix).is_some());
        prop_assert!(relaxed.len() <= p.len());
        prop_assert!(alternates(&relaxed));
        let replayed = apply_relaxers(&p, &relaxers_of(&relaxed)).unwrap();
        prop_assert!(match_equation_pattern(&replayed, &fix).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn version_spaces_are_sound(x in text(5), s in text(4)) {
        let tokens = TokenSet::default();
        let v = gen_string(&[&x], &s, &tokens);
        let programs = match enumerate_all(&v, 10_000) {
            Some(all) => {
                prop_assert_eq!(all.len() as u128, vsa_size(&v));
                all
            }
            None => enumerate_topk(&v, 500).into_iter().map(|(_, p)| p).collect(),
        };
        for p in &programs {
            prop_assert_eq!(p.eval(&x).unwrap(), s.clone(), "{}", p);
            prop_assert!(vsa_contains(&v, p));
        }
        let ranked = enumerate_topk(&v, 10);
        prop_assert_eq!(&ranked, &enumerate_topk(&v, 10));
        prop_assert!(ranked.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn intersection_narrows(x in text(4), y in text(4), s in text(3)) {
        let tokens = TokenSet::default();
        let a = gen_string(&[&x], &s, &tokens);
        let b = gen_string(&[&y], &s, &tokens);
        let both = intersect(&a, &b).expect("ConstStr is always shared");
        prop_assert!(vsa_size(&both) <= vsa_size(&a).min(vsa_size(&b)));
        if let (Some(pa), Some(pb), Some(pab)) = (
            enumerate_all(&a, 5_000),
            enumerate_all(&b, 5_000),
            enumerate_all(&both, 5_000),
        ) {
            let pb: BTreeSet<_> = pb.into_iter().collect();
            let expected: BTreeSet<_> = pa.into_iter().filter(|p| pb.contains(p)).collect();
            let actual: BTreeSet<_> = pab.into_iter().collect();
            prop_assert_eq!(actual, expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn synthesized_rules_reproduce_their_examples(
        cases in proptest::collection::vec(("[a-z]{1,3}", "[0-9]{1,3}", "[a-z+]{0,3}"), 1..4)
    ) {
        let examples: Vec<Example> = cases
            .iter()
            .map(|(base, exp, rest)| {
                Example::new(
                    &format!("${base}^{exp}{rest}$"),
                    &format!("superscript {exp}"),
                    &format!("${base}^{{{exp}}}{rest}$"),
                )
                .unwrap()
            })
            .collect();
        if let Ok(rules) = synth_rule(&examples, 5) {
            prop_assert!(rules.len() <= 5);
            for r in &rules {
                for e in &examples {
                    prop_assert_eq!(apply_rule(r, &e.eq, &e.err).unwrap(), e.fix.clone());
                }
            }
        }
    }
}
