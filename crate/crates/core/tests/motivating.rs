use std::collections::BTreeSet;

use eqfix::pattern::{EquationPattern, ErrorPattern, Matcher, VarId};
use eqfix::synth::{
    apply_rule, apply_rule_traced, extract_string_examples, refine_rule, synth_error_pattern,
    synth_relaxers, synth_rule, ApplyError, Example, Relaxer, SynthError,
};
use eqfix::transform::StringTransformer;

fn ex(eq: &str, err: &str, fix: &str) -> Example {
    Example::new(eq, err, fix).unwrap()
}

fn table() -> Vec<Example> {
    vec![
        ex("$x^10$", "superscript 10", "$x^{10}$"),
        ex("$y^123+x$", "superscript 123", "$y^{123}+x$"),
        ex("$f^(k)$", "superscript (k)", "$f^{(k)}$"),
        ex(
            "$y=x+\\ldots+x^10$",
            "superscript 10",
            "$y=x+\\ldots+x^{10}$",
        ),
        ex("${1,2,3$", "Missing } inserted", "${1,2,3}$"),
        ex(
            "$S={x_1,\\ldots,x_n$",
            "Missing } inserted",
            "$S={x_1,\\ldots,x_n}$",
        ),
        ex("$2\\^x$", "Command \\^ invalid in math mode", "$2^x$"),
        ex(
            "$\\sum\\limits_{i=1}\\^N t_i$",
            "Command \\^ invalid in math mode",
            "$\\sum\\limits_{i=1}^N t_i$",
        ),
    ]
}

fn v(i: u32) -> VarId {
    VarId::base(i)
}

#[test]
fn error_patterns() {
    let t = table();
    assert_eq!(
        synth_error_pattern(&t[0..1]).unwrap(),
        ErrorPattern::new(vec![Matcher::str("superscript"), Matcher::var(v(1))]).unwrap()
    );
    assert_eq!(
        synth_error_pattern(&t[4..5]).unwrap(),
        ErrorPattern::new(vec![
            Matcher::str("Missing"),
            Matcher::var(v(1)),
            Matcher::str("inserted")
        ])
        .unwrap()
    );
    assert!(matches!(
        synth_error_pattern(&[t[0].clone(), t[4].clone()]),
        Err(SynthError::TokenCountMismatch { index: 1, .. })
    ));
}

#[test]
fn string_examples() {
    let t = table();
    let ep = synth_error_pattern(&t[0..2]).unwrap();
    let pairs = extract_string_examples(&t[0..2], &ep).unwrap();
    assert_eq!(
        pairs[&v(1)],
        vec![
            ("10".to_owned(), "{10}".to_owned()),
            ("123".to_owned(), "{123}".to_owned())
        ]
    );
    let ep = synth_error_pattern(&t[4..5]).unwrap();
    assert!(extract_string_examples(&t[4..5], &ep).is_err());
}

#[test]
fn relaxers_for_missing_brace() {
    let t = table();
    let ep = synth_error_pattern(&t[0..2]).unwrap();
    assert!(synth_relaxers(&t[0..2], &ep).unwrap().is_empty());
    let ep = synth_error_pattern(&t[4..5]).unwrap();
    assert_eq!(
        synth_relaxers(&t[4..5], &ep).unwrap(),
        BTreeSet::from([Relaxer::Top])
    );
}

#[test]
fn superscript_rule_generalizes_from_one_example() {
    let t = table();
    let rules = synth_rule(&t[0..1], 10).unwrap();
    assert_eq!(
        apply_rule(&rules[0], &t[1].eq, &t[1].err).unwrap(),
        t[1].fix
    );
    for target in &t[1..4] {
        assert_eq!(
            apply_rule(&rules[0], &target.eq, &target.err).unwrap(),
            target.fix
        );
    }
}

#[test]
fn refined_rule_solves_remaining_superscripts() {
    let t = table();
    let rules = refine_rule(&t[0..1], &t[1], 10).unwrap();
    let expected: StringTransformer =
        "Concat(ConstStr(\"{\"),Concat(SubStr(AbsPos(0),AbsPos(-1)),ConstStr(\"}\")))"
            .parse()
            .unwrap();
    assert_eq!(rules[0].transformer.get(&v(1)), Some(&expected));
    for target in &t[2..4] {
        assert_eq!(
            apply_rule(&rules[0], &target.eq, &target.err).unwrap(),
            target.fix
        );
    }
    assert!(refine_rule(&t[0..1], &t[4], 10).is_err());
}

#[test]
fn missing_brace_rule() {
    let t = table();
    let rules = synth_rule(&t[4..5], 10).unwrap();
    assert_eq!(rules[0].relaxers, BTreeSet::from([Relaxer::Top]));
    assert_eq!(
        rules[0].transformer.get(&VarId::Top).unwrap().to_string(),
        "Concat(SubStr(AbsPos(0),AbsPos(-2)),ConstStr(\"}$\"))"
    );
    assert_eq!(
        apply_rule(&rules[0], &t[5].eq, &t[5].err).unwrap(),
        t[5].fix
    );
}

#[test]
fn invalid_command_rule() {
    let t = table();
    let rules = synth_rule(&t[6..7], 10).unwrap();
    assert!(rules[0].relaxers.is_empty());
    assert_eq!(
        apply_rule(&rules[0], &t[7].eq, &t[7].err).unwrap(),
        t[7].fix
    );
}

#[test]
fn application_trace() {
    let t = table();
    let rules = synth_rule(&t[0..2], 1).unwrap();
    let trace = apply_rule_traced(&rules[0], &t[1].eq, &t[1].err).unwrap();
    assert_eq!(trace.error_bindings.get(&v(1)), Some("123"));
    assert_eq!(
        trace.pattern,
        EquationPattern::new(vec![
            Matcher::str("$y^"),
            Matcher::var(v(1)),
            Matcher::str("+x$")
        ])
        .unwrap()
    );
    assert_eq!(trace.inputs.get(&v(1)), Some("123"));
    assert_eq!(trace.outputs.get(&v(1)), Some("{123}"));
    assert_eq!(trace.fix, "$y^{123}+x$");
}

#[test]
fn application_failures() {
    let t = table();
    let rules = synth_rule(&t[0..2], 1).unwrap();
    let err = apply_rule(&rules[0], &t[4].eq, &t[4].err).unwrap_err();
    assert_eq!(err, ApplyError::ErrorMismatch);
    assert_eq!(err.step(), 1);
}

#[test]
fn contradictory_examples_fail() {
    let a = ex("$x^10$", "superscript 10", "$x^{10}$");
    let b = ex("$x^10$", "superscript 10", "$x^{1}0$");
    assert!(matches!(
        synth_rule(&[a, b], 10),
        Err(SynthError::Inconsistent(_))
    ));
}

#[test]
fn duplicate_example_refines_to_same_rules() {
    let t = table();
    assert_eq!(
        refine_rule(&t[0..1], &t[0], 10).unwrap(),
        synth_rule(&t[0..1], 10).unwrap()
    );
}

#[test]
fn every_rule_reproduces_its_examples() {
    let t = table();
    for group in [&t[0..2], &t[0..4], &t[4..6], &t[6..8]] {
        for rule in synth_rule(group, 10).unwrap() {
            for e in group {
                assert_eq!(apply_rule(&rule, &e.eq, &e.err).unwrap(), e.fix, "{rule}");
            }
        }
    }
}
