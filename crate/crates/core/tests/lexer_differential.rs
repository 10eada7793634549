//! The DFA lexer against an independent regex tokenizer on generated inputs.

mod common;

use common::reference::{dfa, Reference};
use phoenix::preprocess::preprocess;
use phoenix::SourceFile;

#[test]
fn dfa_agrees_with_regex_reference() {
    let reference = Reference::new();
    let mut r = common::rng(0x1e7);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..1000 {
        let text = common::lexer_input(&mut r);
        let pre = preprocess(&SourceFile::new("t", &text)).text();
        let expected = reference.tokenize(&pre);
        let actual = dfa(&text);
        assert_eq!(
            actual, expected,
            "case {i}: {text:?}\npreprocessed: {pre:?}"
        );
        if expected.is_ok() {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    println!("accepted {accepted}, rejected {rejected}");
    assert!(
        accepted >= 300 && rejected >= 100,
        "accepted {accepted}, rejected {rejected}"
    );
}

#[test]
fn reference_handles_known_cases() {
    let reference = Reference::new();
    let toks = reference
        .tokenize("نهاية  الوظيفة قائمة-رقم أما عدا")
        .unwrap();
    let kinds: Vec<&str> = toks.iter().map(|t| t.0.as_str()).collect();
    assert_eq!(kinds, ["KW_ENDFUNC", "KW_NUMLIST", "IDENT", "IDENT", "EOF"]);
    assert_eq!(reference.tokenize("5.x"), Err(("E-LEX-002", 0)));
    assert_eq!(reference.tokenize("أ \"ب"), Err(("E-LEX-003", 2)));
    assert_eq!(reference.tokenize("!"), Err(("E-LEX-001", 0)));
}
