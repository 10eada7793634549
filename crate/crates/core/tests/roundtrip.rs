//! parse, pretty-print, parse again: the two trees must match.

mod common;

use phoenix::parser::ast::{erase_spans, Program};
use phoenix::parser::pretty_print;
use phoenix::pipeline::parse_source;
use phoenix::samples::AVERAGE;
use phoenix::SourceFile;

fn parse(text: &str) -> Program {
    parse_source(&SourceFile::new("t.phx", text)).unwrap_or_else(|d| panic!("{d}\n{text}"))
}

fn round_trips(text: &str) -> bool {
    let mut first = parse(text);
    let printed = pretty_print(&first);
    let mut second = parse(&printed);
    erase_spans(&mut first);
    erase_spans(&mut second);
    if first != second {
        eprintln!("--- original\n{text}--- printed\n{printed}");
    }
    first == second && pretty_print(&second) == printed
}

#[test]
fn sample_program_round_trips() {
    assert!(round_trips(AVERAGE));
}

#[test]
fn generated_programs_round_trip() {
    let mut passed = 0;
    for seed in 0..500 {
        let g = common::ProgramGen::new(seed).program();
        if round_trips(&g.source) {
            passed += 1;
        } else {
            eprintln!("seed {seed} failed");
        }
    }
    assert_eq!(passed, 500);
}
