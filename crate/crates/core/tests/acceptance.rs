//! The acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::reference::{dfa, Reference};
use phoenix::codegen::{count_opcode, disassemble, verify_code};
use phoenix::parser::ast::erase_spans;
use phoenix::parser::pretty_print;
use phoenix::pipeline::{eval_scripted, parse_source, run_scripted};
use phoenix::preprocess::preprocess;
use phoenix::samples::AVERAGE;
use phoenix::vm::RunOptions;
use phoenix::{compile_str, SourceFile};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const BIN: &str = env!("CARGO_BIN_EXE_phoenix");

const FACTORIAL: &str = include_str!("../examples/programs/factorial.phx");

const DEPTH: &str = "وظيفة عمق (رقم ن) : رقم\n{\nإذا : ن == 0\n{\nعودة : 0 ;\n}\nعودة : 1 + إستدعاء عمق(ن - 1) ;\n}\nنهاية الوظيفة\n";

fn shown(src: &str, inputs: &[&str]) -> Result<Vec<String>, String> {
    let compiled = compile_str(src).map_err(|d| format!("{d:?}"))?;
    let (t, r) = run_scripted(&compiled.image, inputs, RunOptions::default());
    r.map_err(|e| e.to_string())?;
    Ok(t.shown().into_iter().map(String::from).collect())
}

fn phoenix(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN)
        .current_dir(dir)
        .env_remove("PHOENIX_MAX_STEPS")
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

fn average_end_to_end() -> Outcome {
    let start = Instant::now();
    let out = shown(AVERAGE, &["10", "20", "30", "40", "50"])?;
    let elapsed = start.elapsed();
    ensure!(out == ["المعدل هو 30"], "output {out:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("`{}` in {elapsed:?}", out[0]))
}

fn average_variants() -> Outcome {
    let a = shown(AVERAGE, &["1", "2", "3", "4", "5"])?;
    let b = shown(AVERAGE, &["1", "2", "2", "2", "2"])?;
    ensure!(a == ["المعدل هو 3"], "1..5 gave {a:?}");
    ensure!(b == ["المعدل هو 1.8"], "1,2,2,2,2 gave {b:?}");
    Ok(format!("`{}`, `{}`", a[0], b[0]))
}

fn lexer_differential() -> Outcome {
    let reference = Reference::new();
    let mut r = common::rng(0x1e7);
    let mut accepted = 0;
    for i in 0..1000 {
        let text = common::lexer_input(&mut r);
        let pre = preprocess(&SourceFile::new("t", &text)).text();
        let expected = reference.tokenize(&pre);
        ensure!(dfa(&text) == expected, "case {i} disagrees: {text:?}");
        accepted += expected.is_ok() as usize;
    }
    Ok(format!(
        "1000/1000 agree ({accepted} accepted, {} rejected by both)",
        1000 - accepted
    ))
}

fn round_trip(text: &str) -> Result<(), String> {
    let mut first = parse_source(&SourceFile::new("a", text)).map_err(|d| d.to_string())?;
    let mut second =
        parse_source(&SourceFile::new("b", &pretty_print(&first))).map_err(|d| d.to_string())?;
    erase_spans(&mut first);
    erase_spans(&mut second);
    ensure!(first == second, "trees differ");
    Ok(())
}

fn parser_round_trip() -> Outcome {
    round_trip(AVERAGE)?;
    for seed in 0..500 {
        round_trip(&common::ProgramGen::new(seed).program().source)
            .map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok("sample + 500/500 generated programs".into())
}

fn semantic_rules() -> Outcome {
    let e = common::entry;
    let two = "وظيفة جمع (رقم أ ، رقم ب) : رقم\n{\nعودة : أ + ب ;\n}\nنهاية الوظيفة\n";
    let corpus: Vec<(String, &str, u32)> = vec![
        (e("مجموع = 5 ;\nرقم مجموع = 0 ;"), "E-SEM-001", 3),
        (
            e("رقم س = 1 ;\nأعرض : س + ص ;\nرقم ص = 2 ;"),
            "E-SEM-001",
            4,
        ),
        (
            format!("{two}{}", e("أعرض : إستدعاء جمع(1) ;")),
            "E-SEM-002",
            8,
        ),
        (
            format!("{two}{}", e("رقم س = 0 ;\nس = إستدعاء جمع(1 ، 2 ، 3) ;")),
            "E-SEM-002",
            9,
        ),
        (e("رقم س = 0 ;\nس = \"نص\" ;"), "E-SEM-003", 4),
        (e("كلمة ك = \"أ\" ;\nأعرض : ك - 1 ;"), "E-SEM-003", 4),
        (e("إذا : \"أ\" < \"ب\"\n{\n}"), "E-SEM-010", 3),
        (
            e("كلمة ك = \"أ\" ;\nكرر : ك >= \"ب\"\n{\n}"),
            "E-SEM-010",
            4,
        ),
        (format!("{}{}", e(""), e("")), "E-SEM-011", 6),
        (
            format!("{}{}", e(""), e("").replace("رئيسية", "ثانية")),
            "E-SEM-011",
            6,
        ),
    ];
    for (src, code, line) in &corpus {
        let errors = compile_str(src)
            .err()
            .ok_or_else(|| format!("{code} program compiled"))?;
        ensure!(
            errors.len() == 1,
            "{code}: {} errors {errors:?}",
            errors.len()
        );
        let d = &errors[0];
        let got_line = d.span.map(|s| s.line);
        ensure!(
            d.code == *code && got_line == Some(*line),
            "expected {code} on line {line}, got {} on {got_line:?}",
            d.code
        );
    }
    Ok(format!(
        "{}/10 programs give exactly the intended error and line",
        corpus.len()
    ))
}

fn differential_execution() -> Outcome {
    for seed in 0..200 {
        let g = common::ProgramGen::new(1000 + seed).program();
        let compiled = compile_str(&g.source).map_err(|d| format!("seed {seed}: {d:?}"))?;
        let inputs: Vec<&str> = g.inputs.iter().map(String::as_str).collect();
        let (vt, vr) = run_scripted(&compiled.image, &inputs, RunOptions::default());
        let (ot, or) = eval_scripted(&compiled.typed, &inputs, RunOptions::default());
        ensure!(vt == ot, "seed {seed}: transcripts differ");
        ensure!(
            vr.map_err(|e| e.code) == or.map_err(|e| e.code),
            "seed {seed}: outcomes differ"
        );
    }
    Ok("200/200 transcripts and outcomes identical".into())
}

fn bound_checking() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    for (index, expect_code) in [("0", 0), ("4", 0), ("5", 2), ("-1", 2)] {
        for (op, body) in [
            ("load", format!("أعرض : ق[{index}] ;")),
            ("store", format!("ق[{index}] = 7 ;\nأعرض : ق[0] ;")),
        ] {
            let name = format!("b{op}{}.phx", index.replace('-', "m"));
            let src = common::entry(&format!(
                "قائمة-رقم ق[5] = {{ 1 ، 2 ، 3 ، 4 ، 5 }} ;\n{body}"
            ));
            std::fs::write(dir.path().join(&name), src).map_err(|e| e.to_string())?;
            let (code, _, stderr) = phoenix(dir.path(), &["run", &name]);
            ensure!(
                code == expect_code,
                "{op} [{index}] exited {code}: {stderr}"
            );
            if expect_code == 2 {
                ensure!(stderr.contains("R-003"), "{op} [{index}]: {stderr}");
            }
        }
        report.push(format!("[{index}]→{expect_code}"));
    }
    Ok(report.join(" "))
}

fn recursion() -> Outcome {
    let fact = shown(FACTORIAL, &["5"])?;
    ensure!(fact == ["5! = 120"], "factorial gave {fact:?}");
    let deep = shown(
        &(DEPTH.to_string() + &common::entry("أعرض : إستدعاء عمق(1000) ;")),
        &[],
    )?;
    ensure!(deep == ["1000"], "depth 1000 gave {deep:?}");
    let src = DEPTH.to_string() + &common::entry("أعرض : إستدعاء عمق(100000) ;");
    let image = compile_str(&src).map_err(|d| format!("{d:?}"))?.image;
    let (_, r) = run_scripted(&image, &[], RunOptions::default());
    ensure!(
        r.as_ref().err().map(|e| e.code) == Some("R-005"),
        "depth 100000 gave {r:?}"
    );
    Ok("5! = 120, depth 1000 ok, depth 100000 → R-005".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("average.phx"), AVERAGE).map_err(|e| e.to_string())?;
    for out in ["one.phxc", "two.phxc"] {
        let (code, _, err) = phoenix(dir.path(), &["build", "average.phx", "-o", out]);
        ensure!(code == 0, "build failed: {err}");
    }
    let one = std::fs::read(dir.path().join("one.phxc")).map_err(|e| e.to_string())?;
    let two = std::fs::read(dir.path().join("two.phxc")).map_err(|e| e.to_string())?;
    ensure!(one == two, "images differ");
    let image = phoenix::codegen::ProgramImage::from_bytes(&one).map_err(|d| d.to_string())?;
    let listing = disassemble(&image);
    let (div, concat) = (
        count_opcode(&listing, "DIV"),
        count_opcode(&listing, "CONCAT"),
    );
    ensure!(div == 1 && concat == 1, "DIV x{div}, CONCAT x{concat}");
    Ok(format!("{} identical bytes, DIV x1, CONCAT x1", one.len()))
}

fn unused_elimination() -> Outcome {
    let with_unused = AVERAGE.replace("رقم عداد = 0 ;", "رقم عداد = 0 ;\n    رقم زائد = 9 ;");
    ensure!(with_unused != AVERAGE, "insertion point not found");
    let compiled = compile_str(&with_unused).map_err(|d| format!("{d:?}"))?;
    let warnings: Vec<&str> = compiled.warnings.iter().map(|w| w.code).collect();
    ensure!(warnings == ["W-SEM-001"], "warnings {warnings:?}");
    let locals = compiled.image.entry_chunk().local_count;
    ensure!(locals == 3, "entry chunk has {locals} locals");
    let inputs = ["10", "20", "30", "40", "50"];
    let base = compile_str(AVERAGE).map_err(|d| format!("{d:?}"))?;
    let a = run_scripted(&base.image, &inputs, RunOptions::default());
    let b = run_scripted(&compiled.image, &inputs, RunOptions::default());
    ensure!(
        a.0 == b.0 && a.1.is_ok() && b.1.is_ok(),
        "transcripts differ"
    );
    Ok("W-SEM-001, 3 local slots, same transcript".into())
}

fn stack_discipline() -> Outcome {
    let mut corpus: Vec<String> = vec![AVERAGE.to_string(), FACTORIAL.to_string()];
    let programs = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/programs");
    for entry in std::fs::read_dir(programs).map_err(|e| e.to_string())? {
        corpus.push(
            std::fs::read_to_string(entry.map_err(|e| e.to_string())?.path())
                .map_err(|e| e.to_string())?,
        );
    }
    for seed in 0..700 {
        corpus.push(common::ProgramGen::new(seed).program().source);
    }
    let mut chunks = 0;
    for (i, src) in corpus.iter().enumerate() {
        let image = compile_str(src)
            .map_err(|d| format!("program {i}: {d:?}"))?
            .image;
        for f in &image.functions {
            verify_code(&f.code).map_err(|e| format!("program {i} function {}: {e}", f.name))?;
            chunks += 1;
        }
    }
    Ok(format!(
        "{chunks} chunks in {} programs verified",
        corpus.len()
    ))
}

// Runs without the test harness so the PASS/FAIL lines are always shown.
fn main() {
    let criteria: [Criterion; 11] = [
        ("1 average end to end", average_end_to_end),
        ("2 average variants", average_variants),
        ("3 lexer differential", lexer_differential),
        ("4 parser round trip", parser_round_trip),
        ("5 semantic rules", semantic_rules),
        ("6 differential execution", differential_execution),
        ("7 bound checking", bound_checking),
        ("8 recursion", recursion),
        ("9 determinism", determinism),
        ("10 unused-variable elimination", unused_elimination),
        ("11 stack discipline verifier", stack_discipline),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
