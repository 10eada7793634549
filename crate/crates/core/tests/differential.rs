//! The VM against the tree-walking evaluator on generated programs.

mod common;

use phoenix::codegen::verify_code;
use phoenix::compile_str;
use phoenix::pipeline::{eval_scripted, run_scripted};
use phoenix::vm::RunOptions;

#[test]
fn vm_matches_oracle() {
    let mut outcomes = std::collections::BTreeMap::new();
    for seed in 0..200 {
        let g = common::ProgramGen::new(1000 + seed).program();
        let compiled =
            compile_str(&g.source).unwrap_or_else(|d| panic!("seed {seed}: {d:?}\n{}", g.source));
        for f in &compiled.image.functions {
            verify_code(&f.code).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        }
        let inputs: Vec<&str> = g.inputs.iter().map(String::as_str).collect();
        let (vt, vr) = run_scripted(&compiled.image, &inputs, RunOptions::default());
        let (ot, or) = eval_scripted(&compiled.typed, &inputs, RunOptions::default());
        let vr = vr.map_err(|e| e.code);
        let or = or.map_err(|e| e.code);
        assert_eq!(
            (&vt, &vr),
            (&ot, &or),
            "seed {seed}\n{}\ninputs {inputs:?}",
            g.source
        );
        *outcomes.entry(vr.err().unwrap_or("ok")).or_insert(0) += 1;
    }
    println!("outcomes: {outcomes:?}");
    assert!(
        outcomes.get("ok").copied().unwrap_or(0) >= 50,
        "{outcomes:?}"
    );
}
