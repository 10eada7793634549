//! Runs one program on the VM and on the reference tree-walking evaluator and compares.

use phoenix::pipeline::{eval_scripted, run_scripted};
use phoenix::samples::AVERAGE;
use phoenix::vm::RunOptions;

fn main() {
    let compiled = phoenix::compile_str(AVERAGE).expect("compiles");
    for inputs in [
        &["10", "20", "30", "40", "50"][..],
        &["1", "2", "2", "2", "2"],
        &["7", "x"],
        &["1"],
    ] {
        let (vm, vr) = run_scripted(&compiled.image, inputs, RunOptions::default());
        let (tw, tr) = eval_scripted(&compiled.typed, inputs, RunOptions::default());
        let vr = vr.map_err(|e| e.code);
        let tr = tr.map_err(|e| e.code);
        let agree = vm == tw && vr == tr;
        println!(
            "{inputs:?}: vm {:?} {vr:?} | oracle {:?} {tr:?} | agree={agree}",
            vm.shown(),
            tw.shown()
        );
    }
}
