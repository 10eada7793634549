//! Compiles the grade-average program and runs it with scripted grades.
//!
//! cargo run --example average -- 10 20 30 40 50

use phoenix::pipeline::run_scripted;
use phoenix::samples::AVERAGE;
use phoenix::vm::RunOptions;

fn main() {
    let mut grades: Vec<String> = std::env::args().skip(1).collect();
    if grades.is_empty() {
        grades = ["10", "20", "30", "40", "50"].map(String::from).to_vec();
    }
    let compiled = phoenix::compile_str(AVERAGE).expect("the sample compiles");
    let inputs: Vec<&str> = grades.iter().map(String::as_str).collect();
    let (transcript, result) = run_scripted(&compiled.image, &inputs, RunOptions::default());
    print!("{}", transcript.render());
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(2);
    }
}
