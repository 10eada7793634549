//! Zero-based arrays and the bounds check.

use phoenix::pipeline::run_scripted;
use phoenix::vm::RunOptions;

const BOUNDS: &str = include_str!("programs/bounds.phx");

fn main() {
    let image = phoenix::compile_str(BOUNDS).expect("compiles").image;
    let (t, r) = run_scripted(&image, &[], RunOptions::default());
    print!("{}", t.render());
    match r {
        Ok(()) => println!("finished"),
        Err(e) => println!("{e}"),
    }
}
