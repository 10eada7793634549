//! Objects with private state and public methods.

use phoenix::pipeline::run_scripted;
use phoenix::vm::RunOptions;

const ACCOUNT: &str = include_str!("programs/account.phx");

fn main() {
    let compiled = phoenix::compile_str(ACCOUNT).expect("compiles");
    for class in &compiled.image.classes {
        let fields: Vec<&str> = class.fields.iter().map(|f| f.name.as_str()).collect();
        println!("class {} fields {:?}", class.name, fields);
    }
    let (t, r) = run_scripted(&compiled.image, &[], RunOptions::default());
    print!("{}", t.render());
    r.expect("runs");
}
