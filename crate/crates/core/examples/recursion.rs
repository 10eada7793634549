//! Factorial through recursive calls, and what happens when recursion runs too deep.

use phoenix::pipeline::run_scripted;
use phoenix::vm::RunOptions;

const FACTORIAL: &str = include_str!("programs/factorial.phx");

const DEPTH: &str = "وظيفة عمق (رقم ن) : رقم\n{\nإذا : ن == 0\n{\nعودة : 0 ;\n}\nعودة : 1 + إستدعاء عمق(ن - 1) ;\n}\nنهاية الوظيفة\n\
وظيفة رئيسية (-) : البداية\n{\nرقم ن = 0 ;\nأدخل : ن ، \"العمق\" ;\nأعرض : إستدعاء عمق(ن) ;\n}\nنهاية الوظيفة\n";

fn main() {
    let fact = phoenix::compile_str(FACTORIAL).expect("compiles").image;
    for n in ["5", "10", "20"] {
        let (t, r) = run_scripted(&fact, &[n], RunOptions::default());
        println!("{} {:?}", t.shown().join(" "), r.map_err(|e| e.code));
    }
    let depth = phoenix::compile_str(DEPTH).expect("compiles").image;
    for n in ["1000", "100000"] {
        let (t, r) = run_scripted(&depth, &[n], RunOptions::default());
        match r {
            Ok(()) => println!("depth {n}: {}", t.shown().join(" ")),
            Err(e) => println!("depth {n}: {e}"),
        }
    }
}
