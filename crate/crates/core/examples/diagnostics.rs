//! A tour of compile-time diagnostics, one broken program per stage.

use phoenix::diagnostic::sort_diagnostics;
use phoenix::{compile_source, CompileOptions, SourceFile};

fn entry(body: &str) -> String {
    format!("وظيفة رئيسية (-) : البداية\n{{\n{body}\n}}\nنهاية الوظيفة\n")
}

fn main() {
    let cases = [
        ("unterminated string", entry("أعرض : \"مرحبا ;")),
        ("missing semicolon", entry("أعرض : 1")),
        ("used before declared", entry("س = 1 ;\nرقم س = 0 ;")),
        ("type mismatch", entry("رقم س = 0 ;\nس = \"نص\" ;")),
        ("ordering strings", entry("إذا : \"أ\" < \"ب\"\n{\n}")),
        ("unused variable", entry("رقم زائد = 9 ;\nأعرض : 1 ;")),
    ];
    for (name, text) in cases {
        let src = SourceFile::new(format!("{name}.phx"), &text);
        let mut diags = match compile_source(&src, CompileOptions::default()) {
            Ok(c) => c.warnings,
            Err(d) => d,
        };
        sort_diagnostics(&mut diags);
        println!("== {name}");
        for d in diags {
            println!("{}", d.render(&src));
        }
    }
}
