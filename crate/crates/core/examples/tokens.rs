//! Shows what the preprocessor and lexer make of diacritics, compound keywords and comments.

use phoenix::lexer::{dump_tokens, tokenize};
use phoenix::preprocess::preprocess;
use phoenix::SourceFile;

const TEXT: &str = "كُرّر : عداد < 5 // حلقة\nأما عدا ذلك\nقائمة-رقم ق[2] ;\nنهاية الوظيفة\nأعرض : \"سلام\" & ٣.٥ ;\n";

fn main() {
    let src = SourceFile::new("tokens.phx", TEXT);
    let pre = preprocess(&src);
    println!(
        "after preprocessing: {} codepoints, {} substitutions",
        pre.len(),
        pre.normalization_log.len()
    );
    for s in &pre.normalization_log {
        println!("  @{} {:?} -> {:?}", s.offset, s.original, s.replacement);
    }
    match tokenize(&pre) {
        Ok(tokens) => print!("{}", dump_tokens(&tokens)),
        Err(d) => eprintln!("{}", d.render(&src)),
    }
}
