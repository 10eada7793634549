//! Parses a program, dumps the tree, pretty-prints it and checks the round trip.

use phoenix::parser::ast::erase_spans;
use phoenix::parser::{dump_ast, pretty_print};
use phoenix::pipeline::parse_source;
use phoenix::samples::AVERAGE;
use phoenix::SourceFile;

fn main() {
    let mut first = parse_source(&SourceFile::new("average.phx", AVERAGE)).expect("parses");
    print!("{}", dump_ast(&first));
    let printed = pretty_print(&first);
    println!("---\n{printed}---");
    let mut second =
        parse_source(&SourceFile::new("printed.phx", &printed)).expect("printed form parses");
    erase_spans(&mut first);
    erase_spans(&mut second);
    println!("round trip equal: {}", first == second);
}
