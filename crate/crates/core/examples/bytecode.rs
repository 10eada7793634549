//! Builds a program image, saves it, reloads it and prints the listing.

use phoenix::codegen::{count_opcode, disassemble, verify_code, ProgramImage};
use phoenix::samples::AVERAGE;

fn main() {
    let image = phoenix::compile_str(AVERAGE).expect("compiles").image;
    let bytes = image.to_bytes();
    println!(
        "image: {} bytes, {} constants",
        bytes.len(),
        image.constants.len()
    );
    let reloaded = ProgramImage::from_bytes(&bytes).expect("valid image");
    assert_eq!(reloaded.to_bytes(), bytes);
    for f in &reloaded.functions {
        verify_code(&f.code).expect("stack discipline holds");
    }
    let listing = disassemble(&reloaded);
    print!("{listing}");
    println!(
        "DIV x{}  CONCAT x{}",
        count_opcode(&listing, "DIV"),
        count_opcode(&listing, "CONCAT")
    );
}
