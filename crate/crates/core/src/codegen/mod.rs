//! Bytecode generation and linking into a program image.

pub mod disasm;
pub mod gen;
pub mod image;
pub mod opcode;
pub mod verify;


pub use disasm::{count_opcode, disassemble, instruction_line};
pub use gen::{gen_expression, gen_program, gen_statement, ConstPool, GeneratedProgram};
pub use image::{ClassDef, Constant, FieldDef, FunctionChunk, GlobalDef, ProgramImage};
pub use opcode::{Instr, Opcode};
pub use verify::{verify_chunk, verify_code};

use crate::diagnostic::Diagnostic;
use crate::semantics::typed::TypedProgram;

/// Assembles generated chunks into an image and checks every reference.
pub fn link(program: GeneratedProgram) -> Result<ProgramImage, Diagnostic> {
    let image = ProgramImage {
        constants: program.constants,
        globals: program.globals,
        classes: program.classes,
        functions: program.chunks,
        entry: program.entry,
    };
    image.validate()?;
    Ok(image)
}

/// Generation followed by linking.
pub fn compile_typed(tp: &TypedProgram) -> Result<ProgramImage, Diagnostic> {
    link(gen_program(tp)?)
}
