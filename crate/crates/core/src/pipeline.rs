//! The whole compiler as a few calls: source text in, program image out.

use crate::codegen::{compile_typed, ProgramImage};
use crate::diagnostic::Diagnostic;
use crate::lexer::tokenize;
use crate::parser::{ast::Program, parse_program};
use crate::preprocess::preprocess;
use crate::semantics::{analyze, Analysis, AnalyzeOptions, TypedProgram};
use crate::source::SourceFile;
use crate::vm::{run, tree_walk_eval, RunOptions, RuntimeError, ScriptedDialog, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub eliminate_unused: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            eliminate_unused: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub image: ProgramImage,
    pub typed: TypedProgram,
    pub warnings: Vec<Diagnostic>,
}

/// Preprocesses, tokenizes, and parses.
pub fn parse_source(src: &SourceFile) -> Result<Program, Diagnostic> {
    let tokens = tokenize(&preprocess(src))?;
    parse_program(&tokens)
}

/// Everything up to and including semantic analysis.
pub fn check_source(
    src: &SourceFile,
    options: CompileOptions,
) -> Result<Analysis, Vec<Diagnostic>> {
    let program = parse_source(src).map_err(|d| vec![d])?;
    analyze(
        &program,
        AnalyzeOptions {
            eliminate_unused: options.eliminate_unused,
        },
    )
}

/// The full pipeline. Errors stop at the first failing stage.
pub fn compile_source(
    src: &SourceFile,
    options: CompileOptions,
) -> Result<Compiled, Vec<Diagnostic>> {
    let analysis = check_source(src, options)?;
    let image = compile_typed(&analysis.typed).map_err(|d| vec![d])?;
    Ok(Compiled {
        image,
        typed: analysis.typed,
        warnings: analysis.warnings,
    })
}

pub fn compile_str(text: &str) -> Result<Compiled, Vec<Diagnostic>> {
    compile_source(&SourceFile::new("<input>", text), CompileOptions::default())
}

/// Runs an image against scripted input lines.
pub fn run_scripted(
    image: &ProgramImage,
    inputs: &[&str],
    options: RunOptions,
) -> (Transcript, Result<(), RuntimeError>) {
    let mut dialog = ScriptedDialog::new(inputs.iter().copied());
    let result = run(image, &mut dialog, options);
    (dialog.transcript, result)
}

/// Runs the reference evaluator against scripted input lines.
pub fn eval_scripted(
    typed: &TypedProgram,
    inputs: &[&str],
    options: RunOptions,
) -> (Transcript, Result<(), RuntimeError>) {
    let mut dialog = ScriptedDialog::new(inputs.iter().copied());
    let result = tree_walk_eval(typed, &mut dialog, options);
    (dialog.transcript, result)
}
