//! Phoenix: an Arabic-keyword, C#-like programming language.
//!
//! The pipeline is preprocess → lex → parse → semantic analysis → bytecode
//! generation → link, and the resulting program image runs on a stack VM.

pub mod cli;
pub mod codegen;
pub mod diagnostic;
pub mod lexer;
pub mod parser;
pub mod pipeline;
pub mod preprocess;
pub mod samples;
pub mod semantics;
pub mod source;
pub mod vm;

pub use diagnostic::{Diagnostic, Phase, Severity};
pub use pipeline::{compile_source, compile_str, CompileOptions, Compiled};
pub use source::{SourceFile, Span};
