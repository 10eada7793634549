//! Semantic analysis: symbol table, declaration order, calls and member access,
//! type checking, and removal of unused variables.

pub mod check;
pub mod eliminate;
pub mod resolve;
pub mod symbols;
pub mod typed;


pub use check::type_check;
pub use eliminate::eliminate_unused;
pub use resolve::{check_calls, check_use_before_decl, Resolutions};
pub use symbols::{build_symbols, ScopeStack, Symbol, SymbolKind, SymbolType};
pub use typed::TypedProgram;

use crate::diagnostic::Diagnostic;
use crate::parser::ast::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub eliminate_unused: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            eliminate_unused: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub typed: TypedProgram,
    pub symbols: ScopeStack,
    pub resolutions: Resolutions,
    pub warnings: Vec<Diagnostic>,
}

/// Runs every semantic pass in order. Each pass runs only if the previous
/// ones found no errors; a failing pass reports all of its own errors.
pub fn analyze(program: &Program, options: AnalyzeOptions) -> Result<Analysis, Vec<Diagnostic>> {
    let mut symbols = build_symbols(program)?;
    let mut resolutions = check_use_before_decl(program, &mut symbols)?;
    let errors = check_calls(program, &symbols, &mut resolutions);
    if !errors.is_empty() {
        return Err(errors);
    }
    let typed = type_check(program, &symbols, &resolutions).map_err(|e| vec![e])?;
    let (typed, warnings) = if options.eliminate_unused {
        eliminate_unused(typed)
    } else {
        (typed, Vec::new())
    };
    Ok(Analysis {
        typed,
        symbols,
        resolutions,
        warnings,
    })
}
