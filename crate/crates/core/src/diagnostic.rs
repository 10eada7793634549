use std::fmt;

use crate::source::{SourceFile, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

/// Pipeline stage that produced a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Preprocess,
    Lex,
    Parse,
    Semantic,
    Codegen,
    Link,
    Runtime,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Preprocess => "preprocess",
            Phase::Lex => "lex",
            Phase::Parse => "parse",
            Phase::Semantic => "semantic",
            Phase::Codegen => "codegen",
            Phase::Link => "link",
            Phase::Runtime => "runtime",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub phase: Phase,
    pub code: &'static str,
    pub message: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn error(phase: Phase, code: &'static str, message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            severity: Severity::Error,
            phase,
            code,
            message: message.into(),
            span: Some(span),
        }
    }

    pub fn warning(
        phase: Phase,
        code: &'static str,
        message: impl Into<String>,
        span: Span,
    ) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            phase,
            code,
            message: message.into(),
            span: Some(span),
        }
    }

    /// A diagnostic with no source location (link and runtime failures).
    pub fn unlocated(phase: Phase, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            phase,
            code,
            message: message.into(),
            span: None,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `phase code line:col message` followed by the offending source line, when located.
    pub fn render(&self, src: &SourceFile) -> String {
        render_diagnostic(self, src)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(f, "{} {} {} {}", self.phase, self.code, span, self.message),
            None => write!(f, "{} {} {}", self.phase, self.code, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

pub fn render_diagnostic(d: &Diagnostic, src: &SourceFile) -> String {
    let mut out = d.to_string();
    if let Some(span) = d.span {
        if let Some(line) = src.line_text(span.line) {
            out.push('\n');
            out.push_str(&line);
        }
    }
    out
}

/// Orders diagnostics by source position; unlocated ones sort last.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| (d.span.map_or(usize::MAX, |s| s.start), d.severity, d.code));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn located_render_has_header_and_line() {
        let src = SourceFile::new("f.phx", "a\nb\nc\n    وظيفة خطأ");
        let span = src.span(10, 15);
        let d = Diagnostic::error(Phase::Parse, "E-PAR-001", "unexpected token", span);
        let text = render_diagnostic(&d, &src);
        assert_eq!(text, "parse E-PAR-001 4:5 unexpected token\n    وظيفة خطأ");
        assert_eq!(text, render_diagnostic(&d, &src));
    }

    #[test]
    fn runtime_render_is_header_only() {
        let src = SourceFile::new("f.phx", "x");
        let d = Diagnostic::unlocated(Phase::Runtime, "R-001", "division by zero");
        assert_eq!(
            render_diagnostic(&d, &src),
            "runtime R-001 division by zero"
        );
    }
}
