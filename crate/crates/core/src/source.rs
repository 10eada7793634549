//! Source text model. All offsets count Unicode scalar values, never bytes.

use std::fmt;

/// A half-open range of codepoint offsets with the 1-based line/column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32) -> Self {
        debug_assert!(start <= end);
        Span {
            start,
            end,
            line,
            col,
        }
    }

    /// Smallest span covering both inputs. Line/column follow whichever starts first.
    pub fn merge(self, other: Span) -> Span {
        let first = if other.start < self.start {
            other
        } else {
            self
        };
        Span {
            start: first.start,
            end: self.end.max(other.end),
            line: first.line,
            col: first.col,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Hull of two spans; order-independent.
pub fn span_merge(a: Span, b: Span) -> Span {
    a.merge(b)
}

/// A decoded source file in logical (memory) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    path: String,
    codepoints: Vec<char>,
    line_starts: Vec<usize>,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: &str) -> Self {
        let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
        Self::from_codepoints(path, text.chars().collect())
    }

    pub fn from_codepoints(path: impl Into<String>, codepoints: Vec<char>) -> Self {
        let mut line_starts = vec![0];
        for (i, &c) in codepoints.iter().enumerate() {
            if c == '\n' {
                line_starts.push(i + 1);
            }
        }
        SourceFile {
            path: path.into(),
            codepoints,
            line_starts,
        }
    }

    /// Decodes UTF-8 bytes, stripping a leading byte-order mark.
    pub fn from_bytes(path: impl Into<String>, bytes: &[u8]) -> Result<Self, std::str::Utf8Error> {
        Ok(Self::new(path, std::str::from_utf8(bytes)?))
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn codepoints(&self) -> &[char] {
        &self.codepoints
    }

    pub fn line_starts(&self) -> &[usize] {
        &self.line_starts
    }

    pub fn len(&self) -> usize {
        self.codepoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codepoints.is_empty()
    }

    /// 1-based (line, column) of a codepoint offset. Offsets past the end map onto the last line.
    pub fn line_col(&self, offset: usize) -> (u32, u32) {
        let line_idx = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = offset - self.line_starts[line_idx];
        (line_idx as u32 + 1, col as u32 + 1)
    }

    /// Inverse of [`SourceFile::line_col`].
    pub fn offset(&self, line: u32, col: u32) -> Option<usize> {
        let start = *self.line_starts.get((line as usize).checked_sub(1)?)?;
        let off = start + (col as usize).checked_sub(1)?;
        let line_end = self.line_end(line as usize - 1);
        (off <= line_end).then_some(off)
    }

    pub fn span(&self, start: usize, end: usize) -> Span {
        let (line, col) = self.line_col(start);
        Span::new(start, end, line, col)
    }

    /// Text of the 1-based line, without its terminator.
    pub fn line_text(&self, line: u32) -> Option<String> {
        let idx = (line as usize).checked_sub(1)?;
        let start = *self.line_starts.get(idx)?;
        let end = self.line_end(idx);
        let text: String = self.codepoints[start..end].iter().collect();
        Some(text.trim_end_matches('\r').to_string())
    }

    pub fn slice(&self, span: Span) -> String {
        self.codepoints[span.start..span.end].iter().collect()
    }

    fn line_end(&self, idx: usize) -> usize {
        match self.line_starts.get(idx + 1) {
            Some(&next) => next - 1,
            None => self.codepoints.len(),
        }
    }
}
