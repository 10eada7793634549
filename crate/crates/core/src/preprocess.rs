//! Comment removal and character normalization.
//!
//! Every transformation substitutes exactly one codepoint for one codepoint, so a
//! span into preprocessed text is also a valid span into the original file.

use crate::source::SourceFile;

/// Stands in for a diacritic or tatweel erased from inside a word. The lexer
/// treats it as part of the surrounding word but leaves it out of the lexeme.
pub const ERASED: char = '\u{FDD0}';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Substitution {
    pub offset: usize,
    pub original: char,
    pub replacement: char,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessedSource {
    pub codepoints: Vec<char>,
    pub normalization_log: Vec<Substitution>,
}

impl PreprocessedSource {
    pub fn text(&self) -> String {
        self.codepoints.iter().collect()
    }

    pub fn len(&self) -> usize {
        self.codepoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codepoints.is_empty()
    }
}

pub fn is_harakah(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{0652}' | '\u{0640}')
}

fn is_word_char(c: char) -> bool {
    crate::lexer::is_letter(c) || c.is_ascii_digit() || c == '_' || c == ERASED
}

/// Tracks whether a position lies inside a string literal. Strings never span lines.
#[derive(Default)]
struct StringTracker {
    inside: bool,
}

impl StringTracker {
    /// Returns whether `c` is string content, then advances.
    fn step(&mut self, c: char) -> bool {
        match c {
            '"' => {
                self.inside = !self.inside;
                false
            }
            '\n' => {
                self.inside = false;
                false
            }
            _ => self.inside,
        }
    }
}

/// Blanks every `//` comment (outside string literals) up to end of line.
pub fn strip_comments(src: &SourceFile) -> PreprocessedSource {
    let mut out = src.codepoints().to_vec();
    let mut strings = StringTracker::default();
    let mut i = 0;
    while i < out.len() {
        let c = out[i];
        let in_string = strings.step(c);
        if !in_string && c == '/' && out.get(i + 1) == Some(&'/') {
            while i < out.len() && out[i] != '\n' {
                out[i] = ' ';
                i += 1;
            }
            continue;
        }
        i += 1;
    }
    PreprocessedSource {
        codepoints: out,
        normalization_log: Vec::new(),
    }
}

/// Maps Arabic-Indic digits and punctuation to their ASCII forms and erases
/// diacritics, all outside string literals.
pub fn normalize_chars(src: PreprocessedSource) -> PreprocessedSource {
    let PreprocessedSource {
        mut codepoints,
        mut normalization_log,
    } = src;
    let mut strings = StringTracker::default();
    for i in 0..codepoints.len() {
        let c = codepoints[i];
        if strings.step(c) || c == '"' {
            continue;
        }
        let replacement = match c {
            '\u{0660}'..='\u{0669}' => char::from(b'0' + (c as u32 - 0x0660) as u8),
            '\u{060C}' => ',',
            '\u{061B}' => ';',
            c if is_harakah(c) => {
                let joined = i > 0 && is_word_char(codepoints[i - 1]);
                if joined {
                    ERASED
                } else {
                    ' '
                }
            }
            _ => continue,
        };
        codepoints[i] = replacement;
        normalization_log.push(Substitution {
            offset: i,
            original: c,
            replacement,
        });
    }
    PreprocessedSource {
        codepoints,
        normalization_log,
    }
}

pub fn preprocess(src: &SourceFile) -> PreprocessedSource {
    normalize_chars(strip_comments(src))
}
