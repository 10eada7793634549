//! A regex tokenizer written independently of the DFA lexer.

use phoenix::lexer::{tokenize, KEYWORDS};
use phoenix::preprocess::{preprocess, ERASED};
use phoenix::SourceFile;
use regex::Regex;

/// (kind name, lexeme, start, end, line, col) in codepoints.
pub type RefToken = (String, String, usize, usize, u32, u32);

pub struct Reference {
    blank: Regex,
    word: Regex,
    joiner_blank: Regex,
    string: Regex,
    open_string: Regex,
    bad_number: Regex,
    number: Regex,
    operator: Regex,
}

const LETTER: &str = r"[\x{0621}-\x{063F}\x{0641}-\x{064A}]";

impl Reference {
    pub fn new() -> Self {
        let word_rest = format!(
            r"[\x{{0621}}-\x{{063F}}\x{{0641}}-\x{{064A}}0-9_\x{{{:X}}}]*",
            ERASED as u32
        );
        Reference {
            blank: Regex::new(&format!(
                r"^[\s\x{{{:X}}}\x{{200C}}-\x{{200F}}\x{{061C}}]+",
                ERASED as u32
            ))
            .unwrap(),
            word: Regex::new(&format!("^{LETTER}{word_rest}")).unwrap(),
            joiner_blank: Regex::new(r"^[ \t]+").unwrap(),
            string: Regex::new("^\"[^\"\n]*\"").unwrap(),
            open_string: Regex::new("^\"[^\"\n]*").unwrap(),
            bad_number: Regex::new(r"^[0-9]+\.([^0-9]|$)").unwrap(),
            number: Regex::new(r"^[0-9]+(\.[0-9]+)?").unwrap(),
            operator: Regex::new(r"^(==|!=|<=|>=|&&|\|\||[-+*×/÷%&=<>(){}\[\],;:.])").unwrap(),
        }
    }

    fn operator_kind(op: &str) -> &'static str {
        match op {
            "==" => "EQ",
            "!=" => "NEQ",
            "<=" => "LE",
            ">=" => "GE",
            "&&" => "AND",
            "||" => "OR",
            "-" => "MINUS",
            "+" => "PLUS",
            "*" | "×" => "MUL",
            "/" | "÷" => "DIV",
            "%" => "MOD",
            "&" => "CONCAT",
            "=" => "ASSIGN",
            "<" => "LT",
            ">" => "GT",
            "(" => "LPAREN",
            ")" => "RPAREN",
            "{" => "LBRACE",
            "}" => "RBRACE",
            "[" => "LBRACKET",
            "]" => "RBRACKET",
            "," => "COMMA",
            ";" => "SEMI",
            ":" => "COLON",
            "." => "DOT",
            _ => unreachable!("{op}"),
        }
    }

    fn keyword_kind(word: &str) -> Option<String> {
        KEYWORDS
            .iter()
            .find(|(k, _)| *k == word)
            .map(|(_, kind)| kind.name().to_string())
    }

    /// Tries each compound keyword at `rest`; returns (keyword, byte length) of the longest match.
    fn compound(&self, rest: &str) -> Option<(String, usize)> {
        let mut best: Option<(String, usize)> = None;
        for (keyword, _) in KEYWORDS.iter().filter(|(k, _)| k.contains([' ', '-'])) {
            let mut at = 0;
            let mut ok = true;
            let mut first = true;
            let mut parts = keyword.split_inclusive([' ', '-']).peekable();
            let mut joiner = None;
            while let Some(part) = parts.next() {
                let (name, next_joiner) = match part.chars().last() {
                    Some(c @ (' ' | '-')) if parts.peek().is_some() || c == '-' => {
                        (&part[..part.len() - 1], Some(c))
                    }
                    _ => (part, None),
                };
                if !first {
                    match joiner {
                        Some('-') if rest[at..].starts_with('-') => at += 1,
                        Some(' ') => match self.joiner_blank.find(&rest[at..]) {
                            Some(m) => at += m.end(),
                            None => ok = false,
                        },
                        _ => ok = false,
                    }
                }
                if !ok {
                    break;
                }
                match self.word.find(&rest[at..]) {
                    Some(m) if skeleton(m.as_str()) == name => at += m.end(),
                    _ => {
                        ok = false;
                        break;
                    }
                }
                first = false;
                joiner = next_joiner;
            }
            if ok && best.as_ref().is_none_or(|b| at > b.1) {
                best = Some((keyword.to_string(), at));
            }
        }
        best
    }

    pub fn tokenize(&self, text: &str) -> Result<Vec<RefToken>, (&'static str, usize)> {
        let cp = |byte: usize| text[..byte].chars().count();
        let pos = |byte: usize| -> (usize, u32, u32) {
            let before = &text[..byte];
            let line = before.matches('\n').count() as u32 + 1;
            let col = before.rsplit('\n').next().unwrap().chars().count() as u32 + 1;
            (cp(byte), line, col)
        };
        let mut out = Vec::new();
        let mut at = 0;
        loop {
            if let Some(m) = self.blank.find(&text[at..]) {
                at += m.end();
            }
            let (start, line, col) = pos(at);
            let rest = &text[at..];
            if rest.is_empty() {
                out.push(("EOF".into(), String::new(), start, start, line, col));
                return Ok(out);
            }
            let (kind, lexeme, len) = if let Some((kw, len)) = self.compound(rest) {
                (Self::keyword_kind(&kw).unwrap(), kw, len)
            } else if let Some(m) = self.word.find(rest) {
                let word = skeleton(m.as_str());
                (
                    Self::keyword_kind(&word).unwrap_or_else(|| "IDENT".into()),
                    word,
                    m.end(),
                )
            } else if let Some(m) = self.string.find(rest) {
                ("STRING".into(), m.as_str().to_string(), m.end())
            } else if self.open_string.is_match(rest) {
                return Err(("E-LEX-003", start));
            } else if self.bad_number.is_match(rest) {
                return Err(("E-LEX-002", start));
            } else if let Some(m) = self.number.find(rest) {
                ("NUM".into(), m.as_str().to_string(), m.end())
            } else if let Some(m) = self.operator.find(rest) {
                (
                    Self::operator_kind(m.as_str()).into(),
                    m.as_str().to_string(),
                    m.end(),
                )
            } else {
                return Err(("E-LEX-001", start));
            };
            out.push((kind, lexeme, start, cp(at + len), line, col));
            at += len;
        }
    }
}

fn skeleton(word: &str) -> String {
    word.chars().filter(|&c| c != ERASED).collect()
}

pub fn dfa(text: &str) -> Result<Vec<RefToken>, (&'static str, usize)> {
    let pre = preprocess(&SourceFile::new("t", text));
    match tokenize(&pre) {
        Ok(tokens) => Ok(tokens
            .into_iter()
            .map(|t| {
                (
                    t.kind.name().to_string(),
                    t.lexeme,
                    t.span.start,
                    t.span.end,
                    t.span.line,
                    t.span.col,
                )
            })
            .collect()),
        Err(d) => Err((d.code, d.span.unwrap().start)),
    }
}
