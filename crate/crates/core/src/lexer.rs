//! DFA scanner.
//!
//! Tokens are recognized by a single deterministic automaton run under maximal
//! munch. Identifier words are then resolved against the keyword table, which
//! includes multi-word (`نهاية الوظيفة`) and hyphenated (`قائمة-رقم`) keywords.

use std::fmt;

use crate::diagnostic::{Diagnostic, Phase};
use crate::preprocess::{PreprocessedSource, ERASED};
use crate::source::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    KwNum,
    KwStr,
    KwNumList,
    KwStrList,
    KwFunc,
    KwEndFunc,
    KwClass,
    KwPublic,
    KwPrivate,
    KwIf,
    KwElse,
    KwWhile,
    KwShow,
    KwInput,
    KwCall,
    KwReturn,
    KwEntry,
    Num,
    Str,
    Ident,
    Plus,
    Minus,
    Mul,
    Div,
    Mod,
    Concat,
    Assign,
    Eq,
    Neq,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Eof,
}

impl TokenKind {
    /// Name used in token dumps.
    pub fn name(self) -> &'static str {
        use TokenKind::*;
        match self {
            KwNum => "KW_NUM",
            KwStr => "KW_STR",
            KwNumList => "KW_NUMLIST",
            KwStrList => "KW_STRLIST",
            KwFunc => "KW_FUNC",
            KwEndFunc => "KW_ENDFUNC",
            KwClass => "KW_CLASS",
            KwPublic => "KW_PUBLIC",
            KwPrivate => "KW_PRIVATE",
            KwIf => "KW_IF",
            KwElse => "KW_ELSE",
            KwWhile => "KW_WHILE",
            KwShow => "KW_SHOW",
            KwInput => "KW_INPUT",
            KwCall => "KW_CALL",
            KwReturn => "KW_RETURN",
            KwEntry => "KW_ENTRY",
            Num => "NUM",
            Str => "STRING",
            Ident => "IDENT",
            Plus => "PLUS",
            Minus => "MINUS",
            Mul => "MUL",
            Div => "DIV",
            Mod => "MOD",
            Concat => "CONCAT",
            Assign => "ASSIGN",
            Eq => "EQ",
            Neq => "NEQ",
            Lt => "LT",
            Gt => "GT",
            Le => "LE",
            Ge => "GE",
            And => "AND",
            Or => "OR",
            LParen => "LPAREN",
            RParen => "RPAREN",
            LBrace => "LBRACE",
            RBrace => "RBRACE",
            LBracket => "LBRACKET",
            RBracket => "RBRACKET",
            Comma => "COMMA",
            Semi => "SEMI",
            Colon => "COLON",
            Dot => "DOT",
            Eof => "EOF",
        }
    }

    /// Canonical source text for fixed tokens.
    pub fn text(self) -> Option<&'static str> {
        use TokenKind::*;
        if let Some((word, _)) = KEYWORDS.iter().find(|(_, k)| *k == self) {
            return Some(word);
        }
        Some(match self {
            Plus => "+",
            Minus => "-",
            Mul => "×",
            Div => "÷",
            Mod => "%",
            Concat => "&",
            Assign => "=",
            Eq => "==",
            Neq => "!=",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            And => "&&",
            Or => "||",
            LParen => "(",
            RParen => ")",
            LBrace => "{",
            RBrace => "}",
            LBracket => "[",
            RBracket => "]",
            Comma => ",",
            Semi => ";",
            Colon => ":",
            Dot => ".",
            _ => return None,
        })
    }

    pub fn is_keyword(self) -> bool {
        KEYWORDS.iter().any(|(_, k)| *k == self)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.text() {
            Some(t) => write!(f, "`{t}`"),
            None => f.write_str(self.name()),
        }
    }
}

/// Keyword skeletons (diacritics removed). Multi-part keywords use a single
/// space or hyphen between parts here; the scanner accepts any run of blanks
/// between space-joined parts.
pub const KEYWORDS: &[(&str, TokenKind)] = &[
    ("رقم", TokenKind::KwNum),
    ("كلمة", TokenKind::KwStr),
    ("قائمة-رقم", TokenKind::KwNumList),
    ("قائمة-كلمة", TokenKind::KwStrList),
    ("وظيفة", TokenKind::KwFunc),
    ("نهاية الوظيفة", TokenKind::KwEndFunc),
    ("صنف", TokenKind::KwClass),
    ("عام", TokenKind::KwPublic),
    ("خاص", TokenKind::KwPrivate),
    ("إذا", TokenKind::KwIf),
    ("أما عدا ذلك", TokenKind::KwElse),
    ("كرر", TokenKind::KwWhile),
    ("أعرض", TokenKind::KwShow),
    ("أدخل", TokenKind::KwInput),
    ("إستدعاء", TokenKind::KwCall),
    ("عودة", TokenKind::KwReturn),
    ("البداية", TokenKind::KwEntry),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Num(f64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Keyword and identifier lexemes are skeletons with diacritics removed.
    pub lexeme: String,
    pub value: Option<Literal>,
    pub span: Span,
}

impl Token {
    pub fn num_value(&self) -> Option<f64> {
        match self.value {
            Some(Literal::Num(n)) => Some(n),
            _ => None,
        }
    }

    pub fn str_value(&self) -> Option<&str> {
        match &self.value {
            Some(Literal::Str(s)) => Some(s),
            _ => None,
        }
    }
}

/// Arabic letters usable in identifiers: U+0621..=U+064A minus tatweel.
pub fn is_letter(c: char) -> bool {
    matches!(c, '\u{0621}'..='\u{064A}') && c != '\u{0640}'
}

/// Codepoints skipped between tokens: whitespace, erased diacritics and bidi marks.
pub fn is_skippable(c: char) -> bool {
    c.is_whitespace() || c == ERASED || matches!(c, '\u{200C}'..='\u{200F}' | '\u{061C}')
}

fn is_word_continue(c: char) -> bool {
    is_letter(c) || c.is_ascii_digit() || c == '_' || c == ERASED
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Letter,
    Digit,
    Underscore,
    Erased,
    Quote,
    Newline,
    Point,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Amp,
    Equals,
    Bang,
    Less,
    Greater,
    Pipe,
    Punct(TokenKind),
    Other,
    End,
}

fn classify(c: Option<char>) -> CharClass {
    use CharClass::*;
    let Some(c) = c else { return End };
    match c {
        c if is_letter(c) => Letter,
        '0'..='9' => Digit,
        '_' => Underscore,
        ERASED => Erased,
        '"' => Quote,
        '\n' => Newline,
        '.' => Point,
        '+' => Plus,
        '-' => Minus,
        '*' | '×' => Star,
        '/' | '÷' => Slash,
        '%' => Percent,
        '&' => Amp,
        '=' => Equals,
        '!' => Bang,
        '<' => Less,
        '>' => Greater,
        '|' => Pipe,
        '(' => Punct(TokenKind::LParen),
        ')' => Punct(TokenKind::RParen),
        '{' => Punct(TokenKind::LBrace),
        '}' => Punct(TokenKind::RBrace),
        '[' => Punct(TokenKind::LBracket),
        ']' => Punct(TokenKind::RBracket),
        ',' => Punct(TokenKind::Comma),
        ';' => Punct(TokenKind::Semi),
        ':' => Punct(TokenKind::Colon),
        _ => Other,
    }
}

/// Automaton states. `Accept` states may still have outgoing transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexerState {
    Start,
    InIdent,
    InIntPart,
    AfterPoint,
    InFracPart,
    InString,
    StringClosed,
    InOperator(char),
    Accept(TokenKind),
    Reject,
}

impl LexerState {
    fn accepting(self) -> Option<TokenKind> {
        use LexerState::*;
        match self {
            InIdent => Some(TokenKind::Ident),
            InIntPart | InFracPart => Some(TokenKind::Num),
            StringClosed => Some(TokenKind::Str),
            InOperator('&') => Some(TokenKind::Concat),
            InOperator('=') => Some(TokenKind::Assign),
            InOperator('<') => Some(TokenKind::Lt),
            InOperator('>') => Some(TokenKind::Gt),
            Accept(k) => Some(k),
            _ => None,
        }
    }
}

/// Total transition function over (state, character class).
fn transition(state: LexerState, class: CharClass) -> LexerState {
    use CharClass as C;
    use LexerState::*;
    match (state, class) {
        (Start, C::Letter) => InIdent,
        (Start, C::Digit) => InIntPart,
        (Start, C::Quote) => InString,
        (Start, C::Point) => Accept(TokenKind::Dot),
        (Start, C::Plus) => Accept(TokenKind::Plus),
        (Start, C::Minus) => Accept(TokenKind::Minus),
        (Start, C::Star) => Accept(TokenKind::Mul),
        (Start, C::Slash) => Accept(TokenKind::Div),
        (Start, C::Percent) => Accept(TokenKind::Mod),
        (Start, C::Amp) => InOperator('&'),
        (Start, C::Equals) => InOperator('='),
        (Start, C::Bang) => InOperator('!'),
        (Start, C::Less) => InOperator('<'),
        (Start, C::Greater) => InOperator('>'),
        (Start, C::Pipe) => InOperator('|'),
        (Start, C::Punct(k)) => Accept(k),
        (Start, _) => Reject,

        (InIdent, C::Letter | C::Digit | C::Underscore | C::Erased) => InIdent,
        (InIdent, _) => Reject,

        (InIntPart, C::Digit) => InIntPart,
        (InIntPart, C::Point) => AfterPoint,
        (InIntPart, _) => Reject,
        (AfterPoint, C::Digit) => InFracPart,
        (AfterPoint, _) => Reject,
        (InFracPart, C::Digit) => InFracPart,
        (InFracPart, _) => Reject,

        (InString, C::Quote) => StringClosed,
        (InString, C::Newline | C::End) => Reject,
        (InString, _) => InString,
        (StringClosed, _) => Reject,

        (InOperator('&'), C::Amp) => Accept(TokenKind::And),
        (InOperator('|'), C::Pipe) => Accept(TokenKind::Or),
        (InOperator('='), C::Equals) => Accept(TokenKind::Eq),
        (InOperator('!'), C::Equals) => Accept(TokenKind::Neq),
        (InOperator('<'), C::Equals) => Accept(TokenKind::Le),
        (InOperator('>'), C::Equals) => Accept(TokenKind::Ge),
        (InOperator(_), _) => Reject,

        (Accept(_), _) => Reject,
        (Reject, _) => Reject,
    }
}

pub struct Lexer<'a> {
    chars: &'a [char],
    pos: usize,
    line_starts: Vec<usize>,
}

impl<'a> Lexer<'a> {
    pub fn new(chars: &'a [char]) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(
            chars
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == '\n')
                .map(|(i, _)| i + 1),
        );
        Lexer {
            chars,
            pos: 0,
            line_starts,
        }
    }

    fn span(&self, start: usize, end: usize) -> Span {
        let line = self.line_starts.partition_point(|&s| s <= start);
        let col = start - self.line_starts[line - 1];
        Span::new(start, end, line as u32, col as u32 + 1)
    }

    fn error(&self, code: &'static str, message: String, start: usize, end: usize) -> Diagnostic {
        Diagnostic::error(Phase::Lex, code, message, self.span(start, end))
    }

    /// Skips blanks, then scans one token. Returns an `Eof` token at end of input.
    pub fn next_token(&mut self) -> Result<Token, Diagnostic> {
        while self.pos < self.chars.len() && is_skippable(self.chars[self.pos]) {
            self.pos += 1;
        }
        let start = self.pos;
        if start == self.chars.len() {
            return Ok(Token {
                kind: TokenKind::Eof,
                lexeme: String::new(),
                value: None,
                span: self.span(start, start),
            });
        }

        let mut state = LexerState::Start;
        let mut last_accept: Option<(TokenKind, usize)> = None;
        let mut i = start;
        loop {
            let next = transition(state, classify(self.chars.get(i).copied()));
            if next == LexerState::Reject {
                break;
            }
            state = next;
            i += 1;
            if let Some(kind) = state.accepting() {
                last_accept = Some((kind, i));
            }
        }

        match state {
            LexerState::AfterPoint => {
                return Err(self.error(
                    "E-LEX-002",
                    "decimal point must be followed by a digit".into(),
                    start,
                    i,
                ));
            }
            LexerState::InString => {
                return Err(self.error(
                    "E-LEX-003",
                    "unterminated string literal".into(),
                    start,
                    i,
                ));
            }
            _ => {}
        }
        let Some((kind, end)) = last_accept else {
            let c = self.chars[start];
            return Err(self.error(
                "E-LEX-001",
                format!("unexpected character `{c}` (U+{:04X})", c as u32),
                start,
                start + 1,
            ));
        };
        self.pos = end;
        let raw: String = self.chars[start..end].iter().collect();
        match kind {
            TokenKind::Ident => Ok(self.resolve_word(start, end)),
            TokenKind::Num => {
                let n: f64 = raw.parse().expect("digit sequence parses");
                if !n.is_finite() {
                    return Err(self.error(
                        "E-LEX-004",
                        "numeric literal out of range".into(),
                        start,
                        end,
                    ));
                }
                Ok(Token {
                    kind,
                    lexeme: raw,
                    value: Some(Literal::Num(n)),
                    span: self.span(start, end),
                })
            }
            TokenKind::Str => {
                let inner = raw[1..raw.len() - 1].to_string();
                Ok(Token {
                    kind,
                    lexeme: raw,
                    value: Some(Literal::Str(inner)),
                    span: self.span(start, end),
                })
            }
            _ => Ok(Token {
                kind,
                lexeme: raw,
                value: None,
                span: self.span(start, end),
            }),
        }
    }

    /// Skeleton of the word occupying `start..end`.
    fn skeleton(&self, start: usize, end: usize) -> String {
        self.chars[start..end]
            .iter()
            .filter(|&&c| c != ERASED)
            .collect()
    }

    /// End of the identifier word starting at `at`, if one starts there.
    fn word_end(&self, at: usize) -> Option<usize> {
        if !self.chars.get(at).copied().is_some_and(is_letter) {
            return None;
        }
        let mut end = at + 1;
        while end < self.chars.len() && is_word_continue(self.chars[end]) {
            end += 1;
        }
        Some(end)
    }

    /// Classifies a scanned word, widening it to a compound keyword when the
    /// following words complete one. The longest compound wins.
    fn resolve_word(&mut self, start: usize, end: usize) -> Token {
        let word = self.skeleton(start, end);
        let mut best: Option<(TokenKind, usize, String)> = None;
        for &(keyword, kind) in KEYWORDS {
            let parts = split_keyword(keyword);
            if parts.len() < 2 || parts[0].1 != word {
                continue;
            }
            if let Some(stop) = self.match_tail(end, &parts[1..]) {
                if best.as_ref().is_none_or(|b| stop > b.1) {
                    best = Some((kind, stop, keyword.to_string()));
                }
            }
        }
        if let Some((kind, stop, lexeme)) = best {
            self.pos = stop;
            return Token {
                kind,
                lexeme,
                value: None,
                span: self.span(start, stop),
            };
        }
        let kind = KEYWORDS
            .iter()
            .find(|(k, _)| *k == word)
            .map_or(TokenKind::Ident, |&(_, k)| k);
        Token {
            kind,
            lexeme: word,
            value: None,
            span: self.span(start, end),
        }
    }

    fn match_tail(&self, mut at: usize, parts: &[(Joiner, &str)]) -> Option<usize> {
        for &(joiner, part) in parts {
            match joiner {
                Joiner::Hyphen => {
                    if self.chars.get(at) != Some(&'-') {
                        return None;
                    }
                    at += 1;
                }
                Joiner::Blank => {
                    let gap_start = at;
                    while matches!(self.chars.get(at), Some(' ' | '\t')) {
                        at += 1;
                    }
                    if at == gap_start {
                        return None;
                    }
                }
                Joiner::None => unreachable!("only the first part is unjoined"),
            }
            let end = self.word_end(at)?;
            if self.skeleton(at, end) != part {
                return None;
            }
            at = end;
        }
        Some(at)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Joiner {
    None,
    Blank,
    Hyphen,
}

fn split_keyword(keyword: &str) -> Vec<(Joiner, &str)> {
    let mut parts = Vec::new();
    let mut joiner = Joiner::None;
    let mut rest = keyword;
    loop {
        match rest.find([' ', '-']) {
            Some(i) => {
                parts.push((joiner, &rest[..i]));
                joiner = if rest[i..].starts_with('-') {
                    Joiner::Hyphen
                } else {
                    Joiner::Blank
                };
                rest = &rest[i + 1..];
            }
            None => {
                parts.push((joiner, rest));
                return parts;
            }
        }
    }
}

/// Scans the whole input. Stops at the first lexical error.
pub fn tokenize(src: &PreprocessedSource) -> Result<Vec<Token>, Diagnostic> {
    tokenize_chars(&src.codepoints)
}

pub fn tokenize_chars(chars: &[char]) -> Result<Vec<Token>, Diagnostic> {
    let mut lexer = Lexer::new(chars);
    let mut tokens = Vec::new();
    loop {
        let tok = lexer.next_token()?;
        let done = tok.kind == TokenKind::Eof;
        tokens.push(tok);
        if done {
            return Ok(tokens);
        }
    }
}

/// One token per line: `KIND<TAB>lexeme<TAB>line:col`.
pub fn dump_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for t in tokens {
        out.push_str(&format!("{}\t{}\t{}\n", t.kind.name(), t.lexeme, t.span));
    }
    out
}
