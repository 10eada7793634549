//! Recursive-descent parser.
//!
//! Parsing stops at the first syntax error; there is no recovery and no partial tree.
//!
//! ```text
//! program    := item* EOF
//! item       := function | class | decl
//! function   := وظيفة ID '(' (params | '-') ')' ':' rettype block نهاية الوظيفة
//! params     := type ID (',' type ID)*
//! class      := صنف ID '{' (access (function | decl))* '}'
//! decl       := type ID '=' value ';'
//!             | type ID '[' NUM ']' ('=' '{' value (',' value)* '}')? ';'
//!             | ID ID ';'
//! stmt       := decl | lvalue '=' expr ';' | block
//!             | إذا ':' cond block (أما عدا ذلك block)?
//!             | كرر ':' cond block
//!             | أعرض ':' expr ';'
//!             | أدخل ':' lvalue ',' STRING ';'
//!             | إستدعاء ':' path args ';'
//!             | عودة (':' expr)? ';'
//! cond       := and ('||' and)*
//! and        := atom ('&&' atom)*
//! atom       := '(' cond ')' | expr relop expr
//! expr       := sum ('&' sum)*
//! sum        := product (('+' | '-') product)*
//! product    := unary (('×' | '÷' | '%') unary)*
//! unary      := ('+' | '-') unary | primary
//! primary    := NUM | STRING | path ('[' expr ']')? | '(' expr ')' | إستدعاء path args
//! args       := '(' '-' ')' | '(' expr (',' expr)* ')'
//! ```

pub mod ast;
mod dump;
mod pretty;

pub use dump::dump_ast;
pub use pretty::{pretty_print, print_bool, print_expr};

use ast::*;

use crate::diagnostic::{Diagnostic, Phase};
use crate::lexer::{Token, TokenKind};
use crate::source::Span;

type PResult<T> = Result<T, Diagnostic>;

pub struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

fn describe(kinds: &[TokenKind]) -> String {
    kinds
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn found(tok: &Token) -> String {
    match tok.kind {
        TokenKind::Eof => "end of input".to_string(),
        TokenKind::Ident | TokenKind::Num | TokenKind::Str => {
            format!("{} `{}`", tok.kind.name(), tok.lexeme)
        }
        k => k.to_string(),
    }
}

const TYPE_START: &[TokenKind] = &[
    TokenKind::KwNum,
    TokenKind::KwStr,
    TokenKind::KwNumList,
    TokenKind::KwStrList,
];

impl<'t> Parser<'t> {
    /// `tokens` must end with an `Eof` token.
    pub fn new(tokens: &'t [Token]) -> Self {
        assert!(
            tokens.last().is_some_and(|t| t.kind == TokenKind::Eof),
            "token stream must end with EOF"
        );
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &'t Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> TokenKind {
        self.peek().kind
    }

    fn peek_at(&self, n: usize) -> TokenKind {
        self.tokens
            .get(self.pos + n)
            .map_or(TokenKind::Eof, |t| t.kind)
    }

    fn advance(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: TokenKind) -> Option<&'t Token> {
        (self.peek_kind() == kind).then(|| self.advance())
    }

    /// Span of the most recently consumed token.
    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn unexpected(&self, expected: &[TokenKind]) -> Diagnostic {
        let tok = self.peek();
        Diagnostic::error(
            Phase::Parse,
            "E-PAR-001",
            format!(
                "expected one of {}, found {}",
                describe(expected),
                found(tok)
            ),
            tok.span,
        )
    }

    fn unexpected_what(&self, what: &str) -> Diagnostic {
        let tok = self.peek();
        Diagnostic::error(
            Phase::Parse,
            "E-PAR-001",
            format!("expected {what}, found {}", found(tok)),
            tok.span,
        )
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<&'t Token> {
        match self.eat(kind) {
            Some(t) => Ok(t),
            None if kind == TokenKind::Semi => {
                let tok = self.peek();
                Err(Diagnostic::error(
                    Phase::Parse,
                    "E-PAR-002",
                    format!("missing `;` before {}", found(tok)),
                    tok.span,
                ))
            }
            None => Err(self.unexpected(&[kind])),
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.eat(TokenKind::Ident) {
            Some(t) => Ok(Ident {
                name: t.lexeme.clone(),
                span: t.span,
            }),
            None => Err(self.unexpected(&[TokenKind::Ident])),
        }
    }

    pub fn parse_program(&mut self) -> PResult<Program> {
        let mut items = Vec::new();
        while self.peek_kind() != TokenKind::Eof {
            items.push(self.parse_item()?);
        }
        Ok(Program { items })
    }

    fn parse_item(&mut self) -> PResult<Item> {
        match self.peek_kind() {
            TokenKind::KwFunc => Ok(Item::Function(self.parse_function_decl()?)),
            TokenKind::KwClass => Ok(Item::Class(self.parse_class_decl()?)),
            k if TYPE_START.contains(&k) => Ok(Item::Global(self.parse_decl()?)),
            TokenKind::Ident if self.peek_at(1) == TokenKind::Ident => {
                Ok(Item::Global(self.parse_decl()?))
            }
            _ => Err(self.unexpected_what("a function, class, or declaration")),
        }
    }

    fn parse_type(&mut self) -> PResult<TypeName> {
        let ty = match self.peek_kind() {
            TokenKind::KwNum => TypeName::Num,
            TokenKind::KwStr => TypeName::Str,
            TokenKind::KwNumList => TypeName::NumList,
            TokenKind::KwStrList => TypeName::StrList,
            _ => return Err(self.unexpected(TYPE_START)),
        };
        self.advance();
        Ok(ty)
    }

    pub fn parse_function_decl(&mut self) -> PResult<FunctionDecl> {
        let start = self.expect(TokenKind::KwFunc)?.span;
        let name = self.ident()?;
        self.expect(TokenKind::LParen)?;
        let params = self.parse_params()?;
        self.expect(TokenKind::Colon)?;
        let return_type = match self.peek_kind() {
            TokenKind::KwEntry => {
                self.advance();
                ReturnType::Entry
            }
            k if TYPE_START.contains(&k) => ReturnType::Value(self.parse_type()?),
            _ => {
                let mut expected = TYPE_START.to_vec();
                expected.push(TokenKind::KwEntry);
                return Err(self.unexpected(&expected));
            }
        };
        let body = self.parse_block()?;
        if self.eat(TokenKind::KwEndFunc).is_none() {
            let tok = self.peek();
            return Err(Diagnostic::error(
                Phase::Parse,
                "E-PAR-003",
                format!(
                    "missing `نهاية الوظيفة` after the body of `{}`, found {}",
                    name.name,
                    found(tok)
                ),
                tok.span,
            ));
        }
        Ok(FunctionDecl {
            name,
            params,
            return_type,
            body,
            span: start.merge(self.prev_span()),
        })
    }

    /// Parameter list after `(`, through `)`.
    fn parse_params(&mut self) -> PResult<Vec<Param>> {
        let bad = |p: &Self, msg: &str| {
            let tok = p.peek();
            Diagnostic::error(
                Phase::Parse,
                "E-PAR-004",
                format!("{msg}, found {}", found(tok)),
                tok.span,
            )
        };
        if self.peek_kind() == TokenKind::Minus && self.peek_at(1) == TokenKind::RParen {
            self.advance();
            self.advance();
            return Ok(Vec::new());
        }
        if self.peek_kind() == TokenKind::RParen {
            return Err(bad(self, "empty parameter list must be written `(-)`"));
        }
        let mut params = Vec::new();
        loop {
            if !TYPE_START.contains(&self.peek_kind()) {
                return Err(bad(self, "expected a parameter type"));
            }
            let ty = self.parse_type()?;
            if self.peek_kind() != TokenKind::Ident {
                return Err(bad(self, "expected a parameter name"));
            }
            let name = self.ident()?;
            params.push(Param { ty, name });
            match self.peek_kind() {
                TokenKind::Comma => {
                    self.advance();
                }
                TokenKind::RParen => {
                    self.advance();
                    return Ok(params);
                }
                _ => return Err(bad(self, "expected `,` or `)` in parameter list")),
            }
        }
    }

    fn parse_class_decl(&mut self) -> PResult<ClassDecl> {
        let start = self.expect(TokenKind::KwClass)?.span;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut members = Vec::new();
        loop {
            let access = match self.peek_kind() {
                TokenKind::KwPublic => Access::Public,
                TokenKind::KwPrivate => Access::Private,
                TokenKind::RBrace => break,
                _ => {
                    return Err(self.unexpected(&[
                        TokenKind::KwPublic,
                        TokenKind::KwPrivate,
                        TokenKind::RBrace,
                    ]))
                }
            };
            let mstart = self.advance().span;
            let decl = match self.peek_kind() {
                TokenKind::KwFunc => MemberDecl::Method(self.parse_function_decl()?),
                k if TYPE_START.contains(&k) => MemberDecl::Field(self.parse_decl()?),
                TokenKind::Ident => MemberDecl::Field(self.parse_decl()?),
                _ => return Err(self.unexpected_what("a field or method declaration")),
            };
            members.push(Member {
                access,
                decl,
                span: mstart.merge(self.prev_span()),
            });
        }
        self.expect(TokenKind::RBrace)?;
        Ok(ClassDecl {
            name,
            members,
            span: start.merge(self.prev_span()),
        })
    }

    /// Variable, array, or object declaration, including the terminating `;`.
    fn parse_decl(&mut self) -> PResult<Decl> {
        let start = self.peek().span;
        if self.peek_kind() == TokenKind::Ident {
            let class_name = self.ident()?;
            let name = self.ident()?;
            self.expect(TokenKind::Semi)?;
            return Ok(Decl::Object(ObjectDecl {
                class_name,
                name,
                span: start.merge(self.prev_span()),
            }));
        }
        let ty = self.parse_type()?;
        let name = self.ident()?;
        if self.eat(TokenKind::LBracket).is_some() {
            let size_tok = self.expect(TokenKind::Num)?;
            let size = size_tok.num_value().expect("NUM token carries a value");
            self.expect(TokenKind::RBracket)?;
            let init = if self.eat(TokenKind::Assign).is_some() {
                self.expect(TokenKind::LBrace)?;
                let mut values = vec![self.parse_value()?];
                while self.eat(TokenKind::Comma).is_some() {
                    values.push(self.parse_value()?);
                }
                self.expect(TokenKind::RBrace)?;
                Some(values)
            } else {
                None
            };
            self.expect(TokenKind::Semi)?;
            return Ok(Decl::Array(ArrayDecl {
                ty,
                name,
                size,
                size_span: size_tok.span,
                init,
                span: start.merge(self.prev_span()),
            }));
        }
        if self.peek_kind() != TokenKind::Assign {
            return Err(self.unexpected(&[TokenKind::Assign, TokenKind::LBracket]));
        }
        self.advance();
        let init = self.parse_value()?;
        self.expect(TokenKind::Semi)?;
        Ok(Decl::Var(VarDecl {
            ty,
            name,
            init,
            span: start.merge(self.prev_span()),
        }))
    }

    /// A literal initializer: optionally signed NUM, or STRING.
    fn parse_value(&mut self) -> PResult<Expr> {
        let tok = self.peek();
        match tok.kind {
            TokenKind::Str => {
                self.advance();
                Ok(Expr {
                    kind: ExprKind::Str(tok.str_value().unwrap().to_string()),
                    span: tok.span,
                })
            }
            TokenKind::Num => {
                self.advance();
                Ok(Expr {
                    kind: ExprKind::Num(tok.num_value().unwrap()),
                    span: tok.span,
                })
            }
            TokenKind::Plus | TokenKind::Minus => {
                let op = if tok.kind == TokenKind::Plus {
                    UnaryOp::Plus
                } else {
                    UnaryOp::Neg
                };
                self.advance();
                let inner = self.parse_value()?;
                if !matches!(inner.kind, ExprKind::Num(_) | ExprKind::Unary(..)) {
                    return Err(Diagnostic::error(
                        Phase::Parse,
                        "E-PAR-001",
                        "a sign must precede a number",
                        inner.span,
                    ));
                }
                Ok(Expr {
                    span: tok.span.merge(inner.span),
                    kind: ExprKind::Unary(op, Box::new(inner)),
                })
            }
            _ => Err(self.unexpected(&[TokenKind::Num, TokenKind::Str])),
        }
    }

    pub fn parse_block(&mut self) -> PResult<Block> {
        let start = self.expect(TokenKind::LBrace)?.span;
        let mut stmts = Vec::new();
        while !matches!(self.peek_kind(), TokenKind::RBrace | TokenKind::Eof) {
            stmts.push(self.parse_statement()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(Block {
            stmts,
            span: start.merge(self.prev_span()),
        })
    }

    pub fn parse_statement(&mut self) -> PResult<Stmt> {
        let start = self.peek().span;
        let kind = match self.peek_kind() {
            k if TYPE_START.contains(&k) => StmtKind::Decl(self.parse_decl()?),
            TokenKind::Ident if self.peek_at(1) == TokenKind::Ident => {
                StmtKind::Decl(self.parse_decl()?)
            }
            TokenKind::Ident => {
                let target = self.parse_lvalue()?;
                self.expect(TokenKind::Assign)?;
                let value = self.parse_expression()?;
                self.expect(TokenKind::Semi)?;
                StmtKind::Assign { target, value }
            }
            TokenKind::LBrace => StmtKind::Block(self.parse_block()?),
            TokenKind::KwIf => {
                self.advance();
                self.expect(TokenKind::Colon)?;
                let cond = self.parse_bool_expression()?;
                let then_block = self.parse_block()?;
                let else_block = match self.eat(TokenKind::KwElse) {
                    Some(_) => Some(self.parse_block()?),
                    None => None,
                };
                StmtKind::If {
                    cond,
                    then_block,
                    else_block,
                }
            }
            TokenKind::KwWhile => {
                self.advance();
                self.expect(TokenKind::Colon)?;
                let cond = self.parse_bool_expression()?;
                let body = self.parse_block()?;
                StmtKind::While { cond, body }
            }
            TokenKind::KwShow => {
                self.advance();
                self.expect(TokenKind::Colon)?;
                let e = self.parse_expression()?;
                self.expect(TokenKind::Semi)?;
                StmtKind::Show(e)
            }
            TokenKind::KwInput => {
                self.advance();
                self.expect(TokenKind::Colon)?;
                let target = self.parse_lvalue()?;
                self.expect(TokenKind::Comma)?;
                let tok = self.expect(TokenKind::Str)?;
                self.expect(TokenKind::Semi)?;
                StmtKind::Input {
                    target,
                    prompt: tok.str_value().unwrap().to_string(),
                    prompt_span: tok.span,
                }
            }
            TokenKind::KwCall => {
                let kw = self.advance().span;
                self.expect(TokenKind::Colon)?;
                let mut call = self.parse_call_tail()?;
                call.span = kw.merge(call.span);
                self.expect(TokenKind::Semi)?;
                StmtKind::Call(call)
            }
            TokenKind::KwReturn => {
                self.advance();
                let value = if self.eat(TokenKind::Colon).is_some() {
                    Some(self.parse_expression()?)
                } else {
                    None
                };
                self.expect(TokenKind::Semi)?;
                StmtKind::Return(value)
            }
            TokenKind::KwElse => {
                return Err(Diagnostic::error(
                    Phase::Parse,
                    "E-PAR-001",
                    "`أما عدا ذلك` without a preceding `إذا` block",
                    self.peek().span,
                ))
            }
            _ => return Err(self.unexpected_what("a statement")),
        };
        Ok(Stmt {
            kind,
            span: start.merge(self.prev_span()),
        })
    }

    fn parse_path(&mut self) -> PResult<Path> {
        let mut segments = vec![self.ident()?];
        while self.eat(TokenKind::Dot).is_some() {
            segments.push(self.ident()?);
        }
        Ok(Path { segments })
    }

    fn parse_lvalue(&mut self) -> PResult<LValue> {
        let path = self.parse_path()?;
        let index = if self.eat(TokenKind::LBracket).is_some() {
            let e = self.parse_expression()?;
            self.expect(TokenKind::RBracket)?;
            Some(Box::new(e))
        } else {
            None
        };
        let span = path.span().merge(self.prev_span());
        Ok(LValue { path, index, span })
    }

    /// `path ( args | - )`
    fn parse_call_tail(&mut self) -> PResult<Call> {
        let callee = self.parse_path()?;
        self.expect(TokenKind::LParen)?;
        let mut args = Vec::new();
        if self.peek_kind() == TokenKind::Minus && self.peek_at(1) == TokenKind::RParen {
            self.advance();
            self.advance();
        } else if self.peek_kind() == TokenKind::RParen {
            let tok = self.peek();
            return Err(Diagnostic::error(
                Phase::Parse,
                "E-PAR-004",
                "empty argument list must be written `(-)`",
                tok.span,
            ));
        } else {
            args.push(self.parse_expression()?);
            while self.eat(TokenKind::Comma).is_some() {
                args.push(self.parse_expression()?);
            }
            self.expect(TokenKind::RParen)?;
        }
        Ok(Call {
            span: callee.span().merge(self.prev_span()),
            callee,
            args,
        })
    }

    pub fn parse_expression(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_sum()?;
        while self.eat(TokenKind::Concat).is_some() {
            let rhs = self.parse_sum()?;
            lhs = binary(BinOp::Concat, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_sum(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_product()?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.parse_product()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn parse_product(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Mul => BinOp::Mul,
                TokenKind::Div => BinOp::Div,
                TokenKind::Mod => BinOp::Mod,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.parse_unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        let op = match self.peek_kind() {
            TokenKind::Plus => UnaryOp::Plus,
            TokenKind::Minus => UnaryOp::Neg,
            _ => return self.parse_primary(),
        };
        let start = self.advance().span;
        let operand = self.parse_unary()?;
        Ok(Expr {
            span: start.merge(operand.span),
            kind: ExprKind::Unary(op, Box::new(operand)),
        })
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        let tok = self.peek();
        match tok.kind {
            TokenKind::Num => {
                self.advance();
                Ok(Expr {
                    kind: ExprKind::Num(tok.num_value().unwrap()),
                    span: tok.span,
                })
            }
            TokenKind::Str => {
                self.advance();
                Ok(Expr {
                    kind: ExprKind::Str(tok.str_value().unwrap().to_string()),
                    span: tok.span,
                })
            }
            TokenKind::Ident => {
                let path = self.parse_path()?;
                if self.eat(TokenKind::LBracket).is_some() {
                    let index = self.parse_expression()?;
                    self.expect(TokenKind::RBracket)?;
                    let span = path.span().merge(self.prev_span());
                    return Ok(Expr {
                        kind: ExprKind::Index(path, Box::new(index)),
                        span,
                    });
                }
                Ok(Expr {
                    span: path.span(),
                    kind: ExprKind::Var(path),
                })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.parse_expression()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::KwCall => {
                self.advance();
                let mut call = self.parse_call_tail()?;
                call.span = tok.span.merge(call.span);
                Ok(Expr {
                    span: call.span,
                    kind: ExprKind::Call(call),
                })
            }
            _ => Err(self.unexpected(&[
                TokenKind::Num,
                TokenKind::Str,
                TokenKind::Ident,
                TokenKind::LParen,
                TokenKind::KwCall,
            ])),
        }
    }

    pub fn parse_bool_expression(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.parse_and()?;
        while self.eat(TokenKind::Or).is_some() {
            let rhs = self.parse_and()?;
            lhs = BoolExpr {
                span: lhs.span.merge(rhs.span),
                kind: BoolKind::Or(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.parse_bool_atom()?;
        while self.eat(TokenKind::And).is_some() {
            let rhs = self.parse_bool_atom()?;
            lhs = BoolExpr {
                span: lhs.span.merge(rhs.span),
                kind: BoolKind::And(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn parse_bool_atom(&mut self) -> PResult<BoolExpr> {
        // A `(` may open either a grouped condition or a parenthesized operand.
        // Try the condition first and fall back if it fails or is followed by an
        // operator that can only continue an arithmetic operand.
        if self.peek_kind() == TokenKind::LParen {
            let save = self.pos;
            let start = self.advance().span;
            let grouped = self.parse_bool_expression().and_then(|inner| {
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            });
            if let Ok(inner) = grouped {
                if !continues_operand(self.peek_kind()) {
                    return Ok(BoolExpr {
                        span: start.merge(self.prev_span()),
                        kind: BoolKind::Paren(Box::new(inner)),
                    });
                }
            }
            self.pos = save;
        }
        let lhs = self.parse_expression()?;
        let op = match self.peek_kind() {
            TokenKind::Eq => RelOp::Eq,
            TokenKind::Neq => RelOp::Ne,
            TokenKind::Lt => RelOp::Lt,
            TokenKind::Gt => RelOp::Gt,
            TokenKind::Le => RelOp::Le,
            TokenKind::Ge => RelOp::Ge,
            _ => {
                let tok = self.peek();
                return Err(Diagnostic::error(
                    Phase::Parse,
                    "E-PAR-005",
                    format!(
                        "expected a relational operator (==, !=, <, >, <=, >=), found {}",
                        found(tok)
                    ),
                    tok.span,
                ));
            }
        };
        self.advance();
        let rhs = self.parse_expression()?;
        Ok(BoolExpr {
            span: lhs.span.merge(rhs.span),
            kind: BoolKind::Cmp(op, lhs, rhs),
        })
    }
}

fn continues_operand(kind: TokenKind) -> bool {
    use TokenKind::*;
    matches!(
        kind,
        Plus | Minus | Mul | Div | Mod | Concat | Eq | Neq | Lt | Gt | Le | Ge
    )
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    Expr {
        span: lhs.span.merge(rhs.span),
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
    }
}

/// Parses a complete token stream (ending in EOF) into a program.
pub fn parse_program(tokens: &[Token]) -> Result<Program, Diagnostic> {
    let mut parser = Parser::new(tokens);
    parser.parse_program()
}
