//! Syntax tree produced by the parser.

use crate::source::Span;

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeName {
    Num,
    Str,
    NumList,
    StrList,
}

impl TypeName {
    pub fn name(self) -> &'static str {
        match self {
            TypeName::Num => "NUM",
            TypeName::Str => "STR",
            TypeName::NumList => "NUMLIST",
            TypeName::StrList => "STRLIST",
        }
    }

    pub fn is_list(self) -> bool {
        matches!(self, TypeName::NumList | TypeName::StrList)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReturnType {
    Value(TypeName),
    /// `البداية`: the program entry point, which returns nothing.
    Entry,
}

impl ReturnType {
    pub fn name(self) -> &'static str {
        match self {
            ReturnType::Value(t) => t.name(),
            ReturnType::Entry => "ENTRY",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Function(FunctionDecl),
    Global(Decl),
    Class(ClassDecl),
}

impl Item {
    pub fn span(&self) -> Span {
        match self {
            Item::Function(f) => f.span,
            Item::Global(d) => d.span(),
            Item::Class(c) => c.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub ty: TypeName,
    pub name: Ident,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDecl {
    pub name: Ident,
    pub params: Vec<Param>,
    pub return_type: ReturnType,
    pub body: Block,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Access {
    Public,
    Private,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub name: Ident,
    pub members: Vec<Member>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub access: Access,
    pub decl: MemberDecl,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MemberDecl {
    Field(Decl),
    Method(FunctionDecl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub ty: TypeName,
    pub name: Ident,
    /// Always a literal, optionally signed.
    pub init: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayDecl {
    pub ty: TypeName,
    pub name: Ident,
    pub size: f64,
    pub size_span: Span,
    pub init: Option<Vec<Expr>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectDecl {
    pub class_name: Ident,
    pub name: Ident,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Var(VarDecl),
    Array(ArrayDecl),
    Object(ObjectDecl),
}

impl Decl {
    pub fn name(&self) -> &Ident {
        match self {
            Decl::Var(d) => &d.name,
            Decl::Array(d) => &d.name,
            Decl::Object(d) => &d.name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Decl::Var(d) => d.span,
            Decl::Array(d) => d.span,
            Decl::Object(d) => d.span,
        }
    }
}

/// A possibly qualified name: `س`, `سيارة.محرك.قوة`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub segments: Vec<Ident>,
}

impl Path {
    pub fn span(&self) -> Span {
        let first = self.segments.first().expect("path has a segment").span;
        first.merge(self.segments.last().unwrap().span)
    }

    pub fn head(&self) -> &Ident {
        &self.segments[0]
    }

    pub fn dotted(&self) -> String {
        self.segments
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LValue {
    pub path: Path,
    pub index: Option<Box<Expr>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Call {
    pub callee: Path,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Decl(Decl),
    Assign {
        target: LValue,
        value: Expr,
    },
    If {
        cond: BoolExpr,
        then_block: Block,
        else_block: Option<Block>,
    },
    While {
        cond: BoolExpr,
        body: Block,
    },
    Show(Expr),
    Input {
        target: LValue,
        prompt: String,
        prompt_span: Span,
    },
    Call(Call),
    Return(Option<Expr>),
    Block(Block),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Plus,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Concat,
}

impl BinOp {
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Concat => 1,
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "×",
            BinOp::Div => "÷",
            BinOp::Mod => "%",
            BinOp::Concat => "&",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(f64),
    Str(String),
    Var(Path),
    Index(Path, Box<Expr>),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Call),
}

impl Expr {
    pub fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(op, ..) => op.precedence(),
            ExprKind::Unary(..) => 4,
            _ => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Gt => ">",
            RelOp::Le => "<=",
            RelOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoolExpr {
    pub kind: BoolKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoolKind {
    Cmp(RelOp, Expr, Expr),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Paren(Box<BoolExpr>),
}

/// Resets every span in the tree, leaving only its structure.
pub fn erase_spans(program: &mut Program) {
    for item in &mut program.items {
        match item {
            Item::Function(f) => erase_function(f),
            Item::Global(d) => erase_decl(d),
            Item::Class(c) => {
                c.span = Span::default();
                c.name.span = Span::default();
                for m in &mut c.members {
                    m.span = Span::default();
                    match &mut m.decl {
                        MemberDecl::Field(d) => erase_decl(d),
                        MemberDecl::Method(f) => erase_function(f),
                    }
                }
            }
        }
    }
}

fn erase_function(f: &mut FunctionDecl) {
    f.span = Span::default();
    f.name.span = Span::default();
    for p in &mut f.params {
        p.name.span = Span::default();
    }
    erase_block(&mut f.body);
}

fn erase_block(b: &mut Block) {
    b.span = Span::default();
    for s in &mut b.stmts {
        erase_stmt(s);
    }
}

fn erase_decl(d: &mut Decl) {
    match d {
        Decl::Var(v) => {
            v.span = Span::default();
            v.name.span = Span::default();
            erase_expr(&mut v.init);
        }
        Decl::Array(a) => {
            a.span = Span::default();
            a.size_span = Span::default();
            a.name.span = Span::default();
            for e in a.init.iter_mut().flatten() {
                erase_expr(e);
            }
        }
        Decl::Object(o) => {
            o.span = Span::default();
            o.name.span = Span::default();
            o.class_name.span = Span::default();
        }
    }
}

fn erase_path(p: &mut Path) {
    for s in &mut p.segments {
        s.span = Span::default();
    }
}

fn erase_lvalue(l: &mut LValue) {
    l.span = Span::default();
    erase_path(&mut l.path);
    if let Some(i) = &mut l.index {
        erase_expr(i);
    }
}

fn erase_call(c: &mut Call) {
    c.span = Span::default();
    erase_path(&mut c.callee);
    for a in &mut c.args {
        erase_expr(a);
    }
}

fn erase_stmt(s: &mut Stmt) {
    s.span = Span::default();
    match &mut s.kind {
        StmtKind::Decl(d) => erase_decl(d),
        StmtKind::Assign { target, value } => {
            erase_lvalue(target);
            erase_expr(value);
        }
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            erase_bool(cond);
            erase_block(then_block);
            if let Some(b) = else_block {
                erase_block(b);
            }
        }
        StmtKind::While { cond, body } => {
            erase_bool(cond);
            erase_block(body);
        }
        StmtKind::Show(e) => erase_expr(e),
        StmtKind::Input {
            target,
            prompt_span,
            ..
        } => {
            erase_lvalue(target);
            *prompt_span = Span::default();
        }
        StmtKind::Call(c) => erase_call(c),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                erase_expr(e);
            }
        }
        StmtKind::Block(b) => erase_block(b),
    }
}

fn erase_expr(e: &mut Expr) {
    e.span = Span::default();
    match &mut e.kind {
        ExprKind::Num(_) | ExprKind::Str(_) => {}
        ExprKind::Var(p) => erase_path(p),
        ExprKind::Index(p, i) => {
            erase_path(p);
            erase_expr(i);
        }
        ExprKind::Unary(_, x) => erase_expr(x),
        ExprKind::Binary(_, l, r) => {
            erase_expr(l);
            erase_expr(r);
        }
        ExprKind::Call(c) => erase_call(c),
    }
}

fn erase_bool(b: &mut BoolExpr) {
    b.span = Span::default();
    match &mut b.kind {
        BoolKind::Cmp(_, l, r) => {
            erase_expr(l);
            erase_expr(r);
        }
        BoolKind::And(l, r) | BoolKind::Or(l, r) => {
            erase_bool(l);
            erase_bool(r);
        }
        BoolKind::Paren(x) => erase_bool(x),
    }
}
