//! Fully resolved and typed program, the input to code generation and to the
//! reference evaluator. Every name is a storage place; every expression has a type.

use crate::parser::ast::RelOp;
use crate::source::Span;

pub use super::symbols::{ClassId, FuncId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueType {
    Num,
    Str,
}

impl ValueType {
    pub fn name(self) -> &'static str {
        match self {
            ValueType::Num => "NUM",
            ValueType::Str => "STR",
        }
    }
}

/// Type of a storage slot or object field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotType {
    Num,
    Str,
    NumArray(u16),
    StrArray(u16),
    Object(ClassId),
}

impl SlotType {
    pub fn scalar(self) -> Option<ValueType> {
        match self {
            SlotType::Num => Some(ValueType::Num),
            SlotType::Str => Some(ValueType::Str),
            _ => None,
        }
    }

    pub fn element(self) -> Option<ValueType> {
        match self {
            SlotType::NumArray(_) => Some(ValueType::Num),
            SlotType::StrArray(_) => Some(ValueType::Str),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Num(f64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Root {
    Local(u16),
    Global(u16),
}

/// A storage location: a local or global slot followed by a chain of field indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place {
    pub root: Root,
    pub fields: Vec<u16>,
}

impl Place {
    pub fn local(slot: u16) -> Self {
        Place {
            root: Root::Local(slot),
            fields: Vec::new(),
        }
    }

    pub fn global(slot: u16) -> Self {
        Place {
            root: Root::Global(slot),
            fields: Vec::new(),
        }
    }

    pub fn field(&self, index: u16) -> Self {
        let mut p = self.clone();
        p.fields.push(index);
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TExpr {
    pub kind: TExprKind,
    pub ty: ValueType,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TExprKind {
    Literal(Literal),
    Load(Place),
    LoadIndex(Place, Box<TExpr>),
    Neg(Box<TExpr>),
    Arith(ArithOp, Box<TExpr>, Box<TExpr>),
    Concat(Box<TExpr>, Box<TExpr>),
    /// Implicit NUM → STR conversion.
    ToStr(Box<TExpr>),
    Call(TCall),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TCall {
    pub func: FuncId,
    /// Object the method is invoked on; `None` for free functions.
    pub receiver: Option<Place>,
    pub args: Vec<TExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TCond {
    Cmp(RelOp, TExpr, TExpr),
    And(Box<TCond>, Box<TCond>),
    Or(Box<TCond>, Box<TCond>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TStmt {
    Assign {
        place: Place,
        value: TExpr,
    },
    AssignIndex {
        place: Place,
        index: TExpr,
        value: TExpr,
    },
    NewArray {
        place: Place,
        elem: ValueType,
        len: u16,
        init: Vec<Literal>,
    },
    NewObject {
        place: Place,
        class: ClassId,
    },
    If {
        cond: TCond,
        then_body: Vec<TStmt>,
        else_body: Vec<TStmt>,
    },
    While {
        cond: TCond,
        body: Vec<TStmt>,
    },
    /// Operand is always STR-typed.
    Show(TExpr),
    Input {
        place: Place,
        index: Option<TExpr>,
        prompt: String,
        kind: ValueType,
    },
    /// Call whose result is discarded.
    Call(TCall),
    Return(Option<TExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotInfo {
    pub name: String,
    pub ty: SlotType,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldInit {
    None,
    Scalar(TExpr),
    Array(Vec<Literal>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldInfo {
    pub name: String,
    pub ty: SlotType,
    pub init: FieldInit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassInfo {
    pub name: String,
    pub fields: Vec<FieldInfo>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TFunction {
    pub name: String,
    pub class: Option<ClassId>,
    /// Parameter count including the hidden receiver slot of methods.
    pub param_count: u8,
    /// `None` for the entry function.
    pub return_type: Option<ValueType>,
    /// One entry per slot, receiver and parameters first.
    pub locals: Vec<SlotInfo>,
    pub body: Vec<TStmt>,
}

impl TFunction {
    pub fn is_entry(&self) -> bool {
        self.return_type.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedProgram {
    pub globals: Vec<SlotInfo>,
    /// Global initialization, run before the entry body.
    pub global_init: Vec<TStmt>,
    pub classes: Vec<ClassInfo>,
    pub functions: Vec<TFunction>,
    pub entry: FuncId,
}

impl TypedProgram {
    pub fn entry_function(&self) -> &TFunction {
        &self.functions[self.entry as usize]
    }
}

/// Calls `f` on `e` and every subexpression, outermost first.
pub fn visit_expr(e: &TExpr, f: &mut impl FnMut(&TExpr)) {
    f(e);
    match &e.kind {
        TExprKind::Literal(_) | TExprKind::Load(_) => {}
        TExprKind::LoadIndex(_, i) | TExprKind::Neg(i) | TExprKind::ToStr(i) => visit_expr(i, f),
        TExprKind::Arith(_, l, r) | TExprKind::Concat(l, r) => {
            visit_expr(l, f);
            visit_expr(r, f);
        }
        TExprKind::Call(c) => c.args.iter().for_each(|a| visit_expr(a, f)),
    }
}

/// Calls `f` on every expression reachable from `stmts`, outermost first.
pub fn visit_exprs(stmts: &[TStmt], f: &mut impl FnMut(&TExpr)) {
    use visit_expr as expr;
    fn cond(c: &TCond, f: &mut impl FnMut(&TExpr)) {
        match c {
            TCond::Cmp(_, l, r) => {
                expr(l, f);
                expr(r, f);
            }
            TCond::And(l, r) | TCond::Or(l, r) => {
                cond(l, f);
                cond(r, f);
            }
        }
    }
    for s in stmts {
        match s {
            TStmt::Assign { value, .. } => expr(value, f),
            TStmt::AssignIndex { index, value, .. } => {
                expr(index, f);
                expr(value, f);
            }
            TStmt::NewArray { .. } | TStmt::NewObject { .. } => {}
            TStmt::If {
                cond: c,
                then_body,
                else_body,
            } => {
                cond(c, f);
                visit_exprs(then_body, f);
                visit_exprs(else_body, f);
            }
            TStmt::While { cond: c, body } => {
                cond(c, f);
                visit_exprs(body, f);
            }
            TStmt::Show(e) => expr(e, f),
            TStmt::Input { index, .. } => {
                if let Some(i) = index {
                    expr(i, f);
                }
            }
            TStmt::Call(c) => c.args.iter().for_each(|a| expr(a, f)),
            TStmt::Return(e) => {
                if let Some(e) = e {
                    expr(e, f);
                }
            }
        }
    }
}
