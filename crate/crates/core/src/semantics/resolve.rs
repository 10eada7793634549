//! Name resolution (declaration before use) and call/member checks.

use std::collections::HashMap;

use super::symbols::*;
use crate::diagnostic::{Diagnostic, Phase};
use crate::parser::ast::*;

/// Resolution results, keyed by the codepoint offset of the first identifier of a path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Resolutions {
    /// Storage symbol of each path head, with the scope of the use site.
    pub heads: HashMap<usize, (SymbolId, ScopeId)>,
    /// Symbol of every segment of member paths and call paths.
    pub chains: HashMap<usize, Vec<SymbolId>>,
    /// Callee of each call, keyed by the call's offset.
    pub calls: HashMap<usize, FuncId>,
}

pub(crate) enum Use<'a> {
    /// Path read or written as data.
    Data(&'a Path),
    Call(&'a Call),
}

/// Visits every name use in every function body with its enclosing scope.
pub(crate) fn walk_uses(program: &Program, table: &ScopeStack, mut f: impl FnMut(ScopeId, Use)) {
    for item in &program.items {
        match item {
            Item::Function(func) => block(&func.body, table, &mut f),
            Item::Class(c) => {
                for m in &c.members {
                    if let MemberDecl::Method(func) = &m.decl {
                        block(&func.body, table, &mut f);
                    }
                }
            }
            Item::Global(_) => {}
        }
    }
}

fn block(b: &Block, table: &ScopeStack, f: &mut impl FnMut(ScopeId, Use)) {
    let scope = table.block_scope(b);
    for s in &b.stmts {
        stmt(s, scope, table, f);
    }
}

fn stmt(s: &Stmt, scope: ScopeId, table: &ScopeStack, f: &mut impl FnMut(ScopeId, Use)) {
    match &s.kind {
        StmtKind::Decl(_) => {}
        StmtKind::Assign { target, value } => {
            lvalue(target, scope, f);
            expr(value, scope, f);
        }
        StmtKind::If {
            cond: c,
            then_block,
            else_block,
        } => {
            cond(c, scope, f);
            block(then_block, table, f);
            if let Some(b) = else_block {
                block(b, table, f);
            }
        }
        StmtKind::While { cond: c, body } => {
            cond(c, scope, f);
            block(body, table, f);
        }
        StmtKind::Show(e) => expr(e, scope, f),
        StmtKind::Input { target, .. } => lvalue(target, scope, f),
        StmtKind::Call(c) => call(c, scope, f),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                expr(e, scope, f);
            }
        }
        StmtKind::Block(b) => block(b, table, f),
    }
}

fn lvalue(l: &LValue, scope: ScopeId, f: &mut impl FnMut(ScopeId, Use)) {
    f(scope, Use::Data(&l.path));
    if let Some(i) = &l.index {
        expr(i, scope, f);
    }
}

fn call(c: &Call, scope: ScopeId, f: &mut impl FnMut(ScopeId, Use)) {
    f(scope, Use::Call(c));
    for a in &c.args {
        expr(a, scope, f);
    }
}

fn expr(e: &Expr, scope: ScopeId, f: &mut impl FnMut(ScopeId, Use)) {
    match &e.kind {
        ExprKind::Num(_) | ExprKind::Str(_) => {}
        ExprKind::Var(p) => f(scope, Use::Data(p)),
        ExprKind::Index(p, i) => {
            f(scope, Use::Data(p));
            expr(i, scope, f);
        }
        ExprKind::Unary(_, x) => expr(x, scope, f),
        ExprKind::Binary(_, l, r) => {
            expr(l, scope, f);
            expr(r, scope, f);
        }
        ExprKind::Call(c) => call(c, scope, f),
    }
}

fn cond(c: &BoolExpr, scope: ScopeId, f: &mut impl FnMut(ScopeId, Use)) {
    match &c.kind {
        BoolKind::Cmp(_, l, r) => {
            expr(l, scope, f);
            expr(r, scope, f);
        }
        BoolKind::And(l, r) | BoolKind::Or(l, r) => {
            cond(l, scope, f);
            cond(r, scope, f);
        }
        BoolKind::Paren(x) => cond(x, scope, f),
    }
}

/// Every variable use must refer to a declaration that textually precedes it.
/// Functions and classes may be referenced before their declaration.
pub fn check_use_before_decl(
    program: &Program,
    table: &mut ScopeStack,
) -> Result<Resolutions, Vec<Diagnostic>> {
    let mut res = Resolutions::default();
    let mut errors = Vec::new();
    let mut used = Vec::new();
    walk_uses(program, table, |scope, u| {
        let head = match u {
            Use::Data(p) => p.head(),
            Use::Call(c) if c.callee.segments.len() > 1 => c.callee.head(),
            Use::Call(_) => return,
        };
        match table.resolve_storage(scope, &head.name, head.span.start) {
            Some(sym) => {
                res.heads.insert(head.span.start, (sym, scope));
                used.push(sym);
            }
            None => errors.push(Diagnostic::error(
                Phase::Semantic,
                "E-SEM-001",
                format!("`{}` is used before it is declared", head.name),
                head.span,
            )),
        }
    });
    for sym in used {
        table.symbols[sym].used = true;
    }
    if errors.is_empty() {
        Ok(res)
    } else {
        Err(errors)
    }
}

fn sem_error(code: &'static str, message: String, span: crate::source::Span) -> Diagnostic {
    Diagnostic::error(Phase::Semantic, code, message, span)
}

/// Walks `segments[1..]` as members, starting from the object symbol `head`.
fn resolve_members(
    table: &ScopeStack,
    head: SymbolId,
    segments: &[Ident],
    from_class: Option<ClassId>,
) -> Result<Vec<SymbolId>, Diagnostic> {
    let mut chain = vec![head];
    let mut current = head;
    for seg in &segments[1..] {
        let sym = table.symbol(current);
        let class = match (sym.kind, sym.data_type) {
            (SymbolKind::Object, SymbolType::Class(c)) => c,
            _ => {
                return Err(sem_error(
                    "E-SEM-003",
                    format!(
                        "`{}` is not an object and has no member `{}`",
                        sym.name, seg.name
                    ),
                    seg.span,
                ))
            }
        };
        let entry = &table.classes[class as usize];
        let Some(member) = table.lookup_in(entry.scope, &seg.name) else {
            return Err(sem_error(
                "E-SEM-013",
                format!("class `{}` has no member `{}`", entry.name, seg.name),
                seg.span,
            ));
        };
        if table.symbol(member).access == Some(Access::Private) && from_class != Some(class) {
            return Err(sem_error(
                "E-SEM-008",
                format!("member `{}` of class `{}` is private", seg.name, entry.name),
                seg.span,
            ));
        }
        chain.push(member);
        current = member;
    }
    Ok(chain)
}

/// Resolves callees and member paths; checks arity and member access.
pub fn check_calls(
    program: &Program,
    table: &ScopeStack,
    res: &mut Resolutions,
) -> Vec<Diagnostic> {
    let mut errors = Vec::new();
    walk_uses(program, table, |scope, u| {
        let from_class = table.class_of_scope(scope);
        match u {
            Use::Data(path) => {
                if path.segments.len() < 2 {
                    return;
                }
                let Some(&(head, _)) = res.heads.get(&path.head().span.start) else {
                    return;
                };
                match resolve_members(table, head, &path.segments, from_class) {
                    Ok(chain) => {
                        let last = *chain.last().unwrap();
                        if table.symbol(last).kind == SymbolKind::Function {
                            let seg = path.segments.last().unwrap();
                            errors.push(sem_error(
                                "E-SEM-003",
                                format!(
                                    "method `{}` used as a value; call it with `إستدعاء`",
                                    seg.name
                                ),
                                seg.span,
                            ));
                        } else {
                            res.chains.insert(path.head().span.start, chain);
                        }
                    }
                    Err(d) => errors.push(d),
                }
            }
            Use::Call(c) => {
                let callee = &c.callee;
                let last = callee.segments.last().unwrap();
                let func_sym = if callee.segments.len() == 1 {
                    match table.resolve_function(scope, &last.name) {
                        Some(s) => s,
                        None => {
                            errors.push(sem_error(
                                "E-SEM-007",
                                format!("unknown function `{}`", last.name),
                                last.span,
                            ));
                            return;
                        }
                    }
                } else {
                    let Some(&(head, _)) = res.heads.get(&callee.head().span.start) else {
                        return;
                    };
                    match resolve_members(table, head, &callee.segments, from_class) {
                        Ok(chain) => {
                            let s = *chain.last().unwrap();
                            if table.symbol(s).kind != SymbolKind::Function {
                                errors.push(sem_error(
                                    "E-SEM-007",
                                    format!("`{}` is not a function", callee.dotted()),
                                    last.span,
                                ));
                                return;
                            }
                            res.chains.insert(callee.head().span.start, chain);
                            s
                        }
                        Err(d) => {
                            errors.push(d);
                            return;
                        }
                    }
                };
                let sym = table.symbol(func_sym);
                if sym.data_type == SymbolType::Entry {
                    errors.push(sem_error(
                        "E-SEM-012",
                        format!("the entry function `{}` cannot be called", sym.name),
                        last.span,
                    ));
                    return;
                }
                if sym.param_types.len() != c.args.len() {
                    errors.push(sem_error(
                        "E-SEM-002",
                        format!(
                            "`{}` takes {} argument(s) but {} were given",
                            sym.name,
                            sym.param_types.len(),
                            c.args.len()
                        ),
                        c.span,
                    ));
                    return;
                }
                res.calls.insert(c.span.start, sym.id.expect("function id"));
            }
        }
    });
    errors
}
