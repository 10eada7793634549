//! Type checking. Produces the typed program while enforcing the typing rules:
//! arithmetic on numbers only, `&` converting numbers to text, ordering
//! comparisons on numbers only, and number-to-text as the only implicit
//! conversion on assignment.

use super::resolve::Resolutions;
use super::symbols::*;
use super::typed::*;
use crate::diagnostic::{Diagnostic, Phase};
use crate::parser::ast::*;
use crate::source::Span;

type TResult<T> = Result<T, Diagnostic>;

fn mismatch(message: String, span: Span) -> Diagnostic {
    Diagnostic::error(Phase::Semantic, "E-SEM-003", message, span)
}

fn bad_array(message: String, span: Span) -> Diagnostic {
    Diagnostic::error(Phase::Semantic, "E-SEM-014", message, span)
}

pub fn slot_type(sym: &Symbol) -> SlotType {
    match sym.data_type {
        SymbolType::Num => SlotType::Num,
        SymbolType::Str => SlotType::Str,
        SymbolType::NumList => SlotType::NumArray(sym.array_len.unwrap_or(0)),
        SymbolType::StrList => SlotType::StrArray(sym.array_len.unwrap_or(0)),
        SymbolType::Class(c) => SlotType::Object(c),
        SymbolType::Entry => unreachable!("entry is not a storage type"),
    }
}

fn slot_type_name(t: SlotType) -> &'static str {
    match t {
        SlotType::Num => "NUM",
        SlotType::Str => "STR",
        SlotType::NumArray(_) => "NUMLIST",
        SlotType::StrArray(_) => "STRLIST",
        SlotType::Object(_) => "object",
    }
}

fn value_type(t: TypeName) -> Option<ValueType> {
    match t {
        TypeName::Num => Some(ValueType::Num),
        TypeName::Str => Some(ValueType::Str),
        _ => None,
    }
}

/// Evaluates a declaration initializer: a literal with optional signs.
pub fn literal_value(e: &Expr) -> Literal {
    match &e.kind {
        ExprKind::Num(n) => Literal::Num(*n),
        ExprKind::Str(s) => Literal::Str(s.clone()),
        ExprKind::Unary(op, x) => match (op, literal_value(x)) {
            (UnaryOp::Neg, Literal::Num(n)) => Literal::Num(-n),
            (_, v) => v,
        },
        _ => unreachable!("parser only accepts literal initializers"),
    }
}

fn literal_expr(lit: Literal, span: Span) -> TExpr {
    let ty = match lit {
        Literal::Num(_) => ValueType::Num,
        Literal::Str(_) => ValueType::Str,
    };
    TExpr {
        kind: TExprKind::Literal(lit),
        ty,
        span,
    }
}

/// Converts `value` for storage into a `target`-typed slot.
fn coerce(value: TExpr, target: ValueType, what: &str) -> TResult<TExpr> {
    match (value.ty, target) {
        (a, b) if a == b => Ok(value),
        (ValueType::Num, ValueType::Str) => Ok(to_str(value)),
        (from, to) => Err(mismatch(
            format!(
                "cannot store {} in {what} of type {}",
                from.name(),
                to.name()
            ),
            value.span,
        )),
    }
}

fn to_str(e: TExpr) -> TExpr {
    match e.ty {
        ValueType::Str => e,
        ValueType::Num => TExpr {
            span: e.span,
            ty: ValueType::Str,
            kind: TExprKind::ToStr(Box::new(e)),
        },
    }
}

struct Checker<'a> {
    table: &'a ScopeStack,
    res: &'a Resolutions,
}

/// Per-function context.
struct FnCtx {
    return_type: Option<ValueType>,
}

impl<'a> Checker<'a> {
    fn head_place(&self, head: &Ident) -> (Place, SymbolId) {
        let (sym, _) = self.res.heads[&head.span.start];
        let s = self.table.symbol(sym);
        let slot = s.slot.expect("storage has a slot");
        let place = match self.table.scope(s.scope).kind {
            ScopeKind::Global => Place::global(slot),
            ScopeKind::Class(_) => Place::local(0).field(slot),
            ScopeKind::Function(_) | ScopeKind::Block => Place::local(slot),
        };
        (place, sym)
    }

    /// Storage place named by a data path and the type stored there.
    fn place(&self, path: &Path) -> (Place, SlotType) {
        let (mut place, mut sym) = self.head_place(path.head());
        if path.segments.len() > 1 {
            let chain = &self.res.chains[&path.head().span.start];
            for &member in &chain[1..] {
                place = place.field(self.table.symbol(member).slot.expect("field index"));
                sym = member;
            }
        }
        (place, slot_type(self.table.symbol(sym)))
    }

    fn scalar_place(&self, path: &Path, span: Span) -> TResult<(Place, ValueType)> {
        let (place, ty) = self.place(path);
        match ty.scalar() {
            Some(v) => Ok((place, v)),
            None => Err(mismatch(
                format!(
                    "`{}` has type {} and cannot be used as a single value",
                    path.dotted(),
                    slot_type_name(ty)
                ),
                span,
            )),
        }
    }

    fn array_place(&self, path: &Path, span: Span) -> TResult<(Place, ValueType)> {
        let (place, ty) = self.place(path);
        match ty.element() {
            Some(v) => Ok((place, v)),
            None => Err(mismatch(
                format!("`{}` is not a list and cannot be indexed", path.dotted()),
                span,
            )),
        }
    }

    fn index(&self, e: &Expr) -> TResult<TExpr> {
        let i = self.expr(e)?;
        if i.ty != ValueType::Num {
            return Err(mismatch("list index must be a number".into(), e.span));
        }
        Ok(i)
    }

    fn expr(&self, e: &Expr) -> TResult<TExpr> {
        let span = e.span;
        let (kind, ty) = match &e.kind {
            ExprKind::Num(n) => return Ok(literal_expr(Literal::Num(*n), span)),
            ExprKind::Str(s) => return Ok(literal_expr(Literal::Str(s.clone()), span)),
            ExprKind::Var(path) => {
                let (place, ty) = self.scalar_place(path, span)?;
                (TExprKind::Load(place), ty)
            }
            ExprKind::Index(path, i) => {
                let (place, ty) = self.array_place(path, span)?;
                (TExprKind::LoadIndex(place, Box::new(self.index(i)?)), ty)
            }
            ExprKind::Unary(op, x) => {
                let inner = self.expr(x)?;
                if inner.ty != ValueType::Num {
                    return Err(mismatch("sign applied to a non-number".into(), span));
                }
                match op {
                    UnaryOp::Plus => return Ok(TExpr { span, ..inner }),
                    UnaryOp::Neg => (TExprKind::Neg(Box::new(inner)), ValueType::Num),
                }
            }
            ExprKind::Binary(BinOp::Concat, l, r) => {
                let l = to_str(self.expr(l)?);
                let r = to_str(self.expr(r)?);
                (TExprKind::Concat(Box::new(l), Box::new(r)), ValueType::Str)
            }
            ExprKind::Binary(op, l, r) => {
                let l = self.expr(l)?;
                let r = self.expr(r)?;
                for side in [&l, &r] {
                    if side.ty != ValueType::Num {
                        return Err(mismatch(
                            format!(
                                "operator `{}` requires numbers, found {}",
                                op.symbol(),
                                side.ty.name()
                            ),
                            side.span,
                        ));
                    }
                }
                let op = match op {
                    BinOp::Add => ArithOp::Add,
                    BinOp::Sub => ArithOp::Sub,
                    BinOp::Mul => ArithOp::Mul,
                    BinOp::Div => ArithOp::Div,
                    BinOp::Mod => ArithOp::Mod,
                    BinOp::Concat => unreachable!(),
                };
                (
                    TExprKind::Arith(op, Box::new(l), Box::new(r)),
                    ValueType::Num,
                )
            }
            ExprKind::Call(c) => {
                let call = self.call(c)?;
                let sym = self.table.function_symbol(call.func);
                let ty = match sym.data_type {
                    SymbolType::Num => ValueType::Num,
                    SymbolType::Str => ValueType::Str,
                    _ => unreachable!("signature checked"),
                };
                (TExprKind::Call(call), ty)
            }
        };
        Ok(TExpr { kind, ty, span })
    }

    fn call(&self, c: &Call) -> TResult<TCall> {
        let func = self.res.calls[&c.span.start];
        let entry = &self.table.functions[func as usize];
        let sym = self.table.symbol(entry.symbol);
        let receiver = if c.callee.segments.len() > 1 {
            let chain = &self.res.chains[&c.callee.head().span.start];
            let (mut place, _) = self.head_place(c.callee.head());
            for &member in &chain[1..chain.len() - 1] {
                place = place.field(self.table.symbol(member).slot.expect("field index"));
            }
            Some(place)
        } else if entry.class.is_some() {
            Some(Place::local(0))
        } else {
            None
        };
        let mut args = Vec::with_capacity(c.args.len());
        for (i, (a, &pty)) in c.args.iter().zip(&sym.param_types).enumerate() {
            let arg = self.expr(a)?;
            let want = value_type(pty).expect("scalar parameter");
            if arg.ty != want {
                return Err(Diagnostic::error(
                    Phase::Semantic,
                    "E-SEM-006",
                    format!(
                        "argument {} of `{}` must be {}, found {}",
                        i + 1,
                        sym.name,
                        want.name(),
                        arg.ty.name()
                    ),
                    a.span,
                ));
            }
            args.push(arg);
        }
        Ok(TCall {
            func,
            receiver,
            args,
        })
    }

    fn cond(&self, b: &BoolExpr) -> TResult<TCond> {
        Ok(match &b.kind {
            BoolKind::Cmp(op, l, r) => {
                let l = self.expr(l)?;
                let r = self.expr(r)?;
                match op {
                    RelOp::Eq | RelOp::Ne => {
                        if l.ty != r.ty {
                            return Err(mismatch(
                                format!("cannot compare {} with {}", l.ty.name(), r.ty.name()),
                                b.span,
                            ));
                        }
                    }
                    _ => {
                        if let Some(s) = [&l, &r].into_iter().find(|s| s.ty == ValueType::Str) {
                            return Err(Diagnostic::error(
                                Phase::Semantic,
                                "E-SEM-010",
                                format!("operator `{}` cannot compare text; only == and != apply to STR", op.symbol()),
                                s.span,
                            ));
                        }
                    }
                }
                TCond::Cmp(*op, l, r)
            }
            BoolKind::And(l, r) => TCond::And(Box::new(self.cond(l)?), Box::new(self.cond(r)?)),
            BoolKind::Or(l, r) => TCond::Or(Box::new(self.cond(l)?), Box::new(self.cond(r)?)),
            BoolKind::Paren(x) => self.cond(x)?,
        })
    }

    fn decl_place(&self, scope: ScopeId, name: &Ident) -> Place {
        let sym = self.table.lookup_in(scope, &name.name).expect("declared");
        let slot = self.table.symbol(sym).slot.expect("slot");
        match self.table.scope(scope).kind {
            ScopeKind::Global => Place::global(slot),
            _ => Place::local(slot),
        }
    }

    /// Lowers a declaration into the statement that initializes its storage.
    fn decl(&self, d: &Decl, place: Place) -> TResult<TStmt> {
        match d {
            Decl::Var(v) => {
                let Some(target) = value_type(v.ty) else {
                    return Err(bad_array(
                        format!(
                            "list `{}` must be declared with a size, as `{}[n]`",
                            v.name.name, v.name.name
                        ),
                        v.name.span,
                    ));
                };
                let value = literal_expr(literal_value(&v.init), v.init.span);
                Ok(TStmt::Assign {
                    place,
                    value: coerce(value, target, "variable")?,
                })
            }
            Decl::Array(a) => {
                let (elem, len, init) = self.array_decl(a)?;
                Ok(TStmt::NewArray {
                    place,
                    elem,
                    len,
                    init,
                })
            }
            Decl::Object(o) => {
                let class = self
                    .table
                    .class_by_name(&o.class_name.name)
                    .expect("checked by build_symbols");
                Ok(TStmt::NewObject { place, class })
            }
        }
    }

    fn array_decl(&self, a: &ArrayDecl) -> TResult<(ValueType, u16, Vec<Literal>)> {
        let elem = match a.ty {
            TypeName::NumList => ValueType::Num,
            TypeName::StrList => ValueType::Str,
            t => {
                return Err(bad_array(
                    format!("`{}[..]` needs a list type, not {}", a.name.name, t.name()),
                    a.name.span,
                ))
            }
        };
        let Some(len) = array_len(a) else {
            return Err(bad_array(
                format!("list size must be a whole number from 0 to {}", u16::MAX),
                a.size_span,
            ));
        };
        let mut init = Vec::new();
        if let Some(values) = &a.init {
            if values.len() != len as usize {
                return Err(bad_array(
                    format!(
                        "list `{}` has size {len} but {} initial values",
                        a.name.name,
                        values.len()
                    ),
                    a.span,
                ));
            }
            for v in values {
                let lit = literal_value(v);
                let ok = matches!(
                    (&lit, elem),
                    (Literal::Num(_), ValueType::Num) | (Literal::Str(_), ValueType::Str)
                );
                if !ok {
                    return Err(mismatch(
                        format!("initial value does not match list type {}", a.ty.name()),
                        v.span,
                    ));
                }
                init.push(lit);
            }
        }
        Ok((elem, len, init))
    }

    fn block(&self, b: &Block, ctx: &FnCtx, out: &mut Vec<TStmt>) -> TResult<()> {
        let scope = self.table.block_scope(b);
        for s in &b.stmts {
            self.stmt(s, scope, ctx, out)?;
        }
        Ok(())
    }

    fn body(&self, b: &Block, ctx: &FnCtx) -> TResult<Vec<TStmt>> {
        let mut out = Vec::new();
        self.block(b, ctx, &mut out)?;
        Ok(out)
    }

    fn stmt(&self, s: &Stmt, scope: ScopeId, ctx: &FnCtx, out: &mut Vec<TStmt>) -> TResult<()> {
        let lowered = match &s.kind {
            StmtKind::Decl(d) => self.decl(d, self.decl_place(scope, d.name()))?,
            StmtKind::Assign { target, value } => match &target.index {
                None => {
                    let (place, ty) = self.scalar_place(&target.path, target.span)?;
                    let value = coerce(self.expr(value)?, ty, "variable")?;
                    TStmt::Assign { place, value }
                }
                Some(i) => {
                    let (place, ty) = self.array_place(&target.path, target.span)?;
                    let index = self.index(i)?;
                    let value = coerce(self.expr(value)?, ty, "list element")?;
                    TStmt::AssignIndex {
                        place,
                        index,
                        value,
                    }
                }
            },
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => TStmt::If {
                cond: self.cond(cond)?,
                then_body: self.body(then_block, ctx)?,
                else_body: match else_block {
                    Some(b) => self.body(b, ctx)?,
                    None => Vec::new(),
                },
            },
            StmtKind::While { cond, body } => TStmt::While {
                cond: self.cond(cond)?,
                body: self.body(body, ctx)?,
            },
            StmtKind::Show(e) => TStmt::Show(to_str(self.expr(e)?)),
            StmtKind::Input { target, prompt, .. } => {
                let (place, index, kind) = match &target.index {
                    None => {
                        let (place, ty) = self.scalar_place(&target.path, target.span)?;
                        (place, None, ty)
                    }
                    Some(i) => {
                        let (place, ty) = self.array_place(&target.path, target.span)?;
                        (place, Some(self.index(i)?), ty)
                    }
                };
                TStmt::Input {
                    place,
                    index,
                    prompt: prompt.clone(),
                    kind,
                }
            }
            StmtKind::Call(c) => TStmt::Call(self.call(c)?),
            StmtKind::Return(value) => {
                let ret_err =
                    |msg: String| Diagnostic::error(Phase::Semantic, "E-SEM-009", msg, s.span);
                match (ctx.return_type, value) {
                    (None, None) => TStmt::Return(None),
                    (None, Some(_)) => {
                        return Err(ret_err("the entry function cannot return a value".into()))
                    }
                    (Some(t), None) => {
                        return Err(ret_err(format!(
                            "missing return value of type {}",
                            t.name()
                        )))
                    }
                    (Some(t), Some(e)) => {
                        let v = self.expr(e)?;
                        if v.ty != t {
                            return Err(ret_err(format!(
                                "returns {} but the function returns {}",
                                v.ty.name(),
                                t.name()
                            )));
                        }
                        TStmt::Return(Some(v))
                    }
                }
            }
            StmtKind::Block(b) => {
                self.block(b, ctx, out)?;
                return Ok(());
            }
        };
        out.push(lowered);
        Ok(())
    }

    fn function(&self, f: &FunctionDecl, id: FuncId) -> TResult<TFunction> {
        let entry = &self.table.functions[id as usize];
        let return_type = match f.return_type {
            ReturnType::Entry => None,
            ReturnType::Value(t) => Some(value_type(t).expect("signature checked")),
        };
        let body = self.body(&f.body, &FnCtx { return_type })?;

        let mut locals: Vec<Option<SlotInfo>> = vec![None; entry.slot_count as usize];
        if let Some(c) = entry.class {
            locals[0] = Some(SlotInfo {
                name: "<object>".into(),
                ty: SlotType::Object(c),
                span: f.name.span,
            });
        }
        for sym in &self.table.symbols {
            let Some(slot) = sym.slot else { continue };
            if !sym.kind.is_storage()
                || matches!(
                    self.table.scope(sym.scope).kind,
                    ScopeKind::Global | ScopeKind::Class(_)
                )
            {
                continue;
            }
            if self.table.function_of_scope(sym.scope) == Some(id) {
                locals[slot as usize] = Some(SlotInfo {
                    name: sym.name.clone(),
                    ty: slot_type(sym),
                    span: sym.decl_span,
                });
            }
        }
        Ok(TFunction {
            name: f.name.name.clone(),
            class: entry.class,
            param_count: (f.params.len() + entry.class.is_some() as usize) as u8,
            return_type,
            locals: locals
                .into_iter()
                .map(|l| l.expect("every slot declared"))
                .collect(),
            body,
        })
    }

    fn class(&self, c: &ClassDecl, id: ClassId) -> TResult<ClassInfo> {
        let mut fields = Vec::new();
        for m in &c.members {
            let MemberDecl::Field(d) = &m.decl else {
                continue;
            };
            let sym = self
                .table
                .symbol(self.table.classes[id as usize].fields[fields.len()]);
            let init = match d {
                Decl::Var(_) => match self.decl(d, Place::local(0))? {
                    TStmt::Assign { value, .. } => FieldInit::Scalar(value),
                    _ => unreachable!(),
                },
                Decl::Array(a) => {
                    let (_, _, init) = self.array_decl(a)?;
                    if a.init.is_some() {
                        FieldInit::Array(init)
                    } else {
                        FieldInit::None
                    }
                }
                Decl::Object(_) => FieldInit::None,
            };
            fields.push(FieldInfo {
                name: sym.name.clone(),
                ty: slot_type(sym),
                init,
            });
        }
        Ok(ClassInfo {
            name: c.name.name.clone(),
            fields,
        })
    }
}

/// Checks types and lowers the program. Stops at the first type error.
pub fn type_check(
    program: &Program,
    table: &ScopeStack,
    res: &Resolutions,
) -> Result<TypedProgram, Diagnostic> {
    let checker = Checker { table, res };
    let mut classes = Vec::new();
    let mut functions: Vec<Option<TFunction>> = vec![None; table.functions.len()];
    let mut global_init = Vec::new();
    let mut next_func = 0u16;
    for item in &program.items {
        match item {
            Item::Global(d) => {
                global_init.push(checker.decl(d, checker.decl_place(GLOBAL_SCOPE, d.name()))?)
            }
            Item::Function(f) => {
                functions[next_func as usize] = Some(checker.function(f, next_func)?);
                next_func += 1;
            }
            Item::Class(c) => {
                let id = classes.len() as ClassId;
                classes.push(checker.class(c, id)?);
                for m in &c.members {
                    if let MemberDecl::Method(f) = &m.decl {
                        functions[next_func as usize] = Some(checker.function(f, next_func)?);
                        next_func += 1;
                    }
                }
            }
        }
    }
    let globals = table
        .globals
        .iter()
        .map(|&g| {
            let s = table.symbol(g);
            SlotInfo {
                name: s.name.clone(),
                ty: slot_type(s),
                span: s.decl_span,
            }
        })
        .collect();
    Ok(TypedProgram {
        globals,
        global_init,
        classes,
        functions: functions
            .into_iter()
            .map(|f| f.expect("every function lowered"))
            .collect(),
        entry: table.entry.expect("entry checked"),
    })
}
