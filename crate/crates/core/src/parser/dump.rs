use std::fmt::Write;

use super::ast::*;

/// Indented tree, one node per line as `NodeKind key=value ...`.
pub fn dump_ast(program: &Program) -> String {
    let mut d = Dumper {
        out: String::new(),
        depth: 0,
    };
    d.node(&format!("Program items={}", program.items.len()), |d| {
        for item in &program.items {
            match item {
                Item::Function(f) => d.function(f),
                Item::Global(decl) => d.node("Global", |d| d.decl(decl)),
                Item::Class(c) => d.class(c),
            }
        }
    });
    d.out
}

struct Dumper {
    out: String,
    depth: usize,
}

impl Dumper {
    fn node(&mut self, header: &str, children: impl FnOnce(&mut Self)) {
        let _ = writeln!(self.out, "{}{}", "  ".repeat(self.depth), header);
        self.depth += 1;
        children(self);
        self.depth -= 1;
    }

    fn leaf(&mut self, header: &str) {
        self.node(header, |_| {});
    }

    fn function(&mut self, f: &FunctionDecl) {
        let params: Vec<String> = f
            .params
            .iter()
            .map(|p| format!("{}:{}", p.name.name, p.ty.name()))
            .collect();
        let header = format!(
            "FunctionDecl name={} params=[{}] return={} at={}",
            f.name.name,
            params.join(","),
            f.return_type.name(),
            f.span
        );
        self.node(&header, |d| d.block(&f.body));
    }

    fn class(&mut self, c: &ClassDecl) {
        self.node(
            &format!("ClassDecl name={} at={}", c.name.name, c.span),
            |d| {
                for m in &c.members {
                    let access = match m.access {
                        Access::Public => "PUBLIC",
                        Access::Private => "PRIVATE",
                    };
                    d.node(&format!("Member access={access}"), |d| match &m.decl {
                        MemberDecl::Field(decl) => d.decl(decl),
                        MemberDecl::Method(f) => d.function(f),
                    });
                }
            },
        );
    }

    fn block(&mut self, b: &Block) {
        self.node(&format!("Block stmts={}", b.stmts.len()), |d| {
            for s in &b.stmts {
                d.stmt(s);
            }
        });
    }

    fn decl(&mut self, decl: &Decl) {
        match decl {
            Decl::Var(v) => self.node(
                &format!(
                    "VarDecl type={} name={} at={}",
                    v.ty.name(),
                    v.name.name,
                    v.span
                ),
                |d| d.expr(&v.init),
            ),
            Decl::Array(a) => {
                let header = format!(
                    "ArrayDecl type={} name={} size={} init={} at={}",
                    a.ty.name(),
                    a.name.name,
                    a.size,
                    a.init.as_ref().map_or(0, |v| v.len()),
                    a.span
                );
                self.node(&header, |d| {
                    for e in a.init.iter().flatten() {
                        d.expr(e);
                    }
                });
            }
            Decl::Object(o) => self.leaf(&format!(
                "ObjectDecl class={} name={} at={}",
                o.class_name.name, o.name.name, o.span
            )),
        }
    }

    fn lvalue(&mut self, l: &LValue) {
        self.node(&format!("LValue path={}", l.path.dotted()), |d| {
            if let Some(i) = &l.index {
                d.expr(i);
            }
        });
    }

    fn stmt(&mut self, s: &Stmt) {
        let at = s.span;
        match &s.kind {
            StmtKind::Decl(decl) => self.decl(decl),
            StmtKind::Assign { target, value } => self.node(&format!("Assign at={at}"), |d| {
                d.lvalue(target);
                d.expr(value);
            }),
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => self.node(&format!("If else={} at={at}", else_block.is_some()), |d| {
                d.cond(cond);
                d.block(then_block);
                if let Some(b) = else_block {
                    d.block(b);
                }
            }),
            StmtKind::While { cond, body } => self.node(&format!("While at={at}"), |d| {
                d.cond(cond);
                d.block(body);
            }),
            StmtKind::Show(e) => self.node(&format!("Show at={at}"), |d| d.expr(e)),
            StmtKind::Input { target, prompt, .. } => self
                .node(&format!("Input prompt={prompt:?} at={at}"), |d| {
                    d.lvalue(target)
                }),
            StmtKind::Call(c) => self.call("CallStmt", c),
            StmtKind::Return(e) => self.node(&format!("Return at={at}"), |d| {
                if let Some(e) = e {
                    d.expr(e);
                }
            }),
            StmtKind::Block(b) => self.block(b),
        }
    }

    fn call(&mut self, kind: &str, c: &Call) {
        self.node(
            &format!("{kind} callee={} args={}", c.callee.dotted(), c.args.len()),
            |d| {
                for a in &c.args {
                    d.expr(a);
                }
            },
        );
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Num(n) => self.leaf(&format!("NumLit value={n}")),
            ExprKind::Str(s) => self.leaf(&format!("StrLit value={s:?}")),
            ExprKind::Var(p) => self.leaf(&format!("VarRef name={}", p.dotted())),
            ExprKind::Index(p, i) => {
                self.node(&format!("IndexRef name={}", p.dotted()), |d| d.expr(i))
            }
            ExprKind::Unary(op, x) => {
                let op = match op {
                    UnaryOp::Plus => "+",
                    UnaryOp::Neg => "-",
                };
                self.node(&format!("Unary op={op}"), |d| d.expr(x))
            }
            ExprKind::Binary(op, l, r) => self.node(&format!("Binary op={}", op.symbol()), |d| {
                d.expr(l);
                d.expr(r);
            }),
            ExprKind::Call(c) => self.call("CallExpr", c),
        }
    }

    fn cond(&mut self, b: &BoolExpr) {
        match &b.kind {
            BoolKind::Cmp(op, l, r) => self.node(&format!("Cmp op={}", op.symbol()), |d| {
                d.expr(l);
                d.expr(r);
            }),
            BoolKind::And(l, r) => self.node("And", |d| {
                d.cond(l);
                d.cond(r);
            }),
            BoolKind::Or(l, r) => self.node("Or", |d| {
                d.cond(l);
                d.cond(r);
            }),
            BoolKind::Paren(x) => self.node("Paren", |d| d.cond(x)),
        }
    }
}
