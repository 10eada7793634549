//! Canonical source rendering. Reparsing the output yields the same tree.

use super::ast::*;

const INDENT: &str = "    ";

pub fn pretty_print(program: &Program) -> String {
    let mut p = Printer::default();
    for (i, item) in program.items.iter().enumerate() {
        if i > 0
            && !matches!(
                (item, &program.items[i - 1]),
                (Item::Global(_), Item::Global(_))
            )
        {
            p.out.push('\n');
        }
        match item {
            Item::Function(f) => p.function(f, ""),
            Item::Global(d) => p.line(&decl(d)),
            Item::Class(c) => p.class(c),
        }
    }
    p.out
}

#[derive(Default)]
struct Printer {
    out: String,
    depth: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth {
            self.out.push_str(INDENT);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn function(&mut self, f: &FunctionDecl, prefix: &str) {
        let params = if f.params.is_empty() {
            "-".to_string()
        } else {
            f.params
                .iter()
                .map(|p| format!("{} {}", type_keyword(p.ty), p.name.name))
                .collect::<Vec<_>>()
                .join("، ")
        };
        let ret = match f.return_type {
            ReturnType::Entry => "البداية",
            ReturnType::Value(t) => type_keyword(t),
        };
        self.line(&format!("{prefix}وظيفة {} ({params}) : {ret}", f.name.name));
        self.block(&f.body);
        self.line("نهاية الوظيفة");
    }

    fn class(&mut self, c: &ClassDecl) {
        self.line(&format!("صنف {}", c.name.name));
        self.line("{");
        self.depth += 1;
        for m in &c.members {
            let access = match m.access {
                Access::Public => "عام",
                Access::Private => "خاص",
            };
            match &m.decl {
                MemberDecl::Field(d) => self.line(&format!("{access} {}", decl(d))),
                MemberDecl::Method(f) => self.function(f, &format!("{access} ")),
            }
        }
        self.depth -= 1;
        self.line("}");
    }

    fn block(&mut self, b: &Block) {
        self.line("{");
        self.depth += 1;
        for s in &b.stmts {
            self.stmt(s);
        }
        self.depth -= 1;
        self.line("}");
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Decl(d) => self.line(&decl(d)),
            StmtKind::Assign { target, value } => {
                self.line(&format!("{} = {} ;", lvalue(target), print_expr(value)))
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.line(&format!("إذا : {}", print_bool(cond)));
                self.block(then_block);
                if let Some(b) = else_block {
                    self.line("أما عدا ذلك");
                    self.block(b);
                }
            }
            StmtKind::While { cond, body } => {
                self.line(&format!("كرر : {}", print_bool(cond)));
                self.block(body);
            }
            StmtKind::Show(e) => self.line(&format!("أعرض : {} ;", print_expr(e))),
            StmtKind::Input { target, prompt, .. } => {
                self.line(&format!("أدخل : {} ، \"{prompt}\" ;", lvalue(target)))
            }
            StmtKind::Call(c) => self.line(&format!("إستدعاء : {} ;", call(c))),
            StmtKind::Return(None) => self.line("عودة ;"),
            StmtKind::Return(Some(e)) => self.line(&format!("عودة : {} ;", print_expr(e))),
            StmtKind::Block(b) => self.block(b),
        }
    }
}

fn type_keyword(t: TypeName) -> &'static str {
    match t {
        TypeName::Num => "رقم",
        TypeName::Str => "كلمة",
        TypeName::NumList => "قائمة-رقم",
        TypeName::StrList => "قائمة-كلمة",
    }
}

fn decl(d: &Decl) -> String {
    match d {
        Decl::Var(v) => format!(
            "{} {} = {} ;",
            type_keyword(v.ty),
            v.name.name,
            print_expr(&v.init)
        ),
        Decl::Array(a) => {
            let mut s = format!("{} {}[{}]", type_keyword(a.ty), a.name.name, number(a.size));
            if let Some(values) = &a.init {
                let items: Vec<String> = values.iter().map(print_expr).collect();
                s.push_str(&format!(" = {{ {} }}", items.join(" ، ")));
            }
            s.push_str(" ;");
            s
        }
        Decl::Object(o) => format!("{} {} ;", o.class_name.name, o.name.name),
    }
}

fn lvalue(l: &LValue) -> String {
    match &l.index {
        Some(i) => format!("{}[{}]", l.path.dotted(), print_expr(i)),
        None => l.path.dotted(),
    }
}

fn call(c: &Call) -> String {
    let args = if c.args.is_empty() {
        "-".to_string()
    } else {
        c.args.iter().map(print_expr).collect::<Vec<_>>().join("، ")
    };
    format!("{}({args})", c.callee.dotted())
}

/// Decimal rendering without exponent; round-trips through the lexer.
fn number(n: f64) -> String {
    format!("{n}")
}

/// Renders an expression with the minimum parentheses its structure needs.
pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(n) => number(*n),
        ExprKind::Str(s) => format!("\"{s}\""),
        ExprKind::Var(p) => p.dotted(),
        ExprKind::Index(p, i) => format!("{}[{}]", p.dotted(), print_expr(i)),
        ExprKind::Call(c) => format!("إستدعاء {}", call(c)),
        ExprKind::Unary(op, x) => {
            let sign = match op {
                UnaryOp::Plus => "+",
                UnaryOp::Neg => "-",
            };
            if x.precedence() < 4 {
                format!("{sign}({})", print_expr(x))
            } else {
                format!("{sign}{}", print_expr(x))
            }
        }
        ExprKind::Binary(op, l, r) => {
            let prec = op.precedence();
            let left = if l.precedence() < prec {
                format!("({})", print_expr(l))
            } else {
                print_expr(l)
            };
            let right = if r.precedence() <= prec {
                format!("({})", print_expr(r))
            } else {
                print_expr(r)
            };
            format!("{left} {} {right}", op.symbol())
        }
    }
}

pub fn print_bool(b: &BoolExpr) -> String {
    match &b.kind {
        BoolKind::Cmp(op, l, r) => format!("{} {} {}", print_expr(l), op.symbol(), print_expr(r)),
        BoolKind::And(l, r) => format!("{} && {}", print_bool(l), print_bool(r)),
        BoolKind::Or(l, r) => format!("{} || {}", print_bool(l), print_bool(r)),
        BoolKind::Paren(x) => format!("({})", print_bool(x)),
    }
}
