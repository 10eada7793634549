//! Reference evaluator: interprets the typed program directly, with the same
//! observable behavior as compiling it and running the image. Used to check
//! the code generator and the machine against each other.

use std::cell::RefCell;
use std::rc::Rc;

use super::dialog::Dialog;
use super::machine::{compare_values, RunOptions};
use super::value::*;
use crate::semantics::typed::*;

enum Flow {
    Next,
    Return(Value),
    Halt,
}

struct Evaluator<'a, 'd> {
    program: &'a TypedProgram,
    globals: Vec<Value>,
    dialog: &'d mut dyn Dialog,
    depth: usize,
    steps: u64,
    options: RunOptions,
}

type Locals = Vec<Value>;

impl<'a, 'd> Evaluator<'a, 'd> {
    fn fields_of(&self) -> impl Fn(u16) -> Vec<SlotType> + 'a {
        let program = self.program;
        move |c: u16| {
            program.classes[c as usize]
                .fields
                .iter()
                .map(|f| f.ty)
                .collect()
        }
    }

    fn tick(&mut self) -> Result<(), RuntimeError> {
        self.steps += 1;
        if self.steps > self.options.max_steps {
            return Err(RuntimeError::new(
                STEP_LIMIT,
                format!("program exceeded {} steps", self.options.max_steps),
            ));
        }
        Ok(())
    }

    fn root(&self, root: Root, locals: &Locals) -> Value {
        match root {
            Root::Local(s) => locals[s as usize].clone(),
            Root::Global(s) => self.globals[s as usize].clone(),
        }
    }

    fn follow(mut v: Value, fields: &[u16]) -> Value {
        for &f in fields {
            v = match v {
                Value::Obj(o) => o.borrow().fields[f as usize].clone(),
                _ => unreachable!("typed place"),
            };
        }
        v
    }

    fn load(&self, p: &Place, locals: &Locals) -> Value {
        Self::follow(self.root(p.root, locals), &p.fields)
    }

    /// The object holding the last field of `p`, when `p` names a field.
    fn container(&self, p: &Place, locals: &Locals) -> Option<Value> {
        let (_, path) = p.fields.split_last()?;
        Some(Self::follow(self.root(p.root, locals), path))
    }

    fn store(&mut self, p: &Place, container: Option<Value>, locals: &mut Locals, v: Value) {
        match (container, p.fields.last()) {
            (Some(Value::Obj(o)), Some(&f)) => o.borrow_mut().fields[f as usize] = v,
            (None, None) => match p.root {
                Root::Local(s) => locals[s as usize] = v,
                Root::Global(s) => self.globals[s as usize] = v,
            },
            _ => unreachable!("typed place"),
        }
    }

    fn assign(&mut self, p: &Place, locals: &mut Locals, v: Value) {
        let c = self.container(p, locals);
        self.store(p, c, locals, v);
    }

    fn num(&mut self, e: &TExpr, locals: &mut Locals) -> Result<f64, RuntimeError> {
        match self.expr(e, locals)? {
            Value::Num(n) => Ok(n),
            _ => unreachable!("typed as a number"),
        }
    }

    fn expr(&mut self, e: &TExpr, locals: &mut Locals) -> Result<Value, RuntimeError> {
        self.tick()?;
        Ok(match &e.kind {
            TExprKind::Literal(Literal::Num(n)) => Value::Num(*n),
            TExprKind::Literal(Literal::Str(s)) => Value::str(s),
            TExprKind::Load(p) => self.load(p, locals),
            TExprKind::LoadIndex(p, i) => {
                let list = self.load(p, locals);
                let i = self.num(i, locals)?;
                match list {
                    Value::NumArr(a) => {
                        let a = a.borrow();
                        Value::Num(a[check_index(i, a.len())?])
                    }
                    Value::StrArr(a) => {
                        let a = a.borrow();
                        Value::Str(a[check_index(i, a.len())?].clone())
                    }
                    _ => unreachable!("typed list"),
                }
            }
            TExprKind::Neg(x) => Value::Num(-self.num(x, locals)?),
            TExprKind::Arith(op, l, r) => {
                let a = self.num(l, locals)?;
                let b = self.num(r, locals)?;
                let op = match op {
                    ArithOp::Add => ArithKind::Add,
                    ArithOp::Sub => ArithKind::Sub,
                    ArithOp::Mul => ArithKind::Mul,
                    ArithOp::Div => ArithKind::Div,
                    ArithOp::Mod => ArithKind::Mod,
                };
                Value::Num(exec_arithmetic(op, a, b)?)
            }
            TExprKind::Concat(l, r) => {
                let a = self.expr(l, locals)?;
                let b = self.expr(r, locals)?;
                exec_concat(&a, &b)?
            }
            TExprKind::ToStr(x) => Value::str(&num_to_str(self.num(x, locals)?)),
            TExprKind::Call(c) => self.call(c, locals)?,
        })
    }

    fn call(&mut self, c: &TCall, locals: &mut Locals) -> Result<Value, RuntimeError> {
        let f = &self.program.functions[c.func as usize];
        let mut frame: Locals = vec![Value::Num(0.0); f.locals.len()];
        let mut slot = 0;
        if let Some(r) = &c.receiver {
            frame[0] = self.load(r, locals);
            slot = 1;
        }
        for a in &c.args {
            frame[slot] = self.expr(a, locals)?;
            slot += 1;
        }
        if self.depth >= self.options.max_frames {
            return Err(RuntimeError::new(
                FRAME_OVERFLOW,
                format!("call depth exceeds {} frames", self.options.max_frames),
            ));
        }
        self.depth += 1;
        let flow = self.block(&f.body, &mut frame)?;
        self.depth -= 1;
        Ok(match flow {
            Flow::Return(v) => v,
            Flow::Next => match f.return_type {
                Some(ValueType::Str) => Value::str(""),
                _ => Value::Num(0.0),
            },
            Flow::Halt => unreachable!("only the entry function halts"),
        })
    }

    fn cond(&mut self, c: &TCond, locals: &mut Locals) -> Result<bool, RuntimeError> {
        Ok(match c {
            TCond::Cmp(op, l, r) => {
                let a = self.expr(l, locals)?;
                let b = self.expr(r, locals)?;
                compare_values(*op, &a, &b)?
            }
            TCond::And(l, r) => self.cond(l, locals)? && self.cond(r, locals)?,
            TCond::Or(l, r) => self.cond(l, locals)? || self.cond(r, locals)?,
        })
    }

    fn init_object(
        &mut self,
        obj: &Value,
        class: ClassId,
        locals: &mut Locals,
    ) -> Result<(), RuntimeError> {
        let program = self.program;
        let Value::Obj(o) = obj else {
            unreachable!("object")
        };
        for (i, field) in program.classes[class as usize].fields.iter().enumerate() {
            match (&field.init, field.ty) {
                (FieldInit::Scalar(e), _) => {
                    let v = self.expr(e, locals)?;
                    o.borrow_mut().fields[i] = v;
                }
                (FieldInit::Array(values), _) => {
                    let list = o.borrow().fields[i].clone();
                    fill(&list, values);
                }
                (FieldInit::None, SlotType::Object(c)) => {
                    let inner = o.borrow().fields[i].clone();
                    self.init_object(&inner, c, locals)?;
                }
                (FieldInit::None, _) => {}
            }
        }
        Ok(())
    }

    fn stmt(&mut self, s: &TStmt, locals: &mut Locals) -> Result<Flow, RuntimeError> {
        self.tick()?;
        match s {
            TStmt::Assign { place, value } => {
                let c = self.container(place, locals);
                let v = self.expr(value, locals)?;
                self.store(place, c, locals, v);
            }
            TStmt::AssignIndex {
                place,
                index,
                value,
            } => {
                let list = self.load(place, locals);
                let i = self.num(index, locals)?;
                let v = self.expr(value, locals)?;
                store_element(&list, i, v)?;
            }
            TStmt::NewArray {
                place,
                elem,
                len,
                init,
            } => {
                let kind = match elem {
                    ValueType::Num => SlotType::NumArray(*len),
                    ValueType::Str => SlotType::StrArray(*len),
                };
                let list = default_value(kind, &|_| Vec::new());
                fill(&list, init);
                self.assign(place, locals, list);
            }
            TStmt::NewObject { place, class } => {
                let obj = new_object(*class, &self.fields_of());
                self.assign(place, locals, obj.clone());
                self.init_object(&obj, *class, locals)?;
            }
            TStmt::If {
                cond,
                then_body,
                else_body,
            } => {
                let body = if self.cond(cond, locals)? {
                    then_body
                } else {
                    else_body
                };
                return self.block(body, locals);
            }
            TStmt::While { cond, body } => {
                while self.cond(cond, locals)? {
                    match self.block(body, locals)? {
                        Flow::Next => {}
                        other => return Ok(other),
                    }
                }
            }
            TStmt::Show(e) => {
                let text = match self.expr(e, locals)? {
                    Value::Str(s) => s.to_string(),
                    Value::Num(n) => num_to_str(n),
                    _ => unreachable!("typed text"),
                };
                self.dialog.show(&text)?;
            }
            TStmt::Input {
                place,
                index,
                prompt,
                kind,
            } => {
                let read = |me: &mut Self| -> Result<Value, RuntimeError> {
                    let line = me.dialog.input(prompt)?.ok_or_else(|| {
                        RuntimeError::new(END_OF_INPUT, "input ended before a value was read")
                    })?;
                    exec_input(line, *kind == ValueType::Num)
                };
                match index {
                    None => {
                        let c = self.container(place, locals);
                        let v = read(self)?;
                        self.store(place, c, locals, v);
                    }
                    Some(i) => {
                        let list = self.load(place, locals);
                        let i = self.num(i, locals)?;
                        let v = read(self)?;
                        store_element(&list, i, v)?;
                    }
                }
            }
            TStmt::Call(c) => {
                self.call(c, locals)?;
            }
            TStmt::Return(None) => return Ok(Flow::Halt),
            TStmt::Return(Some(e)) => return Ok(Flow::Return(self.expr(e, locals)?)),
        }
        Ok(Flow::Next)
    }

    fn block(&mut self, stmts: &[TStmt], locals: &mut Locals) -> Result<Flow, RuntimeError> {
        for s in stmts {
            match self.stmt(s, locals)? {
                Flow::Next => {}
                other => return Ok(other),
            }
        }
        Ok(Flow::Next)
    }

    fn run(&mut self) -> Result<(), RuntimeError> {
        let program = self.program;
        let entry = program.entry_function();
        let mut locals: Locals = vec![Value::Num(0.0); entry.locals.len()];
        self.depth = 1;
        if let Flow::Halt = self.block(&program.global_init, &mut locals)? {
            return Ok(());
        }
        self.block(&entry.body, &mut locals)?;
        Ok(())
    }
}

fn fill(list: &Value, values: &[Literal]) {
    for (i, v) in values.iter().enumerate() {
        match (list, v) {
            (Value::NumArr(a), Literal::Num(n)) => a.borrow_mut()[i] = *n,
            (Value::StrArr(a), Literal::Str(s)) => a.borrow_mut()[i] = Rc::from(s.as_str()),
            _ => unreachable!("typed list initializer"),
        }
    }
}

fn store_element(list: &Value, index: f64, v: Value) -> Result<(), RuntimeError> {
    match (list, v) {
        (Value::NumArr(a), Value::Num(n)) => {
            let mut a = a.borrow_mut();
            let i = check_index(index, a.len())?;
            a[i] = n;
        }
        (Value::StrArr(a), Value::Str(s)) => {
            let mut a: std::cell::RefMut<'_, Vec<Rc<str>>> = RefCell::borrow_mut(a);
            let i = check_index(index, a.len())?;
            a[i] = s;
        }
        _ => unreachable!("typed list store"),
    }
    Ok(())
}

/// Stack size for the evaluator thread; deep recursion in the program is
/// deep recursion here.
const ORACLE_STACK: usize = 1 << 30;

/// Interprets `program` with the same semantics as the bytecode machine.
pub fn tree_walk_eval(
    program: &TypedProgram,
    dialog: &mut (dyn Dialog + Send),
    options: RunOptions,
) -> Result<(), RuntimeError> {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(ORACLE_STACK)
            .spawn_scoped(scope, move || {
                Evaluator {
                    program,
                    globals: Vec::new(),
                    dialog,
                    depth: 0,
                    steps: 0,
                    options,
                }
                .start()
            })
            .expect("spawn evaluator thread")
            .join()
            .expect("evaluator thread panicked")
    })
}

impl Evaluator<'_, '_> {
    fn start(&mut self) -> Result<(), RuntimeError> {
        let fields_of = self.fields_of();
        self.globals = self
            .program
            .globals
            .iter()
            .map(|g| default_value(g.ty, &fields_of))
            .collect();
        self.run()
    }
}
