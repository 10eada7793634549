//! The stack machine.

use std::collections::HashMap;
use std::rc::Rc;

use super::dialog::Dialog;
use super::value::*;
use crate::codegen::disasm::instruction_line;
use crate::codegen::image::{Constant, ProgramImage};
use crate::codegen::opcode::{decode_all, jump_target, Instr, KIND_NUM};
use crate::semantics::typed::SlotType;

pub const DEFAULT_MAX_FRAMES: usize = 10_000;
pub const DEFAULT_MAX_STEPS: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_steps: u64,
    pub max_frames: usize,
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_steps: DEFAULT_MAX_STEPS,
            max_frames: DEFAULT_MAX_FRAMES,
            trace: false,
        }
    }
}

/// A chunk decoded once up front; jumps hold instruction indices.
struct Decoded {
    instrs: Vec<Instr>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

fn decode(code: &[u8]) -> Decoded {
    let pairs = decode_all(code).expect("validated image");
    let index_of: HashMap<usize, usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(o, _))| (o, i))
        .collect();
    let mut d = Decoded {
        instrs: Vec::new(),
        offsets: Vec::new(),
        targets: Vec::new(),
    };
    for (offset, instr) in pairs {
        let target = match instr {
            Instr::Jmp(rel) | Instr::JmpIfFalse(rel) => {
                index_of[&(jump_target(offset, rel) as usize)]
            }
            _ => 0,
        };
        d.instrs.push(instr);
        d.offsets.push(offset);
        d.targets.push(target);
    }
    d
}

pub struct Frame {
    pub func: u16,
    /// Index of the next instruction.
    pub pc: usize,
    pub locals: Vec<Value>,
}

pub struct Machine<'a> {
    image: &'a ProgramImage,
    chunks: Vec<Decoded>,
    pub stack: Vec<Value>,
    pub frames: Vec<Frame>,
    pub globals: Vec<Value>,
    pub steps: u64,
    options: RunOptions,
}

fn bad(message: impl Into<String>) -> RuntimeError {
    RuntimeError::new(BAD_OPERAND, message)
}

impl<'a> Machine<'a> {
    /// The image must have passed validation (loading or linking does that).
    pub fn new(image: &'a ProgramImage, options: RunOptions) -> Self {
        let chunks = image.functions.iter().map(|f| decode(&f.code)).collect();
        let fields_of = |c: u16| {
            image.classes[c as usize]
                .fields
                .iter()
                .map(|f| f.kind)
                .collect()
        };
        let globals = image
            .globals
            .iter()
            .map(|g| default_value(g.kind, &fields_of))
            .collect();
        Machine {
            image,
            chunks,
            stack: Vec::new(),
            frames: Vec::new(),
            globals,
            steps: 0,
            options,
        }
    }

    fn pop(&mut self) -> Value {
        self.stack.pop().expect("verified stack discipline")
    }

    fn pop_num(&mut self) -> Result<f64, RuntimeError> {
        match self.pop() {
            Value::Num(n) => Ok(n),
            v => Err(bad(format!("expected a number, found {}", v.type_name()))),
        }
    }

    fn pop_str(&mut self) -> Result<Rc<str>, RuntimeError> {
        match self.pop() {
            Value::Str(s) => Ok(s),
            v => Err(bad(format!("expected text, found {}", v.type_name()))),
        }
    }

    fn new_object(&self, class: u16) -> Value {
        let image = self.image;
        let fields_of = |c: u16| {
            image.classes[c as usize]
                .fields
                .iter()
                .map(|f| f.kind)
                .collect()
        };
        new_object(class, &fields_of)
    }

    fn trace_line(&self, func: u16, index: usize) -> String {
        let instr = self.chunks[func as usize].instrs[index];
        let offset = self.chunks[func as usize].offsets[index];
        format!(
            "[{}] {} | depth={}",
            self.image.functions[func as usize].name,
            instruction_line(self.image, offset, instr),
            self.stack.len()
        )
    }

    fn call(&mut self, func: u16, argc: u8) -> Result<(), RuntimeError> {
        if self.frames.len() >= self.options.max_frames {
            return Err(RuntimeError::new(
                FRAME_OVERFLOW,
                format!("call depth exceeds {} frames", self.options.max_frames),
            ));
        }
        let chunk = &self.image.functions[func as usize];
        let mut locals = vec![Value::Num(0.0); chunk.local_count as usize];
        let base = self.stack.len() - argc as usize;
        for (slot, v) in self.stack.drain(base..).enumerate() {
            locals[slot] = v;
        }
        self.frames.push(Frame {
            func,
            pc: 0,
            locals,
        });
        Ok(())
    }

    /// Executes from the entry function until HALT.
    pub fn run(&mut self, dialog: &mut dyn Dialog) -> Result<(), RuntimeError> {
        self.stack.clear();
        self.frames.clear();
        self.call(self.image.entry, 0)?;
        loop {
            self.steps += 1;
            if self.steps > self.options.max_steps {
                return Err(RuntimeError::new(
                    STEP_LIMIT,
                    format!("program exceeded {} steps", self.options.max_steps),
                ));
            }
            let frame = self.frames.last_mut().expect("running frame");
            let func = frame.func;
            let index = frame.pc;
            frame.pc += 1;
            let chunk = &self.chunks[func as usize];
            let instr = chunk.instrs[index];
            let target = chunk.targets[index];
            if self.options.trace {
                let line = self.trace_line(func, index);
                dialog.trace(&line);
            }
            match instr {
                Instr::PushNum(c) | Instr::PushStr(c) => {
                    let v = match &self.image.constants[c as usize] {
                        Constant::Num(n) => Value::Num(*n),
                        Constant::Str(s) => Value::str(s),
                    };
                    self.stack.push(v);
                }
                Instr::Load(s) => {
                    let v = self.frames.last().unwrap().locals[s as usize].clone();
                    self.stack.push(v);
                }
                Instr::Store(s) => {
                    let v = self.pop();
                    self.frames.last_mut().unwrap().locals[s as usize] = v;
                }
                Instr::LoadGlobal(s) => self.stack.push(self.globals[s as usize].clone()),
                Instr::StoreGlobal(s) => self.globals[s as usize] = self.pop(),
                Instr::NewArr { kind, len } => {
                    let kind = if kind == KIND_NUM {
                        SlotType::NumArray(len)
                    } else {
                        SlotType::StrArray(len)
                    };
                    self.stack.push(default_value(kind, &|_| Vec::new()));
                }
                Instr::LoadIdx => {
                    let i = self.pop_num()?;
                    let v = match self.pop() {
                        Value::NumArr(a) => {
                            let a = a.borrow();
                            Value::Num(a[check_index(i, a.len())?])
                        }
                        Value::StrArr(a) => {
                            let a = a.borrow();
                            Value::Str(a[check_index(i, a.len())?].clone())
                        }
                        v => return Err(bad(format!("cannot index a {}", v.type_name()))),
                    };
                    self.stack.push(v);
                }
                Instr::StoreIdx => {
                    let v = self.pop();
                    let i = self.pop_num()?;
                    match (self.pop(), v) {
                        (Value::NumArr(a), Value::Num(n)) => {
                            let mut a = a.borrow_mut();
                            let i = check_index(i, a.len())?;
                            a[i] = n;
                        }
                        (Value::StrArr(a), Value::Str(s)) => {
                            let mut a = a.borrow_mut();
                            let i = check_index(i, a.len())?;
                            a[i] = s;
                        }
                        (a, v) => {
                            return Err(bad(format!(
                                "cannot store {} into {}",
                                v.type_name(),
                                a.type_name()
                            )))
                        }
                    }
                }
                Instr::Add | Instr::Sub | Instr::Mul | Instr::Div | Instr::Mod => {
                    let b = self.pop_num()?;
                    let a = self.pop_num()?;
                    let op = match instr {
                        Instr::Add => ArithKind::Add,
                        Instr::Sub => ArithKind::Sub,
                        Instr::Mul => ArithKind::Mul,
                        Instr::Div => ArithKind::Div,
                        _ => ArithKind::Mod,
                    };
                    self.stack.push(Value::Num(exec_arithmetic(op, a, b)?));
                }
                Instr::Neg => {
                    let a = self.pop_num()?;
                    self.stack.push(Value::Num(-a));
                }
                Instr::Concat => {
                    let b = self.pop();
                    let a = self.pop();
                    self.stack.push(exec_concat(&a, &b)?);
                }
                Instr::NumToStr => {
                    let a = self.pop_num()?;
                    self.stack.push(Value::str(&num_to_str(a)));
                }
                Instr::CmpEq
                | Instr::CmpNe
                | Instr::CmpLt
                | Instr::CmpGt
                | Instr::CmpLe
                | Instr::CmpGe => {
                    let b = self.pop();
                    let a = self.pop();
                    let holds = compare(instr, &a, &b)?;
                    self.stack.push(Value::Num(if holds { 1.0 } else { 0.0 }));
                }
                Instr::Jmp(_) => self.frames.last_mut().unwrap().pc = target,
                Instr::JmpIfFalse(_) => {
                    if self.pop_num()? == 0.0 {
                        self.frames.last_mut().unwrap().pc = target;
                    }
                }
                Instr::Call { func, argc } => self.call(func, argc)?,
                Instr::Ret => {
                    let v = self.pop();
                    self.frames.pop();
                    self.stack.push(v);
                }
                Instr::Show => {
                    let text = match self.pop() {
                        Value::Str(s) => s.to_string(),
                        Value::Num(n) => num_to_str(n),
                        v => return Err(bad(format!("cannot show a {}", v.type_name()))),
                    };
                    dialog.show(&text)?;
                }
                Instr::Input(kind) => {
                    let prompt = self.pop_str()?;
                    let line = dialog.input(&prompt)?.ok_or_else(|| {
                        RuntimeError::new(END_OF_INPUT, "input ended before a value was read")
                    })?;
                    self.stack.push(exec_input(line, kind == KIND_NUM)?);
                }
                Instr::NewObj(c) => {
                    let obj = self.new_object(c);
                    self.stack.push(obj);
                }
                Instr::GetField(f) => {
                    let v = match self.pop() {
                        Value::Obj(o) => o.borrow().fields.get(f as usize).cloned(),
                        _ => None,
                    };
                    self.stack
                        .push(v.ok_or_else(|| bad(format!("no field {f}")))?);
                }
                Instr::SetField(f) => {
                    let v = self.pop();
                    match self.pop() {
                        Value::Obj(o) => match o.borrow_mut().fields.get_mut(f as usize) {
                            Some(slot) => *slot = v,
                            None => return Err(bad(format!("no field {f}"))),
                        },
                        other => return Err(bad(format!("{} has no fields", other.type_name()))),
                    }
                }
                Instr::Halt => return Ok(()),
                Instr::Pop => {
                    self.pop();
                }
            }
        }
    }
}

fn compare(instr: Instr, a: &Value, b: &Value) -> Result<bool, RuntimeError> {
    use std::cmp::Ordering;
    let ord = match (a, b) {
        (Value::Num(x), Value::Num(y)) => x.partial_cmp(y),
        (Value::Str(x), Value::Str(y)) if matches!(instr, Instr::CmpEq | Instr::CmpNe) => {
            Some(x.cmp(y))
        }
        _ => {
            return Err(bad(format!(
                "cannot compare {} with {}",
                a.type_name(),
                b.type_name()
            )))
        }
    };
    Ok(match instr {
        Instr::CmpEq => ord == Some(Ordering::Equal),
        Instr::CmpNe => ord != Some(Ordering::Equal),
        Instr::CmpLt => ord == Some(Ordering::Less),
        Instr::CmpGt => ord == Some(Ordering::Greater),
        Instr::CmpLe => matches!(ord, Some(Ordering::Less | Ordering::Equal)),
        _ => matches!(ord, Some(Ordering::Greater | Ordering::Equal)),
    })
}

/// Relational operators shared with the reference evaluator.
pub fn compare_values(
    op: crate::parser::ast::RelOp,
    a: &Value,
    b: &Value,
) -> Result<bool, RuntimeError> {
    use crate::parser::ast::RelOp;
    let instr = match op {
        RelOp::Eq => Instr::CmpEq,
        RelOp::Ne => Instr::CmpNe,
        RelOp::Lt => Instr::CmpLt,
        RelOp::Gt => Instr::CmpGt,
        RelOp::Le => Instr::CmpLe,
        RelOp::Ge => Instr::CmpGe,
    };
    compare(instr, a, b)
}

/// Runs an image to completion.
pub fn run(
    image: &ProgramImage,
    dialog: &mut dyn Dialog,
    options: RunOptions,
) -> Result<(), RuntimeError> {
    Machine::new(image, options).run(dialog)
}
