//! Bytecode generation from the typed program.

use std::collections::HashMap;

use super::image::{ClassDef, Constant, FieldDef, FunctionChunk, GlobalDef};
use super::opcode::{Instr, KIND_NUM, KIND_STR};
use crate::diagnostic::{Diagnostic, Phase};
use crate::parser::ast::RelOp;
use crate::semantics::typed::*;

fn gen_error(code: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic::unlocated(Phase::Codegen, code, message)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ConstKey {
    Num(u64),
    Str(String),
}

/// Deduplicating constant pool.
#[derive(Debug, Default, Clone)]
pub struct ConstPool {
    constants: Vec<Constant>,
    index: HashMap<ConstKey, u16>,
    overflow: bool,
}

impl ConstPool {
    pub fn intern(&mut self, c: Constant) -> u16 {
        let key = match &c {
            Constant::Num(n) => ConstKey::Num(n.to_bits()),
            Constant::Str(s) => ConstKey::Str(s.clone()),
        };
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let Ok(i) = u16::try_from(self.constants.len()) else {
            self.overflow = true;
            return 0;
        };
        self.constants.push(c);
        self.index.insert(key, i);
        i
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn into_constants(self) -> Result<Vec<Constant>, Diagnostic> {
        if self.overflow {
            return Err(gen_error("E-GEN-002", "more than 65536 distinct constants"));
        }
        Ok(self.constants)
    }
}

/// Code buffer for one chunk, with forward-jump patching.
#[derive(Debug, Default)]
pub struct ChunkBuilder {
    pub code: Vec<u8>,
    overflow: bool,
}

impl ChunkBuilder {
    pub fn emit(&mut self, i: Instr) {
        i.encode(&mut self.code);
    }

    pub fn here(&self) -> usize {
        self.code.len()
    }

    /// Emits a jump with a placeholder displacement; returns its offset.
    fn jump(&mut self, conditional: bool) -> usize {
        let at = self.here();
        self.emit(if conditional {
            Instr::JmpIfFalse(0)
        } else {
            Instr::Jmp(0)
        });
        at
    }

    fn displacement(&mut self, at: usize, target: usize) -> i32 {
        let rel = target as i64 - (at as i64 + 5);
        i32::try_from(rel).unwrap_or_else(|_| {
            self.overflow = true;
            0
        })
    }

    fn patch(&mut self, at: usize, target: usize) {
        let rel = self.displacement(at, target);
        self.code[at + 1..at + 5].copy_from_slice(&rel.to_le_bytes());
    }

    fn patch_here(&mut self, sites: &[usize]) {
        let target = self.here();
        sites.iter().for_each(|&s| self.patch(s, target));
    }

    fn jump_back(&mut self, target: usize) {
        let at = self.here();
        let rel = self.displacement(at, target);
        self.emit(Instr::Jmp(rel));
    }

    pub fn finish(self) -> Result<Vec<u8>, Diagnostic> {
        if self.overflow {
            return Err(gen_error(
                "E-GEN-001",
                "jump displacement does not fit in 32 bits",
            ));
        }
        Ok(self.code)
    }
}

fn kind_of(t: ValueType) -> u8 {
    match t {
        ValueType::Num => KIND_NUM,
        ValueType::Str => KIND_STR,
    }
}

/// Code generation context shared by every chunk of a program.
pub struct Generator<'a> {
    pub program: &'a TypedProgram,
    pub pool: ConstPool,
}

impl<'a> Generator<'a> {
    pub fn new(program: &'a TypedProgram) -> Self {
        Generator {
            program,
            pool: ConstPool::default(),
        }
    }

    fn literal(&mut self, out: &mut ChunkBuilder, lit: &Literal) {
        match lit {
            Literal::Num(n) => {
                let i = self.pool.intern(Constant::Num(*n));
                out.emit(Instr::PushNum(i))
            }
            Literal::Str(s) => {
                let i = self.pool.intern(Constant::Str(s.clone()));
                out.emit(Instr::PushStr(i))
            }
        }
    }

    fn load_root(out: &mut ChunkBuilder, root: Root) {
        out.emit(match root {
            Root::Local(s) => Instr::Load(s),
            Root::Global(s) => Instr::LoadGlobal(s),
        });
    }

    fn load_place(out: &mut ChunkBuilder, p: &Place) {
        Self::load_root(out, p.root);
        p.fields.iter().for_each(|&f| out.emit(Instr::GetField(f)));
    }

    /// Stores the value produced by `value` into `p`.
    fn store_place(
        &mut self,
        out: &mut ChunkBuilder,
        p: &Place,
        value: impl FnOnce(&mut Self, &mut ChunkBuilder),
    ) {
        match p.fields.split_last() {
            None => {
                value(self, out);
                out.emit(match p.root {
                    Root::Local(s) => Instr::Store(s),
                    Root::Global(s) => Instr::StoreGlobal(s),
                });
            }
            Some((&last, path)) => {
                Self::load_root(out, p.root);
                path.iter().for_each(|&f| out.emit(Instr::GetField(f)));
                value(self, out);
                out.emit(Instr::SetField(last));
            }
        }
    }

    /// Operands first, then the operator; net stack effect +1.
    pub fn expr(&mut self, out: &mut ChunkBuilder, e: &TExpr) {
        match &e.kind {
            TExprKind::Literal(lit) => self.literal(out, lit),
            TExprKind::Load(p) => Self::load_place(out, p),
            TExprKind::LoadIndex(p, i) => {
                Self::load_place(out, p);
                self.expr(out, i);
                out.emit(Instr::LoadIdx);
            }
            TExprKind::Neg(x) => {
                self.expr(out, x);
                out.emit(Instr::Neg);
            }
            TExprKind::Arith(op, l, r) => {
                self.expr(out, l);
                self.expr(out, r);
                out.emit(match op {
                    ArithOp::Add => Instr::Add,
                    ArithOp::Sub => Instr::Sub,
                    ArithOp::Mul => Instr::Mul,
                    ArithOp::Div => Instr::Div,
                    ArithOp::Mod => Instr::Mod,
                });
            }
            TExprKind::Concat(l, r) => {
                self.expr(out, l);
                self.expr(out, r);
                out.emit(Instr::Concat);
            }
            TExprKind::ToStr(x) => {
                self.expr(out, x);
                out.emit(Instr::NumToStr);
            }
            TExprKind::Call(c) => self.call(out, c),
        }
    }

    fn call(&mut self, out: &mut ChunkBuilder, c: &TCall) {
        if let Some(r) = &c.receiver {
            Self::load_place(out, r);
        }
        for a in &c.args {
            self.expr(out, a);
        }
        let argc = (c.args.len() + c.receiver.is_some() as usize) as u8;
        out.emit(Instr::Call { func: c.func, argc });
    }

    /// Jumping code: falls through when `c` holds, otherwise jumps to one of
    /// the returned sites, all of which the caller patches to the false target.
    fn cond(&mut self, out: &mut ChunkBuilder, c: &TCond) -> Vec<usize> {
        match c {
            TCond::Cmp(op, l, r) => {
                self.expr(out, l);
                self.expr(out, r);
                out.emit(match op {
                    RelOp::Eq => Instr::CmpEq,
                    RelOp::Ne => Instr::CmpNe,
                    RelOp::Lt => Instr::CmpLt,
                    RelOp::Gt => Instr::CmpGt,
                    RelOp::Le => Instr::CmpLe,
                    RelOp::Ge => Instr::CmpGe,
                });
                vec![out.jump(true)]
            }
            TCond::And(l, r) => {
                let mut sites = self.cond(out, l);
                sites.extend(self.cond(out, r));
                sites
            }
            TCond::Or(l, r) => {
                let left_false = self.cond(out, l);
                let to_true = out.jump(false);
                out.patch_here(&left_false);
                let sites = self.cond(out, r);
                out.patch_here(&[to_true]);
                sites
            }
        }
    }

    fn init_object(&mut self, out: &mut ChunkBuilder, place: &Place, class: ClassId) {
        let program = self.program;
        for (i, field) in program.classes[class as usize].fields.iter().enumerate() {
            let fp = place.field(i as u16);
            match (&field.init, field.ty) {
                (FieldInit::Scalar(e), _) => self.store_place(out, &fp, |g, out| g.expr(out, e)),
                (FieldInit::Array(values), _) => self.init_elements(out, &fp, values),
                (FieldInit::None, SlotType::Object(c)) => self.init_object(out, &fp, c),
                (FieldInit::None, _) => {}
            }
        }
    }

    fn init_elements(&mut self, out: &mut ChunkBuilder, place: &Place, values: &[Literal]) {
        for (j, v) in values.iter().enumerate() {
            Self::load_place(out, place);
            self.literal(out, &Literal::Num(j as f64));
            self.literal(out, v);
            out.emit(Instr::StoreIdx);
        }
    }

    /// Net stack effect 0.
    pub fn stmt(&mut self, out: &mut ChunkBuilder, s: &TStmt) {
        match s {
            TStmt::Assign { place, value } => {
                self.store_place(out, place, |g, out| g.expr(out, value))
            }
            TStmt::AssignIndex {
                place,
                index,
                value,
            } => {
                Self::load_place(out, place);
                self.expr(out, index);
                self.expr(out, value);
                out.emit(Instr::StoreIdx);
            }
            TStmt::NewArray {
                place,
                elem,
                len,
                init,
            } => {
                self.store_place(out, place, |_, out| {
                    out.emit(Instr::NewArr {
                        kind: kind_of(*elem),
                        len: *len,
                    })
                });
                self.init_elements(out, place, init);
            }
            TStmt::NewObject { place, class } => {
                self.store_place(out, place, |_, out| out.emit(Instr::NewObj(*class)));
                self.init_object(out, place, *class);
            }
            TStmt::If {
                cond,
                then_body,
                else_body,
            } => {
                let to_else = self.cond(out, cond);
                self.body(out, then_body);
                if else_body.is_empty() {
                    out.patch_here(&to_else);
                } else {
                    let to_end = out.jump(false);
                    out.patch_here(&to_else);
                    self.body(out, else_body);
                    out.patch_here(&[to_end]);
                }
            }
            TStmt::While { cond, body } => {
                let top = out.here();
                let to_exit = self.cond(out, cond);
                self.body(out, body);
                out.jump_back(top);
                out.patch_here(&to_exit);
            }
            TStmt::Show(e) => {
                self.expr(out, e);
                out.emit(Instr::Show);
            }
            TStmt::Input {
                place,
                index,
                prompt,
                kind,
            } => {
                let read = |g: &mut Self, out: &mut ChunkBuilder| {
                    g.literal(out, &Literal::Str(prompt.clone()));
                    out.emit(Instr::Input(kind_of(*kind)));
                };
                match index {
                    None => self.store_place(out, place, read),
                    Some(i) => {
                        Self::load_place(out, place);
                        self.expr(out, i);
                        read(self, out);
                        out.emit(Instr::StoreIdx);
                    }
                }
            }
            TStmt::Call(c) => {
                self.call(out, c);
                out.emit(Instr::Pop);
            }
            TStmt::Return(None) => out.emit(Instr::Halt),
            TStmt::Return(Some(e)) => {
                self.expr(out, e);
                out.emit(Instr::Ret);
            }
        }
    }

    fn body(&mut self, out: &mut ChunkBuilder, stmts: &[TStmt]) {
        stmts.iter().for_each(|s| self.stmt(out, s));
    }

    /// One chunk. The entry chunk runs global initialization first and ends
    /// in HALT; other functions return a default value if control reaches the end.
    pub fn function(&mut self, f: &TFunction) -> Result<FunctionChunk, Diagnostic> {
        let mut out = ChunkBuilder::default();
        if f.is_entry() {
            let program = self.program;
            self.body(&mut out, &program.global_init);
        }
        self.body(&mut out, &f.body);
        match f.return_type {
            None => out.emit(Instr::Halt),
            Some(t) => {
                let default = match t {
                    ValueType::Num => Literal::Num(0.0),
                    ValueType::Str => Literal::Str(String::new()),
                };
                self.literal(&mut out, &default);
                out.emit(Instr::Ret);
            }
        }
        let local_count = u16::try_from(f.locals.len()).map_err(|_| {
            gen_error(
                "E-GEN-003",
                format!("function `{}` has too many local variables", f.name),
            )
        })?;
        Ok(FunctionChunk {
            name: f.name.clone(),
            param_count: f.param_count,
            local_count,
            code: out.finish()?,
        })
    }
}

/// Generated but not yet linked program.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedProgram {
    pub constants: Vec<Constant>,
    pub globals: Vec<GlobalDef>,
    pub classes: Vec<ClassDef>,
    pub chunks: Vec<FunctionChunk>,
    pub entry: u16,
}

/// Translates an expression alone, for inspection and tests.
pub fn gen_expression(e: &TExpr, program: &TypedProgram, pool: &mut ConstPool) -> Vec<u8> {
    let mut g = Generator {
        program,
        pool: std::mem::take(pool),
    };
    let mut out = ChunkBuilder::default();
    g.expr(&mut out, e);
    *pool = g.pool;
    out.code
}

/// Translates a statement alone, for inspection and tests.
pub fn gen_statement(s: &TStmt, program: &TypedProgram, pool: &mut ConstPool) -> Vec<u8> {
    let mut g = Generator {
        program,
        pool: std::mem::take(pool),
    };
    let mut out = ChunkBuilder::default();
    g.stmt(&mut out, s);
    *pool = g.pool;
    out.code
}

/// One chunk per function, in function-table order.
pub fn gen_program(tp: &TypedProgram) -> Result<GeneratedProgram, Diagnostic> {
    let mut g = Generator::new(tp);
    let chunks = tp
        .functions
        .iter()
        .map(|f| g.function(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GeneratedProgram {
        constants: g.pool.into_constants()?,
        globals: tp
            .globals
            .iter()
            .map(|s| GlobalDef {
                name: s.name.clone(),
                kind: s.ty,
            })
            .collect(),
        classes: tp
            .classes
            .iter()
            .map(|c| ClassDef {
                name: c.name.clone(),
                fields: c
                    .fields
                    .iter()
                    .map(|f| FieldDef {
                        name: f.name.clone(),
                        kind: f.ty,
                    })
                    .collect(),
            })
            .collect(),
        chunks,
        entry: tp.entry,
    })
}
