//! Program image: the linked, self-contained bytecode container and its
//! binary encoding.
//!
//! ```text
//! magic "PHXC" | version u16
//! constants: u32 count, each tag u8 (0 = f64, 1 = u32 length + UTF-8)
//! globals:   u16 count, each name + slot kind
//! classes:   u16 count, each name + u16 field count, each field name + slot kind
//! functions: u16 count, each name + params u8 + locals u16 + u32 code length + code
//! entry:     u16
//! ```
//! Names are u32 length + UTF-8. A slot kind is a tag u8 (0 number, 1 text,
//! 2 number list, 3 text list, 4 object) followed by a u16 (list length or
//! class index, 0 otherwise). All integers are little-endian.

use super::opcode::{decode_all, jump_target, Instr, KIND_STR};
use super::verify::verify_chunk;
use crate::diagnostic::{Diagnostic, Phase};
use crate::semantics::typed::SlotType;

pub const MAGIC: &[u8; 4] = b"PHXC";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Num(f64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalDef {
    pub name: String,
    pub kind: SlotType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub kind: SlotType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub fields: Vec<FieldDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionChunk {
    pub name: String,
    /// Includes the receiver slot of methods.
    pub param_count: u8,
    pub local_count: u16,
    pub code: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramImage {
    pub constants: Vec<Constant>,
    pub globals: Vec<GlobalDef>,
    pub classes: Vec<ClassDef>,
    pub functions: Vec<FunctionChunk>,
    pub entry: u16,
}

fn link_error(code: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic::unlocated(Phase::Link, code, message)
}

fn malformed(message: impl Into<String>) -> Diagnostic {
    link_error("E-LNK-003", message)
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

fn put_kind(out: &mut Vec<u8>, kind: SlotType) {
    let (tag, extra) = match kind {
        SlotType::Num => (0u8, 0u16),
        SlotType::Str => (1, 0),
        SlotType::NumArray(n) => (2, n),
        SlotType::StrArray(n) => (3, n),
        SlotType::Object(c) => (4, c),
    };
    out.push(tag);
    out.extend_from_slice(&extra.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], Diagnostic> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| malformed(format!("image truncated at byte {}", self.pos)))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, Diagnostic> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, Diagnostic> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, Diagnostic> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, Diagnostic> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| malformed("string is not valid UTF-8"))
    }

    fn kind(&mut self) -> Result<SlotType, Diagnostic> {
        let tag = self.u8()?;
        let extra = self.u16()?;
        Ok(match tag {
            0 => SlotType::Num,
            1 => SlotType::Str,
            2 => SlotType::NumArray(extra),
            3 => SlotType::StrArray(extra),
            4 => SlotType::Object(extra),
            t => return Err(malformed(format!("unknown slot kind tag {t}"))),
        })
    }
}

impl ProgramImage {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.constants.len() as u32).to_le_bytes());
        for c in &self.constants {
            match c {
                Constant::Num(n) => {
                    out.push(0);
                    out.extend_from_slice(&n.to_le_bytes());
                }
                Constant::Str(s) => {
                    out.push(1);
                    put_str(&mut out, s);
                }
            }
        }
        out.extend_from_slice(&(self.globals.len() as u16).to_le_bytes());
        for g in &self.globals {
            put_str(&mut out, &g.name);
            put_kind(&mut out, g.kind);
        }
        out.extend_from_slice(&(self.classes.len() as u16).to_le_bytes());
        for c in &self.classes {
            put_str(&mut out, &c.name);
            out.extend_from_slice(&(c.fields.len() as u16).to_le_bytes());
            for f in &c.fields {
                put_str(&mut out, &f.name);
                put_kind(&mut out, f.kind);
            }
        }
        out.extend_from_slice(&(self.functions.len() as u16).to_le_bytes());
        for f in &self.functions {
            put_str(&mut out, &f.name);
            out.push(f.param_count);
            out.extend_from_slice(&f.local_count.to_le_bytes());
            out.extend_from_slice(&(f.code.len() as u32).to_le_bytes());
            out.extend_from_slice(&f.code);
        }
        out.extend_from_slice(&self.entry.to_le_bytes());
        out
    }

    /// Decodes and validates an image.
    pub fn from_bytes(bytes: &[u8]) -> Result<ProgramImage, Diagnostic> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4).ok() != Some(MAGIC.as_slice()) {
            return Err(malformed("not a Phoenix image (bad magic)"));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(malformed(format!("unsupported image version {version}")));
        }
        let mut constants = Vec::new();
        for _ in 0..r.u32()? {
            constants.push(match r.u8()? {
                0 => Constant::Num(f64::from_le_bytes(r.take(8)?.try_into().unwrap())),
                1 => Constant::Str(r.string()?),
                t => return Err(malformed(format!("unknown constant tag {t}"))),
            });
        }
        let mut globals = Vec::new();
        for _ in 0..r.u16()? {
            globals.push(GlobalDef {
                name: r.string()?,
                kind: r.kind()?,
            });
        }
        let mut classes = Vec::new();
        for _ in 0..r.u16()? {
            let name = r.string()?;
            let mut fields = Vec::new();
            for _ in 0..r.u16()? {
                fields.push(FieldDef {
                    name: r.string()?,
                    kind: r.kind()?,
                });
            }
            classes.push(ClassDef { name, fields });
        }
        let mut functions = Vec::new();
        for _ in 0..r.u16()? {
            let name = r.string()?;
            let param_count = r.u8()?;
            let local_count = r.u16()?;
            let len = r.u32()? as usize;
            let code = r.take(len)?.to_vec();
            functions.push(FunctionChunk {
                name,
                param_count,
                local_count,
                code,
            });
        }
        let entry = r.u16()?;
        if r.pos != bytes.len() {
            return Err(malformed(format!(
                "{} trailing bytes after image",
                bytes.len() - r.pos
            )));
        }
        let image = ProgramImage {
            constants,
            globals,
            classes,
            functions,
            entry,
        };
        image.validate()?;
        Ok(image)
    }

    pub fn entry_chunk(&self) -> &FunctionChunk {
        &self.functions[self.entry as usize]
    }

    /// Checks every cross-reference and the stack discipline of every chunk.
    pub fn validate(&self) -> Result<(), Diagnostic> {
        let entry = self.functions.get(self.entry as usize).ok_or_else(|| {
            link_error(
                "E-LNK-002",
                format!("entry function {} does not exist", self.entry),
            )
        })?;
        if entry.param_count != 0 {
            return Err(link_error(
                "E-LNK-002",
                format!("entry function `{}` takes parameters", entry.name),
            ));
        }
        let check_class = |k: SlotType, what: &str| match k {
            SlotType::Object(c) if c as usize >= self.classes.len() => {
                Err(malformed(format!("{what} refers to missing class {c}")))
            }
            _ => Ok(()),
        };
        for g in &self.globals {
            check_class(g.kind, &format!("global `{}`", g.name))?;
        }
        for c in &self.classes {
            for f in &c.fields {
                check_class(f.kind, &format!("field `{}.{}`", c.name, f.name))?;
            }
        }
        for (index, f) in self.functions.iter().enumerate() {
            self.validate_chunk(index, f)?;
        }
        Ok(())
    }

    fn validate_chunk(&self, index: usize, f: &FunctionChunk) -> Result<(), Diagnostic> {
        let here = |msg: String| malformed(format!("function {index} `{}`: {msg}", f.name));
        if (f.local_count as usize) < f.param_count as usize {
            return Err(here("fewer local slots than parameters".into()));
        }
        let instrs = decode_all(&f.code)
            .ok_or_else(|| here("unknown opcode or truncated instruction".into()))?;
        for &(offset, instr) in &instrs {
            let bad = |what: &str| Err(here(format!("{what} at offset {offset:04}")));
            match instr {
                Instr::PushNum(c)
                    if !matches!(self.constants.get(c as usize), Some(Constant::Num(_))) =>
                {
                    return bad("PUSH_NUM without a number constant")
                }
                Instr::PushStr(c)
                    if !matches!(self.constants.get(c as usize), Some(Constant::Str(_))) =>
                {
                    return bad("PUSH_STR without a text constant")
                }
                Instr::Load(s) | Instr::Store(s) if s >= f.local_count => {
                    return bad("local slot out of range")
                }
                Instr::LoadGlobal(s) | Instr::StoreGlobal(s)
                    if s as usize >= self.globals.len() =>
                {
                    return bad("global slot out of range")
                }
                Instr::NewArr { kind, .. } | Instr::Input(kind) if kind > KIND_STR => {
                    return bad("unknown value kind")
                }
                Instr::NewObj(c) if c as usize >= self.classes.len() => {
                    return bad("unknown class")
                }
                Instr::Call { func, argc } => match self.functions.get(func as usize) {
                    None => {
                        return Err(link_error(
                            "E-LNK-001",
                            format!("function `{}` calls missing function {func}", f.name),
                        ))
                    }
                    Some(callee) if callee.param_count != argc => {
                        return Err(link_error(
                            "E-LNK-001",
                            format!(
                                "call to `{}` passes {argc} values, expected {}",
                                callee.name, callee.param_count
                            ),
                        ))
                    }
                    Some(_) if func == self.entry => {
                        return Err(link_error("E-LNK-001", "entry function is called"))
                    }
                    _ => {}
                },
                Instr::Jmp(rel) | Instr::JmpIfFalse(rel) => {
                    let target = jump_target(offset, rel);
                    if instrs
                        .binary_search_by_key(&target, |&(o, _)| o as i64)
                        .is_err()
                    {
                        return bad("jump to a non-instruction offset");
                    }
                }
                _ => {}
            }
        }
        verify_chunk(&instrs).map_err(here)
    }
}
