//! Deterministic text listing of a program image.

use std::fmt::Write;

use super::image::{Constant, ProgramImage};
use super::opcode::{decode_all, jump_target, Instr, KIND_NUM};
use crate::semantics::typed::SlotType;
use crate::vm::num_to_str;

fn kind_name(img: &ProgramImage, k: SlotType) -> String {
    match k {
        SlotType::Num => "NUM".into(),
        SlotType::Str => "STR".into(),
        SlotType::NumArray(n) => format!("NUMLIST[{n}]"),
        SlotType::StrArray(n) => format!("STRLIST[{n}]"),
        SlotType::Object(c) => img
            .classes
            .get(c as usize)
            .map_or_else(|| format!("class#{c}"), |c| c.name.clone()),
    }
}

fn value_kind(k: u8) -> &'static str {
    if k == KIND_NUM {
        "NUM"
    } else {
        "STR"
    }
}

fn constant(img: &ProgramImage, i: u16) -> String {
    match img.constants.get(i as usize) {
        Some(Constant::Num(n)) => num_to_str(*n),
        Some(Constant::Str(s)) => format!("{s:?}"),
        None => "?".into(),
    }
}

/// Operands and trailing comment of one instruction.
fn operands(img: &ProgramImage, offset: usize, i: Instr) -> (String, Option<String>) {
    use Instr::*;
    match i {
        PushNum(c) | PushStr(c) => (c.to_string(), Some(constant(img, c))),
        Load(s) | Store(s) => (s.to_string(), None),
        LoadGlobal(s) | StoreGlobal(s) => (
            s.to_string(),
            img.globals.get(s as usize).map(|g| g.name.clone()),
        ),
        NewArr { kind, len } => (format!("{} {len}", value_kind(kind)), None),
        Jmp(rel) | JmpIfFalse(rel) => (
            format!("{rel:+}"),
            Some(format!("-> {:04}", jump_target(offset, rel))),
        ),
        Call { func, argc } => (
            format!("{func} {argc}"),
            img.functions.get(func as usize).map(|f| f.name.clone()),
        ),
        Input(kind) => (value_kind(kind).into(), None),
        NewObj(c) => (
            c.to_string(),
            img.classes.get(c as usize).map(|c| c.name.clone()),
        ),
        GetField(f) | SetField(f) => (f.to_string(), None),
        _ => (String::new(), None),
    }
}

/// One listing line: `offset: OPCODE operands ; comment`.
pub fn instruction_line(img: &ProgramImage, offset: usize, i: Instr) -> String {
    let (ops, comment) = operands(img, offset, i);
    let mut line = format!("{offset:04}: {}", i.opcode().name());
    if !ops.is_empty() {
        line.push(' ');
        line.push_str(&ops);
    }
    if let Some(c) = comment {
        line.push_str(" ; ");
        line.push_str(&c);
    }
    line
}

/// Lists globals, classes, and every function's instructions as
/// `offset: OPCODE operands ; comment`.
pub fn disassemble(img: &ProgramImage) -> String {
    let mut out = String::new();
    for (i, g) in img.globals.iter().enumerate() {
        let _ = writeln!(out, "global {i} {}: {}", g.name, kind_name(img, g.kind));
    }
    for (i, c) in img.classes.iter().enumerate() {
        let fields: Vec<String> = c
            .fields
            .iter()
            .map(|f| format!("{}: {}", f.name, kind_name(img, f.kind)))
            .collect();
        let _ = writeln!(out, "class {i} {} {{ {} }}", c.name, fields.join(", "));
    }
    for (index, f) in img.functions.iter().enumerate() {
        let entry = if index == img.entry as usize {
            " entry"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "function {index} {} params={} locals={}{entry}",
            f.name, f.param_count, f.local_count
        );
        let Some(instrs) = decode_all(&f.code) else {
            let _ = writeln!(out, "    <undecodable code>");
            continue;
        };
        for (offset, i) in instrs {
            let _ = writeln!(out, "{}", instruction_line(img, offset, i));
        }
    }
    out
}

/// Occurrences of an opcode name in a listing.
pub fn count_opcode(listing: &str, name: &str) -> usize {
    listing
        .lines()
        .filter(|l| {
            l.split_once(": ").is_some_and(|(off, rest)| {
                off.len() == 4
                    && off.bytes().all(|b| b.is_ascii_digit())
                    && rest.split(' ').next() == Some(name)
            })
        })
        .count()
}
