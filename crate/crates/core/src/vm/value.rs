//! Runtime values and the primitive operations shared by the machine and the
//! reference evaluator.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use crate::diagnostic::{Diagnostic, Phase};
use crate::semantics::typed::SlotType;

/// Lists and objects are shared references; dropping the last one frees them.
#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Str(Rc<str>),
    NumArr(Rc<RefCell<Vec<f64>>>),
    StrArr(Rc<RefCell<Vec<Rc<str>>>>),
    Obj(Rc<RefCell<Object>>),
}

#[derive(Debug, Clone)]
pub struct Object {
    pub class: u16,
    pub fields: Vec<Value>,
}

impl Value {
    pub fn str(s: &str) -> Value {
        Value::Str(Rc::from(s))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "NUM",
            Value::Str(_) => "STR",
            Value::NumArr(_) => "NUMLIST",
            Value::StrArr(_) => "STRLIST",
            Value::Obj(_) => "object",
        }
    }
}

impl PartialEq for Value {
    /// Scalars compare by value, lists and objects by identity.
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => a.to_bits() == b.to_bits(),
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::NumArr(a), Value::NumArr(b)) => Rc::ptr_eq(a, b),
            (Value::StrArr(a), Value::StrArr(b)) => Rc::ptr_eq(a, b),
            (Value::Obj(a), Value::Obj(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Zero value of a slot kind: 0, empty text, zero-filled lists, and objects
/// whose fields are themselves zero values. `fields_of` gives a class's field kinds.
pub fn default_value(kind: SlotType, fields_of: &dyn Fn(u16) -> Vec<SlotType>) -> Value {
    match kind {
        SlotType::Num => Value::Num(0.0),
        SlotType::Str => Value::str(""),
        SlotType::NumArray(n) => Value::NumArr(Rc::new(RefCell::new(vec![0.0; n as usize]))),
        SlotType::StrArray(n) => {
            Value::StrArr(Rc::new(RefCell::new(vec![Rc::from(""); n as usize])))
        }
        SlotType::Object(c) => new_object(c, fields_of),
    }
}

pub fn new_object(class: u16, fields_of: &dyn Fn(u16) -> Vec<SlotType>) -> Value {
    let fields = fields_of(class)
        .into_iter()
        .map(|k| default_value(k, fields_of))
        .collect();
    Value::Obj(Rc::new(RefCell::new(Object { class, fields })))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeError {
    pub code: &'static str,
    pub message: String,
}

impl RuntimeError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        RuntimeError {
            code,
            message: message.into(),
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::unlocated(Phase::Runtime, self.code, self.message.clone())
    }
}

impl fmt::Display for RuntimeError {
    /// The form printed on standard error.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "خطأ وقت التشغيل {}: {}", self.code, self.message)
    }
}

impl std::error::Error for RuntimeError {}

pub const DIV_BY_ZERO: &str = "R-001";
pub const MOD_BY_ZERO: &str = "R-002";
pub const INDEX_OUT_OF_BOUNDS: &str = "R-003";
pub const BAD_NUMBER_INPUT: &str = "R-004";
pub const FRAME_OVERFLOW: &str = "R-005";
pub const STEP_LIMIT: &str = "R-006";
pub const END_OF_INPUT: &str = "R-007";
pub const INVALID_NUMBER: &str = "R-008";
pub const BAD_OPERAND: &str = "R-009";
pub const IO_FAILURE: &str = "R-010";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

/// Binary64 arithmetic. Division and remainder by zero are errors; `%` keeps
/// the sign of the dividend. A NaN result (such as ∞ - ∞) is an error too.
pub fn exec_arithmetic(op: ArithKind, a: f64, b: f64) -> Result<f64, RuntimeError> {
    let r = match op {
        ArithKind::Add => a + b,
        ArithKind::Sub => a - b,
        ArithKind::Mul => a * b,
        ArithKind::Div if b == 0.0 => {
            return Err(RuntimeError::new(DIV_BY_ZERO, "division by zero"))
        }
        ArithKind::Div => a / b,
        ArithKind::Mod if b == 0.0 => {
            return Err(RuntimeError::new(MOD_BY_ZERO, "remainder by zero"))
        }
        ArithKind::Mod => a % b,
    };
    if r.is_nan() {
        return Err(RuntimeError::new(
            INVALID_NUMBER,
            format!("{} has no numeric value", describe(op, a, b)),
        ));
    }
    Ok(r)
}

fn describe(op: ArithKind, a: f64, b: f64) -> String {
    let sym = match op {
        ArithKind::Add => "+",
        ArithKind::Sub => "-",
        ArithKind::Mul => "×",
        ArithKind::Div => "÷",
        ArithKind::Mod => "%",
    };
    format!("{} {sym} {}", num_to_str(a), num_to_str(b))
}

const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

/// Text form of a number: integers below 2^53 without a decimal point (and
/// without the sign of negative zero), otherwise the shortest decimal string
/// that reads back as the same number. Infinities print as `∞` / `-∞`.
pub fn num_to_str(n: f64) -> String {
    if n.is_nan() {
        return "NaN".into();
    }
    if n.is_infinite() {
        return if n > 0.0 { "∞".into() } else { "-∞".into() };
    }
    if n.fract() == 0.0 && n.abs() < EXACT_INT_LIMIT {
        return format!("{}", n as i64);
    }
    let plain = format!("{n}");
    let sci = format!("{n:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

/// `&`: text concatenation with no separator. Numbers are converted first.
pub fn exec_concat(a: &Value, b: &Value) -> Result<Value, RuntimeError> {
    let text = |v: &Value| match v {
        Value::Str(s) => Ok(s.to_string()),
        Value::Num(n) => Ok(num_to_str(*n)),
        other => Err(RuntimeError::new(
            BAD_OPERAND,
            format!("cannot join a {}", other.type_name()),
        )),
    };
    let mut s = text(a)?;
    s.push_str(&text(b)?);
    Ok(Value::Str(Rc::from(s)))
}

/// Parses an input line as a number: optional sign, digits, optional fraction.
/// Arabic-Indic digits are accepted; surrounding whitespace is ignored.
pub fn parse_number(line: &str) -> Option<f64> {
    let ascii: String = line
        .trim()
        .chars()
        .map(|c| match c {
            '\u{0660}'..='\u{0669}' => char::from(b'0' + (c as u32 - 0x0660) as u8),
            '\u{066B}' => '.',
            c => c,
        })
        .collect();
    let body = ascii.strip_prefix(['+', '-']).unwrap_or(&ascii);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || frac.is_some_and(|f| !digits(f)) {
        return None;
    }
    ascii.parse::<f64>().ok().filter(|n| n.is_finite())
}

/// Converts an input line for a target of the given kind (`KIND_NUM` / `KIND_STR`).
pub fn exec_input(line: String, numeric: bool) -> Result<Value, RuntimeError> {
    if !numeric {
        return Ok(Value::Str(Rc::from(line)));
    }
    parse_number(&line).map(Value::Num).ok_or_else(|| {
        RuntimeError::new(BAD_NUMBER_INPUT, format!("input `{line}` is not a number"))
    })
}

/// Checks an index against a list length.
pub fn check_index(index: f64, len: usize) -> Result<usize, RuntimeError> {
    if index.fract() == 0.0 && index >= 0.0 && index < len as f64 {
        Ok(index as usize)
    } else {
        Err(RuntimeError::new(
            INDEX_OUT_OF_BOUNDS,
            format!(
                "index {} is outside the list bounds 0..{}",
                num_to_str(index),
                len as i64 - 1
            ),
        ))
    }
}
