//! Instruction set. Operands are little-endian; jump displacements are
//! measured from the byte after the operand.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Opcode {
    PushNum = 0x01,
    PushStr = 0x02,
    Load = 0x03,
    Store = 0x04,
    LoadGlobal = 0x05,
    StoreGlobal = 0x06,
    NewArr = 0x07,
    LoadIdx = 0x08,
    StoreIdx = 0x09,
    Add = 0x0A,
    Sub = 0x0B,
    Mul = 0x0C,
    Div = 0x0D,
    Mod = 0x0E,
    Neg = 0x0F,
    Concat = 0x10,
    NumToStr = 0x11,
    CmpEq = 0x12,
    CmpNe = 0x13,
    CmpLt = 0x14,
    CmpGt = 0x15,
    CmpLe = 0x16,
    CmpGe = 0x17,
    Jmp = 0x18,
    JmpIfFalse = 0x19,
    Call = 0x1A,
    Ret = 0x1B,
    Show = 0x1C,
    Input = 0x1D,
    NewObj = 0x1E,
    GetField = 0x1F,
    SetField = 0x20,
    Halt = 0x21,
    /// Discards the top of the stack (result of a call statement).
    Pop = 0x22,
}

impl Opcode {
    pub const ALL: [Opcode; 34] = [
        Opcode::PushNum,
        Opcode::PushStr,
        Opcode::Load,
        Opcode::Store,
        Opcode::LoadGlobal,
        Opcode::StoreGlobal,
        Opcode::NewArr,
        Opcode::LoadIdx,
        Opcode::StoreIdx,
        Opcode::Add,
        Opcode::Sub,
        Opcode::Mul,
        Opcode::Div,
        Opcode::Mod,
        Opcode::Neg,
        Opcode::Concat,
        Opcode::NumToStr,
        Opcode::CmpEq,
        Opcode::CmpNe,
        Opcode::CmpLt,
        Opcode::CmpGt,
        Opcode::CmpLe,
        Opcode::CmpGe,
        Opcode::Jmp,
        Opcode::JmpIfFalse,
        Opcode::Call,
        Opcode::Ret,
        Opcode::Show,
        Opcode::Input,
        Opcode::NewObj,
        Opcode::GetField,
        Opcode::SetField,
        Opcode::Halt,
        Opcode::Pop,
    ];

    pub fn from_byte(b: u8) -> Option<Opcode> {
        Opcode::ALL.get(b.wrapping_sub(1) as usize).copied()
    }

    /// Operand bytes following the opcode.
    pub fn operand_len(self) -> usize {
        use Opcode::*;
        match self {
            PushNum | PushStr | Load | Store | LoadGlobal | StoreGlobal | NewObj | GetField
            | SetField => 2,
            NewArr | Call => 3,
            Jmp | JmpIfFalse => 4,
            Input => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        use Opcode::*;
        match self {
            PushNum => "PUSH_NUM",
            PushStr => "PUSH_STR",
            Load => "LOAD",
            Store => "STORE",
            LoadGlobal => "LOAD_GLOBAL",
            StoreGlobal => "STORE_GLOBAL",
            NewArr => "NEW_ARR",
            LoadIdx => "LOAD_IDX",
            StoreIdx => "STORE_IDX",
            Add => "ADD",
            Sub => "SUB",
            Mul => "MUL",
            Div => "DIV",
            Mod => "MOD",
            Neg => "NEG",
            Concat => "CONCAT",
            NumToStr => "NUM_TO_STR",
            CmpEq => "CMP_EQ",
            CmpNe => "CMP_NE",
            CmpLt => "CMP_LT",
            CmpGt => "CMP_GT",
            CmpLe => "CMP_LE",
            CmpGe => "CMP_GE",
            Jmp => "JMP",
            JmpIfFalse => "JMP_IF_FALSE",
            Call => "CALL",
            Ret => "RET",
            Show => "SHOW",
            Input => "INPUT",
            NewObj => "NEW_OBJ",
            GetField => "GET_FIELD",
            SetField => "SET_FIELD",
            Halt => "HALT",
            Pop => "POP",
        }
    }
}

/// Element or input kind operand: `0` number, `1` text.
pub const KIND_NUM: u8 = 0;
pub const KIND_STR: u8 = 1;

/// A decoded instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    PushNum(u16),
    PushStr(u16),
    Load(u16),
    Store(u16),
    LoadGlobal(u16),
    StoreGlobal(u16),
    NewArr { kind: u8, len: u16 },
    LoadIdx,
    StoreIdx,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Neg,
    Concat,
    NumToStr,
    CmpEq,
    CmpNe,
    CmpLt,
    CmpGt,
    CmpLe,
    CmpGe,
    Jmp(i32),
    JmpIfFalse(i32),
    Call { func: u16, argc: u8 },
    Ret,
    Show,
    Input(u8),
    NewObj(u16),
    GetField(u16),
    SetField(u16),
    Halt,
    Pop,
}

impl Instr {
    pub fn opcode(self) -> Opcode {
        use Instr::*;
        match self {
            PushNum(_) => Opcode::PushNum,
            PushStr(_) => Opcode::PushStr,
            Load(_) => Opcode::Load,
            Store(_) => Opcode::Store,
            LoadGlobal(_) => Opcode::LoadGlobal,
            StoreGlobal(_) => Opcode::StoreGlobal,
            NewArr { .. } => Opcode::NewArr,
            LoadIdx => Opcode::LoadIdx,
            StoreIdx => Opcode::StoreIdx,
            Add => Opcode::Add,
            Sub => Opcode::Sub,
            Mul => Opcode::Mul,
            Div => Opcode::Div,
            Mod => Opcode::Mod,
            Neg => Opcode::Neg,
            Concat => Opcode::Concat,
            NumToStr => Opcode::NumToStr,
            CmpEq => Opcode::CmpEq,
            CmpNe => Opcode::CmpNe,
            CmpLt => Opcode::CmpLt,
            CmpGt => Opcode::CmpGt,
            CmpLe => Opcode::CmpLe,
            CmpGe => Opcode::CmpGe,
            Jmp(_) => Opcode::Jmp,
            JmpIfFalse(_) => Opcode::JmpIfFalse,
            Call { .. } => Opcode::Call,
            Ret => Opcode::Ret,
            Show => Opcode::Show,
            Input(_) => Opcode::Input,
            NewObj(_) => Opcode::NewObj,
            GetField(_) => Opcode::GetField,
            SetField(_) => Opcode::SetField,
            Halt => Opcode::Halt,
            Pop => Opcode::Pop,
        }
    }

    pub fn encoded_len(self) -> usize {
        1 + self.opcode().operand_len()
    }

    pub fn encode(self, out: &mut Vec<u8>) {
        use Instr::*;
        out.push(self.opcode() as u8);
        match self {
            PushNum(x) | PushStr(x) | Load(x) | Store(x) | LoadGlobal(x) | StoreGlobal(x)
            | NewObj(x) | GetField(x) | SetField(x) => out.extend_from_slice(&x.to_le_bytes()),
            NewArr { kind, len } => {
                out.push(kind);
                out.extend_from_slice(&len.to_le_bytes());
            }
            Jmp(rel) | JmpIfFalse(rel) => out.extend_from_slice(&rel.to_le_bytes()),
            Call { func, argc } => {
                out.extend_from_slice(&func.to_le_bytes());
                out.push(argc);
            }
            Input(kind) => out.push(kind),
            _ => {}
        }
    }

    /// Decodes the instruction at `pos`; `None` on an unknown opcode or truncation.
    pub fn decode(code: &[u8], pos: usize) -> Option<Instr> {
        use Instr::*;
        let op = Opcode::from_byte(*code.get(pos)?)?;
        let operands = code.get(pos + 1..pos + 1 + op.operand_len())?;
        let u16_at = |i: usize| u16::from_le_bytes([operands[i], operands[i + 1]]);
        let i32_at = || i32::from_le_bytes([operands[0], operands[1], operands[2], operands[3]]);
        Some(match op {
            Opcode::PushNum => PushNum(u16_at(0)),
            Opcode::PushStr => PushStr(u16_at(0)),
            Opcode::Load => Load(u16_at(0)),
            Opcode::Store => Store(u16_at(0)),
            Opcode::LoadGlobal => LoadGlobal(u16_at(0)),
            Opcode::StoreGlobal => StoreGlobal(u16_at(0)),
            Opcode::NewArr => NewArr {
                kind: operands[0],
                len: u16_at(1),
            },
            Opcode::LoadIdx => LoadIdx,
            Opcode::StoreIdx => StoreIdx,
            Opcode::Add => Add,
            Opcode::Sub => Sub,
            Opcode::Mul => Mul,
            Opcode::Div => Div,
            Opcode::Mod => Mod,
            Opcode::Neg => Neg,
            Opcode::Concat => Concat,
            Opcode::NumToStr => NumToStr,
            Opcode::CmpEq => CmpEq,
            Opcode::CmpNe => CmpNe,
            Opcode::CmpLt => CmpLt,
            Opcode::CmpGt => CmpGt,
            Opcode::CmpLe => CmpLe,
            Opcode::CmpGe => CmpGe,
            Opcode::Jmp => Jmp(i32_at()),
            Opcode::JmpIfFalse => JmpIfFalse(i32_at()),
            Opcode::Call => Call {
                func: u16_at(0),
                argc: operands[2],
            },
            Opcode::Ret => Ret,
            Opcode::Show => Show,
            Opcode::Input => Input(operands[0]),
            Opcode::NewObj => NewObj(u16_at(0)),
            Opcode::GetField => GetField(u16_at(0)),
            Opcode::SetField => SetField(u16_at(0)),
            Opcode::Halt => Halt,
            Opcode::Pop => Pop,
        })
    }

    /// Net operand-stack effect as (pops, pushes).
    pub fn stack_effect(self) -> (usize, usize) {
        use Instr::*;
        match self {
            PushNum(_) | PushStr(_) | Load(_) | LoadGlobal(_) | NewArr { .. } | NewObj(_) => (0, 1),
            Store(_) | StoreGlobal(_) | Show | JmpIfFalse(_) | Pop | Ret => (1, 0),
            LoadIdx => (2, 1),
            StoreIdx => (3, 0),
            Add | Sub | Mul | Div | Mod | Concat | CmpEq | CmpNe | CmpLt | CmpGt | CmpLe
            | CmpGe => (2, 1),
            Neg | NumToStr | Input(_) | GetField(_) => (1, 1),
            SetField(_) => (2, 0),
            Call { argc, .. } => (argc as usize, 1),
            Jmp(_) | Halt => (0, 0),
        }
    }

    /// Control never falls through to the next instruction.
    pub fn is_terminator(self) -> bool {
        matches!(self, Instr::Jmp(_) | Instr::Ret | Instr::Halt)
    }
}

/// Decodes a whole chunk into `(offset, instruction)` pairs.
pub fn decode_all(code: &[u8]) -> Option<Vec<(usize, Instr)>> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < code.len() {
        let instr = Instr::decode(code, pos)?;
        out.push((pos, instr));
        pos += instr.encoded_len();
    }
    Some(out)
}

/// Absolute target of a jump at `offset`.
pub fn jump_target(offset: usize, rel: i32) -> i64 {
    offset as i64 + 5 + rel as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opcode_bytes_are_contiguous() {
        for (i, op) in Opcode::ALL.iter().enumerate() {
            assert_eq!(*op as u8, i as u8 + 1);
            assert_eq!(Opcode::from_byte(*op as u8), Some(*op));
        }
        assert_eq!(Opcode::from_byte(0), None);
        assert_eq!(Opcode::from_byte(0x23), None);
        assert_eq!(Opcode::Halt as u8, 0x21);
    }

    #[test]
    fn encode_decode_round_trip() {
        let all = [
            Instr::PushNum(513),
            Instr::NewArr {
                kind: KIND_STR,
                len: 40000,
            },
            Instr::Jmp(-17),
            Instr::JmpIfFalse(1 << 20),
            Instr::Call { func: 7, argc: 3 },
            Instr::Input(KIND_NUM),
            Instr::SetField(2),
            Instr::Halt,
        ];
        let mut code = Vec::new();
        for i in all {
            i.encode(&mut code);
        }
        let decoded: Vec<Instr> = decode_all(&code)
            .unwrap()
            .into_iter()
            .map(|(_, i)| i)
            .collect();
        assert_eq!(decoded, all);
        assert_eq!(&code[..3], &[0x01, 0x01, 0x02]);
        assert!(decode_all(&code[..code.len() - 2]).is_none());
        assert!(decode_all(&[0x01, 0x00]).is_none());
    }
}
