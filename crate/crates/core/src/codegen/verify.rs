//! Static stack-discipline check. Simulates operand-stack depth along every
//! control path: depth never goes negative, agrees wherever paths join, is 1
//! just before RET (the returned value) and 0 at HALT.

use std::collections::HashMap;

use super::opcode::{decode_all, jump_target, Instr};

/// Verifies a decoded chunk.
pub fn verify_chunk(instrs: &[(usize, Instr)]) -> Result<(), String> {
    match instrs.last() {
        Some((_, Instr::Ret | Instr::Halt)) => {}
        _ => return Err("chunk does not end in RET or HALT".into()),
    }
    let index_of: HashMap<usize, usize> = instrs
        .iter()
        .enumerate()
        .map(|(i, &(o, _))| (o, i))
        .collect();
    let mut depth_at: Vec<Option<usize>> = vec![None; instrs.len()];
    let mut work = vec![(0usize, 0usize)];
    while let Some((i, depth)) = work.pop() {
        let (offset, instr) = instrs[i];
        match depth_at[i] {
            Some(d) if d == depth => continue,
            Some(d) => {
                return Err(format!(
                    "stack depth {d} and {depth} meet at offset {offset:04}"
                ))
            }
            None => depth_at[i] = Some(depth),
        }
        match instr {
            Instr::Ret if depth != 1 => {
                return Err(format!(
                    "stack depth {depth} before RET at offset {offset:04}"
                ))
            }
            Instr::Halt if depth != 0 => {
                return Err(format!("stack depth {depth} at HALT at offset {offset:04}"))
            }
            _ => {}
        }
        let (pops, pushes) = instr.stack_effect();
        if depth < pops {
            return Err(format!("stack underflow at offset {offset:04}"));
        }
        let after = depth - pops + pushes;
        if let Instr::Jmp(rel) | Instr::JmpIfFalse(rel) = instr {
            let target = usize::try_from(jump_target(offset, rel))
                .ok()
                .and_then(|t| index_of.get(&t));
            let Some(&t) = target else {
                return Err(format!("jump at offset {offset:04} leaves the chunk"));
            };
            work.push((t, after));
        }
        if !instr.is_terminator() {
            if i + 1 == instrs.len() {
                return Err("control falls off the end of the chunk".into());
            }
            work.push((i + 1, after));
        }
    }
    Ok(())
}

/// Decodes and verifies raw chunk bytes.
pub fn verify_code(code: &[u8]) -> Result<(), String> {
    let instrs = decode_all(code).ok_or("undecodable code")?;
    verify_chunk(&instrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(instrs: &[Instr]) -> Vec<u8> {
        let mut out = Vec::new();
        instrs.iter().for_each(|i| i.encode(&mut out));
        out
    }

    #[test]
    fn balanced_code_passes() {
        use Instr::*;
        assert!(verify_code(&code(&[Halt])).is_ok());
        // while-loop shape: cond, exit jump, body, back jump
        let c = code(&[
            Load(0),
            PushNum(0),
            CmpLt,
            JmpIfFalse(15),
            Load(0),
            PushNum(1),
            Add,
            Store(0),
            Jmp(-27),
            Halt,
        ]);
        assert_eq!(verify_code(&c), Ok(()));
        assert!(verify_code(&code(&[PushNum(0), Ret])).is_ok());
    }

    #[test]
    fn violations_fail() {
        use Instr::*;
        assert!(verify_code(&code(&[Add, Halt]))
            .unwrap_err()
            .contains("underflow"));
        assert!(verify_code(&code(&[PushNum(0), Halt]))
            .unwrap_err()
            .contains("HALT"));
        assert!(verify_code(&code(&[Ret])).unwrap_err().contains("RET"));
        assert!(verify_code(&code(&[PushNum(0), Pop])).is_err());
        assert!(verify_code(&[]).is_err());
        // join with different depths: one branch pushes an extra value
        let c = code(&[PushNum(0), JmpIfFalse(3), PushNum(0), Halt]);
        assert!(verify_code(&c).is_err());
        assert!(verify_code(&code(&[Jmp(100), Halt]))
            .unwrap_err()
            .contains("leaves"));
    }
}
