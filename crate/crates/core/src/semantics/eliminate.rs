//! Dead-declaration elimination. A local or global variable that is never read
//! is removed together with every write to it, provided each of those writes is
//! free of side effects. Remaining slots are renumbered densely.

use super::typed::*;
use crate::diagnostic::{Diagnostic, Phase};

/// How a statement or expression touches a storage root.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Access {
    /// Whole-slot store of a side-effect-free value.
    PureWrite,
    /// Anything else: reads, element or field stores, inputs, effectful stores.
    Other,
}

fn is_pure(e: &TExpr) -> bool {
    match &e.kind {
        TExprKind::Literal(_) | TExprKind::Load(_) => true,
        TExprKind::ToStr(x) | TExprKind::Neg(x) => is_pure(x),
        TExprKind::Concat(l, r) => is_pure(l) && is_pure(r),
        // Arithmetic can trap, indexing can go out of bounds, calls do anything.
        TExprKind::Arith(..) | TExprKind::LoadIndex(..) | TExprKind::Call(_) => false,
    }
}

fn expr_roots(e: &TExpr, f: &mut impl FnMut(Root, Access)) {
    visit_expr(e, &mut |x| match &x.kind {
        TExprKind::Load(p) | TExprKind::LoadIndex(p, _) => f(p.root, Access::Other),
        TExprKind::Call(c) => {
            if let Some(r) = &c.receiver {
                f(r.root, Access::Other)
            }
        }
        _ => {}
    });
}

fn store_access(place: &Place, value: &TExpr) -> Access {
    if place.fields.is_empty() && is_pure(value) {
        Access::PureWrite
    } else {
        Access::Other
    }
}

/// Reports every storage root touched by `stmts`, with how it is touched.
fn roots(stmts: &[TStmt], f: &mut impl FnMut(Root, Access)) {
    for s in stmts {
        match s {
            TStmt::Assign { place, value } => {
                f(place.root, store_access(place, value));
                expr_roots(value, f);
            }
            TStmt::AssignIndex {
                place,
                index,
                value,
            } => {
                f(place.root, Access::Other);
                expr_roots(index, f);
                expr_roots(value, f);
            }
            TStmt::NewArray { place, .. } | TStmt::NewObject { place, .. } => {
                let access = if place.fields.is_empty() {
                    Access::PureWrite
                } else {
                    Access::Other
                };
                f(place.root, access)
            }
            TStmt::If {
                cond,
                then_body,
                else_body,
            } => {
                cond_roots(cond, f);
                roots(then_body, f);
                roots(else_body, f);
            }
            TStmt::While { cond, body } => {
                cond_roots(cond, f);
                roots(body, f);
            }
            TStmt::Show(e) => expr_roots(e, f),
            TStmt::Input { place, index, .. } => {
                f(place.root, Access::Other);
                if let Some(i) = index {
                    expr_roots(i, f);
                }
            }
            TStmt::Call(c) => {
                if let Some(r) = &c.receiver {
                    f(r.root, Access::Other);
                }
                c.args.iter().for_each(|a| expr_roots(a, f));
            }
            TStmt::Return(e) => {
                if let Some(e) = e {
                    expr_roots(e, f);
                }
            }
        }
    }
}

fn cond_roots(c: &TCond, f: &mut impl FnMut(Root, Access)) {
    match c {
        TCond::Cmp(_, l, r) => {
            expr_roots(l, f);
            expr_roots(r, f);
        }
        TCond::And(l, r) | TCond::Or(l, r) => {
            cond_roots(l, f);
            cond_roots(r, f);
        }
    }
}

/// Drops whole-slot writes to any root in `dead`.
fn remove_writes(stmts: &mut Vec<TStmt>, dead: &impl Fn(Root) -> bool) {
    stmts.retain(|s| match s {
        TStmt::Assign { place, .. }
        | TStmt::NewArray { place, .. }
        | TStmt::NewObject { place, .. } => !(place.fields.is_empty() && dead(place.root)),
        _ => true,
    });
    for s in stmts {
        match s {
            TStmt::If {
                then_body,
                else_body,
                ..
            } => {
                remove_writes(then_body, dead);
                remove_writes(else_body, dead);
            }
            TStmt::While { body, .. } => remove_writes(body, dead),
            _ => {}
        }
    }
}

fn remap_place(p: &mut Place, map: &impl Fn(Root) -> Root) {
    p.root = map(p.root);
}

fn remap_expr(e: &mut TExpr, map: &impl Fn(Root) -> Root) {
    match &mut e.kind {
        TExprKind::Literal(_) => {}
        TExprKind::Load(p) => remap_place(p, map),
        TExprKind::LoadIndex(p, i) => {
            remap_place(p, map);
            remap_expr(i, map);
        }
        TExprKind::Neg(x) | TExprKind::ToStr(x) => remap_expr(x, map),
        TExprKind::Arith(_, l, r) | TExprKind::Concat(l, r) => {
            remap_expr(l, map);
            remap_expr(r, map);
        }
        TExprKind::Call(c) => remap_call(c, map),
    }
}

fn remap_call(c: &mut TCall, map: &impl Fn(Root) -> Root) {
    if let Some(r) = &mut c.receiver {
        remap_place(r, map);
    }
    c.args.iter_mut().for_each(|a| remap_expr(a, map));
}

fn remap_cond(c: &mut TCond, map: &impl Fn(Root) -> Root) {
    match c {
        TCond::Cmp(_, l, r) => {
            remap_expr(l, map);
            remap_expr(r, map);
        }
        TCond::And(l, r) | TCond::Or(l, r) => {
            remap_cond(l, map);
            remap_cond(r, map);
        }
    }
}

fn remap(stmts: &mut [TStmt], map: &impl Fn(Root) -> Root) {
    for s in stmts {
        match s {
            TStmt::Assign { place, value } => {
                remap_place(place, map);
                remap_expr(value, map);
            }
            TStmt::AssignIndex {
                place,
                index,
                value,
            } => {
                remap_place(place, map);
                remap_expr(index, map);
                remap_expr(value, map);
            }
            TStmt::NewArray { place, .. } | TStmt::NewObject { place, .. } => {
                remap_place(place, map)
            }
            TStmt::If {
                cond,
                then_body,
                else_body,
            } => {
                remap_cond(cond, map);
                remap(then_body, map);
                remap(else_body, map);
            }
            TStmt::While { cond, body } => {
                remap_cond(cond, map);
                remap(body, map);
            }
            TStmt::Show(e) => remap_expr(e, map),
            TStmt::Input { place, index, .. } => {
                remap_place(place, map);
                if let Some(i) = index {
                    remap_expr(i, map);
                }
            }
            TStmt::Call(c) => remap_call(c, map),
            TStmt::Return(e) => {
                if let Some(e) = e {
                    remap_expr(e, map);
                }
            }
        }
    }
}

/// Dense renumbering that skips removed slots.
fn compaction(removed: &[bool]) -> Vec<u16> {
    let mut next = 0u16;
    removed
        .iter()
        .map(|&r| {
            let slot = next;
            if !r {
                next += 1;
            }
            slot
        })
        .collect()
}

fn warn(slot: &SlotInfo) -> Diagnostic {
    Diagnostic::warning(
        Phase::Semantic,
        "W-SEM-001",
        format!("variable `{}` is never used and was removed", slot.name),
        slot.span,
    )
}

/// Per-slot liveness for one storage class: `live[i]` once slot `i` is used
/// other than by side-effect-free whole-slot writes.
fn mark(live: &mut [bool], root: Root, access: Access, want_global: bool) {
    let slot = match (root, want_global) {
        (Root::Global(s), true) | (Root::Local(s), false) => s,
        _ => return,
    };
    if access == Access::Other {
        live[slot as usize] = true;
    }
}

/// Removes unused variables and returns the rewritten program with one
/// warning per removed declaration, in source order. Repeats until nothing
/// changes, since dropping a write can leave its operands unread.
pub fn eliminate_unused(mut tp: TypedProgram) -> (TypedProgram, Vec<Diagnostic>) {
    let mut warnings = Vec::new();
    while sweep(&mut tp, &mut warnings) {}
    warnings.sort_by_key(|w| w.span.map(|s| s.start));
    (tp, warnings)
}

fn sweep(tp: &mut TypedProgram, warnings: &mut Vec<Diagnostic>) -> bool {
    let before = warnings.len();

    // Globals: live if anything other than a pure whole-slot write touches them.
    let mut live = vec![false; tp.globals.len()];
    roots(&tp.global_init, &mut |r, a| mark(&mut live, r, a, true));
    for f in &tp.functions {
        roots(&f.body, &mut |r, a| mark(&mut live, r, a, true));
    }
    let removed: Vec<bool> = live.iter().map(|l| !l).collect();
    if removed.iter().any(|&r| r) {
        let is_dead = |r: Root| matches!(r, Root::Global(s) if removed[s as usize]);
        remove_writes(&mut tp.global_init, &is_dead);
        for f in &mut tp.functions {
            remove_writes(&mut f.body, &is_dead);
        }
        let new_slot = compaction(&removed);
        let map = |r: Root| match r {
            Root::Global(s) => Root::Global(new_slot[s as usize]),
            local => local,
        };
        remap(&mut tp.global_init, &map);
        for f in &mut tp.functions {
            remap(&mut f.body, &map);
        }
        let mut kept = Vec::new();
        for (slot, dead) in std::mem::take(&mut tp.globals).into_iter().zip(&removed) {
            if *dead {
                warnings.push(warn(&slot));
            } else {
                kept.push(slot);
            }
        }
        tp.globals = kept;
    }

    // Locals, per function; parameters and the receiver are never removed.
    for f in &mut tp.functions {
        let mut live = vec![false; f.locals.len()];
        live[..f.param_count as usize]
            .iter_mut()
            .for_each(|l| *l = true);
        roots(&f.body, &mut |r, a| mark(&mut live, r, a, false));
        let removed: Vec<bool> = live.iter().map(|l| !l).collect();
        if !removed.iter().any(|&r| r) {
            continue;
        }
        remove_writes(
            &mut f.body,
            &|r| matches!(r, Root::Local(s) if removed[s as usize]),
        );
        let new_slot = compaction(&removed);
        remap(&mut f.body, &|r| match r {
            Root::Local(s) => Root::Local(new_slot[s as usize]),
            global => global,
        });
        let mut kept = Vec::new();
        for (slot, dead) in std::mem::take(&mut f.locals).into_iter().zip(&removed) {
            if *dead {
                warnings.push(warn(&slot));
            } else {
                kept.push(slot);
            }
        }
        f.locals = kept;
    }
    warnings.len() > before
}
