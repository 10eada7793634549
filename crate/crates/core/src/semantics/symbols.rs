//! Symbol table: an ordered chain of scopes (global → class → function → blocks).

use std::collections::HashMap;

use crate::diagnostic::{Diagnostic, Phase};
use crate::parser::ast::*;
use crate::source::Span;

pub type ScopeId = usize;
pub type SymbolId = usize;
pub type ClassId = u16;
pub type FuncId = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Variable,
    Array,
    Object,
    Function,
    Class,
    Parameter,
}

impl SymbolKind {
    pub fn is_storage(self) -> bool {
        matches!(
            self,
            SymbolKind::Variable | SymbolKind::Array | SymbolKind::Object | SymbolKind::Parameter
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolType {
    Num,
    Str,
    NumList,
    StrList,
    Class(ClassId),
    Entry,
}

impl From<TypeName> for SymbolType {
    fn from(t: TypeName) -> Self {
        match t {
            TypeName::Num => SymbolType::Num,
            TypeName::Str => SymbolType::Str,
            TypeName::NumList => SymbolType::NumList,
            TypeName::StrList => SymbolType::StrList,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    /// Value type for storage, return type for functions.
    pub data_type: SymbolType,
    pub decl_span: Span,
    pub scope: ScopeId,
    pub used: bool,
    /// Functions only.
    pub param_types: Vec<TypeName>,
    /// Class members only.
    pub access: Option<Access>,
    /// Local/global slot, or field index for class fields.
    pub slot: Option<u16>,
    pub array_len: Option<u16>,
    /// Function or class table index for `Function` / `Class` symbols.
    pub id: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeKind {
    Global,
    Class(ClassId),
    Function(FuncId),
    Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scope {
    pub kind: ScopeKind,
    pub parent: Option<ScopeId>,
    /// Insertion order is declaration order.
    pub symbols: Vec<SymbolId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntry {
    pub name: String,
    pub symbol: SymbolId,
    pub scope: ScopeId,
    pub fields: Vec<SymbolId>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuncEntry {
    pub symbol: SymbolId,
    pub scope: ScopeId,
    pub class: Option<ClassId>,
    pub slot_count: u16,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScopeStack {
    pub scopes: Vec<Scope>,
    pub symbols: Vec<Symbol>,
    /// Scope opened by each block, keyed by the offset of its `{`.
    pub block_scopes: HashMap<usize, ScopeId>,
    pub classes: Vec<ClassEntry>,
    pub functions: Vec<FuncEntry>,
    pub globals: Vec<SymbolId>,
    pub entry: Option<FuncId>,
}

pub const GLOBAL_SCOPE: ScopeId = 0;

impl ScopeStack {
    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id]
    }

    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id]
    }

    pub fn block_scope(&self, block: &Block) -> ScopeId {
        self.block_scopes[&block.span.start]
    }

    /// Names declared directly in a scope, in declaration order.
    pub fn names_in(&self, scope: ScopeId) -> Vec<&str> {
        self.scopes[scope]
            .symbols
            .iter()
            .map(|&s| self.symbols[s].name.as_str())
            .collect()
    }

    pub fn lookup_in(&self, scope: ScopeId, name: &str) -> Option<SymbolId> {
        self.scopes[scope]
            .symbols
            .iter()
            .copied()
            .find(|&s| self.symbols[s].name == name)
    }

    pub fn function_symbol(&self, f: FuncId) -> &Symbol {
        &self.symbols[self.functions[f as usize].symbol]
    }

    pub fn class_of_scope(&self, mut scope: ScopeId) -> Option<ClassId> {
        loop {
            if let ScopeKind::Class(c) = self.scopes[scope].kind {
                return Some(c);
            }
            scope = self.scopes[scope].parent?;
        }
    }

    pub fn function_of_scope(&self, mut scope: ScopeId) -> Option<FuncId> {
        loop {
            if let ScopeKind::Function(f) = self.scopes[scope].kind {
                return Some(f);
            }
            scope = self.scopes[scope].parent?;
        }
    }

    pub fn is_ancestor(&self, ancestor: ScopeId, mut scope: ScopeId) -> bool {
        loop {
            if scope == ancestor {
                return true;
            }
            match self.scopes[scope].parent {
                Some(p) => scope = p,
                None => return false,
            }
        }
    }

    /// Innermost storage symbol named `name` visible at offset `at`. Variables
    /// must be declared before the use; class fields are visible throughout.
    pub fn resolve_storage(&self, scope: ScopeId, name: &str, at: usize) -> Option<SymbolId> {
        let mut current = Some(scope);
        while let Some(id) = current {
            let s = &self.scopes[id];
            let is_class = matches!(s.kind, ScopeKind::Class(_));
            let hit = s.symbols.iter().copied().find(|&sym| {
                let sym = &self.symbols[sym];
                sym.name == name && sym.kind.is_storage() && (is_class || sym.decl_span.start < at)
            });
            if hit.is_some() {
                return hit;
            }
            current = s.parent;
        }
        None
    }

    /// Innermost function named `name`; declaration order does not matter.
    pub fn resolve_function(&self, scope: ScopeId, name: &str) -> Option<SymbolId> {
        let mut current = Some(scope);
        while let Some(id) = current {
            let s = &self.scopes[id];
            if let Some(hit) = s
                .symbols
                .iter()
                .copied()
                .find(|&sym| self.symbols[sym].name == name)
            {
                return (self.symbols[hit].kind == SymbolKind::Function).then_some(hit);
            }
            current = s.parent;
        }
        None
    }

    pub fn class_by_name(&self, name: &str) -> Option<ClassId> {
        self.classes
            .iter()
            .position(|c| c.name == name)
            .map(|i| i as ClassId)
    }
}

fn sem_error(code: &'static str, message: String, span: Span) -> Diagnostic {
    Diagnostic::error(Phase::Semantic, code, message, span)
}

struct Builder {
    table: ScopeStack,
    errors: Vec<Diagnostic>,
    next_local: u16,
}

impl Builder {
    fn new_scope(&mut self, kind: ScopeKind, parent: Option<ScopeId>) -> ScopeId {
        self.table.scopes.push(Scope {
            kind,
            parent,
            symbols: Vec::new(),
        });
        self.table.scopes.len() - 1
    }

    fn declare(&mut self, scope: ScopeId, sym: Symbol) -> Option<SymbolId> {
        if let Some(prev) = self.table.lookup_in(scope, &sym.name) {
            let prev_line = self.table.symbols[prev].decl_span.line;
            self.errors.push(sem_error(
                "E-SEM-004",
                format!(
                    "`{}` is already declared in this scope (line {prev_line})",
                    sym.name
                ),
                sym.decl_span,
            ));
            return None;
        }
        let id = self.table.symbols.len();
        self.table.symbols.push(Symbol { scope, ..sym });
        self.table.scopes[scope].symbols.push(id);
        Some(id)
    }

    fn storage_symbol(&mut self, decl: &Decl) -> Symbol {
        let (kind, data_type, array_len) = match decl {
            Decl::Var(v) => (SymbolKind::Variable, SymbolType::from(v.ty), None),
            Decl::Array(a) => {
                let len = array_len(a);
                (SymbolKind::Array, SymbolType::from(a.ty), len)
            }
            Decl::Object(o) => {
                let class = match self.table.class_by_name(&o.class_name.name) {
                    Some(c) => c,
                    None => {
                        self.errors.push(sem_error(
                            "E-SEM-005",
                            format!("unknown class `{}`", o.class_name.name),
                            o.class_name.span,
                        ));
                        0
                    }
                };
                (SymbolKind::Object, SymbolType::Class(class), None)
            }
        };
        Symbol {
            name: decl.name().name.clone(),
            kind,
            data_type,
            decl_span: decl.name().span,
            scope: 0,
            used: false,
            param_types: Vec::new(),
            access: None,
            slot: None,
            array_len,
            id: None,
        }
    }

    fn function_symbol(f: &FunctionDecl, id: FuncId, access: Option<Access>) -> Symbol {
        Symbol {
            name: f.name.name.clone(),
            kind: SymbolKind::Function,
            data_type: match f.return_type {
                ReturnType::Entry => SymbolType::Entry,
                ReturnType::Value(t) => t.into(),
            },
            decl_span: f.name.span,
            scope: 0,
            used: false,
            param_types: f.params.iter().map(|p| p.ty).collect(),
            access,
            slot: None,
            array_len: None,
            id: Some(id),
        }
    }

    fn check_signature(&mut self, f: &FunctionDecl) {
        for p in &f.params {
            if p.ty.is_list() {
                self.errors.push(sem_error(
                    "E-SEM-016",
                    format!(
                        "parameter `{}` cannot have list type {}",
                        p.name.name,
                        p.ty.name()
                    ),
                    p.name.span,
                ));
            }
        }
        if let ReturnType::Value(t) = f.return_type {
            if t.is_list() {
                self.errors.push(sem_error(
                    "E-SEM-016",
                    format!(
                        "function `{}` cannot return list type {}",
                        f.name.name,
                        t.name()
                    ),
                    f.name.span,
                ));
            }
        }
    }

    fn function_body(
        &mut self,
        f: &FunctionDecl,
        id: FuncId,
        parent: ScopeId,
        class: Option<ClassId>,
    ) {
        let scope = self.new_scope(ScopeKind::Function(id), Some(parent));
        self.table.block_scopes.insert(f.body.span.start, scope);
        self.next_local = if class.is_some() { 1 } else { 0 };
        for p in &f.params {
            let slot = self.next_local;
            self.next_local += 1;
            self.declare(
                scope,
                Symbol {
                    name: p.name.name.clone(),
                    kind: SymbolKind::Parameter,
                    data_type: p.ty.into(),
                    decl_span: p.name.span,
                    scope,
                    used: false,
                    param_types: Vec::new(),
                    access: None,
                    slot: Some(slot),
                    array_len: None,
                    id: None,
                },
            );
        }
        self.block_contents(&f.body, scope);
        let slot_count = self.next_local;
        self.table.functions[id as usize] = FuncEntry {
            scope,
            slot_count,
            ..self.table.functions[id as usize].clone()
        };
    }

    fn block_contents(&mut self, block: &Block, scope: ScopeId) {
        for stmt in &block.stmts {
            match &stmt.kind {
                StmtKind::Decl(d) => {
                    let mut sym = self.storage_symbol(d);
                    sym.slot = Some(self.next_local);
                    if self.declare(scope, sym).is_some() {
                        self.next_local += 1;
                    }
                }
                StmtKind::If {
                    then_block,
                    else_block,
                    ..
                } => {
                    self.nested(then_block, scope);
                    if let Some(b) = else_block {
                        self.nested(b, scope);
                    }
                }
                StmtKind::While { body, .. } => self.nested(body, scope),
                StmtKind::Block(b) => self.nested(b, scope),
                _ => {}
            }
        }
    }

    fn nested(&mut self, block: &Block, parent: ScopeId) {
        let scope = self.new_scope(ScopeKind::Block, Some(parent));
        self.table.block_scopes.insert(block.span.start, scope);
        self.block_contents(block, scope);
    }
}

/// Declared array length, when it is a valid `u16` integer.
pub fn array_len(a: &ArrayDecl) -> Option<u16> {
    (a.size.fract() == 0.0 && (0.0..=u16::MAX as f64).contains(&a.size)).then_some(a.size as u16)
}

/// Registers every declaration of the program in its scope.
pub fn build_symbols(program: &Program) -> Result<ScopeStack, Vec<Diagnostic>> {
    let mut b = Builder {
        table: ScopeStack::default(),
        errors: Vec::new(),
        next_local: 0,
    };
    let global = b.new_scope(ScopeKind::Global, None);

    // Classes and functions first, so object declarations and calls may refer forward.
    let mut func_ids = HashMap::new();
    let mut seen_entry = false;
    for item in &program.items {
        match item {
            Item::Class(c) => {
                let id = b.table.classes.len() as ClassId;
                let scope = b.new_scope(ScopeKind::Class(id), Some(global));
                b.table.classes.push(ClassEntry {
                    name: c.name.name.clone(),
                    symbol: usize::MAX,
                    scope,
                    fields: Vec::new(),
                    span: c.span,
                });
                let sym = Symbol {
                    name: c.name.name.clone(),
                    kind: SymbolKind::Class,
                    data_type: SymbolType::Class(id),
                    decl_span: c.name.span,
                    scope: global,
                    used: false,
                    param_types: Vec::new(),
                    access: None,
                    slot: None,
                    array_len: None,
                    id: Some(id),
                };
                if let Some(s) = b.declare(global, sym) {
                    b.table.classes[id as usize].symbol = s;
                }
                for m in &c.members {
                    if let MemberDecl::Method(f) = &m.decl {
                        func_ids.insert(f.span.start, b.table.functions.len() as FuncId);
                        b.table.functions.push(FuncEntry {
                            symbol: usize::MAX,
                            scope: 0,
                            class: Some(id),
                            slot_count: 0,
                        });
                    }
                }
            }
            Item::Function(f) => {
                let id = b.table.functions.len() as FuncId;
                func_ids.insert(f.span.start, id);
                b.table.functions.push(FuncEntry {
                    symbol: usize::MAX,
                    scope: 0,
                    class: None,
                    slot_count: 0,
                });
                // A second entry is reported once, by the entry check, not also as a redeclaration.
                let is_entry = f.return_type == ReturnType::Entry;
                if is_entry && std::mem::replace(&mut seen_entry, true) {
                    continue;
                }
                if let Some(s) = b.declare(global, Builder::function_symbol(f, id, None)) {
                    b.table.functions[id as usize].symbol = s;
                }
            }
            Item::Global(_) => {}
        }
    }

    // Class members.
    for item in &program.items {
        let Item::Class(c) = item else { continue };
        let id = b.table.class_by_name(&c.name.name).expect("registered");
        if b.table.classes[id as usize].span != c.span {
            continue; // duplicate class, already reported
        }
        let scope = b.table.classes[id as usize].scope;
        let mut field_index = 0u16;
        for m in &c.members {
            match &m.decl {
                MemberDecl::Field(d) => {
                    let mut sym = b.storage_symbol(d);
                    sym.access = Some(m.access);
                    sym.slot = Some(field_index);
                    if let Some(s) = b.declare(scope, sym) {
                        field_index += 1;
                        b.table.classes[id as usize].fields.push(s);
                    }
                }
                MemberDecl::Method(f) => {
                    let fid = func_ids[&f.span.start];
                    if f.return_type == ReturnType::Entry {
                        b.errors.push(sem_error(
                            "E-SEM-011",
                            format!("method `{}` cannot be the program entry", f.name.name),
                            f.name.span,
                        ));
                    }
                    if let Some(s) =
                        b.declare(scope, Builder::function_symbol(f, fid, Some(m.access)))
                    {
                        b.table.functions[fid as usize].symbol = s;
                    }
                }
            }
        }
    }

    // Globals, in textual order.
    let mut next_global = 0u16;
    for item in &program.items {
        if let Item::Global(d) = item {
            let mut sym = b.storage_symbol(d);
            sym.slot = Some(next_global);
            if let Some(s) = b.declare(global, sym) {
                next_global += 1;
                b.table.globals.push(s);
            }
        }
    }

    // Function scopes, parameters, and locals.
    for item in &program.items {
        match item {
            Item::Function(f) => {
                b.check_signature(f);
                b.function_body(f, func_ids[&f.span.start], global, None);
            }
            Item::Class(c) => {
                let Some(id) = b.table.class_by_name(&c.name.name) else {
                    continue;
                };
                let scope = b.table.classes[id as usize].scope;
                for m in &c.members {
                    if let MemberDecl::Method(f) = &m.decl {
                        b.check_signature(f);
                        b.function_body(f, func_ids[&f.span.start], scope, Some(id));
                    }
                }
            }
            Item::Global(_) => {}
        }
    }

    check_entry(&mut b, program, &func_ids);
    check_composition(&mut b);

    if b.errors.is_empty() {
        Ok(b.table)
    } else {
        Err(b.errors)
    }
}

fn check_entry(b: &mut Builder, program: &Program, func_ids: &HashMap<usize, FuncId>) {
    let entries: Vec<&FunctionDecl> = program
        .items
        .iter()
        .filter_map(|i| match i {
            Item::Function(f) if f.return_type == ReturnType::Entry => Some(f),
            _ => None,
        })
        .collect();
    match entries.as_slice() {
        [] => b.errors.push(Diagnostic::error(
            Phase::Semantic,
            "E-SEM-011",
            "program has no entry function (return type `البداية`)",
            Span::new(0, 0, 1, 1),
        )),
        [only] => {
            if !only.params.is_empty() {
                b.errors.push(sem_error(
                    "E-SEM-011",
                    format!("entry function `{}` cannot take parameters", only.name.name),
                    only.name.span,
                ));
            }
            b.table.entry = Some(func_ids[&only.span.start]);
        }
        [first, rest @ ..] => {
            for f in rest {
                b.errors.push(sem_error(
                    "E-SEM-011",
                    format!(
                        "second entry function `{}` (first is `{}`)",
                        f.name.name, first.name.name
                    ),
                    f.name.span,
                ));
            }
        }
    }
}

/// A class may not contain itself through object fields.
fn check_composition(b: &mut Builder) {
    let n = b.table.classes.len();
    let contains = |t: &ScopeStack, c: usize| -> Vec<(usize, Span)> {
        t.classes[c]
            .fields
            .iter()
            .filter_map(|&f| match t.symbols[f].data_type {
                SymbolType::Class(inner) if t.symbols[f].kind == SymbolKind::Object => {
                    Some((inner as usize, t.symbols[f].decl_span))
                }
                _ => None,
            })
            .collect()
    };
    for start in 0..n {
        let mut stack: Vec<usize> = contains(&b.table, start)
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        let mut seen = vec![false; n];
        while let Some(c) = stack.pop() {
            if c == start {
                let name = b.table.classes[start].name.clone();
                let span = contains(&b.table, start)[0].1;
                b.errors.push(sem_error(
                    "E-SEM-015",
                    format!("class `{name}` contains itself through its fields"),
                    span,
                ));
                break;
            }
            if c < n && !std::mem::replace(&mut seen[c], true) {
                stack.extend(contains(&b.table, c).into_iter().map(|(c, _)| c));
            }
        }
    }
}
