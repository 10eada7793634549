//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

pub mod reference;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn entry(body: &str) -> String {
    format!("وظيفة رئيسية (-) : البداية\n{{\n{body}\n}}\nنهاية الوظيفة\n")
}

const KEYWORD_TEXT: &[&str] = &[
    "رقم",
    "كلمة",
    "قائمة-رقم",
    "قائمة-كلمة",
    "وظيفة",
    "نهاية الوظيفة",
    "نهاية  الوظيفة",
    "صنف",
    "عام",
    "خاص",
    "إذا",
    "أما عدا ذلك",
    "أما\tعدا ذلك",
    "كُرّر",
    "كرر",
    "أعرض",
    "أدخل",
    "إستدعاء",
    "عودة",
    "البداية",
    "قائمة",
    "نهاية",
    "أما",
];
const WORDS: &[&str] = &[
    "س",
    "عداد",
    "مجموع",
    "علامة",
    "ب_2",
    "رقمي",
    "كلمة1",
    "ذلك",
    "عدا",
    "الوظيفة",
];
const SYMBOLS: &[&str] = &[
    "+", "-", "*", "×", "/", "÷", "%", "&", "&&", "=", "==", "!", "!=", "<", "<=", ">", ">=", "|",
    "||", "(", ")", "{", "}", "[", "]", ",", "،", ";", "؛", ":", ".",
];
const NOISE: &[&str] = &["$", "@", "a", "#", "\u{0640}", "٫", "?"];
const HARAKAT: &[char] = &[
    '\u{064E}', '\u{064F}', '\u{0650}', '\u{0651}', '\u{0652}', '\u{064B}',
];

fn with_harakat(r: &mut impl Rng, word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        out.push(c);
        if r.gen_bool(0.15) {
            out.push(*HARAKAT.choose(r).unwrap());
        }
    }
    out
}

fn digits(r: &mut impl Rng, n: usize, indic: bool) -> String {
    (0..n)
        .map(|_| {
            let d = r.gen_range(0..10u32);
            if indic {
                char::from_u32(0x0660 + d).unwrap()
            } else {
                char::from_digit(d, 10).unwrap()
            }
        })
        .collect()
}

fn number(r: &mut impl Rng) -> String {
    let indic = r.gen_bool(0.2);
    let n = r.gen_range(1..4);
    let mut s = digits(r, n, indic);
    match r.gen_range(0..10) {
        0..=2 => {
            s.push('.');
            let n = r.gen_range(1..3);
            s += &digits(r, n, indic);
        }
        3 => s.push('.'),
        _ => {}
    }
    s
}

/// A random string over the Phoenix alphabet, mostly well formed, sometimes not.
pub fn lexer_input(r: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let n = r.gen_range(1..25);
    for _ in 0..n {
        let piece = match r.gen_range(0..100) {
            0..=19 => {
                let k = *KEYWORD_TEXT.choose(r).unwrap();
                with_harakat(r, k)
            }
            20..=39 => {
                let w = *WORDS.choose(r).unwrap();
                with_harakat(r, w)
            }
            40..=54 => number(r),
            55..=74 => SYMBOLS.choose(r).unwrap().to_string(),
            75..=81 => {
                let body: String = WORDS.choose(r).unwrap().to_string();
                if r.gen_bool(0.1) {
                    format!("\"{body}")
                } else {
                    format!("\"{} {body}\"", with_harakat(r, "نص"))
                }
            }
            82..=84 => "// تعليق \"x\"\n".to_string(),
            85..=87 => "\n".to_string(),
            88..=89 => HARAKAT.choose(r).unwrap().to_string(),
            90..=91 => NOISE.choose(r).unwrap().to_string(),
            _ => "\t".to_string(),
        };
        out += &piece;
        match r.gen_range(0..10) {
            0..=5 => out.push(' '),
            6 => out.push('\n'),
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Num,
    Str,
    NumArr(usize),
    StrArr(usize),
    Obj,
}

#[derive(Debug, Clone)]
struct Var {
    name: String,
    kind: Kind,
    /// Loop counters are never reassigned by generated statements.
    fixed: bool,
}

#[derive(Debug, Clone)]
struct Func {
    name: String,
    params: Vec<Kind>,
    ret: Kind,
}

const CLASS: &str = "عداد";
const STR_LITS: &[&str] = &["", "أ", "مرحبا", "نص طويل", "س ص", "١٢"];

/// Generates well-typed programs with straight-line code, branches, bounded
/// loops, function calls, arrays, one optional class and scripted input.
pub struct ProgramGen {
    rng: ChaCha8Rng,
    next: usize,
    scopes: Vec<Vec<Var>>,
    funcs: Vec<Func>,
    /// Functions callable from the body being generated.
    callable: usize,
    has_class: bool,
    in_method: bool,
    depth: usize,
    loop_depth: usize,
}

pub struct Generated {
    pub source: String,
    pub inputs: Vec<String>,
}

impl ProgramGen {
    pub fn new(seed: u64) -> Self {
        ProgramGen {
            rng: rng(seed),
            next: 0,
            scopes: Vec::new(),
            funcs: Vec::new(),
            callable: 0,
            has_class: false,
            in_method: false,
            depth: 0,
            loop_depth: 0,
        }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn declare(&mut self, name: &str, kind: Kind, fixed: bool) {
        self.scopes.last_mut().unwrap().push(Var {
            name: name.to_string(),
            kind,
            fixed,
        });
    }

    fn vars(&self, pred: impl Fn(&Var) -> bool) -> Vec<Var> {
        self.scopes
            .iter()
            .flatten()
            .filter(|v| pred(v))
            .cloned()
            .collect()
    }

    fn pick(&mut self, pred: impl Fn(&Var) -> bool) -> Option<Var> {
        let vs = self.vars(pred);
        vs.choose(&mut self.rng).cloned()
    }

    pub fn program(mut self) -> Generated {
        let mut out = String::new();
        self.scopes.push(Vec::new());
        for _ in 0..self.rng.gen_range(0..3) {
            let name = self.fresh("ع");
            let v = self.rng.gen_range(0..5);
            out += &format!("رقم {name} = {v} ;\n");
            self.declare(&name, Kind::Num, false);
        }
        if self.chance(0.3) {
            out += &self.class();
        }
        for _ in 0..self.rng.gen_range(0..4) {
            out += &self.function();
        }
        self.callable = self.funcs.len();
        self.scopes.push(Vec::new());
        let body = self.block_body(1);
        self.scopes.pop();
        out += &format!("وظيفة رئيسية (-) : البداية\n{{\n{body}}}\nنهاية الوظيفة\n");
        let inputs = (0..self.rng.gen_range(0..10))
            .map(|_| self.input_line())
            .collect();
        Generated {
            source: out,
            inputs,
        }
    }

    fn input_line(&mut self) -> String {
        match self.rng.gen_range(0..20) {
            0 => "كلام".into(),
            1 => "١٥".into(),
            2 => " -2.5 ".into(),
            _ => self.rng.gen_range(0..30).to_string(),
        }
    }

    fn class(&mut self) -> String {
        self.has_class = true;
        self.in_method = true;
        self.scopes.push(vec![
            Var {
                name: "قيمة".into(),
                kind: Kind::Num,
                fixed: false,
            },
            Var {
                name: "وسم".into(),
                kind: Kind::Str,
                fixed: false,
            },
            Var {
                name: "م".into(),
                kind: Kind::Num,
                fixed: false,
            },
        ]);
        let extra = if self.chance(0.5) {
            format!("    أعرض : {} ;\n", self.str_expr(1))
        } else {
            String::new()
        };
        self.scopes.pop();
        self.in_method = false;
        format!(
            "صنف {CLASS}\n{{\n    عام رقم قيمة = {} ;\n    خاص كلمة وسم = \"{}\" ;\n    عام وظيفة زد (رقم م) : رقم\n    {{\n{extra}        قيمة = قيمة + م ;\n        عودة : قيمة ;\n    }}\n    نهاية الوظيفة\n}}\n",
            self.rng.gen_range(0..5),
            STR_LITS.choose(&mut self.rng).unwrap(),
        )
    }

    fn function(&mut self) -> String {
        let name = self.fresh("د");
        let params: Vec<Kind> = (0..self.rng.gen_range(0..3))
            .map(|_| {
                if self.chance(0.7) {
                    Kind::Num
                } else {
                    Kind::Str
                }
            })
            .collect();
        let ret = if self.chance(0.7) {
            Kind::Num
        } else {
            Kind::Str
        };
        self.callable = self.funcs.len();
        self.scopes.push(Vec::new());
        let mut header = Vec::new();
        for &k in &params {
            let p = self.fresh("م");
            header.push(format!(
                "{} {p}",
                if k == Kind::Num { "رقم" } else { "كلمة" }
            ));
            self.declare(&p, k, false);
        }
        let mut body = self.block_body(1);
        let value = if ret == Kind::Num {
            self.num_expr(2)
        } else {
            self.str_expr(2)
        };
        body += &format!("    عودة : {value} ;\n");
        self.scopes.pop();
        self.funcs.push(Func {
            name: name.clone(),
            params,
            ret,
        });
        let header = if header.is_empty() {
            "-".to_string()
        } else {
            header.join(" ، ")
        };
        let ret = if ret == Kind::Num {
            "رقم"
        } else {
            "كلمة"
        };
        format!("وظيفة {name} ({header}) : {ret}\n{{\n{body}}}\nنهاية الوظيفة\n")
    }

    fn indent(&self) -> String {
        "    ".repeat(self.depth)
    }

    fn block_body(&mut self, depth: usize) -> String {
        let saved = self.depth;
        self.depth = depth;
        let mut out = String::new();
        let n = self.rng.gen_range(1..6);
        for _ in 0..n {
            out += &self.stmt();
        }
        self.depth = saved;
        out
    }

    fn block(&mut self) -> String {
        self.scopes.push(Vec::new());
        let body = self.block_body(self.depth + 1);
        self.scopes.pop();
        let ind = self.indent();
        format!("{ind}{{\n{body}{ind}}}\n")
    }

    fn stmt(&mut self) -> String {
        let ind = self.indent();
        let nested = self.depth < 4;
        loop {
            let text = match self.rng.gen_range(0..100) {
                0..=14 => self.decl(),
                15..=34 => self.assign(),
                35..=49 => {
                    let e = if self.chance(0.5) {
                        self.num_expr(2)
                    } else {
                        self.str_expr(2)
                    };
                    Some(format!("أعرض : {e} ;\n"))
                }
                50..=57 => self.input(),
                58..=69 if nested => {
                    let cond = self.cond(2);
                    let then = self.block();
                    let els = if self.chance(0.4) {
                        format!("{ind}أما عدا ذلك\n{}", self.block())
                    } else {
                        String::new()
                    };
                    Some(format!("إذا : {cond}\n{then}{els}"))
                }
                70..=79 if nested && self.loop_depth < 2 => Some(self.while_loop()),
                80..=87 => self.call_stmt(),
                88..=90 if nested => Some(format!("\n{}", self.block().trim_start())),
                _ => continue,
            };
            if let Some(t) = text {
                return format!("{ind}{t}");
            }
        }
    }

    fn decl(&mut self) -> Option<String> {
        Some(match self.rng.gen_range(0..10) {
            0..=3 => {
                let name = self.fresh("س");
                let v = if self.chance(0.2) {
                    format!("-{}", self.rng.gen_range(1..9))
                } else {
                    self.num_lit()
                };
                self.declare(&name, Kind::Num, false);
                format!("رقم {name} = {v} ;\n")
            }
            4..=5 => {
                let name = self.fresh("ن");
                let v = STR_LITS.choose(&mut self.rng).unwrap();
                self.declare(&name, Kind::Str, false);
                format!("كلمة {name} = \"{v}\" ;\n")
            }
            6..=7 => {
                let name = self.fresh("ق");
                let len = self.rng.gen_range(1..5);
                let numeric = self.chance(0.6);
                let init = if self.chance(0.5) {
                    let items: Vec<String> = (0..len)
                        .map(|_| {
                            if numeric {
                                self.num_lit()
                            } else {
                                format!("\"{}\"", STR_LITS.choose(&mut self.rng).unwrap())
                            }
                        })
                        .collect();
                    format!(" = {{ {} }}", items.join(" ، "))
                } else {
                    String::new()
                };
                let (ty, kind) = if numeric {
                    ("قائمة-رقم", Kind::NumArr(len))
                } else {
                    ("قائمة-كلمة", Kind::StrArr(len))
                };
                self.declare(&name, kind, false);
                format!("{ty} {name}[{len}]{init} ;\n")
            }
            _ if self.has_class && !self.in_method => {
                let name = self.fresh("ك");
                self.declare(&name, Kind::Obj, false);
                format!("{CLASS} {name} ;\n")
            }
            _ => return None,
        })
    }

    fn index(&mut self, len: usize) -> String {
        match self.rng.gen_range(0..20) {
            0 => len.to_string(),
            1 => "-1".to_string(),
            2..=4 => match self.pick(|v| v.kind == Kind::Num) {
                Some(v) => format!("{} % {len}", v.name),
                None => "0".into(),
            },
            _ => self.rng.gen_range(0..len).to_string(),
        }
    }

    fn assign(&mut self) -> Option<String> {
        let target = self.pick(|v| !v.fixed)?;
        Some(match target.kind {
            Kind::Num => format!("{} = {} ;\n", target.name, self.num_expr(2)),
            Kind::Str => format!("{} = {} ;\n", target.name, self.str_expr(2)),
            Kind::NumArr(n) => format!(
                "{}[{}] = {} ;\n",
                target.name,
                self.index(n),
                self.num_expr(2)
            ),
            Kind::StrArr(n) => format!(
                "{}[{}] = {} ;\n",
                target.name,
                self.index(n),
                self.str_expr(2)
            ),
            Kind::Obj => format!("{}.قيمة = {} ;\n", target.name, self.num_expr(2)),
        })
    }

    fn input(&mut self) -> Option<String> {
        let target =
            self.pick(|v| !v.fixed && matches!(v.kind, Kind::Num | Kind::Str | Kind::NumArr(_)))?;
        let place = match target.kind {
            Kind::NumArr(n) => format!("{}[{}]", target.name, self.index(n)),
            _ => target.name.clone(),
        };
        let prompt = STR_LITS.choose(&mut self.rng).unwrap();
        Some(format!("أدخل : {place} ، \"{prompt}\" ;\n"))
    }

    fn while_loop(&mut self) -> String {
        let counter = self.fresh("ع");
        let bound = self.rng.gen_range(0..5);
        let ind = self.indent();
        self.declare(&counter, Kind::Num, true);
        self.loop_depth += 1;
        self.scopes.push(Vec::new());
        let mut body = self.block_body(self.depth + 1);
        self.scopes.pop();
        self.loop_depth -= 1;
        body += &format!("{ind}    {counter} = {counter} + 1 ;\n");
        format!("رقم {counter} = 0 ;\n{ind}كُرّر : {counter} < {bound}\n{ind}{{\n{body}{ind}}}\n")
    }

    fn call_expr(&mut self, ret: Kind) -> Option<String> {
        let candidates: Vec<Func> = self.funcs[..self.callable]
            .iter()
            .filter(|f| f.ret == ret)
            .cloned()
            .collect();
        let f = candidates.choose(&mut self.rng)?.clone();
        Some(format!("إستدعاء {}", self.call_text(&f)))
    }

    fn call_text(&mut self, f: &Func) -> String {
        if f.params.is_empty() {
            return format!("{}(-)", f.name);
        }
        let args: Vec<String> = f
            .params
            .iter()
            .map(|&k| {
                if k == Kind::Num {
                    self.num_expr(1)
                } else {
                    self.str_expr(1)
                }
            })
            .collect();
        format!("{}({})", f.name, args.join(" ، "))
    }

    fn call_stmt(&mut self) -> Option<String> {
        if self.chance(0.3) {
            if let Some(o) = self.pick(|v| v.kind == Kind::Obj) {
                return Some(format!("إستدعاء : {}.زد({}) ;\n", o.name, self.num_expr(1)));
            }
        }
        let fs: Vec<Func> = self.funcs[..self.callable].to_vec();
        let f = fs.choose(&mut self.rng)?.clone();
        Some(format!("إستدعاء : {} ;\n", self.call_text(&f)))
    }

    fn num_lit(&mut self) -> String {
        if self.chance(0.15) {
            format!(
                "{}.{}",
                self.rng.gen_range(0..10),
                self.rng.gen_range(1..10)
            )
        } else {
            self.rng.gen_range(0..12).to_string()
        }
    }

    fn num_atom(&mut self, depth: usize) -> String {
        loop {
            let text = match self.rng.gen_range(0..12) {
                0..=3 => Some(self.num_lit()),
                4..=7 => self.pick(|v| v.kind == Kind::Num).map(|v| v.name),
                8 => self.pick(|v| matches!(v.kind, Kind::NumArr(_))).map(|v| {
                    let Kind::NumArr(n) = v.kind else {
                        unreachable!()
                    };
                    format!("{}[{}]", v.name, self.index(n))
                }),
                9 if depth > 0 => self.call_expr(Kind::Num),
                10 if depth > 0 => self.pick(|v| v.kind == Kind::Obj).map(|o| {
                    if self.chance(0.5) {
                        format!("{}.قيمة", o.name)
                    } else {
                        format!("إستدعاء {}.زد({})", o.name, self.num_expr(0))
                    }
                }),
                11 if depth > 0 => Some(format!("-{}", self.num_atom(depth - 1))),
                _ => None,
            };
            if let Some(t) = text {
                return t;
            }
        }
    }

    fn num_expr(&mut self, depth: usize) -> String {
        if depth == 0 || self.chance(0.4) {
            return self.num_atom(depth);
        }
        let op = *["+", "-", "×", "÷", "%"].choose(&mut self.rng).unwrap();
        let lhs = self.num_expr(depth - 1);
        let rhs = if matches!(op, "÷" | "%") && self.chance(0.8) {
            self.rng.gen_range(1..7).to_string()
        } else {
            self.num_expr(depth - 1)
        };
        format!("({lhs} {op} {rhs})")
    }

    fn str_atom(&mut self, depth: usize) -> String {
        loop {
            let text = match self.rng.gen_range(0..8) {
                0..=2 => Some(format!("\"{}\"", STR_LITS.choose(&mut self.rng).unwrap())),
                3..=5 => self.pick(|v| v.kind == Kind::Str).map(|v| v.name),
                6 => self.pick(|v| matches!(v.kind, Kind::StrArr(_))).map(|v| {
                    let Kind::StrArr(n) = v.kind else {
                        unreachable!()
                    };
                    format!("{}[{}]", v.name, self.index(n))
                }),
                7 if depth > 0 => self.call_expr(Kind::Str),
                _ => None,
            };
            if let Some(t) = text {
                return t;
            }
        }
    }

    fn str_expr(&mut self, depth: usize) -> String {
        if depth == 0 || self.chance(0.4) {
            return self.str_atom(depth);
        }
        let lhs = self.str_expr(depth - 1);
        let rhs = if self.chance(0.5) {
            self.num_expr(depth - 1)
        } else {
            self.str_expr(depth - 1)
        };
        if self.chance(0.5) {
            format!("{lhs} & {rhs}")
        } else {
            format!("{rhs} & {lhs}")
        }
    }

    fn cond(&mut self, depth: usize) -> String {
        if depth > 0 && self.chance(0.3) {
            let op = if self.chance(0.5) { "&&" } else { "||" };
            let (a, b) = (self.cond(depth - 1), self.cond(depth - 1));
            return if self.chance(0.3) {
                format!("({a} {op} {b})")
            } else {
                format!("{a} {op} {b}")
            };
        }
        if self.chance(0.2) {
            let op = if self.chance(0.5) { "==" } else { "!=" };
            return format!("{} {op} {}", self.str_expr(1), self.str_expr(1));
        }
        let op = *["==", "!=", "<", ">", "<=", ">="]
            .choose(&mut self.rng)
            .unwrap();
        format!("{} {op} {}", self.num_expr(1), self.num_expr(1))
    }
}
