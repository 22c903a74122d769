//! The `.wstar` script language: one statement per line, `#` to end of line
//! is a comment.
//!
//! ```text
//! algebra A = [2,1]
//! elem x in A = { [[1+2i, 0], [0, 1]] ; [[3]] }
//! hom f : A -> B = mult [[1,1]] unitary default
//! tensor T = A (x) B
//! product P = A * B
//! mediator m = mediate(f, g)
//! check cross_norm A B trials=100 seed=7 tol=1e-9
//! report json out.json
//! ```

use std::fmt::{self, Write as _};

use crate::error::Error;
use crate::C64;

const KEYWORDS: &[&str] = &[
    "algebra", "elem", "hom", "tensor", "product", "mediator", "check", "report", "in", "mult", "unitary",
    "default", "mediate", "json",
];

#[derive(Clone, Debug, PartialEq)]
pub enum UnitarySpec {
    Default,
    /// An element of the target algebra whose blocks are the unitaries.
    Named(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Algebra {
        name: String,
        sizes: Vec<usize>,
    },
    Elem {
        name: String,
        algebra: String,
        blocks: Vec<Vec<Vec<C64>>>,
    },
    Hom {
        name: String,
        source: String,
        target: String,
        counts: Vec<Vec<usize>>,
        unitary: UnitarySpec,
    },
    Tensor {
        name: String,
        left: String,
        right: String,
    },
    Product {
        name: String,
        factors: Vec<String>,
    },
    Mediator {
        name: String,
        left: String,
        right: String,
    },
    Check {
        suite: String,
        args: Vec<String>,
        trials: Option<usize>,
        seed: Option<u64>,
        tol: Option<f64>,
        inject: Option<f64>,
    },
    Report {
        path: String,
    },
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Parsed statements with the position of each. Equality ignores positions.
#[derive(Clone, Debug, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
    pub positions: Vec<Pos>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Script {
    pub fn new(statements: Vec<Statement>) -> Self {
        let positions = (1..=statements.len()).map(|line| Pos { line, col: 1 }).collect();
        Self { statements, positions }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ScriptError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: name error: {message}")]
    Name { pos: Pos, message: String },
    #[error("{pos}: type error: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: {source}")]
    Invalid { pos: Pos, source: Error },
}

impl ScriptError {
    pub fn pos(&self) -> Pos {
        match self {
            ScriptError::Syntax { pos, .. }
            | ScriptError::Name { pos, .. }
            | ScriptError::Type { pos, .. }
            | ScriptError::Invalid { pos, .. } => *pos,
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    at: usize,
    line: usize,
}

type PResult<T> = std::result::Result<T, ScriptError>;

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            at: 0,
            line,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.at + 1,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ScriptError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].is_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.at + n <= self.chars.len() && self.chars[self.at..self.at + n].iter().copied().eq(s.chars()) {
            self.at += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of line".to_string(), |c| format!("'{c}'"));
            self.err(format!("expected '{s}', found {found}"))
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.chars.len() && (self.chars[self.at].is_alphanumeric() || self.chars[self.at] == '_') {
            if self.at == start && self.chars[self.at].is_ascii_digit() {
                break;
            }
            self.at += 1;
        }
        (self.at > start).then(|| self.chars[start..self.at].iter().collect())
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let save = self.at;
        match self.word() {
            Some(w) if w == kw => Ok(()),
            _ => {
                self.at = save;
                self.skip_ws();
                self.err(format!("expected '{kw}'"))
            }
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let save = self.at;
        match self.word() {
            Some(w) if !KEYWORDS.contains(&w.as_str()) => Ok(w),
            Some(w) => {
                self.at = save;
                self.err(format!("'{w}' is a keyword"))
            }
            None => self.err("expected an identifier"),
        }
    }

    /// Unsigned decimal float, digits with optional fraction and exponent.
    fn unsigned_float(&mut self) -> Option<f64> {
        self.skip_ws();
        let start = self.at;
        let digits = |c: &mut Self| {
            let s = c.at;
            while c.at < c.chars.len() && c.chars[c.at].is_ascii_digit() {
                c.at += 1;
            }
            c.at > s
        };
        let int = digits(self);
        let mut frac = false;
        if self.chars.get(self.at) == Some(&'.') {
            self.at += 1;
            frac = digits(self);
        }
        if !int && !frac {
            self.at = start;
            return None;
        }
        if matches!(self.chars.get(self.at), Some('e' | 'E')) {
            let save = self.at;
            self.at += 1;
            if matches!(self.chars.get(self.at), Some('+' | '-')) {
                self.at += 1;
            }
            if !digits(self) {
                self.at = save;
            }
        }
        let text: String = self.chars[start..self.at].iter().collect();
        text.parse().ok()
    }

    fn signed_float(&mut self) -> PResult<f64> {
        let neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        match self.unsigned_float() {
            Some(v) => Ok(if neg { -v } else { v }),
            None => self.err("expected a number"),
        }
    }

    fn integer<T: std::str::FromStr>(&mut self) -> PResult<T> {
        self.skip_ws();
        let start = self.at;
        if self.chars.get(self.at) == Some(&'-') {
            self.at += 1;
        }
        while self.at < self.chars.len() && self.chars[self.at].is_ascii_digit() {
            self.at += 1;
        }
        let text: String = self.chars[start..self.at].iter().collect();
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.at = start;
                self.err("expected an integer")
            }
        }
    }

    /// `a`, `bi`, `a+bi`, `a-bi`, with optional leading signs; `i` alone is
    /// the imaginary unit.
    fn complex(&mut self) -> PResult<C64> {
        self.skip_ws();
        let start = self.at;
        let sign = |c: &mut Self| -> f64 {
            if c.eat("-") {
                -1.0
            } else {
                c.eat("+");
                1.0
            }
        };
        let s1 = sign(self);
        let v1 = self.unsigned_float();
        if self.chars.get(self.at) == Some(&'i') {
            self.at += 1;
            return Ok(C64::new(0.0, s1 * v1.unwrap_or(1.0)));
        }
        let Some(re) = v1 else {
            self.at = start;
            return self.err("expected a complex number");
        };
        let save = self.at;
        self.skip_ws();
        if matches!(self.chars.get(self.at), Some('+' | '-')) {
            let s2 = sign(self);
            let v2 = self.unsigned_float();
            if self.chars.get(self.at) == Some(&'i') {
                self.at += 1;
                return Ok(C64::new(s1 * re, s2 * v2.unwrap_or(1.0)));
            }
            return self.err("expected an imaginary part ending in 'i'");
        }
        self.at = save;
        Ok(C64::new(s1 * re, 0.0))
    }

    fn list<T>(&mut self, open: &str, close: &str, sep: &str, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(sep)?;
        }
    }

    fn rest(&mut self) -> String {
        self.skip_ws();
        let s: String = self.chars[self.at..].iter().collect();
        self.at = self.chars.len();
        s.trim_end().to_string()
    }
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

/// Parses a script. Block sizes are checked here, so `[0]` is reported
/// with its position.
pub fn parse(text: &str) -> Result<Script, ScriptError> {
    let mut script = Script::default();
    for (k, raw) in text.lines().enumerate() {
        let mut c = Cursor::new(strip_comment(raw), k + 1);
        if c.at_end() {
            continue;
        }
        let pos = c.pos();
        let stmt = statement(&mut c)?;
        if !c.at_end() {
            return c.err("unexpected trailing input");
        }
        script.statements.push(stmt);
        script.positions.push(pos);
    }
    Ok(script)
}

fn statement(c: &mut Cursor) -> PResult<Statement> {
    let save = c.at;
    let Some(head) = c.word() else {
        return c.err("expected a statement keyword");
    };
    match head.as_str() {
        "algebra" => {
            let name = c.ident()?;
            c.expect("=")?;
            c.expect("[")?;
            let mut sizes = Vec::new();
            if !c.eat("]") {
                loop {
                    c.skip_ws();
                    let at = c.pos();
                    let n: i64 = c.integer()?;
                    if n <= 0 {
                        return Err(ScriptError::Invalid {
                            pos: at,
                            source: Error::NonPositiveBlockSize {
                                index: sizes.len(),
                                size: n,
                            },
                        });
                    }
                    sizes.push(n as usize);
                    if c.eat("]") {
                        break;
                    }
                    c.expect(",")?;
                }
            }
            Ok(Statement::Algebra { name, sizes })
        }
        "elem" => {
            let name = c.ident()?;
            c.keyword("in")?;
            let algebra = c.ident()?;
            c.expect("=")?;
            let blocks = c.list("{", "}", ";", |c| c.list("[", "]", ",", |c| c.list("[", "]", ",", Cursor::complex)))?;
            Ok(Statement::Elem { name, algebra, blocks })
        }
        "hom" => {
            let name = c.ident()?;
            c.expect(":")?;
            let source = c.ident()?;
            c.expect("->")?;
            let target = c.ident()?;
            c.expect("=")?;
            c.keyword("mult")?;
            let counts = c.list("[", "]", ",", |c| c.list("[", "]", ",", |c| c.integer::<usize>()))?;
            c.keyword("unitary")?;
            let save = c.at;
            let unitary = match c.word() {
                Some(w) if w == "default" => UnitarySpec::Default,
                _ => {
                    c.at = save;
                    UnitarySpec::Named(c.ident()?)
                }
            };
            Ok(Statement::Hom {
                name,
                source,
                target,
                counts,
                unitary,
            })
        }
        "tensor" => {
            let name = c.ident()?;
            c.expect("=")?;
            let left = c.ident()?;
            c.expect("(x)")?;
            let right = c.ident()?;
            Ok(Statement::Tensor { name, left, right })
        }
        "product" => {
            let name = c.ident()?;
            c.expect("=")?;
            let mut factors = vec![c.ident()?];
            while c.eat("*") {
                factors.push(c.ident()?);
            }
            Ok(Statement::Product { name, factors })
        }
        "mediator" => {
            let name = c.ident()?;
            c.expect("=")?;
            c.keyword("mediate")?;
            c.expect("(")?;
            let left = c.ident()?;
            c.expect(",")?;
            let right = c.ident()?;
            c.expect(")")?;
            Ok(Statement::Mediator { name, left, right })
        }
        "check" => {
            let suite = c.ident()?;
            let (mut args, mut trials, mut seed, mut tol, mut inject) = (Vec::new(), None, None, None, None);
            while !c.at_end() {
                let at = c.at;
                let w = c.ident()?;
                if !c.eat("=") {
                    args.push(w);
                    continue;
                }
                match w.as_str() {
                    "trials" => trials = Some(c.integer()?),
                    "seed" => seed = Some(c.integer()?),
                    "tol" => tol = Some(c.signed_float()?),
                    "inject" => inject = Some(c.signed_float()?),
                    _ => {
                        c.at = at;
                        c.skip_ws();
                        return c.err(format!("unknown parameter '{w}'"));
                    }
                }
            }
            Ok(Statement::Check {
                suite,
                args,
                trials,
                seed,
                tol,
                inject,
            })
        }
        "report" => {
            c.keyword("json")?;
            let path = c.rest();
            if path.is_empty() {
                return c.err("expected a report path");
            }
            Ok(Statement::Report { path })
        }
        other => {
            c.at = save;
            c.skip_ws();
            c.err(format!("unknown statement '{other}'"))
        }
    }
}

fn float(v: f64) -> String {
    format!("{v:?}")
}

fn complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", float(z.re), float(z.im.abs()))
}

fn join<T>(items: &[T], sep: &str, f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(sep)
}

pub fn pretty_statement(s: &Statement) -> String {
    match s {
        Statement::Algebra { name, sizes } => format!("algebra {name} = [{}]", join(sizes, ",", |n| n.to_string())),
        Statement::Elem { name, algebra, blocks } => {
            let body = join(blocks, " ; ", |b| {
                format!("[{}]", join(b, ", ", |row| format!("[{}]", join(row, ", ", |z| complex(*z)))))
            });
            format!("elem {name} in {algebra} = {{ {body} }}")
        }
        Statement::Hom {
            name,
            source,
            target,
            counts,
            unitary,
        } => {
            let m = join(counts, ",", |row| format!("[{}]", join(row, ",", |n| n.to_string())));
            let u = match unitary {
                UnitarySpec::Default => "default",
                UnitarySpec::Named(n) => n.as_str(),
            };
            format!("hom {name} : {source} -> {target} = mult [{m}] unitary {u}")
        }
        Statement::Tensor { name, left, right } => format!("tensor {name} = {left} (x) {right}"),
        Statement::Product { name, factors } => format!("product {name} = {}", factors.join(" * ")),
        Statement::Mediator { name, left, right } => format!("mediator {name} = mediate({left}, {right})"),
        Statement::Check {
            suite,
            args,
            trials,
            seed,
            tol,
            inject,
        } => {
            let mut out = format!("check {suite}");
            for a in args {
                let _ = write!(out, " {a}");
            }
            if let Some(t) = trials {
                let _ = write!(out, " trials={t}");
            }
            if let Some(s) = seed {
                let _ = write!(out, " seed={s}");
            }
            if let Some(t) = tol {
                let _ = write!(out, " tol={}", float(*t));
            }
            if let Some(e) = inject {
                let _ = write!(out, " inject={}", float(*e));
            }
            out
        }
        Statement::Report { path } => format!("report json {path}"),
    }
}

pub fn pretty_print(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.statements {
        out.push_str(&pretty_statement(s));
        out.push('\n');
    }
    out
}
