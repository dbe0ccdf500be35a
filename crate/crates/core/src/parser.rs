//! Concrete syntax for sources (`.acir`) and queries (`.acq`).
//!
//! A document is a sequence of `.`-terminated statements; `#` starts a
//! comment that runs to the end of the line.
//!
//! ```text
//! fluents: m, ab.
//! defaults: ab.
//! actions: d, w, fd.
//! law: impossible d if m, -ab.
//! law: w causes m.
//! law: fd causes u(m).
//! law: f3 if f1.
//! initial: .
//! sequence: d; {w, fd}.
//! ```
//!
//! `causes`, `if` and `impossible` are reserved and cannot be used as names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::types::{
    Action, ActionDescription, ElementaryAction, ExtendedLiteral, Fluent, FluentLiteral, Law,
    Query, Signature, Source,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("{line}:{column}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, column: usize },
    #[error("{line}:{column}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { name: String, line: usize, column: usize },
    #[error("{line}:{column}: inconsistent initial set: both {fluent} and -{fluent}")]
    InconsistentInitial { fluent: String, line: usize, column: usize },
    #[error("{line}:{column}: a query is a fluent, negated literal not allowed")]
    NegatedQuery { line: usize, column: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownSymbol { line, .. }
            | ParseError::DuplicateDeclaration { line, .. }
            | ParseError::InconsistentInitial { line, .. }
            | ParseError::NegatedQuery { line, .. } => *line,
        }
    }

    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::UnknownSymbol { column, .. }
            | ParseError::DuplicateDeclaration { column, .. }
            | ParseError::InconsistentInitial { column, .. }
            | ParseError::NegatedQuery { column, .. } => *column,
        }
    }

    /// Short machine-readable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "syntax",
            ParseError::UnknownSymbol { .. } => "unknown_symbol",
            ParseError::DuplicateDeclaration { .. } => "duplicate_declaration",
            ParseError::InconsistentInitial { .. } => "inconsistent_initial",
            ParseError::NegatedQuery { .. } => "negated_query",
        }
    }
}

const RESERVED: [&str; 3] = ["causes", "if", "impossible"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Comma,
    Dot,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Minus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' || c.is_ascii_digit() {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            if !crate::types::is_identifier(&ident) {
                return Err(ParseError::Syntax {
                    line: pos.line,
                    column: pos.column,
                    expected: "identifier starting with a letter".into(),
                    found: format!("`{ident}`"),
                });
            }
            out.push((Tok::Ident(ident), pos));
            continue;
        }
        let tok = match c {
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ';' => Tok::Semi,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => Tok::Minus,
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    expected: "a token".into(),
                    found: format!("character {other:?}"),
                })
            }
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

#[derive(Clone, Debug)]
struct Name {
    text: String,
    pos: Pos,
}

#[derive(Clone, Debug)]
struct RawLit {
    name: Name,
    positive: bool,
}

#[derive(Clone, Debug)]
enum RawElit {
    Lit(RawLit),
    Unknown(Name),
}

#[derive(Clone, Debug)]
enum RawLaw {
    Dynamic { action: Name, consequence: RawElit, conditions: Vec<RawLit> },
    Constraint { head: RawLit, conditions: Vec<RawLit> },
    Exec { action: Name, conditions: Vec<RawLit> },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let pos = self.pos();
        ParseError::Syntax {
            line: pos.line,
            column: pos.column,
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(tok.describe()))
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let pos = self.bump().1;
                Ok(Name { text: s, pos })
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(format!("`{kw}`"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name_list(&mut self) -> Result<Vec<Name>, ParseError> {
        let mut out = vec![self.name()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn opt_name_list(&mut self) -> Result<Vec<Name>, ParseError> {
        if *self.peek() == Tok::Dot {
            Ok(Vec::new())
        } else {
            self.name_list()
        }
    }

    fn lit(&mut self) -> Result<RawLit, ParseError> {
        let positive = if *self.peek() == Tok::Minus {
            self.bump();
            false
        } else {
            true
        };
        Ok(RawLit { name: self.name()?, positive })
    }

    fn lit_list(&mut self) -> Result<Vec<RawLit>, ParseError> {
        let mut out = vec![self.lit()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.lit()?);
        }
        Ok(out)
    }

    fn elit(&mut self) -> Result<RawElit, ParseError> {
        if self.is_keyword("u") && *self.peek2() == Tok::LParen {
            self.bump();
            self.bump();
            let n = self.name()?;
            self.expect(Tok::RParen)?;
            return Ok(RawElit::Unknown(n));
        }
        Ok(RawElit::Lit(self.lit()?))
    }

    fn law(&mut self) -> Result<RawLaw, ParseError> {
        if self.is_keyword("impossible") {
            self.bump();
            let action = self.name()?;
            self.keyword("if")?;
            let conditions = self.lit_list()?;
            return Ok(RawLaw::Exec { action, conditions });
        }
        if *self.peek() == Tok::Minus {
            let head = self.lit()?;
            self.keyword("if")?;
            let conditions = self.lit_list()?;
            return Ok(RawLaw::Constraint { head, conditions });
        }
        let first = self.name()?;
        if self.is_keyword("causes") {
            self.bump();
            let consequence = self.elit()?;
            let conditions = if self.is_keyword("if") {
                self.bump();
                self.lit_list()?
            } else {
                Vec::new()
            };
            Ok(RawLaw::Dynamic { action: first, consequence, conditions })
        } else if self.is_keyword("if") {
            self.bump();
            let conditions = self.lit_list()?;
            Ok(RawLaw::Constraint { head: RawLit { name: first, positive: true }, conditions })
        } else {
            Err(self.error("`causes` or `if`"))
        }
    }

    fn step(&mut self) -> Result<(Vec<Name>, Pos), ParseError> {
        let pos = self.pos();
        if *self.peek() == Tok::LBrace {
            self.bump();
            let names = self.name_list()?;
            self.expect(Tok::RBrace)?;
            Ok((names, pos))
        } else {
            Ok((vec![self.name()?], pos))
        }
    }

    fn sequence(&mut self) -> Result<Vec<RawStep>, ParseError> {
        if *self.peek() == Tok::Dot {
            return Ok(Vec::new());
        }
        let mut out = vec![self.step()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            out.push(self.step()?);
        }
        Ok(out)
    }
}

/// Action names of one step and where the step starts.
type RawStep = (Vec<Name>, Pos);

#[derive(Default)]
struct RawDocument {
    fluents: Option<(Vec<Name>, Pos)>,
    defaults: Option<(Vec<Name>, Pos)>,
    actions: Option<(Vec<Name>, Pos)>,
    laws: Vec<(RawLaw, Pos)>,
    initial: Option<(Vec<RawLit>, Pos)>,
    sequence: Option<(Vec<RawStep>, Pos)>,
    statement_lines: Vec<usize>,
}

fn duplicate<T>(slot: &Option<T>, name: &str, pos: Pos) -> Result<(), ParseError> {
    if slot.is_some() {
        Err(ParseError::DuplicateDeclaration {
            name: name.to_string(),
            line: pos.line,
            column: pos.column,
        })
    } else {
        Ok(())
    }
}

fn parse_raw(text: &str) -> Result<RawDocument, ParseError> {
    let mut p = Parser::new(text)?;
    let mut doc = RawDocument::default();
    while *p.peek() != Tok::Eof {
        let pos = p.pos();
        let section = match p.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(p.error("section keyword")),
        };
        doc.statement_lines.push(pos.line);
        p.bump();
        p.expect(Tok::Colon)?;
        match section.as_str() {
            "fluents" => {
                duplicate(&doc.fluents, "fluents", pos)?;
                doc.fluents = Some((p.name_list()?, pos));
            }
            "defaults" => {
                duplicate(&doc.defaults, "defaults", pos)?;
                doc.defaults = Some((p.opt_name_list()?, pos));
            }
            "actions" => {
                duplicate(&doc.actions, "actions", pos)?;
                doc.actions = Some((p.name_list()?, pos));
            }
            "law" => doc.laws.push((p.law()?, pos)),
            "initial" => {
                duplicate(&doc.initial, "initial", pos)?;
                let lits = if *p.peek() == Tok::Dot { Vec::new() } else { p.lit_list()? };
                doc.initial = Some((lits, pos));
            }
            "sequence" => {
                duplicate(&doc.sequence, "sequence", pos)?;
                doc.sequence = Some((p.sequence()?, pos));
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: pos.line,
                    column: pos.column,
                    expected: "one of `fluents`, `defaults`, `actions`, `law`, `initial`, `sequence`"
                        .into(),
                    found: format!("`{section}`"),
                })
            }
        }
        p.expect(Tok::Dot)?;
    }
    Ok(doc)
}

fn missing(section: &str, text: &str) -> ParseError {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    ParseError::Syntax {
        line,
        column,
        expected: format!("`{section}:` section"),
        found: "end of input".into(),
    }
}

struct Resolver {
    fluents: BTreeSet<String>,
    actions: BTreeSet<String>,
}

impl Resolver {
    fn fluent(&self, n: &Name) -> Result<Fluent, ParseError> {
        if self.fluents.contains(&n.text) {
            Ok(Fluent::new(n.text.clone()))
        } else {
            Err(unknown(n))
        }
    }

    fn action(&self, n: &Name) -> Result<ElementaryAction, ParseError> {
        if self.actions.contains(&n.text) {
            Ok(ElementaryAction::new(n.text.clone()))
        } else {
            Err(unknown(n))
        }
    }

    fn lit(&self, l: &RawLit) -> Result<FluentLiteral, ParseError> {
        Ok(FluentLiteral { fluent: self.fluent(&l.name)?, positive: l.positive })
    }

    fn lits(&self, ls: &[RawLit]) -> Result<BTreeSet<FluentLiteral>, ParseError> {
        ls.iter().map(|l| self.lit(l)).collect()
    }
}

fn unknown(n: &Name) -> ParseError {
    ParseError::UnknownSymbol { name: n.text.clone(), line: n.pos.line, column: n.pos.column }
}

fn declare(names: &[Name], into: &mut BTreeSet<String>, other: &BTreeSet<String>) -> Result<(), ParseError> {
    for n in names {
        if other.contains(&n.text) || !into.insert(n.text.clone()) {
            return Err(ParseError::DuplicateDeclaration {
                name: n.text.clone(),
                line: n.pos.line,
                column: n.pos.column,
            });
        }
    }
    Ok(())
}

/// A parsed source together with the text it came from.
#[derive(Clone, Debug)]
pub struct SourceDocument {
    pub raw: String,
    pub parsed: Source,
    pub path: Option<PathBuf>,
    /// Line number of the first token of every statement, in file order.
    pub statement_lines: Vec<usize>,
}

impl SourceDocument {
    pub fn parse(id: impl Into<String>, raw: impl Into<String>) -> Result<Self, ParseError> {
        let raw = raw.into();
        let doc = parse_raw(&raw)?;
        let statement_lines = doc.statement_lines.clone();
        let parsed = build(id.into(), doc, &raw)?;
        Ok(SourceDocument { raw, parsed, path: None, statement_lines })
    }

    /// Reads and parses a file; the source id is the file stem.
    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let bytes = std::fs::read(path).map_err(|e| LoadError::Io(path.to_path_buf(), e))?;
        let raw = decode(&bytes).map_err(|e| LoadError::Parse(path.to_path_buf(), e))?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let mut doc =
            SourceDocument::parse(id, raw).map_err(|e| LoadError::Parse(path.to_path_buf(), e))?;
        doc.path = Some(path.to_path_buf());
        Ok(doc)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {}", .0.display(), .1)]
    Io(PathBuf, std::io::Error),
    #[error("{}:{}", .0.display(), .1)]
    Parse(PathBuf, ParseError),
}

/// Decodes UTF-8, reporting the position of the first invalid byte.
pub fn decode(bytes: &[u8]) -> Result<String, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => Ok(s.to_string()),
        Err(e) => {
            let good = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = good.matches('\n').count() + 1;
            let column = good.rsplit('\n').next().map(|l| l.chars().count() + 1).unwrap_or(1);
            Err(ParseError::Syntax {
                line,
                column,
                expected: "UTF-8 text".into(),
                found: "invalid byte sequence".into(),
            })
        }
    }
}

fn build(id: String, doc: RawDocument, text: &str) -> Result<Source, ParseError> {
    let (fluent_names, _) = doc.fluents.ok_or_else(|| missing("fluents", text))?;
    let (action_names, _) = doc.actions.ok_or_else(|| missing("actions", text))?;
    let (initial, _) = doc.initial.ok_or_else(|| missing("initial", text))?;
    let (sequence, _) = doc.sequence.ok_or_else(|| missing("sequence", text))?;

    let mut fluents = BTreeSet::new();
    declare(&fluent_names, &mut fluents, &BTreeSet::new())?;
    let mut actions = BTreeSet::new();
    declare(&action_names, &mut actions, &fluents)?;
    let r = Resolver { fluents, actions };

    let mut defaults = BTreeSet::new();
    if let Some((names, _)) = &doc.defaults {
        for n in names {
            if !defaults.insert(r.fluent(n)?) {
                return Err(ParseError::DuplicateDeclaration {
                    name: n.text.clone(),
                    line: n.pos.line,
                    column: n.pos.column,
                });
            }
        }
    }

    let mut laws = BTreeSet::new();
    for (law, _) in &doc.laws {
        let law = match law {
            RawLaw::Dynamic { action, consequence, conditions } => Law::Dynamic {
                action: r.action(action)?,
                consequence: match consequence {
                    RawElit::Lit(l) => ExtendedLiteral::Literal(r.lit(l)?),
                    RawElit::Unknown(n) => ExtendedLiteral::Unknown(r.fluent(n)?),
                },
                conditions: r.lits(conditions)?,
            },
            RawLaw::Constraint { head, conditions } => Law::StateConstraint {
                head: ExtendedLiteral::Literal(r.lit(head)?),
                conditions: r.lits(conditions)?,
            },
            RawLaw::Exec { action, conditions } => {
                Law::Executability { action: r.action(action)?, conditions: r.lits(conditions)? }
            }
        };
        laws.insert(law);
    }

    let mut init = BTreeSet::new();
    let mut seen: BTreeMap<String, bool> = BTreeMap::new();
    for l in &initial {
        let lit = r.lit(l)?;
        if let Some(&prev) = seen.get(&l.name.text) {
            if prev != l.positive {
                return Err(ParseError::InconsistentInitial {
                    fluent: l.name.text.clone(),
                    line: l.name.pos.line,
                    column: l.name.pos.column,
                });
            }
        }
        seen.insert(l.name.text.clone(), l.positive);
        init.insert(lit);
    }

    let mut seq = Vec::with_capacity(sequence.len());
    for (names, _) in &sequence {
        let mut members = BTreeSet::new();
        for n in names {
            members.insert(r.action(n)?);
        }
        seq.push(Action { members });
    }

    Ok(Source {
        id,
        signature: Signature {
            fluents: r.fluents.into_iter().map(Fluent::new).collect(),
            actions: r.actions.into_iter().map(ElementaryAction::new).collect(),
        },
        defaults,
        description: ActionDescription { laws },
        initial: init,
        sequence: seq,
    })
}

/// Parses a source document. The returned source has an empty id; use
/// [`parse_source_with_id`] or [`SourceDocument::load`] to set one.
pub fn parse_source(text: &str) -> Result<Source, ParseError> {
    parse_source_with_id("", text)
}

pub fn parse_source_with_id(id: &str, text: &str) -> Result<Source, ParseError> {
    build(id.to_string(), parse_raw(text)?, text)
}

/// Parses `query: <fluent>.`
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    p.keyword("query")?;
    p.expect(Tok::Colon)?;
    if *p.peek() == Tok::Minus {
        let pos = p.pos();
        return Err(ParseError::NegatedQuery { line: pos.line, column: pos.column });
    }
    let n = p.name()?;
    p.expect(Tok::Dot)?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(Query { fluent: Fluent::new(n.text) })
}

pub fn serialize_query(q: &Query) -> String {
    format!("query: {}.\n", q.fluent)
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for (i, it) in items.into_iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{it}");
    }
    s
}

/// Canonical text form. Re-parsing it yields the same source (modulo id).
/// State constraints and executability conditions need at least one
/// condition to have a text form.
pub fn serialize_source(src: &Source) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fluents: {}.", join(&src.signature.fluents));
    let _ = writeln!(out, "defaults: {}.", join(&src.defaults));
    let _ = writeln!(out, "actions: {}.", join(&src.signature.actions));
    for law in &src.description.laws {
        let _ = writeln!(out, "law: {law}.");
    }
    let _ = writeln!(out, "initial: {}.", join(&src.initial));
    let steps: Vec<String> = src
        .sequence
        .iter()
        .map(|a| {
            if a.members.len() == 1 {
                a.to_string()
            } else {
                format!("{{{}}}", join(&a.members))
            }
        })
        .collect();
    let _ = writeln!(out, "sequence: {}.", steps.join("; "));
    out
}
