//! Name-level value types for sources, laws and queries.
//!
//! Everything here is an immutable value. Sets are `BTreeSet`s so that
//! iteration order (and therefore serialization) is canonical.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Returns true if `name` is a valid identifier: a letter followed by
/// letters, digits or underscores.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A fluent symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fluent(String);

impl Fluent {
    pub fn new(name: impl Into<String>) -> Self {
        Fluent(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Fluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An elementary action symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementaryAction(String);

impl ElementaryAction {
    pub fn new(name: impl Into<String>) -> Self {
        ElementaryAction(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementaryAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `f` or `-f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentLiteral {
    pub fluent: Fluent,
    pub positive: bool,
}

impl FluentLiteral {
    pub fn pos(fluent: impl Into<String>) -> Self {
        FluentLiteral { fluent: Fluent::new(fluent), positive: true }
    }

    pub fn neg(fluent: impl Into<String>) -> Self {
        FluentLiteral { fluent: Fluent::new(fluent), positive: false }
    }

    pub fn complement(&self) -> FluentLiteral {
        complement(self)
    }
}

/// The complement of a fluent literal: `f` becomes `-f` and vice versa.
pub fn complement(lit: &FluentLiteral) -> FluentLiteral {
    FluentLiteral { fluent: lit.fluent.clone(), positive: !lit.positive }
}

impl fmt::Display for FluentLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.fluent)
        } else {
            write!(f, "-{}", self.fluent)
        }
    }
}

/// A fluent literal or `u(f)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedLiteral {
    Literal(FluentLiteral),
    Unknown(Fluent),
}

impl ExtendedLiteral {
    pub fn fluent(&self) -> &Fluent {
        match self {
            ExtendedLiteral::Literal(l) => &l.fluent,
            ExtendedLiteral::Unknown(f) => f,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, ExtendedLiteral::Unknown(_))
    }
}

impl From<FluentLiteral> for ExtendedLiteral {
    fn from(l: FluentLiteral) -> Self {
        ExtendedLiteral::Literal(l)
    }
}

impl fmt::Display for ExtendedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLiteral::Literal(l) => l.fmt(f),
            ExtendedLiteral::Unknown(fl) => write!(f, "u({fl})"),
        }
    }
}

/// A set of elementary actions executed together.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub members: BTreeSet<ElementaryAction>,
}

impl Action {
    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Action { members: members.into_iter().map(|m| ElementaryAction::new(m)).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.len() == 1 {
            return write!(f, "{}", self.members.iter().next().unwrap());
        }
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// One of the three law kinds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    /// `e causes λ if l1, ..., ln`
    Dynamic {
        action: ElementaryAction,
        consequence: ExtendedLiteral,
        conditions: BTreeSet<FluentLiteral>,
    },
    /// `l0 if l1, ..., ln`. The head must be a plain literal for the law to
    /// be well formed; `validate_source` reports violations.
    StateConstraint {
        head: ExtendedLiteral,
        conditions: BTreeSet<FluentLiteral>,
    },
    /// `impossible e if l1, ..., ln`
    Executability {
        action: ElementaryAction,
        conditions: BTreeSet<FluentLiteral>,
    },
}

impl Law {
    pub fn conditions(&self) -> &BTreeSet<FluentLiteral> {
        match self {
            Law::Dynamic { conditions, .. }
            | Law::StateConstraint { conditions, .. }
            | Law::Executability { conditions, .. } => conditions,
        }
    }
}

fn write_conditions(f: &mut fmt::Formatter<'_>, conds: &BTreeSet<FluentLiteral>) -> fmt::Result {
    for (i, c) in conds.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Law::Dynamic { action, consequence, conditions } => {
                write!(f, "{action} causes {consequence}")?;
                if !conditions.is_empty() {
                    f.write_str(" if ")?;
                    write_conditions(f, conditions)?;
                }
                Ok(())
            }
            Law::StateConstraint { head, conditions } => {
                write!(f, "{head} if ")?;
                write_conditions(f, conditions)
            }
            Law::Executability { action, conditions } => {
                write!(f, "impossible {action} if ")?;
                write_conditions(f, conditions)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub fluents: BTreeSet<Fluent>,
    pub actions: BTreeSet<ElementaryAction>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ActionDescription {
    pub laws: BTreeSet<Law>,
}

impl ActionDescription {
    pub fn state_constraints(&self) -> impl Iterator<Item = &Law> {
        self.laws.iter().filter(|l| matches!(l, Law::StateConstraint { .. }))
    }
}

/// A story: signature, default fluents, action description, what is known
/// about the initial state, and the observed action sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Source {
    pub id: String,
    pub signature: Signature,
    pub defaults: BTreeSet<Fluent>,
    pub description: ActionDescription,
    pub initial: BTreeSet<FluentLiteral>,
    pub sequence: Vec<Action>,
}

/// A query is a single fluent whose truth at the end of a story is sought.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub fluent: Fluent,
}

impl Query {
    pub fn new(fluent: impl Into<String>) -> Self {
        Query { fluent: Fluent::new(fluent) }
    }
}

/// A single problem found by [`validate_source`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, thiserror::Error)]
pub enum Violation {
    #[error("empty fluent set")]
    EmptySignature,
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("`{0}` is declared both as a fluent and as an action")]
    FluentActionClash(String),
    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("default `{0}` is not a fluent of the signature")]
    DefaultNotInSignature(String),
    #[error("inconsistent initial set: both {0} and -{0}")]
    InconsistentInitial(String),
    #[error("proper extended literal in state constraint: `{0}`")]
    UnknownInStateConstraint(String),
    #[error("empty action at sequence position {0}")]
    EmptyAction(usize),
}

/// Checks every structural invariant of a source. An empty report means the
/// source is well formed. Emergent non-determinism is not checked here.
pub fn validate_source(src: &Source) -> Vec<Violation> {
    let mut out = Vec::new();
    let sig = &src.signature;
    if sig.fluents.is_empty() {
        out.push(Violation::EmptySignature);
    }
    for f in &sig.fluents {
        if !is_identifier(f.name()) {
            out.push(Violation::InvalidIdentifier(f.name().to_string()));
        }
    }
    for a in &sig.actions {
        if !is_identifier(a.name()) {
            out.push(Violation::InvalidIdentifier(a.name().to_string()));
        }
        if sig.fluents.contains(&Fluent::new(a.name())) {
            out.push(Violation::FluentActionClash(a.name().to_string()));
        }
    }

    let check_fluent = |f: &Fluent, out: &mut Vec<Violation>| {
        if !sig.fluents.contains(f) {
            let v = Violation::UnknownFluent(f.name().to_string());
            if !out.contains(&v) {
                out.push(v);
            }
        }
    };
    let check_action = |a: &ElementaryAction, out: &mut Vec<Violation>| {
        if !sig.actions.contains(a) {
            let v = Violation::UnknownAction(a.name().to_string());
            if !out.contains(&v) {
                out.push(v);
            }
        }
    };

    for d in &src.defaults {
        if !sig.fluents.contains(d) {
            out.push(Violation::DefaultNotInSignature(d.name().to_string()));
        }
    }

    for law in &src.description.laws {
        for c in law.conditions() {
            check_fluent(&c.fluent, &mut out);
        }
        match law {
            Law::Dynamic { action, consequence, .. } => {
                check_action(action, &mut out);
                check_fluent(consequence.fluent(), &mut out);
            }
            Law::StateConstraint { head, .. } => {
                check_fluent(head.fluent(), &mut out);
                if head.is_unknown() {
                    out.push(Violation::UnknownInStateConstraint(law.to_string()));
                }
            }
            Law::Executability { action, .. } => check_action(action, &mut out),
        }
    }

    for l in &src.initial {
        check_fluent(&l.fluent, &mut out);
        if l.positive && src.initial.contains(&l.complement()) {
            out.push(Violation::InconsistentInitial(l.fluent.name().to_string()));
        }
    }

    for (i, a) in src.sequence.iter().enumerate() {
        if a.is_empty() {
            out.push(Violation::EmptyAction(i));
        }
        for e in &a.members {
            check_action(e, &mut out);
        }
    }
    out
}
