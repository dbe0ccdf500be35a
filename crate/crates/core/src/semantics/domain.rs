//! Compiled, index-based view of a source used by all reasoning code.
//!
//! Fluents and actions are interned in name order, so ordering by id is the
//! same as ordering by name.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::types::{
    validate_source, Action, ElementaryAction, ExtendedLiteral, Fluent, FluentLiteral, Law,
    Source, Violation,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentId(pub(crate) u32);

impl FluentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub(crate) u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Three-valued assignment of a fluent: `f`, `-f` or `u(f)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    False,
    True,
    Unknown,
}

impl Value {
    pub fn from_sign(positive: bool) -> Self {
        if positive {
            Value::True
        } else {
            Value::False
        }
    }

    pub fn is_known(self) -> bool {
        self != Value::Unknown
    }
}

/// An extended literal over interned fluents.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub fluent: FluentId,
    pub value: Value,
}

impl Lit {
    pub fn new(fluent: FluentId, value: Value) -> Self {
        Lit { fluent, value }
    }

    pub fn is_unknown(self) -> bool {
        self.value == Value::Unknown
    }
}

/// A consistent (at most one value per fluent), possibly incomplete, set of
/// extended literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    values: Vec<Option<Value>>,
}

impl Assignment {
    pub fn empty(n: usize) -> Self {
        Assignment { values: vec![None; n] }
    }

    /// Builds a set from literals; `None` if two literals disagree.
    pub fn from_lits(n: usize, lits: impl IntoIterator<Item = Lit>) -> Option<Self> {
        let mut a = Assignment::empty(n);
        for l in lits {
            if !a.insert(l) {
                return None;
            }
        }
        Some(a)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    pub fn get(&self, f: FluentId) -> Option<Value> {
        self.values[f.index()]
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.get(l.fluent) == Some(l.value)
    }

    /// Inserts a literal, returning false if the fluent already had another
    /// value (the set is left unchanged in that case).
    pub fn insert(&mut self, l: Lit) -> bool {
        match self.values[l.fluent.index()] {
            Some(v) => v == l.value,
            None => {
                self.values[l.fluent.index()] = Some(l.value);
                true
            }
        }
    }

    pub fn remove(&mut self, f: FluentId) {
        self.values[f.index()] = None;
    }

    pub fn lits(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| Lit::new(FluentId(i as u32), v)))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Converts to a state if every fluent is assigned.
    pub fn into_state(self) -> Option<StateSet> {
        self.values.into_iter().collect::<Option<Vec<_>>>().map(|values| StateSet { values })
    }

    pub fn is_subset(&self, other: &Assignment) -> bool {
        self.lits().all(|l| other.contains(l))
    }

    /// Literals present in both.
    pub fn intersect(&self, other: &Assignment) -> Assignment {
        Assignment {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| if a == b { *a } else { None })
                .collect(),
        }
    }
}

/// A complete, consistent set of extended literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet {
    values: Vec<Value>,
}

impl StateSet {
    pub fn from_values(values: Vec<Value>) -> Self {
        StateSet { values }
    }

    pub fn get(&self, f: FluentId) -> Value {
        self.values[f.index()]
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.get(l.fluent) == l.value
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn lits(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values.iter().enumerate().map(|(i, v)| Lit::new(FluentId(i as u32), *v))
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment { values: self.values.iter().copied().map(Some).collect() }
    }
}

/// A non-empty set of elementary actions, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionSet(Vec<ActionId>);

impl ActionSet {
    pub fn new(mut ids: Vec<ActionId>) -> Self {
        ids.sort();
        ids.dedup();
        ActionSet(ids)
    }

    pub fn members(&self) -> &[ActionId] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct DynamicLaw {
    pub consequence: Lit,
    pub body: Vec<Lit>,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub head: Lit,
    pub body: Vec<Lit>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("invalid source: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A source compiled to integer ids.
#[derive(Clone, Debug)]
pub struct Domain {
    fluents: Vec<Fluent>,
    actions: Vec<ElementaryAction>,
    fluent_ix: HashMap<String, FluentId>,
    action_ix: HashMap<String, ActionId>,
    defaults: Vec<bool>,
    pub(crate) dynamic: Vec<Vec<DynamicLaw>>,
    pub(crate) exec: Vec<Vec<Vec<Lit>>>,
    pub(crate) constraints: Vec<Constraint>,
    /// Values that some state constraint may assign to each fluent.
    pub(crate) head_values: Vec<Vec<Value>>,
    initial: Assignment,
    sequence: Vec<ActionSet>,
}

impl Domain {
    pub fn new(src: &Source) -> Result<Self, DomainError> {
        let violations = validate_source(src);
        if !violations.is_empty() {
            return Err(DomainError::Invalid(violations));
        }
        let fluents: Vec<Fluent> = src.signature.fluents.iter().cloned().collect();
        let actions: Vec<ElementaryAction> = src.signature.actions.iter().cloned().collect();
        let fluent_ix: HashMap<String, FluentId> =
            fluents.iter().enumerate().map(|(i, f)| (f.name().to_string(), FluentId(i as u32))).collect();
        let action_ix: HashMap<String, ActionId> =
            actions.iter().enumerate().map(|(i, a)| (a.name().to_string(), ActionId(i as u32))).collect();
        let n = fluents.len();

        let lit = |l: &FluentLiteral| Lit::new(fluent_ix[l.fluent.name()], Value::from_sign(l.positive));
        let elit = |l: &ExtendedLiteral| match l {
            ExtendedLiteral::Literal(l) => lit(l),
            ExtendedLiteral::Unknown(f) => Lit::new(fluent_ix[f.name()], Value::Unknown),
        };

        let mut dynamic = vec![Vec::new(); actions.len()];
        let mut exec = vec![Vec::new(); actions.len()];
        let mut constraints = Vec::new();
        let mut head_values = vec![Vec::new(); n];
        for law in &src.description.laws {
            match law {
                Law::Dynamic { action, consequence, conditions } => {
                    dynamic[action_ix[action.name()].index()].push(DynamicLaw {
                        consequence: elit(consequence),
                        body: conditions.iter().map(lit).collect(),
                    });
                }
                Law::Executability { action, conditions } => {
                    exec[action_ix[action.name()].index()].push(conditions.iter().map(lit).collect());
                }
                Law::StateConstraint { head, conditions } => {
                    let head = elit(head);
                    let hv: &mut Vec<Value> = &mut head_values[head.fluent.index()];
                    if !hv.contains(&head.value) {
                        hv.push(head.value);
                    }
                    constraints.push(Constraint { head, body: conditions.iter().map(lit).collect() });
                }
            }
        }

        let defaults = fluents.iter().map(|f| src.defaults.contains(f)).collect();
        let initial = Assignment::from_lits(n, src.initial.iter().map(lit))
            .expect("validated initial set is consistent");
        let sequence = src
            .sequence
            .iter()
            .map(|a| ActionSet::new(a.members.iter().map(|e| action_ix[e.name()]).collect()))
            .collect();

        Ok(Domain {
            fluents,
            actions,
            fluent_ix,
            action_ix,
            defaults,
            dynamic,
            exec,
            constraints,
            head_values,
            initial,
            sequence,
        })
    }

    pub fn num_fluents(&self) -> usize {
        self.fluents.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn fluent_ids(&self) -> impl Iterator<Item = FluentId> {
        (0..self.fluents.len() as u32).map(FluentId)
    }

    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len() as u32).map(ActionId)
    }

    pub fn fluent_id(&self, name: &str) -> Option<FluentId> {
        self.fluent_ix.get(name).copied()
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_ix.get(name).copied()
    }

    pub fn fluent(&self, id: FluentId) -> &Fluent {
        &self.fluents[id.index()]
    }

    pub fn action(&self, id: ActionId) -> &ElementaryAction {
        &self.actions[id.index()]
    }

    pub fn is_default(&self, f: FluentId) -> bool {
        self.defaults[f.index()]
    }

    pub fn defaults(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.fluent_ids().filter(|f| self.is_default(*f))
    }

    pub fn non_defaults(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.fluent_ids().filter(|f| !self.is_default(*f))
    }

    /// The initial-state information of the source.
    pub fn initial(&self) -> &Assignment {
        &self.initial
    }

    /// The observed action sequence of the source.
    pub fn sequence(&self) -> &[ActionSet] {
        &self.sequence
    }

    pub fn empty_assignment(&self) -> Assignment {
        Assignment::empty(self.num_fluents())
    }

    /// Fluents `f` with some law `e causes u(f)` for `e` in the action.
    pub fn potential_unknown_effects(&self, a: &ActionSet) -> BTreeSet<FluentId> {
        a.members()
            .iter()
            .flat_map(|e| self.dynamic[e.index()].iter())
            .filter(|l| l.consequence.is_unknown())
            .map(|l| l.consequence.fluent)
            .collect()
    }

    pub fn has_unknown_effects(&self) -> bool {
        self.dynamic.iter().flatten().any(|l| l.consequence.is_unknown())
    }

    /// Parses `f`, `-f` or `u(f)` against this domain.
    pub fn lit(&self, text: &str) -> Option<Lit> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix('-') {
            return self.fluent_id(rest.trim()).map(|f| Lit::new(f, Value::False));
        }
        if let Some(inner) = text.strip_prefix("u(").and_then(|r| r.strip_suffix(')')) {
            return self.fluent_id(inner.trim()).map(|f| Lit::new(f, Value::Unknown));
        }
        self.fluent_id(text).map(|f| Lit::new(f, Value::True))
    }

    /// Builds an assignment from literal texts; panics on unknown names or
    /// conflicts. Intended for tests and examples.
    pub fn assignment(&self, lits: &[&str]) -> Assignment {
        let lits = lits.iter().map(|t| self.lit(t).unwrap_or_else(|| panic!("unknown literal `{t}`")));
        Assignment::from_lits(self.num_fluents(), lits).expect("consistent literals")
    }

    /// Builds a complete state from literal texts; panics if incomplete.
    pub fn state(&self, lits: &[&str]) -> StateSet {
        self.assignment(lits).into_state().expect("complete state")
    }

    pub fn action_set(&self, names: &[&str]) -> ActionSet {
        ActionSet::new(
            names
                .iter()
                .map(|n| self.action_id(n).unwrap_or_else(|| panic!("unknown action `{n}`")))
                .collect(),
        )
    }

    pub fn action_set_of(&self, a: &Action) -> Option<ActionSet> {
        a.members.iter().map(|e| self.action_id(e.name())).collect::<Option<Vec<_>>>().map(ActionSet::new)
    }

    pub fn to_action(&self, a: &ActionSet) -> Action {
        Action { members: a.members().iter().map(|e| self.action(*e).clone()).collect() }
    }

    pub fn to_fluent_literal(&self, l: Lit) -> Option<FluentLiteral> {
        match l.value {
            Value::Unknown => None,
            v => Some(FluentLiteral { fluent: self.fluent(l.fluent).clone(), positive: v == Value::True }),
        }
    }

    pub fn show_lit(&self, l: Lit) -> String {
        let name = self.fluent(l.fluent);
        match l.value {
            Value::True => name.to_string(),
            Value::False => format!("-{name}"),
            Value::Unknown => format!("u({name})"),
        }
    }

    fn show_lits(&self, lits: impl Iterator<Item = Lit>) -> String {
        let parts: Vec<String> = lits.map(|l| self.show_lit(l)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn show_state(&self, s: &StateSet) -> String {
        self.show_lits(s.lits())
    }

    pub fn show_assignment(&self, a: &Assignment) -> String {
        self.show_lits(a.lits())
    }

    pub fn show_lit_set(&self, set: &BTreeSet<Lit>) -> String {
        self.show_lits(set.iter().copied())
    }

    pub fn show_action(&self, a: &ActionSet) -> String {
        self.to_action(a).to_string()
    }

    pub fn show_fluents(&self, fs: &BTreeSet<FluentId>) -> String {
        let parts: Vec<&str> = fs.iter().map(|f| self.fluent(*f).name()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value::True => "T",
            Value::False => "F",
            Value::Unknown => "U",
        })
    }
}
