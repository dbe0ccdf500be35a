//! Forcing, completion and conservative expansion of the initial-state
//! information of a source.

use std::collections::BTreeSet;

use crate::semantics::{ActionSet, Assignment, Domain, FluentId, Lit, QualifiedActionSequence, SemanticError, StateSet, Value};

/// `γ(I, F)` together with its degree `|F|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub states: BTreeSet<StateSet>,
    pub degree: usize,
}

impl Domain {
    /// `I[f]`.
    pub fn force(&self, i: &Assignment, f: FluentId) -> BTreeSet<Assignment> {
        let with = |v: Value| {
            let mut j = i.clone();
            j.insert(Lit::new(f, v));
            j
        };
        match i.get(f) {
            None if self.is_default(f) => [with(Value::True)].into(),
            Some(Value::True) if self.is_default(f) => [i.clone()].into(),
            None => [with(Value::True), with(Value::False)].into(),
            Some(_) => [i.clone()].into(),
        }
    }

    /// `I[{f1, ..., fm}]`, applied in fluent order. The outcome does not
    /// depend on the order.
    pub fn force_all(&self, i: &Assignment, fs: &BTreeSet<FluentId>) -> BTreeSet<Assignment> {
        fs.iter().fold([i.clone()].into(), |acc: BTreeSet<Assignment>, f| {
            acc.iter().flat_map(|j| self.force(j, *f)).collect()
        })
    }

    /// `γ(I)`: assume every unmentioned default fluent false, close under the
    /// state constraints and mark everything still unassigned as unknown.
    pub fn complete(&self, i: &Assignment) -> Option<StateSet> {
        let mut j = i.clone();
        for f in self.defaults() {
            if j.get(f).is_none() {
                j.insert(Lit::new(f, Value::False));
            }
        }
        let mut c = self.closure(&j)?;
        for f in self.fluent_ids() {
            if c.get(f).is_none() {
                c.insert(Lit::new(f, Value::Unknown));
            }
        }
        c.into_state()
    }

    /// `γ(I, F)`.
    pub fn completion_set(&self, i: &Assignment, fs: &BTreeSet<FluentId>) -> Completion {
        Completion {
            states: self.force_all(i, fs).iter().filter_map(|j| self.complete(j)).collect(),
            degree: fs.len(),
        }
    }

    /// `ε(I, ℵ)`: the literals shared by every way of fixing the non-default
    /// fluents that is compatible with `ℵ` when all non-deterministic effects
    /// are split. `None` if no such way exists.
    pub fn conservative_expansion(
        &self,
        i: &Assignment,
        seq: &[ActionSet],
    ) -> Result<Option<Assignment>, SemanticError> {
        let split = QualifiedActionSequence::split_all(seq);
        let non_defaults: BTreeSet<FluentId> = self.non_defaults().collect();
        let mut acc: Option<Assignment> = None;
        for j in self.force_all(i, &non_defaults) {
            let Some(g) = self.complete(&j) else { continue };
            if self.has_model([&g], &split)? {
                acc = Some(match acc {
                    None => j,
                    Some(a) => a.intersect(&j),
                });
            }
        }
        Ok(acc)
    }
}
