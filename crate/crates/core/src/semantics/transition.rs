//! Closure, direct effects, expansion, successor states, branching-sets and
//! path models.

use std::collections::BTreeSet;

use super::domain::{ActionSet, Assignment, Domain, FluentId, Lit, StateSet, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticError {
    #[error("emergent non-deterministic behavior: state {state}, action {action}, effects {effects} admit several successor states")]
    EmergentNonDeterminism { state: String, action: String, effects: String },
    #[error("signature has {fluents} fluents, above the enumeration cap of {cap}")]
    CapExceeded { fluents: usize, cap: usize },
}

/// Which transitions a step of a qualified action sequence admits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Qualifier {
    /// The branching-set of the transition must equal this set.
    Exact(BTreeSet<FluentId>),
    /// Reason by cases on every non-deterministic effect: the branching-set
    /// must equal the set of all `u`-effects of the step.
    All,
}

impl Qualifier {
    pub fn none() -> Self {
        Qualifier::Exact(BTreeSet::new())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualifiedStep {
    pub action: ActionSet,
    pub qualifier: Qualifier,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualifiedActionSequence {
    pub steps: Vec<QualifiedStep>,
}

impl QualifiedActionSequence {
    /// Every step qualified with the empty set.
    pub fn unqualified(actions: &[ActionSet]) -> Self {
        Self::uniform(actions, Qualifier::none())
    }

    /// Every step qualified with "reason by cases on all effects".
    pub fn split_all(actions: &[ActionSet]) -> Self {
        Self::uniform(actions, Qualifier::All)
    }

    fn uniform(actions: &[ActionSet], q: Qualifier) -> Self {
        QualifiedActionSequence {
            steps: actions.iter().map(|a| QualifiedStep { action: a.clone(), qualifier: q.clone() }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Sum of qualifier sizes. `Qualifier::All` counts every fluent of the
/// signature, so `num_fluents` is needed to size it.
pub fn branching_degree(s: &QualifiedActionSequence, num_fluents: usize) -> usize {
    s.steps
        .iter()
        .map(|st| match &st.qualifier {
            Qualifier::Exact(q) => q.len(),
            Qualifier::All => num_fluents,
        })
        .sum()
}

/// `σ0, a0, σ1, ..., σn`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub states: Vec<StateSet>,
    pub actions: Vec<ActionSet>,
}

impl Path {
    pub fn initial(&self) -> &StateSet {
        &self.states[0]
    }

    pub fn last(&self) -> &StateSet {
        self.states.last().expect("a path has at least one state")
    }
}

/// What a path may be asked to entail.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Literal(FluentId, bool),
    /// `±f`: either `f` or `-f` holds (but not `u(f)`).
    PlusMinus(FluentId),
}

pub fn entails(path: &Path, target: Target) -> bool {
    let last = path.last();
    match target {
        Target::Literal(f, positive) => last.get(f) == Value::from_sign(positive),
        Target::PlusMinus(f) => last.get(f).is_known(),
    }
}

/// `A ⋈ B = { Ai ∪ {b} | Ai ∈ A, b ∈ B }`
pub fn join<T: Ord + Clone>(a: &BTreeSet<BTreeSet<T>>, b: &BTreeSet<T>) -> BTreeSet<BTreeSet<T>> {
    let mut out = BTreeSet::new();
    for ai in a {
        for bj in b {
            let mut s = ai.clone();
            s.insert(bj.clone());
            out.insert(s);
        }
    }
    out
}

impl Domain {
    /// Smallest superset of `set` closed under the state constraints, or
    /// `None` if it becomes inconsistent.
    pub fn closure(&self, set: &Assignment) -> Option<Assignment> {
        let mut cur = set.clone();
        loop {
            let mut changed = false;
            for c in &self.constraints {
                if cur.contains(c.head) || !c.body.iter().all(|l| cur.contains(*l)) {
                    continue;
                }
                if !cur.insert(c.head) {
                    return None;
                }
                changed = true;
            }
            if !changed {
                return Some(cur);
            }
        }
    }

    /// Closure of an arbitrary literal set; `None` when the input itself or
    /// its closure is inconsistent.
    pub fn closure_of(&self, lits: impl IntoIterator<Item = Lit>) -> Option<Assignment> {
        Assignment::from_lits(self.num_fluents(), lits).and_then(|a| self.closure(&a))
    }

    pub fn is_closed(&self, set: &Assignment) -> bool {
        self.constraints
            .iter()
            .all(|c| !c.body.iter().all(|l| set.contains(*l)) || set.contains(c.head))
    }

    pub fn is_state(&self, set: &Assignment) -> bool {
        set.is_complete() && self.is_closed(set)
    }

    /// `E(a, σ)`: consequences of dynamic laws of members of `a` whose
    /// conditions hold in `σ`.
    pub fn direct_effects(&self, a: &ActionSet, state: &StateSet) -> BTreeSet<Lit> {
        a.members()
            .iter()
            .flat_map(|e| self.dynamic[e.index()].iter())
            .filter(|law| law.body.iter().all(|l| state.contains(*l)))
            .map(|law| law.consequence)
            .collect()
    }

    /// Fluents `f` with `u(f) ∈ E(a, σ)`.
    pub fn unknown_effects(&self, a: &ActionSet, state: &StateSet) -> BTreeSet<FluentId> {
        self.direct_effects(a, state).into_iter().filter(|l| l.is_unknown()).map(|l| l.fluent).collect()
    }

    /// `𝔼(a, σ)`: the plain part of the effects joined with `{f, -f, u(f)}`
    /// for every `u(f)` effect.
    pub fn expansion(&self, a: &ActionSet, state: &StateSet) -> BTreeSet<BTreeSet<Lit>> {
        let effects = self.direct_effects(a, state);
        let base: BTreeSet<Lit> = effects.iter().copied().filter(|l| !l.is_unknown()).collect();
        let mut acc: BTreeSet<BTreeSet<Lit>> = [base].into();
        for l in effects.iter().filter(|l| l.is_unknown()) {
            let options: BTreeSet<Lit> = [Value::True, Value::False, Value::Unknown]
                .into_iter()
                .map(|v| Lit::new(l.fluent, v))
                .collect();
            acc = join(&acc, &options);
        }
        acc
    }

    pub fn executable(&self, a: &ActionSet, state: &StateSet) -> bool {
        !a.members()
            .iter()
            .flat_map(|e| self.exec[e.index()].iter())
            .any(|body| body.iter().all(|l| state.contains(*l)))
    }

    /// `β(⟨σ, a, σ'⟩) = { f | u(f) ∈ E(a, σ), u(f) ∉ σ' }`
    pub fn branching_set(&self, from: &StateSet, a: &ActionSet, to: &StateSet) -> BTreeSet<FluentId> {
        self.unknown_effects(a, from).into_iter().filter(|f| to.get(*f) != Value::Unknown).collect()
    }

    /// All `σ'` with `σ' = Cn_Z(W ∪ (σ ∩ σ'))`, for a fixed `W`.
    ///
    /// Only fluents outside `W` that some constraint can set to a value other
    /// than the one they have in `σ` may change, so it suffices to guess the
    /// subset of those that do change and verify the equation.
    pub(crate) fn fixpoints(&self, state: &StateSet, w: &Assignment) -> Vec<StateSet> {
        let n = self.num_fluents();
        let candidates: Vec<FluentId> = self
            .fluent_ids()
            .filter(|f| w.get(*f).is_none())
            .filter(|f| self.head_values[f.index()].iter().any(|v| *v != state.get(*f)))
            .collect();
        assert!(candidates.len() < 32, "too many fluents subject to ramification");
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << candidates.len()) {
            let changed = |f: FluentId| {
                candidates.iter().position(|c| *c == f).is_some_and(|i| mask & (1 << i) != 0)
            };
            let mut base = w.clone();
            for f in self.fluent_ids() {
                if w.get(f).is_none() && !changed(f) {
                    base.insert(Lit::new(f, state.get(f)));
                }
            }
            let Some(result) = self.closure(&base) else { continue };
            let ok = candidates.iter().enumerate().all(|(i, f)| {
                if mask & (1 << i) == 0 {
                    return true;
                }
                matches!(result.get(*f), Some(v) if v != state.get(*f))
            });
            if !ok {
                continue;
            }
            debug_assert_eq!(result.len(), n);
            if let Some(s) = result.into_state() {
                out.push(s);
            }
        }
        out
    }

    /// Successor states of `σ` under `a`. With `Some(q)`, only those
    /// transitions whose branching-set matches the qualifier.
    pub fn successors(
        &self,
        state: &StateSet,
        a: &ActionSet,
        qualifier: Option<&Qualifier>,
    ) -> Result<Vec<StateSet>, SemanticError> {
        if !self.executable(a, state) {
            return Ok(Vec::new());
        }
        let effects = self.direct_effects(a, state);
        let unknown: Vec<FluentId> = effects.iter().filter(|l| l.is_unknown()).map(|l| l.fluent).collect();
        let plain: Vec<Lit> = effects.iter().copied().filter(|l| !l.is_unknown()).collect();

        // Per u-effect fluent, which values the expansion may pick.
        let choices: Vec<Vec<Value>> = match qualifier {
            None => unknown.iter().map(|_| vec![Value::True, Value::False, Value::Unknown]).collect(),
            Some(Qualifier::All) => unknown.iter().map(|_| vec![Value::True, Value::False]).collect(),
            Some(Qualifier::Exact(q)) => {
                if !q.iter().all(|f| unknown.contains(f)) {
                    return Ok(Vec::new());
                }
                unknown
                    .iter()
                    .map(|f| if q.contains(f) { vec![Value::True, Value::False] } else { vec![Value::Unknown] })
                    .collect()
            }
        };

        let mut out = BTreeSet::new();
        let mut pick = vec![0usize; unknown.len()];
        loop {
            let w = Assignment::from_lits(
                self.num_fluents(),
                plain.iter().copied().chain(unknown.iter().zip(&pick).enumerate().map(|(i, (f, p))| Lit::new(*f, choices[i][*p]))),
            );
            if let Some(w) = w {
                let fps = self.fixpoints(state, &w);
                if fps.len() > 1 {
                    return Err(SemanticError::EmergentNonDeterminism {
                        state: self.show_state(state),
                        action: self.show_action(a),
                        effects: self.show_assignment(&w),
                    });
                }
                out.extend(fps);
            }
            // advance the mixed-radix counter
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return Ok(out.into_iter().collect());
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    /// Models of `[Σ, s]`: paths starting in some `σ ∈ Σ` whose every
    /// transition satisfies the corresponding qualifier.
    pub fn models<'a>(
        &self,
        initial: impl IntoIterator<Item = &'a StateSet>,
        s: &QualifiedActionSequence,
    ) -> Result<Vec<Path>, SemanticError> {
        let mut out = Vec::new();
        for sigma in initial {
            let mut path = Path { states: vec![sigma.clone()], actions: Vec::new() };
            self.extend(&mut path, s, &mut |p| {
                out.push(p.clone());
                true
            })?;
        }
        Ok(out)
    }

    /// Whether `[Σ, s]` has at least one model.
    pub fn has_model<'a>(
        &self,
        initial: impl IntoIterator<Item = &'a StateSet>,
        s: &QualifiedActionSequence,
    ) -> Result<bool, SemanticError> {
        for sigma in initial {
            let mut path = Path { states: vec![sigma.clone()], actions: Vec::new() };
            let mut found = false;
            self.extend(&mut path, s, &mut |_| {
                found = true;
                false
            })?;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Depth-first extension; `visit` returns false to stop the search.
    /// Returns false if the search was stopped.
    fn extend(
        &self,
        path: &mut Path,
        s: &QualifiedActionSequence,
        visit: &mut dyn FnMut(&Path) -> bool,
    ) -> Result<bool, SemanticError> {
        let i = path.actions.len();
        if i == s.steps.len() {
            return Ok(visit(path));
        }
        let step = &s.steps[i];
        let from = path.last().clone();
        for next in self.successors(&from, &step.action, Some(&step.qualifier))? {
            path.actions.push(step.action.clone());
            path.states.push(next);
            let go_on = self.extend(path, s, visit)?;
            path.actions.pop();
            path.states.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
