//! Exhaustive check for emergent non-deterministic behavior.

use super::domain::{ActionId, ActionSet, Assignment, Domain, StateSet, Value};
use super::transition::SemanticError;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Refuse signatures with more fluents than this.
    pub fluent_cap: usize,
    /// Largest concurrent action considered.
    pub max_concurrency: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { fluent_cap: 14, max_concurrency: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub state: StateSet,
    pub action: ActionSet,
    pub successors: Vec<StateSet>,
}

#[derive(Clone, Debug, Default)]
pub struct NondeterminismReport {
    pub states_checked: usize,
    pub actions_checked: usize,
    pub witnesses: Vec<Witness>,
}

impl NondeterminismReport {
    pub fn is_clean(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// All states of the domain: complete, consistent and closed assignments.
pub fn all_states(domain: &Domain) -> Vec<StateSet> {
    let n = domain.num_fluents();
    let mut out = Vec::new();
    let mut values = vec![Value::False; n];
    let radix = [Value::False, Value::True, Value::Unknown];
    let mut digits = vec![0usize; n];
    loop {
        for (v, d) in values.iter_mut().zip(&digits) {
            *v = radix[*d];
        }
        let s = StateSet::from_values(values.clone());
        if domain.is_closed(&s.to_assignment()) {
            out.push(s);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn subsets_up_to(items: &[ActionId], k: usize) -> Vec<ActionSet> {
    let mut out = Vec::new();
    fn rec(items: &[ActionId], k: usize, start: usize, cur: &mut Vec<ActionId>, out: &mut Vec<ActionSet>) {
        if !cur.is_empty() {
            out.push(ActionSet::new(cur.clone()));
        }
        if cur.len() == k {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Looks for a state and action with several `σ'` satisfying
/// `σ' = Cn_Z(E(a, σ) ∪ (σ ∩ σ'))`. Executability is not required.
///
/// Actions without dynamic laws have no effects and are never witnesses, so
/// only combinations of actions that carry dynamic laws are tried.
pub fn check_emergent_nondeterminism(
    domain: &Domain,
    cfg: &CheckConfig,
) -> Result<NondeterminismReport, SemanticError> {
    if domain.num_fluents() > cfg.fluent_cap {
        return Err(SemanticError::CapExceeded { fluents: domain.num_fluents(), cap: cfg.fluent_cap });
    }
    let effectful: Vec<ActionId> = domain.action_ids().filter(|a| !domain.dynamic[a.index()].is_empty()).collect();
    let actions = subsets_up_to(&effectful, cfg.max_concurrency.max(1));
    let states = all_states(domain);
    let mut report = NondeterminismReport { states_checked: states.len(), actions_checked: actions.len(), witnesses: Vec::new() };
    for s in &states {
        for a in &actions {
            let effects = domain.direct_effects(a, s);
            let Some(w) = Assignment::from_lits(domain.num_fluents(), effects) else { continue };
            let fps = domain.fixpoints(s, &w);
            if fps.len() > 1 {
                report.witnesses.push(Witness { state: s.clone(), action: a.clone(), successors: fps });
            }
        }
    }
    Ok(report)
}
