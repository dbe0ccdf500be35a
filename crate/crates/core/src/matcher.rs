//! Match conditions, semantic score and the budget-ordered match search.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::semantics::{
    branching_degree, entails, Assignment, Domain, DomainError, FluentId, Path, QualifiedActionSequence,
    QualifiedStep, Qualifier, SemanticError, Target, Value,
};
use crate::types::{Query, Source};

/// A semantic score: a natural number, or infinity for sources that do not
/// match. Orders with infinity last.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Score {
    Finite(usize),
    Infinite,
}

impl Score {
    pub fn is_finite(self) -> bool {
        matches!(self, Score::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Score::Finite(n) => Some(n),
            Score::Infinite => None,
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Finite(n) => write!(f, "{n}"),
            Score::Infinite => f.write_str("∞"),
        }
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Score::Finite(n) => s.serialize_u64(*n as u64),
            Score::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Score::Finite(n as usize)),
            Raw::S(s) if s == "inf" => Ok(Score::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("invalid score `{s}`"))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MatchError {
    #[error("query fluent `{0}` is not in the source signature")]
    QueryNotInSignature(String),
    #[error(transparent)]
    Invalid(#[from] DomainError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// A pair `(F, s)` considered by the search.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub forced: BTreeSet<FluentId>,
    pub seq: QualifiedActionSequence,
}

impl Candidate {
    pub fn cost(&self, num_fluents: usize) -> usize {
        self.forced.len() + branching_degree(&self.seq, num_fluents)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchWitness {
    pub forced: BTreeSet<FluentId>,
    pub seq: QualifiedActionSequence,
    pub path: Path,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub candidates: usize,
    pub models: usize,
    pub elapsed: Duration,
    /// Highest budget fully explored (or the matching budget).
    pub budget_explored: Option<usize>,
    /// The search stopped at the budget cap before exhausting the space: an
    /// infinite score then only means "greater than the cap".
    pub cap_reached: bool,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub matched: bool,
    pub score: Score,
    pub witness: Option<MatchWitness>,
    pub diagnostics: Diagnostics,
}

/// Models of `[γ(ε, F), s]` that entail `±q`.
pub fn check_c1(
    domain: &Domain,
    q: FluentId,
    forced: &BTreeSet<FluentId>,
    s: &QualifiedActionSequence,
    eps: &Assignment,
) -> Result<Vec<Path>, SemanticError> {
    let init = domain.completion_set(eps, forced).states;
    Ok(domain.models(init.iter(), s)?.into_iter().filter(|p| entails(p, Target::PlusMinus(q))).collect())
}

/// Whether the assumptions behind `path` are not solely responsible for its
/// verdict on `q`: the initial state stripped of everything beyond `ε` and
/// completed again must not fix `q` the same way.
pub fn check_c2(domain: &Domain, q: FluentId, path: &Path, eps: &Assignment) -> bool {
    let Some(sigma) = domain.complete(&assumptions(domain, path, eps)) else { return true };
    let last = path.last().get(q);
    match sigma.get(q) {
        Value::Unknown => true,
        Value::False => last == Value::True,
        Value::True => last == Value::False,
    }
}

/// The known literals of the initial state of `path` that are not in `eps`.
pub fn assumptions(domain: &Domain, path: &Path, eps: &Assignment) -> Assignment {
    Assignment::from_lits(
        domain.num_fluents(),
        path.initial().lits().filter(|l| l.value.is_known() && !eps.contains(*l)),
    )
    .expect("subset of a state")
}

/// Every `(step, fluent)` where the step may have a non-deterministic effect
/// on the fluent, in step order then fluent order.
fn split_slots(domain: &Domain) -> Vec<(usize, FluentId)> {
    domain
        .sequence()
        .iter()
        .enumerate()
        .flat_map(|(i, a)| domain.potential_unknown_effects(a).into_iter().map(move |f| (i, f)))
        .collect()
}

/// The largest budget at which any candidate exists.
pub fn max_budget(domain: &Domain) -> usize {
    domain.num_fluents() + split_slots(domain).len()
}

/// All candidates `(F, s)` with `|F| + Δ(s) = budget`, ordered by `|F|`,
/// then `F`, then the qualifier assignment. Qualifiers are restricted to
/// potential non-deterministic effects of each step.
pub fn candidate_iterator(domain: &Domain, budget: usize) -> impl Iterator<Item = Candidate> + '_ {
    let slots = split_slots(domain);
    let fluents: Vec<FluentId> = domain.fluent_ids().collect();
    let n_steps = domain.sequence().len();
    (0..=budget.min(fluents.len()))
        .filter(move |k| budget - k <= split_slots(domain).len())
        .flat_map(move |k| {
            let slots = slots.clone();
            fluents.clone().into_iter().combinations(k).flat_map(move |f| {
                let forced: BTreeSet<FluentId> = f.into_iter().collect();
                slots.clone().into_iter().combinations(budget - k).map(move |chosen| {
                    let mut qs = vec![BTreeSet::new(); n_steps];
                    for (i, fl) in chosen {
                        qs[i].insert(fl);
                    }
                    Candidate {
                        forced: forced.clone(),
                        seq: QualifiedActionSequence {
                            steps: domain
                                .sequence()
                                .iter()
                                .zip(qs)
                                .map(|(a, q)| QualifiedStep { action: a.clone(), qualifier: Qualifier::Exact(q) })
                                .collect(),
                        },
                    }
                })
            })
        })
}

/// Searches budgets `0, 1, 2, ...` up to `cap` (or exhaustion) for the first
/// candidate with a model satisfying both match conditions.
pub fn find_match_in(domain: &Domain, q: FluentId, cap: Option<usize>) -> Result<MatchResult, SemanticError> {
    let start = Instant::now();
    let mut diag = Diagnostics::default();
    let unmatched = |mut diag: Diagnostics| {
        diag.elapsed = start.elapsed();
        MatchResult { matched: false, score: Score::Infinite, witness: None, diagnostics: diag }
    };
    let Some(eps) = domain.conservative_expansion(domain.initial(), domain.sequence())? else {
        return Ok(unmatched(diag));
    };
    let top = max_budget(domain);
    let last = cap.map_or(top, |c| c.min(top));
    for budget in 0..=last {
        for cand in candidate_iterator(domain, budget) {
            diag.candidates += 1;
            let init = domain.completion_set(&eps, &cand.forced).states;
            let models = domain.models(init.iter(), &cand.seq)?;
            diag.models += models.len();
            let hit = models
                .into_iter()
                .find(|p| entails(p, Target::PlusMinus(q)) && check_c2(domain, q, p, &eps));
            if let Some(path) = hit {
                diag.budget_explored = Some(budget);
                diag.elapsed = start.elapsed();
                return Ok(MatchResult {
                    matched: true,
                    score: Score::Finite(budget),
                    witness: Some(MatchWitness { forced: cand.forced, seq: cand.seq, path }),
                    diagnostics: diag,
                });
            }
        }
        diag.budget_explored = Some(budget);
    }
    diag.cap_reached = last < top;
    Ok(unmatched(diag))
}

/// Compiles the source and runs the match search for `q`.
pub fn find_match(src: &Source, q: &Query, cap: Option<usize>) -> Result<MatchResult, MatchError> {
    let domain = Domain::new(src)?;
    let f = domain
        .fluent_id(q.fluent.name())
        .ok_or_else(|| MatchError::QueryNotInSignature(q.fluent.name().to_string()))?;
    Ok(find_match_in(&domain, f, cap)?)
}

/// The semantic score of `src` for `q`.
pub fn score(src: &Source, q: &Query) -> Result<Score, MatchError> {
    find_match(src, q, None).map(|r| r.score)
}
