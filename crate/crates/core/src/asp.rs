//! Emits the logic program `Π_AD(I, F, s)` whose answer sets encode the
//! models of `[γ(I, F), s]`, for use with an external answer-set solver.
//!
//! Rules are schematic in `F` (fluents) and `I` (steps); `fluent/1` and
//! `step/1` facts bound them so the program grounds finitely.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::matcher::{assumptions, MatchWitness};
use crate::semantics::{Assignment, Domain, FluentId, Lit, QualifiedActionSequence, Qualifier, SemanticError, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleFamily {
    Law,
    Consistency,
    Inertia,
    Completion,
    Fact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub family: RuleFamily,
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmitStats {
    pub laws: usize,
    pub consistency: usize,
    pub inertia: usize,
    pub completion: usize,
    pub facts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedProgram {
    pub header: Vec<String>,
    pub rules: Vec<Rule>,
    /// Number of transitions; states are numbered `0..=horizon`.
    pub horizon: usize,
    pub stats: EmitStats,
}

impl EmittedProgram {
    fn push(&mut self, family: RuleFamily, text: String) {
        let counter = match family {
            RuleFamily::Law => &mut self.stats.laws,
            RuleFamily::Consistency => &mut self.stats.consistency,
            RuleFamily::Inertia => &mut self.stats.inertia,
            RuleFamily::Completion => &mut self.stats.completion,
            RuleFamily::Fact => &mut self.stats.facts,
        };
        *counter += 1;
        self.rules.push(Rule { family, text });
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "% {h}");
        }
        let mut last = None;
        for r in &self.rules {
            if last != Some(r.family) {
                let _ = writeln!(out, "% {}", family_title(r.family));
                last = Some(r.family);
            }
            let _ = writeln!(out, "{}", r.text);
        }
        out
    }
}

fn family_title(f: RuleFamily) -> &'static str {
    match f {
        RuleFamily::Law => "laws",
        RuleFamily::Consistency => "consistency",
        RuleFamily::Inertia => "inertia",
        RuleFamily::Completion => "completion",
        RuleFamily::Fact => "facts",
    }
}

/// Which program of the match search to emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    /// `Π(I, 𝓕∖𝒟, ℵ^×)`, used to compute the conservative expansion.
    Expansion,
    /// `Π(ε, F, s)`, whose answer sets are the candidate paths.
    C1 { forced: BTreeSet<FluentId>, seq: QualifiedActionSequence },
    /// `Π(X, ∅, ⟨⟩)`, the single-state check against the assumptions.
    C2 { x: Assignment },
}

impl Domain {
    fn chi(&self, l: Lit, step: &str) -> String {
        let f = self.fluent(l.fluent);
        match l.value {
            Value::True => format!("holds({f},{step})"),
            Value::False => format!("-holds({f},{step})"),
            Value::Unknown => format!("u({f},{step})"),
        }
    }

    /// `a/{q}` per step, with `*` for the split-everything qualifier.
    pub fn show_qualified(&self, s: &QualifiedActionSequence) -> String {
        let steps: Vec<String> = s
            .steps
            .iter()
            .map(|st| {
                let q = match &st.qualifier {
                    Qualifier::Exact(q) => self.show_fluents(q),
                    Qualifier::All => "*".to_string(),
                };
                format!("{}/{q}", self.show_action(&st.action))
            })
            .collect();
        format!("<{}>", steps.join("; "))
    }

    /// Positive conditions first, then negative ones, each in name order.
    fn body(&self, lits: &[Lit], step: &str) -> Vec<String> {
        let mut sorted = lits.to_vec();
        sorted.sort_by_key(|l| (l.value != Value::True, l.fluent));
        sorted.into_iter().map(|l| self.chi(l, step)).collect()
    }
}

fn clause(head: &str, body: &[String]) -> String {
    match (head.is_empty(), body.is_empty()) {
        (_, true) => format!("{head}."),
        (true, false) => format!(":- {}.", body.join(", ")),
        (false, false) => format!("{head} :- {}.", body.join(", ")),
    }
}

/// `Π_AD(I, F, s)` for the domain compiled from source `id`.
pub fn emit_program(
    domain: &Domain,
    id: &str,
    init: &Assignment,
    forced: &BTreeSet<FluentId>,
    s: &QualifiedActionSequence,
) -> EmittedProgram {
    use RuleFamily::*;
    let horizon = s.len();
    let mut p = EmittedProgram {
        header: vec![
            format!("source: {id}"),
            format!("I: {}", domain.show_assignment(init)),
            format!("F: {}", domain.show_fluents(forced)),
            format!("s: {}", domain.show_qualified(s)),
            format!("horizon: {horizon}"),
        ],
        rules: Vec::new(),
        horizon,
        stats: EmitStats::default(),
    };

    for a in domain.action_ids() {
        let e = domain.action(a);
        for law in &domain.dynamic[a.index()] {
            let mut body = vec![format!("occurs({e},I)")];
            body.extend(domain.body(&law.body, "I"));
            body.push("step(I)".into());
            let c = law.consequence;
            if c.is_unknown() {
                let f = domain.fluent(c.fluent);
                let mut b1 = body.clone();
                b1.push(format!("not split({f},I)"));
                p.push(Law, clause(&format!("u({f},I+1)"), &b1));
                let mut b2 = body;
                b2.push(format!("split({f},I)"));
                p.push(Law, clause(&format!("holds({f},I+1) | -holds({f},I+1)"), &b2));
            } else {
                p.push(Law, clause(&domain.chi(c, "I+1"), &body));
            }
        }
    }
    for c in &domain.constraints {
        let mut body = domain.body(&c.body, "I");
        body.push("step(I)".into());
        p.push(Law, clause(&domain.chi(c.head, "I"), &body));
    }
    for a in domain.action_ids() {
        let e = domain.action(a);
        for cond in &domain.exec[a.index()] {
            let mut body = vec![format!("occurs({e},I)")];
            body.extend(domain.body(cond, "I"));
            body.push("step(I)".into());
            p.push(Law, clause("", &body));
        }
    }

    p.push(Consistency, ":- holds(F,I), u(F,I), fluent(F), step(I).".into());
    p.push(Consistency, ":- -holds(F,I), u(F,I), fluent(F), step(I).".into());

    let guard = "fluent(F), step(I), step(I+1)";
    p.push(Inertia, format!("holds(F,I+1) :- holds(F,I), not -holds(F,I+1), not u(F,I+1), {guard}."));
    p.push(Inertia, format!("-holds(F,I+1) :- -holds(F,I), not holds(F,I+1), not u(F,I+1), {guard}."));
    p.push(Inertia, format!("u(F,I+1) :- u(F,I), not holds(F,I+1), not -holds(F,I+1), {guard}."));

    p.push(Completion, "holds(F,0) :- init(F).".into());
    p.push(Completion, "-holds(F,0) :- -init(F).".into());
    p.push(Completion, "holds(F,0) :- forced(F), default(F), not -init(F).".into());
    p.push(
        Completion,
        "holds(F,0) | -holds(F,0) :- forced(F), not default(F), not init(F), not -init(F).".into(),
    );
    p.push(Completion, "-holds(F,0) :- default(F), not holds(F,0).".into());
    p.push(Completion, "u(F,0) :- fluent(F), not default(F), not holds(F,0), not -holds(F,0).".into());

    for f in domain.fluent_ids() {
        p.push(Fact, format!("fluent({}).", domain.fluent(f)));
    }
    for i in 0..=horizon {
        p.push(Fact, format!("step({i})."));
    }
    for f in domain.defaults() {
        p.push(Fact, format!("default({}).", domain.fluent(f)));
    }
    for l in init.lits() {
        let f = domain.fluent(l.fluent);
        match l.value {
            Value::True => p.push(Fact, format!("init({f}).")),
            Value::False => p.push(Fact, format!("-init({f}).")),
            Value::Unknown => {}
        }
    }
    for f in forced {
        p.push(Fact, format!("forced({}).", domain.fluent(*f)));
    }
    for (i, st) in s.steps.iter().enumerate() {
        for e in st.action.members() {
            p.push(Fact, format!("occurs({},{i}).", domain.action(*e)));
        }
        let split: Vec<FluentId> = match &st.qualifier {
            Qualifier::Exact(q) => q.iter().copied().collect(),
            Qualifier::All => domain.fluent_ids().collect(),
        };
        for f in split {
            p.push(Fact, format!("split({},{i}).", domain.fluent(f)));
        }
    }
    p
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StageKind {
    Expansion,
    C1,
    C2,
}

impl std::str::FromStr for StageKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "expansion" => Ok(StageKind::Expansion),
            "c1" => Ok(StageKind::C1),
            "c2" => Ok(StageKind::C2),
            _ => Err(format!("unknown stage `{s}` (expected expansion, c1 or c2)")),
        }
    }
}

/// Stage arguments taken from a match witness, or from the unqualified
/// sequence without forcing when there is none. For `C2` without a witness,
/// `X` comes from the first model of that candidate, and is empty when it
/// has none. `None` when `C1` is asked for and the conservative expansion
/// does not exist.
pub fn resolve_stage(
    domain: &Domain,
    kind: StageKind,
    witness: Option<&MatchWitness>,
) -> Result<Option<Stage>, SemanticError> {
    if kind == StageKind::Expansion {
        return Ok(Some(Stage::Expansion));
    }
    let eps = domain.conservative_expansion(domain.initial(), domain.sequence())?;
    let (forced, seq) = match witness {
        Some(w) => (w.forced.clone(), w.seq.clone()),
        None => (BTreeSet::new(), QualifiedActionSequence::unqualified(domain.sequence())),
    };
    Ok(match (kind, eps) {
        (StageKind::C1, None) => None,
        (StageKind::C1, Some(_)) => Some(Stage::C1 { forced, seq }),
        (_, None) => Some(Stage::C2 { x: domain.empty_assignment() }),
        (_, Some(eps)) => {
            let path = match witness {
                Some(w) => Some(w.path.clone()),
                None => {
                    let init = domain.completion_set(&eps, &forced).states;
                    domain.models(init.iter(), &seq)?.into_iter().next()
                }
            };
            let x = path.map_or_else(|| domain.empty_assignment(), |p| assumptions(domain, &p, &eps));
            Some(Stage::C2 { x })
        }
    })
}

/// The program queried at a given stage of the match search.
pub fn emit_for_stage(domain: &Domain, id: &str, stage: &Stage) -> Result<Option<EmittedProgram>, SemanticError> {
    Ok(Some(match stage {
        Stage::Expansion => emit_program(
            domain,
            id,
            domain.initial(),
            &domain.non_defaults().collect(),
            &QualifiedActionSequence::split_all(domain.sequence()),
        ),
        Stage::C1 { forced, seq } => {
            let Some(eps) = domain.conservative_expansion(domain.initial(), domain.sequence())? else {
                return Ok(None);
            };
            emit_program(domain, id, &eps, forced, seq)
        }
        Stage::C2 { x } => emit_program(domain, id, x, &BTreeSet::new(), &QualifiedActionSequence::default()),
    }))
}
