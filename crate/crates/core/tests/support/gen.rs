//! Random small sources for property tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use acir_core::semantics::{StateSet, Value};
use acir_core::{
    Action, ActionDescription, ElementaryAction, ExtendedLiteral, Fluent, FluentLiteral, Law, Signature, Source,
};
use proptest::prelude::*;

#[derive(Clone, Debug)]
pub struct Shape {
    pub max_fluents: usize,
    pub max_actions: usize,
    pub max_laws_per_kind: usize,
    pub max_steps: usize,
    pub allow_unknown: bool,
    pub allow_defaults: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_fluents: 4, max_actions: 3, max_laws_per_kind: 3, max_steps: 3, allow_unknown: true, allow_defaults: true }
    }
}

type RawLit = (usize, bool);

fn raw_conditions() -> impl Strategy<Value = Vec<RawLit>> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..=2)
}

fn raw_nonempty_conditions() -> impl Strategy<Value = Vec<RawLit>> {
    prop::collection::vec((0usize..8, any::<bool>()), 1..=2)
}

#[derive(Clone, Debug)]
struct Raw {
    n: usize,
    m: usize,
    dynamic: Vec<(usize, usize, u8, Vec<RawLit>)>,
    constraints: Vec<(RawLit, Vec<RawLit>)>,
    exec: Vec<(usize, Vec<RawLit>)>,
    defaults: Vec<bool>,
    initial: Vec<Option<bool>>,
    seq: Vec<Vec<usize>>,
}

fn build(raw: Raw, shape: &Shape) -> Source {
    let fl = |i: usize| Fluent::new(format!("f{}", i % raw.n));
    let ac = |i: usize| ElementaryAction::new(format!("a{}", i % raw.m));
    let lit = |(i, p): RawLit| FluentLiteral { fluent: fl(i), positive: p };
    let conds = |c: &[RawLit]| -> BTreeSet<FluentLiteral> {
        let mut out = BTreeSet::new();
        for l in c {
            let l = lit(*l);
            if !out.contains(&l.complement()) {
                out.insert(l);
            }
        }
        out
    };
    let mut laws = BTreeSet::new();
    for (a, f, v, c) in &raw.dynamic {
        let consequence = match v % 3 {
            2 if shape.allow_unknown => ExtendedLiteral::Unknown(fl(*f)),
            x => ExtendedLiteral::Literal(FluentLiteral { fluent: fl(*f), positive: x == 1 }),
        };
        laws.insert(Law::Dynamic { action: ac(*a), consequence, conditions: conds(c) });
    }
    for (h, c) in &raw.constraints {
        laws.insert(Law::StateConstraint { head: ExtendedLiteral::Literal(lit(*h)), conditions: conds(c) });
    }
    for (a, c) in &raw.exec {
        laws.insert(Law::Executability { action: ac(*a), conditions: conds(c) });
    }
    Source {
        id: "gen".into(),
        signature: Signature {
            fluents: (0..raw.n).map(fl).collect(),
            actions: (0..raw.m).map(ac).collect(),
        },
        defaults: (0..raw.n).filter(|i| shape.allow_defaults && raw.defaults[*i]).map(fl).collect(),
        description: ActionDescription { laws },
        initial: (0..raw.n).filter_map(|i| raw.initial[i].map(|p| lit((i, p)))).collect(),
        sequence: raw
            .seq
            .iter()
            .map(|step| Action { members: step.iter().map(|a| ac(*a)).collect() })
            .collect(),
    }
}

pub fn source(shape: Shape) -> impl Strategy<Value = Source> {
    let k = shape.max_laws_per_kind;
    (1..=shape.max_fluents, 1..=shape.max_actions)
        .prop_flat_map(move |(n, m)| {
            (
                Just(n),
                Just(m),
                prop::collection::vec((0usize..8, 0usize..8, 0u8..3, raw_conditions()), 0..=k),
                prop::collection::vec(((0usize..8, any::<bool>()), raw_nonempty_conditions()), 0..=k),
                prop::collection::vec((0usize..8, raw_nonempty_conditions()), 0..=k),
                prop::collection::vec(prop::bool::weighted(0.3), n),
                prop::collection::vec(prop::option::weighted(0.3, any::<bool>()), n),
                prop::collection::vec(prop::collection::vec(0usize..8, 1..=2), 0..=shape.max_steps),
            )
        })
        .prop_map(move |(n, m, dynamic, constraints, exec, defaults, initial, seq)| {
            build(Raw { n, m, dynamic, constraints, exec, defaults, initial, seq }, &shape)
        })
}

/// `(source, query fluent name)`.
pub fn source_and_query(shape: Shape) -> impl Strategy<Value = (Source, String)> {
    source(shape).prop_flat_map(|s| {
        let names: Vec<String> = s.signature.fluents.iter().map(|f| f.name().to_string()).collect();
        (Just(s), prop::sample::select(names))
    })
}

pub fn to_oracle_state(s: &StateSet) -> Vec<u8> {
    s.values()
        .iter()
        .map(|v| match v {
            Value::False => 0,
            Value::True => 1,
            Value::Unknown => 2,
        })
        .collect()
}
