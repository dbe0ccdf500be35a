//! Exact expected values for the semantic building blocks, written against
//! the public interface.

#![allow(dead_code)]

use std::collections::BTreeSet;

use acir_core::semantics::{
    branching_degree, check_emergent_nondeterminism, join, Assignment, CheckConfig, FluentId, Lit, QualifiedStep,
};
use acir_core::{parse_source, Domain, Fluent, Path, QualifiedActionSequence, Qualifier, Query, Score};

use super::fixture;

pub type Check = (&'static str, fn() -> Result<(), String>);

macro_rules! ensure_eq {
    ($got:expr, $want:expr) => {{
        let (g, w) = (&$got, &$want);
        if g != w {
            return Err(format!("{}: got {:?}, want {:?}", stringify!($got), g, w));
        }
    }};
}

fn domain(text: &str) -> Domain {
    Domain::new(&parse_source(text).expect("parses")).expect("compiles")
}

fn lits(d: &Domain, names: &[&str]) -> BTreeSet<Lit> {
    names.iter().map(|n| d.lit(n).unwrap()).collect()
}

fn fset(d: &Domain, names: &[&str]) -> BTreeSet<FluentId> {
    names.iter().map(|n| d.fluent_id(n).unwrap()).collect()
}

fn sets(d: &Domain, xs: &[&[&str]]) -> BTreeSet<Assignment> {
    xs.iter().map(|x| d.assignment(x)).collect()
}

fn running(rest: &str) -> Domain {
    domain(&format!("fluents: m, ab. defaults: ab. actions: d, r. law: impossible d if m, -ab. {rest}"))
}

pub fn fixture_scores() -> Result<(), String> {
    let q = Query { fluent: Fluent::new("m") };
    for (id, want) in [
        ("ex1_s1", Score::Finite(0)),
        ("ex1_s2", Score::Infinite),
        ("ex2", Score::Infinite),
        ("ex3", Score::Finite(0)),
        ("ex4", Score::Finite(1)),
    ] {
        let got = acir_core::score(&fixture(&format!("{id}.acir")), &q).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("{id}: got {got}, want {want}"));
        }
    }
    Ok(())
}

pub fn join_examples() -> Result<(), String> {
    let set = |xs: &[&'static str]| xs.iter().copied().collect::<BTreeSet<_>>();
    let a: BTreeSet<BTreeSet<&str>> = [set(&["p"]), set(&["q"])].into();
    ensure_eq!(
        join(&a, &set(&["r", "-r"])),
        BTreeSet::from([set(&["p", "r"]), set(&["p", "-r"]), set(&["q", "r"]), set(&["q", "-r"])])
    );
    let a: BTreeSet<BTreeSet<&str>> = [set(&["p", "q"])].into();
    ensure_eq!(
        join(&join(&a, &set(&["r", "-r"])), &set(&["s", "-s"])),
        BTreeSet::from([
            set(&["p", "q", "r", "s"]),
            set(&["p", "q", "r", "-s"]),
            set(&["p", "q", "-r", "s"]),
            set(&["p", "q", "-r", "-s"]),
        ])
    );
    let a: BTreeSet<BTreeSet<&str>> = [set(&["x"])].into();
    ensure_eq!(join(&a, &set(&["y"])), BTreeSet::from([set(&["x", "y"])]));
    Ok(())
}

fn transition_example() -> Domain {
    domain(
        "fluents: f1, f2, f3. actions: e1.
         law: e1 causes f1. law: e1 causes u(f2). law: f3 if f1.
         initial: . sequence: e1.",
    )
}

pub fn expansion_and_successors() -> Result<(), String> {
    let d = transition_example();
    let s0 = d.state(&["-f1", "-f2", "-f3"]);
    let e1 = d.action_set(&["e1"]);
    ensure_eq!(
        d.expansion(&e1, &s0),
        BTreeSet::from([lits(&d, &["f1", "u(f2)"]), lits(&d, &["f1", "f2"]), lits(&d, &["f1", "-f2"])])
    );
    let got: BTreeSet<_> = d
        .successors(&s0, &e1, None)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|t| {
            let beta = d.branching_set(&s0, &e1, &t);
            (t, beta)
        })
        .collect();
    let want = BTreeSet::from([
        (d.state(&["f1", "u(f2)", "f3"]), BTreeSet::new()),
        (d.state(&["f1", "f2", "f3"]), fset(&d, &["f2"])),
        (d.state(&["f1", "-f2", "f3"]), fset(&d, &["f2"])),
    ]);
    ensure_eq!(got, want);
    Ok(())
}

pub fn qualified_models() -> Result<(), String> {
    let d = domain(
        "fluents: f, g. actions: a1, a2.
         law: a1 causes -g if g. law: a2 causes u(f) if -g.
         initial: . sequence: a1; a2.",
    );
    let q = |a: &str, fs: &[&str]| QualifiedStep { action: d.action_set(&[a]), qualifier: Qualifier::Exact(fset(&d, fs)) };
    let s1 = QualifiedActionSequence { steps: vec![q("a1", &[]), q("a2", &[])] };
    let s2 = QualifiedActionSequence { steps: vec![q("a1", &[]), q("a2", &["f"])] };
    ensure_eq!(branching_degree(&s1, d.num_fluents()), 0);
    ensure_eq!(branching_degree(&s2, d.num_fluents()), 1);
    let sigma = d.state(&["-f", "g"]);
    let acts = vec![d.action_set(&["a1"]), d.action_set(&["a2"])];
    let path = |last: &[&str]| Path {
        states: vec![sigma.clone(), d.state(&["-f", "-g"]), d.state(last)],
        actions: acts.clone(),
    };
    let m1: BTreeSet<Path> = d.models([&sigma], &s1).map_err(|e| e.to_string())?.into_iter().collect();
    ensure_eq!(m1, BTreeSet::from([path(&["u(f)", "-g"])]));
    let m2: BTreeSet<Path> = d.models([&sigma], &s2).map_err(|e| e.to_string())?.into_iter().collect();
    ensure_eq!(m2, BTreeSet::from([path(&["f", "-g"]), path(&["-f", "-g"])]));
    Ok(())
}

pub fn forcing() -> Result<(), String> {
    let d = running("initial: . sequence: d.");
    let e = d.empty_assignment();
    ensure_eq!(d.force_all(&e, &fset(&d, &["m"])), sets(&d, &[&["m"], &["-m"]]));
    ensure_eq!(d.force_all(&e, &fset(&d, &["m", "ab"])), sets(&d, &[&["m", "ab"], &["-m", "ab"]]));
    Ok(())
}

pub fn completions() -> Result<(), String> {
    let d = running("initial: . sequence: d.");
    ensure_eq!(d.complete(&d.assignment(&["m"])), Some(d.state(&["m", "-ab"])));
    ensure_eq!(d.complete(&d.assignment(&["-m"])), Some(d.state(&["-m", "-ab"])));
    let c = d.completion_set(&d.empty_assignment(), &BTreeSet::new());
    ensure_eq!(c.states, BTreeSet::from([d.state(&["u(m)", "-ab"])]));
    ensure_eq!(c.degree, 0);
    Ok(())
}

pub fn completion_nonexistence() -> Result<(), String> {
    let d = domain("fluents: p, q. actions: a. law: -q if p. initial: . sequence: .");
    ensure_eq!(d.complete(&d.assignment(&["p", "q"])), None);
    Ok(())
}

pub fn conservative_expansions() -> Result<(), String> {
    for (rest, want) in [
        ("initial: . sequence: d.", vec!["-m"]),
        ("initial: . sequence: r.", vec![]),
        ("initial: ab. sequence: d.", vec!["ab"]),
    ] {
        let d = running(rest);
        let got = d.conservative_expansion(d.initial(), d.sequence()).map_err(|e| e.to_string())?;
        ensure_eq!(got, Some(d.assignment(&want)));
    }
    Ok(())
}

pub fn emergent_witness() -> Result<(), String> {
    let d = domain(
        "fluents: p, q, r. actions: a.
         law: q if -r, p. law: r if -q, p. law: a causes p.
         initial: . sequence: a.",
    );
    let report = check_emergent_nondeterminism(&d, &CheckConfig::default()).map_err(|e| e.to_string())?;
    let w = report.witnesses.first().ok_or("no witness reported")?;
    if w.successors.len() < 2 {
        return Err(format!("witness has {} successors", w.successors.len()));
    }
    if d.successors(&w.state, &w.action, None).is_ok() {
        return Err("successor computation accepted an emergent step".into());
    }
    Ok(())
}

pub const UNIT_GOLDENS: [Check; 9] = [
    ("join", join_examples),
    ("expansion and successors", expansion_and_successors),
    ("qualified models", qualified_models),
    ("forcing", forcing),
    ("completion", completions),
    ("completion non-existence", completion_nonexistence),
    ("conservative expansion", conservative_expansions),
    ("emergent witness", emergent_witness),
    ("fixture scores", fixture_scores),
];
