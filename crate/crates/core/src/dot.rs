//! Graphviz export of the transitions visited by a set of paths.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::semantics::{Domain, Path, StateSet};

fn label(s: &StateSet) -> String {
    s.values().iter().map(|v| v.to_string()).collect()
}

/// Renders the states and transitions of `paths` as a DOT digraph. Nodes are
/// labelled with the three-valued assignment in fluent order (`T`, `F`,
/// `U`), edges with the action and the branching-set of the transition.
pub fn paths_to_dot(domain: &Domain, paths: &[Path]) -> String {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for p in paths {
        for (i, s) in p.states.iter().enumerate() {
            nodes.insert((i, s.clone()));
        }
        for (i, a) in p.actions.iter().enumerate() {
            let (from, to) = (&p.states[i], &p.states[i + 1]);
            let beta = domain.branching_set(from, a, to);
            edges.insert((i, from.clone(), to.clone(), domain.show_action(a), domain.show_fluents(&beta)));
        }
    }
    let order: Vec<&str> = domain.fluent_ids().map(|f| domain.fluent(f).name()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "digraph transitions {{");
    let _ = writeln!(out, "  // fluent order: {}", order.join(", "));
    let _ = writeln!(out, "  rankdir=LR;");
    for (i, s) in &nodes {
        let _ = writeln!(out, "  \"{i}:{}\" [label=\"{}\\n{}\"];", label(s), label(s), domain.show_state(s));
    }
    for (i, from, to, a, beta) in &edges {
        let _ = writeln!(out, "  \"{i}:{}\" -> \"{}:{}\" [label=\"{a} / {beta}\"];", label(from), i + 1, label(to));
    }
    let _ = writeln!(out, "}}");
    out
}
