//! Runs emitted programs through an external answer-set solver and compares
//! the decoded answer sets with the native models.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};

use acir_core::asp::emit_program;
use acir_core::matcher::{candidate_iterator, max_budget};
use acir_core::semantics::{Assignment, FluentId, Value};
use acir_core::{Domain, QualifiedActionSequence, Source};

/// State sequences, one value character per fluent in fluent order.
pub type Trace = Vec<String>;

/// The solver command: `ACIR_CLINGO`, else `clingo`, else the Python module.
pub fn solver() -> Option<Vec<String>> {
    let candidates: Vec<Vec<String>> = match std::env::var("ACIR_CLINGO") {
        Ok(cmd) => vec![cmd.split_whitespace().map(String::from).collect()],
        Err(_) => vec![vec!["clingo".into()], vec!["python3".into(), "-m".into(), "clingo".into()]],
    };
    candidates.into_iter().find(|c| {
        !c.is_empty()
            && Command::new(&c[0])
                .args(&c[1..])
                .arg("--version")
                .stdout(Stdio::null())
                .stderr(Stdio::null())
                .status()
                .is_ok_and(|s| s.success())
    })
}

fn solve(cmd: &[String], program: &str) -> Result<Vec<BTreeSet<String>>, String> {
    let mut child = Command::new(&cmd[0])
        .args(&cmd[1..])
        .args(["-n", "0", "--warn=none", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().unwrap().write_all(program.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    if !text.contains("SATISFIABLE") {
        return Err(format!("solver failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut sets = Vec::new();
    let mut lines = text.lines();
    while let Some(l) = lines.next() {
        if l.starts_with("Answer:") {
            sets.push(lines.next().unwrap_or("").split_whitespace().map(String::from).collect());
        }
    }
    Ok(sets)
}

fn decode(d: &Domain, horizon: usize, atoms: &BTreeSet<String>) -> Result<Trace, String> {
    let mut states = vec![vec![None::<char>; d.num_fluents()]; horizon + 1];
    for a in atoms {
        let (v, rest) = if let Some(r) = a.strip_prefix("-holds(") {
            ('F', r)
        } else if let Some(r) = a.strip_prefix("holds(") {
            ('T', r)
        } else if let Some(r) = a.strip_prefix("u(") {
            ('U', r)
        } else {
            continue;
        };
        let (f, i) = rest.trim_end_matches(')').split_once(',').ok_or(format!("bad atom {a}"))?;
        let f = d.fluent_id(f).ok_or(format!("unknown fluent in {a}"))?;
        let i: usize = i.parse().map_err(|_| format!("bad step in {a}"))?;
        let slot = &mut states.get_mut(i).ok_or(format!("step out of range in {a}"))?[f.index()];
        if slot.replace(v).is_some() {
            return Err(format!("two values for {a}"));
        }
    }
    states
        .into_iter()
        .map(|s| s.into_iter().collect::<Option<String>>().ok_or_else(|| "incomplete state".to_string()))
        .collect()
}

fn native(d: &Domain, init: &Assignment, forced: &BTreeSet<FluentId>, s: &QualifiedActionSequence) -> BTreeSet<Trace> {
    let start = d.completion_set(init, forced).states;
    d.models(start.iter(), s)
        .unwrap()
        .into_iter()
        .map(|p| {
            p.states
                .iter()
                .map(|st| {
                    st.values()
                        .iter()
                        .map(|v| match v {
                            Value::True => 'T',
                            Value::False => 'F',
                            Value::Unknown => 'U',
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Compares the programs of the expansion stage and of every search
/// candidate; returns the number of programs checked.
pub fn cross_check(cmd: &[String], src: &Source) -> Result<usize, String> {
    let d = Domain::new(src).map_err(|e| e.to_string())?;
    let mut jobs = vec![(
        d.initial().clone(),
        d.non_defaults().collect::<BTreeSet<_>>(),
        QualifiedActionSequence::split_all(d.sequence()),
    )];
    if let Some(eps) = d.conservative_expansion(d.initial(), d.sequence()).map_err(|e| e.to_string())? {
        for b in 0..=max_budget(&d) {
            for c in candidate_iterator(&d, b) {
                jobs.push((eps.clone(), c.forced, c.seq));
            }
        }
    }
    for (init, forced, s) in &jobs {
        let program = emit_program(&d, &src.id, init, forced, s).text();
        let got: BTreeSet<Trace> =
            solve(cmd, &program)?.iter().map(|a| decode(&d, s.len(), a)).collect::<Result<_, _>>()?;
        let want = native(&d, init, forced, s);
        if got != want {
            return Err(format!(
                "{}: I={} F={}: solver {:?}, native {:?}",
                src.id,
                d.show_assignment(init),
                d.show_fluents(forced),
                got,
                want
            ));
        }
    }
    Ok(jobs.len())
}
