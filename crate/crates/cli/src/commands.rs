use std::fmt::Write as _;
use std::path::Path as FsPath;

use acir_core::asp::{emit_for_stage, resolve_stage, StageKind};
use acir_core::bench::{run_bench, BenchmarkConfig};
use acir_core::corpus::{duplicate_ids, load_corpus, rank as rank_corpus, RankConfig, RankedEntry, RankedList, WitnessSummary, RANK_CHECK_CAP};
use acir_core::dot::paths_to_dot;
use acir_core::parser::decode;
use acir_core::semantics::{check_emergent_nondeterminism, CheckConfig};
use acir_core::{find_match_in, parse_query, validate_source, Domain, MatchResult, Query, SemanticError, Source, SourceDocument};

use crate::error::{warn, CliError};
use crate::{Format, StageArg};

fn read(path: &FsPath) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    decode(&bytes).map_err(|e| CliError::Parse(path.to_path_buf(), e))
}

fn load_query(path: &FsPath) -> Result<Query, CliError> {
    parse_query(&read(path)?).map_err(|e| CliError::Parse(path.to_path_buf(), e))
}

fn load_source(path: &FsPath) -> Result<Source, CliError> {
    let src = SourceDocument::load(path)?.parsed;
    let violations = validate_source(&src);
    if !violations.is_empty() {
        let msg = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        return Err(CliError::Invalid(path.to_path_buf(), msg));
    }
    Ok(src)
}

fn compile(path: &FsPath, src: &Source) -> Result<Domain, CliError> {
    Domain::new(src).map_err(|e| CliError::Invalid(path.to_path_buf(), e.to_string()))
}

/// Global emergent non-determinism check for signatures small enough to
/// enumerate; larger ones are checked along the search.
fn check_emergent(domain: &Domain) -> Result<(), CliError> {
    if domain.num_fluents() > RANK_CHECK_CAP {
        return Ok(());
    }
    let cfg = CheckConfig { fluent_cap: RANK_CHECK_CAP, ..CheckConfig::default() };
    let report = check_emergent_nondeterminism(domain, &cfg)?;
    match report.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(SemanticError::EmergentNonDeterminism {
            state: domain.show_state(&w.state),
            action: domain.show_action(&w.action),
            effects: domain.show_lit_set(&domain.direct_effects(&w.action, &w.state)),
        }
        .into()),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn show_witness(w: &Option<WitnessSummary>) -> (String, String) {
    match w {
        None => ("-".into(), "-".into()),
        Some(w) => {
            let steps: Vec<String> = w
                .s
                .iter()
                .map(|st| {
                    let a = if st.action.len() == 1 { st.action[0].clone() } else { format!("{{{}}}", st.action.join(",")) };
                    format!("{a}/{{{}}}", st.qualifier.join(","))
                })
                .collect();
            (format!("{{{}}}", w.forced.join(",")), steps.join(" "))
        }
    }
}

fn table(list: &RankedList) -> String {
    let rows: Vec<[String; 7]> = list
        .results
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (f, s) = show_witness(&e.witness);
            let mut score = e.score.to_string();
            if e.cap_reached {
                score = format!(">{}", list.config.max_budget.unwrap_or(0));
            }
            [
                (i + 1).to_string(),
                e.id.clone(),
                score,
                if e.matched { "yes" } else { "no" }.into(),
                f,
                s,
                format!("{:.2}", e.elapsed_ms),
            ]
        })
        .collect();
    let header = ["#", "id", "score", "matched", "F", "s", "ms"].map(String::from);
    let mut widths = header.clone().map(|h| h.chars().count());
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    for e in &list.results {
        if let Some(err) = &e.error {
            let _ = writeln!(out, "{}: {err}", e.id);
        }
    }
    out
}

pub fn rank(
    query: &FsPath,
    sources: &FsPath,
    max_budget: Option<usize>,
    jobs: Option<usize>,
    format: Format,
) -> Result<(), CliError> {
    let q = load_query(query)?;
    let corpus = load_corpus(sources).map_err(|e| CliError::Io(sources.to_path_buf(), e))?;
    for (_, e) in &corpus.errors {
        warn("skipped_source", &e.to_string());
    }
    if corpus.sources.is_empty() {
        if let Some((p, e)) = corpus.errors.first() {
            return Err(clone_load_error(p, e).into());
        }
        warn("empty_corpus", &format!("no .acir files in {}", sources.display()));
    }
    for id in duplicate_ids(&corpus.sources) {
        warn("duplicate_id", &format!("several sources have id `{id}`"));
    }
    let mut cfg = RankConfig { max_budget, ..RankConfig::default() };
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        cfg.jobs = j;
    }
    let list = rank_corpus(&q, &corpus.sources, &cfg);
    match format {
        Format::Json => print_json(&list),
        Format::Table => {
            print!("{}", table(&list));
            Ok(())
        }
    }
}

fn clone_load_error(p: &FsPath, e: &acir_core::parser::LoadError) -> acir_core::parser::LoadError {
    use acir_core::parser::LoadError;
    match e {
        LoadError::Io(_, io) => LoadError::Io(p.to_path_buf(), std::io::Error::new(io.kind(), io.to_string())),
        LoadError::Parse(_, pe) => LoadError::Parse(p.to_path_buf(), pe.clone()),
    }
}

fn explain(domain: &Domain, r: &MatchResult) -> String {
    let mut out = String::new();
    let d = &r.diagnostics;
    let _ = writeln!(out, "candidates: {}, models: {}, elapsed: {:?}", d.candidates, d.models, d.elapsed);
    if d.cap_reached {
        let _ = writeln!(out, "stopped at the budget cap: the score is only known to exceed it");
    }
    let Some(w) = &r.witness else { return out };
    let _ = writeln!(out, "F: {}", domain.show_fluents(&w.forced));
    let _ = writeln!(out, "s: {}", domain.show_qualified(&w.seq));
    let _ = writeln!(out, "path:");
    for (i, st) in w.path.states.iter().enumerate() {
        let _ = writeln!(out, "  {i}: {}", domain.show_state(st));
        if let Some(a) = w.path.actions.get(i) {
            let beta = domain.branching_set(st, a, &w.path.states[i + 1]);
            let _ = writeln!(out, "     {} / {}", domain.show_action(a), domain.show_fluents(&beta));
        }
    }
    out
}

pub fn match_one(
    query: &FsPath,
    source: &FsPath,
    explain_flag: bool,
    dot: Option<&FsPath>,
    max_budget: Option<usize>,
    format: Format,
) -> Result<(), CliError> {
    let q = load_query(query)?;
    let src = load_source(source)?;
    let domain = compile(source, &src)?;
    let f = domain.fluent_id(q.fluent.name()).ok_or_else(|| {
        CliError::Invalid(source.to_path_buf(), format!("query fluent `{}` is not in the source signature", q.fluent))
    })?;
    check_emergent(&domain)?;
    let r = find_match_in(&domain, f, max_budget)?;
    if let Some(path) = dot {
        let paths: Vec<_> = r.witness.iter().map(|w| w.path.clone()).collect();
        std::fs::write(path, paths_to_dot(&domain, &paths)).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    match format {
        Format::Json => print_json(&RankedEntry {
            id: src.id.clone(),
            score: r.score,
            matched: r.matched,
            witness: r.witness.as_ref().map(|w| WitnessSummary::new(&domain, w)),
            elapsed_ms: r.diagnostics.elapsed.as_secs_f64() * 1000.0,
            error: None,
            cap_reached: r.diagnostics.cap_reached,
        }),
        Format::Table => {
            println!("source: {}", src.id);
            println!("query: {}", q.fluent);
            println!("score: {}", r.score);
            println!("matched: {}", if r.matched { "yes" } else { "no" });
            if explain_flag {
                print!("{}", explain(&domain, &r));
            }
            Ok(())
        }
    }
}

pub fn emit_asp(source: &FsPath, stage: StageArg, query: Option<&FsPath>, output: &FsPath) -> Result<(), CliError> {
    let src = load_source(source)?;
    let domain = compile(source, &src)?;
    check_emergent(&domain)?;
    let witness = match query {
        None => None,
        Some(qp) => {
            let q = load_query(qp)?;
            let f = domain.fluent_id(q.fluent.name()).ok_or_else(|| {
                CliError::Invalid(source.to_path_buf(), format!("query fluent `{}` is not in the source signature", q.fluent))
            })?;
            find_match_in(&domain, f, None)?.witness
        }
    };
    let kind = match stage {
        StageArg::Expansion => StageKind::Expansion,
        StageArg::C1 => StageKind::C1,
        StageArg::C2 => StageKind::C2,
    };
    let program = match resolve_stage(&domain, kind, witness.as_ref())? {
        Some(st) => emit_for_stage(&domain, &src.id, &st)?,
        None => None,
    };
    let Some(program) = program else {
        return Err(CliError::Invalid(
            source.to_path_buf(),
            "the conservative expansion does not exist, so the search queries no such program".into(),
        ));
    };
    std::fs::write(output, program.text()).map_err(|e| CliError::Io(output.to_path_buf(), e))?;
    println!("wrote {} rules to {}", program.rules.len(), output.display());
    Ok(())
}

pub fn bench(cfg: &BenchmarkConfig, output: &FsPath) -> Result<(), CliError> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_bench(cfg, output).map_err(|e| CliError::Output(e.to_string()))?;
    print!("{}", report.summary_text());
    if report.summary.match_faster() == Some(false) {
        warn("timing", "matching instances were not faster on average than non-matching ones");
    }
    Ok(())
}

pub fn validate(paths: &[std::path::PathBuf]) -> Result<(), CliError> {
    let mut worst: Option<CliError> = None;
    let mut failed = 0;
    for p in paths {
        let outcome = load_source(p).and_then(|src| {
            let d = compile(p, &src)?;
            check_emergent(&d)
        });
        match outcome {
            Ok(()) => println!("{}: ok", p.display()),
            Err(e) => {
                match e {
                    CliError::Semantic(_) => println!("{}: {e}", p.display()),
                    _ => println!("{e}"),
                }
                crate::error::emit(&e);
                failed += 1;
                let replace = worst.as_ref().is_none_or(|w| e.exit_code() < w.exit_code());
                if replace {
                    worst = Some(e);
                }
            }
        }
    }
    match worst {
        None => Ok(()),
        Some(e) => Err(CliError::Failed { failed, total: paths.len(), code: e.exit_code() }),
    }
}
