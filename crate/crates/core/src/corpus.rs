//! Loading a directory of sources and ranking them against a query.

use std::collections::BTreeSet;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matcher::{find_match_in, MatchWitness, Score};
use crate::parser::{LoadError, SourceDocument};
use crate::semantics::{check_emergent_nondeterminism, CheckConfig, Domain, Qualifier, SemanticError};
use crate::types::{Query, Source};

/// Sources are checked for emergent non-determinism up front when their
/// signature has at most this many fluents; larger ones rely on detection
/// during the search.
pub const RANK_CHECK_CAP: usize = 10;

#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub sources: Vec<Source>,
    pub errors: Vec<(PathBuf, LoadError)>,
}

/// Parses every `.acir` file of `dir`, in file-name order. Files that fail to
/// load are reported and skipped.
pub fn load_corpus(dir: &FsPath) -> std::io::Result<LoadedCorpus> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "acir"))
        .collect();
    paths.sort();
    let mut out = LoadedCorpus::default();
    for p in paths {
        match SourceDocument::load(&p) {
            Ok(doc) => out.sources.push(doc.parsed),
            Err(e) => out.errors.push((p, e)),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankConfig {
    pub max_budget: Option<usize>,
    pub jobs: usize,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig { max_budget: None, jobs: std::thread::available_parallelism().map_or(1, |n| n.get()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSummary {
    pub action: Vec<String>,
    pub qualifier: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    #[serde(rename = "F")]
    pub forced: Vec<String>,
    pub s: Vec<StepSummary>,
}

impl WitnessSummary {
    pub fn new(domain: &Domain, w: &MatchWitness) -> Self {
        WitnessSummary {
            forced: w.forced.iter().map(|f| domain.fluent(*f).to_string()).collect(),
            s: w
                .seq
                .steps
                .iter()
                .map(|st| StepSummary {
                    action: st.action.members().iter().map(|e| domain.action(*e).to_string()).collect(),
                    qualifier: match &st.qualifier {
                        Qualifier::Exact(q) => q.iter().map(|f| domain.fluent(*f).to_string()).collect(),
                        Qualifier::All => domain.fluent_ids().map(|f| domain.fluent(f).to_string()).collect(),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub id: String,
    pub score: Score,
    pub matched: bool,
    pub witness: Option<WitnessSummary>,
    pub elapsed_ms: f64,
    pub error: Option<String>,
    /// The search stopped at the budget cap: the score is only known to
    /// exceed it.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cap_reached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub query: String,
    pub config: RankConfig,
    pub results: Vec<RankedEntry>,
}

impl RankedList {
    /// The same list with all timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> RankedList {
        let mut r = self.clone();
        for e in &mut r.results {
            e.elapsed_ms = 0.0;
        }
        r
    }
}

/// Scores one source, turning every failure into an infinite score with an
/// error annotation.
pub fn evaluate(src: &Source, q: &Query, max_budget: Option<usize>) -> RankedEntry {
    let start = Instant::now();
    let mut entry = RankedEntry {
        id: src.id.clone(),
        score: Score::Infinite,
        matched: false,
        witness: None,
        elapsed_ms: 0.0,
        error: None,
        cap_reached: false,
    };
    let outcome = (|| -> Result<_, String> {
        let domain = Domain::new(src).map_err(|e| e.to_string())?;
        let f = domain
            .fluent_id(q.fluent.name())
            .ok_or_else(|| format!("query fluent `{}` is not in the source signature", q.fluent))?;
        if domain.num_fluents() <= RANK_CHECK_CAP {
            let cfg = CheckConfig { fluent_cap: RANK_CHECK_CAP, ..CheckConfig::default() };
            let report = check_emergent_nondeterminism(&domain, &cfg).map_err(|e| e.to_string())?;
            if let Some(w) = report.witnesses.first() {
                return Err(SemanticError::EmergentNonDeterminism {
                    state: domain.show_state(&w.state),
                    action: domain.show_action(&w.action),
                    effects: domain.show_lit_set(&domain.direct_effects(&w.action, &w.state)),
                }
                .to_string());
            }
        }
        let r = find_match_in(&domain, f, max_budget).map_err(|e| e.to_string())?;
        Ok((r.witness.as_ref().map(|w| WitnessSummary::new(&domain, w)), r))
    })();
    match outcome {
        Ok((summary, r)) => {
            entry.score = r.score;
            entry.matched = r.matched;
            entry.witness = summary;
            entry.cap_reached = r.diagnostics.cap_reached;
        }
        Err(e) => entry.error = Some(e),
    }
    entry.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    entry
}

/// Scores every source (up to `cfg.jobs` at a time) and sorts by score, then
/// id. The result does not depend on `jobs` apart from timings.
pub fn rank(q: &Query, corpus: &[Source], cfg: &RankConfig) -> RankedList {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().expect("thread pool");
    let mut results: Vec<RankedEntry> =
        pool.install(|| corpus.par_iter().map(|s| evaluate(s, q, cfg.max_budget)).collect());
    results.sort_by(|a, b| a.score.cmp(&b.score).then_with(|| a.id.cmp(&b.id)));
    RankedList { query: q.fluent.to_string(), config: cfg.clone(), results }
}

/// Ids appearing more than once in a corpus.
pub fn duplicate_ids(corpus: &[Source]) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    corpus.iter().filter(|s| !seen.insert(s.id.clone())).map(|s| s.id.clone()).collect()
}
