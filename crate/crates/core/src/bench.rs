//! Seeded random benchmark instances and a timing harness.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path as FsPath;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matcher::{find_match_in, Score};
use crate::semantics::{check_emergent_nondeterminism, CheckConfig, Domain};
use crate::types::{
    Action, ActionDescription, ElementaryAction, ExtendedLiteral, Fluent, FluentLiteral, Law, Query, Signature,
    Source,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchmarkConfig {
    pub fluents: usize,
    pub steps: usize,
    /// Most elementary actions occurring together in one step.
    pub concurrency: usize,
    /// Number of actions given a non-deterministic direct effect.
    pub u_actions: usize,
    pub instances: usize,
    pub seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig { fluents: 6, steps: 5, concurrency: 3, u_actions: 0, instances: 20, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.fluents == 0 || self.steps == 0 || self.concurrency == 0 || self.instances == 0 {
            return bad("fluents, steps, concurrency and instances must be positive");
        }
        if self.u_actions > self.num_actions() {
            return bad("more non-deterministic actions than actions");
        }
        Ok(())
    }

    pub fn num_actions(&self) -> usize {
        (self.fluents + 2).max(self.concurrency)
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub source: Source,
    pub query: Query,
    /// Score found while calibrating the query.
    pub expected: Score,
}

#[derive(Clone, Debug)]
pub struct Benchmark {
    pub config: BenchmarkConfig,
    pub instances: Vec<Instance>,
}

impl Benchmark {
    pub fn match_ratio(&self) -> f64 {
        let m = self.instances.iter().filter(|i| i.expected.is_finite()).count();
        m as f64 / self.instances.len().max(1) as f64
    }
}

fn lit(rng: &mut ChaCha8Rng, fluents: &[Fluent]) -> FluentLiteral {
    FluentLiteral { fluent: fluents.choose(rng).expect("fluents").clone(), positive: rng.gen_bool(0.5) }
}

fn conditions(rng: &mut ChaCha8Rng, fluents: &[Fluent], max: usize) -> BTreeSet<FluentLiteral> {
    let n = rng.gen_range(0..=max);
    let mut out: BTreeSet<FluentLiteral> = BTreeSet::new();
    for _ in 0..n {
        let l = lit(rng, fluents);
        if !out.contains(&l.complement()) {
            out.insert(l);
        }
    }
    out
}

fn random_description(rng: &mut ChaCha8Rng, cfg: &BenchmarkConfig, fluents: &[Fluent], actions: &[ElementaryAction]) -> ActionDescription {
    let mut laws = BTreeSet::new();
    let nondet: BTreeSet<usize> = rand::seq::index::sample(rng, actions.len(), cfg.u_actions).into_iter().collect();
    for (i, e) in actions.iter().enumerate() {
        let consequence = if nondet.contains(&i) {
            ExtendedLiteral::Unknown(fluents.choose(rng).expect("fluents").clone())
        } else {
            ExtendedLiteral::Literal(lit(rng, fluents))
        };
        laws.insert(Law::Dynamic { action: e.clone(), consequence, conditions: conditions(rng, fluents, 1) });
        if rng.gen_bool(0.4) {
            let c = ExtendedLiteral::Literal(lit(rng, fluents));
            let cond = conditions(rng, fluents, 1);
            // keep the count of unknown consequences exact
            laws.insert(Law::Dynamic { action: e.clone(), consequence: c, conditions: cond });
        }
        if rng.gen_bool(0.3) {
            let mut cond = conditions(rng, fluents, 2);
            if cond.is_empty() {
                cond.insert(lit(rng, fluents));
            }
            laws.insert(Law::Executability { action: e.clone(), conditions: cond });
        }
    }
    for _ in 0..fluents.len() / 3 {
        let head = lit(rng, fluents);
        let mut cond = BTreeSet::new();
        while cond.is_empty() {
            cond = conditions(rng, fluents, 2);
            cond.retain(|l: &FluentLiteral| l.fluent != head.fluent);
        }
        laws.insert(Law::StateConstraint { head: ExtendedLiteral::Literal(head), conditions: cond });
    }
    ActionDescription { laws }
}

fn random_sequence(rng: &mut ChaCha8Rng, cfg: &BenchmarkConfig, actions: &[ElementaryAction]) -> Vec<Action> {
    (0..cfg.steps)
        .map(|_| {
            let k = rng.gen_range(1..=cfg.concurrency.min(actions.len()));
            Action { members: actions.choose_multiple(rng, k).cloned().collect() }
        })
        .collect()
}

fn score_of(src: &Source, q: &Query) -> Score {
    let d = Domain::new(src).expect("generated source is valid");
    let f = d.fluent_id(q.fluent.name()).expect("query in signature");
    find_match_in(&d, f, None).map(|r| r.score).unwrap_or(Score::Infinite)
}

fn generate_instance(cfg: &BenchmarkConfig, index: usize, want_match: bool) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(index as u64));
    let fluents: Vec<Fluent> = (0..cfg.fluents).map(|i| Fluent::new(format!("f{i}"))).collect();
    let actions: Vec<ElementaryAction> = (0..cfg.num_actions()).map(|i| ElementaryAction::new(format!("e{i}"))).collect();
    let check = CheckConfig { fluent_cap: usize::MAX, max_concurrency: cfg.concurrency };
    loop {
        let description = random_description(&mut rng, cfg, &fluents, &actions);
        let defaults: BTreeSet<Fluent> = fluents.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
        let mut initial = BTreeSet::new();
        for _ in 0..rng.gen_range(0..=2) {
            let l = lit(&mut rng, &fluents);
            if !initial.contains(&l.complement()) {
                initial.insert(l);
            }
        }
        let mut source = Source {
            id: format!("bench_{:03}", index),
            signature: Signature { fluents: fluents.iter().cloned().collect(), actions: actions.iter().cloned().collect() },
            defaults,
            description,
            initial,
            sequence: Vec::new(),
        };
        let domain = Domain::new(&source).expect("generated source is valid");
        if !check_emergent_nondeterminism(&domain, &check).expect("no cap").is_clean() {
            continue;
        }
        // prefer sequences the story can actually execute
        let mut found = false;
        for _ in 0..20 {
            source.sequence = random_sequence(&mut rng, cfg, &actions);
            let d = Domain::new(&source).expect("generated source is valid");
            if matches!(d.conservative_expansion(d.initial(), d.sequence()), Ok(Some(_))) {
                found = true;
                break;
            }
        }
        if !found {
            continue;
        }
        let mut order = fluents.clone();
        order.shuffle(&mut rng);
        let mut fallback = None;
        for f in order {
            let query = Query { fluent: f };
            let s = score_of(&source, &query);
            if s.is_finite() == want_match {
                return Instance { source, query, expected: s };
            }
            fallback.get_or_insert((query, s));
        }
        let (query, expected) = fallback.expect("non-empty signature");
        return Instance { source, query, expected };
    }
}

/// Generates `cfg.instances` instances, alternating between instances whose
/// query is meant to match and ones meant not to, so that roughly half match.
pub fn generate_benchmark(cfg: &BenchmarkConfig) -> Result<Benchmark, BenchError> {
    cfg.validate()?;
    let instances = (0..cfg.instances).map(|i| generate_instance(cfg, i, i % 2 == 0)).collect();
    Ok(Benchmark { config: cfg.clone(), instances })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub id: String,
    pub query: String,
    pub score: Score,
    pub matched: bool,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub matched: usize,
    pub mean_match_ms: Option<f64>,
    pub stddev_match_ms: Option<f64>,
    pub mean_nomatch_ms: Option<f64>,
    pub stddev_nomatch_ms: Option<f64>,
    pub max_ms: f64,
}

impl Summary {
    /// Whether matching instances were on average faster than the others.
    /// `None` if either group is empty.
    pub fn match_faster(&self) -> Option<bool> {
        Some(self.mean_match_ms? < self.mean_nomatch_ms?)
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: Summary,
}

fn mean_sd(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (Some(mean), Some(var.sqrt()))
}

/// Times the match search on every instance.
pub fn time_benchmark(bench: &Benchmark) -> BenchReport {
    let rows: Vec<BenchRow> = bench
        .instances
        .iter()
        .map(|inst| {
            let start = Instant::now();
            let score = score_of(&inst.source, &inst.query);
            BenchRow {
                id: inst.source.id.clone(),
                query: inst.query.fluent.to_string(),
                score,
                matched: score.is_finite(),
                elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
            }
        })
        .collect();
    let times = |m: bool| rows.iter().filter(|r| r.matched == m).map(|r| r.elapsed_ms).collect::<Vec<_>>();
    let (mean_match_ms, stddev_match_ms) = mean_sd(&times(true));
    let (mean_nomatch_ms, stddev_nomatch_ms) = mean_sd(&times(false));
    let summary = Summary {
        instances: rows.len(),
        matched: rows.iter().filter(|r| r.matched).count(),
        mean_match_ms,
        stddev_match_ms,
        mean_nomatch_ms,
        stddev_nomatch_ms,
        max_ms: rows.iter().map(|r| r.elapsed_ms).fold(0.0, f64::max),
    };
    BenchReport { rows, summary }
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_text(&self) -> String {
        let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.2}"));
        let s = &self.summary;
        format!(
            "instances: {}\nmatched: {}\nmatch mean ms: {} (sd {})\nno-match mean ms: {} (sd {})\nmax ms: {:.2}\n",
            s.instances,
            s.matched,
            f(s.mean_match_ms),
            f(s.stddev_match_ms),
            f(s.mean_nomatch_ms),
            f(s.stddev_nomatch_ms),
            s.max_ms
        )
    }
}

/// Generates, times and writes the CSV report to `out`.
pub fn run_bench(cfg: &BenchmarkConfig, out: &FsPath) -> Result<BenchReport, Box<dyn std::error::Error + Send + Sync>> {
    let bench = generate_benchmark(cfg)?;
    let report = time_benchmark(&bench);
    report.write_csv(std::fs::File::create(out)?)?;
    Ok(report)
}
