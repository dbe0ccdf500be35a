//! Brute-force reference semantics.
//!
//! Works on fluent names and plain `(index, value)` literal sets, enumerates
//! every complete assignment, and checks the successor equation for each
//! candidate directly. Shares nothing with the library besides the input
//! `Source` type.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use acir_core::{ExtendedLiteral, FluentLiteral, Law, Source};

pub const F: u8 = 0;
pub const T: u8 = 1;
pub const U: u8 = 2;

pub type LitSet = BTreeSet<(usize, u8)>;
/// Complete assignment, one value per fluent.
pub type St = Vec<u8>;

#[derive(Clone, Debug)]
pub struct Oracle {
    pub names: Vec<String>,
    pub defaults: Vec<bool>,
    dynamic: Vec<(String, (usize, u8), LitSet)>,
    constraints: Vec<((usize, u8), LitSet)>,
    exec: Vec<(String, LitSet)>,
    pub init: LitSet,
    pub seq: Vec<BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OPath {
    pub states: Vec<St>,
    pub betas: Vec<BTreeSet<usize>>,
}

fn consistent(s: &LitSet) -> bool {
    let mut seen = BTreeMap::new();
    s.iter().all(|(f, v)| *seen.entry(*f).or_insert(*v) == *v)
}

fn as_set(s: &St) -> LitSet {
    s.iter().enumerate().map(|(i, v)| (i, *v)).collect()
}

impl Oracle {
    pub fn new(src: &Source) -> Self {
        let names: Vec<String> = src.signature.fluents.iter().map(|f| f.name().to_string()).collect();
        let ix = |n: &str| names.iter().position(|x| x == n).expect("known fluent");
        let lit = |l: &FluentLiteral| (ix(l.fluent.name()), if l.positive { T } else { F });
        let elit = |l: &ExtendedLiteral| match l {
            ExtendedLiteral::Literal(l) => lit(l),
            ExtendedLiteral::Unknown(f) => (ix(f.name()), U),
        };
        let mut o = Oracle {
            defaults: names.iter().map(|n| src.defaults.iter().any(|d| d.name() == n)).collect(),
            names: names.clone(),
            dynamic: vec![],
            constraints: vec![],
            exec: vec![],
            init: src.initial.iter().map(lit).collect(),
            seq: src.sequence.iter().map(|a| a.members.iter().map(|e| e.name().to_string()).collect()).collect(),
        };
        for law in &src.description.laws {
            match law {
                Law::Dynamic { action, consequence, conditions } => {
                    o.dynamic.push((action.name().to_string(), elit(consequence), conditions.iter().map(lit).collect()))
                }
                Law::StateConstraint { head, conditions } => {
                    o.constraints.push((elit(head), conditions.iter().map(lit).collect()))
                }
                Law::Executability { action, conditions } => {
                    o.exec.push((action.name().to_string(), conditions.iter().map(lit).collect()))
                }
            }
        }
        o
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn ix(&self, name: &str) -> usize {
        self.names.iter().position(|x| x == name).expect("known fluent")
    }

    /// Closure under the state constraints; `None` when inconsistent.
    pub fn cn(&self, s: &LitSet) -> Option<LitSet> {
        let mut cur = s.clone();
        loop {
            let before = cur.len();
            for (h, body) in &self.constraints {
                if body.is_subset(&cur) {
                    cur.insert(*h);
                }
            }
            if !consistent(&cur) {
                return None;
            }
            if cur.len() == before {
                return Some(cur);
            }
        }
    }

    pub fn all_assignments(&self) -> Vec<St> {
        let mut out = vec![vec![]];
        for _ in 0..self.n() {
            out = out.into_iter().flat_map(|s: St| (0..3u8).map(move |v| [s.clone(), vec![v]].concat())).collect();
        }
        out
    }

    pub fn is_state(&self, s: &St) -> bool {
        let set = as_set(s);
        s.len() == self.n() && self.cn(&set).as_ref() == Some(&set)
    }

    pub fn states(&self) -> Vec<St> {
        self.all_assignments().into_iter().filter(|s| self.is_state(s)).collect()
    }

    pub fn effects(&self, a: &BTreeSet<String>, s: &St) -> LitSet {
        let set = as_set(s);
        self.dynamic.iter().filter(|(e, _, b)| a.contains(e) && b.is_subset(&set)).map(|(_, c, _)| *c).collect()
    }

    pub fn executable(&self, a: &BTreeSet<String>, s: &St) -> bool {
        let set = as_set(s);
        !self.exec.iter().any(|(e, b)| a.contains(e) && b.is_subset(&set))
    }

    pub fn expansion(&self, e: &LitSet) -> Vec<LitSet> {
        let mut acc: Vec<LitSet> = vec![e.iter().copied().filter(|l| l.1 != U).collect()];
        for (f, _) in e.iter().filter(|l| l.1 == U) {
            acc = acc
                .into_iter()
                .flat_map(|w| (0..3u8).map(move |v| {
                    let mut w2 = w.clone();
                    w2.insert((*f, v));
                    w2
                }))
                .collect();
        }
        acc
    }

    /// `σ'` with `σ' = Cn(W ∪ (σ ∩ σ'))`, checked over every complete
    /// assignment.
    pub fn solutions(&self, s: &St, w: &LitSet) -> Vec<St> {
        self.all_assignments()
            .into_iter()
            .filter(|t| {
                let mut base = w.clone();
                base.extend(as_set(s).intersection(&as_set(t)).copied());
                self.cn(&base) == Some(as_set(t))
            })
            .collect()
    }

    /// All transitions from `s` under `a` with their branching-sets.
    pub fn transitions(&self, s: &St, a: &BTreeSet<String>) -> BTreeSet<(St, BTreeSet<usize>)> {
        if !self.executable(a, s) {
            return BTreeSet::new();
        }
        let e = self.effects(a, s);
        let unknown: BTreeSet<usize> = e.iter().filter(|l| l.1 == U).map(|l| l.0).collect();
        let mut out = BTreeSet::new();
        for w in self.expansion(&e) {
            if !consistent(&w) {
                continue;
            }
            for t in self.solutions(s, &w) {
                let beta = unknown.iter().copied().filter(|f| t[*f] != U).collect();
                out.insert((t, beta));
            }
        }
        out
    }

    /// Whether some state, action set and effect set admit several solutions.
    pub fn emergent(&self, actions: &[BTreeSet<String>]) -> bool {
        self.states().iter().any(|s| {
            actions.iter().any(|a| {
                let e = self.effects(a, s);
                consistent(&e) && self.solutions(s, &e).len() > 1
            })
        })
    }

    /// Every path along `seq` from `init`, with its branching-sets.
    pub fn paths(&self, init: &[St], seq: &[BTreeSet<String>]) -> Vec<OPath> {
        let mut acc: Vec<OPath> = init.iter().map(|s| OPath { states: vec![s.clone()], betas: vec![] }).collect();
        for a in seq {
            acc = acc
                .into_iter()
                .flat_map(|p| {
                    self.transitions(p.states.last().unwrap(), a).into_iter().map(move |(t, b)| {
                        let mut q = p.clone();
                        q.states.push(t);
                        q.betas.push(b);
                        q
                    })
                })
                .collect();
        }
        acc
    }

    /// Paths whose branching-sets are exactly `qs`.
    pub fn models(&self, init: &[St], seq: &[BTreeSet<String>], qs: &[BTreeSet<usize>]) -> Vec<OPath> {
        self.paths(init, seq).into_iter().filter(|p| p.betas == qs).collect()
    }

    /// Paths that split every non-deterministic effect.
    pub fn split_all_models(&self, init: &[St], seq: &[BTreeSet<String>]) -> Vec<OPath> {
        self.paths(init, seq)
            .into_iter()
            .filter(|p| {
                (0..seq.len()).all(|i| {
                    let e = self.effects(&seq[i], &p.states[i]);
                    let unknown: BTreeSet<usize> = e.iter().filter(|l| l.1 == U).map(|l| l.0).collect();
                    p.betas[i] == unknown
                })
            })
            .collect()
    }

    pub fn force(&self, i: &LitSet, f: usize) -> Vec<LitSet> {
        let with = |v| {
            let mut j = i.clone();
            j.insert((f, v));
            j
        };
        let has = |v| i.contains(&(f, v));
        if self.defaults[f] && !has(F) && !has(U) {
            vec![with(T)]
        } else if !self.defaults[f] && !has(T) && !has(F) && !has(U) {
            vec![with(T), with(F)]
        } else {
            vec![i.clone()]
        }
    }

    pub fn force_all(&self, i: &LitSet, fs: &[usize]) -> BTreeSet<LitSet> {
        match fs.split_first() {
            None => [i.clone()].into(),
            Some((f, rest)) => self.force(i, *f).iter().flat_map(|j| self.force_all(j, rest)).collect(),
        }
    }

    pub fn complete(&self, i: &LitSet) -> Option<St> {
        let mut j = i.clone();
        for f in 0..self.n() {
            if self.defaults[f] && !i.contains(&(f, T)) {
                j.insert((f, F));
            }
        }
        let c = self.cn(&j)?;
        let mut s = vec![U; self.n()];
        for (f, v) in &c {
            s[*f] = *v;
        }
        Some(s)
    }

    pub fn completions(&self, i: &LitSet, fs: &[usize]) -> BTreeSet<St> {
        self.force_all(i, fs).iter().filter_map(|j| self.complete(j)).collect()
    }

    pub fn expansion_of_initial(&self) -> Option<LitSet> {
        let nd: Vec<usize> = (0..self.n()).filter(|f| !self.defaults[*f]).collect();
        let mut acc: Option<LitSet> = None;
        for j in self.force_all(&self.init, &nd) {
            let Some(g) = self.complete(&j) else { continue };
            if !self.split_all_models(&[g], &self.seq).is_empty() {
                acc = Some(match acc {
                    None => j,
                    Some(a) => a.intersection(&j).copied().collect(),
                });
            }
        }
        acc
    }

    fn c2(&self, q: usize, p: &OPath, eps: &LitSet) -> bool {
        let x: LitSet = as_set(&p.states[0]).into_iter().filter(|l| l.1 != U && !eps.contains(l)).collect();
        let Some(g) = self.complete(&x) else { return true };
        let last = p.states.last().unwrap()[q];
        g[q] == U || (g[q] == F && last == T) || (g[q] == T && last == F)
    }

    /// Minimum of `|F| + Σ|βᵢ|` over every forcing set and every path
    /// satisfying both match conditions.
    pub fn min_score(&self, q: usize) -> Option<usize> {
        let eps = self.expansion_of_initial()?;
        let n = self.n();
        let mut best: Option<usize> = None;
        for mask in 0u32..(1 << n) {
            let fs: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let init: Vec<St> = self.completions(&eps, &fs).into_iter().collect();
            for p in self.paths(&init, &self.seq) {
                if p.states.last().unwrap()[q] == U || !self.c2(q, &p, &eps) {
                    continue;
                }
                let cost = fs.len() + p.betas.iter().map(|b| b.len()).sum::<usize>();
                best = Some(best.map_or(cost, |b: usize| b.min(cost)));
            }
        }
        best
    }
}
