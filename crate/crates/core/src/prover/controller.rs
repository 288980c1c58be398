//! Variable-depth search: direct proofs first, then postulates, isa links,
//! query decomposition and keywords, each only while too few passages have
//! been found.

use std::collections::{HashMap, HashSet};

use crate::kb::KnowledgeBase;
use crate::logic::Level;
use crate::prover::config::{SearchConfig, Stage};
use crate::prover::decompose::{decompose, Rung, RungKind};
use crate::prover::keyword::keyword_fallback;
use crate::prover::query::Query;
use crate::prover::search::{all_positions, prove, MatchResult, PassageRef, ProveOptions, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    /// Enough passages were already found.
    Skipped,
    /// Switched off by the configuration.
    Disabled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RungReport {
    pub rung: Rung,
    /// False for the full query, which earlier stages already proved.
    pub proved: bool,
    pub new_passages: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    pub status: StageStatus,
    pub new_passages: usize,
    pub applications: u32,
    pub exhausted: bool,
    /// The relaxation trace of the decomposition stage.
    pub rungs: Vec<RungReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// One result per passage, in the order found.
    pub results: Vec<MatchResult>,
    /// One report per stage, in stage order.
    pub stages: Vec<StageReport>,
}

impl SearchOutcome {
    pub fn report(&self, stage: Stage) -> &StageReport {
        &self.stages[stage.index()]
    }
}

struct Collector {
    results: Vec<MatchResult>,
    found: HashSet<PassageRef>,
}

impl Collector {
    /// Keeps the best new result per passage; returns how many passages
    /// were new.
    fn add(&mut self, batch: Vec<MatchResult>) -> usize {
        let mut best: Vec<MatchResult> = Vec::new();
        let mut at: HashMap<PassageRef, usize> = HashMap::new();
        for r in batch {
            if self.found.contains(&r.passage) {
                continue;
            }
            match at.get(&r.passage) {
                Some(&i) => {
                    if better(&r, &best[i]) {
                        best[i] = r;
                    }
                }
                None => {
                    at.insert(r.passage, best.len());
                    best.push(r);
                }
            }
        }
        let n = best.len();
        for r in best {
            self.found.insert(r.passage);
            self.results.push(r);
        }
        n
    }

    fn count(&self) -> usize {
        self.found.len()
    }
}

fn better(a: &MatchResult, b: &MatchResult) -> bool {
    (a.ambiguous_support, -a.coverage, a.cost) < (b.ambiguous_support, -b.coverage, b.cost)
}

/// Runs the stages in order under the gates of `cfg`:
///
/// * after the direct stages, postulates are used only while fewer than `n`
///   passages are found;
/// * inheritance and decomposition only while fewer than `o`;
/// * keywords only when nothing was found.
///
/// A passage found by an earlier stage keeps that stage's result.
pub fn variable_depth_search(q: &Query, cfg: &SearchConfig, kb: &KnowledgeBase) -> SearchOutcome {
    let mut acc = Collector {
        results: Vec::new(),
        found: HashSet::new(),
    };
    let mut stages = Vec::new();
    let postulate_level = if cfg.allows(Stage::PostulatesL3) {
        Some(Level::L3)
    } else if cfg.allows(Stage::PostulatesL2) {
        Some(Level::L2)
    } else {
        None
    };
    let isa = cfg.allows(Stage::Inheritance);

    for stage in Stage::ALL {
        let mut report = StageReport {
            stage,
            status: StageStatus::Ran,
            new_passages: 0,
            applications: 0,
            exhausted: false,
            rungs: Vec::new(),
        };
        let c = acc.count();
        let gated = match stage {
            Stage::DirectFragment | Stage::DirectDocument => false,
            Stage::PostulatesL2 | Stage::PostulatesL3 => c >= cfg.n,
            Stage::Inheritance | Stage::Decomposition => c >= cfg.o,
            Stage::KeywordFallback => c > 0,
        };
        if !cfg.allows(stage) {
            report.status = StageStatus::Disabled;
        } else if gated {
            report.status = StageStatus::Skipped;
        } else {
            let mut budget = cfg.budget;
            let base = |scope| ProveOptions {
                scope,
                max_level: None,
                isa: false,
                budget: 0,
                depth: cfg.depth,
                stage,
            };
            let mut run = |acc: &mut Collector, positions: &[usize], opts: ProveOptions, report: &mut StageReport| {
                let mut total = 0;
                for scope in [Scope::Fragment, Scope::Document] {
                    let opts = ProveOptions {
                        budget: if opts.max_level.is_some() { budget } else { 0 },
                        ..opts.clone()
                    }
                    .with_scope(scope);
                    let r = prove(q, positions, kb, &opts);
                    budget -= r.applications.min(budget);
                    report.applications += r.applications;
                    report.exhausted |= r.exhausted;
                    let batch = r
                        .results
                        .into_iter()
                        .filter(|m| scope == Scope::Fragment || m.fragments.len() > 1)
                        .collect();
                    total += acc.add(batch);
                }
                total
            };
            let all = all_positions(q);
            match stage {
                Stage::DirectFragment | Stage::DirectDocument => {
                    let scope = if stage == Stage::DirectFragment {
                        Scope::Fragment
                    } else {
                        Scope::Document
                    };
                    let r = prove(q, &all, kb, &base(scope));
                    report.exhausted = r.exhausted;
                    let batch = r
                        .results
                        .into_iter()
                        .filter(|m| scope == Scope::Fragment || m.fragments.len() > 1)
                        .collect();
                    report.new_passages = acc.add(batch);
                }
                Stage::PostulatesL2 | Stage::PostulatesL3 => {
                    let level = if stage == Stage::PostulatesL2 { Level::L2 } else { Level::L3 };
                    let opts = ProveOptions {
                        max_level: Some(level),
                        ..base(Scope::Fragment)
                    };
                    report.new_passages = run(&mut acc, &all, opts, &mut report);
                }
                Stage::Inheritance => {
                    let opts = ProveOptions {
                        max_level: postulate_level,
                        isa: true,
                        ..base(Scope::Fragment)
                    };
                    report.new_passages = run(&mut acc, &all, opts, &mut report);
                }
                Stage::Decomposition => {
                    let mut proved: HashSet<Vec<usize>> = HashSet::new();
                    proved.insert(all.clone());
                    for rung in decompose(q) {
                        let mut rr = RungReport {
                            proved: rung.kind != RungKind::Full,
                            rung,
                            new_passages: 0,
                        };
                        if rr.proved {
                            for part in &rr.rung.parts {
                                if !proved.insert(part.clone()) {
                                    continue;
                                }
                                let opts = ProveOptions {
                                    max_level: postulate_level,
                                    isa,
                                    ..base(Scope::Fragment)
                                };
                                rr.new_passages += run(&mut acc, part, opts, &mut report);
                            }
                        }
                        report.new_passages += rr.new_passages;
                        report.rungs.push(rr);
                        if acc.count() >= cfg.o {
                            break;
                        }
                    }
                }
                Stage::KeywordFallback => {
                    report.new_passages = acc.add(keyword_fallback(q, kb));
                }
            }
        }
        stages.push(report);
    }
    SearchOutcome {
        results: acc.results,
        stages,
    }
}

impl ProveOptions {
    fn with_scope(self, scope: Scope) -> Self {
        ProveOptions { scope, ..self }
    }
}
