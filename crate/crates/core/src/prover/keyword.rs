//! Keyword matching, the last resort when no deduction succeeds.

use std::collections::{BTreeMap, BTreeSet};

use crate::kb::KnowledgeBase;
use crate::logic::{Atom, Term};
use crate::parse::lexicon::CORE_MODIFIERS;
use crate::prover::config::Stage;
use crate::prover::query::Query;
use crate::prover::search::{MatchResult, PassageRef};

/// Predicates whose names are representation machinery, not content words.
const STRUCTURAL: [&str; 4] = ["object", "property", "circumstance", "isa"];

/// Whether a predicate name counts as a keyword. Scheme predicates (arity 3
/// and up) carry their verb as an argument instead.
pub fn is_content_predicate(predicate: &str, arity: usize) -> bool {
    arity < 3 && !STRUCTURAL.contains(&predicate) && !CORE_MODIFIERS.contains(&predicate)
}

/// Content constants of an atom plus its predicate when that is a lemma.
/// The relation constant of `circumstance` and all skolems are skipped.
pub fn atom_keywords(a: &Atom, out: &mut BTreeSet<String>) {
    if is_content_predicate(&a.predicate, a.arity()) {
        out.insert(a.predicate.clone());
    }
    let skip_first = a.predicate == "circumstance";
    for (i, t) in a.args.iter().enumerate() {
        if skip_first && i == 0 {
            continue;
        }
        if let Term::Const(c) = t {
            out.insert(c.clone());
        }
    }
}

pub fn query_keywords(q: &Query) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in &q.atoms {
        atom_keywords(a, &mut out);
    }
    out
}

/// Every fragment sharing at least one keyword with the query, with
/// coverage `|shared| / |query keywords|`, in passage order.
pub fn keyword_fallback(q: &Query, kb: &KnowledgeBase) -> Vec<MatchResult> {
    let wanted = query_keywords(q);
    if wanted.is_empty() {
        return Vec::new();
    }
    let mut per_passage: BTreeMap<(u32, u32), BTreeSet<String>> = BTreeMap::new();
    for f in kb.facts() {
        let mut ks = BTreeSet::new();
        atom_keywords(&f.atom, &mut ks);
        let shared: Vec<String> = ks.intersection(&wanted).cloned().collect();
        if !shared.is_empty() {
            per_passage
                .entry((f.prov.doc, f.prov.frag))
                .or_default()
                .extend(shared);
        }
    }
    per_passage
        .into_iter()
        .map(|((doc, frag), shared)| MatchResult {
            bindings: Default::default(),
            passage: PassageRef {
                doc,
                frag: Some(frag),
            },
            fragments: vec![frag],
            stage: Stage::KeywordFallback,
            coverage: shared.len() as f64 / wanted.len() as f64,
            cost: (wanted.len() - shared.len()) as f64,
            ambiguous_support: false,
            postulate_apps: 0,
            isa_hops: 0,
            covered: Vec::new(),
            proof: Vec::new(),
            keywords: shared.into_iter().collect(),
        })
        .collect()
}
