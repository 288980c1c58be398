//! Ranking, passage lookup through the back-pointers, and rendering of
//! results and proof traces.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::KbError;
use crate::kb::KnowledgeBase;
use crate::logic::format_annotated;
use crate::prover::controller::{SearchOutcome, StageStatus};
use crate::prover::search::{MatchResult, ProofNode};

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    /// 1-based position in the ranking.
    pub rank: usize,
    pub result: MatchResult,
    /// The fragment text, or the matched fragments of a document joined by
    /// ` ... `.
    pub text: String,
}

/// Total order of results: stage; fragment before document scope;
/// categorical before ambiguous support; coverage descending; cost
/// ascending; document and fragment ascending.
pub fn compare_results(a: &MatchResult, b: &MatchResult) -> Ordering {
    a.stage
        .cmp(&b.stage)
        .then(a.passage.frag.is_none().cmp(&b.passage.frag.is_none()))
        .then(a.ambiguous_support.cmp(&b.ambiguous_support))
        .then(b.coverage.total_cmp(&a.coverage))
        .then(a.cost.total_cmp(&b.cost))
        .then(a.passage.cmp(&b.passage))
        .then_with(|| a.bindings.to_string().cmp(&b.bindings.to_string()))
}

/// Sorts, truncates to `m` and attaches passage texts.
pub fn rank(mut matches: Vec<MatchResult>, m: usize, kb: &KnowledgeBase) -> Vec<RankedResult> {
    matches.sort_by(compare_results);
    matches.truncate(m);
    matches
        .into_iter()
        .enumerate()
        .map(|(i, result)| {
            let text = passage_text(&result, kb);
            RankedResult {
                rank: i + 1,
                result,
                text,
            }
        })
        .collect()
}

fn passage_text(r: &MatchResult, kb: &KnowledgeBase) -> String {
    let frags: Vec<u32> = match r.passage.frag {
        Some(f) => vec![f],
        None => r.fragments.clone(),
    };
    frags
        .iter()
        .filter_map(|&f| kb.passage(r.passage.doc, f))
        .map(|p| p.text.as_str())
        .collect::<Vec<_>>()
        .join(" ... ")
}

/// The stored text of a fragment with its character span in the document.
pub fn resolve_passage(kb: &KnowledgeBase, doc: u32, frag: u32) -> Result<(&str, usize, usize), KbError> {
    kb.passage(doc, frag)
        .map(|p| (p.text.as_str(), p.start, p.end))
        .ok_or(KbError::UnknownPassage { doc, frag })
}

/// `rank <n> doc=<d> frag=<f|-> stage=<s> coverage=<c> cost=<k> ambiguous=<0|1>`
pub fn format_line(r: &RankedResult) -> String {
    let m = &r.result;
    let frag = m.passage.frag.map_or("-".to_string(), |f| f.to_string());
    format!(
        "rank {} doc={} frag={} stage={} coverage={:.3} cost={:.2} ambiguous={}",
        r.rank,
        m.passage.doc,
        frag,
        m.stage,
        m.coverage,
        m.cost,
        u8::from(m.ambiguous_support)
    )
}

/// Human-readable form: a heading and the passage text.
pub fn format_human(r: &RankedResult) -> String {
    let m = &r.result;
    let place = match m.passage.frag {
        Some(f) => format!("document {}, fragment {f}", m.passage.doc),
        None => {
            let fs: Vec<String> = m.fragments.iter().map(u32::to_string).collect();
            format!("document {}, fragments {}", m.passage.doc, fs.join(", "))
        }
    };
    format!("[{}] {place} ({})\n    {}", r.rank, m.stage, r.text)
}

/// Renders the proof trace of a result as an indented tree.
pub fn explain(r: &MatchResult, kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let frag = r.passage.frag.map_or("-".to_string(), |f| f.to_string());
    let _ = writeln!(
        out,
        "== {} doc={} frag={} coverage={:.3} cost={:.2} postulates={} isa_hops={}{}",
        r.stage,
        r.passage.doc,
        frag,
        r.coverage,
        r.cost,
        r.postulate_apps,
        r.isa_hops,
        if r.ambiguous_support { " ambiguous" } else { "" }
    );
    if !r.bindings.is_empty() {
        let _ = writeln!(out, "bindings {}", r.bindings);
    }
    if !r.keywords.is_empty() {
        let _ = writeln!(out, "shared keywords: {}", r.keywords.join(", "));
    }
    for node in &r.proof {
        render_node(node, kb, 0, &mut out);
    }
    out
}

fn render_node(node: &ProofNode, kb: &KnowledgeBase, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match node {
        ProofNode::Fact {
            goal,
            fact,
            isa_hops,
        } => {
            let f = kb.fact(*fact);
            let _ = write!(out, "{pad}{goal}\n{pad}  <= fact {}", format_annotated(f));
            if let Some(g) = f.group {
                let _ = write!(out, " group={g}");
            }
            if *isa_hops > 0 {
                let _ = write!(out, " (isa hops {isa_hops})");
            }
            out.push('\n');
        }
        ProofNode::Postulate {
            goal,
            postulate,
            weight,
            children,
        } => {
            let p = &kb.postulates()[*postulate];
            let _ = writeln!(
                out,
                "{pad}{goal}\n{pad}  <= postulate #{} {} {} w={weight}",
                postulate + 1,
                p.name(),
                p.level
            );
            for c in children {
                render_node(c, kb, depth + 2, out);
            }
        }
    }
}

/// One line per stage, with the relaxation rungs of the decomposition
/// stage indented below it.
pub fn format_stages(outcome: &SearchOutcome) -> String {
    let mut out = String::new();
    for s in &outcome.stages {
        let status = match s.status {
            StageStatus::Ran => "ran",
            StageStatus::Skipped => "skipped",
            StageStatus::Disabled => "disabled",
        };
        let _ = write!(out, "stage {} {status} new={}", s.stage, s.new_passages);
        if s.applications > 0 {
            let _ = write!(out, " postulate_apps={}", s.applications);
        }
        if s.exhausted {
            out.push_str(" budget-exhausted");
        }
        out.push('\n');
        for r in &s.rungs {
            let parts: Vec<String> = r
                .rung
                .parts
                .iter()
                .map(|p| format!("{p:?}"))
                .collect();
            let _ = writeln!(
                out,
                "  rung {} {} new={}{}",
                r.rung.kind,
                parts.join(" "),
                r.new_passages,
                if r.proved { "" } else { " (proved by earlier stages)" }
            );
        }
    }
    out
}
