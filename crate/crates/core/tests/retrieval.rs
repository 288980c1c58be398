mod common;

use common::{kb_from_lines, query};
use logdoc::kb::KnowledgeBase;
use logdoc::logic::Substitution;
use logdoc::prover::{translate_query, variable_depth_search, MatchResult, PassageRef, SearchConfig, Stage};
use logdoc::resources::{builtin_translator, demo_kb};
use logdoc::retrieval::{explain, format_human, format_line, rank, resolve_passage};
use logdoc::KbError;

fn result(doc: u32, frag: Option<u32>, stage: Stage, coverage: f64, cost: f64, ambiguous: bool) -> MatchResult {
    MatchResult {
        bindings: Substitution::new(),
        passage: PassageRef { doc, frag },
        fragments: frag.map_or(vec![1, 2], |f| vec![f]),
        stage,
        coverage,
        cost,
        ambiguous_support: ambiguous,
        postulate_apps: 0,
        isa_hops: 0,
        covered: vec![],
        proof: vec![],
        keywords: vec![],
    }
}

fn order(rs: Vec<MatchResult>) -> Vec<(u32, Option<u32>)> {
    rank(rs, 15, &KnowledgeBase::default())
        .iter()
        .map(|r| (r.result.passage.doc, r.result.passage.frag))
        .collect()
}

#[test]
fn earlier_stages_rank_first() {
    let rs = vec![
        result(1, Some(1), Stage::PostulatesL2, 1.0, 1.0, false),
        result(2, Some(1), Stage::DirectFragment, 1.0, 9.0, false),
    ];
    assert_eq!(order(rs), [(2, Some(1)), (1, Some(1))]);
}

#[test]
fn coverage_cost_and_passage_break_ties() {
    let rs = vec![
        result(5, Some(1), Stage::Decomposition, 0.5, 1.0, false),
        result(4, Some(1), Stage::Decomposition, 1.0, 7.0, false),
        result(3, Some(2), Stage::Decomposition, 1.0, 3.0, false),
        result(3, Some(1), Stage::Decomposition, 1.0, 3.0, false),
        result(1, Some(1), Stage::Decomposition, 1.0, 3.0, true),
        result(1, None, Stage::Decomposition, 1.0, 1.0, false),
    ];
    assert_eq!(
        order(rs),
        [(3, Some(1)), (3, Some(2)), (4, Some(1)), (5, Some(1)), (1, Some(1)), (1, None)]
    );
}

#[test]
fn ranking_truncates_and_numbers_from_one() {
    let rs: Vec<MatchResult> = (1..=20)
        .map(|d| result(d, Some(1), Stage::DirectFragment, 1.0, 2.0, false))
        .collect();
    let ranked = rank(rs, 15, &KnowledgeBase::default());
    let ranks: Vec<usize> = ranked.iter().map(|r| r.rank).collect();
    assert_eq!(ranks, (1..=15).collect::<Vec<_>>());
}

#[test]
fn structured_line_format() {
    let ranked = rank(
        vec![
            result(11, Some(1), Stage::PostulatesL2, 1.0, 7.0, false),
            result(3, None, Stage::PostulatesL2, 0.5, 2.0, true),
        ],
        15,
        &KnowledgeBase::default(),
    );
    assert_eq!(
        format_line(&ranked[0]),
        "rank 1 doc=11 frag=1 stage=PostulatesL2 coverage=1.000 cost=7.00 ambiguous=0"
    );
    assert_eq!(
        format_line(&ranked[1]),
        "rank 2 doc=3 frag=- stage=PostulatesL2 coverage=0.500 cost=2.00 ambiguous=1"
    );
}

#[test]
fn passages_resolve_through_back_pointers() {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let (text, start, end) = resolve_passage(&kb, 11, 1).unwrap();
    assert_eq!(text, "Natural language question answering systems");
    assert_eq!((start, end), (0, text.chars().count()));
    let (title, ..) = resolve_passage(&kb, 3, 1).unwrap();
    assert_eq!(
        title,
        "A structure sharing representation of language for unification based grammar formalisms"
    );
    assert!(matches!(
        resolve_passage(&kb, 99, 1),
        Err(KbError::UnknownPassage { doc: 99, frag: 1 })
    ));
}

#[test]
fn explanations_show_postulates_facts_and_keywords() {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let q = translate_query(&t, "Natural language questions");
    let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
    let ranked = rank(out.results, 15, &kb);
    let text = explain(&ranked[0].result, &kb);
    assert!(text.starts_with("== PostulatesL2 doc=11 frag=1"));
    assert_eq!(text.matches("<= postulate #1 circumstance/3 L2 w=1").count(), 1);
    assert_eq!(text.matches("<= fact ").count(), 5);
    assert!(text.contains("/1/11"));
    assert!(format_human(&ranked[0]).contains("Natural language question answering systems"));

    let direct = translate_query(&t, "Natural language question answering systems");
    let out = variable_depth_search(&direct, &SearchConfig::default(), &kb);
    let first = &out.results[0];
    assert_eq!(first.stage, Stage::DirectFragment);
    assert!(!explain(first, &kb).contains("<= postulate"));

    let kw = translate_query(&t, "qqqq language");
    let out = variable_depth_search(&kw, &SearchConfig::default(), &kb);
    let r = out.results.iter().find(|r| r.stage == Stage::KeywordFallback);
    if let Some(r) = r {
        assert!(explain(r, &kb).contains("shared keywords: "));
    }
}

#[test]
fn document_scope_results_list_their_fragments() {
    let kb = kb_from_lines(None, &["representation(r1,l1)/1/3", "language(l1)/2/3"]);
    let out = variable_depth_search(&query(&["representation(R,L)", "language(L)"]), &SearchConfig::default(), &kb);
    let ranked = rank(out.results, 15, &kb);
    assert_eq!(ranked[0].result.stage, Stage::DirectDocument);
    assert_eq!(
        format_human(&ranked[0]),
        "[1] document 3, fragments 1, 2 (DirectDocument)\n    passage 1 of document 3. ... passage 2 of document 3."
    );
}

#[test]
fn rendering_is_deterministic() {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let render = || {
        let q = translate_query(&t, "programming languages");
        let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
        rank(out.results, 15, &kb)
            .iter()
            .map(|r| format!("{}\n{}", format_line(r), explain(&r.result, &kb)))
            .collect::<String>()
    };
    assert_eq!(render(), render());
}
