mod common;

use common::{kb_from_lines, query};
use logdoc::kb::{load_kb, save_kb, KbBuilder};
use logdoc::prover::{translate_query, variable_depth_search, SearchConfig};
use logdoc::resources::{builtin_rules, builtin_translator, demo_kb};
use logdoc::retrieval::{explain, format_line, rank};
use logdoc::LoadError;

#[test]
fn saving_a_loaded_kb_reproduces_the_file() {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let first = save_kb(&kb);
    let loaded = load_kb(&first, "demo.kb", &t.levels).unwrap();
    assert_eq!(loaded, kb);
    assert_eq!(save_kb(&loaded), first);
}

#[test]
fn loaded_kb_answers_queries_identically() {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let loaded = load_kb(&save_kb(&kb), "demo.kb", &t.levels).unwrap();
    for text in [
        "Natural language questions",
        "Structure sharing representations of languages for unification based grammar formalisms",
        "qqqq language",
    ] {
        let q = translate_query(&t, text);
        let render = |kb| {
            let out = variable_depth_search(&q, &SearchConfig::default(), kb);
            rank(out.results, 15, kb)
                .iter()
                .map(|r| format!("{}\n{}", format_line(r), explain(&r.result, kb)))
                .collect::<String>()
        };
        assert_eq!(render(&kb), render(&loaded), "{text}");
    }
}

#[test]
fn seeded_answering_systems_serialises_its_eventuality() {
    let t = builtin_translator();
    let mut b = KbBuilder::new();
    b.seed_skolem_counter(28);
    b.ingest_document(&t, 11, "Natural language question answering systems")
        .unwrap();
    let text = save_kb(&b.freeze());
    assert!(text
        .lines()
        .any(|l| l == "fact eventuality(answer,sk-31,sk-30,sk-29)/1/11 level=L1"));
    assert!(text.lines().any(|l| l == "counter sk 32"));
}

#[test]
fn groups_postulates_and_isa_survive() {
    let mut rules = builtin_rules(&builtin_translator());
    rules.add_isa("apple", "fruit").unwrap();
    let kb = kb_from_lines(Some(rules), &["p(a)/1/1 group=4", "q(a)/1/1 group=5"]);
    let loaded = load_kb(&save_kb(&kb), "x.kb", &common::levels()).unwrap();
    assert_eq!(loaded.postulates().len(), kb.postulates().len());
    assert!(loaded.isa().links().eq(kb.isa().links()));
    assert_eq!(loaded.facts()[0].group, Some(4));
    assert!(save_kb(&loaded).contains("fact p(a)/1/1 level=L1 group=4\n"));
    let q = query(&["p(X)"]);
    let out = variable_depth_search(&q, &SearchConfig::default(), &loaded);
    assert!(out.results[0].ambiguous_support);
}

#[test]
fn unknown_versions_are_refused() {
    let t = builtin_translator();
    let err = load_kb("#LOGDOC-KB v9\n", "old.kb", &t.levels).unwrap_err();
    assert!(matches!(&err, LoadError::Version { file, found } if file == "old.kb" && found == "v9"));
    assert!(load_kb("", "e.kb", &t.levels).is_err());
    assert!(load_kb("hello\n", "h.kb", &t.levels).is_err());
}

#[test]
fn malformed_lines_name_their_position() {
    let t = builtin_translator();
    let text = "#LOGDOC-KB v1\ncounter sk 0\nfact p(a/1/1 level=L1\n";
    let err = load_kb(text, "bad.kb", &t.levels).unwrap_err().to_string();
    assert!(err.contains("bad.kb"), "{err}");
    assert!(err.contains('3'), "{err}");
}
