//! End-to-end acceptance checks. Each criterion prints one line:
//! `criterion <n> PASS|FAIL <name> (<ms> ms)[: reason]`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::oracles::{
    ground, ground_substitutions, join_oracle, keyword_coverage, vars_of, CONSTANTS,
};
use common::{atom, kb_from_lines, levels, open, same_modulo_renaming, shipped_rules};
use logdoc::kb::{load_kb, save_kb, KbBuilder, KnowledgeBase};
use logdoc::logic::{parse_atom, Atom, Level, Term};
use logdoc::parse::score::Weights;
use logdoc::prover::{
    decompose, prove_direct, prove_with_postulates, translate_query, variable_depth_search,
    ProofNode, Query, RungKind, Scope, SearchConfig, Stage,
};
use logdoc::resources::{builtin_rules, builtin_translator, demo_kb, DEMO_CORPUS};
use logdoc::retrieval::{explain, format_line, rank};
use logdoc::semantics::{is_variant, Counters};
use logdoc::unify::{unify_atoms, IsaView};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn postulates_used(nodes: &[ProofNode], kb: &KnowledgeBase, out: &mut Vec<String>) {
    for n in nodes {
        if let ProofNode::Postulate { postulate, children, .. } = n {
            out.push(kb.postulates()[*postulate].to_string());
            postulates_used(children, kb, out);
        }
    }
}

fn answering_systems_translation() -> Check {
    let start = Instant::now();
    let t = builtin_translator();
    let mut b = KbBuilder::new();
    b.ingest_document(&t, 11, "Natural language question answering systems")
        .map_err(|e| e.to_string())?;
    let kb = b.freeze();
    let got: Vec<Atom> = kb.facts().iter().map(|f| f.atom.clone()).collect();
    let expected: Vec<Atom> = [
        "property(natural,sk-1)",
        "object(system,sk-2)",
        "object(language,sk-1)",
        "circumstance(by_with_for,sk-2,sk-1)",
        "object(question,sk-3)",
        "eventuality(answer,sk-4,sk-2,sk-3)",
    ]
    .iter()
    .map(|s| atom(s))
    .collect();
    ensure!(got.len() == 6, "{} facts", got.len());
    ensure!(same_modulo_renaming(&got, &expected), "facts {got:?}");
    ensure!(
        kb.facts().iter().all(|f| f.prov.doc == 11 && f.prov.frag == 1),
        "wrong back-pointers"
    );
    within(start, Duration::from_secs(1))
}

fn natural_language_questions_retrieval() -> Check {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let start = Instant::now();
    let q = translate_query(&t, "Natural language questions");
    let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
    let ranked = rank(out.results, 15, &kb);
    let first = &ranked.first().ok_or("no results")?.result;
    ensure!(
        (first.passage.doc, first.passage.frag) == (11, Some(1)),
        "rank 1 is {:?}",
        first.passage
    );
    ensure!(first.stage == Stage::PostulatesL2, "stage {}", first.stage);
    let mut used = Vec::new();
    postulates_used(&first.proof, &kb, &mut used);
    ensure!(
        used.len() == 1 && used[0].contains("circumstance(by_with_for,"),
        "postulates {used:?}"
    );
    let relevant: Vec<_> = ranked
        .iter()
        .filter(|r| r.result.stage <= Stage::Inheritance)
        .map(|r| r.result.passage)
        .collect();
    ensure!(relevant == [first.passage], "whole-query matches {relevant:?}");

    let mut cfg = SearchConfig::default();
    for s in [Stage::PostulatesL2, Stage::PostulatesL3, Stage::Decomposition] {
        cfg.set_enabled(s, false);
    }
    let off = variable_depth_search(&q, &cfg, &kb);
    ensure!(
        off.results.iter().all(|r| r.stage == Stage::KeywordFallback),
        "deductive results without postulates"
    );
    within(start, Duration::from_secs(1))
}

fn structure_sharing_direct_proof() -> Check {
    let t = builtin_translator();
    let mut b = builtin_rules(&t);
    let title = "A structure sharing representation of language for unification based grammar formalisms";
    b.ingest_document(&t, 3, title).map_err(|e| e.to_string())?;
    let kb = b.freeze();
    let relational: Vec<Atom> = kb
        .facts()
        .iter()
        .map(|f| f.atom.clone())
        .filter(|a| a.predicate != "object")
        .collect();
    let expected: Vec<Atom> = [
        "representation(R,L)",
        "language(L)",
        "share(R,S)",
        "structure(S,X)",
        "goal(F,R)",
        "formalism(F,G)",
        "grammar(G,Y)",
        "unification(U)",
        "base(F,U)",
    ]
    .iter()
    .map(|s| atom(s))
    .collect();
    ensure!(is_variant(&open(&relational), &expected), "relational facts {relational:?}");
    let q = translate_query(
        &t,
        "Structure sharing representations of languages for unification based grammar formalisms",
    );
    let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
    let first = out.results.first().ok_or("no results")?;
    ensure!(
        first.stage == Stage::DirectFragment && first.passage.doc == 3 && first.passage.frag == Some(1),
        "got {:?} at {}",
        first.passage,
        first.stage
    );
    ensure!(first.postulate_apps == 0, "{} postulate applications", first.postulate_apps);
    Ok(())
}

fn locative_chaining() -> Check {
    let kb = kb_from_lines(
        Some(shipped_rules()),
        &[
            "locative(i1,roll,center1,p1,edge1,ball1)/1/16",
            "locative(i2,fall,edge1,p2,floor1,ball1)/1/16",
        ],
    );
    let q = common::query(&["locative(I,move,center1,P,floor1,ball1)"]);
    ensure!(prove_direct(&q, Scope::Fragment, &kb).is_empty(), "proved directly");
    let run = prove_with_postulates(&q, Level::L3, 10_000, 4, &kb);
    ensure!(run.results.len() == 1, "{} results", run.results.len());
    let r = &run.results[0];
    let mut used = Vec::new();
    postulates_used(&r.proof, &kb, &mut used);
    ensure!(
        used.len() == 1 && used[0].contains("locative(I3,move,"),
        "postulates {used:?}"
    );
    ensure!(r.supporting_facts() == [0, 1], "facts {:?}", r.supporting_facts());
    Ok(())
}

fn variable_depth_gating() -> Check {
    let lines: Vec<String> = (1..=20)
        .flat_map(|d| [format!("p(a{d},b{d})/1/{d}"), format!("q(b{d})/1/{d}")])
        .collect();
    let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
    let kb = kb_from_lines(Some(shipped_rules()), &refs);
    let out = variable_depth_search(&common::query(&["p(X,Y)", "q(Y)"]), &SearchConfig::default(), &kb);
    ensure!(out.results.len() >= 15, "{} direct results", out.results.len());
    ensure!(
        out.results.iter().all(|r| r.postulate_apps == 0 && r.isa_hops == 0),
        "relaxed results among plentiful direct matches"
    );

    let mut rules = KbBuilder::new();
    rules.add_isa("apple", "fruit").map_err(|e| e.to_string())?;
    rules.add_isa("pear", "fruit").map_err(|e| e.to_string())?;
    let kb = kb_from_lines(
        Some(rules),
        &["object(fruit,sk-1)/1/1", "object(apple,sk-2)/1/2", "object(pear,sk-3)/1/3"],
    );
    let out = variable_depth_search(&common::query(&["object(fruit,X)"]), &SearchConfig::default(), &kb);
    let inherited = out.results.iter().filter(|r| r.stage == Stage::Inheritance).count();
    ensure!(inherited == 2, "{inherited} inheritance results");

    let c = SearchConfig::default();
    ensure!((c.m, c.n, c.o) == (15, 10, 5), "defaults {} {} {}", c.m, c.n, c.o);
    ensure!(c.m == 3 * c.o && c.n == 2 * c.o, "ratio");
    Ok(())
}

fn random_level_query(rng: &mut StdRng) -> Query {
    let lv = levels();
    let vars = ["X", "Y", "Z", "W"];
    let n = rng.gen_range(1..=6);
    let atoms = (0..n)
        .map(|_| {
            let a = vars[rng.gen_range(0..4)];
            let b = vars[rng.gen_range(0..4)];
            let text = match rng.gen_range(0..4) {
                0 => format!("p({a},{b})"),
                1 => format!("object(table,{a})"),
                2 => format!("time({a},monday)"),
                _ => format!("circumstance(against,{a},{b})"),
            };
            parse_atom(&text, &lv).unwrap()
        })
        .collect();
    Query::new(atoms, "")
}

fn decomposition_ordering() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let mut mixed = 0;
    for case in 0..200 {
        let q = random_level_query(&mut rng);
        let levels: BTreeSet<Level> = q.atoms.iter().map(|a| a.level).collect();
        if levels.len() > 1 {
            mixed += 1;
        }
        let mut prev_kind = RungKind::Full;
        let mut prev_max = Level::L3;
        for r in decompose(&q) {
            let max = r.retained().iter().map(|&i| q.atoms[i].level).max().unwrap();
            ensure!(r.kind >= prev_kind, "case {case}: {} after {prev_kind}", r.kind);
            ensure!(max <= prev_max, "case {case}: {} keeps {max} after dropping it", r.kind);
            let ok = match r.kind {
                RungKind::Full => true,
                RungKind::DropL3 => max <= Level::L2,
                RungKind::DropL2 => max == Level::L1,
                RungKind::Components | RungKind::Singletons => {
                    Some(&max) == levels.iter().next()
                }
            };
            ensure!(ok, "case {case}: {} keeps level {max}", r.kind);
            prev_kind = r.kind;
            prev_max = max;
        }
    }
    ensure!(mixed >= 100, "only {mixed} mixed-level queries");
    Ok(())
}

fn random_term(rng: &mut StdRng) -> Term {
    if rng.gen_bool(0.5) {
        Term::var(["X", "Y", "Z"][rng.gen_range(0..3)])
    } else {
        Term::constant(CONSTANTS[rng.gen_range(0..8)])
    }
}

fn random_pair(rng: &mut StdRng) -> (Atom, Atom) {
    let n = rng.gen_range(1..=3);
    let pa = if rng.gen_bool(0.9) { "p" } else { "q" };
    let a = Atom::new(pa, (0..n).map(|_| random_term(rng)).collect(), Level::L1);
    let b = Atom::new("p", (0..n).map(|_| random_term(rng)).collect(), Level::L1);
    (a, b)
}

fn unification_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut unified = 0;
    for case in 0..10_000 {
        let (a, b) = random_pair(&mut rng);
        let vars = vars_of(&[&a, &b]);
        let grounds = ground_substitutions(&vars);
        match unify_atoms(&a, &b, IsaView::disabled()) {
            Some(u) => {
                unified += 1;
                let s = &u.subst;
                let (sa, sb) = (s.apply_atom(&a), s.apply_atom(&b));
                ensure!(sa == sb, "case {case}: {a} {b} not unified by {s}");
                ensure!(s.apply_atom(&sa) == sa, "case {case}: {s} not idempotent");
                for (_, t) in s.iter() {
                    ensure!(s.apply_term(t) == *t, "case {case}: {s} not idempotent");
                }
                for g in &grounds {
                    if ground(&a, g) == ground(&b, g) {
                        for v in &vars {
                            let via = ground(&Atom::new("v", vec![s.apply_term(&Term::var(v.as_str()))], Level::L1), g);
                            let direct = ground(&Atom::new("v", vec![Term::var(v.as_str())], Level::L1), g);
                            ensure!(via == direct, "case {case}: {s} is not most general for {a} {b}");
                        }
                    }
                }
            }
            None => {
                ensure!(
                    grounds.iter().all(|g| ground(&a, g) != ground(&b, g)),
                    "case {case}: {a} and {b} have a unifier"
                );
            }
        }
    }
    ensure!(unified > 1000, "only {unified} unifiable pairs");

    let mut rng = StdRng::seed_from_u64(8);
    let preds = [("p", 1), ("q", 2), ("r", 2)];
    for case in 0..300 {
        let nf = rng.gen_range(1..=50);
        let lines: Vec<String> = (0..nf)
            .map(|_| {
                let (p, n) = preds[rng.gen_range(0..3)];
                let args: Vec<&str> = (0..n).map(|_| CONSTANTS[rng.gen_range(0..8)]).collect();
                format!("{p}({})/{}/{}", args.join(","), rng.gen_range(1..=2), rng.gen_range(1..=3))
            })
            .collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let kb = kb_from_lines(None, &refs);
        let na = rng.gen_range(1..=4);
        let atoms: Vec<String> = (0..na)
            .map(|_| {
                let (p, n) = preds[rng.gen_range(0..3)];
                let args: Vec<String> = (0..n).map(|_| random_term(&mut rng).to_string()).collect();
                format!("{p}({})", args.join(","))
            })
            .collect();
        let q = common::query(&atoms.iter().map(String::as_str).collect::<Vec<_>>());
        let got: BTreeSet<(u32, u32, BTreeMap<String, String>)> = prove_direct(&q, Scope::Fragment, &kb)
            .into_iter()
            .map(|r| {
                let b = r.bindings.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
                (r.passage.doc, r.passage.frag.unwrap_or(0), b)
            })
            .collect();
        let want = join_oracle(&q.atoms, &kb);
        ensure!(got == want, "join case {case}: {q} gave {} results, oracle {}", got.len(), want.len());
    }
    Ok(())
}

fn ambiguity_pipeline() -> Check {
    let sentence = "John saw the man with the telescope.";
    let t = builtin_translator();
    ensure!(t.theta == 0.8, "theta {}", t.theta);
    let a = t.analyse(sentence).map_err(|e| e.to_string())?;
    ensure!(a.chart.spanning("S").len() == 2, "{} spanning readings", a.chart.spanning("S").len());
    ensure!(a.readings.len() == 1, "{} readings survive", a.readings.len());
    let kept = &a.readings[0].atoms;
    ensure!(
        kept.iter().any(|x| x.predicate == "circumstance") && !kept.iter().any(|x| x.predicate == "tool"),
        "surviving reading is not the noun attachment"
    );

    let mut tie = builtin_translator();
    tie.weights = Weights {
        right_association: 0.0,
        minimal_attachment: 0.0,
        selectional: 0.0,
    };
    let tr = tie
        .translate_fragment(sentence, 15, 1, &mut Counters::default())
        .map_err(|e| e.to_string())?;
    ensure!(tr.readings == 2 && tr.groups.len() == 2, "{} readings, groups {:?}", tr.readings, tr.groups);

    let mut b = KbBuilder::new();
    b.ingest_document(&tie, 15, sentence).map_err(|e| e.to_string())?;
    b.ingest_document(&tie, 20, "John saw the man.").map_err(|e| e.to_string())?;
    let kb = b.freeze();
    let q = translate_query(&tie, "John saw the man");
    let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
    let ranked = rank(out.results, 15, &kb);
    let order: Vec<(u32, bool)> = ranked
        .iter()
        .map(|r| (r.result.passage.doc, r.result.ambiguous_support))
        .collect();
    ensure!(order == [(20, false), (15, true)], "ranking {order:?}");
    Ok(())
}

fn keyword_floor() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    for case in 0..1000 {
        let nf = rng.gen_range(1..=25);
        let lines: Vec<String> = (1..=nf)
            .map(|i| {
                let w = CONSTANTS[rng.gen_range(0..8)];
                let (doc, frag) = (rng.gen_range(1..=4), rng.gen_range(1..=2));
                match rng.gen_range(0..3) {
                    0 => format!("property({w},sk-{i})/{frag}/{doc}"),
                    1 => format!("circumstance({w},sk-{i},sk-{})/{frag}/{doc}", i + 100),
                    _ => format!("circumstance(of,sk-{i},{w})/{frag}/{doc}"),
                }
            })
            .collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let kb = kb_from_lines(None, &refs);
        let nq = rng.gen_range(1..=4);
        let atoms: Vec<String> = (0..nq)
            .map(|k| format!("object({},K{k})", CONSTANTS[rng.gen_range(0..8)]))
            .collect();
        let q = common::query(&atoms.iter().map(String::as_str).collect::<Vec<_>>());
        let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
        let mut got = BTreeMap::new();
        for r in &out.results {
            ensure!(r.stage == Stage::KeywordFallback, "case {case}: result at {}", r.stage);
            got.insert((r.passage.doc, r.passage.frag.unwrap_or(0)), (r.coverage, r.cost as usize));
        }
        let want = keyword_coverage(&q.atoms, &kb);
        ensure!(got == want, "case {case}: {got:?} vs oracle {want:?}");
    }
    Ok(())
}

fn persistence() -> Check {
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let saved = save_kb(&kb);
    ensure!(save_kb(&demo_kb(&t)) == saved, "two saves differ");
    let loaded = load_kb(&saved, "demo.kb", &t.levels).map_err(|e| e.to_string())?;
    ensure!(save_kb(&loaded) == saved, "re-save differs");
    for text in ["Natural language questions", "programming languages", "qqqq language"] {
        let q = translate_query(&t, text);
        let render = |kb: &KnowledgeBase| {
            let out = variable_depth_search(&q, &SearchConfig::default(), kb);
            rank(out.results, 15, kb)
                .iter()
                .map(|r| format!("{}\n{}", format_line(r), explain(&r.result, kb)))
                .collect::<String>()
        };
        ensure!(render(&kb) == render(&loaded), "results differ for {text:?}");
    }
    let mut b = KbBuilder::new();
    b.seed_skolem_counter(28);
    b.ingest_document(&t, 11, "Natural language question answering systems")
        .map_err(|e| e.to_string())?;
    let line = "fact eventuality(answer,sk-31,sk-30,sk-29)/1/11 level=L1";
    ensure!(save_kb(&b.freeze()).lines().any(|l| l == line), "missing `{line}`");
    Ok(())
}

fn end_to_end_scale() -> Check {
    let start = Instant::now();
    let t = builtin_translator();
    let kb = demo_kb(&t);
    let mut queries: Vec<String> = Vec::new();
    for (_, text) in DEMO_CORPUS {
        for line in text.lines().filter(|l| !l.trim().is_empty()).take(2) {
            let words: Vec<&str> = line.split_whitespace().take(6).collect();
            queries.push(words.join(" "));
        }
    }
    queries.truncate(50);
    ensure!(queries.len() == 50, "only {} queries", queries.len());
    let mut answered = 0;
    for text in &queries {
        let q = translate_query(&t, text);
        let out = variable_depth_search(&q, &SearchConfig::default(), &kb);
        if !rank(out.results, 15, &kb).is_empty() {
            answered += 1;
        }
    }
    ensure!(answered == 50, "{answered} of 50 queries answered");
    within(start, Duration::from_secs(10))
}

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 11] = [
        ("answering systems translation", answering_systems_translation),
        ("natural language questions retrieval", natural_language_questions_retrieval),
        ("structure sharing direct proof", structure_sharing_direct_proof),
        ("locative chaining", locative_chaining),
        ("variable-depth gating", variable_depth_gating),
        ("decomposition ordering", decomposition_ordering),
        ("unification and join oracle", unification_suite),
        ("ambiguity pipeline", ambiguity_pipeline),
        ("keyword fallback floor", keyword_floor),
        ("persistence", persistence),
        ("end-to-end scale", end_to_end_scale),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let ms = start.elapsed().as_millis();
        match &res {
            Ok(()) => println!("criterion {} PASS {name} ({ms} ms)", i + 1),
            Err(why) => {
                println!("criterion {} FAIL {name} ({ms} ms): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
