#![allow(dead_code)]

use logdoc::kb::{KbBuilder, KnowledgeBase};
use logdoc::logic::{parse_annotated, parse_atom, Atom, Level, LevelLookup, Term};
use logdoc::prover::Query;
use logdoc::resources::{builtin_rules, builtin_translator};
use logdoc::semantics::{is_variant, Translator};

/// Levels for hand-written atoms: the shipped table, unknown predicates L1.
pub struct Levels(pub Translator);

impl LevelLookup for Levels {
    fn level_of(&self, p: &str, n: usize) -> Option<Level> {
        Some(self.0.levels.level_of(p, n).unwrap_or(Level::L1))
    }
}

pub fn levels() -> Levels {
    Levels(builtin_translator())
}

pub fn atom(s: &str) -> Atom {
    parse_atom(s, &levels()).unwrap()
}

pub fn query(atoms: &[&str]) -> Query {
    let lv = levels();
    Query::new(atoms.iter().map(|a| parse_atom(a, &lv).unwrap()).collect(), "")
}

/// A knowledge base from annotated fact lines; every passage gets a
/// placeholder text. Rules come from `rules` (or none).
pub fn kb_from_lines(rules: Option<KbBuilder>, lines: &[&str]) -> KnowledgeBase {
    let lv = levels();
    let mut b = rules.unwrap_or_default();
    let mut seen = std::collections::BTreeSet::new();
    let mut facts = Vec::new();
    for l in lines {
        let f = parse_annotated(l, &lv).unwrap();
        seen.insert((f.prov.doc, f.prov.frag));
        facts.push(f);
    }
    for (d, f) in seen {
        b.add_passage(d, f, &format!("passage {f} of document {d}.")).unwrap();
    }
    for f in facts {
        b.add_fact(f).unwrap();
    }
    b.freeze()
}

pub fn shipped_rules() -> KbBuilder {
    builtin_rules(&builtin_translator())
}

/// Skolems become variables, so ground fact sets compare modulo renaming.
pub fn open(atoms: &[Atom]) -> Vec<Atom> {
    atoms
        .iter()
        .map(|a| {
            let mut a = a.clone();
            for t in &mut a.args {
                if let Term::Skolem(n) = t {
                    *t = Term::var(format!("Sk{n}"));
                }
            }
            a
        })
        .collect()
}

pub fn same_modulo_renaming(a: &[Atom], b: &[Atom]) -> bool {
    a.len() == b.len() && is_variant(&open(a), &open(b))
}

pub mod oracles;
