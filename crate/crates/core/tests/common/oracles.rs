//! Brute-force reference implementations the engine is checked against.

use std::collections::{BTreeMap, BTreeSet};

use logdoc::kb::KnowledgeBase;
use logdoc::logic::{Atom, Term};

pub const CONSTANTS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

pub type Binding = BTreeMap<String, String>;

/// Every way to map the query onto ground facts of one fragment, by trying
/// all combinations of facts for the atoms.
pub fn join_oracle(query: &[Atom], kb: &KnowledgeBase) -> BTreeSet<(u32, u32, Binding)> {
    let mut per_frag: BTreeMap<(u32, u32), Vec<&Atom>> = BTreeMap::new();
    for f in kb.facts() {
        per_frag.entry((f.prov.doc, f.prov.frag)).or_default().push(&f.atom);
    }
    let mut out = BTreeSet::new();
    for ((doc, frag), facts) in per_frag {
        let mut choice = vec![0usize; query.len()];
        if query.is_empty() {
            continue;
        }
        loop {
            if let Some(b) = consistent(query, &choice, &facts) {
                out.insert((doc, frag, b));
            }
            // odometer over fact choices
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < facts.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out
}

fn consistent(query: &[Atom], choice: &[usize], facts: &[&Atom]) -> Option<Binding> {
    let mut b = Binding::new();
    for (q, &c) in query.iter().zip(choice) {
        let f = facts[c];
        if q.predicate != f.predicate || q.args.len() != f.args.len() {
            return None;
        }
        for (qt, ft) in q.args.iter().zip(&f.args) {
            let value = ft.to_string();
            match qt {
                Term::Var(v) => match b.get(v) {
                    Some(old) if *old != value => return None,
                    Some(_) => {}
                    None => {
                        b.insert(v.clone(), value);
                    }
                },
                other => {
                    if other.to_string() != value {
                        return None;
                    }
                }
            }
        }
    }
    Some(b)
}

/// Keywords of a fact: predicate names that are content words plus the
/// non-skolem constants, ignoring the relation slot of `circumstance`.
pub fn keyword_oracle(a: &Atom) -> Vec<String> {
    let structural = [
        "object",
        "property",
        "circumstance",
        "isa",
        "time",
        "location",
        "manner",
        "purpose",
        "method",
        "tool",
        "beneficiary",
    ];
    let mut out = Vec::new();
    if a.args.len() < 3 && !structural.contains(&a.predicate.as_str()) {
        out.push(a.predicate.clone());
    }
    for (i, t) in a.args.iter().enumerate() {
        if a.predicate == "circumstance" && i == 0 {
            continue;
        }
        if let Term::Const(c) = t {
            out.push(c.clone());
        }
    }
    out
}

/// Coverage and missing-keyword count per fragment, counting linearly.
pub fn keyword_coverage(query: &[Atom], kb: &KnowledgeBase) -> BTreeMap<(u32, u32), (f64, usize)> {
    let mut wanted: Vec<String> = query.iter().flat_map(keyword_oracle).collect();
    wanted.sort();
    wanted.dedup();
    let mut words: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for f in kb.facts() {
        words
            .entry((f.prov.doc, f.prov.frag))
            .or_default()
            .extend(keyword_oracle(&f.atom));
    }
    let mut out = BTreeMap::new();
    for (p, ws) in words {
        let hits = wanted.iter().filter(|w| ws.contains(w)).count();
        if hits > 0 {
            out.insert(p, (hits as f64 / wanted.len() as f64, wanted.len() - hits));
        }
    }
    out
}

/// Variables of the given atoms, sorted.
pub fn vars_of(atoms: &[&Atom]) -> Vec<String> {
    let mut vs: Vec<String> = atoms
        .iter()
        .flat_map(|a| a.variables())
        .map(str::to_string)
        .collect();
    vs.sort();
    vs.dedup();
    vs
}

/// All ground substitutions of `vars` over the constant alphabet.
pub fn ground_substitutions(vars: &[String]) -> Vec<BTreeMap<String, Term>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|m| {
                CONSTANTS.iter().map(move |c| {
                    let mut m = m.clone();
                    m.insert(v.clone(), Term::constant(*c));
                    m
                })
            })
            .collect();
    }
    out
}

pub fn ground(a: &Atom, m: &BTreeMap<String, Term>) -> Atom {
    let args = a
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        })
        .collect();
    Atom::new(a.predicate.clone(), args, a.level)
}
