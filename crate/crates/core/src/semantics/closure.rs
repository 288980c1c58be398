//! Existential closure and collapsing of variant readings.

use std::collections::HashMap;

use crate::logic::{Atom, Term};

/// Replaces each distinct variable by a fresh skolem constant, numbering in
/// first-occurrence order from `*counter`; the counter ends one past the last
/// skolem used.
pub fn existential_closure(atoms: &[Atom], counter: &mut u32) -> Vec<Atom> {
    let mut map: HashMap<String, Term> = HashMap::new();
    atoms
        .iter()
        .map(|a| {
            let args = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => map
                        .entry(v.clone())
                        .or_insert_with(|| {
                            let s = Term::Skolem(*counter);
                            *counter += 1;
                            s
                        })
                        .clone(),
                    other => other.clone(),
                })
                .collect();
            Atom::new(a.predicate.clone(), args, a.level)
        })
        .collect()
}

/// True when `b` is `a` up to reordering atoms and a bijective renaming of
/// variables.
pub fn is_variant(a: &[Atom], b: &[Atom]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    match_from(a, b, 0, &mut used, &mut fwd, &mut back)
}

fn match_from(
    a: &[Atom],
    b: &[Atom],
    i: usize,
    used: &mut [bool],
    fwd: &mut HashMap<String, String>,
    back: &mut HashMap<String, String>,
) -> bool {
    if i == a.len() {
        return true;
    }
    for j in 0..b.len() {
        if used[j] || a[i].predicate != b[j].predicate || a[i].arity() != b[j].arity() {
            continue;
        }
        let (saved_f, saved_b) = (fwd.clone(), back.clone());
        if args_match(&a[i].args, &b[j].args, fwd, back) {
            used[j] = true;
            if match_from(a, b, i + 1, used, fwd, back) {
                return true;
            }
            used[j] = false;
        }
        *fwd = saved_f;
        *back = saved_b;
    }
    false
}

fn args_match(
    xs: &[Term],
    ys: &[Term],
    fwd: &mut HashMap<String, String>,
    back: &mut HashMap<String, String>,
) -> bool {
    for (x, y) in xs.iter().zip(ys) {
        match (x, y) {
            (Term::Var(u), Term::Var(v)) => {
                let f = fwd.entry(u.clone()).or_insert_with(|| v.clone());
                let g = back.entry(v.clone()).or_insert_with(|| u.clone());
                if f != v || g != u {
                    return false;
                }
            }
            (Term::Var(_), _) | (_, Term::Var(_)) => return false,
            _ if x != y => return false,
            _ => {}
        }
    }
    true
}

/// Keeps one representative, the highest scoring, per variant class. The
/// classes appear in the order of their first member.
pub fn collapse_equivalent<T>(items: Vec<(Vec<Atom>, f64, T)>) -> Vec<(Vec<Atom>, f64, T)> {
    let mut out: Vec<(Vec<Atom>, f64, T)> = Vec::new();
    for item in items {
        match out.iter_mut().find(|o| is_variant(&o.0, &item.0)) {
            Some(o) => {
                if item.1 > o.1 {
                    *o = item;
                }
            }
            None => out.push(item),
        }
    }
    out
}
