//! Queries: open conjunctions with implicit fragment and document scope
//! variables.

use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{Atom, Term};
use crate::parse::segment::tokenize;
use crate::semantics::translate::{keyword_atom, Translator};

/// A conjunction of open atoms, all implicitly sharing the scope variables
/// `/S/D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub atoms: Vec<Atom>,
    /// Name of the shared fragment variable.
    pub frag_var: String,
    /// Name of the shared document variable.
    pub doc_var: String,
    pub text: String,
}

impl Query {
    /// Wraps atoms, choosing scope variable names that do not clash with
    /// content variables.
    pub fn new(atoms: Vec<Atom>, text: impl Into<String>) -> Self {
        let used: BTreeSet<String> = atoms
            .iter()
            .flat_map(|a| a.variables())
            .map(str::to_string)
            .collect();
        let fresh = |base: &str| {
            let mut name = base.to_string();
            while used.contains(&name) {
                name.push('_');
            }
            name
        };
        Query {
            frag_var: fresh("S"),
            doc_var: fresh("D"),
            atoms,
            text: text.into(),
        }
    }

    /// Distinct content variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for a in &self.atoms {
            for v in a.variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total coverage weight of the atoms at the given positions.
    pub fn weight_of(&self, positions: &[usize]) -> u32 {
        positions
            .iter()
            .map(|&i| self.atoms[i].level.coverage_weight())
            .sum()
    }

    pub fn total_weight(&self) -> u32 {
        self.atoms.iter().map(|a| a.level.coverage_weight()).sum()
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}/{}/{}", self.frag_var, self.doc_var)?;
        }
        Ok(())
    }
}

/// Translates query text without existential closure. Text the grammar
/// cannot handle degrades to keyword atoms over its words.
pub fn translate_query(translator: &Translator, text: &str) -> Query {
    match translator.query_atoms(text) {
        Ok(atoms) if !atoms.is_empty() => Query::new(atoms, text),
        _ => keyword_query(translator, text),
    }
}

fn keyword_query(translator: &Translator, text: &str) -> Query {
    let mut atoms = Vec::new();
    let mut seen = BTreeSet::new();
    for t in tokenize(text, &translator.lexicon) {
        let word = match t.entries.first() {
            None => t.text.replace(' ', "_"),
            Some(_) => match t
                .entries
                .iter()
                .map(|&e| translator.lexicon.entry(e))
                .find(|e| e.category.is_content())
            {
                Some(e) => e.lemma.clone(),
                None => continue,
            },
        };
        if seen.insert(word.clone()) {
            atoms.push(keyword_atom(&word, Term::var(format!("K{}", atoms.len() + 1))));
        }
    }
    Query::new(atoms, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Level;

    #[test]
    fn scope_variables_avoid_content_variables() {
        let a = Atom::new("p", vec![Term::var("S"), Term::var("D_")], Level::L1);
        let q = Query::new(vec![a], "");
        assert_eq!(q.frag_var, "S_");
        assert_eq!(q.doc_var, "D");
        assert_eq!(q.to_string(), "p(S,D_)/S_/D");
    }

    #[test]
    fn weights_follow_levels() {
        let q = Query::new(
            vec![
                Atom::new("a", vec![Term::var("X")], Level::L1),
                Atom::new("b", vec![Term::var("X")], Level::L2),
                Atom::new("c", vec![Term::var("X")], Level::L3),
            ],
            "",
        );
        assert_eq!(q.total_weight(), 6);
        assert_eq!(q.weight_of(&[0, 2]), 4);
    }
}
