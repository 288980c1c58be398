//! Most-general unification of flat atoms, optionally matching query
//! constants against their isa-descendants.

use crate::isa::IsaHierarchy;
use crate::logic::{Atom, Substitution, Term};

/// Read handle onto an isa hierarchy. When disabled it behaves as an empty
/// hierarchy.
#[derive(Debug, Clone, Copy)]
pub struct IsaView<'a> {
    hierarchy: Option<&'a IsaHierarchy>,
}

impl<'a> IsaView<'a> {
    pub fn enabled(hierarchy: &'a IsaHierarchy) -> Self {
        IsaView {
            hierarchy: Some(hierarchy),
        }
    }

    pub fn disabled() -> Self {
        IsaView { hierarchy: None }
    }

    pub fn new(hierarchy: &'a IsaHierarchy, enabled: bool) -> Self {
        if enabled {
            Self::enabled(hierarchy)
        } else {
            Self::disabled()
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.hierarchy.is_some()
    }

    fn descent(&self, general: &str, specific: &str) -> Option<u32> {
        match self.hierarchy {
            Some(h) => h.descent(general, specific),
            None => (general == specific).then_some(0),
        }
    }
}

/// A successful unification: the mgu plus the number of isa links crossed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unifier {
    pub subst: Substitution,
    pub isa_hops: u32,
}

/// Unifies `query` against `fact`.
///
/// Predicate and arity must match exactly. With isa enabled, a constant of
/// `query` also matches any constant of `fact` that lies below it in the
/// hierarchy; the query side denotes the more general concept.
pub fn unify_atoms(query: &Atom, fact: &Atom, isa: IsaView<'_>) -> Option<Unifier> {
    let mut subst = Substitution::new();
    let hops = unify_into(query, fact, isa, &mut subst)?;
    Some(Unifier {
        subst,
        isa_hops: hops,
    })
}

/// Unifies under an existing substitution, extending it in place. Returns the
/// isa hops used; on failure `subst` may be partially extended.
pub(crate) fn unify_into(
    query: &Atom,
    fact: &Atom,
    isa: IsaView<'_>,
    subst: &mut Substitution,
) -> Option<u32> {
    if query.predicate != fact.predicate || query.args.len() != fact.args.len() {
        return None;
    }
    let mut hops = 0;
    for (q, f) in query.args.iter().zip(&fact.args) {
        let qa = subst.apply_term(q);
        let fa = subst.apply_term(f);
        if qa == fa {
            continue;
        }
        match (&qa, &fa) {
            (Term::Var(v), _) => subst.bind(v, fa),
            (_, Term::Var(v)) => subst.bind(v, qa),
            (Term::Const(general), Term::Const(specific)) if matches!(q, Term::Const(_)) => {
                hops += isa.descent(general, specific)?;
            }
            _ => return None,
        }
    }
    Some(hops)
}

/// Composition `s1` then `s2`: applying the result equals applying `s1`
/// followed by `s2`.
pub fn compose_substitutions(s1: &Substitution, s2: &Substitution) -> Substitution {
    let mut out: Substitution = s1
        .iter()
        .map(|(v, t)| (v.clone(), s2.apply_term(t)))
        .collect();
    for (v, t) in s2.iter() {
        if s1.get(v).is_none() {
            out.insert_raw(v.clone(), t.clone());
        }
    }
    out
}
