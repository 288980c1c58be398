//! The isa hierarchy over constants: an acyclic set of `sub ⊑ super` links
//! with a lazily computed reflexive-transitive closure.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use crate::error::LoadError;

#[derive(Debug, Default)]
pub struct IsaHierarchy {
    parents: BTreeMap<String, BTreeSet<String>>,
    // constant -> (ancestor -> minimal number of links)
    closure: OnceLock<HashMap<String, HashMap<String, u32>>>,
}

impl Clone for IsaHierarchy {
    fn clone(&self) -> Self {
        IsaHierarchy {
            parents: self.parents.clone(),
            closure: OnceLock::new(),
        }
    }
}

impl PartialEq for IsaHierarchy {
    fn eq(&self, other: &Self) -> bool {
        self.parents == other.parents
    }
}

impl IsaHierarchy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// Adds `sub ⊑ sup`, refusing links that would close a cycle.
    pub fn add(&mut self, sub: &str, sup: &str) -> Result<(), LoadError> {
        if sub == sup || self.reaches(sup, sub) {
            return Err(LoadError::IsaCycle {
                sub: sub.to_string(),
                sup: sup.to_string(),
            });
        }
        self.parents
            .entry(sub.to_string())
            .or_default()
            .insert(sup.to_string());
        self.closure = OnceLock::new();
        Ok(())
    }

    /// All links, sorted by (sub, super).
    pub fn links(&self) -> impl Iterator<Item = (&str, &str)> {
        self.parents
            .iter()
            .flat_map(|(s, ps)| ps.iter().map(move |p| (s.as_str(), p.as_str())))
    }

    fn reaches(&self, from: &str, to: &str) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(c) = stack.pop() {
            if c == to {
                return true;
            }
            if !seen.insert(c) {
                continue;
            }
            if let Some(ps) = self.parents.get(c) {
                stack.extend(ps.iter().map(String::as_str));
            }
        }
        false
    }

    fn closure(&self) -> &HashMap<String, HashMap<String, u32>> {
        self.closure.get_or_init(|| {
            let mut out = HashMap::new();
            for start in self.parents.keys() {
                let mut dist: HashMap<String, u32> = HashMap::new();
                let mut queue = VecDeque::from([(start.as_str(), 0u32)]);
                while let Some((c, d)) = queue.pop_front() {
                    if let Some(ps) = self.parents.get(c) {
                        for p in ps {
                            if !dist.contains_key(p) {
                                dist.insert(p.clone(), d + 1);
                                queue.push_back((p, d + 1));
                            }
                        }
                    }
                }
                out.insert(start.clone(), dist);
            }
            out
        })
    }

    /// Number of links from `descendant` up to `ancestor`; `Some(0)` when they
    /// are equal, `None` when `descendant` is not below `ancestor`.
    pub fn descent(&self, ancestor: &str, descendant: &str) -> Option<u32> {
        if ancestor == descendant {
            return Some(0);
        }
        self.closure()
            .get(descendant)
            .and_then(|m| m.get(ancestor))
            .copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_reflexive_and_transitive() {
        let mut h = IsaHierarchy::new();
        h.add("oo_programming_language", "programming_language").unwrap();
        h.add("programming_language", "language").unwrap();
        assert_eq!(h.descent("language", "language"), Some(0));
        assert_eq!(h.descent("programming_language", "oo_programming_language"), Some(1));
        assert_eq!(h.descent("language", "oo_programming_language"), Some(2));
        assert_eq!(h.descent("oo_programming_language", "language"), None);
    }

    #[test]
    fn cycles_are_rejected() {
        let mut h = IsaHierarchy::new();
        h.add("oo_programming_language", "programming_language").unwrap();
        let err = h
            .add("programming_language", "oo_programming_language")
            .unwrap_err();
        assert!(err.to_string().contains("programming_language -> oo_programming_language"));
        assert!(h.add("a", "a").is_err());
    }

    #[test]
    fn adding_links_invalidates_the_cache() {
        let mut h = IsaHierarchy::new();
        h.add("a", "b").unwrap();
        assert_eq!(h.descent("c", "a"), None);
        h.add("b", "c").unwrap();
        assert_eq!(h.descent("c", "a"), Some(2));
    }
}
