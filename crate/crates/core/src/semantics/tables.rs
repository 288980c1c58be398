//! Eventuality schemes and the predicate level table.

use std::collections::{BTreeMap, HashMap};

use crate::error::LoadError;
use crate::logic::{Level, LevelLookup};
use crate::parse::lexicon::{strip_comment, Category, Lexicon, PrepTarget};

/// Slot names with a fixed meaning; every other slot is a role.
pub const VERB_SLOT: &str = "verb";
pub const EVENT_SLOT: &str = "event";

/// Ordered argument slots of an eventuality-type predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub predicate: String,
    pub slots: Vec<String>,
}

impl Scheme {
    pub fn has_slot(&self, slot: &str) -> bool {
        self.slots.iter().any(|s| s == slot)
    }
}

/// Eventuality schemes keyed by type name. A name may carry an arity suffix
/// (`locative/6`) to distinguish shapes sharing a predicate.
#[derive(Debug, Clone, Default)]
pub struct SchemeTable {
    schemes: BTreeMap<String, Scheme>,
}

impl SchemeTable {
    pub fn get(&self, evtype: &str) -> Option<&Scheme> {
        self.schemes.get(evtype)
    }

    pub fn insert(&mut self, name: &str, slots: Vec<String>) -> Result<(), String> {
        let predicate = match name.split_once('/') {
            Some((p, n)) => {
                let arity: usize = n.parse().map_err(|_| format!("bad arity in `{name}`"))?;
                if arity != slots.len() {
                    return Err(format!("`{name}` declares {} slots", slots.len()));
                }
                p
            }
            None => name,
        };
        if slots.is_empty() {
            return Err("a scheme needs at least one slot".into());
        }
        self.schemes.insert(
            name.to_string(),
            Scheme {
                predicate: predicate.to_string(),
                slots,
            },
        );
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Scheme)> {
        self.schemes.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses `evtype <name> = slot,slot,...` lines.
    pub fn parse(text: &str, file: &str) -> Result<Self, LoadError> {
        let mut t = SchemeTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |m: String| LoadError::at(file, i + 1, raw, m);
            let rest = line
                .strip_prefix("evtype")
                .ok_or_else(|| err("expected `evtype <name> = slots`".into()))?;
            let (name, slots) = rest
                .split_once('=')
                .ok_or_else(|| err("expected `=`".into()))?;
            let slots = slots.split(',').map(|s| s.trim().to_string()).collect();
            t.insert(name.trim(), slots).map_err(err)?;
        }
        Ok(t)
    }
}

/// Maps `predicate/arity` to its representation level.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LevelTable {
    levels: HashMap<(String, usize), Level>,
}

impl LevelTable {
    pub fn insert(&mut self, predicate: &str, arity: usize, level: Level) {
        self.levels.insert((predicate.to_string(), arity), level);
    }

    pub fn get(&self, predicate: &str, arity: usize) -> Option<Level> {
        self.levels.get(&(predicate.to_string(), arity)).copied()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Parses `predicate/arity = L1|L2|L3|AUX` lines.
    pub fn parse(text: &str, file: &str) -> Result<Self, LoadError> {
        let mut t = LevelTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |m: String| LoadError::at(file, i + 1, raw, m);
            let (key, level) = line
                .split_once('=')
                .ok_or_else(|| err("expected `predicate/arity = level`".into()))?;
            let (pred, arity) = key
                .trim()
                .split_once('/')
                .ok_or_else(|| err("expected `predicate/arity`".into()))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| err(format!("bad arity `{arity}`")))?;
            let level: Level = level.trim().parse().map_err(err)?;
            t.insert(pred.trim(), arity, level);
        }
        Ok(t)
    }

    /// Adds level-1 entries for everything the lexicon and schemes can emit
    /// as content: scheme predicates, relational nouns, one-place noun
    /// predicates and relation-introducing prepositions. Existing entries win.
    pub fn derive_from(&mut self, schemes: &SchemeTable, lexicon: &Lexicon) {
        let mut add = |p: &str, n: usize| {
            self.levels.entry((p.to_string(), n)).or_insert(Level::L1);
        };
        for (_, s) in schemes.iter() {
            add(&s.predicate, s.slots.len());
        }
        for e in lexicon.entries() {
            if e.category == Category::RelN {
                add(e.relation(), 2);
            }
            if e.features.unary {
                add(&e.lemma, 1);
            }
            if let Some(PrepTarget::Relation(r)) = &e.features.prep {
                add(r, 2);
            }
        }
    }
}

impl LevelLookup for LevelTable {
    fn level_of(&self, predicate: &str, arity: usize) -> Option<Level> {
        self.get(predicate, arity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schemes_parse_with_arity_suffix() {
        let t = SchemeTable::parse(
            "evtype locative = verb,event,agent,aff_ent,goal\nevtype locative/6 = event,verb,source,path,goal,local\n",
            "s",
        )
        .unwrap();
        assert_eq!(t.get("locative").unwrap().slots.len(), 5);
        let six = t.get("locative/6").unwrap();
        assert_eq!(six.predicate, "locative");
        assert!(six.has_slot("path"));
        assert!(SchemeTable::parse("evtype bad/3 = a,b", "s").is_err());
        assert!(SchemeTable::parse("locative = a", "s").is_err());
    }

    #[test]
    fn levels_parse() {
        let t = LevelTable::parse("object/2 = L1\ncircumstance/3 = L3\nisa/2 = AUX", "l").unwrap();
        assert_eq!(t.get("object", 2), Some(Level::L1));
        assert_eq!(t.get("circumstance", 3), Some(Level::L3));
        assert_eq!(t.get("isa", 2), Some(Level::Aux));
        assert_eq!(t.get("object", 3), None);
        assert!(LevelTable::parse("object/2 = L7", "l").is_err());
    }
}
