//! The lexicon: surface forms with category, lemma and semantic features.
//!
//! File format, one entry per line (`#` starts a comment):
//!
//! ```text
//! gave | V | give | evtype=locative;roles=agent,aff_ent,goal
//! on | P | on | prep=time
//! against | P | against | prep=circ:against;attach=vp
//! answering | N | answering | deverbal=answer:eventuality
//! natural language | N | language | prop=natural
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::LoadError;

/// Lexical categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Det,
    Adj,
    N,
    RelN,
    V,
    P,
    Adv,
    PName,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Det => "Det",
            Category::Adj => "Adj",
            Category::N => "N",
            Category::RelN => "RelN",
            Category::V => "V",
            Category::P => "P",
            Category::Adv => "Adv",
            Category::PName => "PName",
        }
    }

    /// Content words contribute keyword facts when they cannot be analysed.
    pub fn is_content(self) -> bool {
        !matches!(self, Category::Det | Category::P)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Det" => Category::Det,
            "Adj" => Category::Adj,
            "N" => Category::N,
            "RelN" => Category::RelN,
            "V" => Category::V,
            "P" => Category::P,
            "Adv" => Category::Adv,
            "PName" => Category::PName,
            other => return Err(format!("unknown category `{other}`")),
        })
    }
}

/// The seven core modifiers a preposition or adverb may map to.
pub const CORE_MODIFIERS: [&str; 7] = [
    "time",
    "location",
    "manner",
    "purpose",
    "method",
    "tool",
    "beneficiary",
];

/// What a preposition contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrepTarget {
    /// A core modifier predicate over the event (`time(E, X)`).
    Modifier(String),
    /// A level-3 circumstance constant (`circumstance(against, E, X)`).
    Circumstance(String),
    /// An inner role slot of the verb's scheme (`from` → source).
    Role(String),
    /// A two-place relation `rel(X, Host)`.
    Relation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachPref {
    Verbal,
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Features {
    pub evtype: Option<String>,
    pub roles: Vec<String>,
    pub relation: Option<String>,
    pub prep: Option<PrepTarget>,
    /// Source verb and eventuality type of a deverbal noun.
    pub deverbal: Option<(String, String)>,
    /// The noun also asserts the one-place predicate `lemma(X)`.
    pub unary: bool,
    /// Properties asserted of the referent (multiword adjective-noun entries).
    pub props: Vec<String>,
    pub attach: Option<AttachPref>,
    /// Prepositions this head prefers as attached modifiers.
    pub pp: Vec<String>,
    /// Core modifier an adverb expresses.
    pub modifier: Option<String>,
    /// Possessive determiner (`her`, `its`).
    pub possessive: bool,
    pub w_lex: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub surface: String,
    pub category: Category,
    pub lemma: String,
    pub features: Features,
}

impl LexEntry {
    /// The relation name of a relational noun.
    pub fn relation(&self) -> &str {
        self.features.relation.as_deref().unwrap_or(&self.lemma)
    }
}

pub type LexId = usize;

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    by_surface: HashMap<String, Vec<LexId>>,
    max_words: usize,
}

const SUFFIXES: [(&str, &str); 7] = [
    ("s", ""),
    ("es", ""),
    ("ed", ""),
    ("d", ""),
    ("ing", ""),
    ("ing", "e"),
    ("ies", "y"),
];

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, entry: LexEntry) -> LexId {
        let id = self.entries.len();
        self.max_words = self.max_words.max(entry.surface.split(' ').count());
        self.by_surface
            .entry(entry.surface.clone())
            .or_default()
            .push(id);
        self.entries.push(entry);
        id
    }

    pub fn entry(&self, id: LexId) -> &LexEntry {
        &self.entries[id]
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn max_words(&self) -> usize {
        self.max_words.max(1)
    }

    pub fn exact(&self, surface: &str) -> &[LexId] {
        self.by_surface.get(surface).map_or(&[], Vec::as_slice)
    }

    /// Entries for a (possibly inflected) surface form: the exact form first,
    /// then the first suffix-stripped form that is listed.
    pub fn lookup(&self, surface: &str) -> Vec<LexId> {
        let exact = self.exact(surface);
        if !exact.is_empty() {
            return exact.to_vec();
        }
        // the suffix table applies to the last word of a multiword form
        let (prefix, last) = match surface.rsplit_once(' ') {
            Some((p, l)) => (Some(p), l),
            None => (None, surface),
        };
        for (suffix, repl) in SUFFIXES {
            if let Some(stem) = last.strip_suffix(suffix) {
                if stem.chars().count() < 2 {
                    continue;
                }
                let cand = match prefix {
                    Some(p) => format!("{p} {stem}{repl}"),
                    None => format!("{stem}{repl}"),
                };
                let found = self.exact(&cand);
                if !found.is_empty() {
                    return found.to_vec();
                }
            }
        }
        Vec::new()
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, LoadError> {
        let mut lex = Lexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let entry = parse_entry(line).map_err(|m| LoadError::at(file, i + 1, raw, m))?;
            lex.add(entry);
        }
        Ok(lex)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

fn parse_entry(line: &str) -> Result<LexEntry, String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() < 3 || fields.len() > 4 {
        return Err("expected `word | category | lemma | features`".into());
    }
    let surface = fields[0]
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    if surface.is_empty() {
        return Err("empty surface form".into());
    }
    let category: Category = fields[1].parse()?;
    let lemma = fields[2].to_string();
    if lemma.is_empty() || !lemma.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
        return Err(format!("lemma `{lemma}` must be a lowercase identifier"));
    }
    let mut f = Features::default();
    if let Some(feats) = fields.get(3) {
        for kv in feats.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = match kv.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (kv, ""),
            };
            let list = || -> Vec<String> {
                value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            };
            match key {
                "evtype" => f.evtype = Some(value.to_string()),
                "roles" => f.roles = list(),
                "rel" => f.relation = Some(value.to_string()),
                "prep" => f.prep = Some(parse_prep(value)?),
                "deverbal" => {
                    let (verb, ev) = value
                        .split_once(':')
                        .ok_or("deverbal expects `verb:evtype`")?;
                    f.deverbal = Some((verb.to_string(), ev.to_string()));
                }
                "unary" => f.unary = true,
                "prop" => f.props = list(),
                "attach" => {
                    f.attach = Some(match value {
                        "vp" => AttachPref::Verbal,
                        "np" => AttachPref::Nominal,
                        _ => return Err(format!("attach expects vp or np, got `{value}`")),
                    })
                }
                "pp" => f.pp = list(),
                "mod" => {
                    if !CORE_MODIFIERS.contains(&value) {
                        return Err(format!("`{value}` is not a core modifier"));
                    }
                    f.modifier = Some(value.to_string());
                }
                "poss" => f.possessive = true,
                "w_lex" => {
                    f.w_lex = value
                        .parse()
                        .map_err(|_| format!("w_lex expects a number, got `{value}`"))?
                }
                other => return Err(format!("unknown feature `{other}`")),
            }
        }
    }
    match category {
        Category::V => {
            if f.evtype.is_none() {
                return Err("verb entries need evtype=".into());
            }
            if f.roles.len() < 2 {
                return Err("verb frames need an obligatory role beyond the subject".into());
            }
        }
        Category::P if f.prep.is_none() => {
            return Err("preposition entries need prep=".into());
        }
        _ => {}
    }
    Ok(LexEntry {
        surface,
        category,
        lemma,
        features: f,
    })
}

fn parse_prep(value: &str) -> Result<PrepTarget, String> {
    if let Some(c) = value.strip_prefix("circ:") {
        Ok(PrepTarget::Circumstance(c.to_string()))
    } else if let Some(r) = value.strip_prefix("role:") {
        Ok(PrepTarget::Role(r.to_string()))
    } else if let Some(r) = value.strip_prefix("rel:") {
        Ok(PrepTarget::Relation(r.to_string()))
    } else if CORE_MODIFIERS.contains(&value) {
        Ok(PrepTarget::Modifier(value.to_string()))
    } else {
        Err(format!("unknown preposition mapping `{value}`"))
    }
}
