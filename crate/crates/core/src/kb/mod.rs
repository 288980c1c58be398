//! The knowledge base: indexed facts with back-pointers to their passages,
//! meaning postulates, isa links and the counters of the ingest phase.
//!
//! A [`KbBuilder`] is the single writer; [`KbBuilder::freeze`] yields an
//! immutable [`KnowledgeBase`] that serves queries. Growing a frozen base
//! means building a new snapshot with [`KnowledgeBase::into_builder`].

pub mod persist;
pub mod postulate;

use std::collections::{BTreeMap, HashMap};

use crate::error::{KbError, LoadError};
use crate::isa::IsaHierarchy;
use crate::logic::{Fact, GroupId, LevelLookup, Provenance};
use crate::parse::lexicon::strip_comment;
use crate::semantics::translate::{Counters, Translator};

pub use persist::{load_kb, save_kb, KB_HEADER};
pub use postulate::{parse_postulate, parse_postulates, MeaningPostulate, SideCondition};

/// Index of a fact in the knowledge base; facts are stored in ingest order,
/// so ids also give textual order within a document.
pub type FactId = usize;

/// A passage: its text and character span within the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passage {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestReport {
    pub doc: u32,
    pub fragments: usize,
    pub facts: usize,
    pub groups: usize,
    pub parse_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KnowledgeBase {
    facts: Vec<Fact>,
    index: HashMap<(String, usize), Vec<FactId>>,
    docs: BTreeMap<u32, String>,
    passages: BTreeMap<(u32, u32), Passage>,
    postulates: Vec<MeaningPostulate>,
    isa: IsaHierarchy,
    counters: Counters,
    groups: BTreeMap<GroupId, Provenance>,
}

impl KnowledgeBase {
    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: FactId) -> &Fact {
        &self.facts[id]
    }

    /// Ids of the facts with this predicate and arity, in id order.
    pub fn candidates(&self, predicate: &str, arity: usize) -> &[FactId] {
        self.index
            .get(&(predicate.to_string(), arity))
            .map_or(&[], Vec::as_slice)
    }

    pub fn documents(&self) -> impl Iterator<Item = (u32, &str)> {
        self.docs.iter().map(|(d, t)| (*d, t.as_str()))
    }

    pub fn document(&self, doc: u32) -> Option<&str> {
        self.docs.get(&doc).map(String::as_str)
    }

    pub fn passage(&self, doc: u32, frag: u32) -> Option<&Passage> {
        self.passages.get(&(doc, frag))
    }

    pub fn passages(&self) -> impl Iterator<Item = ((u32, u32), &Passage)> {
        self.passages.iter().map(|(k, v)| (*k, v))
    }

    pub fn postulates(&self) -> &[MeaningPostulate] {
        &self.postulates
    }

    pub fn isa(&self) -> &IsaHierarchy {
        &self.isa
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// The fragment a disjunct group belongs to.
    pub fn group(&self, id: GroupId) -> Option<Provenance> {
        self.groups.get(&id).copied()
    }

    pub fn groups(&self) -> impl Iterator<Item = (GroupId, Provenance)> + '_ {
        self.groups.iter().map(|(g, p)| (*g, *p))
    }

    pub fn into_builder(self) -> KbBuilder {
        KbBuilder { kb: self }
    }
}

/// Mutable ingest phase of a knowledge base.
#[derive(Debug, Clone, Default)]
pub struct KbBuilder {
    kb: KnowledgeBase,
}

impl KbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts skolem numbering at `next` (must not reuse numbers already
    /// issued).
    pub fn seed_skolem_counter(&mut self, next: u32) {
        self.kb.counters.skolem = self.kb.counters.skolem.max(next.max(1));
    }

    pub fn counters(&self) -> Counters {
        self.kb.counters
    }

    /// Segments and translates a document, storing its facts and passages.
    pub fn ingest_document(
        &mut self,
        translator: &Translator,
        doc: u32,
        text: &str,
    ) -> Result<IngestReport, KbError> {
        if doc == 0 {
            return Err(KbError::Load(LoadError::Invalid(
                "document ids start at 1".into(),
            )));
        }
        if self.kb.docs.contains_key(&doc) {
            return Err(KbError::DuplicateDocument(doc));
        }
        if text.trim().is_empty() {
            return Err(KbError::EmptyDocument(doc));
        }
        // translate into a scratch copy of the counters so a failing
        // fragment leaves the builder untouched
        let mut counters = self.kb.counters;
        let translated = translator.translate_document(text, doc, &mut counters)?;
        let mut report = IngestReport {
            doc,
            ..IngestReport::default()
        };
        self.kb.docs.insert(doc, text.to_string());
        for (seg, tr) in translated {
            report.fragments += 1;
            report.facts += tr.facts.len();
            report.groups += tr.groups.len();
            if tr.readings == 0 {
                report.parse_failures += 1;
            }
            self.kb.passages.insert(
                (doc, seg.id),
                Passage {
                    text: seg.text,
                    start: seg.start,
                    end: seg.end,
                },
            );
            for g in tr.groups {
                self.kb.groups.insert(g, Provenance { doc, frag: seg.id });
            }
            for f in tr.facts {
                self.push_fact(f);
            }
        }
        self.kb.counters = counters;
        Ok(report)
    }

    /// Appends a passage to a document, creating the document if needed.
    /// Used to assemble knowledge bases without the translator.
    pub fn add_passage(&mut self, doc: u32, frag: u32, text: &str) -> Result<(), KbError> {
        if doc == 0 || frag == 0 {
            return Err(KbError::UnknownPassage { doc, frag });
        }
        let body = self.kb.docs.entry(doc).or_default();
        if !body.is_empty() {
            body.push(' ');
        }
        let start = body.chars().count();
        body.push_str(text);
        let end = body.chars().count();
        self.kb.passages.insert(
            (doc, frag),
            Passage {
                text: text.to_string(),
                start,
                end,
            },
        );
        Ok(())
    }

    /// Adds a fact whose passage is already registered.
    pub fn add_fact(&mut self, fact: Fact) -> Result<FactId, KbError> {
        let (doc, frag) = (fact.prov.doc, fact.prov.frag);
        if !self.kb.passages.contains_key(&(doc, frag)) {
            return Err(KbError::UnknownPassage { doc, frag });
        }
        for t in &fact.atom.args {
            if let crate::logic::Term::Skolem(n) = t {
                self.kb.counters.skolem = self.kb.counters.skolem.max(n + 1);
            }
        }
        if let Some(g) = fact.group {
            self.kb.groups.insert(g, fact.prov);
            self.kb.counters.group = self.kb.counters.group.max(g + 1);
        }
        Ok(self.push_fact(fact))
    }

    fn push_fact(&mut self, fact: Fact) -> FactId {
        let id = self.kb.facts.len();
        self.kb
            .index
            .entry((fact.atom.predicate.clone(), fact.atom.arity()))
            .or_default()
            .push(id);
        self.kb.facts.push(fact);
        id
    }

    pub fn add_postulate(&mut self, post: MeaningPostulate) -> Result<(), LoadError> {
        post.validate().map_err(LoadError::Invalid)?;
        self.kb.postulates.push(post);
        Ok(())
    }

    /// Loads a postulate file; returns the number of postulates added.
    pub fn load_postulates(
        &mut self,
        text: &str,
        file: &str,
        levels: &dyn LevelLookup,
    ) -> Result<usize, LoadError> {
        let posts = parse_postulates(text, file, levels)?;
        let n = posts.len();
        self.kb.postulates.extend(posts);
        Ok(n)
    }

    /// Drops every postulate, before loading a replacement library.
    pub fn clear_postulates(&mut self) {
        self.kb.postulates.clear();
    }

    pub fn clear_isa(&mut self) {
        self.kb.isa = IsaHierarchy::new();
    }

    pub fn add_isa(&mut self, sub: &str, sup: &str) -> Result<(), LoadError> {
        self.kb.isa.add(sub, sup)
    }

    /// Loads `isa <sub> <super>` lines; returns the number of links read.
    pub fn load_isa(&mut self, text: &str, file: &str) -> Result<usize, LoadError> {
        let mut n = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["isa", sub, sup] => {
                    self.add_isa(sub, sup)?;
                    n += 1;
                }
                _ => return Err(LoadError::at(file, i + 1, raw, "expected `isa <sub> <super>`")),
            }
        }
        Ok(n)
    }

    /// Ends the ingest phase.
    pub fn freeze(self) -> KnowledgeBase {
        self.kb
    }

    pub(crate) fn restore_counters(&mut self, counters: Counters) {
        self.kb.counters = counters;
    }

    pub(crate) fn insert_document(&mut self, doc: u32, text: String) {
        self.kb.docs.insert(doc, text);
    }

    pub(crate) fn insert_passage(&mut self, doc: u32, frag: u32, passage: Passage) {
        self.kb.passages.insert((doc, frag), passage);
    }

    pub(crate) fn has_document(&self, doc: u32) -> bool {
        self.kb.docs.contains_key(&doc)
    }
}
