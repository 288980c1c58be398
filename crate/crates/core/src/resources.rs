//! Shipped grammar, lexicon, schemes, level table, postulates, isa links and
//! the demo corpus.

use crate::error::LoadError;
use crate::kb::{KbBuilder, KnowledgeBase};
use crate::parse::grammar::Grammar;
use crate::parse::lexicon::Lexicon;
use crate::semantics::compose::BUILDERS;
use crate::semantics::tables::{LevelTable, SchemeTable};
use crate::semantics::translate::Translator;

pub const GRAMMAR: &str = include_str!("../data/grammar.txt");
pub const LEXICON: &str = include_str!("../data/lexicon.txt");
pub const SCHEMES: &str = include_str!("../data/schemes.txt");
pub const LEVELS: &str = include_str!("../data/levels.txt");
pub const POSTULATES: &str = include_str!("../data/postulates.txt");
pub const ISA: &str = include_str!("../data/isa.txt");

/// Demo corpus documents as `(doc id, text)`.
pub const DEMO_CORPUS: [(u32, &str); 30] = [
    (1, include_str!("../data/corpus/01.txt")),
    (2, include_str!("../data/corpus/02.txt")),
    (3, include_str!("../data/corpus/03.txt")),
    (4, include_str!("../data/corpus/04.txt")),
    (5, include_str!("../data/corpus/05.txt")),
    (6, include_str!("../data/corpus/06.txt")),
    (7, include_str!("../data/corpus/07.txt")),
    (8, include_str!("../data/corpus/08.txt")),
    (9, include_str!("../data/corpus/09.txt")),
    (10, include_str!("../data/corpus/10.txt")),
    (11, include_str!("../data/corpus/11.txt")),
    (12, include_str!("../data/corpus/12.txt")),
    (13, include_str!("../data/corpus/13.txt")),
    (14, include_str!("../data/corpus/14.txt")),
    (15, include_str!("../data/corpus/15.txt")),
    (16, include_str!("../data/corpus/16.txt")),
    (17, include_str!("../data/corpus/17.txt")),
    (18, include_str!("../data/corpus/18.txt")),
    (19, include_str!("../data/corpus/19.txt")),
    (20, include_str!("../data/corpus/20.txt")),
    (21, include_str!("../data/corpus/21.txt")),
    (22, include_str!("../data/corpus/22.txt")),
    (23, include_str!("../data/corpus/23.txt")),
    (24, include_str!("../data/corpus/24.txt")),
    (25, include_str!("../data/corpus/25.txt")),
    (26, include_str!("../data/corpus/26.txt")),
    (27, include_str!("../data/corpus/27.txt")),
    (28, include_str!("../data/corpus/28.txt")),
    (29, include_str!("../data/corpus/29.txt")),
    (30, include_str!("../data/corpus/30.txt")),
];

/// Builds a translator from resource texts.
pub fn translator_from(
    grammar: &str,
    lexicon: &str,
    schemes: &str,
    levels: &str,
) -> Result<Translator, LoadError> {
    Translator::new(
        Lexicon::parse(lexicon, "lexicon")?,
        Grammar::parse(grammar, "grammar", &BUILDERS)?,
        SchemeTable::parse(schemes, "schemes")?,
        LevelTable::parse(levels, "levels")?,
    )
}

/// The translator over the shipped resources.
pub fn builtin_translator() -> Translator {
    translator_from(GRAMMAR, LEXICON, SCHEMES, LEVELS).expect("shipped resources are valid")
}

/// A builder holding the shipped postulates and isa links.
pub fn builtin_rules(translator: &Translator) -> KbBuilder {
    let mut b = KbBuilder::new();
    b.load_postulates(POSTULATES, "postulates", &translator.levels)
        .expect("shipped postulates are valid");
    b.load_isa(ISA, "isa").expect("shipped isa links are valid");
    b
}

/// The demo corpus ingested with the shipped rules.
pub fn demo_kb(translator: &Translator) -> KnowledgeBase {
    let mut b = builtin_rules(translator);
    for (doc, text) in DEMO_CORPUS {
        b.ingest_document(translator, doc, text)
            .expect("demo corpus translates");
    }
    b.freeze()
}
