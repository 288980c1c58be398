//! From parse trees to leveled, annotated facts.

pub mod closure;
pub mod compose;
pub mod tables;
pub mod translate;

pub use closure::{collapse_equivalent, existential_closure, is_variant};
pub use compose::{compose_logical_form, OpenFormula, SemanticContext, BUILDERS};
pub use tables::{LevelTable, Scheme, SchemeTable};
pub use translate::{
    keyword_atom, Analysis, Counters, FragmentTranslation, ScoredReading, Translator,
};
