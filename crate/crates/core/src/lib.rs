//! Logic-based passage retrieval: documents are translated into leveled,
//! provenance-annotated Horn facts, and queries are answered by deduction
//! under a staged, progressively relaxed search.

pub mod error;
pub mod isa;
pub mod kb;
pub mod logic;
pub mod parse;
pub mod prover;
pub mod resources;
pub mod retrieval;
pub mod semantics;
pub mod unify;

pub use error::{KbError, LoadError, SyntaxError, TranslateError};
pub use logic::{Atom, Fact, GroupId, Level, Provenance, Substitution, Term};
pub use prover::{variable_depth_search, MatchResult, Query, SearchConfig, Stage};
