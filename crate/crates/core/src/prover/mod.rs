//! Query answering by staged deduction over the knowledge base.

pub mod config;
pub mod controller;
pub mod decompose;
pub mod keyword;
pub mod query;
pub mod search;

pub use config::{SearchConfig, Stage};
pub use controller::{variable_depth_search, RungReport, SearchOutcome, StageReport, StageStatus};
pub use decompose::{decompose, Rung, RungKind};
pub use keyword::{keyword_fallback, query_keywords};
pub use query::{translate_query, Query};
pub use search::{
    prove, prove_direct, prove_with_postulates, MatchResult, PassageRef, ProofNode, ProofRun,
    ProveOptions, Scope,
};
