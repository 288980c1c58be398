//! Tokenization, fragment segmentation, chart parsing, reading scoring and
//! maximal-fragment recovery.

pub mod chart;
pub mod grammar;
pub mod lexicon;
pub mod score;
pub mod segment;

pub use chart::{chart_parse, maximal_fragments, maximal_fragments_among, Chart, ChartEdge, EdgeId, EdgeKind, Piece};
pub use grammar::{Grammar, GrammarRule};
pub use lexicon::{Category, LexEntry, LexId, Lexicon, PrepTarget};
pub use score::{prune_by_proportional_distance, score_reading, Reading, Weights};
pub use segment::{segment_fragments, tokenize, Segment, Token};
