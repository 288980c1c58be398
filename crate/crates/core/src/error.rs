use std::fmt;

use thiserror::Error;

/// A malformed line in one of the textual formats, with the byte position of
/// the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: String,
    pub position: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: impl Into<String>, position: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line: line.into(),
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {} in `{}`", self.message, self.position, self.line)
    }
}

impl std::error::Error for SyntaxError {}

/// Errors raised while loading resource files (grammar, lexicon, schemes,
/// level table, postulates, isa links, knowledge-base files).
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{file}:{line_no}: {source}")]
    Syntax {
        file: String,
        line_no: usize,
        #[source]
        source: SyntaxError,
    },
    #[error("{file}: unsupported version header `{found}` (expected `#LOGDOC-KB v1`)")]
    Version { file: String, found: String },
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("isa link {sub} -> {sup} would create a cycle")]
    IsaCycle { sub: String, sup: String },
    #[error("{0}")]
    Invalid(String),
}

impl LoadError {
    pub(crate) fn syntax(file: &str, line_no: usize, source: SyntaxError) -> Self {
        LoadError::Syntax {
            file: file.to_string(),
            line_no,
            source,
        }
    }

    pub(crate) fn at(file: &str, line_no: usize, line: &str, msg: impl Into<String>) -> Self {
        Self::syntax(file, line_no, SyntaxError::new(line, 0, msg))
    }
}

/// Errors of the translation pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("empty document")]
    EmptyDocument,
    #[error("empty fragment")]
    EmptyFragment,
    #[error("no semantic builder named `{0}`")]
    MissingBuilder(String),
    #[error("builder `{builder}` cannot combine categories {found}")]
    BuilderShape { builder: String, found: String },
    #[error("no level assigned to {0}")]
    UnknownLevel(String),
    #[error("no eventuality scheme `{0}`")]
    UnknownScheme(String),
    #[error("composition failed: {0}")]
    Composition(String),
    #[error("chart has a spanning parse; maximal fragments are only defined for failed parses")]
    SpanningParse,
}

/// Errors of knowledge-base construction and lookup.
#[derive(Debug, Error)]
pub enum KbError {
    #[error("document {0} already ingested")]
    DuplicateDocument(u32),
    #[error("document {0} is empty")]
    EmptyDocument(u32),
    #[error("no passage doc={doc} frag={frag}")]
    UnknownPassage { doc: u32, frag: u32 },
    #[error("no document {0}")]
    UnknownDocument(u32),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Load(#[from] LoadError),
}
