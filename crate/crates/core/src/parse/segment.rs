//! Fragment segmentation and tokenization.

use crate::error::TranslateError;
use crate::parse::lexicon::{LexId, Lexicon};

const ABBREVIATIONS: [&str; 14] = [
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "dr.", "mr.", "mrs.", "ms.", "prof.", "fig.", "al.",
    "approx.", "resp.",
];

/// A fragment (sentence, title or caption) with its character span in the
/// document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub id: u32,
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Splits a document into fragments numbered from 1.
///
/// A first line without sentence-final punctuation is a title. The rest is
/// split after `.`, `!` or `?` followed by whitespace, unless the period ends
/// a listed abbreviation.
pub fn segment_fragments(doc: &str) -> Result<Vec<Segment>, TranslateError> {
    if doc.trim().is_empty() {
        return Err(TranslateError::EmptyDocument);
    }
    let chars: Vec<char> = doc.chars().collect();
    let mut spans: Vec<(usize, usize)> = Vec::new();

    let mut body_start = 0;
    let first_content = chars.iter().position(|c| !c.is_whitespace()).unwrap_or(0);
    if let Some(nl) = chars[first_content..].iter().position(|&c| c == '\n') {
        let line_end = first_content + nl;
        let line: String = chars[first_content..line_end].iter().collect();
        let trimmed = line.trim_end();
        if !trimmed.ends_with(['.', '!', '?']) {
            spans.push((first_content, first_content + trimmed.chars().count()));
            body_start = line_end + 1;
        }
    }

    let mut start = body_start;
    let mut i = body_start;
    while i < chars.len() {
        let c = chars[i];
        let boundary = matches!(c, '.' | '!' | '?')
            && chars.get(i + 1).is_none_or(|n| n.is_whitespace())
            && !(c == '.' && ends_with_abbreviation(&chars[start..=i]));
        if boundary {
            spans.push((start, i + 1));
            start = i + 1;
        }
        i += 1;
    }
    if start < chars.len() {
        spans.push((start, chars.len()));
    }

    let mut out = Vec::new();
    for (s, e) in spans {
        let mut s = s;
        let mut e = e;
        while s < e && chars[s].is_whitespace() {
            s += 1;
        }
        while e > s && chars[e - 1].is_whitespace() {
            e -= 1;
        }
        if !chars[s..e].iter().any(|c| c.is_alphanumeric()) {
            continue;
        }
        out.push(Segment {
            id: out.len() as u32 + 1,
            text: chars[s..e].iter().collect(),
            start: s,
            end: e,
        });
    }
    Ok(out)
}

fn ends_with_abbreviation(sentence: &[char]) -> bool {
    let word_start = sentence
        .iter()
        .rposition(|c| c.is_whitespace() || *c == '(')
        .map_or(0, |p| p + 1);
    let word: String = sentence[word_start..].iter().collect::<String>().to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

/// A token: a normalized word (or multiword lexicon unit) and its readings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub entries: Vec<LexId>,
}

/// Splits on whitespace and punctuation, lowercases, and merges multiword
/// lexicon entries longest-first.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Vec<Token> {
    let words: Vec<String> = text
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|w| w.replace('\'', "").to_lowercase())
        .filter(|w| !w.is_empty())
        .collect();
    let max = lexicon.max_words();
    let mut out = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let mut taken = false;
        for n in (2..=max.min(words.len() - i)).rev() {
            let cand = words[i..i + n].join(" ");
            let entries = lexicon.lookup(&cand);
            if !entries.is_empty() {
                out.push(Token { text: cand, entries });
                i += n;
                taken = true;
                break;
            }
        }
        if !taken {
            out.push(Token {
                text: words[i].clone(),
                entries: lexicon.lookup(&words[i]),
            });
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(doc: &str) -> Vec<String> {
        segment_fragments(doc)
            .unwrap()
            .into_iter()
            .map(|s| s.text)
            .collect()
    }

    #[test]
    fn title_then_sentences() {
        let segs = segment_fragments("A title\nFirst sentence. Second sentence.").unwrap();
        assert_eq!(segs.len(), 3);
        assert_eq!(segs.iter().map(|s| s.id).collect::<Vec<_>>(), [1, 2, 3]);
        assert_eq!(segs[0].text, "A title");
        assert_eq!(segs[2].text, "Second sentence.");
    }

    #[test]
    fn single_title_fragment() {
        let segs = segment_fragments("Natural language question answering systems").unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].id, 1);
        assert_eq!(segs[0].text, "Natural language question answering systems");
    }

    #[test]
    fn empty_document_is_an_error() {
        assert_eq!(segment_fragments(""), Err(TranslateError::EmptyDocument));
        assert_eq!(segment_fragments(" \n "), Err(TranslateError::EmptyDocument));
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(
            texts("Parsers, e.g. chart parsers, work. They are fast!"),
            ["Parsers, e.g. chart parsers, work.", "They are fast!"]
        );
    }

    #[test]
    fn spans_point_into_the_document() {
        let doc = "Title line\n  One. Two?";
        for s in segment_fragments(doc).unwrap() {
            let sub: String = doc.chars().skip(s.start).take(s.end - s.start).collect();
            assert_eq!(sub, s.text);
        }
    }

    #[test]
    fn multiword_tokens_are_merged() {
        let lex = Lexicon::parse(
            "natural language | N | language | prop=natural\nquestions | N | question\nnatural | Adj | natural",
            "t",
        )
        .unwrap();
        let toks = tokenize("Natural language questions!", &lex);
        let t: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(t, ["natural language", "questions"]);
        let toks = tokenize("natural qqq", &lex);
        assert_eq!(toks.len(), 2);
        assert!(toks[1].entries.is_empty());
    }
}
