//! Line-oriented KB files.
//!
//! ```text
//! #LOGDOC-KB v1
//! counter sk <n>
//! counter group <n>
//! doc <id> <escaped text>
//! frag <doc> <frag> <escaped text>
//! fact <atom>/<frag>/<doc> level=<L1|L2|L3|AUX> [group=<gid>]
//! post <L2|L3> w=<weight> <head> <- <body>, ... [; <side conditions>]
//! isa <sub> <super>
//! ```
//!
//! Saving is deterministic: documents and passages in id order, facts in
//! id order, postulates in load order, isa links sorted.

use std::fmt::Write as _;

use crate::error::LoadError;
use crate::kb::postulate::parse_postulate;
use crate::kb::{KbBuilder, KnowledgeBase, Passage};
use crate::logic::{format_annotated, parse_annotated, LevelLookup};
use crate::semantics::translate::Counters;

pub const KB_HEADER: &str = "#LOGDOC-KB";
const VERSION: &str = "v1";

pub fn save_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let c = kb.counters();
    let _ = writeln!(out, "{KB_HEADER} {VERSION}");
    let _ = writeln!(out, "counter sk {}", c.skolem);
    let _ = writeln!(out, "counter group {}", c.group);
    for (doc, text) in kb.documents() {
        let _ = writeln!(out, "doc {doc} {}", escape(text));
        for ((d, frag), p) in kb.passages() {
            if d == doc {
                let _ = writeln!(out, "frag {doc} {frag} {}", escape(&p.text));
            }
        }
    }
    for f in kb.facts() {
        let _ = write!(out, "fact {} level={}", format_annotated(f), f.atom.level);
        if let Some(g) = f.group {
            let _ = write!(out, " group={g}");
        }
        out.push('\n');
    }
    for p in kb.postulates() {
        let _ = writeln!(out, "{p}");
    }
    for (sub, sup) in kb.isa().links() {
        let _ = writeln!(out, "isa {sub} {sup}");
    }
    out
}

pub fn load_kb(text: &str, file: &str, levels: &dyn LevelLookup) -> Result<KnowledgeBase, LoadError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim_end())
        .ok_or_else(|| LoadError::at(file, 1, "", "empty KB file"))?;
    match header.strip_prefix(KB_HEADER).map(str::trim) {
        Some(VERSION) => {}
        Some(found) => {
            return Err(LoadError::Version {
                file: file.to_string(),
                found: found.to_string(),
            })
        }
        None => return Err(LoadError::at(file, 1, header, "missing `#LOGDOC-KB` header")),
    }

    let mut b = KbBuilder::new();
    let mut counters = Counters::default();
    // next unsearched character offset per document, for passage spans
    let mut cursor: std::collections::HashMap<u32, usize> = Default::default();
    for (i, line) in lines {
        let no = i + 1;
        let err = |m: String| LoadError::at(file, no, line, m);
        if line.trim().is_empty() {
            continue;
        }
        let (kind, rest) = line.split_once(' ').unwrap_or((line, ""));
        match kind {
            "counter" => {
                let (name, n) = rest.split_once(' ').ok_or_else(|| err("expected `counter <name> <n>`".into()))?;
                let n: u32 = n.trim().parse().map_err(|_| err("counter must be an integer".into()))?;
                match name {
                    "sk" => counters.skolem = n,
                    "group" => counters.group = n,
                    other => return Err(err(format!("unknown counter `{other}`"))),
                }
            }
            "doc" => {
                let (id, body) = rest.split_once(' ').unwrap_or((rest, ""));
                let id: u32 = id.parse().map_err(|_| err("bad document id".into()))?;
                if b.has_document(id) {
                    return Err(err(format!("document {id} listed twice")));
                }
                b.insert_document(id, unescape(body).map_err(err)?);
            }
            "frag" => {
                let mut parts = rest.splitn(3, ' ');
                let doc: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad document id".into()))?;
                let frag: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad fragment id".into()))?;
                let text = unescape(parts.next().unwrap_or("")).map_err(err)?;
                let body = b
                    .kb
                    .docs
                    .get(&doc)
                    .ok_or_else(|| err(format!("fragment of unknown document {doc}")))?;
                let from = cursor.get(&doc).copied().unwrap_or(0);
                let (start, end) = find_chars(body, &text, from)
                    .ok_or_else(|| err("fragment text not found in its document".into()))?;
                cursor.insert(doc, end);
                b.insert_passage(doc, frag, Passage { text, start, end });
            }
            "fact" => {
                let fact = parse_annotated(rest, levels).map_err(|e| LoadError::syntax(file, no, e))?;
                b.add_fact(fact).map_err(|e| err(e.to_string()))?;
            }
            "post" => {
                let post = parse_postulate(line, levels).map_err(|e| LoadError::syntax(file, no, e))?;
                b.add_postulate(post)?;
            }
            "isa" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [sub, sup] = parts.as_slice() else {
                    return Err(err("expected `isa <sub> <super>`".into()));
                };
                b.add_isa(sub, sup)?;
            }
            other => return Err(err(format!("unknown line kind `{other}`"))),
        }
    }
    let derived = b.counters();
    if counters.skolem < derived.skolem || counters.group < derived.group {
        return Err(LoadError::Invalid(format!(
            "{file}: counters lie below identifiers already in use"
        )));
    }
    b.restore_counters(counters);
    Ok(b.freeze())
}

/// Character span of the first occurrence of `needle` at or after `from`.
fn find_chars(hay: &str, needle: &str, from: usize) -> Option<(usize, usize)> {
    let byte_from = hay.char_indices().nth(from).map_or(hay.len(), |(b, _)| b);
    let at = hay[byte_from..].find(needle)? + byte_from;
    let start = hay[..at].chars().count();
    Some((start, start + needle.chars().count()))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some(o) => return Err(format!("unknown escape `\\{o}`")),
            None => return Err("dangling `\\`".into()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_round_trips() {
        for s in ["plain", "two\nlines", "back\\slash\tand tab", "\r\n\\n"] {
            assert_eq!(unescape(&escape(s)).unwrap(), s);
            assert!(!escape(s).contains('\n'));
        }
        assert!(unescape("bad\\q").is_err());
    }

    #[test]
    fn char_spans_handle_multibyte_text() {
        assert_eq!(find_chars("ä b. c d.", "c d.", 0), Some((5, 9)));
        assert_eq!(find_chars("x. x.", "x.", 1), Some((3, 5)));
    }
}
