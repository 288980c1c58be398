//! Breadth-first, bottom-up chart parsing.
//!
//! Edges are built span length by span length, so every edge is created
//! after all edges of shorter spans. Derivations are not packed: each
//! distinct way of building a constituent is its own edge.

use std::collections::{HashMap, HashSet};

use crate::error::TranslateError;
use crate::parse::grammar::Grammar;
use crate::parse::lexicon::{LexId, Lexicon};
use crate::parse::segment::Token;

pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeKind {
    Lexical { token: usize, entry: LexId },
    Rule { rule: usize, children: Vec<EdgeId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartEdge {
    pub category: String,
    pub start: usize,
    pub end: usize,
    pub kind: EdgeKind,
    /// Creation ordinal; equals the edge id.
    pub ordinal: usize,
}

impl ChartEdge {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn children(&self) -> &[EdgeId] {
        match &self.kind {
            EdgeKind::Rule { children, .. } => children,
            EdgeKind::Lexical { .. } => &[],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub tokens: Vec<Token>,
    pub edges: Vec<ChartEdge>,
    /// Set when the edge limit stopped parsing before closure.
    pub truncated: bool,
    by_start: HashMap<(usize, String), Vec<EdgeId>>,
    seen: HashSet<(usize, Vec<EdgeId>)>,
}

pub const DEFAULT_MAX_EDGES: usize = 20_000;

/// Parses `tokens` bottom-up and breadth-first. Tokens without lexicon
/// entries get no lexical edge.
pub fn chart_parse(tokens: &[Token], grammar: &Grammar, lexicon: &Lexicon) -> Chart {
    chart_parse_limited(tokens, grammar, lexicon, DEFAULT_MAX_EDGES)
}

pub fn chart_parse_limited(
    tokens: &[Token],
    grammar: &Grammar,
    lexicon: &Lexicon,
    max_edges: usize,
) -> Chart {
    let mut chart = Chart {
        tokens: tokens.to_vec(),
        edges: Vec::new(),
        truncated: false,
        by_start: HashMap::new(),
        seen: HashSet::new(),
    };
    for (i, tok) in tokens.iter().enumerate() {
        for &entry in &tok.entries {
            let cat = lexicon.entry(entry).category.as_str().to_string();
            chart.push(cat, i, i + 1, EdgeKind::Lexical { token: i, entry });
        }
    }
    let n = tokens.len();
    'outer: for len in 1..=n {
        for start in 0..=(n - len) {
            let end = start + len;
            loop {
                let mut added = false;
                for (ri, rule) in grammar.rules().iter().enumerate() {
                    for children in chart.tilings(&rule.rhs, start, end) {
                        if chart.seen.contains(&(ri, children.clone())) {
                            continue;
                        }
                        if chart.edges.len() >= max_edges {
                            chart.truncated = true;
                            break 'outer;
                        }
                        chart.push(
                            rule.lhs.clone(),
                            start,
                            end,
                            EdgeKind::Rule { rule: ri, children },
                        );
                        added = true;
                    }
                }
                if !added {
                    break;
                }
            }
        }
    }
    chart
}

impl Chart {
    fn push(&mut self, category: String, start: usize, end: usize, kind: EdgeKind) -> EdgeId {
        let id = self.edges.len();
        if let EdgeKind::Rule { rule, children } = &kind {
            self.seen.insert((*rule, children.clone()));
        }
        self.by_start
            .entry((start, category.clone()))
            .or_default()
            .push(id);
        self.edges.push(ChartEdge {
            category,
            start,
            end,
            kind,
            ordinal: id,
        });
        id
    }

    /// Every sequence of edges with categories `rhs` that tiles `[start, end)`.
    fn tilings(&self, rhs: &[String], start: usize, end: usize) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.tile_from(rhs, start, end, &mut prefix, &mut out);
        out
    }

    fn tile_from(
        &self,
        rhs: &[String],
        pos: usize,
        end: usize,
        prefix: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        let Some((first, rest)) = rhs.split_first() else {
            return;
        };
        let Some(cands) = self.by_start.get(&(pos, first.clone())) else {
            return;
        };
        for &e in cands {
            let edge_end = self.edges[e].end;
            if rest.is_empty() {
                if edge_end == end {
                    prefix.push(e);
                    out.push(prefix.clone());
                    prefix.pop();
                }
            } else if edge_end + rest.len() <= end {
                prefix.push(e);
                self.tile_from(rest, edge_end, end, prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn edge(&self, id: EdgeId) -> &ChartEdge {
        &self.edges[id]
    }

    /// Edges of `category` covering every token.
    pub fn spanning(&self, category: &str) -> Vec<EdgeId> {
        let n = self.tokens.len();
        self.edges
            .iter()
            .filter(|e| e.start == 0 && e.end == n && e.category == category)
            .map(|e| e.ordinal)
            .collect()
    }

    /// Number of derivable edges missing from the chart; zero for a closed chart.
    pub fn missing_edges(&self, grammar: &Grammar) -> usize {
        let n = self.tokens.len();
        let mut missing = 0;
        for start in 0..n {
            for end in start + 1..=n {
                for (ri, rule) in grammar.rules().iter().enumerate() {
                    for children in self.tilings(&rule.rhs, start, end) {
                        if !self.seen.contains(&(ri, children)) {
                            missing += 1;
                        }
                    }
                }
            }
        }
        missing
    }

    /// Token indices under an edge, left to right.
    pub fn yield_of(&self, id: EdgeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(e) = stack.pop() {
            match &self.edges[e].kind {
                EdgeKind::Lexical { token, .. } => out.push(*token),
                EdgeKind::Rule { children, .. } => stack.extend(children.iter().rev()),
            }
        }
        out
    }

    /// Number of nodes in the tree rooted at `id`.
    pub fn tree_size(&self, id: EdgeId) -> usize {
        1 + self.edges[id]
            .children()
            .iter()
            .map(|&c| self.tree_size(c))
            .sum::<usize>()
    }
}

/// A piece of an unparsable fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Edge(EdgeId),
    Word(usize),
}

/// Phrasal categories eligible as maximal fragments, in preference order.
pub const FRAGMENT_CATEGORIES: [&str; 4] = ["S", "VP", "NP", "PP"];

/// Greedy left-to-right cover by the longest phrasal edge starting at each
/// uncovered position; positions no phrase starts at become word pieces.
///
/// Fails when a root category (`roots`) already spans the input.
pub fn maximal_fragments(chart: &Chart, roots: &[&str]) -> Result<Vec<Piece>, TranslateError> {
    if roots.iter().any(|r| !chart.spanning(r).is_empty()) {
        return Err(TranslateError::SpanningParse);
    }
    Ok(maximal_fragments_among(chart, &FRAGMENT_CATEGORIES))
}

/// The greedy cover restricted to `categories` (in preference order),
/// without the spanning-parse check.
pub fn maximal_fragments_among(chart: &Chart, categories: &[&str]) -> Vec<Piece> {
    let n = chart.tokens.len();
    let rank = |cat: &str| categories.iter().position(|c| *c == cat);
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < n {
        let best = chart
            .edges
            .iter()
            .filter(|e| e.start == pos && rank(&e.category).is_some())
            .min_by_key(|e| (std::cmp::Reverse(e.end), rank(&e.category), e.ordinal));
        match best {
            Some(e) => {
                out.push(Piece::Edge(e.ordinal));
                pos = e.end;
            }
            None => {
                out.push(Piece::Word(pos));
                pos += 1;
            }
        }
    }
    out
}
