//! Preference scoring of ambiguous readings and proportional-distance pruning.
//!
//! A reading's score sums, over its attachment decisions, a Right
//! Association bonus when the modifier sits on the lowest, rightmost
//! available site, a Minimal Attachment bonus when that site re-parents the
//! fewest nodes, a selectional bonus when the lexicon prefers that host, and
//! the modifier's lexical weight. An adjunction is a decision only when the
//! tree offers at least two host sites.

use crate::parse::chart::{Chart, EdgeId, EdgeKind};
use crate::parse::grammar::Grammar;
use crate::parse::lexicon::{AttachPref, LexId, Lexicon};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub right_association: f64,
    pub minimal_attachment: f64,
    pub selectional: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            right_association: 2.0,
            minimal_attachment: 1.0,
            selectional: 4.0,
        }
    }
}

/// Default proportional-distance threshold.
pub const DEFAULT_THETA: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentDecision {
    /// The adjunction edge.
    pub node: EdgeId,
    pub host: EdgeId,
    pub attachee: EdgeId,
    /// Number of candidate sites.
    pub sites: usize,
    pub right_association: bool,
    pub minimal_attachment: bool,
    pub selectional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reading {
    pub edge: EdgeId,
    pub score: f64,
    pub decisions: Vec<AttachmentDecision>,
}

struct Site {
    edge: EdgeId,
    start: usize,
    depth: usize,
    size: usize,
}

/// Scores the tree rooted at `root`.
pub fn score_reading(
    chart: &Chart,
    root: EdgeId,
    grammar: &Grammar,
    lexicon: &Lexicon,
    weights: &Weights,
) -> Reading {
    let mut decisions = Vec::new();
    let mut total = 0.0;
    let mut path: Vec<EdgeId> = Vec::new();
    walk(chart, root, &mut path, &mut |node, ancestors| {
        let EdgeKind::Rule { rule, children } = &chart.edge(node).kind else {
            return;
        };
        let r = grammar.rule(*rule);
        if !r.is_adjunction() {
            return;
        }
        let (host, attachee) = (children[0], children[1]);
        let hosts = grammar.hosts_for(&r.rhs[1]);
        let end = chart.edge(node).end;
        let attachee_size = chart.tree_size(attachee);

        let mut sites = Vec::new();
        for (depth, &a) in ancestors.iter().enumerate() {
            let e = chart.edge(a);
            if e.end == end && hosts.contains(&e.category.as_str()) {
                sites.push(Site {
                    edge: a,
                    start: e.start,
                    depth,
                    size: chart.tree_size(a) - 1 - attachee_size,
                });
            }
        }
        let mut cur = Some(host);
        let mut depth = ancestors.len();
        while let Some(c) = cur {
            let e = chart.edge(c);
            if hosts.contains(&e.category.as_str()) {
                sites.push(Site {
                    edge: c,
                    start: e.start,
                    depth,
                    size: chart.tree_size(c),
                });
            }
            cur = e.children().last().copied();
            depth += 1;
        }
        if sites.len() < 2 {
            return;
        }
        let lowest = sites
            .iter()
            .max_by_key(|s| (s.start, s.depth))
            .map(|s| s.edge);
        let min_size = sites.iter().map(|s| s.size).min().unwrap_or(0);
        let host_size = chart.tree_size(host);
        let ra = lowest == Some(host);
        let ma = host_size == min_size;

        let modifier = head_entry(chart, grammar, attachee);
        let host_head = head_entry(chart, grammar, host);
        let host_cat = chart.edge(host).category.as_str();
        let mut sel = false;
        let mut w_lex = 0.0;
        if let Some(m) = modifier {
            let m = lexicon.entry(m);
            w_lex = m.features.w_lex;
            sel = match m.features.attach {
                Some(AttachPref::Verbal) => host_cat == "VP",
                Some(AttachPref::Nominal) => host_cat == "NP",
                None => false,
            };
            if let Some(h) = host_head {
                sel |= lexicon.entry(h).features.pp.contains(&m.lemma);
            }
        }
        let mut s = w_lex;
        if ra {
            s += weights.right_association;
        }
        if ma {
            s += weights.minimal_attachment;
        }
        if sel {
            s += weights.selectional;
        }
        total += s;
        decisions.push(AttachmentDecision {
            node,
            host,
            attachee,
            sites: sites.len(),
            right_association: ra,
            minimal_attachment: ma,
            selectional: sel,
        });
    });
    Reading {
        edge: root,
        score: total,
        decisions,
    }
}

fn walk(
    chart: &Chart,
    node: EdgeId,
    path: &mut Vec<EdgeId>,
    f: &mut dyn FnMut(EdgeId, &[EdgeId]),
) {
    f(node, path);
    path.push(node);
    for &c in chart.edge(node).children() {
        walk(chart, c, path, f);
    }
    path.pop();
}

/// Index of the head child of a rule edge.
pub fn head_child(chart: &Chart, node: EdgeId) -> Option<usize> {
    let e = chart.edge(node);
    let children = e.children();
    if children.is_empty() {
        return None;
    }
    let cats: Vec<&str> = children
        .iter()
        .map(|&c| chart.edge(c).category.as_str())
        .collect();
    let prefer: &[&str] = match e.category.as_str() {
        "NOM" => return Some(children.len() - 1),
        "NP" => &["NP", "NOM", "PName"],
        "VP" => &["VP", "V"],
        "PP" => &["P"],
        "S" => &["S", "VP"],
        _ => &[],
    };
    for p in prefer {
        if let Some(i) = cats.iter().position(|c| c == p) {
            return Some(i);
        }
    }
    Some(children.len() - 1)
}

/// Lexical head of a constituent.
pub fn head_entry(chart: &Chart, _grammar: &Grammar, node: EdgeId) -> Option<LexId> {
    let mut cur = node;
    loop {
        match &chart.edge(cur).kind {
            EdgeKind::Lexical { entry, .. } => return Some(*entry),
            EdgeKind::Rule { children, .. } => {
                let i = head_child(chart, cur)?;
                cur = children[i];
            }
        }
    }
}

/// Keeps readings scoring at least `theta` times the best score; keeps all
/// when the best score is not positive. Order is preserved.
pub fn prune_by_proportional_distance(readings: Vec<Reading>, theta: f64) -> Vec<Reading> {
    let max = readings
        .iter()
        .map(|r| r.score)
        .fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return readings;
    }
    readings
        .into_iter()
        .filter(|r| r.score >= theta * max)
        .collect()
}
