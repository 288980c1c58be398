//! The document and query translation pipeline.

use crate::error::{LoadError, TranslateError};
use crate::logic::{Atom, Fact, GroupId, Level, Provenance, Term};
use crate::parse::chart::{chart_parse, maximal_fragments_among, Chart, EdgeId, Piece};
use crate::parse::grammar::Grammar;
use crate::parse::lexicon::{Lexicon, PrepTarget, CORE_MODIFIERS};
use crate::parse::score::{prune_by_proportional_distance, score_reading, Weights, DEFAULT_THETA};
use crate::parse::segment::{segment_fragments, tokenize, Segment, Token};
use crate::semantics::closure::{collapse_equivalent, existential_closure};
use crate::semantics::compose::{compose_logical_form, SemanticContext, BUILDERS};
use crate::semantics::tables::{LevelTable, SchemeTable, EVENT_SLOT, VERB_SLOT};

/// Root categories tried in order: sentences, then bare noun phrases (titles).
pub const ROOT_CATEGORIES: [&str; 2] = ["S", "NP"];

/// Predicates every level table must assign.
const REQUIRED_LEVELS: [(&str, usize); 3] = [("object", 2), ("property", 2), ("circumstance", 3)];

/// Monotone counters shared by every fragment of a knowledge base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counters {
    /// Next skolem number.
    pub skolem: u32,
    /// Next disjunct-group id.
    pub group: GroupId,
}

impl Default for Counters {
    fn default() -> Self {
        Counters {
            skolem: 1,
            group: 1,
        }
    }
}

/// A composed reading that survived pruning and collapsing.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredReading {
    pub edge: EdgeId,
    pub score: f64,
    pub atoms: Vec<Atom>,
}

/// Everything the pipeline learns about one fragment before closure.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub tokens: Vec<Token>,
    pub chart: Chart,
    /// Surviving readings, best first. Empty when no spanning tree composes.
    pub readings: Vec<ScoredReading>,
    /// Open formulas of the maximal fragments when `readings` is empty.
    pub pieces: Vec<Vec<Atom>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentTranslation {
    pub facts: Vec<Fact>,
    /// Disjunct groups allocated for this fragment (empty when unambiguous).
    pub groups: Vec<GroupId>,
    /// Number of readings kept; zero when maximal fragments were used.
    pub readings: usize,
}

/// Lexicon, grammar, schemes and level table, plus the ambiguity settings.
#[derive(Debug, Clone)]
pub struct Translator {
    pub lexicon: Lexicon,
    pub grammar: Grammar,
    pub schemes: SchemeTable,
    pub levels: LevelTable,
    pub weights: Weights,
    pub theta: f64,
}

impl Translator {
    /// Checks the resources against each other and completes the level table
    /// with the predicates the lexicon and schemes introduce.
    pub fn new(
        lexicon: Lexicon,
        grammar: Grammar,
        schemes: SchemeTable,
        mut levels: LevelTable,
    ) -> Result<Self, LoadError> {
        let invalid = |m: String| Err(LoadError::Invalid(m));
        for rule in grammar.rules() {
            if !BUILDERS.contains(&rule.builder.as_str()) {
                return invalid(format!("grammar names unknown builder `{}`", rule.builder));
            }
        }
        for e in lexicon.entries() {
            if let Some(ev) = &e.features.evtype {
                let Some(s) = schemes.get(ev) else {
                    return invalid(format!("verb `{}` has no scheme `{ev}`", e.surface));
                };
                for r in &e.features.roles {
                    if !s.has_slot(r) || r == VERB_SLOT || r == EVENT_SLOT {
                        return invalid(format!("`{}`: scheme `{ev}` has no role `{r}`", e.surface));
                    }
                }
            }
            if let Some((_, ev)) = &e.features.deverbal {
                let Some(s) = schemes.get(ev) else {
                    return invalid(format!("deverbal `{}` has no scheme `{ev}`", e.surface));
                };
                if !s.has_slot("agent") || !s.has_slot("aff_ent") {
                    return invalid(format!("scheme `{ev}` lacks agent or aff_ent"));
                }
            }
        }
        levels.derive_from(&schemes, &lexicon);
        let mut required: Vec<(String, usize)> = REQUIRED_LEVELS
            .iter()
            .map(|(p, n)| (p.to_string(), *n))
            .collect();
        for m in CORE_MODIFIERS {
            required.push((m.to_string(), 2));
        }
        for e in lexicon.entries() {
            if let Some(PrepTarget::Modifier(m)) = &e.features.prep {
                required.push((m.clone(), 2));
            }
        }
        for (p, n) in required {
            if levels.get(&p, n).is_none() {
                return invalid(format!("level table lacks {p}/{n}"));
            }
        }
        Ok(Translator {
            lexicon,
            grammar,
            schemes,
            levels,
            weights: Weights::default(),
            theta: DEFAULT_THETA,
        })
    }

    fn context<'a>(&'a self, chart: &'a Chart) -> SemanticContext<'a> {
        SemanticContext {
            chart,
            grammar: &self.grammar,
            lexicon: &self.lexicon,
            schemes: &self.schemes,
            levels: &self.levels,
        }
    }

    /// Tokenizes, parses, composes, scores, prunes and collapses.
    pub fn analyse(&self, text: &str) -> Result<Analysis, TranslateError> {
        let tokens = tokenize(text, &self.lexicon);
        if tokens.is_empty() {
            return Err(TranslateError::EmptyFragment);
        }
        let chart = chart_parse(&tokens, &self.grammar, &self.lexicon);
        let cx = self.context(&chart);

        let mut spanned = false;
        let mut composed = Vec::new();
        for root in ROOT_CATEGORIES {
            let roots = chart.spanning(root);
            spanned |= !roots.is_empty();
            for edge in roots {
                match compose_logical_form(&cx, edge, false) {
                    Ok(f) => composed.push((edge, f.atoms)),
                    Err(TranslateError::Composition(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            if !composed.is_empty() {
                break;
            }
        }

        let mut readings = Vec::new();
        if !composed.is_empty() {
            let scored: Vec<_> = composed
                .iter()
                .map(|(edge, _)| {
                    score_reading(&chart, *edge, &self.grammar, &self.lexicon, &self.weights)
                })
                .collect();
            let kept = prune_by_proportional_distance(scored, self.theta);
            let mut items: Vec<(Vec<Atom>, f64, EdgeId)> = kept
                .into_iter()
                .map(|r| {
                    let atoms = composed
                        .iter()
                        .find(|(e, _)| *e == r.edge)
                        .map(|(_, a)| a.clone())
                        .unwrap_or_default();
                    (atoms, r.score, r.edge)
                })
                .collect();
            items.sort_by(|a, b| b.1.total_cmp(&a.1));
            readings = collapse_equivalent(items)
                .into_iter()
                .map(|(atoms, score, edge)| ScoredReading { edge, score, atoms })
                .collect();
        }

        let mut pieces = Vec::new();
        if readings.is_empty() {
            // a spanning tree whose composition failed is not offered again
            let cats: &[&str] = if spanned {
                &["VP", "NP", "PP"]
            } else {
                &["S", "VP", "NP", "PP"]
            };
            for piece in maximal_fragments_among(&chart, cats) {
                let atoms = match piece {
                    Piece::Edge(e) => match compose_logical_form(&cx, e, true) {
                        Ok(f) => f.atoms,
                        Err(TranslateError::Composition(_)) => {
                            self.keywords(&chart.tokens, &chart.yield_of(e))
                        }
                        Err(err) => return Err(err),
                    },
                    Piece::Word(i) => self.keywords(&chart.tokens, &[i]),
                };
                if !atoms.is_empty() {
                    pieces.push(atoms);
                }
            }
        }
        Ok(Analysis {
            tokens,
            chart,
            readings,
            pieces,
        })
    }

    /// Level-3 `object(word, X)` atoms for unknown words and uncovered
    /// content words.
    fn keywords(&self, tokens: &[Token], positions: &[usize]) -> Vec<Atom> {
        let mut out = Vec::new();
        for (k, &i) in positions.iter().enumerate() {
            let t = &tokens[i];
            let word = if t.entries.is_empty() {
                Some(t.text.replace(' ', "_"))
            } else {
                t.entries
                    .iter()
                    .map(|&e| self.lexicon.entry(e))
                    .find(|e| e.category.is_content())
                    .map(|e| e.lemma.clone())
            };
            if let Some(w) = word {
                out.push(keyword_atom(&w, Term::var(format!("K{}", k + 1))));
            }
        }
        out
    }

    /// Translates one fragment into annotated facts, drawing skolems and
    /// disjunct groups from `counters`.
    pub fn translate_fragment(
        &self,
        text: &str,
        doc: u32,
        frag: u32,
        counters: &mut Counters,
    ) -> Result<FragmentTranslation, TranslateError> {
        let analysis = self.analyse(text)?;
        let prov = Provenance { doc, frag };
        let mut facts = Vec::new();
        let mut groups = Vec::new();
        let ambiguous = analysis.readings.len() > 1;
        for r in &analysis.readings {
            let group = if ambiguous {
                let g = counters.group;
                counters.group += 1;
                groups.push(g);
                Some(g)
            } else {
                None
            };
            for atom in existential_closure(&r.atoms, &mut counters.skolem) {
                facts.push(Fact { atom, prov, group });
            }
        }
        for piece in &analysis.pieces {
            for atom in existential_closure(piece, &mut counters.skolem) {
                facts.push(Fact {
                    atom,
                    prov,
                    group: None,
                });
            }
        }
        Ok(FragmentTranslation {
            facts,
            groups,
            readings: analysis.readings.len(),
        })
    }

    /// Segments a document and translates every fragment.
    pub fn translate_document(
        &self,
        text: &str,
        doc: u32,
        counters: &mut Counters,
    ) -> Result<Vec<(Segment, FragmentTranslation)>, TranslateError> {
        let mut out = Vec::new();
        for seg in segment_fragments(text)? {
            let t = self.translate_fragment(&seg.text, doc, seg.id, counters)?;
            out.push((seg, t));
        }
        Ok(out)
    }

    /// Open atoms of a query: the best reading, or the maximal fragments
    /// with their variables kept apart.
    pub fn query_atoms(&self, text: &str) -> Result<Vec<Atom>, TranslateError> {
        let analysis = self.analyse(text)?;
        if let Some(best) = analysis.readings.into_iter().next() {
            return Ok(best.atoms);
        }
        let mut out = Vec::new();
        for (i, piece) in analysis.pieces.into_iter().enumerate() {
            for mut a in piece {
                for t in &mut a.args {
                    if let Term::Var(v) = t {
                        *t = Term::var(format!("{v}p{}", i + 1));
                    }
                }
                out.push(a);
            }
        }
        Ok(out)
    }
}

/// A keyword fact pattern: `object(word, referent)` at level 3.
pub fn keyword_atom(word: &str, referent: Term) -> Atom {
    Atom::new("object", vec![Term::constant(word), referent], Level::L3)
}

