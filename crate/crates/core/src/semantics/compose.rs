//! Bottom-up composition of open logical forms along a parse tree.
//!
//! Every grammar rule names a builder; a builder combines the partial
//! formulas of the rule's children. Partial formulas carry the atoms built
//! so far plus the bookkeeping needed by later builders: the referent of a
//! nominal, an unfilled relational-noun argument, an unfilled deverbal
//! object, or an unfinished verb frame.

use std::collections::BTreeMap;

use crate::error::TranslateError;
use crate::logic::{Atom, Term};
use crate::parse::chart::{Chart, EdgeId, EdgeKind};
use crate::parse::grammar::Grammar;
use crate::parse::lexicon::{Category, LexEntry, LexId, Lexicon, PrepTarget};
use crate::semantics::tables::{LevelTable, SchemeTable, EVENT_SLOT, VERB_SLOT};

/// Builder ids accepted in grammar files.
pub const BUILDERS: [&str; 17] = [
    "noun",
    "relnoun",
    "compound",
    "adj",
    "bare_np",
    "det_np",
    "pname",
    "np_pp",
    "pp",
    "vp_intrans",
    "vp_trans",
    "vp_ditrans",
    "vp_pp",
    "vp_adv",
    "adv_vp",
    "sentence",
    "pp_sentence",
];

/// Circumstance constant for compound-internal relations.
pub const COMPOUND_RELATION: &str = "by_with_for";

#[derive(Debug, Clone, PartialEq)]
pub struct OpenFormula {
    pub atoms: Vec<Atom>,
    /// Noun-phrase nodes and the terms they introduce.
    pub referents: Vec<(EdgeId, Term)>,
}

impl OpenFormula {
    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for a in &self.atoms {
            for v in a.variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Read-only inputs of composition.
#[derive(Clone, Copy)]
pub struct SemanticContext<'a> {
    pub chart: &'a Chart,
    pub grammar: &'a Grammar,
    pub lexicon: &'a Lexicon,
    pub schemes: &'a SchemeTable,
    pub levels: &'a LevelTable,
}

#[derive(Debug, Clone)]
struct VerbFrame {
    lemma: String,
    evtype: String,
    roles: Vec<String>,
    event: Term,
    fillers: BTreeMap<String, Term>,
}

#[derive(Debug, Clone, Default)]
struct Partial {
    atoms: Vec<Atom>,
    head: Option<Term>,
    open_arg: Option<String>,
    pending: Option<String>,
    verb: Option<VerbFrame>,
    prep: Option<(LexId, Term)>,
    lex: Option<LexId>,
    event: Option<Term>,
}

impl Partial {
    fn replace(&mut self, var: &str, by: &Term) {
        let swap = |t: &mut Term| {
            if t.as_var() == Some(var) {
                *t = by.clone();
            }
        };
        for a in &mut self.atoms {
            a.args.iter_mut().for_each(swap);
        }
        if let Some(h) = &mut self.head {
            swap(h);
        }
        if let Some(v) = &mut self.verb {
            v.fillers.values_mut().for_each(swap);
        }
        if self.open_arg.as_deref() == Some(var) {
            self.open_arg = None;
        }
        if self.pending.as_deref() == Some(var) {
            self.pending = None;
        }
    }
}

/// Composes the tree rooted at `root`. With `relaxed`, verb frames with
/// unfilled obligatory roles are accepted (used for fragment recovery).
pub fn compose_logical_form(
    cx: &SemanticContext<'_>,
    root: EdgeId,
    relaxed: bool,
) -> Result<OpenFormula, TranslateError> {
    let mut c = Composer {
        cx,
        relaxed,
        next_var: 0,
        referents: Vec::new(),
    };
    let mut p = c.build(root)?;
    if let Some(frame) = p.verb.take() {
        let (atom, _) = c.finish_frame(frame, true)?;
        p.atoms.insert(0, atom);
    } else if let Some(id) = p.lex {
        p = c.word(id)?;
    }
    Ok(OpenFormula {
        atoms: p.atoms,
        referents: c.referents,
    })
}

struct Composer<'c, 'a> {
    cx: &'c SemanticContext<'a>,
    relaxed: bool,
    next_var: u32,
    referents: Vec<(EdgeId, Term)>,
}

impl Composer<'_, '_> {
    fn fresh(&mut self, prefix: &str) -> Term {
        self.next_var += 1;
        Term::var(format!("{prefix}{}", self.next_var))
    }

    fn atom(&self, predicate: &str, args: Vec<Term>) -> Result<Atom, TranslateError> {
        let level = self
            .cx
            .levels
            .get(predicate, args.len())
            .ok_or_else(|| TranslateError::UnknownLevel(format!("{predicate}/{}", args.len())))?;
        Ok(Atom::new(predicate, args, level))
    }

    fn entry(&self, id: LexId) -> &LexEntry {
        self.cx.lexicon.entry(id)
    }

    fn build(&mut self, edge: EdgeId) -> Result<Partial, TranslateError> {
        let e = self.cx.chart.edge(edge);
        let (rule, children) = match &e.kind {
            EdgeKind::Lexical { entry, .. } => {
                return Ok(Partial {
                    lex: Some(*entry),
                    ..Partial::default()
                })
            }
            EdgeKind::Rule { rule, children } => (*rule, children.clone()),
        };
        let mut parts = Vec::with_capacity(children.len());
        for &c in &children {
            parts.push(self.build(c)?);
        }
        let builder = self.cx.grammar.rule(rule).builder.clone();
        let out = self.apply(&builder, &children, parts)?;
        if e.category == "NP" {
            if let Some(h) = &out.head {
                self.referents.push((edge, h.clone()));
            }
        }
        Ok(out)
    }

    fn shape_error(&self, builder: &str, children: &[EdgeId]) -> TranslateError {
        let found = children
            .iter()
            .map(|&c| self.cx.chart.edge(c).category.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        TranslateError::BuilderShape {
            builder: builder.to_string(),
            found,
        }
    }

    fn apply(
        &mut self,
        builder: &str,
        children: &[EdgeId],
        parts: Vec<Partial>,
    ) -> Result<Partial, TranslateError> {
        let lex = |i: usize| parts.get(i).and_then(|p| p.lex);
        let shape = self.shape_error(builder, children);
        let bad = || shape.clone();
        match (builder, parts.len()) {
            ("noun", 1) | ("relnoun", 1) => {
                let id = lex(0).ok_or_else(bad)?;
                self.nominal(id)
            }
            ("compound", 2) => {
                let id = lex(0).ok_or_else(bad)?;
                let head = parts.into_iter().nth(1).ok_or_else(bad)?;
                self.compound(id, head)
            }
            ("adj", 2) => {
                let id = lex(0).ok_or_else(bad)?;
                let mut h = parts.into_iter().nth(1).ok_or_else(bad)?;
                let target = h.head.clone().ok_or_else(bad)?;
                let lemma = self.entry(id).lemma.clone();
                h.atoms.push(self.atom("property", vec![Term::constant(lemma), target])?);
                Ok(h)
            }
            ("bare_np", 1) => Ok(parts.into_iter().next().ok_or_else(bad)?),
            ("det_np", 2) => {
                let id = lex(0).ok_or_else(bad)?;
                let mut h = parts.into_iter().nth(1).ok_or_else(bad)?;
                if self.entry(id).features.possessive {
                    let target = h.head.clone().ok_or_else(bad)?;
                    let owner = match self.possessor(children[0]) {
                        Some(name) => Term::constant(name),
                        None => self.fresh("X"),
                    };
                    h.atoms.push(self.atom(
                        "circumstance",
                        vec![Term::constant("of"), target, owner],
                    )?);
                }
                Ok(h)
            }
            ("pname", 1) => {
                let id = lex(0).ok_or_else(bad)?;
                Ok(Partial {
                    head: Some(Term::constant(self.entry(id).lemma.clone())),
                    ..Partial::default()
                })
            }
            ("pp", 2) => {
                let id = lex(0).ok_or_else(bad)?;
                let np = parts.into_iter().nth(1).ok_or_else(bad)?;
                let obj = np.head.clone().ok_or_else(bad)?;
                Ok(Partial {
                    atoms: np.atoms,
                    prep: Some((id, obj)),
                    ..Partial::default()
                })
            }
            ("np_pp", 2) => {
                let mut it = parts.into_iter();
                let host = it.next().ok_or_else(bad)?;
                let pp = it.next().ok_or_else(bad)?;
                self.nominal_pp(host, pp).ok_or_else(bad)?
            }
            ("vp_intrans", 1) | ("vp_trans", 2) | ("vp_ditrans", 3) => {
                let id = lex(0).ok_or_else(bad)?;
                let mut frame = self.frame(id)?;
                let objects: Vec<Partial> = parts.into_iter().skip(1).collect();
                let mut atoms = Vec::new();
                let slots: Vec<usize> = match objects.len() {
                    0 => vec![],
                    1 => vec![1],
                    _ => vec![2, 1],
                };
                for (obj, slot) in objects.into_iter().zip(slots) {
                    let role = frame.roles.get(slot).cloned().ok_or_else(|| {
                        TranslateError::Composition(format!(
                            "`{}` takes no role {}",
                            frame.lemma,
                            slot + 1
                        ))
                    })?;
                    frame.fillers.insert(role, obj.head.clone().ok_or_else(bad)?);
                    atoms.extend(obj.atoms);
                }
                Ok(Partial {
                    atoms,
                    verb: Some(frame),
                    ..Partial::default()
                })
            }
            ("vp_pp", 2) => {
                let mut it = parts.into_iter();
                let mut vp = it.next().ok_or_else(bad)?;
                let pp = it.next().ok_or_else(bad)?;
                let (id, obj) = pp.prep.clone().ok_or_else(bad)?;
                vp.atoms.extend(pp.atoms);
                let frame = vp.verb.as_mut().ok_or_else(bad)?;
                let extra = self.event_pp(id, obj, frame)?;
                vp.atoms.extend(extra);
                Ok(vp)
            }
            ("vp_adv", 2) | ("adv_vp", 2) => {
                let (adv_i, vp_i) = if builder == "vp_adv" { (1, 0) } else { (0, 1) };
                let id = lex(adv_i).ok_or_else(bad)?;
                let mut vp = parts.into_iter().nth(vp_i).ok_or_else(bad)?;
                let event = vp.verb.as_ref().ok_or_else(bad)?.event.clone();
                let e = self.entry(id);
                let modifier = e.features.modifier.clone().unwrap_or_else(|| "manner".into());
                let lemma = e.lemma.clone();
                vp.atoms.push(self.atom(&modifier, vec![event, Term::constant(lemma)])?);
                Ok(vp)
            }
            ("sentence", 2) => {
                let mut it = parts.into_iter();
                let subj = it.next().ok_or_else(bad)?;
                let vp = it.next().ok_or_else(bad)?;
                let mut frame = vp.verb.ok_or_else(bad)?;
                let subject_role = frame.roles.first().cloned().ok_or_else(bad)?;
                frame
                    .fillers
                    .insert(subject_role, subj.head.clone().ok_or_else(bad)?);
                let (l1, event) = self.finish_frame(frame, self.relaxed)?;
                let mut atoms = vec![l1];
                atoms.extend(subj.atoms);
                atoms.extend(vp.atoms);
                Ok(Partial {
                    atoms,
                    event: Some(event),
                    ..Partial::default()
                })
            }
            ("pp_sentence", 2) => {
                let mut it = parts.into_iter();
                let pp = it.next().ok_or_else(bad)?;
                let mut s = it.next().ok_or_else(bad)?;
                let (id, obj) = pp.prep.clone().ok_or_else(bad)?;
                let event = s.event.clone().ok_or_else(bad)?;
                s.atoms.extend(pp.atoms);
                let extra = self.event_modifier(id, obj, event)?;
                s.atoms.push(extra);
                Ok(s)
            }
            (name, _) if !BUILDERS.contains(&name) => {
                Err(TranslateError::MissingBuilder(name.to_string()))
            }
            _ => Err(bad()),
        }
    }

    /// Nearest proper name before the token of the determiner edge.
    fn possessor(&self, det_edge: EdgeId) -> Option<String> {
        let chart = self.cx.chart;
        let pos = chart.edge(det_edge).start;
        chart.tokens[..pos].iter().rev().find_map(|t| {
            t.entries
                .iter()
                .map(|&i| self.entry(i))
                .find(|e| e.category == Category::PName)
                .map(|e| e.lemma.clone())
        })
    }

    /// A lone word outside any phrase.
    fn word(&mut self, id: LexId) -> Result<Partial, TranslateError> {
        match self.entry(id).category {
            Category::N | Category::RelN => self.nominal(id),
            Category::PName => Ok(Partial {
                head: Some(Term::constant(self.entry(id).lemma.clone())),
                ..Partial::default()
            }),
            _ => Ok(Partial::default()),
        }
    }

    fn nominal(&mut self, id: LexId) -> Result<Partial, TranslateError> {
        let e = self.entry(id).clone();
        if let Some((verb, evtype)) = &e.features.deverbal {
            let agent = self.fresh("X");
            let object = self.fresh("X");
            let event = self.fresh("E");
            let scheme = self
                .cx
                .schemes
                .get(evtype)
                .ok_or_else(|| TranslateError::UnknownScheme(evtype.clone()))?;
            let mut fillers = BTreeMap::new();
            fillers.insert("agent".to_string(), agent.clone());
            fillers.insert("aff_ent".to_string(), object.clone());
            let head = if scheme.has_slot(EVENT_SLOT) {
                event.clone()
            } else {
                agent.clone()
            };
            let atom = self.scheme_atom(verb, evtype, &event, &fillers)?;
            return Ok(Partial {
                atoms: vec![atom],
                head: Some(head),
                pending: object.as_var().map(str::to_string),
                ..Partial::default()
            });
        }
        let x = self.fresh("X");
        let mut atoms = Vec::new();
        for p in &e.features.props {
            atoms.push(self.atom("property", vec![Term::constant(p.clone()), x.clone()])?);
        }
        atoms.push(self.atom("object", vec![Term::constant(e.lemma.clone()), x.clone()])?);
        if e.features.unary {
            atoms.push(self.atom(&e.lemma, vec![x.clone()])?);
        }
        let mut open_arg = None;
        if e.category == Category::RelN {
            let y = self.fresh("X");
            atoms.push(self.atom(e.relation(), vec![x.clone(), y.clone()])?);
            open_arg = y.as_var().map(str::to_string);
        }
        Ok(Partial {
            atoms,
            head: Some(x),
            open_arg,
            ..Partial::default()
        })
    }

    fn compound(&mut self, modifier: LexId, mut h: Partial) -> Result<Partial, TranslateError> {
        let head = h
            .head
            .clone()
            .ok_or_else(|| TranslateError::Composition("compound without a head".into()))?;
        if let Some((verb, evtype)) = self.entry(modifier).features.deverbal.clone() {
            let object = self.fresh("X");
            let event = self.fresh("E");
            let mut fillers = BTreeMap::new();
            fillers.insert("agent".to_string(), head);
            fillers.insert("aff_ent".to_string(), object.clone());
            let atom = self.scheme_atom(&verb, &evtype, &event, &fillers)?;
            h.atoms.push(atom);
            h.pending = object.as_var().map(str::to_string);
            return Ok(h);
        }
        let m = self.nominal(modifier)?;
        let m_head = m.head.clone().expect("nominals have a head");
        let mut atoms = m.atoms;
        if let Some(p) = h.pending.clone() {
            h.replace(&p, &m_head);
            atoms.append(&mut h.atoms);
        } else if let Some(y) = h.open_arg.clone() {
            h.replace(&y, &m_head);
            atoms.append(&mut h.atoms);
        } else {
            atoms.append(&mut h.atoms);
            atoms.push(self.atom(
                "circumstance",
                vec![Term::constant(COMPOUND_RELATION), head, m_head],
            )?);
        }
        h.atoms = atoms;
        Ok(h)
    }

    fn nominal_pp(
        &mut self,
        mut host: Partial,
        pp: Partial,
    ) -> Option<Result<Partial, TranslateError>> {
        let (id, obj) = pp.prep.clone()?;
        let target = host.head.clone()?;
        host.atoms.extend(pp.atoms);
        let e = self.entry(id).clone();
        if e.lemma == "of" {
            if let Some(y) = host.open_arg.clone() {
                host.replace(&y, &obj);
                return Some(Ok(host));
            }
        }
        let atom = match e.features.prep.as_ref()? {
            PrepTarget::Relation(r) => self.atom(r, vec![obj, target]),
            PrepTarget::Circumstance(c) => {
                self.atom("circumstance", vec![Term::constant(c.clone()), target, obj])
            }
            PrepTarget::Modifier(_) | PrepTarget::Role(_) => self.atom(
                "circumstance",
                vec![Term::constant(e.lemma.clone()), target, obj],
            ),
        };
        Some(atom.map(|a| {
            host.atoms.push(a);
            host
        }))
    }

    /// A PP over an unfinished verb frame: a role PP fills its slot when the
    /// scheme has one that is still open; otherwise it modifies the event.
    fn event_pp(
        &mut self,
        prep: LexId,
        obj: Term,
        frame: &mut VerbFrame,
    ) -> Result<Vec<Atom>, TranslateError> {
        if let Some(PrepTarget::Role(r)) = &self.entry(prep).features.prep {
            let has_slot = self
                .cx
                .schemes
                .get(&frame.evtype)
                .is_some_and(|s| s.has_slot(r));
            if has_slot && !frame.fillers.contains_key(r) {
                frame.fillers.insert(r.clone(), obj);
                return Ok(vec![]);
            }
        }
        Ok(vec![self.event_modifier(prep, obj, frame.event.clone())?])
    }

    fn event_modifier(&mut self, prep: LexId, obj: Term, event: Term) -> Result<Atom, TranslateError> {
        let e = self.entry(prep).clone();
        match e.features.prep {
            Some(PrepTarget::Modifier(m)) => self.atom(&m, vec![event, obj]),
            Some(PrepTarget::Circumstance(c)) => {
                self.atom("circumstance", vec![Term::constant(c), event, obj])
            }
            Some(PrepTarget::Relation(r)) => self.atom(&r, vec![obj, event]),
            Some(PrepTarget::Role(_)) | None => {
                self.atom("circumstance", vec![Term::constant(e.lemma), event, obj])
            }
        }
    }

    fn frame(&mut self, verb: LexId) -> Result<VerbFrame, TranslateError> {
        let e = self.entry(verb).clone();
        let evtype = e
            .features
            .evtype
            .clone()
            .ok_or_else(|| TranslateError::UnknownScheme(format!("(none for `{}`)", e.lemma)))?;
        if self.cx.schemes.get(&evtype).is_none() {
            return Err(TranslateError::UnknownScheme(evtype));
        }
        Ok(VerbFrame {
            lemma: e.lemma,
            evtype,
            roles: e.features.roles,
            event: self.fresh("E"),
            fillers: BTreeMap::new(),
        })
    }

    /// Emits the level-1 atom of a verb frame, checking obligatory roles
    /// unless `relaxed`.
    fn finish_frame(
        &mut self,
        frame: VerbFrame,
        relaxed: bool,
    ) -> Result<(Atom, Term), TranslateError> {
        if !relaxed {
            if let Some(missing) = frame.roles.iter().find(|r| !frame.fillers.contains_key(*r)) {
                return Err(TranslateError::Composition(format!(
                    "`{}` lacks obligatory role {missing}",
                    frame.lemma
                )));
            }
        }
        let atom = self.scheme_atom(&frame.lemma, &frame.evtype, &frame.event, &frame.fillers)?;
        Ok((atom, frame.event))
    }

    fn scheme_atom(
        &mut self,
        verb: &str,
        evtype: &str,
        event: &Term,
        fillers: &BTreeMap<String, Term>,
    ) -> Result<Atom, TranslateError> {
        let scheme = self
            .cx
            .schemes
            .get(evtype)
            .ok_or_else(|| TranslateError::UnknownScheme(evtype.to_string()))?
            .clone();
        let mut args = Vec::with_capacity(scheme.slots.len());
        for slot in &scheme.slots {
            args.push(match slot.as_str() {
                VERB_SLOT => Term::constant(verb),
                EVENT_SLOT => event.clone(),
                role => match fillers.get(role) {
                    Some(t) => t.clone(),
                    None => self.fresh("X"),
                },
            });
        }
        self.atom(&scheme.predicate, args)
    }
}
