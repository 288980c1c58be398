//! Depth-first, conjunct-at-a-time resolution of a query against the facts
//! of one passage (or one document), optionally through meaning postulates
//! and isa links.

use std::collections::{BTreeSet, HashMap};

use crate::kb::{FactId, KnowledgeBase, SideCondition};
use crate::logic::{Atom, Fact, GroupId, Level, Substitution, Term};
use crate::prover::config::Stage;
use crate::prover::query::Query;
use crate::unify::{unify_into, IsaView};

/// Hard cap on resolution steps of one proof run, independent of the
/// postulate budget.
const MAX_STEPS: u64 = 2_000_000;

/// Which facts one proof may combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// All supporting facts come from one fragment.
    Fragment,
    /// All supporting facts come from one document.
    Document,
}

/// A fragment, or a whole document when `frag` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PassageRef {
    pub doc: u32,
    pub frag: Option<u32>,
}

/// How one goal was resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofNode {
    Fact {
        goal: Atom,
        fact: FactId,
        isa_hops: u32,
    },
    Postulate {
        goal: Atom,
        postulate: usize,
        weight: f64,
        children: Vec<ProofNode>,
    },
}

impl ProofNode {
    pub fn goal(&self) -> &Atom {
        match self {
            ProofNode::Fact { goal, .. } | ProofNode::Postulate { goal, .. } => goal,
        }
    }

    pub fn postulate_apps(&self) -> u32 {
        match self {
            ProofNode::Fact { .. } => 0,
            ProofNode::Postulate { children, .. } => {
                1 + children.iter().map(ProofNode::postulate_apps).sum::<u32>()
            }
        }
    }

    /// Supporting facts, left to right.
    pub fn facts(&self, out: &mut Vec<FactId>) {
        match self {
            ProofNode::Fact { fact, .. } => out.push(*fact),
            ProofNode::Postulate { children, .. } => children.iter().for_each(|c| c.facts(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Bindings of the query variables that were proved.
    pub bindings: Substitution,
    pub passage: PassageRef,
    /// Fragments of the supporting facts.
    pub fragments: Vec<u32>,
    pub stage: Stage,
    /// Weight of the proved query atoms over the weight of all of them.
    pub coverage: f64,
    /// Resolution steps + postulate weights + isa hops.
    pub cost: f64,
    /// Some supporting fact belongs to a disjunct group.
    pub ambiguous_support: bool,
    pub postulate_apps: u32,
    pub isa_hops: u32,
    /// Positions of the query atoms this result proves.
    pub covered: Vec<usize>,
    /// One proof tree per covered atom.
    pub proof: Vec<ProofNode>,
    /// Shared keywords, for keyword-fallback results.
    pub keywords: Vec<String>,
}

impl MatchResult {
    pub fn supporting_facts(&self) -> Vec<FactId> {
        let mut out = Vec::new();
        for n in &self.proof {
            n.facts(&mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProveOptions {
    pub scope: Scope,
    /// Highest postulate level usable; `None` disables postulates.
    pub max_level: Option<Level>,
    pub isa: bool,
    /// Postulate applications allowed in this run.
    pub budget: u32,
    /// Postulate applications allowed along one chain of subgoals.
    pub depth: u32,
    /// Label given to the results.
    pub stage: Stage,
}

impl ProveOptions {
    pub fn direct(scope: Scope) -> Self {
        ProveOptions {
            scope,
            max_level: None,
            isa: false,
            budget: 0,
            depth: 0,
            stage: match scope {
                Scope::Fragment => Stage::DirectFragment,
                Scope::Document => Stage::DirectDocument,
            },
        }
    }
}

/// Results of one proof run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProofRun {
    pub results: Vec<MatchResult>,
    /// Postulate applications attempted across the run.
    pub applications: u32,
    /// The postulate budget or the step cap cut the search short.
    pub exhausted: bool,
}

/// Proves the whole query against facts only.
pub fn prove_direct(q: &Query, scope: Scope, kb: &KnowledgeBase) -> Vec<MatchResult> {
    prove(q, &all_positions(q), kb, &ProveOptions::direct(scope)).results
}

/// Proves the whole query with postulates up to `max_level` at fragment
/// scope.
pub fn prove_with_postulates(
    q: &Query,
    max_level: Level,
    budget: u32,
    depth: u32,
    kb: &KnowledgeBase,
) -> ProofRun {
    let opts = ProveOptions {
        scope: Scope::Fragment,
        max_level: Some(max_level),
        isa: false,
        budget,
        depth,
        stage: if max_level <= Level::L2 {
            Stage::PostulatesL2
        } else {
            Stage::PostulatesL3
        },
    };
    prove(q, &all_positions(q), kb, &opts)
}

pub(crate) fn all_positions(q: &Query) -> Vec<usize> {
    (0..q.atoms.len()).collect()
}

/// Proves the atoms of `q` at `positions` as one conjunction. Results are
/// deduplicated per passage and bindings, keeping the cheapest proof, in
/// order of discovery.
pub fn prove(q: &Query, positions: &[usize], kb: &KnowledgeBase, opts: &ProveOptions) -> ProofRun {
    if positions.is_empty() {
        return ProofRun::default();
    }
    let posts = match opts.max_level {
        Some(max) => (0..kb.postulates().len())
            .filter(|&i| kb.postulates()[i].level <= max)
            .collect(),
        None => Vec::new(),
    };
    let mut vars: Vec<String> = Vec::new();
    for &i in positions {
        for v in q.atoms[i].variables() {
            if !vars.iter().any(|x| x == v) {
                vars.push(v.to_string());
            }
        }
    }
    let mut engine = Engine {
        kb,
        q,
        positions,
        opts,
        isa: IsaView::new(kb.isa(), opts.isa),
        posts,
        budget_left: opts.budget,
        applications: 0,
        exhausted: false,
        steps: 0,
        renames: 0,
        vars,
        found: Vec::new(),
        seen: HashMap::new(),
    };
    let start = State {
        goals: positions
            .iter()
            .enumerate()
            .map(|(slot, &i)| Pending {
                atom: q.atoms[i].clone(),
                depth: 0,
                slot,
            })
            .collect(),
        subst: Substitution::new(),
        doc: None,
        frag: None,
        groups: Vec::new(),
        slots: positions.iter().map(|&i| Slot::Open(q.atoms[i].clone())).collect(),
        frags: BTreeSet::new(),
        apps: 0,
        hops: 0,
        weight: 0.0,
        steps: 0,
        next_local: kb.counters().skolem,
        ambiguous: false,
    };
    engine.solve(start);
    ProofRun {
        results: engine.found,
        applications: engine.applications,
        exhausted: engine.exhausted,
    }
}

#[derive(Debug, Clone)]
struct Pending {
    atom: Atom,
    depth: u32,
    slot: usize,
}

#[derive(Debug, Clone)]
enum Slot {
    Open(Atom),
    Fact {
        goal: Atom,
        fact: FactId,
        hops: u32,
    },
    Rule {
        goal: Atom,
        post: usize,
        children: Vec<usize>,
        /// Side conditions over renamed variables.
        conds: Vec<SideCondition>,
    },
}

#[derive(Debug, Clone)]
struct State {
    goals: Vec<Pending>,
    subst: Substitution,
    doc: Option<u32>,
    frag: Option<u32>,
    /// Disjunct group committed to per fragment.
    groups: Vec<((u32, u32), GroupId)>,
    slots: Vec<Slot>,
    frags: BTreeSet<u32>,
    apps: u32,
    hops: u32,
    weight: f64,
    steps: u32,
    /// Next proof-local skolem number.
    next_local: u32,
    ambiguous: bool,
}

struct Engine<'a> {
    kb: &'a KnowledgeBase,
    q: &'a Query,
    positions: &'a [usize],
    opts: &'a ProveOptions,
    isa: IsaView<'a>,
    posts: Vec<usize>,
    budget_left: u32,
    applications: u32,
    exhausted: bool,
    steps: u64,
    renames: u32,
    vars: Vec<String>,
    found: Vec<MatchResult>,
    seen: HashMap<(PassageRef, Substitution), usize>,
}

impl Engine<'_> {
    fn solve(&mut self, mut st: State) {
        if st.goals.is_empty() {
            self.emit(st);
            return;
        }
        if self.steps >= MAX_STEPS {
            self.exhausted = true;
            return;
        }
        self.steps += 1;

        // cheapest goal first; a goal with no candidate fails the branch
        let mut best: Option<(usize, usize)> = None;
        for (i, g) in st.goals.iter().enumerate() {
            let n = self.count_candidates(&st, g);
            if n == 0 {
                return;
            }
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((i, n));
            }
        }
        let (gi, _) = best.expect("goals are nonempty");
        let goal = st.goals.remove(gi);

        for &fid in self.kb.candidates(&goal.atom.predicate, goal.atom.arity()) {
            let fact = self.kb.fact(fid);
            if !self.admissible(&st, fact) {
                continue;
            }
            let mut subst = st.subst.clone();
            let Some(hops) = unify_into(&goal.atom, &fact.atom, self.isa, &mut subst) else {
                continue;
            };
            let mut next = st.clone();
            next.subst = subst;
            next.doc = Some(fact.prov.doc);
            if self.opts.scope == Scope::Fragment {
                next.frag = Some(fact.prov.frag);
            }
            next.frags.insert(fact.prov.frag);
            if let Some(g) = fact.group {
                let key = (fact.prov.doc, fact.prov.frag);
                if !next.groups.iter().any(|(k, _)| *k == key) {
                    next.groups.push((key, g));
                }
                next.ambiguous = true;
            }
            next.hops += hops;
            next.steps += 1;
            next.slots[goal.slot] = Slot::Fact {
                goal: goal.atom.clone(),
                fact: fid,
                hops,
            };
            self.solve(next);
        }

        if goal.depth >= self.opts.depth {
            return;
        }
        for pi in self.posts.clone() {
            let post = &self.kb.postulates()[pi];
            if post.head.predicate != goal.atom.predicate || post.head.arity() != goal.atom.arity() {
                continue;
            }
            if self.budget_left == 0 {
                self.exhausted = true;
                return;
            }
            self.renames += 1;
            let tag = self.renames;
            let mut local = st.next_local;
            let mut fresh: HashMap<&str, Term> = HashMap::new();
            for e in &post.existentials {
                fresh.insert(e.as_str(), Term::Skolem(local));
                local += 1;
            }
            let rename = |a: &Atom| Atom {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => fresh
                            .get(v.as_str())
                            .cloned()
                            .unwrap_or_else(|| Term::var(format!("{v}#{tag}"))),
                        other => other.clone(),
                    })
                    .collect(),
                level: a.level,
            };
            let head = rename(&post.head);
            let mut subst = st.subst.clone();
            let Some(hops) = unify_into(&goal.atom, &head, self.isa, &mut subst) else {
                continue;
            };
            self.budget_left -= 1;
            self.applications += 1;
            let mut next = st.clone();
            next.subst = subst;
            next.next_local = local;
            next.hops += hops;
            next.steps += 1;
            next.apps += 1;
            next.weight += post.weight;
            let mut children = Vec::new();
            for b in &post.body {
                let slot = next.slots.len();
                let atom = rename(b);
                next.slots.push(Slot::Open(atom.clone()));
                next.goals.push(Pending {
                    atom,
                    depth: goal.depth + 1,
                    slot,
                });
                children.push(slot);
            }
            let conds = post
                .conditions
                .iter()
                .map(|c| match c {
                    SideCondition::Distinct(a, b) => {
                        let r = |v: &String| match fresh.get(v.as_str()) {
                            // existentials are fresh, hence distinct from everything
                            Some(_) => format!("{v}!{tag}"),
                            None => format!("{v}#{tag}"),
                        };
                        SideCondition::Distinct(r(a), r(b))
                    }
                    other => other.clone(),
                })
                .collect();
            next.slots[goal.slot] = Slot::Rule {
                goal: goal.atom.clone(),
                post: pi,
                children,
                conds,
            };
            self.solve(next);
        }
    }

    /// Scope and disjunct-group compatibility of a fact with the proof so far.
    fn admissible(&self, st: &State, fact: &Fact) -> bool {
        if st.doc.is_some_and(|d| d != fact.prov.doc) {
            return false;
        }
        if st.frag.is_some_and(|f| f != fact.prov.frag) {
            return false;
        }
        match fact.group {
            None => true,
            Some(g) => st
                .groups
                .iter()
                .all(|(k, h)| *k != (fact.prov.doc, fact.prov.frag) || *h == g),
        }
    }

    /// Facts that pass a cheap argument-wise check, plus usable postulates.
    fn count_candidates(&self, st: &State, g: &Pending) -> usize {
        let mut n = 0;
        for &fid in self.kb.candidates(&g.atom.predicate, g.atom.arity()) {
            let fact = self.kb.fact(fid);
            if self.admissible(st, fact) && self.may_unify(st, &g.atom, &fact.atom) {
                n += 1;
            }
        }
        if g.depth < self.opts.depth && self.budget_left > 0 {
            n += self
                .posts
                .iter()
                .filter(|&&pi| {
                    let h = &self.kb.postulates()[pi].head;
                    h.predicate == g.atom.predicate && h.arity() == g.atom.arity()
                })
                .count();
        }
        n
    }

    fn may_unify(&self, st: &State, goal: &Atom, fact: &Atom) -> bool {
        goal.args.iter().zip(&fact.args).all(|(raw, f)| {
            let t = st.subst.apply_term(raw);
            match (&t, f) {
                (Term::Var(_), _) | (_, Term::Var(_)) => true,
                _ if t == *f => true,
                (Term::Const(a), Term::Const(b)) if matches!(raw, Term::Const(_)) => {
                    self.isa.is_enabled() && self.kb.isa().descent(a, b).is_some()
                }
                _ => false,
            }
        })
    }

    fn emit(&mut self, st: State) {
        if !self.conditions_hold(&st) {
            return;
        }
        let Some(doc) = st.doc else { return };
        let passage = PassageRef {
            doc,
            frag: st.frag,
        };
        let bindings: Substitution = self
            .vars
            .iter()
            .filter_map(|v| {
                let t = st.subst.apply_term(&Term::var(v.as_str()));
                (t != Term::var(v.as_str())).then(|| (v.clone(), t))
            })
            .collect();
        let cost = f64::from(st.steps) + st.weight + f64::from(st.hops);
        let total = self.q.total_weight();
        let coverage = if total == 0 {
            1.0
        } else {
            f64::from(self.q.weight_of(self.positions)) / f64::from(total)
        };
        let proof = (0..self.positions.len())
            .map(|slot| build_node(&st, slot, self.kb))
            .collect();
        let result = MatchResult {
            bindings: bindings.clone(),
            passage,
            fragments: st.frags.iter().copied().collect(),
            stage: self.opts.stage,
            coverage,
            cost,
            ambiguous_support: st.ambiguous,
            postulate_apps: st.apps,
            isa_hops: st.hops,
            covered: self.positions.to_vec(),
            proof,
            keywords: Vec::new(),
        };
        match self.seen.get(&(passage, bindings.clone())) {
            Some(&i) => {
                if result.cost < self.found[i].cost {
                    self.found[i] = result;
                }
            }
            None => {
                self.seen.insert((passage, bindings), self.found.len());
                self.found.push(result);
            }
        }
    }

    fn conditions_hold(&self, st: &State) -> bool {
        st.slots.iter().all(|s| match s {
            Slot::Rule { children, conds, .. } => conds.iter().all(|c| match c {
                SideCondition::Distinct(a, b) => {
                    let ta = st.subst.apply_term(&Term::var(a.as_str()));
                    let tb = st.subst.apply_term(&Term::var(b.as_str()));
                    ta != tb
                }
                SideCondition::Precedes(i, j) => {
                    support(st, children[i - 1]) < support(st, children[j - 1])
                }
            }),
            _ => true,
        })
    }
}

/// Latest fact (in text order) used below a slot.
fn support(st: &State, slot: usize) -> FactId {
    match &st.slots[slot] {
        Slot::Fact { fact, .. } => *fact,
        Slot::Rule { children, .. } => children.iter().map(|&c| support(st, c)).max().unwrap_or(0),
        Slot::Open(_) => 0,
    }
}

fn build_node(st: &State, slot: usize, kb: &KnowledgeBase) -> ProofNode {
    match &st.slots[slot] {
        Slot::Fact { goal, fact, hops } => ProofNode::Fact {
            goal: st.subst.apply_atom(goal),
            fact: *fact,
            isa_hops: *hops,
        },
        Slot::Rule {
            goal, post, children, ..
        } => ProofNode::Postulate {
            goal: st.subst.apply_atom(goal),
            postulate: *post,
            weight: kb.postulates()[*post].weight,
            children: children.iter().map(|&c| build_node(st, c, kb)).collect(),
        },
        Slot::Open(a) => unreachable!("open goal {a} in a finished proof"),
    }
}
