//! Flat first-order terms, leveled atoms, provenance-annotated facts and
//! substitutions, together with the textual `pred(args)/frag/doc` notation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::SyntaxError;

/// A flat term: a logic variable, a lowercase constant, or a skolem constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Skolem(u32),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_var()
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(c),
            Term::Skolem(n) => write!(f, "sk-{n}"),
        }
    }
}

/// Representation level of an atom.
///
/// `L1` holds obligatory, unique role fillers; `L2` general optional
/// modifiers; `L3` unanalysed circumstantial descriptions. `Aux` marks
/// machinery atoms that never describe document content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    L1,
    L2,
    L3,
    Aux,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::L1 => "L1",
            Level::L2 => "L2",
            Level::L3 => "L3",
            Level::Aux => "AUX",
        }
    }

    /// Weight of an atom of this level when scoring partial matches.
    pub fn coverage_weight(self) -> u32 {
        match self {
            Level::L1 => 3,
            Level::L2 => 2,
            Level::L3 | Level::Aux => 1,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L1" => Ok(Level::L1),
            "L2" => Ok(Level::L2),
            "L3" => Ok(Level::L3),
            "AUX" => Ok(Level::Aux),
            other => Err(format!("unknown level tag `{other}`")),
        }
    }
}

/// A flat atom `predicate(arg, ...)` carrying its representation level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
    pub level: Level,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>, level: Level) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
            level,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn key(&self) -> (&str, usize) {
        (&self.predicate, self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Variables in first-occurrence order, without duplicates.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.args {
            if let Term::Var(v) = t {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Back-pointer of a fact to the fragment and document it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub doc: u32,
    pub frag: u32,
}

/// Identifier of a disjunct group: the facts of one surviving reading of an
/// ambiguous fragment.
pub type GroupId = u32;

/// A ground atom annotated with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub atom: Atom,
    pub prov: Provenance,
    pub group: Option<GroupId>,
}

impl Fact {
    /// Builds a fact, rejecting atoms that still contain variables.
    pub fn new(atom: Atom, prov: Provenance, group: Option<GroupId>) -> Result<Self, SyntaxError> {
        if !atom.is_ground() {
            return Err(SyntaxError::new(atom.to_string(), 0, "fact contains a variable"));
        }
        if prov.doc == 0 || prov.frag == 0 {
            return Err(SyntaxError::new(
                atom.to_string(),
                0,
                "document and fragment numbers must be positive",
            ));
        }
        Ok(Fact { atom, prov, group })
    }
}

/// Renders `pred(arg1,...,argk)/frag/doc`.
pub fn format_annotated(fact: &Fact) -> String {
    format!("{}/{}/{}", fact.atom, fact.prov.frag, fact.prov.doc)
}

/// Level table used when an annotated line carries no explicit `level=` tag.
pub trait LevelLookup {
    fn level_of(&self, predicate: &str, arity: usize) -> Option<Level>;
}

/// Parses an annotated fact line: `pred(args)/frag/doc` optionally followed
/// by ` level=<L1|L2|L3|AUX>` and ` group=<n>`.
///
/// Without a level tag the level comes from `levels`; an unlisted predicate
/// is an error.
pub fn parse_annotated(line: &str, levels: &dyn LevelLookup) -> Result<Fact, SyntaxError> {
    let mut p = Cursor::new(line);
    p.skip_ws();
    let (predicate, args) = p.atom_parts()?;
    p.expect('/')?;
    let frag = p.positive("fragment number")?;
    p.expect('/')?;
    let doc = p.positive("document number")?;

    let mut level = None;
    let mut group = None;
    loop {
        let had_ws = p.skip_ws();
        if p.at_end() {
            break;
        }
        if !had_ws {
            return Err(p.error("expected whitespace before annotation"));
        }
        let start = p.pos;
        let word = p.take_while(|c| !c.is_whitespace());
        if let Some(tag) = word.strip_prefix("level=") {
            let lv = tag
                .parse::<Level>()
                .map_err(|m| SyntaxError::new(line, start, m))?;
            level = Some(lv);
        } else if let Some(g) = word.strip_prefix("group=") {
            let gid = g
                .parse::<u32>()
                .map_err(|_| SyntaxError::new(line, start, "group id must be an integer"))?;
            group = Some(gid);
        } else {
            return Err(SyntaxError::new(line, start, format!("unexpected `{word}`")));
        }
    }

    let level = match level {
        Some(l) => l,
        None => levels.level_of(&predicate, args.len()).ok_or_else(|| {
            SyntaxError::new(
                line,
                0,
                format!("unknown level for {}/{}", predicate, args.len()),
            )
        })?,
    };
    let atom = Atom::new(predicate, args, level);
    if !atom.is_ground() {
        return Err(SyntaxError::new(line, 0, "fact contains a variable"));
    }
    Ok(Fact {
        atom,
        prov: Provenance { doc, frag },
        group,
    })
}

/// Parses an open atom such as `representation(R,L)`; the level is looked up
/// in `levels`, defaulting to `Aux` for unknown predicates.
pub fn parse_atom(text: &str, levels: &dyn LevelLookup) -> Result<Atom, SyntaxError> {
    let mut p = Cursor::new(text);
    p.skip_ws();
    let (predicate, args) = p.atom_parts()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input after atom"));
    }
    let level = levels.level_of(&predicate, args.len()).unwrap_or(Level::Aux);
    Ok(Atom::new(predicate, args, level))
}

/// Parses a single term: `sk-<n>`, a variable (uppercase or `_` initial), or
/// a constant.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Cursor::new(text);
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn looking_at(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    pub(crate) fn eat_str(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.src, self.pos, msg)
    }

    pub(crate) fn skip_ws(&mut self) -> bool {
        let before = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        self.pos > before
    }

    pub(crate) fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn positive(&mut self, what: &str) -> Result<u32, SyntaxError> {
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        let n: u32 = digits
            .parse()
            .map_err(|_| SyntaxError::new(self.src, start, format!("expected {what}")))?;
        if n == 0 {
            return Err(SyntaxError::new(
                self.src,
                start,
                format!("{what} must be positive"),
            ));
        }
        Ok(n)
    }

    fn symbol(&mut self) -> &'a str {
        self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '#')
    }

    pub(crate) fn term(&mut self) -> Result<Term, SyntaxError> {
        let start = self.pos;
        let sym = self.symbol();
        if sym.is_empty() {
            return Err(SyntaxError::new(self.src, start, "expected a term"));
        }
        classify_symbol(sym).map_err(|m| SyntaxError::new(self.src, start, m))
    }

    pub(crate) fn atom_parts(&mut self) -> Result<(String, Vec<Term>), SyntaxError> {
        let start = self.pos;
        let pred = self.take_while(|c| c.is_alphanumeric() || c == '_');
        if pred.is_empty() || !pred.starts_with(|c: char| c.is_lowercase()) {
            return Err(SyntaxError::new(
                self.src,
                start,
                "expected a lowercase predicate name",
            ));
        }
        self.expect('(')?;
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            args.push(self.term()?);
            self.skip_ws();
            if self.eat(',') {
                continue;
            }
            self.expect(')')?;
            break;
        }
        Ok((pred.to_string(), args))
    }
}

fn classify_symbol(sym: &str) -> Result<Term, String> {
    if let Some(n) = sym.strip_prefix("sk-") {
        let idx: u32 = n
            .parse()
            .map_err(|_| format!("malformed skolem constant `{sym}`"))?;
        if idx == 0 {
            return Err("skolem indices start at 1".into());
        }
        return Ok(Term::Skolem(idx));
    }
    let first = sym.chars().next().expect("nonempty symbol");
    if first.is_uppercase() || first == '_' {
        Ok(Term::Var(sym.to_string()))
    } else if sym.contains('-') {
        Err(format!("`-` is only allowed in skolem constants: `{sym}`"))
    } else {
        Ok(Term::Const(sym.to_string()))
    }
}

/// A finite, idempotent mapping from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    /// Binds `var` to `term` after resolving `term` through the current
    /// bindings, and rewrites existing bindings so the map stays idempotent.
    /// Binding a variable to itself is a no-op.
    pub fn bind(&mut self, var: &str, term: Term) {
        let term = self.apply_term(&term);
        if term.as_var() == Some(var) {
            return;
        }
        for t in self.map.values_mut() {
            if t.as_var() == Some(var) {
                *t = term.clone();
            }
        }
        self.map.insert(var.to_string(), term);
    }

    /// Inserts a binding verbatim, without resolution. Used by composition.
    pub(crate) fn insert_raw(&mut self, var: String, term: Term) {
        if term.as_var() != Some(var.as_str()) {
            self.map.insert(var, term);
        }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
            level: a.level,
        }
    }

    /// Restricts the domain to the given variables.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a str>) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            if let Some(t) = self.map.get(v) {
                out.map.insert(v.to_string(), t.clone());
            }
        }
        out
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert_raw(v, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

/// Applies a substitution to a term.
pub fn apply_substitution(t: &Term, s: &Substitution) -> Term {
    s.apply_term(t)
}
