//! Weighted meaning postulates and their `post` line notation:
//!
//! ```text
//! post L2 w=1 head(X,Y) <- body1(X,Z), body2(Z,Y) ; X != Y, prec(1,2), exists(W)
//! ```

use std::fmt;

use crate::error::{LoadError, SyntaxError};
use crate::logic::{Atom, Cursor, Level, LevelLookup};
use crate::parse::lexicon::strip_comment;

/// A side condition checked once every body atom is proved.
#[derive(Debug, Clone, PartialEq)]
pub enum SideCondition {
    /// The two variables are bound to different terms.
    Distinct(String, String),
    /// The fact supporting body atom `.0` precedes the one supporting `.1`
    /// in the text (1-based body positions).
    Precedes(usize, usize),
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Distinct(a, b) => write!(f, "{a} != {b}"),
            SideCondition::Precedes(i, j) => write!(f, "prec({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeaningPostulate {
    pub head: Atom,
    pub body: Vec<Atom>,
    /// `L2` or `L3`: the relaxation stage from which the postulate is used.
    pub level: Level,
    pub weight: f64,
    pub conditions: Vec<SideCondition>,
    /// Head variables absent from the body; each application binds them to
    /// fresh skolems.
    pub existentials: Vec<String>,
}

impl MeaningPostulate {
    /// Checks the Horn shape, the level tag, the weight and variable usage.
    pub fn validate(&self) -> Result<(), String> {
        if !matches!(self.level, Level::L2 | Level::L3) {
            return Err("postulate level must be L2 or L3".into());
        }
        if !(self.weight > 0.0 && self.weight.is_finite()) {
            return Err("weight must be positive".into());
        }
        if self.body.is_empty() {
            return Err("postulate body is empty".into());
        }
        let body_vars: Vec<&str> = self.body.iter().flat_map(|a| a.variables()).collect();
        for v in self.head.variables() {
            let declared = self.existentials.iter().any(|e| e == v);
            let bound = body_vars.contains(&v);
            if !declared && !bound {
                return Err(format!("head variable {v} is neither in the body nor in exists(...)"));
            }
            if declared && bound {
                return Err(format!("existential {v} also occurs in the body"));
            }
        }
        for e in &self.existentials {
            if !self.head.variables().contains(&e.as_str()) {
                return Err(format!("existential {e} does not occur in the head"));
            }
        }
        for c in &self.conditions {
            match c {
                SideCondition::Distinct(a, b) => {
                    for v in [a, b] {
                        if !body_vars.contains(&v.as_str()) && !self.existentials.contains(v) {
                            return Err(format!("condition names unknown variable {v}"));
                        }
                    }
                }
                SideCondition::Precedes(i, j) => {
                    let n = self.body.len();
                    if *i == 0 || *j == 0 || *i > n || *j > n || i == j {
                        return Err(format!("prec({i},{j}) does not name two body atoms"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Short name used in traces: the head predicate and arity.
    pub fn name(&self) -> String {
        format!("{}/{}", self.head.predicate, self.head.arity())
    }
}

impl fmt::Display for MeaningPostulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "post {} w={} {} <- ", self.level, self.weight, self.head)?;
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        let mut conds: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
        if !self.existentials.is_empty() {
            conds.push(format!("exists({})", self.existentials.join(",")));
        }
        if !conds.is_empty() {
            write!(f, " ; {}", conds.join(", "))?;
        }
        Ok(())
    }
}

/// Parses one `post` line.
pub fn parse_postulate(line: &str, levels: &dyn LevelLookup) -> Result<MeaningPostulate, SyntaxError> {
    let mut p = Cursor::new(line);
    p.skip_ws();
    if !p.eat_str("post") || !p.skip_ws() {
        return Err(p.error("expected `post`"));
    }
    let at = p.pos;
    let level: Level = p
        .take_while(|c| !c.is_whitespace())
        .parse()
        .map_err(|m: String| SyntaxError::new(line, at, m))?;
    p.skip_ws();
    if !p.eat_str("w=") {
        return Err(p.error("expected `w=<weight>`"));
    }
    let at = p.pos;
    let weight: f64 = p
        .take_while(|c| !c.is_whitespace())
        .parse()
        .map_err(|_| SyntaxError::new(line, at, "weight must be a number"))?;
    p.skip_ws();
    let head = atom(&mut p, levels)?;
    p.skip_ws();
    if !p.eat_str("<-") {
        return Err(p.error("expected `<-`"));
    }
    let mut body = Vec::new();
    loop {
        p.skip_ws();
        body.push(atom(&mut p, levels)?);
        p.skip_ws();
        if !p.eat(',') {
            break;
        }
    }
    let mut conditions = Vec::new();
    let mut existentials = Vec::new();
    if p.eat(';') {
        loop {
            p.skip_ws();
            if p.eat_str("prec(") {
                let i = index(&mut p)?;
                p.expect(',')?;
                let j = index(&mut p)?;
                p.expect(')')?;
                conditions.push(SideCondition::Precedes(i, j));
            } else if p.eat_str("exists(") {
                loop {
                    p.skip_ws();
                    existentials.push(variable(&mut p)?);
                    p.skip_ws();
                    if !p.eat(',') {
                        break;
                    }
                }
                p.expect(')')?;
            } else {
                let a = variable(&mut p)?;
                p.skip_ws();
                if !p.eat_str("!=") {
                    return Err(p.error("expected `!=`"));
                }
                p.skip_ws();
                let b = variable(&mut p)?;
                conditions.push(SideCondition::Distinct(a, b));
            }
            p.skip_ws();
            if !p.eat(',') {
                break;
            }
        }
    }
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    let post = MeaningPostulate {
        head,
        body,
        level,
        weight,
        conditions,
        existentials,
    };
    post.validate().map_err(|m| SyntaxError::new(line, 0, m))?;
    Ok(post)
}

fn atom(p: &mut Cursor<'_>, levels: &dyn LevelLookup) -> Result<Atom, SyntaxError> {
    let (pred, args) = p.atom_parts()?;
    let level = levels.level_of(&pred, args.len()).unwrap_or(Level::Aux);
    Ok(Atom::new(pred, args, level))
}

fn index(p: &mut Cursor<'_>) -> Result<usize, SyntaxError> {
    p.skip_ws();
    let at = p.pos;
    let n = p.take_while(|c| c.is_ascii_digit());
    n.parse()
        .map_err(|_| SyntaxError::new("", at, "expected a body position"))
}

fn variable(p: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    let at = p.pos;
    match p.term()? {
        crate::logic::Term::Var(v) => Ok(v),
        other => Err(SyntaxError::new(
            other.to_string(),
            at,
            "side conditions range over variables",
        )),
    }
}

/// Parses a postulate file; blank lines and `#` comments are skipped.
pub fn parse_postulates(
    text: &str,
    file: &str,
    levels: &dyn LevelLookup,
) -> Result<Vec<MeaningPostulate>, LoadError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        out.push(parse_postulate(line, levels).map_err(|e| LoadError::syntax(file, i + 1, e))?);
    }
    Ok(out)
}
