//! Context-free grammar rules, one per line: `S -> NP VP @sentence`.

use crate::error::LoadError;
use crate::parse::lexicon::strip_comment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarRule {
    pub lhs: String,
    pub rhs: Vec<String>,
    /// Name of the semantic builder that composes this constituent.
    pub builder: String,
}

impl GrammarRule {
    pub fn new(lhs: &str, rhs: &[&str], builder: &str) -> Self {
        GrammarRule {
            lhs: lhs.to_string(),
            rhs: rhs.iter().map(|s| s.to_string()).collect(),
            builder: builder.to_string(),
        }
    }

    /// `X -> X A`: an optional modifier `A` adjoined to a host `X`.
    pub fn is_adjunction(&self) -> bool {
        self.rhs.len() == 2 && self.rhs[0] == self.lhs
    }
}

#[derive(Debug, Clone, Default)]
pub struct Grammar {
    rules: Vec<GrammarRule>,
}

impl Grammar {
    pub fn new(rules: Vec<GrammarRule>) -> Self {
        Grammar { rules }
    }

    pub fn rules(&self) -> &[GrammarRule] {
        &self.rules
    }

    pub fn rule(&self, id: usize) -> &GrammarRule {
        &self.rules[id]
    }

    /// Categories that accept `attachee` by adjunction.
    pub fn hosts_for(&self, attachee: &str) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .rules
            .iter()
            .filter(|r| r.is_adjunction() && r.rhs[1] == attachee)
            .map(|r| r.lhs.as_str())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Parses a grammar file; `known_builders` lists the accepted builder ids.
    pub fn parse(text: &str, file: &str, known_builders: &[&str]) -> Result<Self, LoadError> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| LoadError::at(file, i + 1, raw, m);
            let (lhs, rest) = line.split_once("->").ok_or_else(|| err("expected `->`"))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(err("left-hand side must be a single category"));
            }
            let (rhs, builder) = rest
                .rsplit_once('@')
                .ok_or_else(|| err("expected `@builder_id`"))?;
            let builder = builder.trim();
            if !known_builders.contains(&builder) {
                return Err(err(&format!("unknown semantic builder `{builder}`")));
            }
            let rhs: Vec<String> = rhs.split_whitespace().map(str::to_string).collect();
            if rhs.is_empty() {
                return Err(err("empty right-hand side"));
            }
            rules.push(GrammarRule {
                lhs: lhs.to_string(),
                rhs,
                builder: builder.to_string(),
            });
        }
        Ok(Grammar { rules })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rules() {
        let g = Grammar::parse(
            "# demo\nS -> NP VP @sentence\nNP -> NP PP @np_pp\nVP -> VP PP @vp_pp\n",
            "g",
            &["sentence", "np_pp", "vp_pp"],
        )
        .unwrap();
        assert_eq!(g.rules().len(), 3);
        assert_eq!(g.rule(0).rhs, ["NP", "VP"]);
        assert!(g.rule(1).is_adjunction());
        assert!(!g.rule(0).is_adjunction());
        assert_eq!(g.hosts_for("PP"), ["NP", "VP"]);
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(Grammar::parse("S -> @sentence", "g", &["sentence"]).is_err());
        assert!(Grammar::parse("S NP VP @sentence", "g", &["sentence"]).is_err());
        assert!(Grammar::parse("S -> NP VP @nope", "g", &["sentence"]).is_err());
        assert!(Grammar::parse("S -> NP VP", "g", &["sentence"]).is_err());
    }
}
