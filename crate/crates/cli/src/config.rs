//! Flat `key = value` engine configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use logdoc::parse::score::Weights;
use logdoc::prover::SearchConfig;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EngineConfig {
    pub grammar: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub schemes: Option<PathBuf>,
    pub levels: Option<PathBuf>,
    pub postulates: Option<PathBuf>,
    pub isa: Option<PathBuf>,
    pub kb: Option<PathBuf>,
    pub search: SearchConfig,
    pub weights: Weights,
}

impl EngineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).with_context(|| format!("in config file {}", path.display()))
    }

    /// Parses `key = value` lines; `#` starts a comment. Relative paths are
    /// taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut c = EngineConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", i + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            c.set(key, value, base)
                .with_context(|| format!("line {}: `{key}`", i + 1))?;
        }
        c.check()?;
        Ok(c)
    }

    /// Sets one key. Numeric keys are checked for syntax only; call
    /// [`EngineConfig::check`] afterwards.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || Some(base.join(value));
        let s = &mut self.search;
        match key {
            "grammar" => self.grammar = path(),
            "lexicon" => self.lexicon = path(),
            "schemes" => self.schemes = path(),
            "levels" => self.levels = path(),
            "postulates" => self.postulates = path(),
            "isa" => self.isa = path(),
            "kb" => self.kb = path(),
            "M" | "m" => s.m = value.parse()?,
            "N" | "n" => s.n = value.parse()?,
            "O" | "o" => s.o = value.parse()?,
            "budget" => s.budget = value.parse()?,
            "depth" => s.depth = value.parse()?,
            "theta" => s.theta = value.parse()?,
            "stage_max" => s.stage_max = value.parse().map_err(anyhow::Error::msg)?,
            "w_RA" => self.weights.right_association = value.parse()?,
            "w_MA" => self.weights.minimal_attachment = value.parse()?,
            "w_SEL" => self.weights.selectional = value.parse()?,
            other => bail!("unknown key `{other}`"),
        }
        Ok(())
    }

    /// Threshold order and existence of every named file.
    pub fn check(&self) -> Result<()> {
        self.search.validate().map_err(anyhow::Error::msg)?;
        for p in [
            &self.grammar,
            &self.lexicon,
            &self.schemes,
            &self.levels,
            &self.postulates,
            &self.isa,
        ]
        .into_iter()
        .flatten()
        {
            if !p.is_file() {
                bail!("file not found: {}", p.display());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = EngineConfig::parse("# thresholds\nM = 30\nN=20 # more\nO = 10\ntheta = 0.5\nw_RA = 3\n", Path::new("")).unwrap();
        assert_eq!((c.search.m, c.search.n, c.search.o), (30, 20, 10));
        assert_eq!(c.search.theta, 0.5);
        assert_eq!(c.weights.right_association, 3.0);
    }

    #[test]
    fn rejects_bad_thresholds_and_keys() {
        assert!(EngineConfig::parse("N = 20\n", Path::new("")).is_err());
        assert!(EngineConfig::parse("colour = red\n", Path::new("")).is_err());
        assert!(EngineConfig::parse("M 15\n", Path::new("")).is_err());
        assert!(EngineConfig::parse("budget = lots\n", Path::new("")).is_err());
    }

    #[test]
    fn missing_files_are_reported() {
        let e = EngineConfig::parse("lexicon = /no/such/lexicon.txt\n", Path::new("")).unwrap_err();
        assert!(format!("{e:#}").contains("/no/such/lexicon.txt"));
    }
}
