//! Search stages and the variable-depth thresholds.

use std::fmt;
use std::str::FromStr;

use crate::parse::score::DEFAULT_THETA;

/// Stages of the variable-depth search, in the only order the controller
/// visits them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    DirectFragment,
    DirectDocument,
    PostulatesL2,
    PostulatesL3,
    Inheritance,
    Decomposition,
    KeywordFallback,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::DirectFragment,
        Stage::DirectDocument,
        Stage::PostulatesL2,
        Stage::PostulatesL3,
        Stage::Inheritance,
        Stage::Decomposition,
        Stage::KeywordFallback,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Stage::DirectFragment => "DirectFragment",
            Stage::DirectDocument => "DirectDocument",
            Stage::PostulatesL2 => "PostulatesL2",
            Stage::PostulatesL3 => "PostulatesL3",
            Stage::Inheritance => "Inheritance",
            Stage::Decomposition => "Decomposition",
            Stage::KeywordFallback => "KeywordFallback",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Stage {
    type Err = String;

    /// Accepts the label in any case, with or without `-`/`_` separators.
    fn from_str(s: &str) -> Result<Self, String> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_lowercase();
        Stage::ALL
            .into_iter()
            .find(|st| st.label().to_lowercase() == norm)
            .ok_or_else(|| {
                let names: Vec<&str> = Stage::ALL.iter().map(|s| s.label()).collect();
                format!("unknown stage `{s}` (expected one of {})", names.join(", "))
            })
    }
}

pub const DEFAULT_M: usize = 15;
pub const DEFAULT_N: usize = 10;
pub const DEFAULT_O: usize = 5;
pub const DEFAULT_BUDGET: u32 = 10_000;
pub const DEFAULT_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Result list size.
    pub m: usize,
    /// Relax with postulates while fewer than `n` passages are found.
    pub n: usize,
    /// Try inheritance and decomposition while fewer than `o` are found.
    pub o: usize,
    /// Postulate applications allowed per stage.
    pub budget: u32,
    /// Postulate applications allowed along one chain of subgoals.
    pub depth: u32,
    /// Pruning threshold used when translating the query.
    pub theta: f64,
    /// Per-stage switches, indexed by [`Stage::index`].
    pub enabled: [bool; 7],
    /// Stages after this one are never run.
    pub stage_max: Stage,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            m: DEFAULT_M,
            n: DEFAULT_N,
            o: DEFAULT_O,
            budget: DEFAULT_BUDGET,
            depth: DEFAULT_DEPTH,
            theta: DEFAULT_THETA,
            enabled: [true; 7],
            stage_max: Stage::KeywordFallback,
        }
    }
}

impl SearchConfig {
    /// Requires `0 < o < n < m` and θ in `[0, 1]`.
    pub fn validate(&self) -> Result<(), String> {
        if !(0 < self.o && self.o < self.n && self.n < self.m) {
            return Err(format!(
                "thresholds must satisfy 0 < O < N < M (got M={}, N={}, O={})",
                self.m, self.n, self.o
            ));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(format!("theta must lie in [0, 1] (got {})", self.theta));
        }
        Ok(())
    }

    pub fn allows(&self, stage: Stage) -> bool {
        self.enabled[stage.index()] && stage <= self.stage_max
    }

    pub fn set_enabled(&mut self, stage: Stage, on: bool) {
        self.enabled[stage.index()] = on;
    }
}
