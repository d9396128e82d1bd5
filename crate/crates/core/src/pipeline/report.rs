use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ChangeShape, Stage};
use crate::symbolic::{EquationSystem, Substitution};

/// Sizes of a generated system and of its solution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemCounts {
    /// Every coefficient equation produced, zeros included.
    pub generated: usize,
    /// Excluding identically-zero equations.
    pub nonzero: usize,
    /// Distinct after normalization.
    pub distinct: usize,
    pub solved: usize,
    pub residual: usize,
}

impl SystemCounts {
    pub fn of_system(sys: &EquationSystem) -> Self {
        SystemCounts {
            generated: sys.generated_count(),
            nonzero: sys.nonzero_count(),
            distinct: sys.len(),
            solved: 0,
            residual: 0,
        }
    }

    pub fn of(sys: &EquationSystem, sigma: &Substitution) -> Self {
        SystemCounts { solved: sigma.len(), residual: sigma.residual().len(), ..Self::of_system(sys) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedCheck {
    pub parameter: String,
    pub published: String,
    pub solved: String,
    /// Published and solved values agree modulo the solved `b` relations.
    pub agrees: bool,
    /// The published value alone meets the stage targets.
    pub meets_targets: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub label: String,
    pub stage: Stage,
    pub shape: Option<ChangeShape>,
    /// The differentiated Cartan-lemma rules, reported at init.
    pub rule_equations: Option<SystemCounts>,
    pub system: SystemCounts,
    pub parameters: BTreeMap<String, String>,
    pub targets: Vec<String>,
    pub published: Vec<PublishedCheck>,
    pub added: Vec<String>,
    pub dropped: Vec<String>,
    pub millis: u128,
}

impl StageRecord {
    pub fn new(label: &str, stage: Stage) -> Self {
        StageRecord {
            label: label.to_string(),
            stage,
            shape: None,
            rule_equations: None,
            system: SystemCounts::default(),
            parameters: BTreeMap::new(),
            targets: Vec::new(),
            published: Vec::new(),
            added: Vec::new(),
            dropped: Vec::new(),
            millis: 0,
        }
    }
}

/// One entry that failed to match, with what is left after reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub matches: bool,
    /// The differentiated final relation list on its own.
    pub final_equations: SystemCounts,
    pub solved_symbols: usize,
    pub residual_equations: usize,
    /// Final-list relations that the earlier stages did not already imply.
    pub not_previously_implied: Vec<String>,
    pub display_diff: Vec<EntryDiff>,
    pub renaming_diff: Vec<EntryDiff>,
    /// Span dimension of the entries of the final `Ω`.
    pub omega_rank: usize,
    /// Span dimension of the entries of the standard matrix.
    pub standard_rank: usize,
}

/// Machine-readable record of a whole run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub k: usize,
    pub stages: Vec<StageRecord>,
    pub verdict: Option<Verdict>,
    pub notes: Vec<String>,
    pub millis: u128,
}

impl RunReport {
    pub const SCHEMA: &'static str = "tightframe/run-report/v1";
}
