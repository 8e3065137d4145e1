//! Finite-horizon classifiers for the hypercyclicity hierarchy of weighted backward
//! shifts, and exact verification suites for product identities.
//!
//! The classical conditions are asymptotic (`sup`, `lim`, `inf` over all of `ℕ`).
//! Here they are replaced by thresholds and tail windows inside a declared horizon
//! and reported as evidence, never as proof.

mod classify;
mod verify;

pub use classify::{
    check_hypercyclic, check_mixing, check_strong_necessary, check_strong_sufficient, check_ultra_conditions,
    lattice_candidate, CandidateOrder, GrowthProfile, LatticeChoice, ShProfile,
};
pub use verify::{
    sample_triples, verify_block_facts, verify_diamond_identities, verify_lemma_comparability,
    verify_product_formula, DiamondSuite, FLOAT_LOG2_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log2::Log2Value;
use crate::products::ProductEngine;

/// Version of the report JSON layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Finite surrogates for the limits in the weight criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Largest `n` examined (`H`).
    pub horizon: usize,
    /// Largest starting index `i` examined in infimum scans.
    pub i_max: usize,
    /// `log2 T`: products at or above `T` count as "large".
    pub growth_log2: f64,
    /// Tail window `W` for limit surrogates; `None` means `H / 4`.
    pub tail_window: Option<usize>,
    /// `log2 ε_d`: infima below `ε_d` count as "decayed".
    pub decay_log2: f64,
}

impl ClassifierConfig {
    pub const DEFAULT_GROWTH_LOG2: f64 = 6.0;
    pub const DEFAULT_DECAY_LOG2: f64 = -10.0;

    pub fn new(horizon: usize, i_max: usize) -> Self {
        ClassifierConfig {
            horizon,
            i_max,
            growth_log2: Self::DEFAULT_GROWTH_LOG2,
            tail_window: None,
            decay_log2: Self::DEFAULT_DECAY_LOG2,
        }
    }

    pub fn with_growth_log2(mut self, t: f64) -> Self {
        self.growth_log2 = t;
        self
    }

    pub fn with_decay_log2(mut self, d: f64) -> Self {
        self.decay_log2 = d;
        self
    }

    pub fn with_tail_window(mut self, w: usize) -> Self {
        self.tail_window = Some(w);
        self
    }

    /// Effective `W`, at least 1 and at most `H`.
    pub fn tail(&self) -> usize {
        self.tail_window.unwrap_or(self.horizon / 4).clamp(1, self.horizon.max(1))
    }

    /// Checks positivity and that every window `M_i^n` with `i ≤ i_max`, `n ≤ H`
    /// lies inside the engine.
    pub fn validate(&self, engine: &ProductEngine) -> Result<()> {
        if self.horizon == 0 || self.i_max == 0 {
            return Err(Error::InvalidArgument("horizon and i_max must be positive".into()));
        }
        if !self.growth_log2.is_finite() || !self.decay_log2.is_finite() {
            return Err(Error::InvalidArgument("thresholds must be finite".into()));
        }
        if self.tail_window == Some(0) {
            return Err(Error::InvalidArgument("tail window must be positive".into()));
        }
        let last = self
            .horizon
            .checked_add(self.i_max - 1)
            .ok_or(Error::Overflow("classifier horizon"))?;
        engine.require(last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    EvidenceFor,
    EvidenceAgainst,
    Inconclusive,
}

/// A datum backing a verdict. `Window` witnesses can be recomputed from an engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `M_i^n` with its log2.
    Window { role: String, i: usize, n: usize, log2: Log2Value },
    Scalar { role: String, value: f64 },
    Indices { role: String, values: Vec<usize> },
    /// Outcome of a search for `n` at tolerance `eps` and index cap `cap`.
    Search { eps: f64, cap: usize, n: Option<usize>, route: Option<String> },
    /// A failed identity `lhs = rhs` at the given arguments.
    Identity { identity: String, args: Vec<usize>, lhs: Log2Value, rhs: Log2Value },
}

impl Witness {
    pub fn window(role: &str, i: usize, n: usize, log2: Log2Value) -> Self {
        Witness::Window { role: role.into(), i, n, log2 }
    }

    pub fn scalar(role: &str, value: f64) -> Self {
        Witness::Scalar { role: role.into(), value }
    }

    pub fn role(&self) -> Option<&str> {
        match self {
            Witness::Window { role, .. } | Witness::Scalar { role, .. } | Witness::Indices { role, .. } => {
                Some(role)
            }
            _ => None,
        }
    }

    /// Recomputes a `Window` witness; other kinds are accepted as-is.
    pub fn recheck(&self, engine: &ProductEngine) -> Result<bool> {
        match self {
            Witness::Window { i, n, log2, .. } => Ok(engine.product(*i, *n)?.approx_eq(log2, 0.0)),
            _ => Ok(true),
        }
    }
}

/// Number of instances checked for one identity and how many failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub property: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub config: serde_json::Value,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Tally>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(property: &str, verdict: Verdict, config: serde_json::Value, exact: bool) -> Self {
        Report {
            property: property.into(),
            verdict,
            witnesses: Vec::new(),
            config,
            exact,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn witness(&self, role: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.role() == Some(role))
    }

    /// True when every tallied identity held (verification suites).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|t| t.failed == 0) && self.verdict != Verdict::EvidenceAgainst
    }

    /// Name of the first identity with a failure.
    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|t| t.failed > 0).map(|t| t.name.as_str())
    }
}

fn horizon_note(h: usize) -> String {
    format!("verified up to horizon {h}; finite evidence, not a proof")
}
