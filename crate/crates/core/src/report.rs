//! Verdict types shared by every checker in the library.
//!
//! Checkers are sampled falsifiers: a passing report is evidence at the
//! recorded sample count and seed, never a proof. A failing report must
//! carry a witness so the failure can be replayed.

use serde::Serialize;

/// Three-valued check verdict. `Inconclusive` is reserved for sampling
/// schedules that exhausted their budget without meeting a convergence
/// rule; it is distinct from `Fail` and maps to its own exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one named check over a sampled population.
///
/// `worst_margin` is signed: non-negative means the most extreme sample
/// still satisfied the property, negative measures the deepest violation.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub outcome: CheckOutcome,
    pub worst_margin: f64,
    /// Serialized inputs of the worst case. Always present on failure.
    pub witness: Option<String>,
    pub samples: usize,
    pub seed: u64,
}

impl VerificationReport {
    pub fn passing(check: impl Into<String>, worst_margin: f64, samples: usize, seed: u64) -> Self {
        Self {
            check: check.into(),
            outcome: CheckOutcome::Pass,
            worst_margin,
            witness: None,
            samples,
            seed,
        }
    }

    /// A passing report that still records its extremal sample.
    pub fn passing_with_witness(
        check: impl Into<String>,
        worst_margin: f64,
        witness: impl Into<String>,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            witness: Some(witness.into()),
            ..Self::passing(check, worst_margin, samples, seed)
        }
    }

    /// The witness argument is mandatory here by construction: a failure
    /// without a replayable worst case is useless.
    pub fn failing(
        check: impl Into<String>,
        worst_margin: f64,
        witness: impl Into<String>,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            check: check.into(),
            outcome: CheckOutcome::Fail,
            worst_margin,
            witness: Some(witness.into()),
            samples,
            seed,
        }
    }

    pub fn inconclusive(
        check: impl Into<String>,
        witness: impl Into<String>,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            check: check.into(),
            outcome: CheckOutcome::Inconclusive,
            worst_margin: f64::NAN,
            witness: Some(witness.into()),
            samples,
            seed,
        }
    }

    /// Convenience used all over: pass/fail from a margin, witness kept
    /// either way.
    pub fn from_margin(
        check: impl Into<String>,
        worst_margin: f64,
        witness: impl Into<String>,
        samples: usize,
        seed: u64,
    ) -> Self {
        let check = check.into();
        if worst_margin >= 0.0 {
            Self::passing_with_witness(check, worst_margin, witness, samples, seed)
        } else {
            Self::failing(check, worst_margin, witness, samples, seed)
        }
    }

    pub fn pass(&self) -> bool {
        self.outcome == CheckOutcome::Pass
    }
}

/// Tracks the worst (smallest) margin seen over a sample sweep together
/// with a description of the sample that produced it.
#[derive(Debug, Clone)]
pub struct WorstCase {
    pub margin: f64,
    pub witness: String,
}

impl WorstCase {
    pub fn new() -> Self {
        Self {
            margin: f64::INFINITY,
            witness: String::new(),
        }
    }

    pub fn observe(&mut self, margin: f64, witness: impl FnOnce() -> String) {
        if margin < self.margin {
            self.margin = margin;
            self.witness = witness();
        }
    }

    pub fn into_report(self, check: impl Into<String>, samples: usize, seed: u64) -> VerificationReport {
        let margin = if self.margin.is_finite() { self.margin } else { 0.0 };
        if self.witness.is_empty() {
            VerificationReport::passing(check, margin, samples, seed)
        } else {
            VerificationReport::from_margin(check, margin, self.witness, samples, seed)
        }
    }
}

impl Default for WorstCase {
    fn default() -> Self {
        Self::new()
    }
}
