//! Bound verification and growth-model fitting for `phi` tables.
//!
//! Every verdict is a pure function of a [`CountTable`] and is decided by an
//! exact comparison. Statements about limits are checked only as finite-range
//! surrogates, and reports say which range was sampled.

mod bounds;
mod counterexample;
mod examples;
mod fit;

pub use bounds::{
    binomial, check_bounds, check_bounds_with, check_corn1, deviation_psi, BoundCheck, CorN1Report,
    HilbertBound, PsiReport, PsiRow, Slack,
};
pub use counterexample::{counterexample_semigroup, Counterexample, TruncatedCount};
pub use examples::{check_example_inequalities, check_example_table};
pub use fit::{fit_growth, GrowthModel, ModelKind};

use serde::Serialize;

/// Bound checks over one count table, plus an optional fitted model.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub subject: String,
    pub n_max: u64,
    pub bounds: Vec<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<GrowthModel>,
    pub pass: bool,
    pub note: String,
}

impl GrowthReport {
    pub fn new(subject: impl Into<String>, n_max: u64, bounds: Vec<BoundCheck>) -> Self {
        let pass = bounds.iter().all(|b| b.pass);
        GrowthReport {
            subject: subject.into(),
            n_max,
            bounds,
            model: None,
            pass,
            note: SURROGATE_NOTE.to_string(),
        }
    }

    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Plain-text summary, one line per bound.
    pub fn summary(&self) -> String {
        let mut out = format!("{} (n <= {})\n", self.subject, self.n_max);
        for b in &self.bounds {
            out.push_str(&b.summary_line());
            out.push('\n');
        }
        if let Some(m) = &self.model {
            out.push_str(&m.summary_line());
            out.push('\n');
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

pub(crate) const SURROGATE_NOTE: &str =
    "finite-range check: verdicts hold for the sampled n only and certify no limit";
