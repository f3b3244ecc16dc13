//! Pass/fail records shared by the validators.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub check: String,
    pub passed: bool,
    /// Number of relations, tuples or equations examined.
    pub examined: usize,
    /// First failure, with the offending input and its residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ValidationReport {
    pub fn pass(check: impl Into<String>, examined: usize) -> Self {
        ValidationReport { check: check.into(), passed: true, examined, witness: None }
    }

    pub fn fail(check: impl Into<String>, examined: usize, witness: impl Into<String>) -> Self {
        ValidationReport { check: check.into(), passed: false, examined, witness: Some(witness.into()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Untested,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}
