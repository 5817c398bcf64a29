//! Serializable reports and their canonical JSON rendering.
//!
//! Canonical JSON has lexicographically sorted object keys at every level,
//! two-space indentation and a trailing newline. Wall-clock timings are kept
//! out of reports so equal inputs give byte-identical output.

use serde::Serialize;

use crate::superalgebra::SuperAlgebra;

/// One named verification verdict.
///
/// Advisory checks are reported but do not decide an overall verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            witness,
            advisory: false,
        }
    }

    pub fn passed(name: impl Into<String>) -> Self {
        Check::new(name, true, None)
    }

    pub fn failed(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(name, false, Some(witness.into()))
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }
}

/// Whether every non-advisory check passed.
pub fn gating_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass || c.advisory)
}

/// How a report names the algebra it is about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraRef {
    pub name: String,
    pub hash: String,
}

impl From<&SuperAlgebra> for AlgebraRef {
    fn from(a: &SuperAlgebra) -> Self {
        AlgebraRef {
            name: a.name().to_string(),
            hash: a.canonical_hash(),
        }
    }
}

/// Renders any report in canonical form.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's Value uses a sorted map, which fixes the key order
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}
