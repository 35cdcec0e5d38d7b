//! Machine-readable verification results shared by the checking suites.

use serde::{Deserialize, Serialize};

use crate::spherical::SphericalJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub identity: String,
    pub params: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<SphericalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<SphericalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<SphericalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, params: impl Into<String>, pass: bool) -> Self {
        VerificationReport {
            identity: identity.into(),
            params: params.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            lhs: None,
            rhs: None,
            difference: None,
            note: None,
        }
    }

    pub fn skipped(identity: impl Into<String>, params: impl Into<String>, note: impl Into<String>) -> Self {
        VerificationReport { status: Status::Skipped, note: Some(note.into()), ..Self::new(identity, params, true) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// True when no report failed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}
